"""
Octree decomposition of a color space (quadtree in 2-D, binary tree in 1-D).

Continuous boxes are searched cell by cell; discrete sample sets carry the
indices of the samples inside each cell. Cells are always cubes, so the root of
an anisotropic box is padded and the padding is dropped by ``cell_is_live``.
"""
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from .colorspace import ContinuousBox


@dataclass(frozen=True, eq=False)
class SpatialCell:
    center: np.ndarray
    half_width: float
    key: tuple = ()
    indices: Optional[np.ndarray] = None
    representative: Optional[int] = None

    @property
    def count(self):
        return 0 if self.indices is None else len(self.indices)


@lru_cache(maxsize=None)
def child_offsets(dim):
    """(2**dim, dim) array of -1/+1 signs; bit k of the row number picks the side on axis k. Read-only."""
    offsets = np.array([[1.0 if (code >> k) & 1 else -1.0 for k in range(dim)] for code in range(2 ** dim)])
    offsets.setflags(write=False)
    return offsets


def _representative(points, indices, center):
    if len(indices) == 0:
        return None
    d2 = np.sum((points[indices] - center) ** 2, axis=1)
    return int(indices[np.argmin(d2)])


def root_cell(space):
    """Smallest cube, centered on the bounding box, covering the space."""
    if isinstance(space, ContinuousBox):
        center = (space.lower + space.upper) / 2
        return SpatialCell(center, float(np.max(space.upper - space.lower) / 2))
    lower, upper = space.points.min(axis=0), space.points.max(axis=0)
    center = (lower + upper) / 2
    half_width = float(np.max(upper - lower) / 2) or 1.0
    indices = np.arange(len(space.points))
    return SpatialCell(center, half_width, (), indices, _representative(space.points, indices, center))


def subdivide(cell, space=None):
    """
    The 2**d children of a cell. In discrete mode each sample of the parent
    goes to exactly one child; samples on a dividing plane go to the child on
    the lower side.
    """
    dim = len(cell.center)
    half = cell.half_width / 2
    centers = cell.center + child_offsets(dim) * half
    if cell.indices is None:
        return tuple(SpatialCell(c, half, cell.key + (code,)) for code, c in enumerate(centers))
    if space is None:
        raise ValueError("subdividing a discrete cell needs its color space")
    points = space.points
    sub = points[cell.indices]
    codes = np.zeros(len(sub), dtype=np.int64)
    for k in range(dim):
        codes |= (sub[:, k] > cell.center[k]).astype(np.int64) << k
    children = []
    for code, center in enumerate(centers):
        indices = cell.indices[codes == code]
        children.append(SpatialCell(center, half, cell.key + (code,), indices, _representative(points, indices, center)))
    return tuple(children)


def cell_is_live(cell, space):
    """Does the cell meet the color space (box interior overlap, or at least one sample)?"""
    if isinstance(space, ContinuousBox):
        return bool(live_mask(cell.center[None, :], cell.half_width, space)[0])
    return cell.count > 0


def candidate_point(cell, space):
    """Representative color of a live cell: its center clipped into the box, or its sample nearest the center."""
    if isinstance(space, ContinuousBox):
        return np.clip(cell.center, space.lower, space.upper)
    if cell.representative is None:
        raise ValueError("an empty cell has no candidate point")
    return space.points[cell.representative].copy()


def live_mask(centers, half_width, space):
    return np.all((centers - half_width < space.upper) & (centers + half_width > space.lower), axis=1)


def subdivide_many(centers, half_width):
    """Children centers of many same-size cells, parents in order, children in code order."""
    dim = centers.shape[1]
    half = half_width / 2
    return (centers[:, None, :] + child_offsets(dim)[None, :, :] * half).reshape(-1, dim), half


class Octree:
    """Lazily refined octree over a discrete sample set; children are memoised per cell."""

    def __init__(self, space):
        self.space = space
        self.root = root_cell(space)
        self._children = {}

    def children(self, cell):
        kids = self._children.get(cell.key)
        if kids is None:
            kids = subdivide(cell, self.space)
            self._children[cell.key] = kids
        return kids

    def leaves(self, depth):
        """Non-empty cells ``depth`` levels below the root (for inspection and tests)."""
        level = [self.root]
        for _ in range(depth):
            level = [child for cell in level for child in self.children(cell) if child.count]
        return level


def octree_for(space):
    """The octree of a discrete space, built once and kept on the space."""
    tree = space.__dict__.get("_octree")
    if tree is None:
        tree = Octree(space)
        object.__setattr__(space, "_octree", tree)
    return tree
