"""
MaxMin color assignment on a dual collision graph.

``embed_one_node`` places one dual node as far as possible (in weighted color
distance) from the current colors of its neighbours with a branch-and-bound
search over the octree of the color space. ``clarify`` sweeps the nodes of
every component repeatedly until the pair (mindist, sumdist) stops improving.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from .colorspace import ContinuousBox
from .conf import get_setting
from .spatial_index import live_mask, octree_for, root_cell, subdivide_many
from .validators import validate_positive

logger = logging.getLogger(__name__)

# discrete cells with at most this many samples are evaluated sample by sample
LEAF_SAMPLES = 8
REL_TOL = 1e-12


@dataclass(frozen=True)
class OptimizerConfig:
    rng_seed: int
    epsilon: float = 1e-2
    random_starts: Optional[int] = None  # None: 10 for small dual graphs, else 1
    max_outer_iterations: int = 100

    def __post_init__(self):
        validate_positive(self.epsilon, "epsilon")
        if self.random_starts is not None and self.random_starts < 1:
            raise ValueError("random_starts must be at least 1")
        if self.max_outer_iterations < 1:
            raise ValueError("max_outer_iterations must be at least 1")

    def starts_for(self, dual_size):
        if self.random_starts is not None:
            return self.random_starts
        return 10 if dual_size <= get_setting("SMALL_GRAPH_EDGES") else 1


@dataclass(frozen=True, eq=False)
class WeightedColorSet:
    points: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        points = np.asarray(self.points, dtype=float)
        weights = np.asarray(self.weights, dtype=float).reshape(-1)
        if points.ndim == 1:
            points = points.reshape(len(weights), -1)
        if len(points) != len(weights):
            raise ValueError("one weight per color is required")
        if not np.all(np.isfinite(weights)) or np.any(weights <= 0):
            raise ValueError("weights must be positive and finite")
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "weights", weights)

    @classmethod
    def from_pairs(cls, pairs, dim=None):
        pairs = list(pairs)
        if not pairs:
            return cls(np.empty((0, dim or 0)), np.empty(0))
        return cls(np.array([p for p, _ in pairs], dtype=float), np.array([w for _, w in pairs], dtype=float))

    def __len__(self):
        return len(self.weights)


class EmbedResult(NamedTuple):
    point: np.ndarray
    distance: float
    index: Optional[int] = None


@dataclass
class ColorAssignment:
    colors: dict
    mindist: float
    sumdist: float
    sweeps: dict = field(default_factory=dict)

    def coords(self):
        return np.array([self.colors[i].coords for i in sorted(self.colors)])


def point_set_distances(points, color_set):
    """``dist(x, C) = min_y w_y |x - y|`` for every row x of ``points``; +inf for an empty C."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    if len(color_set) == 0:
        return np.full(len(points), np.inf)
    targets = color_set.points
    sq = np.zeros((len(points), len(targets)))
    for k in range(points.shape[1]):
        diff = points[:, None, k] - targets[None, :, k]
        sq += diff * diff
    return np.min(np.sqrt(sq) * color_set.weights[None, :], axis=1)


def point_set_distance(x, color_set):
    return float(point_set_distances(np.atleast_1d(np.asarray(x, dtype=float))[None, :], color_set)[0])


def _embed_continuous(color_set, space, epsilon, prune, incumbent=None):
    root = root_cell(space)
    reach = float(color_set.weights.max()) * math.sqrt(space.dim)
    best_point = np.clip(root.center, space.lower, space.upper)
    best = point_set_distance(best_point, color_set)
    if incumbent is not None:
        incumbent = np.clip(np.asarray(incumbent, dtype=float), space.lower, space.upper)
        value = point_set_distance(incumbent, color_set)
        if value > best:
            best, best_point = value, incumbent
    centers, half_width = root.center[None, :], root.half_width
    # the queue is consumed one generation at a time, oldest cells first
    while len(centers) and 2 * half_width >= epsilon:
        centers, half_width = subdivide_many(centers, half_width)
        centers = centers[live_mask(centers, half_width, space)]
        if not len(centers):
            break
        candidates = np.clip(centers, space.lower, space.upper)
        dists = point_set_distances(candidates, color_set)
        k = int(np.argmax(dists))
        if dists[k] > best:
            best, best_point = float(dists[k]), candidates[k]
        if prune:
            centers = centers[~(dists + reach * half_width < best)]
    return EmbedResult(best_point.copy(), best)


def _embed_discrete(color_set, space, prune):
    tree = octree_for(space)
    points = space.points
    reach = float(color_set.weights.max()) * math.sqrt(space.dim)
    best = [-np.inf, None]

    def consider(indices):
        dists = point_set_distances(points[indices], color_set)
        k = int(np.argmax(dists))
        value, index = float(dists[k]), int(indices[k])
        if value > best[0] or (value == best[0] and index < best[1]):
            best[:] = [value, index]

    root = tree.root
    if root.count <= LEAF_SAMPLES:
        consider(root.indices)
        return EmbedResult(points[best[1]].copy(), best[0], best[1])

    consider(np.array([root.representative]))
    queue = [root]
    while queue:
        following = []
        for cell in queue:
            kids = [kid for kid in tree.children(cell) if kid.count]
            if prune and kids:
                centers = np.array([kid.center for kid in kids])
                bounds = point_set_distances(centers, color_set) + reach * kids[0].half_width
                slack = 1e-9 * max(1.0, abs(best[0]))
                kids = [kid for kid, bound in zip(kids, bounds) if not bound + slack < best[0]]
            for kid in kids:
                if kid.count <= LEAF_SAMPLES:
                    consider(kid.indices)
                else:
                    consider(np.array([kid.representative]))
                    following.append(kid)
        queue = following
    return EmbedResult(points[best[1]].copy(), best[0], best[1])


def embed_one_node(color_set, space, epsilon=1e-2, prune=True, incumbent=None):
    """
    Color of the space farthest from ``color_set`` (weighted point-set
    distance).

    Continuous boxes are refined until cells are narrower than ``epsilon``;
    the result is then within ``w_max * sqrt(d) * epsilon / 2`` of the optimum.
    Discrete spaces are refined down to single samples, which makes the
    result the exact maximiser (lowest sample index on ties).

    ``incumbent`` (continuous boxes only) seeds the search with a known
    point; it is returned unless a strictly farther cell candidate is found.
    """
    if len(color_set) == 0:
        index = None if isinstance(space, ContinuousBox) else 0
        return EmbedResult(space.default_point(), math.inf, index)
    if isinstance(space, ContinuousBox):
        return _embed_continuous(color_set, space, epsilon, prune, incumbent)
    return _embed_discrete(color_set, space, prune)


def _improves(new, old):
    """Is (mindist, sumdist) ``new`` lexicographically better than ``old``?"""
    if not math.isclose(new[0], old[0], rel_tol=REL_TOL):
        return new[0] > old[0]
    return new[1] > old[1] and not math.isclose(new[1], old[1], rel_tol=REL_TOL)


class _Neighbourhood:
    """Neighbour positions and weights of the nodes of one component."""

    def __init__(self, dual, nodes):
        self.nodes = list(nodes)
        position = {node: k for k, node in enumerate(self.nodes)}
        self.index, self.weights = [], []
        for node in self.nodes:
            pairs = dual.neighbors(node)
            self.index.append(np.array([position[j] for j, _ in pairs], dtype=np.int64))
            self.weights.append(np.array([w for _, w in pairs], dtype=float))

    def color_set(self, k, coords):
        return WeightedColorSet(coords[self.index[k]], self.weights[k])

    def objective(self, coords):
        mindist, sumdist = math.inf, 0.0
        for k in range(len(self.nodes)):
            if not len(self.index[k]):
                continue
            d = np.sqrt(np.sum((coords[self.index[k]] - coords[k]) ** 2, axis=1)) * self.weights[k]
            mindist = min(mindist, float(d.min()))
            sumdist += float(d.min())
        return mindist, sumdist


def clarify_component(dual, nodes, space, cfg, rng):
    """
    Optimise the colors of one connected component of the dual graph.

    Returns ``(colors, (mindist, sumdist), sweeps)`` for the best sweep seen;
    ``colors`` is an array aligned with ``nodes``.
    """
    hood = _Neighbourhood(dual, nodes)
    if len(hood.nodes) == 1:
        return space.black_point()[None, :], (math.inf, 0.0), 0
    coords = space.random_points(rng, len(hood.nodes))
    best_coords, best, previous = None, None, None
    for sweep in range(1, cfg.max_outer_iterations + 1):
        for k in range(len(hood.nodes)):
            coords[k] = embed_one_node(hood.color_set(k, coords), space, cfg.epsilon, incumbent=coords[k]).point
        current = hood.objective(coords)
        logger.debug("sweep %d: mindist=%.6g sumdist=%.6g", sweep, *current)
        if best is None or _improves(current, best):
            best, best_coords = current, coords.copy()
        if previous is not None and not _improves(current, previous):
            return best_coords, best, sweep
        previous = current
    logger.warning(
        "component of %d nodes hit the cap of %d sweeps", len(hood.nodes), cfg.max_outer_iterations,
    )
    return best_coords, best, cfg.max_outer_iterations


def evaluate_assignment(dual, coords):
    """(mindist, sumdist) of colors ``coords[i]`` for dual node i over the whole dual graph."""
    coords = np.asarray(coords, dtype=float)
    return _Neighbourhood(dual, range(len(dual))).objective(coords)


def clarify(dual, space, cfg):
    """
    Color every dual node. Components are optimised independently, each with
    ``random_starts`` seeded restarts; singletons get the darkest color of the
    space.
    """
    starts = cfg.starts_for(len(dual))
    colors, sweeps = {}, {}
    mindist, sumdist = math.inf, 0.0
    for number, component in enumerate(dual.components):
        if len(component) == 1:
            colors[component[0]] = space.color_point(space.black_point())
            continue
        best = None
        for start in range(starts):
            rng = np.random.default_rng([cfg.rng_seed, number, start])
            coords, objective, count = clarify_component(dual, component, space, cfg, rng)
            if best is None or _improves(objective, best[1]):
                best = (coords, objective, count)
        coords, objective, count = best
        for node, point in zip(component, coords):
            colors[node] = space.color_point(point)
        sweeps[number] = count
        mindist = min(mindist, objective[0])
        sumdist += objective[1]
    logger.info("clarify: %d components, mindist=%.6g, sumdist=%.6g", len(dual.components), mindist, sumdist)
    return ColorAssignment(colors, mindist, sumdist, sweeps)
