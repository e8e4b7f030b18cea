"""
Color spaces CLARIFY can search: an RGB box, a gray interval, a sampled LAB
gamut and user palettes interpolated along a path in LAB.

Conversions use sRGB companding and the D65 white point. Color distances are
Euclidean in the coordinates of the active space.
"""
import itertools
import json
import logging
import os
import struct
import tempfile
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

import numpy as np

from .conf import get_setting
from .exceptions import ColorSpaceError
from .validators import validate_lightness_range, validate_positive

logger = logging.getLogger(__name__)

RGB_TO_XYZ = np.array([
    [0.4124564, 0.3575761, 0.1804375],
    [0.2126729, 0.7151522, 0.0721750],
    [0.0193339, 0.1191920, 0.9503041],
])
XYZ_TO_RGB = np.linalg.inv(RGB_TO_XYZ)
WHITE_D65 = np.array([0.95047, 1.0, 1.08883])
_DELTA = 6.0 / 29.0

LAB_L_RANGE = (0.0, 100.0)
LAB_AB_RANGE = (-128.0, 128.0)

GAMUT_MAGIC = b"CLRGAMUT"
GAMUT_VERSION = 1
_GAMUT_HEADER = struct.Struct("<8sIQ")

EXACT_TSP_LIMIT = 10


@dataclass(frozen=True)
class ColorPoint:
    coords: tuple
    tag: str

    def as_array(self):
        return np.asarray(self.coords, dtype=float)

    def to_rgb(self):
        """sRGB triple in [0, 1]."""
        if self.tag == "rgb":
            return tuple(self.coords)
        if self.tag == "gray":
            return (self.coords[0],) * 3
        return tuple(lab_to_rgb(self.as_array()).tolist())


@dataclass(frozen=True, eq=False)
class ContinuousBox:
    lower: np.ndarray
    upper: np.ndarray
    tag: str = "rgb"

    def __post_init__(self):
        lower = np.atleast_1d(np.asarray(self.lower, dtype=float))
        upper = np.atleast_1d(np.asarray(self.upper, dtype=float))
        if lower.shape != upper.shape or not np.all(lower < upper):
            raise ColorSpaceError(f"empty color box {lower.tolist()}..{upper.tolist()}")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @property
    def dim(self):
        return len(self.lower)

    def contains(self, points):
        points = np.atleast_2d(points)
        return np.all((points >= self.lower) & (points <= self.upper), axis=1)

    def default_point(self):
        return self.lower.copy()

    def black_point(self):
        return self.lower.copy()

    def random_points(self, rng, n):
        return rng.uniform(self.lower, self.upper, size=(n, self.dim))

    def color_point(self, coords):
        return ColorPoint(tuple(float(v) for v in coords), self.tag)


@dataclass(frozen=True, eq=False)
class DiscreteSamples:
    points: np.ndarray
    tag: str = "lab"
    _black: int = field(default=None, init=False, repr=False)

    def __post_init__(self):
        points = np.array(self.points, dtype=float)
        if points.ndim == 1:
            points = points[:, None]
        if len(points) == 0:
            raise ColorSpaceError("a discrete color space needs at least one sample")
        _, first = np.unique(points, axis=0, return_index=True)
        if len(first) != len(points):
            points = points[np.sort(first)]
        points.setflags(write=False)
        object.__setattr__(self, "points", points)

    def __len__(self):
        return len(self.points)

    @property
    def dim(self):
        return self.points.shape[1]

    def contains(self, points):
        points = np.atleast_2d(points)
        members = {tuple(p) for p in self.points.tolist()}
        return np.array([tuple(p) in members for p in points.tolist()])

    def default_point(self):
        return self.points[0].copy()

    def black_point(self):
        if self._black is None:
            d2 = np.einsum("ij,ij->i", self.points, self.points)
            object.__setattr__(self, "_black", int(np.argmin(d2)))
        return self.points[self._black].copy()

    def random_points(self, rng, n):
        return self.points[rng.integers(0, len(self.points), size=n)].copy()

    def color_point(self, coords):
        return ColorPoint(tuple(float(v) for v in coords), self.tag)


@dataclass(frozen=True)
class GamutSampleConfig:
    step: float = 1.0
    roundtrip_tol: float = 0.02
    l_min: float = 0.0
    l_max: float = 100.0

    def __post_init__(self):
        validate_positive(self.step, "step")
        validate_positive(self.roundtrip_tol, "roundtrip_tol")
        validate_lightness_range(self.l_min, self.l_max)


def _lab_f(t):
    return np.where(t > _DELTA ** 3, np.cbrt(t), t / (3 * _DELTA ** 2) + 4.0 / 29.0)


def _lab_f_inv(t):
    return np.where(t > _DELTA, t ** 3, 3 * _DELTA ** 2 * (t - 4.0 / 29.0))


def _compand(linear):
    return np.where(linear <= 0.0031308, 12.92 * linear, 1.055 * np.power(linear, 1 / 2.4) - 0.055)


def _linearize(rgb):
    return np.where(rgb <= 0.04045, rgb / 12.92, ((rgb + 0.055) / 1.055) ** 2.4)


def rgb_to_lab(rgb):
    """sRGB in [0, 1] to CIE L*a*b*; accepts a triple or an (n, 3) array."""
    rgb = np.asarray(rgb, dtype=float)
    if np.any(rgb < 0) or np.any(rgb > 1) or not np.all(np.isfinite(rgb)):
        raise ColorSpaceError("RGB components must lie in [0, 1]")
    xyz = _linearize(rgb) @ RGB_TO_XYZ.T
    f = _lab_f(xyz / WHITE_D65)
    fx, fy, fz = f[..., 0], f[..., 1], f[..., 2]
    return np.stack([116 * fy - 16, 500 * (fx - fy), 200 * (fy - fz)], axis=-1)


def lab_to_rgb(lab):
    """CIE L*a*b* to sRGB; colors outside the gamut are clamped per channel."""
    lab = np.asarray(lab, dtype=float)
    fy = (lab[..., 0] + 16) / 116
    f = np.stack([fy + lab[..., 1] / 500, fy, fy - lab[..., 2] / 200], axis=-1)
    xyz = _lab_f_inv(f) * WHITE_D65
    linear = np.clip(xyz @ XYZ_TO_RGB.T, 0.0, 1.0)
    return np.clip(_compand(linear), 0.0, 1.0)


def make_rgb_box(max_intensity=0.7):
    if not 0 < max_intensity <= 1:
        raise ColorSpaceError("max_intensity must lie in (0, 1]")
    return ContinuousBox(np.zeros(3), np.full(3, float(max_intensity)), tag="rgb")


def make_gray(lo=0.0, hi=1.0):
    if not 0 <= lo < hi <= 1:
        raise ColorSpaceError("gray interval must satisfy 0 <= lo < hi <= 1")
    return ContinuousBox(np.array([lo], dtype=float), np.array([hi], dtype=float), tag="gray")


def _grid_axis(lo, hi, step):
    return lo + step * np.arange(int(np.floor((hi - lo) / step + 1e-9)) + 1)


def _compute_gamut(step, tol):
    l_axis = _grid_axis(*LAB_L_RANGE, step)
    ab_axis = _grid_axis(*LAB_AB_RANGE, step)
    aa, bb = np.meshgrid(ab_axis, ab_axis, indexing="ij")
    aa, bb = aa.ravel(), bb.ravel()
    kept = []
    for lightness in l_axis:
        lab = np.column_stack([np.full_like(aa, lightness), aa, bb])
        error = np.linalg.norm(rgb_to_lab(lab_to_rgb(lab)) - lab, axis=1)
        kept.append(lab[error <= tol])
    return np.concatenate(kept)


def _cache_paths(cache_dir, step, tol):
    stem = f"lab_gamut_step{step:g}_tol{tol:g}"
    return Path(cache_dir) / f"{stem}.bin", Path(cache_dir) / f"{stem}.json"


def _atomic_write(path, data):
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_gamut_cache(points, cache_dir, step, tol):
    data_path, meta_path = _cache_paths(cache_dir, step, tol)
    body = np.ascontiguousarray(points, dtype="<f4").tobytes()
    _atomic_write(data_path, _GAMUT_HEADER.pack(GAMUT_MAGIC, GAMUT_VERSION, len(points)) + body)
    meta = {"version": GAMUT_VERSION, "step": step, "roundtrip_tol": tol, "count": len(points)}
    _atomic_write(meta_path, json.dumps(meta, sort_keys=True).encode())


def read_gamut_cache(cache_dir, step, tol):
    """Cached sample, or None when missing, stale or corrupt."""
    data_path, meta_path = _cache_paths(cache_dir, step, tol)
    try:
        meta = json.loads(meta_path.read_text())
        raw = data_path.read_bytes()
    except (OSError, ValueError):
        return None
    if meta.get("version") != GAMUT_VERSION or meta.get("step") != step or meta.get("roundtrip_tol") != tol:
        return None
    if len(raw) < _GAMUT_HEADER.size:
        return None
    magic, version, count = _GAMUT_HEADER.unpack_from(raw)
    if magic != GAMUT_MAGIC or version != GAMUT_VERSION or count != meta.get("count"):
        return None
    body = raw[_GAMUT_HEADER.size:]
    if len(body) != count * 12:
        return None
    return np.frombuffer(body, dtype="<f4").reshape(count, 3).astype(float)


@lru_cache(maxsize=4)
def _full_gamut(step, tol, cache_dir):
    if cache_dir is not None:
        points = read_gamut_cache(cache_dir, step, tol)
        if points is not None:
            logger.info("LAB gamut cache hit: %d points from %s", len(points), cache_dir)
            return points
        logger.info("LAB gamut cache miss in %s, sampling", cache_dir)
    points = _compute_gamut(step, tol)
    logger.info("sampled LAB gamut: %d points", len(points))
    if cache_dir is not None:
        write_gamut_cache(points, cache_dir, step, tol)
    return points


def sample_lab_gamut(cfg=None, cache_dir=None, use_cache=True):
    """
    Grid points of the LAB box whose LAB -> RGB -> LAB round trip stays within
    ``roundtrip_tol``, restricted to the configured lightness window.

    The unfiltered sample is cached per (step, tol) under ``cache_dir``
    (default: the GAMUT_CACHE_DIR setting).
    """
    cfg = cfg or GamutSampleConfig()
    if use_cache:
        cache_dir = str(cache_dir or get_setting("GAMUT_CACHE_DIR"))
    else:
        cache_dir = None
    points = _full_gamut(float(cfg.step), float(cfg.roundtrip_tol), cache_dir)
    lightness = points[:, 0]
    points = points[(lightness >= cfg.l_min) & (lightness <= cfg.l_max)]
    if len(points) == 0:
        raise ColorSpaceError(f"no LAB gamut samples with {cfg.l_min} <= L <= {cfg.l_max}")
    return DiscreteSamples(points, tag="lab")


def _path_length(dist, order):
    return sum(dist[a, b] for a, b in zip(order, order[1:]))


def _held_karp(dist):
    k = len(dist)
    full = (1 << k) - 1
    cost = {(1 << j, j): 0.0 for j in range(k)}
    parent = {}
    for size in range(2, k + 1):
        for subset in itertools.combinations(range(k), size):
            mask = sum(1 << j for j in subset)
            for j in subset:
                prev_mask = mask & ~(1 << j)
                best = None
                for i in subset:
                    if i == j:
                        continue
                    candidate = cost[(prev_mask, i)] + dist[i, j]
                    if best is None or candidate < best[0]:
                        best = (candidate, i)
                cost[(mask, j)] = best[0]
                parent[(mask, j)] = best[1]
    end = min(range(k), key=lambda j: (cost[(full, j)], j))
    order, mask = [end], full
    while mask != (1 << order[-1]):
        j = order[-1]
        order.append(parent[(mask, j)])
        mask &= ~(1 << j)
    return order[::-1]


def _two_opt(dist, order):
    order = list(order)
    improved = True
    while improved:
        improved = False
        for i in range(len(order) - 1):
            for j in range(i + 1, len(order)):
                before = after = 0.0
                if i > 0:
                    before += dist[order[i - 1], order[i]]
                    after += dist[order[i - 1], order[j]]
                if j < len(order) - 1:
                    before += dist[order[j], order[j + 1]]
                    after += dist[order[i], order[j + 1]]
                if after < before - 1e-12:
                    order[i:j + 1] = order[i:j + 1][::-1]
                    improved = True
    return order


def _nearest_neighbour(dist, start):
    order, left = [start], set(range(len(dist))) - {start}
    while left:
        order.append(min(left, key=lambda j: (dist[order[-1], j], j)))
        left.remove(order[-1])
    return order


def tsp_order(points):
    """
    Open-path travelling-salesman order of the points: exact for up to ten
    points, nearest neighbour plus 2-opt beyond. The path starts at the lower
    of its two end indices.
    """
    points = np.asarray(points, dtype=float)
    k = len(points)
    if k < 2:
        raise ColorSpaceError("tsp_order needs at least two points")
    dist = np.linalg.norm(points[:, None, :] - points[None, :, :], axis=-1)
    if k <= EXACT_TSP_LIMIT:
        order = _held_karp(dist)
    else:
        tours = [_two_opt(dist, _nearest_neighbour(dist, s)) for s in range(k)]
        order = min(tours, key=lambda o: _path_length(dist, o))
    if order[0] > order[-1]:
        order.reverse()
    return order


def palette_path(palette, ordering="tsp"):
    """LAB vertices of the path through the palette colors, duplicates dropped."""
    lab = rgb_to_lab(np.asarray(palette, dtype=float).reshape(-1, 3))
    _, first = np.unique(lab, axis=0, return_index=True)
    lab = lab[np.sort(first)]
    if len(lab) < 2:
        raise ColorSpaceError("a palette needs at least two distinct colors")
    if ordering == "tsp":
        lab = lab[tsp_order(lab)]
    elif ordering != "natural":
        raise ColorSpaceError(f"unknown palette ordering {ordering!r}")
    return lab


def interpolate_palette(palette, samples=10000, ordering="tsp"):
    """
    Resample a palette of k RGB colors into ``samples`` points spaced at equal
    arc length along its LAB path. Interior palette colors that do not fall on
    a sample are appended after the evenly spaced points.
    """
    path = palette_path(palette, ordering)
    if samples < len(path):
        raise ColorSpaceError(f"need at least {len(path)} samples for this palette")
    cumulative = np.concatenate([[0.0], np.cumsum(np.linalg.norm(np.diff(path, axis=0), axis=1))])
    targets = np.linspace(0.0, cumulative[-1], samples)
    seg = np.clip(np.searchsorted(cumulative, targets, side="right") - 1, 0, len(path) - 2)
    t = (targets - cumulative[seg]) / (cumulative[seg + 1] - cumulative[seg])
    points = path[seg] + t[:, None] * (path[seg + 1] - path[seg])
    points[0], points[-1] = path[0], path[-1]

    extras = [p for p in path[1:-1] if np.min(np.linalg.norm(points - p, axis=1)) > 1e-9]
    if extras:
        points = np.vstack([points, extras])
    return DiscreteSamples(points, tag="lab")
