"""
Plane geometry over layout edges.

Edges are straight segments or polylines obtained by flattening Graphviz
splines. Angles are in degrees and come from atan2 of cross and dot products.
"""
import math
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple

from .exceptions import GeometryError
from .validators import validate_angle_thresholds, validate_open_range, validate_positive

MIN_LENGTH = 1e-12
MAX_FLATTEN_DEPTH = 16


class Point2(NamedTuple):
    x: float
    y: float


class Segment(NamedTuple):
    start: Point2
    end: Point2

    @property
    def length(self):
        return math.hypot(self.end.x - self.start.x, self.end.y - self.start.y)


@dataclass(frozen=True)
class GeomConfig:
    """Thresholds of the four collision conditions."""
    small_angle_deg: float = 15.0
    straight_angle_deg: float = 165.0
    near_dist_frac: float = 0.01
    parallel_angle_deg: float = 1.0
    enable_c3: bool = True
    spline_flatten_tol: float = 0.25

    def __post_init__(self):
        validate_angle_thresholds(self.small_angle_deg, self.straight_angle_deg, self.parallel_angle_deg)
        validate_open_range(self.near_dist_frac, 0, 1, "near_dist_frac")
        validate_positive(self.spline_flatten_tol, "spline_flatten_tol")


@dataclass(frozen=True)
class Polyline:
    points: tuple

    def __post_init__(self):
        if len(self.points) < 2:
            raise GeometryError("a polyline needs at least two points")
        for p, q in zip(self.points, self.points[1:]):
            if p == q:
                raise GeometryError(f"polyline repeats point {p}")
        if self.length <= MIN_LENGTH:
            raise GeometryError("polyline has zero length")

    @classmethod
    def straight(cls, start, end):
        return cls((Point2(*start), Point2(*end)))

    @cached_property
    def segments(self):
        return tuple(Segment(p, q) for p, q in zip(self.points, self.points[1:]))

    @cached_property
    def length(self):
        return sum(math.hypot(q.x - p.x, q.y - p.y) for p, q in zip(self.points, self.points[1:]))

    @property
    def start(self):
        return self.points[0]

    @property
    def end(self):
        return self.points[-1]

    def leaving(self, at_start):
        """First sub-segment leaving the start (or end) node, oriented away from it."""
        if at_start:
            return Segment(self.points[0], self.points[1])
        return Segment(self.points[-1], self.points[-2])


def _cross(ax, ay, bx, by):
    return ax * by - ay * bx


def _orient(p, q, r):
    return _cross(q.x - p.x, q.y - p.y, r.x - p.x, r.y - p.y)


def _check_segment(seg):
    if seg.length <= MIN_LENGTH:
        raise GeometryError(f"degenerate segment {tuple(seg.start)}-{tuple(seg.end)}")


def _on_segment(p, seg):
    """p is collinear with seg; is it inside its bounding box?"""
    a, b = seg
    return min(a.x, b.x) <= p.x <= max(a.x, b.x) and min(a.y, b.y) <= p.y <= max(a.y, b.y)


def segment_intersection(a, b):
    """
    Interior crossing point of two segments, or None.

    Touching at an endpoint, T-junctions and collinear overlap are not
    crossings.
    """
    a, b = Segment(*a), Segment(*b)
    _check_segment(a)
    _check_segment(b)
    o1 = _orient(a.start, a.end, b.start)
    o2 = _orient(a.start, a.end, b.end)
    o3 = _orient(b.start, b.end, a.start)
    o4 = _orient(b.start, b.end, a.end)
    if not (o1 * o2 < 0 and o3 * o4 < 0):
        return None
    dax, day = a.end.x - a.start.x, a.end.y - a.start.y
    dbx, dby = b.end.x - b.start.x, b.end.y - b.start.y
    t = _cross(b.start.x - a.start.x, b.start.y - a.start.y, dbx, dby) / _cross(dax, day, dbx, dby)
    return Point2(a.start.x + t * dax, a.start.y + t * day)


def segments_touch(a, b):
    """True if the closed segments share at least one point."""
    a, b = Segment(*a), Segment(*b)
    o1 = _orient(a.start, a.end, b.start)
    o2 = _orient(a.start, a.end, b.end)
    o3 = _orient(b.start, b.end, a.start)
    o4 = _orient(b.start, b.end, a.end)
    if o1 * o2 < 0 and o3 * o4 < 0:
        return True
    return (
        (o1 == 0 and _on_segment(b.start, a))
        or (o2 == 0 and _on_segment(b.end, a))
        or (o3 == 0 and _on_segment(a.start, b))
        or (o4 == 0 and _on_segment(a.end, b))
    )


def crossing_angle(a, b):
    """Acute angle in degrees, in [0, 90], between the directions of two segments."""
    a, b = Segment(*a), Segment(*b)
    _check_segment(a)
    _check_segment(b)
    ux, uy = a.end.x - a.start.x, a.end.y - a.start.y
    vx, vy = b.end.x - b.start.x, b.end.y - b.start.y
    angle = math.degrees(math.atan2(abs(_cross(ux, uy, vx, vy)), ux * vx + uy * vy))
    return 180.0 - angle if angle > 90.0 else angle


def incident_angle(shared, tip_a, tip_b):
    """Unsigned angle in [0, 180] between the rays shared->tip_a and shared->tip_b."""
    shared, tip_a, tip_b = Point2(*shared), Point2(*tip_a), Point2(*tip_b)
    if tip_a == shared or tip_b == shared:
        raise GeometryError("incident angle needs tips distinct from the shared point")
    ux, uy = tip_a.x - shared.x, tip_a.y - shared.y
    vx, vy = tip_b.x - shared.x, tip_b.y - shared.y
    return math.degrees(math.atan2(abs(_cross(ux, uy, vx, vy)), ux * vx + uy * vy))


def point_segment_distance(p, seg):
    a, b = seg
    dx, dy = b.x - a.x, b.y - a.y
    denom = dx * dx + dy * dy
    if denom == 0:
        return math.hypot(p.x - a.x, p.y - a.y)
    t = max(0.0, min(1.0, ((p.x - a.x) * dx + (p.y - a.y) * dy) / denom))
    return math.hypot(p.x - (a.x + t * dx), p.y - (a.y + t * dy))


def segment_distance(a, b):
    """Minimum Euclidean distance between two closed segments."""
    a, b = Segment(*a), Segment(*b)
    _check_segment(a)
    _check_segment(b)
    if segments_touch(a, b):
        return 0.0
    return min(
        point_segment_distance(a.start, b),
        point_segment_distance(a.end, b),
        point_segment_distance(b.start, a),
        point_segment_distance(b.end, a),
    )


def _rays_at(polyline, p):
    """
    Tips of the two rays the polyline leaves ``p`` along, or None when ``p``
    is not on it or is one of its end points.
    """
    points = polyline.points
    for i, q in enumerate(points):
        if q == p:
            if 0 < i < len(points) - 1:
                return points[i - 1], points[i + 1]
            return None
    for seg in polyline.segments:
        if _orient(seg.start, seg.end, p) == 0 and _on_segment(p, seg):
            return seg.start, seg.end
    return None


def _switches_sides(p, rays_a, rays_b):
    """Do the rays of b at p lie strictly on both sides of the path formed by the rays of a?"""
    def turn(q):
        return math.atan2(q.y - p.y, q.x - p.x)

    start = turn(rays_a[0])
    sector = (turn(rays_a[1]) - start) % math.tau
    sides = []
    for tip in rays_b:
        offset = (turn(tip) - start) % math.tau
        if offset == 0 or offset == sector:
            return False
        sides.append(offset < sector)
    return sides[0] != sides[1]


def vertex_crossings(a, b):
    """
    Crossings of two polylines that pass exactly through an interior vertex
    of either one; segment_intersection misses these since every sub-segment
    pair there only touches at an end point.

    Yields, per crossing, the sub-segment pairs (one from ``a``, one from
    ``b``) that meet at the crossing point.
    """
    seen = set()
    for owner in (a, b):
        for p in owner.points[1:-1]:
            if p in seen:
                continue
            seen.add(p)
            rays_a, rays_b = _rays_at(a, p), _rays_at(b, p)
            if rays_a is None or rays_b is None or not _switches_sides(p, rays_a, rays_b):
                continue
            yield [
                (Segment(p, tip_a), Segment(p, tip_b))
                for tip_a in rays_a for tip_b in rays_b
            ]


def _lerp(p, q, t=0.5):
    return Point2(p.x + (q.x - p.x) * t, p.y + (q.y - p.y) * t)


def _flatten_cubic(p0, p1, p2, p3, tol, depth, out):
    # the curve lies in the hull of its control points
    chord = Segment(p0, p3)
    flatness = max(point_segment_distance(p1, chord), point_segment_distance(p2, chord))
    if flatness <= tol or depth >= MAX_FLATTEN_DEPTH:
        out.append(p3)
        return
    p01, p12, p23 = _lerp(p0, p1), _lerp(p1, p2), _lerp(p2, p3)
    p012, p123 = _lerp(p01, p12), _lerp(p12, p23)
    mid = _lerp(p012, p123)
    _flatten_cubic(p0, p01, p012, mid, tol, depth + 1, out)
    _flatten_cubic(mid, p123, p23, p3, tol, depth + 1, out)


def _simplify(points):
    """Drop repeated points and interior points lying on the straight run through their neighbours."""
    kept = []
    for p in points:
        if kept and p == kept[-1]:
            continue
        while len(kept) >= 2:
            a, b = kept[-2], kept[-1]
            ux, uy = b.x - a.x, b.y - a.y
            vx, vy = p.x - b.x, p.y - b.y
            scale = math.hypot(ux, uy) * math.hypot(vx, vy)
            if abs(_cross(ux, uy, vx, vy)) <= 1e-12 * scale and ux * vx + uy * vy > 0:
                kept.pop()
            else:
                break
        kept.append(p)
    return kept


def evaluate_cubic(p0, p1, p2, p3, t):
    s = 1.0 - t
    b0, b1, b2, b3 = s * s * s, 3 * s * s * t, 3 * s * t * t, t * t * t
    return Point2(
        b0 * p0.x + b1 * p1.x + b2 * p2.x + b3 * p3.x,
        b0 * p0.y + b1 * p1.y + b2 * p2.y + b3 * p3.y,
    )


def flatten_polyline(controls, tol=0.25, start=None, end=None):
    """
    Flatten a Graphviz edge spline (piecewise cubic Bezier, 3k+1 control
    points) into a polyline deviating from the curve by at most ``tol``.

    ``start`` and ``end`` are the optional arrow points of the ``s,`` and
    ``e,`` pos prefixes; they extend the polyline at either end.
    """
    controls = [Point2(*p) for p in controls]
    if len(controls) < 4 or (len(controls) - 1) % 3:
        raise GeometryError(f"spline needs 3k+1 control points, got {len(controls)}")
    if all(p == controls[0] for p in controls):
        raise GeometryError("spline control points are all equal")
    points = [Point2(*start)] if start is not None else []
    points.append(controls[0])
    for i in range(0, len(controls) - 1, 3):
        _flatten_cubic(*controls[i:i + 4], tol, 0, points)
    if end is not None:
        points.append(Point2(*end))
    points = _simplify(points)
    if len(points) < 2:
        raise GeometryError("spline collapses to a single point")
    return Polyline(tuple(points))
