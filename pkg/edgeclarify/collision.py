"""
Dual collision graph construction.

One dual node per layout edge; two dual nodes are joined when their edges
collide: they cross at a small angle (C1), leave a shared node at a small angle
(C2) or almost straight through it (C3), or run close and almost parallel (C4).
"""
import enum
import logging
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple, Optional

import networkx as nx
import numpy as np

from .geometry import (
    GeomConfig, Point2, crossing_angle, incident_angle, segment_distance, segment_intersection, vertex_crossings,
)

logger = logging.getLogger(__name__)

# rows of the sub-segment table compared per vectorised block
PREFILTER_BLOCK = 512
ANGLE_SLACK_DEG = 1e-6


@dataclass(frozen=True)
class LayoutEdge:
    id: int
    source: str
    target: str
    geometry: object  # Polyline

    @property
    def endpoints(self):
        return (self.source, self.target)

    def leaving(self, node):
        """Direction vector of the first sub-segment leaving ``node``."""
        seg = self.geometry.leaving(at_start=(node == self.source))
        return Point2(seg.end.x - seg.start.x, seg.end.y - seg.start.y)


@dataclass
class LayoutGraph:
    nodes: dict
    edges: list
    labels: dict = field(default_factory=dict)
    directed: bool = False
    source: object = None  # parsed pydot graph, when the layout came from DOT text

    def edge_by_id(self):
        return {edge.id: edge for edge in self.edges}


class CollisionType(enum.Enum):
    CROSSING = "C1"
    SHARED_SMALL = "C2"
    SHARED_STRAIGHT = "C3"
    NEAR_PARALLEL = "C4"


@dataclass(frozen=True)
class CollisionKind:
    type: CollisionType
    angle: float
    distance: Optional[float] = None

    def __str__(self):
        if self.distance is None:
            return f"{self.type.value}({self.angle:.4g})"
        return f"{self.type.value}({self.distance:.4g}, {self.angle:.4g})"


class DualEdge(NamedTuple):
    i: int
    j: int
    weight: float
    kind: Optional[CollisionKind]


class DualCollisionGraph:
    """
    Weighted dual graph. Dual node ``i`` stands for ``node_ids[i]`` (an edge id
    of the layout, or a region name in map mode).
    """

    def __init__(self, node_ids, dual_edges=()):
        self.node_ids = tuple(node_ids)
        self.graph = nx.Graph()
        self.graph.add_nodes_from(range(len(self.node_ids)))
        for i, j, weight, kind in dual_edges:
            if i == j:
                raise ValueError(f"dual self-loop on {self.node_ids[i]}")
            if weight <= 0 or not math.isfinite(weight):
                raise ValueError(f"dual edge weight must be positive, got {weight}")
            self.graph.add_edge(i, j, weight=float(weight), kind=kind)

    def __len__(self):
        return len(self.node_ids)

    @property
    def dual_edges(self):
        edges = (DualEdge(min(i, j), max(i, j), d["weight"], d["kind"]) for i, j, d in self.graph.edges(data=True))
        return sorted(edges, key=lambda e: (e.i, e.j))

    @property
    def edge_count(self):
        return self.graph.number_of_edges()

    def neighbors(self, i):
        return sorted((j, self.graph[i][j]["weight"]) for j in self.graph[i])

    def index_of(self, node_id):
        return self._index[node_id]

    @cached_property
    def _index(self):
        return {node_id: i for i, node_id in enumerate(self.node_ids)}

    @cached_property
    def components(self):
        return components(self)


def _shared_nodes(e1, e2):
    return sorted(set(e1.endpoints) & set(e2.endpoints))


def _check_shared(e1, e2, nodes, cfg):
    small = straight = None
    for node in nodes:
        origin = Point2(0.0, 0.0)
        angle = incident_angle(origin, e1.leaving(node), e2.leaving(node))
        if angle < cfg.small_angle_deg:
            small = angle if small is None else min(small, angle)
        elif cfg.enable_c3 and angle > cfg.straight_angle_deg:
            straight = angle if straight is None else max(straight, angle)
    if small is not None:
        return CollisionKind(CollisionType.SHARED_SMALL, small)
    if straight is not None:
        return CollisionKind(CollisionType.SHARED_STRAIGHT, straight)
    return None


def _check_disjoint(e1, e2, cfg):
    segs1, segs2 = e1.geometry.segments, e2.geometry.segments
    crossing = None
    for s1 in segs1:
        for s2 in segs2:
            if segment_intersection(s1, s2) is None:
                continue
            angle = crossing_angle(s1, s2)
            if angle < cfg.small_angle_deg and (crossing is None or angle < crossing):
                crossing = angle
    for pairs in vertex_crossings(e1.geometry, e2.geometry):
        angle = min(crossing_angle(s1, s2) for s1, s2 in pairs)
        if angle < cfg.small_angle_deg and (crossing is None or angle < crossing):
            crossing = angle
    if crossing is not None:
        return CollisionKind(CollisionType.CROSSING, crossing)

    threshold = cfg.near_dist_frac * max(e1.geometry.length, e2.geometry.length)
    near = None
    for s1 in segs1:
        for s2 in segs2:
            angle = crossing_angle(s1, s2)
            if angle >= cfg.parallel_angle_deg:
                continue
            dist = segment_distance(s1, s2)
            if dist < threshold and (near is None or (dist, angle) < near):
                near = (dist, angle)
    if near is not None:
        return CollisionKind(CollisionType.NEAR_PARALLEL, near[1], near[0])
    return None


def check_pair(e1, e2, cfg, shared_node=None):
    """
    Collision between two layout edges, or None.

    Edges sharing a node are judged only by the angle at which they leave it
    (C2 before C3); C1 and C4 apply to edges without a common node.
    """
    if e1.id == e2.id:
        raise ValueError("an edge does not collide with itself")
    shared = [shared_node] if shared_node is not None else _shared_nodes(e1, e2)
    if shared:
        return _check_shared(e1, e2, shared, cfg)
    return _check_disjoint(e1, e2, cfg)


def _segment_table(edges):
    owners, coords = [], []
    for k, edge in enumerate(edges):
        for seg in edge.geometry.segments:
            owners.append(k)
            coords.append((seg.start.x, seg.start.y, seg.end.x, seg.end.y))
    return np.asarray(owners, dtype=np.int64), np.asarray(coords, dtype=float).reshape(-1, 4)


def _disjoint_candidates(edges, cfg):
    """
    Pairs of edge positions whose sub-segments might satisfy C1 or C4: some
    pair of sub-segments is within the small angle and their bounding boxes,
    grown by the C4 distance threshold, overlap.
    """
    owners, seg = _segment_table(edges)
    if len(owners) == 0:
        return set()
    lengths = np.array([edge.geometry.length for edge in edges])
    theta = np.degrees(np.arctan2(seg[:, 3] - seg[:, 1], seg[:, 2] - seg[:, 0])) % 180.0
    lo = np.minimum(seg[:, :2], seg[:, 2:])
    hi = np.maximum(seg[:, :2], seg[:, 2:])
    seg_len = lengths[owners]
    limit = cfg.small_angle_deg + ANGLE_SLACK_DEG

    found = set()
    for start in range(0, len(owners), PREFILTER_BLOCK):
        rows = slice(start, start + PREFILTER_BLOCK)
        diff = np.abs(theta[rows, None] - theta[None, :])
        diff = np.minimum(diff, 180.0 - diff)
        margin = cfg.near_dist_frac * np.maximum(seg_len[rows, None], seg_len[None, :]) + 1e-12
        overlap = (
            (lo[rows, None, 0] - margin <= hi[None, :, 0])
            & (lo[None, :, 0] - margin <= hi[rows, None, 0])
            & (lo[rows, None, 1] - margin <= hi[None, :, 1])
            & (lo[None, :, 1] - margin <= hi[rows, None, 1])
        )
        mask = (diff < limit) & overlap & (owners[rows, None] < owners[None, :])
        r, c = np.nonzero(mask)
        found.update(zip(owners[rows][r].tolist(), owners[c].tolist()))
    return found


def build_collision_graph(g, cfg=None):
    """
    Dual collision graph of a layout, every dual edge with weight 1.

    Dual nodes follow ascending edge id. The all-pairs scan is narrowed by a
    vectorised angle and bounding-box prefilter; every surviving pair is then
    decided by check_pair.
    """
    cfg = cfg or GeomConfig()
    edges = sorted(g.edges, key=lambda e: e.id)

    incident = {}
    for k, edge in enumerate(edges):
        for node in set(edge.endpoints):
            incident.setdefault(node, []).append(k)
    sharing = set()
    for members in incident.values():
        for a in range(len(members)):
            for b in range(a + 1, len(members)):
                sharing.add((members[a], members[b]))

    candidates = sharing | (_disjoint_candidates(edges, cfg) - sharing)
    dual_edges = []
    for a, b in sorted(candidates):
        kind = check_pair(edges[a], edges[b], cfg)
        if kind is not None:
            dual_edges.append((a, b, 1.0, kind))

    dual = DualCollisionGraph([e.id for e in edges], dual_edges)
    logger.info(
        "collision graph: %d edges, %d candidate pairs, %d collisions",
        len(edges), len(candidates), dual.edge_count,
    )
    return dual


def components(dual):
    """
    Connected components as sorted lists of dual nodes. Multi-node components
    come first, ordered by their smallest member; singletons are listed last.
    """
    parts = [sorted(c) for c in nx.connected_components(dual.graph)]
    return sorted(parts, key=lambda c: (len(c) == 1, c[0]))


def adjacency_graph(adjacency):
    """networkx graph from a ``region -> neighbours`` mapping (or a graph)."""
    if isinstance(adjacency, nx.Graph):
        return adjacency
    graph = nx.Graph()
    for region, neighbours in adjacency.items():
        graph.add_node(region)
        for other in neighbours:
            if other != region:
                graph.add_edge(region, other)
    return graph


def build_map_dual(adjacency):
    """
    Weighted dual for virtual-map coloring: every pair of regions in the same
    adjacency component is joined with weight 1 / (hop distance).
    """
    graph = adjacency_graph(adjacency)
    if graph.number_of_nodes() == 0:
        raise ValueError("map needs at least one region")
    regions = sorted(graph.nodes, key=str)
    index = {region: i for i, region in enumerate(regions)}
    dual_edges = []
    for region, lengths in nx.all_pairs_shortest_path_length(graph):
        i = index[region]
        for other, hops in lengths.items():
            j = index[other]
            if i < j:
                dual_edges.append((i, j, 1.0 / hops, None))
    return DualCollisionGraph(regions, dual_edges)
