import math

import numpy as np
from django.test import SimpleTestCase

from .collision import (
    CollisionType, DualCollisionGraph, LayoutEdge, LayoutGraph, build_collision_graph, build_map_dual,
    check_pair, components,
)
from .fixtures.layouts import karate_dot, random_layout_dot
from .geometry import GeomConfig, Point2, Polyline
from .layout_io import parse_layout


def edge(id, source, target, positions):
    return LayoutEdge(id, source, target, Polyline.straight(positions[source], positions[target]))


def bent_edge(id, source, target, points):
    return LayoutEdge(id, source, target, Polyline(tuple(Point2(*p) for p in points)))


def layout(positions, pairs):
    nodes = {name: Point2(*p) for name, p in positions.items()}
    return LayoutGraph(nodes, [edge(k, u, v, nodes) for k, (u, v) in enumerate(pairs)])


def oracle_pairs(g, small=15.0, straight=165.0, frac=0.01, parallel=1.0):
    ''' All-pairs collision test on straight edges, written from the definitions. '''
    pos = {name: np.array(p, dtype=float) for name, p in g.nodes.items()}
    edges = sorted(g.edges, key=lambda e: e.id)
    found = set()

    def acute(d1, d2):
        c = abs(np.dot(d1, d2)) / (np.linalg.norm(d1) * np.linalg.norm(d2))
        return math.degrees(math.acos(min(1.0, c)))

    def point_dist(p, a, b):
        t = np.clip(np.dot(p - a, b - a) / np.dot(b - a, b - a), 0.0, 1.0)
        return float(np.linalg.norm(p - (a + t * (b - a))))

    for x in range(len(edges)):
        for y in range(x + 1, len(edges)):
            e1, e2 = edges[x], edges[y]
            shared = {e1.source, e1.target} & {e2.source, e2.target}
            if shared:
                for node in shared:
                    u = pos[e1.target if e1.source == node else e1.source] - pos[node]
                    v = pos[e2.target if e2.source == node else e2.source] - pos[node]
                    c = np.dot(u, v) / (np.linalg.norm(u) * np.linalg.norm(v))
                    angle = math.degrees(math.acos(max(-1.0, min(1.0, c))))
                    if angle < small or angle > straight:
                        found.add((x, y))
                continue
            p, q, r, s = pos[e1.source], pos[e1.target], pos[e2.source], pos[e2.target]
            d1, d2 = q - p, s - r
            angle = acute(d1, d2)
            det = d1[0] * -d2[1] + d2[0] * d1[1]
            crosses = False
            if det != 0:
                t, u = np.linalg.solve(np.array([[d1[0], -d2[0]], [d1[1], -d2[1]]]), r - p)
                crosses = 0 < t < 1 and 0 < u < 1
            if crosses:
                if angle < small:
                    found.add((x, y))
                continue
            dist = min(point_dist(p, r, s), point_dist(q, r, s), point_dist(r, p, q), point_dist(s, p, q))
            limit = frac * max(np.linalg.norm(d1), np.linalg.norm(d2))
            if angle < parallel and dist < limit:
                found.add((x, y))
    return found


class CheckPairTests(SimpleTestCase):
    def setUp(self):
        self.cfg = GeomConfig()

    def test_small_angle_crossing(self):
        g = layout({'a': (0, 0), 'b': (10, 0), 'c': (0, -0.5), 'd': (10, 0.5)}, [('a', 'b'), ('c', 'd')])
        kind = check_pair(g.edges[0], g.edges[1], self.cfg)
        self.assertEqual(kind.type, CollisionType.CROSSING)
        self.assertAlmostEqual(kind.angle, math.degrees(math.atan(0.1)))

    def test_perpendicular_crossing_is_fine(self):
        g = layout({'a': (0, 0), 'b': (10, 0), 'c': (5, -5), 'd': (5, 5)}, [('a', 'b'), ('c', 'd')])
        assert check_pair(g.edges[0], g.edges[1], self.cfg) is None

    def test_small_shared_angle(self):
        tip = (math.cos(math.radians(10)) * 10, math.sin(math.radians(10)) * 10)
        g = layout({'a': (0, 0), 'b': (10, 0), 'c': tip}, [('a', 'b'), ('a', 'c')])
        kind = check_pair(g.edges[0], g.edges[1], self.cfg)
        self.assertEqual(kind.type, CollisionType.SHARED_SMALL)
        self.assertAlmostEqual(kind.angle, 10.0)

    def test_near_straight_shared_angle(self):
        g = layout({'a': (0, 0), 'b': (1, 0), 'c': (-1, 0.17633)}, [('a', 'b'), ('c', 'a')])
        kind = check_pair(g.edges[0], g.edges[1], self.cfg)
        self.assertEqual(kind.type, CollisionType.SHARED_STRAIGHT)
        assert check_pair(g.edges[0], g.edges[1], GeomConfig(enable_c3=False)) is None

    def test_right_angle_at_shared_node_is_fine(self):
        g = layout({'a': (0, 0), 'b': (1, 0), 'c': (0, 1)}, [('a', 'b'), ('a', 'c')])
        assert check_pair(g.edges[0], g.edges[1], self.cfg) is None

    def test_close_parallel_edges(self):
        g = layout({'a': (0, 0), 'b': (100, 0), 'c': (0, 0.5), 'd': (100, 0.5)}, [('a', 'b'), ('c', 'd')])
        kind = check_pair(g.edges[0], g.edges[1], self.cfg)
        self.assertEqual(kind.type, CollisionType.NEAR_PARALLEL)
        self.assertAlmostEqual(kind.distance, 0.5)

    def test_distant_parallel_edges_are_fine(self):
        g = layout({'a': (0, 0), 'b': (100, 0), 'c': (0, 2), 'd': (100, 2)}, [('a', 'b'), ('c', 'd')])
        assert check_pair(g.edges[0], g.edges[1], self.cfg) is None

    def test_shallow_crossing_through_a_bend(self):
        bent = bent_edge(0, 'a', 'b', [(0, 0), (5, 0), (10, 0.2)])
        straight = bent_edge(1, 'c', 'd', [(0, -0.5), (10, 0.5)])
        for e1, e2 in ((bent, straight), (straight, bent)):
            kind = check_pair(e1, e2, self.cfg)
            self.assertEqual(kind.type, CollisionType.CROSSING)
            assert kind.angle < 15.0
        nodes = {'a': Point2(0, 0), 'b': Point2(10, 0.2), 'c': Point2(0, -0.5), 'd': Point2(10, 0.5)}
        g = LayoutGraph(nodes, [bent, straight])
        self.assertEqual(build_collision_graph(g).edge_count, 1)

    def test_crossing_where_both_bend(self):
        e1 = bent_edge(0, 'a', 'b', [(0, 0), (5, 0), (10, 0.2)])
        e2 = bent_edge(1, 'c', 'd', [(0, -0.5), (5, 0), (10, 0.6)])
        self.assertEqual(check_pair(e1, e2, self.cfg).type, CollisionType.CROSSING)

    def test_bend_touching_without_crossing(self):
        bent = bent_edge(0, 'a', 'b', [(0, 1), (5, 0), (10, 1)])
        straight = bent_edge(1, 'c', 'd', [(0, -0.5), (10, 0.5)])
        assert check_pair(bent, straight, self.cfg) is None

    def test_steep_crossing_through_a_bend_is_fine(self):
        bent = bent_edge(0, 'a', 'b', [(0, 0), (5, 0), (10, 0.2)])
        straight = bent_edge(1, 'c', 'd', [(5, -5), (5, 5)])
        assert check_pair(bent, straight, self.cfg) is None

    def test_edge_does_not_collide_with_itself(self):
        g = layout({'a': (0, 0), 'b': (1, 0)}, [('a', 'b')])
        with self.assertRaises(ValueError):
            check_pair(g.edges[0], g.edges[0], self.cfg)


class CollisionGraphTests(SimpleTestCase):
    def test_perpendicular_cross_has_no_collisions(self):
        g = layout({'a': (0, 0), 'b': (10, 0), 'c': (5, -5), 'd': (5, 5)}, [('a', 'b'), ('c', 'd')])
        dual = build_collision_graph(g)
        self.assertEqual(dual.edge_count, 0)
        self.assertEqual(components(dual), [[0], [1]])

    def test_matches_all_pairs_oracle(self):
        rng = np.random.default_rng(2024)
        for case in range(50):
            n = int(rng.integers(4, 31))
            m = int(rng.integers(1, 61))
            g = parse_layout(random_layout_dot(n, m, seed=1000 + case))
            dual = build_collision_graph(g)
            with self.subTest(case=case, nodes=n, edges=m):
                self.assertEqual({(e.i, e.j) for e in dual.dual_edges}, oracle_pairs(g))

    def test_clustered_layouts_match_oracle(self):
        # small coordinate range makes close and parallel edges common
        for case in range(10):
            g = parse_layout(random_layout_dot(25, 60, seed=500 + case, size=30.0))
            dual = build_collision_graph(g)
            with self.subTest(case=case):
                self.assertEqual({(e.i, e.j) for e in dual.dual_edges}, oracle_pairs(g))

    def test_independent_of_edge_listing_order(self):
        g = parse_layout(random_layout_dot(30, 60, seed=7))
        shuffled = list(g.edges)
        np.random.default_rng(3).shuffle(shuffled)
        reordered = LayoutGraph(g.nodes, shuffled)
        self.assertEqual(build_collision_graph(g).dual_edges, build_collision_graph(reordered).dual_edges)

    def test_weights_are_one(self):
        g = parse_layout(karate_dot())
        dual = build_collision_graph(g)
        assert dual.edge_count > 0
        assert all(e.weight == 1.0 for e in dual.dual_edges)
        assert all(e.i < e.j for e in dual.dual_edges)

    def test_karate_has_isolated_edge(self):
        g = parse_layout(karate_dot())
        dual = build_collision_graph(g)
        self.assertEqual(len(g.edges), 78)
        parts = components(dual)
        assert len(parts) > 1
        isolated = next(e.id for e in g.edges if {e.source, e.target} == {'0', '11'})
        self.assertIn([dual.index_of(isolated)], parts)
        self.assertEqual(sorted(i for part in parts for i in part), list(range(78)))


class DualGraphTests(SimpleTestCase):
    def test_components_singletons_last(self):
        dual = DualCollisionGraph([10, 11, 12, 13, 14], [(3, 4, 1.0, None), (1, 2, 1.0, None)])
        self.assertEqual(components(dual), [[1, 2], [3, 4], [0]])

    def test_neighbors_are_sorted(self):
        dual = DualCollisionGraph(range(4), [(0, 3, 1.0, None), (0, 1, 0.5, None)])
        self.assertEqual(dual.neighbors(0), [(1, 0.5), (3, 1.0)])

    def test_rejects_bad_weights(self):
        with self.assertRaises(ValueError):
            DualCollisionGraph(range(2), [(0, 1, 0.0, None)])
        with self.assertRaises(ValueError):
            DualCollisionGraph(range(2), [(1, 1, 1.0, None)])

    def test_map_dual_uses_inverse_hops(self):
        dual = build_map_dual({'a': {'b'}, 'b': {'a', 'c'}, 'c': {'b'}, 'd': set()})
        self.assertEqual(dual.node_ids, ('a', 'b', 'c', 'd'))
        weights = {(e.i, e.j): e.weight for e in dual.dual_edges}
        self.assertEqual(weights, {(0, 1): 1.0, (1, 2): 1.0, (0, 2): 0.5})
        self.assertEqual(components(dual), [[0, 1, 2], [3]])
