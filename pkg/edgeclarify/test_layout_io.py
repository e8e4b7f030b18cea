import re
from unittest import mock

import pydot
from django.test import SimpleTestCase

from .collision import DualCollisionGraph
from .colorspace import ColorPoint
from .exceptions import LayoutParseError
from .fixtures.layouts import karate_dot, random_layout_dot
from .geometry import Point2, evaluate_cubic, point_segment_distance
from .layout_io import (
    edge_hex_colors, emit_colored_dot, emit_map_dot, parse_adjacency, parse_layout, parse_spline_pos,
)
from .optimizer import ColorAssignment

SPLINE_DOT = '''digraph G {
  a [pos="0,0", label="start"];
  b [pos="100,20"];
  a -> b [pos="e,100,20 0,0 30,80 70,-40 97,19", color=red, penwidth=2];
}
'''


class ParseLayoutTests(SimpleTestCase):
    def test_minimal_graph(self):
        g = parse_layout('graph{a[pos="0,0"];b[pos="10,0"];a--b;}')
        self.assertEqual(set(g.nodes), {'a', 'b'})
        self.assertEqual(len(g.edges), 1)
        edge = g.edges[0]
        self.assertEqual(edge.geometry.points, (Point2(0, 0), Point2(10, 0)))
        assert not g.directed

    def test_spline_is_flattened_within_tolerance(self):
        g = parse_layout(SPLINE_DOT)
        assert g.directed
        self.assertEqual(g.labels, {'a': 'start'})
        line = g.edges[0].geometry
        self.assertEqual(line.end, Point2(100, 20))
        controls = [Point2(0, 0), Point2(30, 80), Point2(70, -40), Point2(97, 19)]
        for k in range(501):
            p = evaluate_cubic(*controls, k / 500)
            self.assertLessEqual(min(point_segment_distance(p, s) for s in line.segments), 0.25 + 1e-9)

    def test_node_without_pos(self):
        with self.assertRaisesMessage(LayoutParseError, "'b'"):
            parse_layout('graph{a[pos="0,0"];b;a--b;}')

    def test_edge_to_unknown_node(self):
        with self.assertRaisesMessage(LayoutParseError, "'c'"):
            parse_layout('graph{a[pos="0,0"];b[pos="1,1"];a--c;}')

    def test_malformed_pos_reports_line(self):
        text = 'graph {\n  a [pos="0,0"];\n  b [pos="1;2"];\n  a -- b;\n}\n'
        with self.assertRaisesMessage(LayoutParseError, 'line 3'):
            parse_layout(text)

    def test_self_loop_rejected(self):
        with self.assertRaises(LayoutParseError):
            parse_layout('graph{a[pos="0,0"];a--a;}')

    def test_zero_length_edge_rejected(self):
        with self.assertRaises(LayoutParseError):
            parse_layout('graph{a[pos="1,1"];b[pos="1,1"];a--b;}')

    def test_subgraphs_rejected(self):
        with self.assertRaisesMessage(LayoutParseError, 'subgraph'):
            parse_layout('graph{subgraph s {a[pos="0,0"];b[pos="1,0"];} a--b;}')

    def test_not_dot(self):
        with self.assertRaises(LayoutParseError):
            parse_layout('this is not a graph')

    def test_bad_spline_control_count(self):
        with self.assertRaises(LayoutParseError):
            parse_spline_pos('0,0 1,1 2,2', 'x', 'edge', 0.25)

    def test_karate_fixture(self):
        g = parse_layout(karate_dot())
        self.assertEqual((len(g.nodes), len(g.edges)), (34, 78))
        self.assertEqual([e.id for e in g.edges], list(range(78)))


def uniform_assignment(g, point):
    dual = DualCollisionGraph([e.id for e in sorted(g.edges, key=lambda e: e.id)])
    colors = {i: point for i in range(len(dual))}
    return dual, ColorAssignment(colors, float('inf'), 0.0)


class EmitDotTests(SimpleTestCase):
    def test_black_edges(self):
        g = parse_layout('graph{a[pos="0,0"];b[pos="10,0"];a--b;}')
        dual, assignment = uniform_assignment(g, ColorPoint((0.0, 0.0, 0.0), 'rgb'))
        out = emit_colored_dot(g, edge_hex_colors(dual, assignment))
        self.assertIn('color="#000000"', out)

    def test_rgb_scaling(self):
        g = parse_layout('graph{a[pos="0,0"];b[pos="10,0"];a--b;}')
        dual, assignment = uniform_assignment(g, ColorPoint((0.7, 0.0, 0.0), 'rgb'))
        self.assertEqual(edge_hex_colors(dual, assignment), {0: '#b30000'})

    def test_other_attributes_preserved(self):
        g = parse_layout(SPLINE_DOT)
        dual, assignment = uniform_assignment(g, ColorPoint((0.0, 0.0, 0.7), 'rgb'))
        out = emit_colored_dot(g, edge_hex_colors(dual, assignment))
        self.assertIn('penwidth=2', out)
        self.assertIn('label=start', out.replace('"', ''))
        self.assertIn('color="#0000b3"', out)
        self.assertNotIn('color=red', out)

    def test_round_trip(self):
        g = parse_layout(karate_dot())
        dual, assignment = uniform_assignment(g, ColorPoint((0.2, 0.4, 0.6), 'rgb'))
        again = parse_layout(emit_colored_dot(g, edge_hex_colors(dual, assignment)))
        self.assertEqual(again.nodes, g.nodes)
        self.assertEqual(
            [(e.source, e.target, e.geometry.points) for e in again.edges],
            [(e.source, e.target, e.geometry.points) for e in g.edges],
        )

    def test_every_color_is_lowercase_hex(self):
        g = parse_layout(karate_dot())
        dual, assignment = uniform_assignment(g, ColorPoint((60.0, 20.0, -30.0), 'lab'))
        out = emit_colored_dot(g, edge_hex_colors(dual, assignment))
        colors = re.findall(r'color="([^"]*)"', out)
        self.assertEqual(len(colors), 78)
        assert all(re.fullmatch(r'#[0-9a-f]{6}', c) for c in colors)

    def test_large_layout_keeps_edge_order(self):
        small = parse_layout(karate_dot())
        large = parse_layout(random_layout_dot(500, 2000, seed=11))
        get_edges = pydot.Graph.get_edges
        calls, outputs = [], []
        for g in (small, large):
            colors = {e.id: f"#{e.id:06x}" for e in g.edges}
            with mock.patch.object(pydot.Graph, "get_edges", autospec=True, side_effect=get_edges) as spy:
                outputs.append(emit_colored_dot(g, colors))
            calls.append(spy.call_count)
        self.assertEqual(calls[0], calls[1])
        self.assertEqual(re.findall(r'color="([^"]*)"', outputs[1]), [f"#{k:06x}" for k in range(2000)])


class MapTests(SimpleTestCase):
    def test_parse_adjacency_is_symmetric(self):
        adjacency = parse_adjacency('# regions\na: b c\nb: c\n\nd:\n')
        self.assertEqual(adjacency, {'a': {'b', 'c'}, 'b': {'a', 'c'}, 'c': {'a', 'b'}, 'd': set()})

    def test_bad_line(self):
        with self.assertRaisesMessage(LayoutParseError, 'line 2'):
            parse_adjacency('a: b\nno colon here\n')

    def test_empty_map(self):
        with self.assertRaises(LayoutParseError):
            parse_adjacency('# nothing\n')

    def test_emit_map_dot(self):
        out = emit_map_dot({'a': {'b'}, 'b': {'a'}}, {'a': '#ff0000', 'b': '#00ff00'})
        self.assertIn('fillcolor="#ff0000"', out)
        self.assertIn('style=filled', out)
        self.assertEqual(out.count('--'), 1)
