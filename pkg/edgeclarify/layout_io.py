"""
Reading and writing layouts, palettes and map adjacency.

Layouts are a subset of DOT as produced by ``neato -n2``: node statements with
``pos="x,y"`` and edge statements whose optional ``pos`` holds a spline
(``e,x,y s,x,y x1,y1 x2,y2 ...``). Subgraphs are not supported.
"""
import copy
import logging
import math

import pydot

from .collision import LayoutEdge, LayoutGraph
from .exceptions import GeometryError, LayoutParseError
from .geometry import Point2, Polyline, flatten_polyline
from .palettes import rgb_to_hex

logger = logging.getLogger(__name__)

DEFAULT_STATEMENTS = {"node", "edge", "graph"}


def _unquote(value):
    if value is None:
        return None
    value = str(value)
    if len(value) >= 2 and value[0] == value[-1] == '"':
        value = value[1:-1]
    return value.replace("\\\n", "").replace("\\\r\n", "")


def _line_of(text, needle):
    for number, line in enumerate(text.splitlines(), start=1):
        if needle in line:
            return number
    return None


def _parse_point(token, text, what):
    parts = token.rstrip("!").split(",")
    try:
        x, y = float(parts[0]), float(parts[1])
    except (IndexError, ValueError):
        raise LayoutParseError(f"malformed pos {token!r} for {what}", line=_line_of(text, token)) from None
    if len(parts) > 3 or not (math.isfinite(x) and math.isfinite(y)):
        raise LayoutParseError(f"malformed pos {token!r} for {what}", line=_line_of(text, token))
    return Point2(x, y)


def parse_spline_pos(value, text, what, tol):
    """Polyline of a Graphviz edge ``pos`` value."""
    start = end = None
    controls = []
    for token in value.split():
        if token.startswith("e,"):
            end = _parse_point(token[2:], text, what)
        elif token.startswith("s,"):
            start = _parse_point(token[2:], text, what)
        else:
            controls.append(_parse_point(token, text, what))
    try:
        return flatten_polyline(controls, tol, start=start, end=end)
    except GeometryError as exc:
        raise LayoutParseError(f"{what}: {exc}", line=_line_of(text, value.split()[0] if value.split() else value)) from None


def _read_graph(text):
    try:
        graphs = pydot.graph_from_dot_data(text)
    except Exception as exc:  # pyparsing raises its own exception types
        raise LayoutParseError(f"not a DOT graph: {exc}", line=getattr(exc, "lineno", None)) from None
    if not graphs:
        raise LayoutParseError("not a DOT graph")
    if len(graphs) > 1:
        raise LayoutParseError("only one graph per file is supported")
    graph = graphs[0]
    if graph.get_subgraph_list():
        raise LayoutParseError("subgraphs are not supported; flatten the layout first")
    return graph


def parse_layout(text, tol=0.25):
    """
    LayoutGraph of a positioned DOT graph. Edges without ``pos`` are straight
    segments between their node positions; spline edges are flattened to
    within ``tol`` layout units.
    """
    graph = _read_graph(text)
    nodes, labels = {}, {}
    for node in graph.get_nodes():
        name = _unquote(node.get_name())
        if name in DEFAULT_STATEMENTS:
            continue
        pos = _unquote(node.get("pos"))
        if pos is None:
            raise LayoutParseError(f"node {name!r} has no pos attribute", line=_line_of(text, name))
        nodes[name] = _parse_point(pos, text, f"node {name!r}")
        label = _unquote(node.get("label"))
        if label is not None:
            labels[name] = label

    edges = []
    for index, edge in enumerate(graph.get_edges()):
        source, target = _unquote(edge.get_source()), _unquote(edge.get_destination())
        what = f"edge {source} -- {target}"
        for name in (source, target):
            if name not in nodes:
                raise LayoutParseError(f"node {name!r} has no pos attribute", line=_line_of(text, name))
        if source == target:
            raise LayoutParseError(f"self-loop on {source!r} is not supported", line=_line_of(text, source))
        pos = _unquote(edge.get("pos"))
        if pos:
            geometry = parse_spline_pos(pos, text, what, tol)
        else:
            try:
                geometry = Polyline.straight(nodes[source], nodes[target])
            except GeometryError:
                raise LayoutParseError(f"{what} has zero length", line=_line_of(text, source)) from None
        edges.append(LayoutEdge(index, source, target, geometry))

    logger.debug("parsed layout: %d nodes, %d edges", len(nodes), len(edges))
    return LayoutGraph(nodes, edges, labels, graph.get_type() == "digraph", graph)


def _format_number(value):
    return f"{value:.6g}"


def _build_dot(g):
    graph = pydot.Dot(graph_type="digraph" if g.directed else "graph")
    for name, point in g.nodes.items():
        node = pydot.Node(f'"{name}"', pos=f'"{_format_number(point.x)},{_format_number(point.y)}"')
        if name in g.labels:
            node.set("label", f'"{g.labels[name]}"')
        graph.add_node(node)
    for edge in sorted(g.edges, key=lambda e: e.id):
        attrs = {}
        if len(edge.geometry.points) > 2:
            # a polyline is written back as a spline whose pieces are straight
            pts = edge.geometry.points
            controls = [pts[0]]
            for p, q in zip(pts, pts[1:]):
                controls += [p, q, q]
            attrs["pos"] = '"' + " ".join(f"{_format_number(p.x)},{_format_number(p.y)}" for p in controls) + '"'
        graph.add_edge(pydot.Edge(f'"{edge.source}"', f'"{edge.target}"', **attrs))
    return graph


def edge_hex_colors(dual, assignment):
    """``edge id -> #rrggbb`` for an assignment over a layout's dual graph."""
    return {dual.node_ids[i]: rgb_to_hex(point.to_rgb()) for i, point in assignment.colors.items()}


def emit_colored_dot(g, colors):
    """
    DOT text of the layout with ``color="#rrggbb"`` on every edge. Other
    attributes and statement order are those of the parsed input.
    """
    graph = copy.deepcopy(g.source) if g.source is not None else _build_dot(g)
    ids = [edge.id for edge in sorted(g.edges, key=lambda e: e.id)]
    # get_edges() rebuilds its list on every call
    pydot_edges = graph.get_edges()
    if g.source is not None:
        pydot_edges = [pydot_edges[i] for i in ids]
    for edge_id, pydot_edge in zip(ids, pydot_edges):
        pydot_edge.set("color", f'"{colors[edge_id]}"')
    return graph.to_string()


def parse_adjacency(text):
    """
    Map adjacency, one region per line: ``region: neighbour neighbour ...``.
    Adjacency is symmetric; a neighbour need not have its own line.
    """
    adjacency = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        region, sep, rest = line.partition(":")
        region = region.strip()
        if not sep or not region:
            raise LayoutParseError(f"expected 'region: neighbours', got {raw.strip()!r}", line=number)
        adjacency.setdefault(region, set())
        for other in rest.split():
            if other == region:
                continue
            adjacency[region].add(other)
            adjacency.setdefault(other, set()).add(region)
    if not adjacency:
        raise LayoutParseError("map has no regions")
    return adjacency


def emit_map_dot(adjacency, colors):
    """Adjacency graph with every region filled with its color."""
    graph = pydot.Dot(graph_type="graph")
    for region in sorted(adjacency):
        graph.add_node(pydot.Node(f'"{region}"', style="filled", fillcolor=f'"{colors[region]}"'))
    for region in sorted(adjacency):
        for other in sorted(adjacency[region]):
            if region < other:
                graph.add_edge(pydot.Edge(f'"{region}"', f'"{other}"'))
    return graph.to_string()
