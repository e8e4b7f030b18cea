"""
The end-to-end run: parse, build the dual graph, build the color space,
clarify, emit.
"""
import json
import logging
import math
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .collision import build_collision_graph, build_map_dual
from .colorspace import GamutSampleConfig, interpolate_palette, make_gray, make_rgb_box, sample_lab_gamut
from .conf import get_setting
from .exceptions import ClarifyError
from .geometry import GeomConfig
from .layout_io import edge_hex_colors, emit_colored_dot, emit_map_dot, parse_adjacency, parse_layout
from .optimizer import OptimizerConfig, clarify
from .palettes import resolve_palette, rgb_to_hex
from .render import RenderOptions, emit_svg

logger = logging.getLogger(__name__)

OUTPUT_FORMATS = ("dot", "svg", "json")


@dataclass(frozen=True)
class PipelineOptions:
    color_scheme: str = "rgb"
    lightness: Optional[tuple] = None
    epsilon: float = 1e-2
    random_starts: Optional[int] = None
    seed: int = 0
    geom: GeomConfig = field(default_factory=GeomConfig)
    output: str = "dot"
    dash_styles: bool = False
    map_mode: bool = False
    palette_ordering: str = "tsp"
    # palette:<path> reads files only when set
    allow_palette_files: bool = True
    input: Optional[str] = None

    def __post_init__(self):
        if self.output not in OUTPUT_FORMATS:
            raise ClarifyError(f"unknown output format {self.output!r}")
        if self.lightness is not None and self.color_scheme != "lab":
            raise ClarifyError("a lightness range only applies to the lab color scheme")
        if self.map_mode and self.output == "svg":
            raise ClarifyError("map mode writes dot or json, not svg")


@dataclass
class PipelineResult:
    output: str
    report: dict
    dual: object
    assignment: object
    layout: object = None


class _Stopwatch:
    def __init__(self):
        self.timings = {}

    @contextmanager
    def stage(self, name):
        started = time.perf_counter()
        yield
        self.timings[name] = time.perf_counter() - started
        logger.info("%s took %.3fs", name, self.timings[name])


def build_space(options):
    scheme = options.color_scheme
    if scheme == "rgb":
        return make_rgb_box()
    if scheme == "gray":
        return make_gray()
    if scheme == "lab":
        l_min, l_max = options.lightness or (0.0, 100.0)
        return sample_lab_gamut(GamutSampleConfig(l_min=l_min, l_max=l_max))
    if scheme.startswith("palette:"):
        palette = resolve_palette(scheme[len("palette:"):], allow_files=options.allow_palette_files)
        return interpolate_palette(palette, get_setting("PALETTE_SAMPLES"), options.palette_ordering)
    raise ClarifyError(f"unknown color scheme {scheme!r}")


def _finite(value):
    return value if math.isfinite(value) else None


def _render_report(report):
    """The run report as ColoringReportSerializer renders it."""
    # serializers imports this module
    from .serializers import ColoringReportSerializer

    return dict(ColoringReportSerializer(report).data)


def run_pipeline(options, text=None):
    """
    Run every stage on ``text`` (or the contents of ``options.input``) and
    return the rendered output together with the run report.
    """
    if text is None:
        if not options.input:
            raise ClarifyError("no input given")
        text = Path(options.input).read_text()
    watch = _Stopwatch()
    layout = adjacency = None

    with watch.stage("parse"):
        if options.map_mode:
            adjacency = parse_adjacency(text)
        else:
            layout = parse_layout(text, options.geom.spline_flatten_tol)
    with watch.stage("collision"):
        dual = build_map_dual(adjacency) if options.map_mode else build_collision_graph(layout, options.geom)
    with watch.stage("space"):
        space = build_space(options)
    with watch.stage("optimize"):
        cfg = OptimizerConfig(rng_seed=options.seed, epsilon=options.epsilon, random_starts=options.random_starts)
        assignment = clarify(dual, space, cfg)

    with watch.stage("emit"):
        if options.map_mode:
            colors = {dual.node_ids[i]: rgb_to_hex(p.to_rgb()) for i, p in assignment.colors.items()}
            items = [{"region": region, "color": colors[region]} for region in dual.node_ids]
            body = emit_map_dot(adjacency, colors) if options.output == "dot" else None
            counts = (len(adjacency), sum(len(n) for n in adjacency.values()) // 2)
        else:
            colors = edge_hex_colors(dual, assignment)
            items = [
                {"id": e.id, "source": e.source, "target": e.target, "color": colors[e.id]}
                for e in sorted(layout.edges, key=lambda e: e.id)
            ]
            if options.output == "dot":
                body = emit_colored_dot(layout, colors)
            elif options.output == "svg":
                points = {dual.node_ids[i]: p for i, p in assignment.colors.items()}
                body = emit_svg(layout, points, RenderOptions(dash_styles=options.dash_styles))
            else:
                body = None
            counts = (len(layout.nodes), len(layout.edges))

    report = _render_report({
        "nodes": counts[0],
        "edges": counts[1],
        "collisions": dual.edge_count,
        "components": len(dual.components),
        "mindist": _finite(assignment.mindist),
        "sumdist": assignment.sumdist,
        "color_scheme": options.color_scheme,
        "seed": options.seed,
        "timings": dict(watch.timings),
    })
    logger.info(
        "%d collisions in %d components, mindist=%s", report["collisions"], report["components"], report["mindist"],
    )
    if body is None:
        key = "regions" if options.map_mode else "edge_colors"
        body = json.dumps({"report": report, key: items}, indent=2, sort_keys=True) + "\n"
    return PipelineResult(body, report, dual, assignment, layout)
