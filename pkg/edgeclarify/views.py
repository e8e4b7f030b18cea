from django.http import HttpResponse
from django.shortcuts import get_object_or_404

from .layout_io import parse_layout
from .models import ColoringRun
from .palettes import hex_to_rgb
from .colorspace import ColorPoint
from .render import RenderOptions, emit_svg


def run_preview(request, pk):
    """
    SVG of a stored run. ``?dash=1`` draws gray runs with dash styles.
    """
    run = get_object_or_404(ColoringRun, pk=pk)
    layout = parse_layout(run.input_dot)
    gray = run.color_scheme == "gray"
    points = {}
    for edge in run.edges.all():
        rgb = hex_to_rgb(edge.color)
        points[edge.edge_index] = ColorPoint((rgb[0],), "gray") if gray else ColorPoint(tuple(rgb), "rgb")
    options = RenderOptions(dash_styles=gray and request.GET.get("dash") == "1")
    return HttpResponse(emit_svg(layout, points, options), content_type="image/svg+xml")
