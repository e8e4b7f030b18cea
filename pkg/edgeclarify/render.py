"""SVG preview of a colored layout."""
from dataclasses import dataclass
from xml.sax.saxutils import escape, quoteattr

from .palettes import rgb_to_hex

# gray level -> stroke-dasharray; black stays solid
DASH_STYLES = ((1 / 3, None), (2 / 3, "8,4"), (float("inf"), "3,3"))


@dataclass(frozen=True)
class RenderOptions:
    dash_styles: bool = False
    node_radius: float = 4.0
    stroke_width: float = 1.5
    margin: float = 12.0
    font_size: float = 10.0


def dash_for_gray(level):
    """Dash pattern for a gray level in [0, 1]: solid below 1/3, long dashes below 2/3, short dashes above."""
    for limit, pattern in DASH_STYLES:
        if level < limit:
            return pattern
    return DASH_STYLES[-1][1]


def emit_svg(g, edge_colors, options=None):
    """
    SVG text with nodes as labelled circles and edges as colored paths.
    ``edge_colors`` maps edge id to ColorPoint.
    """
    options = options or RenderOptions()
    xs = [p.x for p in g.nodes.values()] + [p.x for e in g.edges for p in e.geometry.points]
    ys = [p.y for p in g.nodes.values()] + [p.y for e in g.edges for p in e.geometry.points]
    pad = options.margin + options.node_radius
    min_x, max_x = min(xs) - pad, max(xs) + pad
    min_y, max_y = min(ys) - pad, max(ys) + pad
    width, height = max_x - min_x, max_y - min_y

    def sx(x):
        return x - min_x

    def sy(y):
        # layout y grows upwards
        return max_y - y

    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.2f}" height="{height:.2f}" '
        f'viewBox="0 0 {width:.2f} {height:.2f}">',
        '<g class="edges" fill="none">',
    ]
    for edge in sorted(g.edges, key=lambda e: e.id):
        point = edge_colors[edge.id]
        pts = edge.geometry.points
        path_d = "M " + " L ".join(f"{sx(p.x):.2f} {sy(p.y):.2f}" for p in pts)
        dash = ""
        if options.dash_styles and point.tag == "gray":
            pattern = dash_for_gray(point.coords[0])
            if pattern:
                dash = f' stroke-dasharray="{pattern}"'
        lines.append(
            f'<path d="{path_d}" stroke="{rgb_to_hex(point.to_rgb())}" '
            f'stroke-width="{options.stroke_width}"{dash}/>'
        )
    lines.append("</g>")
    lines.append('<g class="nodes">')
    for name, p in g.nodes.items():
        label = g.labels.get(name, name)
        lines.append(
            f'<circle cx="{sx(p.x):.2f}" cy="{sy(p.y):.2f}" r="{options.node_radius}" '
            f'fill="#ffffff" stroke="#444444"><title>{escape(name)}</title></circle>'
        )
        lines.append(
            f'<text x="{sx(p.x) + options.node_radius + 1:.2f}" y="{sy(p.y) - options.node_radius - 1:.2f}" '
            f'font-size="{options.font_size}" font-family={quoteattr("sans-serif")}>{escape(label)}</text>'
        )
    lines.append("</g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
