"""Hex colors, bundled ColorBrewer palettes and palette lookup."""
import logging
import math
from pathlib import Path

from django.db import DatabaseError

from .exceptions import ColorSpaceError, LayoutParseError
from .validators import HEX_COLOR_RE

logger = logging.getLogger(__name__)

BUILTIN_PALETTES = {
    "accent_8": ["#7fc97f", "#beaed4", "#fdc086", "#ffff99", "#386cb0", "#f0027f", "#bf5b17", "#666666"],
    "dark2_8": ["#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02", "#a6761d", "#666666"],
    "pastel1_9": ["#fbb4ae", "#b3cde3", "#ccebc5", "#decbe4", "#fed9a6", "#ffffcc", "#e5d8bd", "#fddaec", "#f2f2f2"],
    "set1_9": ["#e41a1c", "#377eb8", "#4daf4a", "#984ea3", "#ff7f00", "#ffff33", "#a65628", "#f781bf", "#999999"],
    "set2_8": ["#66c2a5", "#fc8d62", "#8da0cb", "#e78ac3", "#a6d854", "#ffd92f", "#e5c494", "#b3b3b3"],
    "paired_12": [
        "#a6cee3", "#1f78b4", "#b2df8a", "#33a02c", "#fb9a99", "#e31a1c",
        "#fdbf6f", "#ff7f00", "#cab2d6", "#6a3d9a", "#ffff99", "#b15928",
    ],
}


def hex_to_rgb(value):
    if not HEX_COLOR_RE.match(value):
        raise ColorSpaceError(f"{value!r} is not a #rrggbb color")
    return tuple(int(value[i:i + 2], 16) / 255 for i in (1, 3, 5))


def rgb_to_hex(rgb):
    """Lowercase #rrggbb; each channel is scaled by 255 and rounded half up."""
    channels = []
    for v in rgb:
        if not 0 <= v <= 1:
            raise ColorSpaceError(f"RGB component {v} outside [0, 1]")
        channels.append(int(math.floor(v * 255 + 0.5)))
    return "#" + "".join(f"{c:02x}" for c in channels)


def parse_palette_text(text):
    """One ``#rrggbb`` color per line; blank lines and ``#`` comments with a space are skipped."""
    colors = []
    for number, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("# "):
            continue
        if not HEX_COLOR_RE.match(line):
            raise LayoutParseError("not a #rrggbb color", line=number)
        colors.append(hex_to_rgb(line.lower()))
    if len(colors) < 2:
        raise LayoutParseError("a palette needs at least two colors")
    return colors


def _builtin_key(name):
    key = name.lower()
    if key.startswith("colorbrewer_"):
        key = key[len("colorbrewer_"):]
    return key


def _stored_palette(name):
    from .models import Palette

    try:
        palette = Palette.objects.filter(name__iexact=name).first()
    except DatabaseError:
        logger.debug("palette table unavailable, skipping stored palettes")
        return None
    return palette.rgb_colors() if palette else None


def resolve_palette(name, allow_files=True):
    """
    RGB colors of a palette given by bundled name (``Dark2_8``,
    ``ColorBrewer_dark2_8``), by path to a palette file, or by the name of a
    stored Palette. Paths are only tried when ``allow_files`` is set.
    """
    key = _builtin_key(name)
    if key in BUILTIN_PALETTES:
        return [hex_to_rgb(c) for c in BUILTIN_PALETTES[key]]
    if allow_files and Path(name).is_file():
        return parse_palette_text(Path(name).read_text())
    stored = _stored_palette(name)
    if stored:
        return stored
    raise ColorSpaceError(f"unknown palette {name!r}")
