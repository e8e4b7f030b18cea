import math
import re

from django.core.exceptions import ValidationError
from django.utils.translation import gettext_lazy as _

HEX_COLOR_RE = re.compile(r"^#[0-9a-fA-F]{6}$")


def validate_finite(value, name="value"):
    if value is None or not math.isfinite(value):
        raise ValidationError(_("%(name)s must be a finite number."), params={"name": name})


def validate_open_range(value, lo, hi, name="value"):
    """
    lo < value < hi, both bounds exclusive
    """
    validate_finite(value, name)
    if not lo < value < hi:
        raise ValidationError(
            _("%(name)s must lie strictly between %(lo)s and %(hi)s."),
            params={"name": name, "lo": lo, "hi": hi},
        )


def validate_positive(value, name="value"):
    validate_finite(value, name)
    if value <= 0:
        raise ValidationError(_("%(name)s must be positive."), params={"name": name})


def validate_angle_thresholds(small, straight, parallel):
    """
    0 < parallel < small < 90 < straight < 180
    """
    validate_open_range(small, 0, 90, "small_angle_deg")
    validate_open_range(straight, 90, 180, "straight_angle_deg")
    validate_finite(parallel, "parallel_angle_deg")
    if not 0 < parallel < small:
        raise ValidationError(_("parallel_angle_deg must be positive and smaller than small_angle_deg."))


def validate_lightness_range(l_min, l_max):
    if not 0 <= l_min <= l_max <= 100:
        raise ValidationError(_("Lightness range must satisfy 0 <= MIN <= MAX <= 100."))


def validate_hex_color(value):
    if not HEX_COLOR_RE.match(value or ""):
        raise ValidationError(_("%(value)s is not a #rrggbb color."), params={"value": value})


def validate_palette_colors(value):
    """
    one #rrggbb color per line, at least two colors
    """
    colors = [line.strip() for line in (value or "").splitlines() if line.strip()]
    for color in colors:
        validate_hex_color(color)
    if len(colors) < 2:
        raise ValidationError(_("A palette needs at least two colors."))
