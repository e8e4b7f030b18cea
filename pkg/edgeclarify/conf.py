"""Access to the ``CLARIFY`` settings dict with built-in defaults."""
from pathlib import Path

from django.conf import settings

DEFAULTS = {
    'GAMUT_CACHE_DIR': Path.home() / '.cache' / 'edgeclarify',
    'PALETTE_SAMPLES': 10000,
    'SMALL_GRAPH_EDGES': 50,
}


def get_setting(name):
    overrides = getattr(settings, 'CLARIFY', {}) if settings.configured else {}
    return overrides.get(name, DEFAULTS[name])
