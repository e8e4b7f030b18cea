"""Errors raised by the edge clarification library."""


class ClarifyError(ValueError):
    """Base class for every error the library raises on bad input."""


class GeometryError(ClarifyError):
    """Degenerate geometry: zero-length segments, malformed splines."""


class LayoutParseError(ClarifyError):
    """A layout, palette or adjacency file could not be parsed."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ColorSpaceError(ClarifyError):
    """Out-of-range colors, empty color spaces and unknown palettes."""
