"""plotkit: offline figures from ris-sizer pool/summary/sizing/replay files."""

__version__ = "0.1.0"

from .render import FIGURE_KINDS, FigureSpec, RenderResult, render  # noqa: F401
