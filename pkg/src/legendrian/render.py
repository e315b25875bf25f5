"""Deterministic SVG drawings of front and Lagrangian projections."""

from __future__ import annotations

import numpy as np

from .geometry import SampledLoop, Space, ValidationError, stereographic
from .projections import FrontCurve, PlanarCurve, project

SIZE = 480.0
MARGIN = 24.0
GLYPH = 5.0


def _fmt(v: float) -> str:
    s = f"{v:.3f}"
    return "0.000" if s == "-0.000" else s


def svg_document(pc: PlanarCurve, cusps=(), title: str = "") -> str:
    """SVG 1.1 text: one closed polyline plus one diamond per cusp, in index order."""
    pts = np.asarray(pc.samples, dtype=float)
    lo = pts.min(axis=0)
    span = float(max(np.ptp(pts, axis=0).max(), 1e-12))
    scale = (SIZE - 2.0 * MARGIN) / span
    # y axis points up in the drawing
    xy = np.column_stack([MARGIN + (pts[:, 0] - lo[0]) * scale, SIZE - MARGIN - (pts[:, 1] - lo[1]) * scale])
    coords = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in xy)
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE:.0f}" height="{SIZE:.0f}" '
        f'viewBox="0 0 {SIZE:.0f} {SIZE:.0f}">',
    ]
    if title:
        lines.append(f"<title>{title}</title>")
    lines.append(f'<polygon class="curve" fill="none" stroke="black" stroke-width="1.2" points="{coords}"/>')
    for c in sorted(int(c) for c in cusps):
        x, y = xy[c]
        d = (
            f"M {_fmt(x)} {_fmt(y - GLYPH)} L {_fmt(x + GLYPH)} {_fmt(y)} "
            f"L {_fmt(x)} {_fmt(y + GLYPH)} L {_fmt(x - GLYPH)} {_fmt(y)} Z"
        )
        lines.append(f'<path class="cusp" data-index="{c}" fill="red" stroke="none" d="{d}"/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def render(item, mode: str, pole=None, title: str = "") -> str:
    """Draw a curve or a front in ``front`` or ``lagrangian`` mode.

    S^3 curves need a ``pole`` for the stereographic chart.
    """
    if mode not in ("front", "lagrangian"):
        raise ValidationError(f"unknown render mode {mode!r}")
    if isinstance(item, FrontCurve):
        if mode != "front":
            raise ValidationError("a front can only be drawn in front mode")
        return svg_document(item, item.cusps, title)
    if not isinstance(item, SampledLoop):
        raise ValidationError("render needs a curve or a front")
    if item.space is Space.S3:
        if pole is None:
            raise ValidationError("S^3 curves need --pole for the stereographic chart")
        item = stereographic(item, np.asarray(pole, dtype=float))
    pc = project(item, mode)
    cusps = pc.cusps if isinstance(pc, FrontCurve) else ()
    return svg_document(pc, cusps, title)
