"""Minimal deterministic SVG emission (no timestamps, no ids).

Static figures only: interval-union bars (covers), spectrum value rugs,
and dimension-bound convergence polylines.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence

from .intervals import IntervalUnion

_W, _PAD = 720.0, 36.0


def _header(height: float) -> list[str]:
    return [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W:.0f}" '
        f'height="{height:.0f}" viewBox="0 0 {_W:.0f} {height:.0f}">',
        '<rect width="100%" height="100%" fill="white"/>',
    ]


def _xmap(lo: float, hi: float):
    span = hi - lo if hi > lo else 1.0
    return lambda x: _PAD + (float(x) - lo) * (_W - 2 * _PAD) / span


def cover_figure(rows: Sequence[tuple[str, IntervalUnion]],
                 highlight: Optional[tuple[float, float]] = None) -> str:
    """Horizontal bar chart: one row per labelled interval union."""
    if not rows:
        raise ValueError("nothing to draw")
    los = [float(u.hull[0]) for _, u in rows if u]
    his = [float(u.hull[1]) for _, u in rows if u]
    if highlight:
        los.append(highlight[0])
        his.append(highlight[1])
    xm = _xmap(min(los), max(his))
    row_h = 34.0
    height = _PAD * 2 + row_h * len(rows)
    out = _header(height)
    for i, (label, union) in enumerate(rows):
        y = _PAD + row_h * i
        out.append(
            f'<text x="{_PAD:.1f}" y="{y + 10:.1f}" font-size="11" '
            f'font-family="monospace" fill="#333">{label}</text>'
        )
        for lo, hi in union:
            x0, x1 = xm(lo), xm(hi)
            out.append(
                f'<rect x="{x0:.2f}" y="{y + 14:.1f}" '
                f'width="{max(x1 - x0, 0.5):.2f}" height="12" fill="#2b6cb0"/>'
            )
    if highlight:
        x0, x1 = xm(highlight[0]), xm(highlight[1])
        out.append(
            f'<rect x="{x0:.2f}" y="{_PAD - 14:.1f}" width="{x1 - x0:.2f}" '
            f'height="{height - 2 * _PAD + 22:.1f}" fill="#38a16933" '
            f'stroke="#38a169" stroke-dasharray="4 3"/>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def spectrum_rug(values: Sequence[float], label: str = "") -> str:
    """Vertical tick per value on a horizontal axis."""
    if not values:
        raise ValueError("nothing to draw")
    xm = _xmap(min(values), max(values))
    height = 120.0
    out = _header(height)
    out.append(
        f'<line x1="{_PAD:.1f}" y1="80" x2="{_W - _PAD:.1f}" y2="80" '
        'stroke="#999" stroke-width="1"/>'
    )
    for v in values:
        x = xm(v)
        out.append(
            f'<line x1="{x:.2f}" y1="50" x2="{x:.2f}" y2="80" '
            'stroke="#c05621" stroke-width="1.2"/>'
        )
    if label:
        out.append(
            f'<text x="{_PAD:.1f}" y="24" font-size="12" '
            f'font-family="monospace" fill="#333">{label}</text>'
        )
    for v in (min(values), max(values)):
        out.append(
            f'<text x="{xm(v):.1f}" y="100" font-size="10" text-anchor="middle" '
            f'font-family="monospace" fill="#555">{v:.6g}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def convergence_figure(depths: Sequence[int], alphas: Sequence[float],
                       betas: Sequence[float]) -> str:
    """alpha_n and beta_n against depth."""
    vals = list(alphas) + list(betas)
    lo, hi = min(vals), max(vals)
    if hi == lo:
        lo, hi = lo - 0.5, hi + 0.5
    height = 260.0
    xm = _xmap(min(depths), max(depths) if max(depths) > min(depths) else min(depths) + 1)
    pad_y, span_y = 30.0, height - 60.0

    def ym(v: float) -> float:
        return pad_y + (hi - v) * span_y / (hi - lo)

    out = _header(height)
    for series, color, name in ((alphas, "#2b6cb0", "alpha_n"), (betas, "#c05621", "beta_n")):
        pts = " ".join(f"{xm(d):.2f},{ym(v):.2f}" for d, v in zip(depths, series))
        out.append(
            f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.6"/>'
        )
        out.append(
            f'<text x="{_W - _PAD - 70:.1f}" y="{ym(series[-1]) - 5:.1f}" '
            f'font-size="11" font-family="monospace" fill="{color}">{name}</text>'
        )
    for d in depths:
        out.append(
            f'<text x="{xm(d):.1f}" y="{height - 12:.1f}" font-size="10" '
            f'text-anchor="middle" font-family="monospace" fill="#555">{d}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"
