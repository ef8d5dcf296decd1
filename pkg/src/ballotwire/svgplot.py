"""Hand-emitted SVG line charts of predictions vs aggregate polling.

No charting dependency: a fixed 640x400 canvas, a documented linear
coordinate transform, and stable numeric formatting make the output
golden-file testable byte for byte.
"""

from __future__ import annotations

from datetime import date
from pathlib import Path
from typing import Sequence

WIDTH = 640
HEIGHT = 400
MARGIN_LEFT = 60
MARGIN_RIGHT = 20
MARGIN_TOP = 40
MARGIN_BOTTOM = 50

SERIES_COLORS = ("#1f6fb2", "#c23b22")   # prediction, polling


def _fmt(value: float) -> str:
    return f"{value:.2f}"


def _scale(values, lo, hi, out_lo, out_hi):
    span = hi - lo if hi > lo else 1.0
    return [out_lo + (v - lo) / span * (out_hi - out_lo) for v in values]


def render_chart(
    dates: Sequence[date],
    prediction: Sequence[float],
    polling: Sequence[float],
    title: str,
    config_hash: str = "",
) -> str:
    """Two-line chart (prediction vs polling) with axes and legend."""
    if len(dates) < 2 or len(prediction) != len(dates) or len(polling) != len(dates):
        raise ValueError("need >= 2 points with equal series lengths")
    y_all = list(prediction) + list(polling)
    y_lo = min(y_all)
    y_hi = max(y_all)
    pad = 0.05 * (y_hi - y_lo if y_hi > y_lo else 1.0)
    y_lo -= pad
    y_hi += pad
    xs = _scale(range(len(dates)), 0, len(dates) - 1,
                MARGIN_LEFT, WIDTH - MARGIN_RIGHT)
    plot_top = MARGIN_TOP
    plot_bottom = HEIGHT - MARGIN_BOTTOM

    def poly(series):
        ys = _scale(series, y_lo, y_hi, plot_bottom, plot_top)
        return " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in zip(xs, ys))

    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" '
        f'height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">',
    ]
    if config_hash:
        lines.append(f"<!-- config:{config_hash} -->")
    lines.append(f'<title>{title}</title>')
    lines.append(f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>')
    lines.append(
        f'<text x="{WIDTH // 2}" y="24" text-anchor="middle" '
        f'font-size="16" font-family="sans-serif">{title}</text>')
    # axes
    lines.append(
        f'<line x1="{MARGIN_LEFT}" y1="{plot_bottom}" '
        f'x2="{WIDTH - MARGIN_RIGHT}" y2="{plot_bottom}" stroke="black"/>')
    lines.append(
        f'<line x1="{MARGIN_LEFT}" y1="{plot_top}" '
        f'x2="{MARGIN_LEFT}" y2="{plot_bottom}" stroke="black"/>')
    # y tick labels (5 evenly spaced)
    for k in range(5):
        frac = k / 4
        value = y_lo + frac * (y_hi - y_lo)
        y_pos = plot_bottom - frac * (plot_bottom - plot_top)
        lines.append(
            f'<text x="{MARGIN_LEFT - 6}" y="{_fmt(y_pos + 4)}" '
            f'text-anchor="end" font-size="11" font-family="sans-serif">'
            f'{_fmt(value)}</text>')
    # x tick labels (dates, first/middle/last)
    for idx in sorted({0, len(dates) // 2, len(dates) - 1}):
        lines.append(
            f'<text x="{_fmt(xs[idx])}" y="{plot_bottom + 20}" '
            f'text-anchor="middle" font-size="11" font-family="sans-serif">'
            f'{dates[idx].isoformat()}</text>')
    # axis titles
    lines.append(
        f'<text x="{WIDTH // 2}" y="{HEIGHT - 10}" text-anchor="middle" '
        f'font-size="12" font-family="sans-serif">date</text>')
    lines.append(
        f'<text x="16" y="{HEIGHT // 2}" text-anchor="middle" font-size="12" '
        f'font-family="sans-serif" transform="rotate(-90 16 {HEIGHT // 2})">'
        f'share %</text>')
    # series
    for series, color in ((prediction, SERIES_COLORS[0]),
                          (polling, SERIES_COLORS[1])):
        lines.append(
            f'<polyline fill="none" stroke="{color}" stroke-width="2" '
            f'points="{poly(series)}"/>')
    # legend
    for k, (label, color) in enumerate((("prediction", SERIES_COLORS[0]),
                                        ("aggregate polling", SERIES_COLORS[1]))):
        y_pos = MARGIN_TOP + 16 * k
        lines.append(
            f'<line x1="{WIDTH - 180}" y1="{y_pos}" x2="{WIDTH - 156}" '
            f'y2="{y_pos}" stroke="{color}" stroke-width="2"/>')
        lines.append(
            f'<text x="{WIDTH - 150}" y="{y_pos + 4}" font-size="11" '
            f'font-family="sans-serif">{label}</text>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def write_chart(path: str | Path, *args, **kwargs) -> None:
    Path(path).write_text(render_chart(*args, **kwargs), encoding="utf-8")
