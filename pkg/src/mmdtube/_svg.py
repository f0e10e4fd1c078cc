"""Tiny deterministic SVG line/scatter renderer for emitted plot files.

Intentionally minimal: one series, fixed canvas, no text shaping beyond
axis labels.  Output bytes depend only on the data, so plots can be diffed
across runs like every other artifact.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

_W, _H = 640, 420
_MARGIN = 56


def _scale(values: np.ndarray, lo_px: float, hi_px: float) -> np.ndarray:
    vmin, vmax = float(np.min(values)), float(np.max(values))
    if vmax == vmin:
        vmax = vmin + 1.0
    return lo_px + (values - vmin) / (vmax - vmin) * (hi_px - lo_px)


def line_plot(path, x, y, title: str = "", xlabel: str = "", ylabel: str = "",
              scatter: bool = False) -> Path:
    """Write a single-series line (or scatter) plot as an SVG file."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    px = _scale(x, _MARGIN, _W - _MARGIN)
    py = _scale(y, _H - _MARGIN, _MARGIN)
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}">',
        f'<rect width="{_W}" height="{_H}" fill="white"/>',
        f'<line x1="{_MARGIN}" y1="{_H - _MARGIN}" x2="{_W - _MARGIN}" '
        f'y2="{_H - _MARGIN}" stroke="black"/>',
        f'<line x1="{_MARGIN}" y1="{_MARGIN}" x2="{_MARGIN}" '
        f'y2="{_H - _MARGIN}" stroke="black"/>',
    ]
    if title:
        parts.append(f'<text x="{_W // 2}" y="24" text-anchor="middle" '
                     f'font-size="14">{title}</text>')
    if xlabel:
        parts.append(f'<text x="{_W // 2}" y="{_H - 12}" text-anchor="middle" '
                     f'font-size="12">{xlabel}</text>')
    if ylabel:
        parts.append(f'<text x="16" y="{_H // 2}" text-anchor="middle" font-size="12" '
                     f'transform="rotate(-90 16 {_H // 2})">{ylabel}</text>')
    if scatter:
        for xi, yi in zip(px, py):
            parts.append(f'<circle cx="{xi:.2f}" cy="{yi:.2f}" r="3" fill="steelblue"/>')
    else:
        pts = " ".join(f"{xi:.2f},{yi:.2f}" for xi, yi in zip(px, py))
        parts.append(f'<polyline points="{pts}" fill="none" stroke="steelblue" '
                     f'stroke-width="1.5"/>')
    parts.append("</svg>")
    path = Path(path)
    path.write_text("\n".join(parts) + "\n")
    return path
