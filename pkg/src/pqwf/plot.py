"""Minimal SVG rendering of a waveform and its detail bands."""

from __future__ import annotations

import numpy as np

_W, _H, _PAD = 800, 140, 24


def _polyline(values: np.ndarray, top: float) -> str:
    v = np.asarray(values, dtype=float)
    span = float(np.max(np.abs(v))) or 1.0
    xs = _PAD + np.linspace(0, _W - 2 * _PAD, len(v))
    ys = top + _H / 2 - (v / span) * (_H / 2 - 8)
    pts = " ".join(f"{x:.2f},{y:.2f}" for x, y in zip(xs, ys))
    return f'<polyline fill="none" stroke="black" stroke-width="1" points="{pts}"/>'


def render_svg(series: list[tuple[str, np.ndarray]], title: str) -> str:
    height = _PAD + len(series) * (_H + _PAD)
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{height}" '
        f'font-family="sans-serif" font-size="12">',
        f'<text x="{_PAD}" y="16">{title}</text>',
    ]
    for k, (label, values) in enumerate(series):
        top = _PAD + k * (_H + _PAD)
        parts.append(f'<rect x="{_PAD}" y="{top}" width="{_W - 2 * _PAD}" height="{_H}" fill="none" stroke="#bbb"/>')
        parts.append(f'<text x="{_PAD + 4}" y="{top + 14}">{label}</text>')
        parts.append(_polyline(values, top))
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
