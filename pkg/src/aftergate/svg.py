"""Minimal hand-built SVG output.

These plots are verification aids, not presentation graphics; emitting the
markup directly keeps the package free of a plotting stack and the output
byte-stable for determinism checks.
"""

from __future__ import annotations

import math

import numpy as np

_W, _H = 640, 420
_ML, _MR, _MT, _MB = 60, 20, 20, 45

_COLORS = ["#1f3b73", "#b22222", "#2e7d32", "#e69500", "#6a1b9a"]


def _open(title: str) -> list[str]:
    return [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}">',
        f'<rect width="{_W}" height="{_H}" fill="white"/>',
        f'<text x="{_W / 2:.0f}" y="14" text-anchor="middle" '
        f'font-family="sans-serif" font-size="13">{title}</text>',
    ]


def _axes(parts, xlab, ylab):
    x0, y0 = _ML, _H - _MB
    x1, y1 = _W - _MR, _MT
    parts.append(f'<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" '
                 f'stroke="black"/>')
    parts.append(f'<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" '
                 f'stroke="black"/>')
    parts.append(f'<text x="{(x0 + x1) / 2:.0f}" y="{_H - 8}" '
                 f'text-anchor="middle" font-family="sans-serif" '
                 f'font-size="12">{xlab}</text>')
    parts.append(f'<text x="14" y="{(y0 + y1) / 2:.0f}" text-anchor="middle" '
                 f'font-family="sans-serif" font-size="12" '
                 f'transform="rotate(-90 14 {(y0 + y1) / 2:.0f})">{ylab}</text>')


class _Scale:
    def __init__(self, lo, hi, pixel_lo, pixel_hi, log=False):
        if log:
            lo, hi = math.log10(lo), math.log10(hi)
        if hi == lo:
            hi = lo + 1.0
        self.lo, self.hi = lo, hi
        self.plo, self.phi = pixel_lo, pixel_hi
        self.log = log

    def __call__(self, v):
        v = math.log10(v) if self.log else v
        frac = (v - self.lo) / (self.hi - self.lo)
        return self.plo + frac * (self.phi - self.plo)


def _tick_labels(parts, sx, sy, xticks, yticks, fmt="{:g}"):
    y0 = _H - _MB
    for tx in xticks:
        px = sx(tx)
        parts.append(f'<line x1="{px:.1f}" y1="{y0}" x2="{px:.1f}" '
                     f'y2="{y0 + 4}" stroke="black"/>')
        parts.append(f'<text x="{px:.1f}" y="{y0 + 17}" text-anchor="middle" '
                     f'font-family="sans-serif" font-size="10">'
                     f'{fmt.format(tx)}</text>')
    for ty in yticks:
        py = sy(ty)
        parts.append(f'<line x1="{_ML - 4}" y1="{py:.1f}" x2="{_ML}" '
                     f'y2="{py:.1f}" stroke="black"/>')
        parts.append(f'<text x="{_ML - 7}" y="{py + 3:.1f}" text-anchor="end" '
                     f'font-family="sans-serif" font-size="10">'
                     f'{fmt.format(ty)}</text>')


def bar_chart(path, labels, values, title, xlab, ylab, log_y=True) -> None:
    values = np.asarray(values, dtype=float)
    positive = values[values > 0]
    floor = float(positive.min()) * 0.5 if positive.size else 1e-6
    top = float(values.max()) * 1.5 if values.max() > 0 else 1.0
    parts = _open(title)
    sy = _Scale(floor, top, _H - _MB, _MT, log=log_y)
    sx = _Scale(-0.5, len(values) - 0.5, _ML, _W - _MR)
    width = (sx(1) - sx(0)) * 0.7
    for i, v in enumerate(values):
        if v <= 0:
            continue
        px = sx(i) - width / 2
        py = sy(v)
        parts.append(f'<rect x="{px:.1f}" y="{py:.1f}" width="{width:.1f}" '
                     f'height="{_H - _MB - py:.1f}" fill="{_COLORS[0]}"/>')
        parts.append(f'<text x="{sx(i):.1f}" y="{_H - _MB + 14}" '
                     f'text-anchor="middle" font-family="sans-serif" '
                     f'font-size="10">{labels[i]}</text>')
    _axes(parts, xlab, ylab)
    parts.append("</svg>")
    _write(path, parts)


def line_chart(path, x, series: dict, title, xlab, ylab, hline=None,
               log_x=False) -> None:
    x = np.asarray(x, dtype=float)
    all_y = np.concatenate([np.asarray(v, dtype=float) for v in series.values()])
    finite = all_y[np.isfinite(all_y)]
    lo = float(finite.min()) if finite.size else 0.0
    hi = float(finite.max()) if finite.size else 1.0
    if hline is not None:
        lo, hi = min(lo, hline), max(hi, hline)
    pad = 0.06 * (hi - lo or 1.0)
    sx = _Scale(float(x.min()), float(x.max()), _ML, _W - _MR, log=log_x)
    sy = _Scale(lo - pad, hi + pad, _H - _MB, _MT)
    parts = _open(title)
    if hline is not None:
        py = sy(hline)
        parts.append(f'<line x1="{_ML}" y1="{py:.1f}" x2="{_W - _MR}" '
                     f'y2="{py:.1f}" stroke="#888" stroke-dasharray="6,4"/>')
    for k, (name, ys) in enumerate(series.items()):
        ys = np.asarray(ys, dtype=float)
        pts = [f"{sx(xv):.1f},{sy(yv):.1f}"
               for xv, yv in zip(x, ys) if np.isfinite(yv)]
        color = _COLORS[k % len(_COLORS)]
        parts.append(f'<polyline points="{" ".join(pts)}" fill="none" '
                     f'stroke="{color}" stroke-width="1.5"/>')
        parts.append(f'<text x="{_W - _MR - 6}" y="{_MT + 14 + 14 * k}" '
                     f'text-anchor="end" font-family="sans-serif" '
                     f'font-size="11" fill="{color}">{name}</text>')
    xticks = np.linspace(float(x.min()), float(x.max()), 5) if not log_x else \
        10.0 ** np.arange(math.ceil(math.log10(x.min())),
                          math.floor(math.log10(x.max())) + 1)
    yticks = np.linspace(lo, hi, 5)
    _tick_labels(parts, sx, sy, xticks, yticks, fmt="{:.3g}")
    _axes(parts, xlab, ylab)
    parts.append("</svg>")
    _write(path, parts)


def heatmap(path, xs, ys, matrix, title, xlab, ylab, iso=None) -> None:
    """Raster-style heatmap; matrix[i, j] maps row i -> ys[i], col j -> xs[j].
    iso, if given, is a threshold: cells strictly below it get an outline."""
    matrix = np.asarray(matrix, dtype=float)
    finite = matrix[np.isfinite(matrix)]
    lo = float(finite.min()) if finite.size else 0.0
    hi = float(finite.max()) if finite.size else 1.0
    sx = _Scale(0, matrix.shape[1], _ML, _W - _MR)
    sy = _Scale(0, matrix.shape[0], _H - _MB, _MT)
    parts = _open(title)
    cw = sx(1) - sx(0)
    ch = sy(0) - sy(1)
    for i in range(matrix.shape[0]):
        for j in range(matrix.shape[1]):
            v = matrix[i, j]
            if not np.isfinite(v):
                fill = "#dddddd"
            else:
                frac = (v - lo) / (hi - lo) if hi > lo else 0.0
                # dark purple -> pale yellow
                r = int(60 + frac * (250 - 60))
                g = int(20 + frac * (240 - 20))
                b = int(90 + frac * (120 - 90))
                fill = f"rgb({r},{g},{b})"
            parts.append(f'<rect x="{sx(j):.1f}" y="{sy(i + 1):.1f}" '
                         f'width="{cw + 0.5:.1f}" height="{ch + 0.5:.1f}" '
                         f'fill="{fill}"/>')
    if iso is not None:
        with np.errstate(invalid="ignore"):
            mask = matrix < iso
        for i in range(matrix.shape[0]):
            for j in range(matrix.shape[1]):
                if not mask[i, j]:
                    continue
                if i + 1 >= matrix.shape[0] or not mask[i + 1, j]:
                    parts.append(f'<line x1="{sx(j):.1f}" y1="{sy(i + 1):.1f}" '
                                 f'x2="{sx(j + 1):.1f}" y2="{sy(i + 1):.1f}" '
                                 f'stroke="white" stroke-dasharray="3,2"/>')
                if i == 0 or not mask[i - 1, j]:
                    parts.append(f'<line x1="{sx(j):.1f}" y1="{sy(i):.1f}" '
                                 f'x2="{sx(j + 1):.1f}" y2="{sy(i):.1f}" '
                                 f'stroke="white" stroke-dasharray="3,2"/>')
                if j == 0 or not mask[i, j - 1]:
                    parts.append(f'<line x1="{sx(j):.1f}" y1="{sy(i):.1f}" '
                                 f'x2="{sx(j):.1f}" y2="{sy(i + 1):.1f}" '
                                 f'stroke="white" stroke-dasharray="3,2"/>')
                if j + 1 >= matrix.shape[1] or not mask[i, j + 1]:
                    parts.append(f'<line x1="{sx(j + 1):.1f}" y1="{sy(i):.1f}" '
                                 f'x2="{sx(j + 1):.1f}" y2="{sy(i + 1):.1f}" '
                                 f'stroke="white" stroke-dasharray="3,2"/>')
    _axes(parts, xlab, ylab)
    parts.append("</svg>")
    _write(path, parts)


def band_chart(path, freqs, q_noise, q_attack, classes, title,
               threshold) -> None:
    """Feasibility curves with shaded Noisy/Vulnerable columns."""
    freqs = np.asarray(freqs, dtype=float)
    sx = _Scale(float(freqs.min()), float(freqs.max()), _ML, _W - _MR, log=True)
    hi = max(float(np.max(q_noise)), float(np.max(q_attack)), threshold) * 1.1
    sy = _Scale(0.0, hi, _H - _MB, _MT)
    parts = _open(title)
    shade = {"Vulnerable": "#f6d0d0", "Noisy": "#d0d8f6"}
    edges = np.sqrt(freqs[:-1] * freqs[1:])
    lows = np.concatenate([[freqs[0]], edges])
    highs = np.concatenate([edges, [freqs[-1]]])
    for f0, f1, cls in zip(lows, highs, classes):
        if cls in shade:
            parts.append(f'<rect x="{sx(f0):.1f}" y="{_MT}" '
                         f'width="{sx(f1) - sx(f0):.1f}" '
                         f'height="{_H - _MB - _MT}" fill="{shade[cls]}"/>')
    py = sy(threshold)
    parts.append(f'<line x1="{_ML}" y1="{py:.1f}" x2="{_W - _MR}" '
                 f'y2="{py:.1f}" stroke="#888" stroke-dasharray="6,4"/>')
    for name, ys, color in (("self-noise QBER", q_noise, _COLORS[0]),
                            ("attack QBER", q_attack, _COLORS[1])):
        pts = [f"{sx(f):.1f},{sy(min(y, hi)):.1f}" for f, y in zip(freqs, ys)]
        parts.append(f'<polyline points="{" ".join(pts)}" fill="none" '
                     f'stroke="{color}" stroke-width="1.5"/>')
    _axes(parts, "gating frequency (Hz)", "QBER")
    parts.append("</svg>")
    _write(path, parts)


def _write(path, parts) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(parts))
        fh.write("\n")
