"""Minimal SVG line plots.

Emits standalone SVG documents with one polyline per data series, simple
axes with a handful of ticks, a legend, and optional point annotations.
No plotting dependency; output is deterministic for fixed inputs.
"""

import math
from xml.sax.saxutils import escape

import numpy as np

__all__ = ["line_plot", "write_svg"]

_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def _finite_pairs(xs, ys):
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    keep = np.isfinite(xs) & np.isfinite(ys)
    return xs[keep], ys[keep]


def _ticks(lo, hi, n=5):
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / (n - 1)
    mag = 10.0 ** math.floor(math.log10(raw))
    step = min(s * mag for s in (1.0, 2.0, 2.5, 5.0, 10.0) if s * mag >= raw)
    first = math.ceil(lo / step) * step
    out = []
    t = first
    while t <= hi + 1e-9 * step:
        out.append(0.0 if abs(t) < 1e-12 * step else t)
        t += step
    return out or [lo]


def line_plot(series, title="", xlabel="", ylabel="", width=640, height=440, annotations=()):
    """Render series as an SVG document string.

    Parameters
    ----------
    series : list of (label, xs, ys)
        One polyline is emitted per entry, in order.
    annotations : iterable of (x, y, text)
        Marked points with a text label.

    Returns
    -------
    str
    """
    if not series:
        raise ValueError("at least one series is required")
    cleaned = [(label, *_finite_pairs(xs, ys)) for label, xs, ys in series]
    all_x = np.concatenate([xs for _, xs, _ in cleaned if xs.size] or [np.zeros(1)])
    all_y = np.concatenate([ys for _, _, ys in cleaned if ys.size] or [np.zeros(1)])
    ann = [(float(x), float(y), str(t)) for x, y, t in annotations]
    if ann:
        all_x = np.concatenate([all_x, [a[0] for a in ann]])
        all_y = np.concatenate([all_y, [a[1] for a in ann]])

    x_lo, x_hi = float(all_x.min()), float(all_x.max())
    y_lo, y_hi = float(all_y.min()), float(all_y.max())
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    if y_hi == y_lo:
        y_hi = y_lo + 1.0
    y_pad = 0.05 * (y_hi - y_lo)
    y_lo, y_hi = y_lo - y_pad, y_hi + y_pad

    ml, mr, mt, mb = 62, 16, 34, 46
    iw, ih = width - ml - mr, height - mt - mb
    sx = lambda x: ml + iw * (x - x_lo) / (x_hi - x_lo)
    sy = lambda y: mt + ih * (y_hi - y) / (y_hi - y_lo)

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<svg xmlns="http://www.w3.org/2000/svg" width="%d" height="%d" '
        'viewBox="0 0 %d %d">' % (width, height, width, height),
        '<rect x="0" y="0" width="%d" height="%d" fill="white"/>' % (width, height),
    ]
    if title:
        parts.append(
            '<text x="%g" y="20" font-size="14" text-anchor="middle">%s</text>'
            % (ml + iw / 2, escape(title))
        )

    # axes and ticks
    parts.append(
        '<line x1="%g" y1="%g" x2="%g" y2="%g" stroke="black"/>'
        % (ml, mt + ih, ml + iw, mt + ih)
    )
    parts.append('<line x1="%g" y1="%g" x2="%g" y2="%g" stroke="black"/>' % (ml, mt, ml, mt + ih))
    for t in _ticks(x_lo, x_hi):
        parts.append(
            '<line x1="%g" y1="%g" x2="%g" y2="%g" stroke="black"/>'
            % (sx(t), mt + ih, sx(t), mt + ih + 4)
        )
        parts.append(
            '<text x="%g" y="%g" font-size="10" text-anchor="middle">%s</text>'
            % (sx(t), mt + ih + 16, escape("%.4g" % t))
        )
    for t in _ticks(y_lo, y_hi):
        parts.append(
            '<line x1="%g" y1="%g" x2="%g" y2="%g" stroke="black"/>' % (ml - 4, sy(t), ml, sy(t))
        )
        parts.append(
            '<text x="%g" y="%g" font-size="10" text-anchor="end">%s</text>'
            % (ml - 7, sy(t) + 3, escape("%.4g" % t))
        )
    if xlabel:
        parts.append(
            '<text x="%g" y="%g" font-size="12" text-anchor="middle">%s</text>'
            % (ml + iw / 2, height - 8, escape(xlabel))
        )
    if ylabel:
        parts.append(
            '<text x="14" y="%g" font-size="12" text-anchor="middle" '
            'transform="rotate(-90 14 %g)">%s</text>' % (mt + ih / 2, mt + ih / 2, escape(ylabel))
        )

    for i, (label, xs, ys) in enumerate(cleaned):
        color = _PALETTE[i % len(_PALETTE)]
        pts = " ".join("%g,%g" % (sx(x), sy(y)) for x, y in zip(xs, ys))
        parts.append(
            '<polyline fill="none" stroke="%s" stroke-width="1.5" points="%s"/>' % (color, pts)
        )
        parts.append(
            '<text x="%g" y="%g" font-size="11" fill="%s">%s</text>'
            % (ml + iw - 150, mt + 14 + 14 * i, color, escape(str(label)))
        )

    for x, y, text in ann:
        parts.append('<circle cx="%g" cy="%g" r="3" fill="black"/>' % (sx(x), sy(y)))
        parts.append(
            '<text x="%g" y="%g" font-size="10">%s</text>' % (sx(x) + 5, sy(y) - 5, escape(text))
        )

    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def write_svg(path, svg):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(svg)
    return path
