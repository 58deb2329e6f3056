"""Static SVG output: packings (full view plus magnified inset) and fit plots.

Numbers are written with a fixed format so identical inputs give
byte-identical files.
"""
import math

import numpy as np

from . import distributions as dist

_PALETTE = {"gamma": "#1b9e77", "lognormal": "#d95f02", "weibull": "#7570b3", "hyperbolic": "#e7298a"}


def _f(v):
    return f"{float(v):.6g}"


def _header(width, height):
    return [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_f(width)}" height="{_f(height)}" '
        f'viewBox="0 0 {_f(width)} {_f(height)}">',
        f'<rect x="0" y="0" width="{_f(width)}" height="{_f(height)}" fill="white"/>',
    ]


def _outline(vertices, sx, ox, oy, height_px):
    pts = " ".join(f"{_f(ox + sx * x)},{_f(oy + height_px - sx * y)}" for x, y in vertices)
    return f'<polygon points="{pts}" fill="none" stroke="black" stroke-width="1"/>'


def packing_svg(packing, size_px=800, zoom=10.0, margin=10):
    """Render every disk to scale, with a ``zoom`` times magnified inset panel.

    The inset shows the square window of side ``1/zoom`` of the domain's
    longer side, centred on the domain's bounding box; its location is
    marked on the full view.
    """
    x0, y0, x1, y1 = packing.domain.bbox
    span = max(x1 - x0, y1 - y0)
    s = size_px / span
    w_px, h_px = (x1 - x0) * s, (y1 - y0) * s
    total_w = 2 * margin + w_px + margin + size_px
    total_h = 2 * margin + max(h_px, size_px)
    out = _header(total_w, total_h)

    verts = np.asarray(packing.domain.vertices) - [x0, y0]
    out.append(f'<g id="full" transform="translate({margin},{margin})">')
    out.append(_outline(verts, s, 0, 0, h_px))
    for x, y, r in zip(packing.x - x0, packing.y - y0, packing.r):
        out.append(f'<circle cx="{_f(x * s)}" cy="{_f(h_px - y * s)}" r="{_f(r * s)}" fill="#8c6d46" stroke="none"/>')
    side = span / zoom
    cx, cy = 0.5 * (x1 - x0), 0.5 * (y1 - y0)
    wx, wy = cx - side / 2, cy - side / 2
    out.append(f'<rect x="{_f(wx * s)}" y="{_f(h_px - (wy + side) * s)}" width="{_f(side * s)}" '
               f'height="{_f(side * s)}" fill="none" stroke="red" stroke-width="1"/>')
    out.append("</g>")

    zs = size_px / side
    ox = 2 * margin + w_px
    out.append(f'<g id="detail" transform="translate({_f(ox)},{margin})">')
    out.append('<clipPath id="inset"><rect x="0" y="0" '
               f'width="{_f(size_px)}" height="{_f(size_px)}"/></clipPath>')
    out.append('<g clip-path="url(#inset)">')
    near = ((packing.x - x0 + packing.r > wx) & (packing.x - x0 - packing.r < wx + side)
            & (packing.y - y0 + packing.r > wy) & (packing.y - y0 - packing.r < wy + side))
    for x, y, r in zip(packing.x[near] - x0, packing.y[near] - y0, packing.r[near]):
        out.append(f'<circle cx="{_f((x - wx) * zs)}" cy="{_f(size_px - (y - wy) * zs)}" r="{_f(r * zs)}" '
                   'fill="#8c6d46" stroke="black" stroke-width="0.5"/>')
    out.append("</g>")
    out.append(f'<rect x="0" y="0" width="{_f(size_px)}" height="{_f(size_px)}" fill="none" stroke="red" stroke-width="1"/>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def fit_svg(hist, fits, chosen=None, width=800, height=500, margin=50, n_grid=400, xlabel=None):
    """Log-histogram (as a density) overlaid with fitted densities.

    ``fits`` is a sequence of ``(model, shift)`` pairs; a shifted law is
    drawn at ``shift + x`` so every curve lives on the log-diameter axis.
    """
    dens = hist.density()
    lo, hi = float(hist.edges[0]), float(hist.edges[-1])
    pad = 0.05 * (hi - lo)
    lo, hi = lo - pad, hi + pad
    grid = np.linspace(lo, hi, n_grid)
    curves = []
    for model, shift in fits:
        with np.errstate(over="ignore", under="ignore"):
            y = np.exp(dist.log_pdf(model, grid - shift))
        curves.append((model.family, np.nan_to_num(y, posinf=0.0)))
    ymax = max([float(dens.max())] + [float(c.max()) for _, c in curves]) * 1.05 or 1.0
    pw, ph = width - 2 * margin, height - 2 * margin

    def px(v):
        return margin + (v - lo) / (hi - lo) * pw

    def py(v):
        return margin + ph - v / ymax * ph

    out = _header(width, height)
    for a, b, dv in zip(hist.edges[:-1], hist.edges[1:], dens):
        out.append(f'<rect x="{_f(px(a))}" y="{_f(py(dv))}" width="{_f(px(b) - px(a))}" '
                   f'height="{_f(py(0) - py(dv))}" fill="#cccccc" stroke="#888888" stroke-width="0.5"/>')
    for k, (family, y) in enumerate(curves):
        pts = " ".join(f"{_f(px(g))},{_f(py(v))}" for g, v in zip(grid, y))
        stroke = 2.5 if family == chosen else 1.2
        out.append(f'<polyline points="{pts}" fill="none" stroke="{_PALETTE.get(family, "black")}" '
                   f'stroke-width="{stroke}"/>')
        out.append(f'<text x="{_f(width - margin - 120)}" y="{_f(margin + 15 * (k + 1))}" font-size="12" '
                   f'fill="{_PALETTE.get(family, "black")}">{family}{" (chosen)" if family == chosen else ""}</text>')
    out.append(f'<line x1="{margin}" y1="{_f(py(0))}" x2="{_f(width - margin)}" y2="{_f(py(0))}" stroke="black"/>')
    out.append(f'<line x1="{margin}" y1="{margin}" x2="{margin}" y2="{_f(py(0))}" stroke="black"/>')
    for t in np.linspace(lo, hi, 6):
        out.append(f'<text x="{_f(px(t))}" y="{_f(py(0) + 15)}" font-size="10" text-anchor="middle">{t:.2f}</text>')
    if xlabel is None:
        base = "e" if math.isclose(hist.log_base, math.e) else _f(hist.log_base)
        xlabel = f"log_{base}(d / {_f(hist.ref_diameter)} mm)"
    out.append(f'<text x="{_f(width / 2)}" y="{_f(height - 10)}" font-size="12" text-anchor="middle">{xlabel}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
