"""Deterministic SVG rendering of curve families.

Coordinates are printed with six decimals; output depends only on the input
family and report, so identical inputs give byte-identical files.
"""

from __future__ import annotations

from .curves import RED, CurveFamily

STROKE = {"red": "#c0392b", "blue": "#1f5fbf"}


def _num(v) -> str:
    s = f"{float(v):.6f}"
    return "0.000000" if s == "-0.000000" else s


def _pt(p, ymid) -> str:
    # flip y around the box centre so the picture is upright
    return f"{_num(p[0])} {_num(2 * ymid - p[1])}"


def emit_svg(family: CurveFamily, report=None, width: int = 800) -> str:
    box = family.box
    xmin, xmax, ymin, ymax = box.xmin, box.xmax, box.ymin, box.ymax
    for c in family.curves:
        for v in c.vertices:
            xmin, xmax = min(xmin, v[0]), max(xmax, v[0])
            ymin, ymax = min(ymin, v[1]), max(ymax, v[1])
    if family.strip is not None:
        xmin, xmax = min(xmin, family.strip[0]), max(xmax, family.strip[1])
    ymid = (box.ymin + box.ymax) / 2
    w, h = xmax - xmin, ymax - ymin
    pad = max(w, h) / 50
    top = 2 * ymid - ymax
    height = max(1, round(width * float(h / w))) if w else width
    stroke = _num(max(w, h) / 1000)
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="{_num(xmin - pad)} {_num(top - pad)} {_num(w + 2 * pad)} {_num(h + 2 * pad)}">',
        f'<rect x="{_num(box.xmin)}" y="{_num(2 * ymid - box.ymax)}" width="{_num(box.xmax - box.xmin)}" '
        f'height="{_num(box.ymax - box.ymin)}" fill="none" stroke="#999999" stroke-width="{stroke}" stroke-dasharray="{stroke} {stroke}"/>',
    ]
    if family.grounded and family.strip is not None:
        for x in family.strip:
            out.append(
                f'<line class="strip" x1="{_num(x)}" y1="{_num(top - pad)}" x2="{_num(x)}" '
                f'y2="{_num(top + h + pad)}" stroke="#444444" stroke-width="{stroke}"/>'
            )
    for c in sorted(family.curves, key=lambda c: (c.color != RED, c.id)):
        d = "M " + " L ".join(_pt(v, ymid) for v in c.vertices)
        out.append(
            f'<path class="{c.color}" data-id="{c.id}" d="{d}" fill="none" '
            f'stroke="{STROKE[c.color]}" stroke-width="{stroke}"/>'
        )
    if report is not None:
        radius = _num(max(w, h) / 300)
        for r, b, p in report.tangent_pairs:
            x, y = _pt(p, ymid).split()
            out.append(f'<circle class="tangency" data-pair="{r} {b}" cx="{x}" cy="{y}" r="{radius}" fill="#111111"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
