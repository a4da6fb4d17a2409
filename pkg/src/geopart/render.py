"""SVG pictures of an instance and, optionally, the zero sets of a partitioning tuple.

Curves are traced by marching squares on a float grid; this is the only place
floating point is used.
"""
from __future__ import annotations

from xml.sax.saxutils import escape

from .semialg import SemiAlgSet

_REL = {"lt0": lambda s: s < 0, "eq0": lambda s: s == 0, "gt0": lambda s: s > 0,
        "le0": lambda s: s <= 0, "ge0": lambda s: s >= 0}
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def _fpoly(p):
    terms = [(float(c), i, j) for (i, j), c in p.terms.items()]
    return lambda x, y: sum(c * x ** i * y ** j for c, i, j in terms)


def _fformula(obj, signs) -> bool:
    if "atom" in obj:
        return _REL[obj["rel"]](signs[obj["atom"]])
    vals = [_fformula(a, signs) for a in obj["args"]]
    return all(vals) if obj["op"] == "and" else any(vals) if obj["op"] == "or" else not vals[0]


def _march(f, window, res) -> list:
    """Line pieces approximating f = 0 over the square [-window, window]^2."""
    step = 2 * window / res
    xs = [-window + i * step for i in range(res + 1)]
    vals = [[f(x, y) for x in xs] for y in xs]
    pieces = []
    for j in range(res):
        for i in range(res):
            corners = [(xs[i], xs[j], vals[j][i]), (xs[i + 1], xs[j], vals[j][i + 1]),
                       (xs[i + 1], xs[j + 1], vals[j + 1][i + 1]),
                       (xs[i], xs[j + 1], vals[j + 1][i])]
            cuts = []
            for k in range(4):
                (x0, y0, v0), (x1, y1, v1) = corners[k], corners[(k + 1) % 4]
                if (v0 < 0) != (v1 < 0):
                    t = v0 / (v0 - v1)
                    cuts.append((x0 + t * (x1 - x0), y0 + t * (y1 - y0)))
            for a in range(0, len(cuts) - 1, 2):
                pieces.append((cuts[a], cuts[a + 1]))
    return pieces


def _set_pieces(s: SemiAlgSet, window, res) -> list:
    if s.dim == 0 and s.point is not None:
        x, y = s.point.approx()
        r = window / 200
        return [((float(x) - r, float(y)), (float(x) + r, float(y))),
                ((float(x), float(y) - r), (float(x), float(y) + r))]
    fs = [_fpoly(p) for p in s.polys]
    form = s.formula.to_json()
    tol = 1e-9
    out = []
    for gi, p in enumerate(s.polys):
        if p.is_constant():
            continue
        for a, b in _march(fs[gi], window, res):
            mx, my = (a[0] + b[0]) / 2, (a[1] + b[1]) / 2
            signs = [0 if k == gi else (lambda v: 0 if abs(v) < tol else (1 if v > 0 else -1))(
                f(mx, my)) for k, f in enumerate(fs)]
            if _fformula(form, signs):
                out.append((a, b))
    return out


def _path(pieces, window, size, color, width) -> str:
    def tx(x):
        return (x + window) / (2 * window) * size

    def ty(y):
        return size - (y + window) / (2 * window) * size
    d = " ".join(f"M{tx(a[0]):.2f} {ty(a[1]):.2f}L{tx(b[0]):.2f} {ty(b[1]):.2f}"
                 for a, b in pieces)
    return (f'<path d="{escape(d)}" fill="none" stroke="{color}" '
            f'stroke-width="{width}"/>')


def render_svg(sets, tuple_=None, out_path=None, window: float = 72.0, res: int = 256,
               size: int = 800) -> str:
    """SVG text with one path per set and one per tuple polynomial; written if out_path."""
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
             f'viewBox="0 0 {size} {size}">',
             f'<rect width="{size}" height="{size}" fill="white"/>']
    for s in sets:
        parts.append(_path(_set_pieces(s, window, res), window, size, "#333333", 1))
    if tuple_ is not None:
        for j, p in enumerate(tuple_.polys):
            parts.append(_path(_march(_fpoly(p), window, res), window, size,
                               PALETTE[j % len(PALETTE)], 1.5))
    parts.append("</svg>")
    text = "\n".join(parts) + "\n"
    if out_path is not None:
        with open(out_path, "w") as fh:
            fh.write(text)
    return text
