"""Static SVG pictures: a solved network, or the J(L) curve of a sweep.

Output is deterministic text (fixed decimal formatting, no timestamps), so
identical inputs give byte-identical images.
"""

from __future__ import annotations

from .evolve import EvolutionTrace
from .network import Network


def _f(x: float) -> str:
    return "%.2f" % x


class _Viewport:
    """Maps data coordinates into an SVG pixel box, y axis flipped."""

    def __init__(self, xs, ys, width, height, pad):
        x_lo, x_hi = min(xs), max(xs)
        y_lo, y_hi = min(ys), max(ys)
        span_x = x_hi - x_lo or 1.0
        span_y = y_hi - y_lo or 1.0
        # uniform scale so shapes keep their aspect ratio
        s = min((width - 2 * pad) / span_x, (height - 2 * pad) / span_y)
        self.s = s
        self.x_lo = x_lo
        self.y_hi = y_hi
        self.ox = pad + ((width - 2 * pad) - s * span_x) / 2.0
        self.oy = pad + ((height - 2 * pad) - s * span_y) / 2.0

    def x(self, v: float) -> str:
        return _f(self.ox + self.s * (v - self.x_lo))

    def y(self, v: float) -> str:
        return _f(self.oy + self.s * (self.y_hi - v))


def network_svg(network: Network, width: int = 480, height: int = 400) -> str:
    """Terminals as black dots, anchors as red dots, the triangle dashed."""
    t = network.triangle
    xs = [n.pos.x for n in network.nodes]
    ys = [n.pos.y for n in network.nodes]
    vp = _Viewport(xs, ys, width, height, 36.0)
    verts = t.vertices

    parts = [
        '<svg xmlns="http://www.w3.org/2000/svg" width="%d" height="%d" '
        'viewBox="0 0 %d %d">' % (width, height, width, height),
        '<rect width="%d" height="%d" fill="white"/>' % (width, height),
    ]
    tri_pts = " ".join("%s,%s" % (vp.x(v.x), vp.y(v.y)) for v in verts)
    parts.append(
        '<polygon points="%s" fill="none" stroke="#999999" '
        'stroke-dasharray="6 4" stroke-width="1"/>' % tri_pts
    )
    for u, v in network.edges:
        pu, pv = network.nodes[u].pos, network.nodes[v].pos
        parts.append(
            '<line x1="%s" y1="%s" x2="%s" y2="%s" stroke="black" stroke-width="2"/>'
            % (vp.x(pu.x), vp.y(pu.y), vp.x(pv.x), vp.y(pv.y))
        )
    for n in network.nodes:
        if n.kind == "terminal":
            parts.append(
                '<circle cx="%s" cy="%s" r="5" fill="black"/>'
                % (vp.x(n.pos.x), vp.y(n.pos.y))
            )
            parts.append(
                '<text x="%s" y="%s" font-family="sans-serif" font-size="14">%s</text>'
                % (
                    _f(float(vp.x(n.pos.x)) + 8.0),
                    _f(float(vp.y(n.pos.y)) - 8.0),
                    n.label,
                )
            )
        else:
            parts.append(
                '<circle cx="%s" cy="%s" r="4" fill="red"/>'
                % (vp.x(n.pos.x), vp.y(n.pos.y))
            )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def curve_svg(trace: EvolutionTrace, width: int = 640, height: int = 420) -> str:
    """The J(L) polyline with dashed vertical markers at the thresholds."""
    samples = trace.samples
    ls = [s.l for s in samples]
    js = [s.j for s in samples]
    pad = 48.0
    l_lo, l_hi = min(ls), max(ls)
    j_lo, j_hi = min(js), max(js)
    span_l = l_hi - l_lo or 1.0
    span_j = j_hi - j_lo or 1.0

    def px(l):
        return _f(pad + (width - 2 * pad) * (l - l_lo) / span_l)

    def py(j):
        return _f(pad + (height - 2 * pad) * (j_hi - j) / span_j)

    parts = [
        '<svg xmlns="http://www.w3.org/2000/svg" width="%d" height="%d" '
        'viewBox="0 0 %d %d">' % (width, height, width, height),
        '<rect width="%d" height="%d" fill="white"/>' % (width, height),
        '<line x1="%s" y1="%s" x2="%s" y2="%s" stroke="black" stroke-width="1"/>'
        % (_f(pad), _f(height - pad), _f(width - pad), _f(height - pad)),
        '<line x1="%s" y1="%s" x2="%s" y2="%s" stroke="black" stroke-width="1"/>'
        % (_f(pad), _f(pad), _f(pad), _f(height - pad)),
    ]
    thr = trace.thresholds
    for m in (thr.l_min_edge, thr.l_st, thr.l1, thr.l2, thr.l3):
        if m is None or not (l_lo <= m <= l_hi):
            continue
        parts.append(
            '<line x1="%s" y1="%s" x2="%s" y2="%s" stroke="#cc0000" '
            'stroke-dasharray="4 4" stroke-width="1"/>' % (px(m), _f(pad), px(m), _f(height - pad))
        )
    pts = " ".join("%s,%s" % (px(s.l), py(s.j)) for s in samples)
    parts.append(
        '<polyline points="%s" fill="none" stroke="black" stroke-width="2"/>' % pts
    )
    labels = (
        (px(l_lo), _f(height - pad + 18.0), "%.6g" % l_lo, "middle"),
        (px(l_hi), _f(height - pad + 18.0), "%.6g" % l_hi, "middle"),
        (_f(pad - 6.0), py(j_lo), "%.6g" % j_lo, "end"),
        (_f(pad - 6.0), py(j_hi), "%.6g" % j_hi, "end"),
    )
    for x, y, text, anchor in labels:
        parts.append(
            '<text x="%s" y="%s" font-family="sans-serif" font-size="12" '
            'text-anchor="%s">%s</text>' % (x, y, anchor, text)
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
