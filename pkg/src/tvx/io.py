"""JSON codecs and deterministic SVG rendering."""
from __future__ import annotations

from fractions import Fraction
from xml.sax.saxutils import escape

from .algebra import Multidegree, QLaurent, QRational, SeriesContext, format_laurent, rat_str
from .torus import TorusElement


def coeff_to_json(c):
    if c is None:
        return None
    if isinstance(c, (QLaurent, QRational)):
        return c.to_json()
    return QLaurent.const(Fraction(c)).to_json()


def coeff_from_json(obj):
    if obj is None:
        return None
    if "num" in obj:
        return QRational.from_json(obj)
    return QLaurent.from_json(obj)


def element_to_json(elem: TorusElement) -> dict:
    terms = []
    for (e, m, a, b), c in sorted(elem.items(), key=lambda kv: kv[0]):
        terms.append({"exps": list(e), "mask": m, "lattice": [a, b], "coeff": coeff_to_json(c)})
    return {"context": elem.ctx.to_json(), "terms": terms}


def element_from_json(obj) -> TorusElement:
    ctx = SeriesContext.from_json(obj["context"])
    terms = {}
    for t in obj["terms"]:
        terms[(tuple(t["exps"]), int(t["mask"]), t["lattice"][0], t["lattice"][1])] = coeff_from_json(t["coeff"])
    return TorusElement(ctx, terms)


def coeff_str(c) -> str:
    if isinstance(c, QLaurent):
        return format_laurent(c)
    return str(c)


# ---------------------------------------------------------------------------
# SVG

SIZE = 600


class _Canvas:
    def __init__(self, points):
        xs = [Fraction(p[0]) for p in points] or [Fraction(0)]
        ys = [Fraction(p[1]) for p in points] or [Fraction(0)]
        x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
        span = max(x1 - x0, y1 - y0)
        if span == 0:
            span = Fraction(2)
            x0, x1, y0, y1 = x0 - 1, x0 + 1, y0 - 1, y0 + 1
        mx = (x1 - x0 or span) / 10
        my = (y1 - y0 or span) / 10
        self.x0, self.x1 = x0 - mx, x1 + mx
        self.y0, self.y1 = y0 - my, y1 + my
        if self.x1 == self.x0:
            self.x0, self.x1 = self.x0 - 1, self.x1 + 1
        if self.y1 == self.y0:
            self.y0, self.y1 = self.y0 - 1, self.y1 + 1
        self.scale = Fraction(SIZE) / max(self.x1 - self.x0, self.y1 - self.y0)
        self.w = float((self.x1 - self.x0) * self.scale)
        self.h = float((self.y1 - self.y0) * self.scale)
        self.items: list = []

    def px(self, p) -> str:
        x = float((Fraction(p[0]) - self.x0) * self.scale)
        y = float((self.y1 - Fraction(p[1])) * self.scale)
        return f"{x:.3f},{y:.3f}"

    def xy(self, p):
        return self.px(p).split(",")

    def exit_param(self, base, d) -> Fraction:
        """Largest s >= 0 with base + s d inside the box."""
        ts = []
        for c, lo, hi in ((0, self.x0, self.x1), (1, self.y0, self.y1)):
            if d[c] > 0:
                ts.append((hi - base[c]) / d[c])
            elif d[c] < 0:
                ts.append((lo - base[c]) / d[c])
        return max(Fraction(0), min(ts)) if ts else Fraction(0)

    def segment(self, a, b, cls: str, arrow: bool = False):
        (x1, y1), (x2, y2) = self.xy(a), self.xy(b)
        marker = ' marker-end="url(#arrow)"' if arrow else ""
        self.items.append(f'<line class="{cls}" x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}"{marker}/>')

    def text(self, p, label: str, cls: str = "label"):
        x, y = self.xy(p)
        self.items.append(f'<text class="{cls}" x="{x}" y="{y}">{escape(label)}</text>')

    def dot(self, p):
        x, y = self.xy(p)
        self.items.append(f'<circle class="vertex" cx="{x}" cy="{y}" r="3"/>')

    def axes(self):
        o = (Fraction(0), Fraction(0))
        if self.x0 <= 0 <= self.x1:
            self.segment((o[0], self.y0), (o[0], self.y1), "axis")
        if self.y0 <= 0 <= self.y1:
            self.segment((self.x0, o[1]), (self.x1, o[1]), "axis")

    def render(self) -> str:
        head = (
            f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {self.w:.3f} {self.h:.3f}" '
            f'width="{self.w:.3f}" height="{self.h:.3f}">\n'
            '<defs><marker id="arrow" viewBox="0 0 10 10" refX="10" refY="5" markerWidth="6" '
            'markerHeight="6" orient="auto-start-reverse"><path d="M 0 0 L 10 5 L 0 10 z"/></marker></defs>\n'
            "<style>line{stroke:black;stroke-width:1.5}.axis{stroke:#bbb;stroke-dasharray:4 4}"
            ".end{stroke:#36c}.label{font:11px monospace}circle{fill:#c33}</style>\n"
        )
        return head + "\n".join(self.items) + "\n</svg>\n"


def _point(p):
    return (Fraction(p[0]), Fraction(p[1]))


def _wall_label(w) -> str:
    if w.operator is not None:
        rows = sorted(w.operator.spectrum().items(), key=lambda kv: (kv[0][0], kv[0][1]))
        if rows:
            (k, n, _), om = rows[0]
            return f"{w.direction} Omega_{n}({k}) = {rat_str(om)}"
        return str(w.direction)
    return f"{w.lattice} {coeff_str(w.coeff)}"


def diagram_svg(diag) -> str:
    """Lines clipped to the box, rays with arrowheads, labels with direction and
    leading coefficient (or leading Omega for operator walls)."""
    pts = [_point(w.base) for w in diag.walls]
    cv = _Canvas(pts)
    if not diag.walls:
        cv.axes()
        return cv.render()
    for w in diag.walls:
        b = _point(w.base)
        d = w.direction
        s_out = cv.exit_param(b, d)
        far = (b[0] + s_out * d[0], b[1] + s_out * d[1])
        if w.kind == "line":
            s_in = cv.exit_param(b, (-d[0], -d[1]))
            near = (b[0] - s_in * d[0], b[1] - s_in * d[1])
            cv.segment(near, far, "line")
        else:
            cv.segment(b, far, "ray", arrow=True)
            cv.text(far, _wall_label(w))
    return cv.render()


def curve_svg(curve) -> str:
    """Plane tropical curve: bounded edges between vertices, incoming ends
    drawn back along -alpha, the outgoing end with an arrowhead, and each
    vertex labelled with its refined multiplicity [mu]_q."""
    pts = [_point(v.point) for v in curve.vertices]
    cv = _Canvas(pts)
    root = curve.root
    for start, stop, lat in curve.edges:
        stop = _point(stop)
        if start is not None:
            cv.segment(_point(start), stop, "edge")
        else:
            back = (-lat[0], -lat[1])
            s = cv.exit_param(stop, back)
            cv.segment((stop[0] + s * back[0], stop[1] + s * back[1]), stop, "end")
    b = _point(root.base)
    d = root.direction
    s = cv.exit_param(b, d)
    cv.segment(b, (b[0] + s * d[0], b[1] + s * d[1]), "edge", arrow=True)
    for v in curve.vertices:
        cv.dot(_point(v.point))
        cv.text(_point(v.point), f"[{v.multiplicity}]_q")
    return cv.render()


def write_text(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
