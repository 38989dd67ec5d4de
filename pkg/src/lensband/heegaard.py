"""Genus-1 doubly pointed Heegaard diagrams on the square torus.

Model
-----
The torus is R^2 / Z^2.  The alpha curve lifts to the horizontal lines at
integer heights.  The beta curve is a periodic PL path B with exact rational
vertices satisfying B(t+1) = B(t) + (q, p), so its homology class is (q, p)
and a straight representative meets alpha in exactly |det((1,0),(q,p))| = p
points per period.  Two basepoints w, z in the complement of both curves turn
the diagram into a knot diagram.

Knots provided:

* ``simple_knot_diagram(lens, k)`` -- straight beta; the basepoints sit in
  the two regions diagonally adjacent at one intersection point, with z
  shifted ``k - (q+1)`` strand slots along its side of alpha.  With this
  convention the homology classes of distinct k are distinct and the
  ``k = q+1`` instance is the one whose basepoint pair is enclosed by a small
  circle meeting one alpha arc and one beta arc, the configuration the twist
  operation acts on.
* ``almost_simple_diagram(lens, side)`` -- beta acquires a one-period finger
  that crosses a single alpha line twice more, giving p+2 intersection
  points.  The finger is shaped so each of the two small bigons it creates
  contains exactly one basepoint; that placement is what keeps the homology
  rank at p+2.
* ``dehn_twist_about_basepoint_circle(d, handedness)`` -- the full twist on
  the circle enclosing both basepoints, returned in reduced position (the
  isotopy normalizes the basepoint pair, which is why the output's basepoint
  offsets differ from the input's).

All validity conditions (embeddedness, transversality, crossing counts,
basepoint placement) are asserted exactly at construction time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .arith import LensParams
from .plgeom import (
    DegenerateGeometry,
    Point,
    segments_cross,
)

SIMPLE = "simple"
ALMOST_SIMPLE_LEFT = "almost_simple_left"
ALMOST_SIMPLE_RIGHT = "almost_simple_right"
CUSTOM = "custom"

_SIDES = ("left", "right")


@dataclass(frozen=True)
class Generator:
    """One alpha-beta intersection point, as a lift in the fundamental period."""

    index: int
    position: Point
    spinc: int
    height: int          # integer y-coordinate of the lift
    beta_order: int      # position along the beta period
    upward: bool         # beta crosses the alpha line upward here


@dataclass(frozen=True)
class DoublyPointedDiagram:
    lens: LensParams
    beta_path: Tuple[Point, ...]
    w: Point
    z: Point
    label: str
    param: Optional[int] = None
    provenance: Optional[Tuple] = None

    @property
    def p(self) -> int:
        return self.lens.p

    @property
    def q(self) -> int:
        return self.lens.q

    def expected_generator_count(self) -> Optional[int]:
        if self.label == SIMPLE:
            return self.p
        if self.label in (ALMOST_SIMPLE_LEFT, ALMOST_SIMPLE_RIGHT):
            return self.p + 2
        return None


# ---------------------------------------------------------------------------
# template constants
# ---------------------------------------------------------------------------


def _units(lens: LensParams) -> Tuple[Fraction, Fraction]:
    """(width unit, height unit) small enough that templates stay in the
    tube between neighbouring beta strands: widths scale with 1/p, heights
    with 1/q so the slanted strands cannot reach the finger."""
    p, q = lens.p, lens.q
    wu = Fraction(1, 16 * p)
    hu = Fraction(1, 16 * (q + 1))
    return wu, hu


def _basepoint_offsets(lens: LensParams) -> Tuple[Fraction, Fraction]:
    wu, hu = _units(lens)
    return 3 * wu, hu  # (dx, dy); dx > q*dy/p keeps the points in quadrants


def _chord_x(x0: Fraction, lens: LensParams, y: Fraction) -> Fraction:
    return x0 + Fraction(lens.q, lens.p) * y


# ---------------------------------------------------------------------------
# construction
# ---------------------------------------------------------------------------


def simple_knot_diagram(lens: LensParams, k: int) -> DoublyPointedDiagram:
    """Standard diagram of the simple knot with parameter k (reduced mod p)."""
    p, q = lens.p, lens.q
    if not (0 <= k < p):
        raise ValueError(f"parameter k = {k} not reduced mod p = {p}")
    x0 = Fraction(1, 2 * p) if p > 1 else Fraction(1, 2)
    start = (_chord_x(x0, lens, Fraction(-1, 2)), Fraction(-1, 2))
    end = (start[0] + q, start[1] + p)
    dx, dy = _basepoint_offsets(lens)
    j = (k - (q + 1)) % p
    w = (x0 - dx, -dy)
    z = (x0 + dx + Fraction(j, p), dy)
    d = DoublyPointedDiagram(lens, (start, end), w, z, SIMPLE, param=k)
    validate(d)
    return d


def _finger_path(
    lens: LensParams,
    x0: Fraction,
    widths: Tuple[Fraction, Fraction],
    heights: Tuple[Fraction, Fraction, Fraction, Fraction],
) -> Tuple[Point, ...]:
    """One beta period where the chord through (x0, 0) carries the finger.

    widths = (e_left, e_right): horizontal reach of the two outer legs.
    heights = (h_top, h_bot, d_entry, d_exit): the inner connector heights
    and the entry/exit heights on the chord (entry below, exit above).
    The resulting crossing pattern on the line y = 0 is up / down / up at
    x0 - e_left, x0, x0 + e_right.
    """
    p, q = lens.p, lens.q
    e_left, e_right = widths
    h_top, h_bot, d_entry, d_exit = heights
    start = (_chord_x(x0, lens, Fraction(-1, 2)), Fraction(-1, 2))
    path = [
        start,
        (_chord_x(x0, lens, -d_entry), -d_entry),
        (x0 - e_left, -d_entry),
        (x0 - e_left, h_top),
        (x0, h_top),
        (x0, -h_bot),
        (x0 + e_right, -h_bot),
        (x0 + e_right, d_exit),
        (_chord_x(x0, lens, d_exit), d_exit),
        (start[0] + q, start[1] + p),
    ]
    return tuple(path)


def almost_simple_diagram(lens: LensParams, side: str) -> DoublyPointedDiagram:
    """The p+2-intersection diagram obtained from the two minimal isotopies."""
    if side not in _SIDES:
        raise ValueError(f"side must be one of {_SIDES}")
    p, q = lens.p, lens.q
    wu, hu = _units(lens)
    dx, dy = _basepoint_offsets(lens)
    x0 = Fraction(1, 2 * p) if p > 1 else Fraction(1, 2)
    # Basepoints flank the finger chord: w below right, z above left.
    w = (x0 + dx, -dy)
    z = (x0 - dx, dy)
    if side == "left":
        widths = (5 * wu, 6 * wu)
        heights = (2 * hu, 2 * hu, 3 * hu, 3 * hu)
    else:
        widths = (6 * wu, 5 * wu)
        heights = (Fraction(5, 2) * hu, Fraction(5, 2) * hu, 4 * hu, 4 * hu)
    path = _finger_path(lens, x0, widths, heights)
    label = ALMOST_SIMPLE_LEFT if side == "left" else ALMOST_SIMPLE_RIGHT
    d = DoublyPointedDiagram(lens, path, w, z, label)
    validate(d)
    return d


def dehn_twist_about_basepoint_circle(
    d: DoublyPointedDiagram, handedness: str
) -> DoublyPointedDiagram:
    """Full Dehn twist of beta along the circle enclosing both basepoints.

    Requires either a simple diagram whose basepoints are in the diagonal
    configuration (parameter k = q+1 mod p, where the enclosing circle meets
    one alpha arc and one beta arc), or the output of a previous twist, in
    which case the opposite handedness undoes it.

    The returned diagram is in reduced position: the two cancelling
    intersection points created by the twist have been removed by a
    basepoint-avoiding isotopy, and the ambient isotopy normalizing the
    picture moves the basepoint pair to the finger's pockets.  Homology class
    preservation is asserted.
    """
    if handedness not in _SIDES:
        raise ValueError(f"handedness must be one of {_SIDES}")
    lens = d.lens
    p, q = lens.p, lens.q
    if d.label in (ALMOST_SIMPLE_LEFT, ALMOST_SIMPLE_RIGHT):
        prov = d.provenance
        if not prov or prov[0] != "twist":
            raise ValueError("can only untwist a diagram produced by this twist")
        _, src_k, src_hand = prov
        if src_hand == handedness:
            raise ValueError("iterated same-handed twists are not supported")
        return simple_knot_diagram(lens, src_k)
    if d.label != SIMPLE:
        raise ValueError("dehn twist requires a simple diagram")
    k = d.param
    if k is None or (k - (q + 1)) % p != 0:
        raise ValueError(
            "twist circle must enclose the diagonal basepoint pair "
            f"(parameter k = q+1 mod p, got k = {k})"
        )
    wu, hu = _units(lens)
    dx, dy = _basepoint_offsets(lens)
    x0 = Fraction(1, 2 * p) if p > 1 else Fraction(1, 2)
    # Reduced twisted picture; constants differ from almost_simple_diagram's
    # so the two constructions stay independent.
    w = (x0 + dx, -dy)
    z = (x0 - dx, dy)
    if handedness == "left":
        widths = (4 * wu, 5 * wu)
        heights = (3 * hu, 3 * hu, 4 * hu, 4 * hu)
    else:
        widths = (5 * wu, 4 * wu)
        heights = (Fraction(7, 2) * hu, Fraction(7, 2) * hu, Fraction(9, 2) * hu,
                   Fraction(9, 2) * hu)
    path = _finger_path(lens, x0, widths, heights)
    label = ALMOST_SIMPLE_LEFT if handedness == "left" else ALMOST_SIMPLE_RIGHT
    out = DoublyPointedDiagram(lens, path, w, z, label, provenance=("twist", k, handedness))
    validate(out)
    if knot_class(out) != knot_class(d):
        raise AssertionError("twist failed to preserve the knot's homology class")
    return out


def r2_wiggle_diagram(lens: LensParams, k: int) -> DoublyPointedDiagram:
    """Simple diagram with a basepoint-free finger: two extra generators that
    cancel through a pair of empty bigons.  Test fodder for the differential."""
    p, q = lens.p, lens.q
    if p < 2:
        raise ValueError("wiggle diagram needs p >= 2")
    base = simple_knot_diagram(lens, k)
    wu, hu = _units(lens)
    x0 = Fraction(1, 2 * p)
    x1 = _chord_x(x0, lens, 1)  # chord position at the line y = 1
    e_left, e_right = 4 * wu, 4 * wu
    h_top, h_bot, d_entry, d_exit = 2 * hu, 2 * hu, 3 * hu, 3 * hu
    start = base.beta_path[0]
    path = [
        start,
        (_chord_x(x1, lens, -d_entry), 1 - d_entry),
        (x1 - e_left, 1 - d_entry),
        (x1 - e_left, 1 + h_top),
        (x1, 1 + h_top),
        (x1, 1 - h_bot),
        (x1 + e_right, 1 - h_bot),
        (x1 + e_right, 1 + d_exit),
        (_chord_x(x1, lens, d_exit), 1 + d_exit),
        (start[0] + q, start[1] + p),
    ]
    d = DoublyPointedDiagram(lens, tuple(path), base.w, base.z, CUSTOM, param=k)
    validate(d)
    return d


# ---------------------------------------------------------------------------
# validity
# ---------------------------------------------------------------------------


def _period_segments(d: DoublyPointedDiagram) -> List[Tuple[Point, Point]]:
    return list(zip(d.beta_path, d.beta_path[1:]))


def _bbox(points: Sequence[Point]):
    xs = [pt[0] for pt in points]
    ys = [pt[1] for pt in points]
    return min(xs), max(xs), min(ys), max(ys)


def _translates_in_range(d: DoublyPointedDiagram, box) -> List[Tuple[int, int]]:
    """All (m, n) such that the translated period bbox meets `box`."""
    X0, X1, Y0, Y1 = _bbox(d.beta_path)
    qx0, qx1, qy0, qy1 = box
    out = []
    m_lo = math.ceil(qx0 - X1)
    m_hi = math.floor(qx1 - X0)
    n_lo = math.ceil(qy0 - Y1)
    n_hi = math.floor(qy1 - Y0)
    for m in range(m_lo, m_hi + 1):
        for n in range(n_lo, n_hi + 1):
            out.append((m, n))
    return out


def _translated_segments(
    d: DoublyPointedDiagram, box
) -> List[Tuple[Point, Point, Tuple[int, int], int]]:
    """Beta segments of every translate meeting `box`, tagged (m, n, seg index)."""
    segs = _period_segments(d)
    out = []
    for (m, n) in _translates_in_range(d, box):
        for i, (a, b) in enumerate(segs):
            out.append(
                (
                    (a[0] + m, a[1] + n),
                    (b[0] + m, b[1] + n),
                    (m, n),
                    i,
                )
            )
    return out


def validate(d: DoublyPointedDiagram) -> None:
    """Exact checks: periodicity, transversality, embeddedness, basepoints."""
    p, q = d.lens.p, d.lens.q
    bp = d.beta_path
    if len(bp) < 2:
        raise ValueError("beta path needs at least one segment")
    if bp[-1] != (bp[0][0] + q, bp[0][1] + p):
        raise ValueError("beta path does not close up to the (q, p) translate")
    for v in bp:
        if v[1] == int(v[1]):
            raise ValueError("beta vertex on an alpha line (non-transversal)")
    segs = _period_segments(d)
    for a, b in segs:
        if a == b:
            raise ValueError("zero-length beta segment")
    # Embeddedness: the period path is simple, and distinct translates are
    # disjoint.  The (q, p) translate shares one endpoint by periodicity.
    n_segs = len(segs)
    for i in range(n_segs):
        for j in range(i + 1, n_segs):
            if j == i + 1:
                continue  # consecutive, share a vertex
            try:
                if segments_cross(*segs[i], *segs[j]):
                    raise ValueError("beta period self-intersects")
            except DegenerateGeometry as exc:
                raise ValueError(f"degenerate beta period: {exc}") from None
    box = _bbox(bp)
    for a, b, (m, n), j in _translated_segments(d, box):
        if (m, n) == (0, 0):
            continue
        for i, (c, e) in enumerate(segs):
            # The continuation through the shared endpoint is fine.
            if (m, n) == (q, p) and j == 0 and i == n_segs - 1:
                continue
            if (m, n) == (-q, -p) and j == n_segs - 1 and i == 0:
                continue
            try:
                if segments_cross(c, e, a, b):
                    raise ValueError("beta translates intersect (not embedded)")
            except DegenerateGeometry as exc:
                raise ValueError(f"degenerate beta translates: {exc}") from None
    # Basepoints: off alpha, off beta.
    for name, pt_ in (("w", d.w), ("z", d.z)):
        if pt_[1] == int(pt_[1]):
            raise ValueError(f"basepoint {name} lies on an alpha line")
        px, py = pt_
        pb = (px - 2, px + 2, py - 2, py + 2)
        for a, b, _, _ in _translated_segments(d, pb):
            if min(a[0], b[0]) <= px <= max(a[0], b[0]) and min(a[1], b[1]) <= py <= max(a[1], b[1]):
                from .plgeom import cross as _cross

                if _cross(a, b, pt_) == 0:
                    raise ValueError(f"basepoint {name} lies on beta")
    expected = d.expected_generator_count()
    if expected is not None:
        got = len(generators(d))
        if got != expected:
            raise ValueError(f"diagram has {got} generators, expected {expected}")


# ---------------------------------------------------------------------------
# generators and spin-c classes
# ---------------------------------------------------------------------------


def _crossings_in_beta_order(d: DoublyPointedDiagram) -> List[Tuple[Point, int, bool]]:
    """(position, height, upward) for each alpha crossing along one period."""
    out = []
    for a, b in _period_segments(d):
        ya, yb = a[1], b[1]
        if ya == yb:
            continue
        lo, hi = (ya, yb) if ya < yb else (yb, ya)
        heights = range(math.floor(lo) + 1, math.ceil(hi))
        up = yb > ya
        hs = list(heights) if up else list(reversed(list(heights)))
        for h in hs:
            t = (Fraction(h) - ya) / (yb - ya)
            x = a[0] + t * (b[0] - a[0])
            out.append(((x, Fraction(h)), h, up))
    return out


def generators(d: DoublyPointedDiagram) -> List[Generator]:
    """All intersection points, ordered by position along the alpha circle."""
    p = d.lens.p
    raw = _crossings_in_beta_order(d)
    keyed = []
    for beta_order, (pos, h, up) in enumerate(raw):
        frac_x = pos[0] - math.floor(pos[0])
        keyed.append((frac_x, h, beta_order, pos, up))
    keyed.sort(key=lambda t: (t[0], t[1]))
    for i in range(1, len(keyed)):
        if keyed[i][0] == keyed[i - 1][0]:
            raise ValueError("two generators share an alpha position")
    return [
        Generator(
            index=i,
            position=pos,
            spinc=h % p,
            height=h,
            beta_order=beta_order,
            upward=up,
        )
        for i, (frac_x, h, beta_order, pos, up) in enumerate(keyed)
    ]


def spinc_partition(d: DoublyPointedDiagram) -> Dict[int, List[Generator]]:
    """Partition of generators by relative spin-c class (Z/p valued)."""
    p = d.lens.p
    part: Dict[int, List[Generator]] = {c: [] for c in range(p)}
    for g in generators(d):
        part[g.spinc].append(g)
    if any(not gs for gs in part.values()):
        raise AssertionError("spin-c partition must have exactly p nonempty classes")
    return part


def spinc_multiset(d: DoublyPointedDiagram) -> Tuple[int, ...]:
    return tuple(sorted((len(v) for v in spinc_partition(d).values()), reverse=True))


# ---------------------------------------------------------------------------
# homology class of the knot
# ---------------------------------------------------------------------------


def _signed_beta_crossings(d: DoublyPointedDiagram, path: Sequence[Point]) -> int:
    """Signed crossings of a PL path with all beta lifts; +1 = left-to-right."""
    from .plgeom import segment_crossing_sign

    xs = [pt[0] for pt in path]
    ys = [pt[1] for pt in path]
    box = (min(xs) - 1, max(xs) + 1, min(ys) - 1, max(ys) + 1)
    total = 0
    for a, b, _, _ in _translated_segments(d, box):
        for u, v in zip(path, path[1:]):
            total += segment_crossing_sign(a, b, u, v)
    return total


def _connecting_paths(w: Point, z: Point):
    """Deterministic list of candidate PL paths from w to z (L-shapes with
    fallback waypoints for degenerate configurations)."""
    wob = Fraction(1, 257)
    wob2 = Fraction(1, 521)
    yield [w, (z[0], w[1]), z]
    yield [w, (w[0], z[1]), z]
    yield [w, (z[0] + wob, w[1] - wob2), (z[0] + wob, z[1] - wob2), z]
    yield [w, (z[0] - wob, w[1] + wob2), (z[0] - wob, z[1] + wob2), z]


def knot_class(d: DoublyPointedDiagram) -> int:
    """Class of the knot in H_1 = Z/p, in the library's fixed convention.

    Computed from a w-to-z arc's signed crossings with beta plus the strip
    offset of the basepoints: the loop (beta-avoiding arc) * (alpha-avoiding
    arc) closes up to a deck translate whose vertical component reduces to
    the class in Z^2 / <(1,0), (q,p)> = Z/p.
    """
    p, q = d.lens.p, d.lens.q
    if p == 1:
        return 0
    last_exc: Optional[Exception] = None
    for path in _connecting_paths(d.w, d.z):
        try:
            f = _signed_beta_crossings(d, path)
            break
        except DegenerateGeometry as exc:  # try the next waypoint set
            last_exc = exc
    else:
        raise AssertionError(f"no generic connecting arc found: {last_exc}")
    delta = -f  # iota(W) - iota(Z)
    qinv = pow(q, -1, p)
    n1 = (-delta * qinv) % p
    return (n1 + math.floor(d.z[1]) - math.floor(d.w[1])) % p


def same_homology_class(d1: DoublyPointedDiagram, d2: DoublyPointedDiagram) -> bool:
    if d1.lens != d2.lens:
        raise ValueError("diagrams are over different lens spaces")
    return knot_class(d1) == knot_class(d2)


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def _frac_str(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def serialize_diagram(d: DoublyPointedDiagram) -> str:
    lines = [f"p {d.lens.p}", f"q {d.lens.q}", f"label {d.label}"]
    if d.param is not None:
        lines.append(f"param {d.param}")
    for v in d.beta_path:
        lines.append(f"beta {_frac_str(v[0])} {_frac_str(v[1])}")
    lines.append(f"w {_frac_str(d.w[0])} {_frac_str(d.w[1])}")
    lines.append(f"z {_frac_str(d.z[0])} {_frac_str(d.z[1])}")
    return "\n".join(lines) + "\n"


def parse_diagram(text: str) -> DoublyPointedDiagram:
    p = q = None
    label = CUSTOM
    param = None
    beta: List[Point] = []
    w = z = None
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, *rest = line.split()
        if key == "p":
            p = int(rest[0])
        elif key == "q":
            q = int(rest[0])
        elif key == "label":
            label = rest[0]
        elif key == "param":
            param = int(rest[0])
        elif key == "beta":
            beta.append((Fraction(rest[0]), Fraction(rest[1])))
        elif key == "w":
            w = (Fraction(rest[0]), Fraction(rest[1]))
        elif key == "z":
            z = (Fraction(rest[0]), Fraction(rest[1]))
        else:
            raise ValueError(f"unknown diagram line: {line}")
    if p is None or q is None or w is None or z is None or not beta:
        raise ValueError("incomplete diagram")
    d = DoublyPointedDiagram(LensParams(p, q), tuple(beta), w, z, label, param=param)
    validate(d)
    return d
