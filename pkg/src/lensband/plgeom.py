"""Exact piecewise-linear geometry over the rationals.

Everything the genus-1 diagram code needs: segment intersection tests,
signed transversal crossings, and point-in-polygon queries.  All coordinates
are `fractions.Fraction`; there is no floating point and therefore no
tolerance anywhere.  Degenerate configurations (touching endpoints, collinear
overlaps, points on edges) raise `DegenerateGeometry` so callers can either
fix their template constants or treat the input as invalid.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Sequence, Tuple

Point = Tuple[Fraction, Fraction]


class DegenerateGeometry(Exception):
    """A geometric predicate hit a non-transversal configuration."""


def pt(x, y) -> Point:
    return (Fraction(x), Fraction(y))


def cross(o: Point, a: Point, b: Point) -> Fraction:
    """Cross product (a - o) x (b - o)."""
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def vec_cross(u: Point, v: Point) -> Fraction:
    return u[0] * v[1] - u[1] * v[0]


def _bbox_disjoint(p1, p2, q1, q2) -> bool:
    return (
        max(p1[0], p2[0]) < min(q1[0], q2[0])
        or max(q1[0], q2[0]) < min(p1[0], p2[0])
        or max(p1[1], p2[1]) < min(q1[1], q2[1])
        or max(q1[1], q2[1]) < min(p1[1], p2[1])
    )


def segments_cross(p1: Point, p2: Point, q1: Point, q2: Point) -> bool:
    """True iff open segments (p1,p2) and (q1,q2) cross transversally.

    Shared endpoints count as degenerate, as does any collinear overlap or a
    crossing through an endpoint: templates are built so none of these occur,
    and the validity checks want to know if they do.
    """
    if _bbox_disjoint(p1, p2, q1, q2):
        return False
    d1 = cross(q1, q2, p1)
    d2 = cross(q1, q2, p2)
    d3 = cross(p1, p2, q1)
    d4 = cross(p1, p2, q2)
    if d1 == 0 and d2 == 0:
        # Collinear; any bbox overlap is an overlap of segments.
        return_degenerate = not _bbox_disjoint(p1, p2, q1, q2)
        if return_degenerate:
            raise DegenerateGeometry("collinear overlapping segments")
        return False
    if d1 == 0 or d2 == 0 or d3 == 0 or d4 == 0:
        # An endpoint lies on the other segment (possibly just touching).
        if (d1 == 0 and _between(q1, q2, p1)) or (d2 == 0 and _between(q1, q2, p2)) \
           or (d3 == 0 and _between(p1, p2, q1)) or (d4 == 0 and _between(p1, p2, q2)):
            raise DegenerateGeometry("segment endpoint touches another segment")
        return False
    return (d1 > 0) != (d2 > 0) and (d3 > 0) != (d4 > 0)


def _between(a: Point, b: Point, c: Point) -> bool:
    """c is on the closed segment [a, b]; assumes collinear."""
    return (
        min(a[0], b[0]) <= c[0] <= max(a[0], b[0])
        and min(a[1], b[1]) <= c[1] <= max(a[1], b[1])
    )


def segment_crossing_sign(p1: Point, p2: Point, q1: Point, q2: Point) -> int:
    """Signed transversal crossing of directed segment q against directed p.

    Returns 0 if the open segments do not cross.  Otherwise +1 when q crosses
    from the left side of p to its right side (i.e. the frame (p-dir, q-dir)
    is negatively oriented), else -1.
    """
    if not segments_cross(p1, p2, q1, q2):
        return 0
    u = (p2[0] - p1[0], p2[1] - p1[1])
    v = (q2[0] - q1[0], q2[1] - q1[1])
    c = vec_cross(u, v)
    if c == 0:  # transversal crossing cannot have parallel directions
        raise DegenerateGeometry("parallel transversal crossing")
    return -1 if c > 0 else 1


def path_signed_crossings(path: Sequence[Point], q1: Point, q2: Point) -> int:
    """Sum of signed crossings of directed segment (q1,q2) with a PL path."""
    total = 0
    for a, b in zip(path, path[1:]):
        total += segment_crossing_sign(a, b, q1, q2)
    return total


def polygon_is_simple(poly: Sequence[Point]) -> bool:
    """No repeated vertices, no self-crossings, no degenerate touches."""
    n = len(poly)
    if n < 3:
        return False
    if len({(x, y) for x, y in poly}) != n:
        return False
    for i in range(n):
        a1, a2 = poly[i], poly[(i + 1) % n]
        if a1 == a2:
            return False
        for j in range(i + 1, n):
            if j == i or (j + 1) % n == i or (i + 1) % n == j:
                continue
            b1, b2 = poly[j], poly[(j + 1) % n]
            try:
                if segments_cross(a1, a2, b1, b2):
                    return False
            except DegenerateGeometry:
                return False
    return True


def point_in_polygon(point: Point, poly: Sequence[Point]) -> bool:
    """Exact crossing-number test for a simple polygon; boundary is degenerate."""
    n = len(poly)
    crossings = 0
    px, py = point
    for i in range(n):
        x1, y1 = poly[i]
        x2, y2 = poly[(i + 1) % n]
        if (x1, y1) == (px, py) or (x2, y2) == (px, py):
            raise DegenerateGeometry("point is a polygon vertex")
        if y1 == y2:
            if y1 == py and min(x1, x2) <= px <= max(x1, x2):
                raise DegenerateGeometry("point on horizontal edge")
            continue
        # Half-open rule: the edge covers heights [min, max) so a ray through
        # a vertex is counted exactly once.
        if (y1 <= py < y2) or (y2 <= py < y1):
            x_int = x1 + (py - y1) * (x2 - x1) / (y2 - y1)
            if x_int == px:
                raise DegenerateGeometry("point on polygon edge")
            if x_int > px:
                crossings += 1
    return crossings % 2 == 1


def segment_contact(p1: Point, p2: Point, q1: Point, q2: Point):
    """Classify the contact of two closed segments.

    Returns one of:
      ("disjoint", None)
      ("cross", point)      -- proper transversal crossing of the interiors
      ("touch", point)      -- single-point contact involving an endpoint
      ("overlap", None)     -- collinear overlap of positive length
    """
    if _bbox_disjoint(p1, p2, q1, q2):
        return ("disjoint", None)
    d1 = cross(q1, q2, p1)
    d2 = cross(q1, q2, p2)
    d3 = cross(p1, p2, q1)
    d4 = cross(p1, p2, q2)
    if d1 == 0 and d2 == 0:
        # collinear
        pts = []
        for c in (p1, p2):
            if _between(q1, q2, c):
                pts.append(c)
        for c in (q1, q2):
            if _between(p1, p2, c) and c not in pts:
                pts.append(c)
        if not pts:
            return ("disjoint", None)
        if len({tuple(c) for c in pts}) == 1:
            return ("touch", pts[0])
        return ("overlap", None)
    for dval, c in ((d1, p1), (d2, p2)):
        if dval == 0 and _between(q1, q2, c):
            return ("touch", c)
    for dval, c in ((d3, q1), (d4, q2)):
        if dval == 0 and _between(p1, p2, c):
            return ("touch", c)
    if (d1 > 0) != (d2 > 0) and (d3 > 0) != (d4 > 0):
        denom = (p2[0] - p1[0]) * (q2[1] - q1[1]) - (p2[1] - p1[1]) * (q2[0] - q1[0])
        t = ((q1[0] - p1[0]) * (q2[1] - q1[1]) - (q1[1] - p1[1]) * (q2[0] - q1[0])) / denom
        point = (p1[0] + t * (p2[0] - p1[0]), p1[1] + t * (p2[1] - p1[1]))
        return ("cross", point)
    return ("disjoint", None)


def segment_intersects_polygon_interior(
    a: Point, b: Point, poly: Sequence[Point]
) -> bool:
    """Does the open segment (a, b) meet the open interior of a simple polygon?

    Exact: either one endpoint is interior, or the segment crosses an edge.
    Touching configurations raise DegenerateGeometry.
    """
    for q1, q2 in zip(poly, list(poly[1:]) + [poly[0]]):
        if segments_cross(a, b, q1, q2):
            return True
    for endpoint in (a, b):
        inside = _point_in_polygon_allow_vertex(endpoint, poly)
        if inside:
            return True
    return False


def _point_in_polygon_allow_vertex(point: Point, poly: Sequence[Point]) -> bool:
    try:
        return point_in_polygon(point, poly)
    except DegenerateGeometry:
        return False  # on the boundary, not interior
