"""Classical invariants of planar diagrams.

* Kauffman bracket by planar tangle contraction: the diagram is absorbed one
  crossing at a time into a disk; the state is a Laurent-weighted sum of
  noncrossing pairings of the disk boundary.  Cost is exponential only in
  the frontier width, never in the crossing number.
* Jones polynomial in v = t^(1/2): (-A^3)^(-writhe) * bracket with t = A^-4.
* Determinant and linking form from the Goeritz matrix of a checkerboard
  coloring; |det| equals the order of H_1 of the double branched cover.
* Alexander polynomial via the abelianized Fox matrix of the Wirtinger
  presentation, normalized symmetric with positive value 1 at t = 1.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Set, Tuple

from .laurent import Laurent, poly_divide_exact
from .links import (
    Crossing,
    DiagramError,
    PlanarDiagram,
    components,
    connected_parts,
    simplify,
    strand_cycles,
    validate,
    writhe,
)


class BudgetExceeded(RuntimeError):
    pass


DELTA = Laurent({2: -1, -2: -1})  # -A^2 - A^-2, the value of a free circle

DEFAULT_CROSSING_BUDGET = 48
DEFAULT_WIDTH_BUDGET = 24


# ---------------------------------------------------------------------------
# faces and checkerboard structure
# ---------------------------------------------------------------------------


class FaceData:
    """Faces of the 4-valent diagram from its rotation system.

    Darts are (crossing, slot).  alpha flips a dart to the other end of its
    edge; the face map is sigma(alpha(dart)) with sigma the CCW rotation.
    ``face_at`` indexes faces by the quadrant (crossing, slot) between slot
    and slot+1.
    """

    def __init__(self, d: PlanarDiagram):
        self.diagram = d
        edge_darts: Dict[int, List[Tuple[int, int]]] = {}
        for ci, c in enumerate(d.crossings):
            for s in range(4):
                edge_darts.setdefault(c.edges[s], []).append((ci, s))
        for e, darts in edge_darts.items():
            if len(darts) != 2:
                raise DiagramError(f"edge {e} does not have two ends")
        self.edge_darts = edge_darts

        def alpha(dart):
            a, b = edge_darts[d.crossings[dart[0]].edges[dart[1]]]
            return b if dart == a else a

        all_darts = [(ci, s) for ci in range(len(d.crossings)) for s in range(4)]
        face_of_dart: Dict[Tuple[int, int], int] = {}
        face_at: Dict[Tuple[int, int], int] = {}
        faces: List[List[Tuple[int, int]]] = []
        for start in all_darts:
            if start in face_of_dart:
                continue
            fid = len(faces)
            orbit = []
            cur = start
            while cur not in face_of_dart:
                face_of_dart[cur] = fid
                orbit.append(cur)
                nxt = alpha(cur)
                # the step around the face assigns the quadrant at the far end
                quad = nxt
                if quad in face_at:
                    raise DiagramError("quadrant visited twice (invalid rotation)")
                face_at[quad] = fid
                cur = (nxt[0], (nxt[1] + 1) % 4)
            faces.append(orbit)
        self.face_at = face_at
        self.face_count = len(faces)
        # Euler check per connected part: V - E + F = 2 on the sphere.
        for part in connected_parts(d):
            verts = len(part)
            edges = {e for ci in part for e in d.crossings[ci].edges}
            fids = {face_at[(ci, s)] for ci in part for s in range(4)}
            if verts - len(edges) + len(fids) != 2:
                raise DiagramError("rotation system is not planar")

    def checkerboard(self) -> Dict[int, int]:
        """2-coloring of faces (0/1), color differing across every edge."""
        d = self.diagram
        color: Dict[int, int] = {}
        for part in connected_parts(d):
            seed = self.face_at[(part[0], 0)]
            color[seed] = 0
            stack = [seed]
            # adjacency via edges: the two faces along edge at (ci, s) are the
            # quadrants (ci, s) and (ci, s-1)
            adj: Dict[int, Set[int]] = {}
            for ci in part:
                for s in range(4):
                    f1 = self.face_at[(ci, s)]
                    f2 = self.face_at[(ci, (s - 1) % 4)]
                    adj.setdefault(f1, set()).add(f2)
                    adj.setdefault(f2, set()).add(f1)
            while stack:
                f = stack.pop()
                for g in sorted(adj.get(f, ())):
                    if g not in color:
                        color[g] = 1 - color[f]
                        stack.append(g)
                    elif color[g] == color[f]:
                        raise DiagramError("diagram is not checkerboard colorable")
        return color


def _goeritz_matrix(d: PlanarDiagram) -> Tuple[List[List[int]], int]:
    """Full Goeritz matrix over the white faces, plus the white face count."""
    fd = FaceData(d)
    color = fd.checkerboard()
    white = sorted(f for f, col in color.items() if col == 0)
    windex = {f: i for i, f in enumerate(white)}
    m = len(white)
    G = [[0] * m for _ in range(m)]
    for ci, c in enumerate(d.crossings):
        quads = [fd.face_at[(ci, s)] for s in range(4)]
        whites = [s for s in range(4) if color[quads[s]] == 0]
        if len(whites) != 2:
            raise DiagramError("checkerboard coloring failed at a crossing")
        s1, s2 = whites
        # eta distinguishes which diagonal pair of quadrants is white
        eta = 1 if set(whites) == {1, 3} else -1
        f1, f2 = quads[s1], quads[s2]
        if f1 == f2:
            continue
        i, j = windex[f1], windex[f2]
        G[i][j] -= eta
        G[j][i] -= eta
    for i in range(m):
        G[i][i] = -sum(G[i][j] for j in range(m) if j != i)
    return G, m


def _int_det(mat: List[List[int]]) -> int:
    """Bareiss fraction-free determinant of an integer matrix."""
    n = len(mat)
    if n == 0:
        return 1
    a = [row[:] for row in mat]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def determinant(d: PlanarDiagram) -> int:
    """|H_1| of the double branched cover (0 when infinite)."""
    d = d.without_markers()
    validate(d)
    parts = connected_parts(d)
    split_pieces = len(parts) + d.free_loops
    if split_pieces == 0:
        raise DiagramError("empty diagram")
    if split_pieces > 1:
        return 0  # split link: H_1 of the double cover is infinite
    if not d.crossings:
        return 1  # unknot
    G, m = _goeritz_matrix(d)
    struck = [row[1:] for row in G[1:]]
    return abs(_int_det(struck))


def linking_form_fraction(d: PlanarDiagram) -> int:
    """Two-bridge class of the linking form of the double branched cover.

    Requires odd determinant p >= 3 and cyclic H_1.  Returns the canonical
    representative of {+-q^{+-1}} where the form takes value q/p on a
    generator.
    """
    from .arith import two_bridge_class_representative
    from .groups import smith_normal_form

    d = d.without_markers()
    p = determinant(d)
    if p == 0 or p % 2 == 0:
        raise DiagramError(f"determinant {p} is not odd")
    if p == 1:
        raise DiagramError("determinant 1 admits no fraction class in (0, 1)")
    G, m = _goeritz_matrix(d)
    struck = [row[1:] for row in G[1:]]
    n = len(struck)
    D, U, V = smith_normal_form(struck)
    factors = [abs(D[i][i]) for i in range(n)]
    nontrivial = [f for f in factors if f != 1]
    if nontrivial != [p]:
        raise DiagramError(f"H_1 of the double cover is not cyclic: {factors}")
    gen_index = factors.index(p)
    # generator of coker(G') in the original basis: column of U^{-1}
    uinv = _fraction_inverse(U)
    g = [uinv[i][gen_index] for i in range(n)]
    if any(x.denominator != 1 for x in g):
        raise AssertionError("U not unimodular")
    gi = [int(x) for x in g]
    sol = _solve_fraction([[Fraction(x) for x in row] for row in struck],
                          [Fraction(x) for x in gi])
    lam = sum(Fraction(gi[i]) * sol[i] for i in range(n))
    r = (lam * p) % p  # lam = r/p mod 1
    if r.denominator != 1:
        raise AssertionError("linking form value is not a p-th fraction")
    r = int(r) % p
    if r == 0:
        raise AssertionError("degenerate linking form value")
    return two_bridge_class_representative(p=p, q=r)


def _fraction_inverse(M: List[List[int]]) -> List[List[Fraction]]:
    n = len(M)
    a = [[Fraction(M[i][j]) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)]
         for i in range(n)]
    for k in range(n):
        piv = next(r for r in range(k, n) if a[r][k] != 0)
        a[k], a[piv] = a[piv], a[k]
        inv = 1 / a[k][k]
        a[k] = [x * inv for x in a[k]]
        for r in range(n):
            if r != k and a[r][k] != 0:
                f = a[r][k]
                a[r] = [x - f * y for x, y in zip(a[r], a[k])]
    return [row[n:] for row in a]


def _solve_fraction(A: List[List[Fraction]], b: List[Fraction]) -> List[Fraction]:
    n = len(A)
    a = [A[i][:] + [b[i]] for i in range(n)]
    for k in range(n):
        piv = next(r for r in range(k, n) if a[r][k] != 0)
        a[k], a[piv] = a[piv], a[k]
        inv = 1 / a[k][k]
        a[k] = [x * inv for x in a[k]]
        for r in range(n):
            if r != k and a[r][k] != 0:
                f = a[r][k]
                a[r] = [x - f * y for x, y in zip(a[r], a[k])]
    return [a[i][n] for i in range(n)]


# ---------------------------------------------------------------------------
# Kauffman bracket by tangle contraction
# ---------------------------------------------------------------------------

# Smoothing pairings in slot terms (under = slots 0-2, over = 1-3): the
# A-smoothing joins the quadrants swept when the over strand rotates CCW
# onto the under strand.
_A_PAIRING = ((1, 2), (3, 0))
_B_PAIRING = ((0, 1), (2, 3))


def _trace_pairing(adj: Dict[int, List[int]], survivors: List[int]):
    """Walk a degree-<=2 graph: pair up the survivors, count closed loops.

    Adjacency lists may contain duplicates (double edges are honest 2-cycles);
    edges are consumed as they are walked.
    """
    pairs: List[Tuple[int, int]] = []
    surv_set = set(survivors)

    def consume(u: int, v: int) -> None:
        adj[u].remove(v)
        adj[v].remove(u)

    for start in survivors:
        if not adj.get(start):
            continue  # already consumed as some other survivor's partner
        cur = start
        while True:
            nxt = adj[cur][0]
            consume(cur, nxt)
            if nxt in surv_set:
                pairs.append((start, nxt))
                break
            cur = nxt
    loops = 0
    for node in sorted(adj):
        while adj[node]:
            loops += 1
            cur = node
            nxt = adj[cur][0]
            consume(cur, nxt)
            cur = nxt
            while cur != node:
                nxt = adj[cur][0]
                consume(cur, nxt)
                cur = nxt
    return pairs, loops


def _bracket_connected(crossings: Sequence[Crossing], width_budget: int) -> Laurent:
    """Bracket of a connected diagram, divided by one delta (unknot -> 1)."""
    n = len(crossings)
    if n == 0:
        raise AssertionError("connected bracket needs crossings")
    absorbed = [False] * n
    frontier: List[int] = []  # stub tokens in CCW order around the absorbed disk
    stub_edge: Dict[int, int] = {}
    next_token = [0]
    # states: frozenset of 2-frozensets of stub tokens -> Laurent coefficient
    states: Dict[frozenset, Laurent] = {frozenset(): Laurent.one()}

    def fresh_token(edge: int) -> int:
        t = next_token[0]
        next_token[0] += 1
        stub_edge[t] = edge
        return t

    def absorb(ci: int) -> bool:
        nonlocal states, frontier
        c = crossings[ci]
        internal_pairs: List[Tuple[int, int]] = []
        first_slot: Dict[int, int] = {}
        for s in range(4):
            e = c.edges[s]
            if e in first_slot:
                internal_pairs.append((first_slot[e], s))
            first_slot[e] = s
        internal_slots = {s for pr in internal_pairs for s in pr}
        consumed: List[Tuple[int, int]] = []  # (frontier index, slot)
        used_positions: Set[int] = set()
        for s in range(4):
            if s in internal_slots:
                continue
            e = c.edges[s]
            pos = next(
                (i for i, t in enumerate(frontier)
                 if stub_edge[t] == e and i not in used_positions),
                None,
            )
            if pos is not None:
                used_positions.add(pos)
                consumed.append((pos, s))
        L = len(frontier)
        if not consumed:
            if frontier:
                return False
            slot_arc: List[int] = []
            kept: List[int] = []
            rot = 0
        else:
            poss = sorted(p for p, _ in consumed)
            k = len(poss)
            rot = None
            for r in (p for p in poss):
                rotated = sorted((p - r) % L for p in poss)
                if rotated == list(range(k)):
                    rot = r
                    break
            if rot is None:
                return False
            frontier_rot = frontier[rot:] + frontier[:rot]
            arc_tokens = frontier_rot[:k]
            # align: crossing's consumed slots, contiguous CCW, reversed
            slot_by_pos = {p: s for p, s in consumed}
            arc_slots = [slot_by_pos[(rot + i) % L] for i in range(k)]
            # must be a CCW-contiguous descending... check both contiguities
            ok = all(
                arc_slots[i] == (arc_slots[0] - i) % 4 for i in range(k)
            )
            if not ok:
                return False
            for tok, s in zip(arc_tokens, arc_slots):
                if stub_edge[tok] != c.edges[s]:
                    return False
            slot_arc = list(reversed(arc_slots))  # CCW order on the crossing
            kept = frontier_rot[k:]
        new_slots = []
        if slot_arc:
            s = (slot_arc[-1] + 1) % 4
            while s != slot_arc[0]:
                if s not in internal_slots:
                    new_slots.append(s)
                s = (s + 1) % 4
        else:
            new_slots = [s for s in range(4) if s not in internal_slots]
        new_tokens = [fresh_token(c.edges[s]) for s in new_slots]
        new_frontier = kept + new_tokens
        if len(new_frontier) > width_budget:
            raise BudgetExceeded(
                f"contraction width {len(new_frontier)} exceeds {width_budget}"
            )
        slot_node = {s: -(s + 1) for s in range(4)}  # negative ids for slots
        consumed_links = [
            (frontier[(rot + i) % L] if consumed else 0, slot_node[slot_by_pos[(rot + i) % L]])
            for i in range(len(consumed))
        ] if consumed else []
        new_states: Dict[frozenset, Laurent] = {}
        for pairing, factor in ((_A_PAIRING, Laurent.monomial(1)),
                                (_B_PAIRING, Laurent.monomial(-1))):
            for matching, coeff in states.items():
                adj: Dict[int, List[int]] = {}

                def add(u: int, v: int) -> None:
                    adj.setdefault(u, []).append(v)
                    adj.setdefault(v, []).append(u)

                for pr in matching:
                    u, v = tuple(pr)
                    add(u, v)
                for u, v in pairing:
                    add(slot_node[u], slot_node[v])
                for u, v in internal_pairs:
                    add(slot_node[u], slot_node[v])
                for tok, sn in consumed_links:
                    add(tok, sn)
                survivors = [t for t in kept] + [slot_node[s] for s in new_slots]
                pairs, loops = _trace_pairing(adj, survivors)
                rename = {slot_node[s]: tok for s, tok in zip(new_slots, new_tokens)}
                key = frozenset(
                    frozenset((rename.get(u, u), rename.get(v, v))) for u, v in pairs
                )
                add_val = coeff * factor * (DELTA ** loops)
                acc = new_states.get(key, Laurent.zero()) + add_val
                if acc.is_zero():
                    new_states.pop(key, None)
                else:
                    new_states[key] = acc
        states = new_states
        frontier = new_frontier
        absorbed[ci] = True
        return True

    remaining = set(range(n))
    frontier_edges_cache: Set[int] = set()
    while remaining:
        # prefer the crossing consuming the most stubs; tie-break by index
        frontier_edges = {stub_edge[t] for t in frontier}
        candidates = sorted(
            remaining,
            key=lambda ci: (
                -len([1 for e in crossings[ci].edges if e in frontier_edges]),
                ci,
            ),
        )
        progressed = False
        for ci in candidates:
            if absorb(ci):
                remaining.discard(ci)
                progressed = True
                break
        if not progressed:
            raise AssertionError("contraction stalled (non-planar data?)")
    if frontier:
        raise AssertionError("contraction finished with a nonempty boundary")
    total = states.get(frozenset(), Laurent.zero())
    return poly_divide_exact(total, DELTA)


def kauffman_bracket(
    d: PlanarDiagram,
    crossing_budget: int = DEFAULT_CROSSING_BUDGET,
    width_budget: int = DEFAULT_WIDTH_BUDGET,
) -> Laurent:
    """Kauffman bracket in A, normalized so the unknot has bracket 1."""
    d = d.without_markers()
    validate(d)
    if d.crossing_count() > crossing_budget:
        raise BudgetExceeded(
            f"{d.crossing_count()} crossings exceed the budget {crossing_budget}"
        )
    parts = connected_parts(d)
    value = Laurent.one()
    for part in parts:
        sub = [d.crossings[i] for i in part]
        value = value * _bracket_connected(sub, width_budget)
    n_pieces = len(parts) + d.free_loops
    if n_pieces == 0:
        raise DiagramError("empty diagram")
    return value * (DELTA ** (n_pieces - 1))


def jones(
    d: PlanarDiagram,
    crossing_budget: int = DEFAULT_CROSSING_BUDGET,
    width_budget: int = DEFAULT_WIDTH_BUDGET,
) -> Laurent:
    """Jones polynomial in v = t^(1/2): (-A^3)^(-w) <D> with t = A^(-4)."""
    d = d.without_markers()
    w = writhe(d)
    br = kauffman_bracket(d, crossing_budget, width_budget)
    normalized = (Laurent.monomial(-3, -1) ** w) * br if w >= 0 else \
        (Laurent.monomial(3, -1) ** (-w)) * br
    out: Dict[int, int] = {}
    for e, coeff in normalized.coeffs.items():
        if e % 2 != 0:
            raise AssertionError("normalized bracket has odd A-exponent")
        out[-e // 2] = out.get(-e // 2, 0) + coeff
    return Laurent(out)


def jones_match(candidate: Laurent, reference: Laurent) -> str:
    """Mirror policy comparison: 'direct', 'mirror' or 'fail'."""
    if candidate == reference:
        return "direct"
    if candidate.substitute_inverse() == reference:
        return "mirror"
    return "fail"


# ---------------------------------------------------------------------------
# Alexander polynomial via the abelianized Wirtinger/Fox matrix
# ---------------------------------------------------------------------------


def _arc_labels(d: PlanarDiagram) -> Dict[int, int]:
    """Merge edges through over-strands; returns edge -> arc index."""
    parent: Dict[int, int] = {e: e for e in d.edge_ids()}

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for c in d.crossings:
        a, b = find(c.over_in), find(c.over_out)
        if a != b:
            parent[a] = b
    reps = sorted({find(e) for e in parent})
    index = {r: i for i, r in enumerate(reps)}
    return {e: index[find(e)] for e in parent}


def alexander(
    d: PlanarDiagram,
    crossing_budget: int = DEFAULT_CROSSING_BUDGET,
) -> Laurent:
    """Symmetric Alexander polynomial of a knot diagram, Delta(1) = 1."""
    d = d.without_markers()
    validate(d)
    if components(d) != 1:
        raise DiagramError("Alexander polynomial: knot diagrams only")
    if d.crossing_count() > crossing_budget:
        raise BudgetExceeded("crossing budget exceeded")
    if not d.crossings:
        return Laurent.one()
    arcs = _arc_labels(d)
    n_arcs = len(set(arcs.values()))
    t = Laurent.monomial(1)
    tinv = Laurent.monomial(-1)
    one = Laurent.one()
    rows: List[List[Laurent]] = []
    for c in d.crossings:
        row = [Laurent.zero() for _ in range(n_arcs)]
        i_in = arcs[c.under_in]
        i_out = arcs[c.under_out]
        i_over = arcs[c.over_in]
        if c.sign > 0:
            # out = over * in * over^{-1}:  -x_out + t x_in + (1-t) x_over
            row[i_out] = row[i_out] - one
            row[i_in] = row[i_in] + t
            row[i_over] = row[i_over] + (one - t)
        else:
            row[i_out] = row[i_out] - one
            row[i_in] = row[i_in] + tinv
            row[i_over] = row[i_over] + (one - tinv)
        rows.append(row)
    # drop one relator and one generator column
    rows = rows[:-1]
    mat = [row[1:] for row in rows]
    det = _laurent_det(mat)
    return _normalize_alexander(det)


def _laurent_det(mat: List[List[Laurent]]) -> Laurent:
    """Fraction-free Bareiss determinant over Z[t, t^-1]."""
    n = len(mat)
    if n == 0:
        return Laurent.one()
    if any(len(row) != n for row in mat):
        raise ValueError("determinant needs a square matrix")
    a = [[mat[i][j] for j in range(n)] for i in range(n)]
    sign = 1
    prev = Laurent.one()
    for k in range(n - 1):
        if a[k][k].is_zero():
            for r in range(k + 1, n):
                if not a[r][k].is_zero():
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return Laurent.zero()
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = a[i][j] * a[k][k] - a[i][k] * a[k][j]
                a[i][j] = poly_divide_exact(num, prev) if not num.is_zero() else Laurent.zero()
        prev = a[k][k]
    out = a[n - 1][n - 1]
    return out if sign > 0 else -out


def _normalize_alexander(p: Laurent) -> Laurent:
    if p.is_zero():
        return p
    lo, hi = p.min_degree(), p.max_degree()
    # center the support; a knot polynomial has even spread
    spread = hi - lo
    if spread % 2 != 0:
        raise AssertionError("Alexander polynomial has odd spread")
    centered = p.shift(-(lo + spread // 2))
    if not centered.is_palindromic():
        raise AssertionError("Alexander polynomial is not symmetric")
    if centered.evaluate_int(1) == -1 or (
        centered.evaluate_int(1) != 1 and centered.coeffs.get(centered.max_degree(), 0) < 0
    ):
        centered = -centered
    if centered.evaluate_int(1) != 1:
        raise AssertionError(
            f"Alexander normalization failed: Delta(1) = {centered.evaluate_int(1)}"
        )
    return centered
