"""Finitely presented groups: Wirtinger presentations, abelianization by
Smith normal form, double-branched-cover quotients, and coset enumeration.

Relator words are tuples of nonzero 1-based signed generator indices.  The
enumerator is a deterministic scan-and-fill coset table with immediate
coincidence processing; it either returns the subgroup index or reports
`exceeded` when the table would outgrow ``max_cosets`` (inconclusive, never
wrong).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .links import DiagramError, PlanarDiagram, components, validate
from .invariants import _arc_labels


@dataclass(frozen=True)
class GroupPresentation:
    generator_count: int
    relators: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        for rel in self.relators:
            for x in rel:
                if x == 0 or abs(x) > self.generator_count:
                    raise ValueError(f"relator letter {x} out of range")

    def serialize(self) -> str:
        lines = [f"generators {self.generator_count}"]
        for rel in self.relators:
            lines.append("relator " + " ".join(str(x) for x in rel))
        return "\n".join(lines) + "\n"

    @classmethod
    def parse(cls, text: str) -> "GroupPresentation":
        count = None
        rels = []
        for raw in text.splitlines():
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            key, *rest = line.split()
            if key == "generators":
                count = int(rest[0])
            elif key == "relator":
                rels.append(tuple(int(x) for x in rest))
            else:
                raise ValueError(f"unknown presentation line: {line}")
        if count is None:
            raise ValueError("missing generator count")
        return cls(count, tuple(rels))


def wirtinger(d: PlanarDiagram) -> GroupPresentation:
    """One generator per arc, one relator per crossing, last relator dropped.

    Free loops contribute free generators.
    """
    d = d.without_markers()
    validate(d)
    if not d.crossings:
        return GroupPresentation(d.free_loops, ())
    arcs = _arc_labels(d)
    n_arcs = len(set(arcs.values()))
    rels: List[Tuple[int, ...]] = []
    for c in d.crossings:
        x_in = arcs[c.under_in] + 1
        x_out = arcs[c.under_out] + 1
        x_over = arcs[c.over_in] + 1
        if c.sign > 0:
            # out = over in over^-1
            rels.append((-x_out, x_over, x_in, -x_over))
        else:
            rels.append((-x_out, -x_over, x_in, x_over))
    rels = rels[:-1]
    return GroupPresentation(n_arcs + d.free_loops, tuple(rels))


def branched_quotient(d: PlanarDiagram) -> GroupPresentation:
    """Wirtinger presentation with one meridian-square relator added.

    All meridians are conjugate for a knot, so one squared meridian kills
    them all; the resulting group has order 2 |pi_1| of the double branched
    cover when that is finite.
    """
    if components(d.without_markers()) != 1:
        raise DiagramError("branched quotient requires a knot diagram")
    P = wirtinger(d)
    return GroupPresentation(P.generator_count, P.relators + ((1, 1),))


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------


def smith_normal_form(A: Sequence[Sequence[int]]):
    """(D, U, V) with U A V = D diagonal, divisibility chain, U, V unimodular."""
    rows = len(A)
    cols = len(A[0]) if rows else 0
    D = [list(map(int, row)) for row in A]
    U = [[int(i == j) for j in range(rows)] for i in range(rows)]
    V = [[int(i == j) for j in range(cols)] for i in range(cols)]

    def row_op(i, j, k):  # row_i -= k * row_j
        D[i] = [a - k * b for a, b in zip(D[i], D[j])]
        U[i] = [a - k * b for a, b in zip(U[i], U[j])]

    def col_op(i, j, k):  # col_i -= k * col_j
        for r in range(rows):
            D[r][i] -= k * D[r][j]
        for r in range(cols):
            V[r][i] -= k * V[r][j]

    def row_swap(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def col_swap(i, j):
        for r in range(rows):
            D[r][i], D[r][j] = D[r][j], D[r][i]
        for r in range(cols):
            V[r][i], V[r][j] = V[r][j], V[r][i]

    n = min(rows, cols)
    t = 0
    while t < n:
        # find a nonzero pivot with least absolute value
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                if D[i][j] != 0 and (best is None or abs(D[i][j]) < abs(D[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        bi, bj = best
        if bi != t:
            row_swap(t, bi)
        if bj != t:
            col_swap(t, bj)
        dirty = False
        for i in range(t + 1, rows):
            if D[i][t]:
                q = D[i][t] // D[t][t]
                row_op(i, t, q)
                if D[i][t]:
                    dirty = True
        for j in range(t + 1, cols):
            if D[t][j]:
                q = D[t][j] // D[t][t]
                col_op(j, t, q)
                if D[t][j]:
                    dirty = True
        if dirty:
            continue  # remainder left somewhere: pick a smaller pivot
        # enforce divisibility of the remaining block by D[t][t]
        offender = None
        for i in range(t + 1, rows):
            for j in range(t + 1, cols):
                if D[i][j] % D[t][t]:
                    offender = i
                    break
            if offender:
                break
        if offender is not None:
            row_op(t, offender, -1)  # row_t += row_offender
            continue
        t += 1
    for i in range(min(rows, cols)):
        if D[i][i] < 0:
            D[i] = [-x for x in D[i]]
            U[i] = [-x for x in U[i]]
    return D, U, V


def abelianization(P: GroupPresentation) -> List[int]:
    """Invariant factors of the abelianized group: d_1 | d_2 | ..., with 0
    entries for free rank; trivial factors 1 are omitted."""
    g = P.generator_count
    if not P.relators:
        return [0] * g
    M = [[0] * g for _ in P.relators]
    for ri, rel in enumerate(P.relators):
        for x in rel:
            M[ri][abs(x) - 1] += 1 if x > 0 else -1
    D, _, _ = smith_normal_form(M)
    rank = min(len(M), g)
    factors = [abs(D[i][i]) for i in range(rank)]
    nontrivial = [f for f in factors if f > 1]
    free_rank = g - sum(1 for f in factors if f != 0)
    return nontrivial + [0] * free_rank


# ---------------------------------------------------------------------------
# coset enumeration
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CosetResult:
    order: Optional[int]
    exceeded: bool

    @property
    def ok(self) -> bool:
        return not self.exceeded


def coset_enumerate(
    P: GroupPresentation,
    subgroup_generators: Sequence[Sequence[int]] = (),
    max_cosets: int = 100_000,
) -> CosetResult:
    """Index of the subgroup by deterministic scan-and-fill enumeration."""
    if max_cosets < 1:
        raise ValueError("max_cosets must be positive")
    g = P.generator_count
    ncols = 2 * g

    def col(x: int) -> int:
        return 2 * (abs(x) - 1) + (0 if x > 0 else 1)

    def inv_col(c: int) -> int:
        return c ^ 1

    table: List[List[Optional[int]]] = [[None] * ncols]
    rep: List[int] = [0]
    live_count = [1]
    coincidences: List[Tuple[int, int]] = []

    def find(a: int) -> int:
        while rep[a] != a:
            rep[a] = rep[rep[a]]
            a = rep[a]
        return a

    def new_coset() -> Optional[int]:
        if live_count[0] >= max_cosets:
            return None
        table.append([None] * ncols)
        rep.append(len(table) - 1)
        live_count[0] += 1
        return len(table) - 1

    def set_entry(a: int, c: int, b: int) -> None:
        a, b = find(a), find(b)
        cur = table[a][c]
        if cur is not None and find(cur) != b:
            coincidences.append((find(cur), b))
        else:
            table[a][c] = b
        cur2 = table[b][inv_col(c)]
        if cur2 is not None and find(cur2) != a:
            coincidences.append((find(cur2), a))
        else:
            table[b][inv_col(c)] = a

    def process_coincidences() -> None:
        while coincidences:
            a, b = coincidences.pop()
            a, b = find(a), find(b)
            if a == b:
                continue
            if b < a:
                a, b = b, a
            rep[b] = a
            live_count[0] -= 1
            for c in range(ncols):
                img = table[b][c]
                if img is None:
                    continue
                img = find(img)
                set_entry(a, c, img)
            table[b] = [None] * ncols

    def scan_and_fill(start: int, word: Sequence[int]) -> bool:
        """Scan `word` at coset `start` (start . word = start), filling gaps.
        Returns False when the coset limit is hit."""
        while True:
            start = find(start)
            if rep[start] != start:
                return True
            f = start
            i = 0
            n = len(word)
            while i < n:
                nxt = table[f][col(word[i])]
                if nxt is None:
                    break
                f = find(nxt)
                i += 1
            if i == n:
                if f != start:
                    coincidences.append((f, start))
                    process_coincidences()
                return True
            b = start
            j = n - 1
            while j >= i:
                prv = table[b][inv_col(col(word[j]))]
                if prv is None:
                    break
                b = find(prv)
                j -= 1
            if j < i:
                coincidences.append((f, b))
                process_coincidences()
                return True
            if j == i:
                set_entry(f, col(word[i]), b)
                process_coincidences()
                return True
            nc = new_coset()
            if nc is None:
                return False
            set_entry(f, col(word[i]), nc)
            process_coincidences()

    for word in subgroup_generators:
        if not scan_and_fill(0, list(word)):
            return CosetResult(None, True)
    c = 0
    while c < len(table):
        if find(c) != c:
            c += 1
            continue
        for rel in P.relators:
            if not scan_and_fill(c, list(rel)):
                return CosetResult(None, True)
            if find(c) != c:
                break
        if find(c) != c:
            c += 1
            continue
        # close the row: every generator image must exist for completeness
        for column in range(ncols):
            if find(c) != c:
                break
            if table[c][column] is None:
                nc = new_coset()
                if nc is None:
                    return CosetResult(None, True)
                set_entry(c, column, nc)
                process_coincidences()
        c += 1
    return CosetResult(live_count[0], False)
