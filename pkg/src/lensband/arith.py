"""Number theory of the type-VII lens space parameters.

A lens space L(p,q) with p > q > 0 is dual-to-type-VII exactly when
q^2 + q + 1 = 0 (mod p).  Since q^2 + q is always even, any p admitting a
solution is odd.  The degenerate pair (1, 0) stands for S^3 and is accepted
by the diagram builders but excluded from enumeration.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import List, Set


@dataclass(frozen=True, order=True)
class LensParams:
    """Parameters (p, q) of the lens space L(p,q), p > q > 0, gcd(p,q) = 1.

    The pair (1, 0) is the documented degenerate case (S^3).
    """

    p: int
    q: int

    def __post_init__(self):
        if self.p < 1:
            raise ValueError(f"p must be positive, got {self.p}")
        if self.p == 1:
            if self.q != 0:
                raise ValueError("the degenerate case is (p, q) = (1, 0)")
            return
        if not (0 < self.q < self.p):
            raise ValueError(f"need 0 < q < p, got (p, q) = ({self.p}, {self.q})")
        if gcd(self.p, self.q) != 1:
            raise ValueError(f"p and q must be coprime, got ({self.p}, {self.q})")

    @property
    def is_degenerate(self) -> bool:
        return self.p == 1


def berge7_solutions(p: int) -> Set[int]:
    """All q with 0 < q < p, gcd(p,q) = 1 and q^2 + q + 1 = 0 (mod p).

    The empty set is a valid answer (for instance p = 5).
    """
    if p < 1:
        raise ValueError("p must be positive")
    sols = set()
    for q in range(1, p):
        if (q * q + q + 1) % p == 0 and gcd(p, q) == 1:
            sols.add(q)
    return sols


def enumerate_berge7(p_max: int) -> List[LensParams]:
    """All LensParams with p <= p_max solving the congruence, sorted."""
    if p_max < 1:
        raise ValueError("p_max must be positive")
    out = []
    for p in range(1, p_max + 1):
        for q in sorted(berge7_solutions(p)):
            out.append(LensParams(p, q))
    return out


def two_bridge_equivalent(p: int, q: int, q2: int) -> bool:
    """Unoriented two-bridge equivalence: q2 = +-q^{+-1} (mod p)."""
    for name, val in (("q", q), ("q2", q2)):
        if not (0 < val < p):
            raise ValueError(f"{name} out of range (0, p)")
        if gcd(p, val) != 1:
            raise ValueError(f"{name} not coprime to p")
    qinv = pow(q, -1, p)
    return q2 % p in {q % p, (-q) % p, qinv, (-qinv) % p}


def two_bridge_class_representative(p: int, q: int) -> int:
    """Smallest member of {q, -q, q^{-1}, -q^{-1}} mod p."""
    if not (0 < q < p) or gcd(p, q) != 1:
        raise ValueError("q must lie in (0, p) and be coprime to p")
    qinv = pow(q, -1, p)
    return min(q % p, (-q) % p, qinv, (-qinv) % p)
