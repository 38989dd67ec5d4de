"""One-variable integer Laurent polynomials.

Used as the value type for the Kauffman bracket (variable A), the Jones
polynomial (variable v = t^(1/2)) and the Alexander polynomial (variable t).
Coefficients are exact Python integers; zero coefficients are never stored.
"""

from __future__ import annotations

from typing import Dict, Iterable, Mapping, Tuple


class Laurent:
    """Immutable Laurent polynomial  sum_e  c_e * x^e  with integer c_e."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Mapping[int, int] | Iterable[Tuple[int, int]] = ()):
        d: Dict[int, int] = {}
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        for e, c in items:
            if c:
                d[int(e)] = d.get(int(e), 0) + int(c)
                if d[int(e)] == 0:
                    del d[int(e)]
        self.coeffs = d

    @classmethod
    def zero(cls) -> "Laurent":
        return cls()

    @classmethod
    def one(cls) -> "Laurent":
        return cls({0: 1})

    @classmethod
    def monomial(cls, exponent: int, coeff: int = 1) -> "Laurent":
        return cls({exponent: coeff})

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = Laurent({0: other})
        if not isinstance(other, Laurent):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(frozenset(self.coeffs.items()))

    def __add__(self, other: "Laurent") -> "Laurent":
        d = dict(self.coeffs)
        for e, c in other.coeffs.items():
            d[e] = d.get(e, 0) + c
            if d[e] == 0:
                del d[e]
        out = Laurent.__new__(Laurent)
        out.coeffs = d
        return out

    def __neg__(self) -> "Laurent":
        out = Laurent.__new__(Laurent)
        out.coeffs = {e: -c for e, c in self.coeffs.items()}
        return out

    def __sub__(self, other: "Laurent") -> "Laurent":
        return self + (-other)

    def __mul__(self, other) -> "Laurent":
        if isinstance(other, int):
            if other == 0:
                return Laurent()
            out = Laurent.__new__(Laurent)
            out.coeffs = {e: c * other for e, c in self.coeffs.items()}
            return out
        d: Dict[int, int] = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = e1 + e2
                v = d.get(e, 0) + c1 * c2
                if v:
                    d[e] = v
                elif e in d:
                    del d[e]
        out = Laurent.__new__(Laurent)
        out.coeffs = d
        return out

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Laurent":
        if n < 0:
            if len(self.coeffs) != 1:
                raise ValueError("can only invert monomials")
            ((e, c),) = self.coeffs.items()
            if c not in (1, -1):
                raise ValueError("can only invert unit monomials")
            base = Laurent({-e: c})
            return base ** (-n)
        result = Laurent.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def shift(self, k: int) -> "Laurent":
        """Multiply by x^k."""
        out = Laurent.__new__(Laurent)
        out.coeffs = {e + k: c for e, c in self.coeffs.items()}
        return out

    def substitute_inverse(self) -> "Laurent":
        """x -> x^(-1)."""
        out = Laurent.__new__(Laurent)
        out.coeffs = {-e: c for e, c in self.coeffs.items()}
        return out

    def substitute_power(self, k: int) -> "Laurent":
        """x -> x^k (k nonzero)."""
        if k == 0:
            raise ValueError("k must be nonzero")
        out = Laurent.__new__(Laurent)
        out.coeffs = {e * k: c for e, c in self.coeffs.items()}
        return out

    def evaluate_int(self, x: int) -> int:
        """Evaluate at a nonzero integer (exponents may be negative only if x = +-1)."""
        if x in (1, -1):
            return sum(c * (x ** (e % 2)) for e, c in self.coeffs.items())
        total = 0
        for e, c in self.coeffs.items():
            if e < 0:
                raise ValueError("negative exponent at integer point")
            total += c * x**e
        return total

    def min_degree(self) -> int:
        if not self.coeffs:
            raise ValueError("zero polynomial")
        return min(self.coeffs)

    def max_degree(self) -> int:
        if not self.coeffs:
            raise ValueError("zero polynomial")
        return max(self.coeffs)

    def is_palindromic(self) -> bool:
        """Symmetric under x -> 1/x up to the obvious shift."""
        if not self.coeffs:
            return True
        lo, hi = self.min_degree(), self.max_degree()
        return all(
            self.coeffs.get(lo + i, 0) == self.coeffs.get(hi - i, 0)
            for i in range(hi - lo + 1)
        )

    def serialize(self) -> str:
        """Sorted `exponent:coefficient` pairs, comma separated."""
        if not self.coeffs:
            return "0"
        return ",".join(f"{e}:{self.coeffs[e]}" for e in sorted(self.coeffs))

    @classmethod
    def parse(cls, text: str) -> "Laurent":
        text = text.strip()
        if text == "0" or not text:
            return cls()
        pairs = []
        for item in text.split(","):
            e, c = item.split(":")
            pairs.append((int(e), int(c)))
        return cls(pairs)

    def __repr__(self) -> str:
        return f"Laurent({self.serialize()!r})"


def poly_divide_exact(num: Laurent, den: Laurent) -> Laurent:
    """Exact division of Laurent polynomials; raises if not divisible."""
    if den.is_zero():
        raise ZeroDivisionError
    if num.is_zero():
        return Laurent()
    q: Dict[int, int] = {}
    rem = dict(num.coeffs)
    dhi = den.max_degree()
    dc = den.coeffs[dhi]
    while rem:
        hi = max(rem)
        c = rem[hi]
        if c % dc:
            raise ValueError("not divisible")
        qe, qc = hi - dhi, c // dc
        q[qe] = qc
        for e, dco in den.coeffs.items():
            ne = e + qe
            v = rem.get(ne, 0) - dco * qc
            if v:
                rem[ne] = v
            elif ne in rem:
                del rem[ne]
    return Laurent(q)
