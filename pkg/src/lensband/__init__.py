"""Desk-scale verification of lens-space knot surgery descriptions.

Two independent computational routes are provided:

* genus-1 doubly pointed Heegaard diagrams on the square torus, with knot
  Floer homology ranks computed by embedded-bigon counting in the universal
  cover (`heegaard`, `hfk`);
* a planar band-move calculus on link diagrams (braid closures, framed
  bandings, full-twist insertion) certified against reference knots with the
  Kauffman bracket / Jones polynomial, Goeritz determinants, Alexander
  polynomials and Todd-Coxeter coset enumeration (`links`, `invariants`,
  `groups`, `pipeline`).

All arithmetic is exact (integers and `fractions.Fraction`); nothing in the
library uses randomness or floating point, so every report is reproducible
byte for byte.
"""

__version__ = "0.1.0"
