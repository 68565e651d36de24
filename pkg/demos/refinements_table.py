"""
Refinements against Jacquet exponents
=====================================

For each probe character eta (x) psi, count refinements with sigma(R) equal
to it and compare with the matching eigenspace of the Jacquet module.
"""
from collections import Counter
from fractions import Fraction

from crystabelian import CharacterPair, exponent_sweep, refinements_of, sigma, ur

p = 5
pair = CharacterPair(ur(Fraction(1, 125), p), ur(Fraction(2, 5), p), 5)

for R in refinements_of(pair):
    s = sigma(R, pair)
    print(R.r_tag, "->", s.first, "(x)", s.second)

rows = exponent_sweep(pair)
print(Counter((r["lhs"], r["rhs"]) for _, _, r in rows))
print("all equal:", all(r["equal"] for _, _, r in rows))
