"""
Filtered phi-modules of a crystabelline pair
============================================

Build D(alpha, beta), check weak admissibility line by line, and compare
its twisted dual with the module of the dual pair.
"""
from fractions import Fraction

from crystabelian import CharacterPair, SmoothCharacter, build_D, dual_twist, ur
from crystabelian import weakly_admissible_irreducible
from crystabelian.modcris import classify_uw, violating_module

p = 3
pair = CharacterPair(ur(Fraction(1, 9), p), SmoothCharacter(p, 1, 1, Fraction(2, 3)), 4)
D = build_D(pair, 1)
rep = weakly_admissible_irreducible(D)
print("admissible:", rep.admissible, " irreducible:", rep.irreducible)
print("t_N, t_H  :", rep.t_N, rep.t_H)

bad = weakly_admissible_irreducible(violating_module(p, 4))
print("violating module witnesses:", bad.witnesses)

rep = dual_twist(pair, 1)
print("dual line (e'_alpha, e'_beta):", rep.dual.line)
print("mismatches:", rep.mismatches)

for u, w in [(1, 2), (Fraction(1, 2), Fraction(1, 2)), (0, 2)]:
    print(f"u={u}, w={w}:", classify_uw(Fraction(u), Fraction(w), True).value)
