"""
Gauss sums and the intertwining integral
=========================================

A conductor-one character of Z_3^x is the quadratic one.  Its Gauss sum
squares to -3, and the intertwining integral of an elementary function
comes out as a constant times that Gauss sum.
"""
from fractions import Fraction

from crystabelian import (CharacterPair, CycloElement, ElementaryFunction, SmoothCharacter,
                          gauss_sum, intertwine_closed, intertwine_oracle, ur)

p = 3
quad = SmoothCharacter(p, 1, 1, 1)
eps = CycloElement.root(p, 1)
G = gauss_sum(quad, eps)
print("G        =", G)
print("G^2      =", G * G)

# a pair with ramified ratio, weight 4
pair = CharacterPair(ur(Fraction(1, 9), p), SmoothCharacter(p, 1, 1, Fraction(2, 3)), 4)
h = ElementaryFunction(p, Fraction(4, 27))

# closed form against the direct shell-by-shell sum
closed, _ = intertwine_closed(h, pair)
brute, _ = intertwine_oracle(h, pair)
print("closed   =", closed)
print("shell sum=", brute)
