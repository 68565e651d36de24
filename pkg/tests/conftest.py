import random
import sys
from fractions import Fraction

import pytest

from crystabelian.characters import CharacterPair, SmoothCharacter, ur
from crystabelian.distributions import LocalDistribution
from crystabelian.padic import PadicScalar


def _at_p(p, v, unit, e=1):
    """unit * p^{-v} as the value at p, v possibly a half-integer when e = 2."""
    if e == 1:
        return PadicScalar.from_rational(Fraction(unit) / Fraction(p) ** v, p)
    pi = PadicScalar.uniformizer(p, e)
    return PadicScalar.from_rational(unit, p, e=e) * pi ** (-int(v * e))


def pair_grid(p, k, ramified=None):
    """Valid pairs of weight k: unramified ratio and conductor-1 ratio."""
    e = 2 if k == 2 else 1
    slopes = []
    if k == 2:
        slopes = [(Fraction(1, 2), Fraction(1, 2))]
    else:
        for vb in range(1, k - 1):
            va = k - 1 - vb
            if vb <= va:
                slopes.append((va, vb))
    out = []
    units = [(1, 1 + p), (1 - p, 1), (2, 1 + 2 * p)]
    for va, vb in slopes:
        for ua, ub in units:
            if ramified in (None, False):
                out.append(CharacterPair(SmoothCharacter(p, 0, 1, _at_p(p, va, ua, e)),
                                         SmoothCharacter(p, 0, 1, _at_p(p, vb, ub, e)), k))
            if ramified in (None, True):
                out.append(CharacterPair(SmoothCharacter(p, 0, 1, _at_p(p, va, ua, e)),
                                         SmoothCharacter(p, 1, 1, _at_p(p, vb, ub, e)), k))
    return out


def random_measure(rng, p, h, M, n_atoms=None, lo=-3, hi=3, units_only=False):
    """A full measure: a Dirac sum with at most M atoms per class mod p^h."""
    q = p ** h
    n_atoms = n_atoms if n_atoms is not None else rng.randint(1, 2 * q)
    per_class = {}
    atoms = []
    while len(atoms) < n_atoms:
        c = rng.randint(0, p ** (h + 3))
        if units_only and c % p == 0:
            continue
        if per_class.get(c % q, 0) >= M or any(c == a for a, _ in atoms):
            continue
        w = rng.randint(lo, hi)
        if w == 0:
            continue
        per_class[c % q] = per_class.get(c % q, 0) + 1
        atoms.append((c, w))
    return LocalDistribution.dirac_sum(atoms, p, h, M)


@pytest.fixture
def rng():
    return random.Random(20240611)


def unram(c, p):
    return ur(Fraction(c), p)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.report_lines():
        terminalreporter.write_line(line)
