import random
from fractions import Fraction

import pytest

from crystabelian.errors import DomainError
from crystabelian.padic import (AtLeast, PadicScalar, padic_log, padic_val, teichmuller,
                                working_precision)


def vp_frac(q, p):
    if q == 0:
        return float("inf")
    q = Fraction(q)
    v, n, d = 0, q.numerator, q.denominator
    while n % p == 0:
        n //= p
        v += 1
    while d % p == 0:
        d //= p
        v -= 1
    return v


def congruent(a, b, p, N):
    return vp_frac(Fraction(a) - Fraction(b), p) >= N


def rand_frac(rng, p):
    num = rng.randint(-10 ** 6, 10 ** 6)
    den = rng.randint(1, 10 ** 4) * p ** rng.randint(0, 3)
    return Fraction(num, den)


def test_valuation_basics():
    assert padic_val(PadicScalar.from_rational(3, 3)) == 1
    assert padic_val(PadicScalar.one(3)) == 0
    z = PadicScalar.zero(3, prec=8)
    v = padic_val(z)
    assert isinstance(v, AtLeast) and v.bound == 8
    assert padic_val(PadicScalar.from_rational(Fraction(5, 27), 3)) == -3


@pytest.mark.parametrize("p", [3, 5, 7])
def test_field_operations_match_rationals(p):
    rng = random.Random(p)
    N = 15
    with working_precision(N):
        for _ in range(200):
            a, b = rand_frac(rng, p), rand_frac(rng, p)
            x, y = PadicScalar.from_rational(a, p), PadicScalar.from_rational(b, p)
            assert congruent((x + y).lift(), a + b, p, min(x.abs_prec, y.abs_prec))
            assert congruent((x - y).lift(), a - b, p, min(x.abs_prec, y.abs_prec))
            prod = x * y
            assert congruent(prod.lift(), a * b, p, prod.abs_prec)
            if b:
                quo = x / y
                assert congruent(quo.lift(), a / b, p, quo.abs_prec)


def test_precision_tracks_valuation():
    with working_precision(10):
        x = PadicScalar.from_rational(Fraction(1, 7), 3)
        assert x.abs_prec == 10
        assert (x * 9).abs_prec == 12
        assert (x / 9).abs_prec == 8


def test_exact_arithmetic_stays_exact():
    x = PadicScalar.from_rational(Fraction(5, 9), 3)
    y = x * x - x + 2
    assert y.is_exact
    assert y.lift() == Fraction(25, 81) - Fraction(5, 9) + 2


def test_ramified_uniformizer():
    pi = PadicScalar.uniformizer(3, 2)
    assert pi * pi == 3
    assert padic_val(pi) == Fraction(1, 2)
    assert padic_val(pi.inverse() * 5) == Fraction(-1, 2)


def test_teichmuller_is_root_of_unity():
    for p in (3, 5, 7):
        for a in range(1, p):
            w = teichmuller(a, p, 12)
            assert (w ** (p - 1) - 1).valuation() >= 12 or (w ** (p - 1) - 1).is_zero()
            assert (w - a).valuation() >= 1


def test_log_homomorphism_and_partial_sum():
    p = 3
    with working_precision(12):
        u = PadicScalar.from_rational(1 + p, p)
        assert padic_log(PadicScalar.one(p)).is_zero()
        ratio = padic_log(u * u) / padic_log(u)
        assert congruent(ratio.lift(), 2, p, 8)
        partial = sum(Fraction((-1) ** (n + 1) * 3 ** n, n) for n in range(1, 13))
        assert congruent(padic_log(u).lift(), partial, p, 6)


def test_log_rejects_non_principal_units():
    with pytest.raises(DomainError):
        padic_log(PadicScalar.from_rational(2, 3))


def test_json_round_trip():
    rng = random.Random(1)
    for e in (1, 2):
        for _ in range(20):
            x = PadicScalar.from_rational(rand_frac(rng, 5), 5, prec=10, e=e)
            if e == 2:
                x = x * PadicScalar.uniformizer(5, 2) ** rng.randint(-3, 3)
            y = PadicScalar.from_json(x.to_json())
            assert (x - y).is_zero()
            assert y.abs_prec == x.abs_prec
