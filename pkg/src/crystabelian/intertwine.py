"""The smooth intertwining integral on elementary functions and moment transfer.

I(f)(z) = integral over Q_p of (beta alpha^{-1})(x - z) |x - z|^{-1} f(x) dx,
with Haar measure normalized by vol(Z_p) = 1.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from .characters import (CharacterPair, SmoothCharacter, essential_conductor, gauss_sum,
                         intertwining_constant)
from .cyclo import CycloElement, additive_character, fourier_sum
from .distributions import (LocalDistribution, LocalFunction, amice, class_moments, integrate,
                            restrict_units, w_involution)
from .errors import DivergenceError, HypothesisError, LevelError


def _vp_rational(y: Fraction, p: int) -> int:
    y = Fraction(y)
    if y == 0:
        raise HypothesisError("y must be nonzero")
    v = 0
    n, d = y.numerator, y.denominator
    while n % p == 0:
        n //= p
        v += 1
    while d % p == 0:
        d //= p
        v -= 1
    return v


@dataclass(frozen=True)
class ElementaryFunction:
    """z^j * e^{2 pi i z y} restricted to a + p^n Z_p."""

    p: int
    y: Fraction
    n: int = 0
    a: int = 0
    j: int = 0

    @property
    def val_y(self):
        return _vp_rational(self.y, self.p)

    def to_json(self):
        y = Fraction(self.y)
        return {"ball": {"a": self.a, "n": self.n}, "j": self.j, "y": f"{y.numerator}/{y.denominator}"}

    @classmethod
    def from_json(cls, obj, p):
        ball = obj.get("ball", {})
        return cls(p, Fraction(obj["y"]), int(ball.get("n", 0)), int(ball.get("a", 0)), int(obj.get("j", 0)))


def _check_hypothesis(h: ElementaryFunction, pair: CharacterPair):
    m = essential_conductor(pair)
    if h.n + h.val_y > -m:
        raise HypothesisError(f"need n + val(y) <= -{m}, got {h.n + h.val_y}")
    return m


def _gauss_at(tau: SmoothCharacter, c: int, level: int, e: int) -> CycloElement:
    """G(tau, (eps^(level))^c) for tau of conductor level (1 when unramified)."""
    if tau.is_unramified:
        return CycloElement.from_scalar(1, tau.p, level, e)
    return gauss_sum(tau, CycloElement.root(tau.p, level, c, e))


def _root_exponent_of(y: Fraction, p: int, level: int) -> int:
    """c with e^{2 pi i y} = (eps^(level))^c."""
    q = p ** level
    z = Fraction(y) * q
    return z.numerator * pow(z.denominator, -1, q) % q if q > 1 else 0


def transfer_factor(pair: CharacterPair, y) -> CycloElement:
    """(beta_p/alpha_p)^{val(y)} G(beta^{-1} alpha, e^{2 pi i y / p^{m + val(y)}}), in L_m."""
    p = pair.p
    m = essential_conductor(pair)
    vy = _vp_rational(Fraction(y), p)
    tau = pair.ratio().inverse()
    c = _root_exponent_of(Fraction(y) / Fraction(p) ** (m + vy), p, m)
    G = _gauss_at(tau, c, m, pair.e)
    return G * (pair.beta_p / pair.alpha_p) ** vy


def intertwine_closed(h: ElementaryFunction, pair: CharacterPair):
    """(factor, h) with I(h) = factor * h."""
    if h.j:
        raise HypothesisError("the closed form is stated for j = 0")
    _check_hypothesis(h, pair)
    C = intertwining_constant(pair)
    return transfer_factor(pair, h.y) * C, h


def _shell_bruteforce(pair: CharacterPair, y: Fraction, l: int, level: int):
    """p^l * integral over p^l Z_p^x of (beta alpha^{-1})(x) e^{2 pi i x y} dx, summed over
    classes mod p^L with L large enough for the integrand to be constant."""
    p = pair.p
    ratio = pair.ratio()
    vy = _vp_rational(y, p)
    L = max(l + max(ratio.conductor, 1), -vy, l + 1)
    total = CycloElement.from_scalar(0, p, level, pair.e)
    step = p ** (L - l)
    for u in range(step):
        if u % p == 0:
            continue
        x = p ** l * u if l >= 0 else Fraction(u, p ** (-l))
        chi = ratio(x)
        if not isinstance(chi, CycloElement):
            chi = CycloElement.from_scalar(chi, p, 0, pair.e)
        psi = additive_character(Fraction(x) * y, p, level, pair.e)
        total = total + psi * chi.embed(level)
    # vol(x + p^L Z_p) = p^{-L}; times p^l
    return total * (Fraction(p) ** (l - L))


def intertwine_oracle(h: ElementaryFunction, pair: CharacterPair):
    """The same factor from the shell decomposition, each shell summed by brute force.

    Shells with l >= max(n, -val(y)) see a trivial additive character; they
    form a geometric series in r = alpha_p/beta_p that is summed in closed form.
    """
    if h.j:
        raise HypothesisError("the shell decomposition is stated for j = 0")
    _check_hypothesis(h, pair)
    p = pair.p
    y = Fraction(h.y)
    vy = h.val_y
    ratio = pair.ratio()
    level = max(-vy, max(ratio.conductor - 1, 0), 1)
    L0 = max(h.n, -vy)
    total = CycloElement.from_scalar(0, p, level, pair.e)
    for l in range(h.n, L0):
        total = total + _shell_bruteforce(pair, y, l, level)
    r = pair.alpha_p / pair.beta_p
    if (r - 1).is_zero():
        raise DivergenceError("geometric ratio alpha_p/beta_p equals 1")
    if ratio.is_unramified:
        tail = r ** L0 * (1 - Fraction(1, p)) / (1 - r)
        total = total + tail
    return total, h


def embed_common(x: CycloElement, y: CycloElement):
    m = max(x.m, y.m)
    return x.embed(m), y.embed(m)


def moment_transfer(mu_alpha: LocalDistribution, j: int, y, pair: CharacterPair) -> CycloElement:
    """integral z^j e^{2 pi i z y} d mu_beta, from mu_alpha."""
    y = Fraction(y)
    vy = _vp_rational(y, pair.p)
    if not 0 <= j <= pair.k - 2:
        raise HypothesisError("0 <= j <= k-2 required")
    if vy > -essential_conductor(pair):
        raise HypothesisError("val(y) <= -m(alpha, beta) required")
    if mu_alpha.h < -vy:
        raise LevelError("distribution level below -val(y)")
    f = LocalFunction.additive_character(y, pair.p, pair.e, j)
    val = integrate(mu_alpha, f)
    factor = transfer_factor(pair, y)
    a, b = embed_common(factor, val)
    return a * b


def fil_condition_check(mu_alpha: LocalDistribution, mu_beta: LocalDistribution,
                        pair: CharacterPair, m: int, jobs: int = 1):
    """(ok, witnesses): witnesses are the (j, a) with eta = (eps^(m))^a where
    G(beta^{-1}alpha, eta^{p^{m-m(V)}}) alpha_p^m int z^j eta^z dmu_alpha
    differs from beta_p^m int z^j eta^z dmu_beta."""
    p, e = pair.p, pair.e
    mV = essential_conductor(pair)
    if m < mV:
        raise LevelError(f"m must be >= m(alpha, beta) = {mV}")
    if min(mu_alpha.h, mu_beta.h) < m:
        raise LevelError("distribution levels must be >= m")
    J = pair.k - 1
    if min(mu_alpha.M, mu_beta.M) < J:
        raise LevelError("distribution degree must exceed k-2")
    Za = _collapse(class_moments(mu_alpha, J), mu_alpha.h, m, p)
    Zb = _collapse(class_moments(mu_beta, J), mu_beta.h, m, p)
    tau = pair.ratio().inverse()
    ap_m = pair.alpha_p ** m
    bp_m = pair.beta_p ** m
    tasks = [(j, a) for j in range(J) for a in range(1, p ** m) if a % p]

    def one(t):
        j, a = t
        G = _gauss_at(tau, a % p ** mV, mV, e).embed(m)
        lhs = G * fourier_sum([z[j] for z in Za], a, m, p, e) * ap_m
        rhs = fourier_sum([z[j] for z in Zb], a, m, p, e) * bp_m
        lhs, rhs = embed_common(lhs, rhs)
        return None if (lhs - rhs).is_zero() else t

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(one, tasks))
    else:
        results = [one(t) for t in tasks]
    witnesses = [t for t in results if t is not None]
    return not witnesses, witnesses


def _collapse(Z, h, m, p):
    """Sum class moments mod p^h into classes mod p^m."""
    q = p ** m
    out = [None] * q
    for a, row in enumerate(Z):
        b = a % q
        out[b] = list(row) if out[b] is None else [x + y for x, y in zip(out[b], row)]
    return out


def transfer_distribution(mu_alpha: LocalDistribution, pair: CharacterPair) -> LocalDistribution:
    """A mu_beta at the same level satisfying the filtration condition for every
    m(alpha, beta) <= m <= h.

    On each Fourier mode eta of order p^m >= p^{m(V)} the moments of z^j,
    j <= k-2, are multiplied by (alpha_p/beta_p)^m G(beta^{-1}alpha, eta^{p^{m-m(V)}});
    all other data are copied from mu_alpha.
    """
    p, h, M, k = pair.p, mu_alpha.h, mu_alpha.M, pair.k
    mV = essential_conductor(pair)
    if h < mV:
        raise LevelError("level must be >= m(alpha, beta)")
    q = p ** h
    e = pair.e
    J = min(k - 1, M)
    tau = pair.ratio().inverse()
    r = pair.alpha_p / pair.beta_p
    Z = class_moments(mu_alpha, J)
    # eta = (eps^(h))^c has order p^{h - v_p(c)}
    mult = []
    for c in range(q):
        vc = h if c == 0 else min(_vp_int(c, p), h)
        mc = h - vc
        if mc < mV:
            mult.append(None)
            continue
        c_m = (c // p ** vc) % p ** mc
        G = _gauss_at(tau, c_m % p ** mV, mV, e).embed(h)
        mult.append(G * r ** mc)
    newZ = [[None] * J for _ in range(q)]
    for j in range(J):
        col = [Z[a][j] for a in range(q)]
        F = []
        for c in range(q):
            Fc = fourier_sum(col, c, h, p, e)
            if mult[c] is not None:
                Fc = Fc * mult[c]
            F.append(Fc)
        for a in range(q):
            newZ[a][j] = fourier_sum(F, -a, h, p, e) * Fraction(1, q)
    rows = []
    for a in range(q):
        row = []
        for i in range(M):
            if i >= J:
                row.append(CycloElement.from_scalar(mu_alpha.entries[a][i], p, h, e))
                continue
            acc = CycloElement.from_scalar(0, p, h, e)
            for j in range(i + 1):
                acc = acc + newZ[a][j] * (math.comb(i, j) * (-a) ** (i - j))
            row.append(acc * Fraction(1, q ** i))
        rows.append(row)
    return LocalDistribution(p, h, M, rows, e)


def _vp_int(n, p):
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


class CycloSeries:
    """A series with coefficients in L_m, stored as one TruncatedSeries per basis power X^i."""

    def __init__(self, m, components):
        self.m = m
        self.components = list(components)

    def __mul__(self, c):
        return CycloSeries(self.m, [s * c for s in self.components])

    def coeff(self, n):
        p = self.components[0].p
        return CycloElement(p, self.m, [s.coeff(n) for s in self.components], self.components[0].e)

    def to_json(self):
        return {"m": self.m, "components": [s.to_json() for s in self.components]}


def amice_any(mu: LocalDistribution, N: int):
    """Amice transform for scalar- or L_m-valued distributions."""
    levels = {x.m for row in mu.entries for x in row if isinstance(x, CycloElement)}
    if not levels:
        return amice(mu, N)
    m = max(levels)
    from .cyclo import cyclo_degree
    d = cyclo_degree(mu.p, m)
    comps = []
    for i in range(d):
        rows = []
        for row in mu.entries:
            rr = []
            for x in row:
                x = x.embed(m) if isinstance(x, CycloElement) else CycloElement.from_scalar(x, mu.p, m, mu.e)
                rr.append(x.coeffs[i])
            rows.append(rr)
        comps.append(amice(LocalDistribution(mu.p, mu.h, mu.M, rows, mu.e), N))
    return CycloSeries(m, comps)


def assemble_vector(mu_alpha: LocalDistribution, mu_beta: LocalDistribution,
                    pair: CharacterPair, N: int):
    """(A(mu_alpha), (1/C) A(mu_beta)) as coordinates on (e_alpha, e_beta)."""
    Cinv = intertwining_constant(pair).inverse()
    return amice_any(mu_alpha, N), amice_any(mu_beta, N) * Cinv


def assemble_w_vector(mu_alpha: LocalDistribution, mu_beta: LocalDistribution,
                      pair: CharacterPair, N: int):
    """The companion z' built from the w-images of the Z_p^x-restrictions."""
    wa = w_involution(restrict_units(mu_alpha), pair, "alpha")
    wb = w_involution(restrict_units(mu_beta), pair, "beta")
    return assemble_vector(wa, wb, pair, N)


__all__ = [
    "ElementaryFunction", "intertwine_closed", "intertwine_oracle", "transfer_factor",
    "moment_transfer", "fil_condition_check", "transfer_distribution", "assemble_vector",
    "assemble_w_vector", "amice_any", "CycloSeries", "embed_common",
]
