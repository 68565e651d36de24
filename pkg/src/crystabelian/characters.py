"""Smooth and continuous characters of Q_p^x, Gauss sums, and the constant C.

A smooth character tau of conductor n >= 1 is determined on units by
tau(g) = zeta_n^j, where g is the smallest primitive root mod p^2 and
zeta_n = omega(g) * eps^(n-1) has order (p-1)p^(n-1).  Characters trivial on
units are stored at level 1 with j = 0.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .cyclo import CycloElement, cyclo_degree
from .errors import DomainError, PrecisionError
from .padic import AtLeast, PadicScalar, get_precision, padic_log, teichmuller, vp_int


@lru_cache(maxsize=None)
def generator(p: int) -> int:
    """Smallest primitive root modulo p^2 (hence modulo every p^n)."""
    order = p * (p - 1)
    factors = {q for q in range(2, order + 1) if order % q == 0 and all(q % r for r in range(2, q))}
    for g in range(2, p * p):
        if g % p and all(pow(g, order // q, p * p) != 1 for q in factors):
            return g
    raise DomainError("no primitive root")  # pragma: no cover


@lru_cache(maxsize=None)
def _dlog_table(p: int, n: int) -> dict:
    g = generator(p)
    mod = p ** n
    table = {}
    x = 1
    for k in range((p - 1) * p ** (n - 1)):
        table[x] = k
        x = x * g % mod
    return table


def dlog(u: int, p: int, n: int) -> int:
    """k with g^k = u mod p^n."""
    try:
        return _dlog_table(p, n)[u % p ** n]
    except KeyError:
        raise DomainError(f"{u} is not a unit mod {p}") from None


@lru_cache(maxsize=None)
def _omega_powers(p: int, prec: int):
    w = teichmuller(generator(p), p, prec)
    out = [PadicScalar.one(p)]
    for _ in range(p - 2):
        out.append(out[-1] * w)
    return tuple(out)


def omega_power(p: int, r: int) -> PadicScalar:
    """omega(g)^r as a Teichmuller scalar at the working precision."""
    return _omega_powers(p, get_precision())[r % (p - 1)]


def _unit_residue(x, p, n):
    if isinstance(x, PadicScalar):
        if x.e != 1:
            raise DomainError("characters are evaluated on Q_p")
        if x.abs_prec < n:
            raise PrecisionError("unit known to too little precision")
        return x.residue_int()
    return x


def _split_unit(x, p):
    """(val(x), unit part) for nonzero rational or Q_p scalar x."""
    if isinstance(x, PadicScalar):
        v = x.valuation()
        if isinstance(v, AtLeast):
            raise PrecisionError("valuation undeterminable")
        v = int(v)
        return v, (x * Fraction(1, p) ** v if v else x)
    q = Fraction(x)
    if q == 0:
        raise DomainError("character evaluated at 0")
    num, den = q.numerator, q.denominator
    v = 0
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v, Fraction(num, den)


class SmoothCharacter:
    """tau with tau(p) = at_p and tau(g) = zeta_level^j on units."""

    __slots__ = ("p", "e", "j", "level", "at_p")

    def __init__(self, p, j=0, level=1, at_p=1, e=None):
        if p <= 2:
            raise DomainError("p must be an odd prime")
        at = at_p if isinstance(at_p, PadicScalar) else PadicScalar.from_rational(at_p, p)
        if e is not None and at.e != e:
            at = at.embed(e)
        if at.is_zero():
            raise DomainError("value at p must be invertible")
        level = max(int(level), 1)
        order = (p - 1) * p ** (level - 1)
        j %= order
        if j == 0:
            level, j = 1, 0
        else:
            n = level - min(vp_int(j, p), level - 1)
            j = (j // p ** (level - n)) % ((p - 1) * p ** (n - 1))
            level = n
        self.p = p
        self.e = at.e
        self.j = j
        self.level = level
        self.at_p = at

    @property
    def conductor(self) -> int:
        return 0 if self.j == 0 else self.level

    @property
    def is_unramified(self) -> bool:
        return self.j == 0

    def _lift_j(self, level):
        return self.j * self.p ** (level - self.level)

    def unit_exponents(self, u):
        """(r, s): tau(u) = omega(g)^r * (eps^(level-1))^s."""
        p, n = self.p, self.level
        if self.j == 0:
            return 0, 0
        k = dlog(_unit_residue(u, p, n), p, n)
        jk = self.j * k
        return jk % (p - 1), jk % p ** (n - 1)

    def on_unit(self, u):
        """tau(u) for a unit u: a scalar if conductor <= 1, else in L_{n-1}."""
        r, s = self.unit_exponents(u)
        w = omega_power(self.p, r)
        if self.e != 1:
            w = w.embed(self.e)
        if self.level <= 1:
            return w
        return CycloElement.root(self.p, self.level - 1, s, self.e) * w

    def __call__(self, x):
        v, u = _split_unit(x, self.p)
        val = self.on_unit(u)
        if v:
            val = val * self.at_p ** v
        return val

    def __mul__(self, other):
        if isinstance(other, ContinuousCharacter):
            return ContinuousCharacter(self) * other
        if not isinstance(other, SmoothCharacter):
            return NotImplemented
        L = max(self.level, other.level)
        return SmoothCharacter(self.p, self._lift_j(L) + other._lift_j(L), L, self.at_p * other.at_p)

    def inverse(self):
        return SmoothCharacter(self.p, -self.j, self.level, self.at_p.inverse())

    def __truediv__(self, other):
        return self * other.inverse()

    def __pow__(self, n):
        return SmoothCharacter(self.p, self.j * n, self.level, self.at_p ** n)

    def __eq__(self, other):
        if isinstance(other, ContinuousCharacter):
            return ContinuousCharacter(self) == other
        if not isinstance(other, SmoothCharacter):
            return NotImplemented
        return (self.p == other.p and self.j == other.j and self.level == other.level
                and self.at_p == other.at_p)

    __hash__ = None

    def unit_part_equal(self, other) -> bool:
        return self.j == other.j and self.level == other.level

    def __repr__(self):
        return f"SmoothCharacter(p={self.p}, cond={self.conductor}, j={self.j}, at_p={self.at_p})"

    def to_json(self):
        return {"conductor": self.conductor, "gen_value": self.j, "at_p": self.at_p.to_json(), "alg_exp": 0}


def ur(c, p=None) -> SmoothCharacter:
    """The unramified character sending p to c."""
    if isinstance(c, PadicScalar):
        return SmoothCharacter(c.p, 0, 1, c)
    if p is None:
        raise DomainError("ur(c) for a rational c needs p")
    return SmoothCharacter(p, 0, 1, c)


def norm_character(p, e=1) -> SmoothCharacter:
    """|x| = ur(1/p)."""
    return SmoothCharacter(p, 0, 1, PadicScalar.from_rational(Fraction(1, p), p, e=e))


class ContinuousCharacter:
    """x^n * tau with tau smooth."""

    __slots__ = ("smooth", "n")

    def __init__(self, smooth: SmoothCharacter, n: int = 0):
        self.smooth = smooth
        self.n = int(n)

    @property
    def p(self):
        return self.smooth.p

    def __call__(self, x):
        val = self.smooth(x)
        if self.n:
            xs = x if isinstance(x, PadicScalar) else PadicScalar.from_rational(x, self.p)
            val = val * xs.embed(self.smooth.e) ** self.n if self.smooth.e != 1 else val * xs ** self.n
        return val

    def __mul__(self, other):
        if isinstance(other, SmoothCharacter):
            other = ContinuousCharacter(other)
        if not isinstance(other, ContinuousCharacter):
            return NotImplemented
        return ContinuousCharacter(self.smooth * other.smooth, self.n + other.n)

    __rmul__ = __mul__

    def inverse(self):
        return ContinuousCharacter(self.smooth.inverse(), -self.n)

    def __truediv__(self, other):
        if isinstance(other, SmoothCharacter):
            other = ContinuousCharacter(other)
        return self * other.inverse()

    def __pow__(self, k):
        return ContinuousCharacter(self.smooth ** k, self.n * k)

    def __eq__(self, other):
        if isinstance(other, SmoothCharacter):
            other = ContinuousCharacter(other)
        if not isinstance(other, ContinuousCharacter):
            return NotImplemented
        return self.n == other.n and self.smooth == other.smooth

    __hash__ = None

    def weight(self) -> int:
        return self.n

    def weight_numeric(self):
        """log delta(u) / log u with u = (1+p)^(p^(n-1)), so that delta(u) lies in L."""
        p = self.p
        u = (1 + p) ** (p ** (self.smooth.level - 1))
        val = self(u)
        if isinstance(val, CycloElement):
            val = val.scalar_part()
        return padic_log(val) / padic_log(PadicScalar.from_rational(u, p).embed(val.e))

    def __repr__(self):
        return f"x^{self.n}*{self.smooth!r}"

    def to_json(self):
        d = self.smooth.to_json()
        d["alg_exp"] = self.n
        return d


def x_power(n, p, e=1) -> ContinuousCharacter:
    return ContinuousCharacter(SmoothCharacter(p, 0, 1, PadicScalar.one(p, e)), n)


def as_continuous(chi) -> ContinuousCharacter:
    return chi if isinstance(chi, ContinuousCharacter) else ContinuousCharacter(chi)


def root_exponent(eta: CycloElement) -> int:
    """c with eta = (eps^(m))^c, for eta a root of unity of L_m."""
    p, m = eta.p, eta.m
    d = cyclo_degree(p, m)
    nz = [i for i, c in enumerate(eta.coeffs) if not c.is_zero()]
    if len(nz) == 1 and eta.coeffs[nz[0]] == 1:
        return nz[0]
    for c in range(d, p ** m):
        if eta == CycloElement.root(p, m, c, eta.e):
            return c
    raise DomainError("not a root of unity of the form eps^c")


def gauss_sum(tau: SmoothCharacter, eta: CycloElement) -> CycloElement:
    """G(tau, eta) = sum over a in (Z/p^m)^x of tau^{-1}(a) eta^a; 1 if tau is unramified."""
    p = tau.p
    if tau.is_unramified:
        return CycloElement.from_scalar(1, p, eta.m, max(eta.e, tau.e))
    m = tau.conductor
    c = root_exponent(eta)
    if eta.m != m or c % p == 0:
        raise DomainError("eta must be a primitive p^n(tau)-th root of unity")
    n = p ** m
    acc = [None] * n
    e = max(eta.e, tau.e)
    for a in range(1, n):
        if a % p == 0:
            continue
        r, s = tau.unit_exponents(a)
        w = omega_power(p, -r)
        if e != 1:
            w = w.embed(e)
        k = (c * a - p * s) % n
        acc[k] = w if acc[k] is None else acc[k] + w
    return CycloElement.from_cyclic(p, m, acc, e)


def gauss_sum_std(tau: SmoothCharacter) -> CycloElement:
    """G(tau) := G(tau, eps^(n(tau)))."""
    m = max(tau.conductor, 0)
    return gauss_sum(tau, CycloElement.root(tau.p, m, 1, tau.e))


class CharacterPair:
    """(alpha, beta, k) with val(alpha_p) + val(beta_p) = k - 1 and
    0 < val(beta_p) <= val(alpha_p) < k - 1, where alpha_p = alpha(p)^{-1}."""

    __slots__ = ("alpha", "beta", "k", "swapped")

    def __init__(self, alpha: SmoothCharacter, beta: SmoothCharacter, k: int):
        if alpha.p != beta.p:
            raise DomainError("characters over different primes")
        if k < 2:
            raise DomainError("k must be >= 2")
        if alpha.e != beta.e:
            if alpha.e == 1:
                alpha = SmoothCharacter(alpha.p, alpha.j, alpha.level, alpha.at_p.embed(beta.e))
            elif beta.e == 1:
                beta = SmoothCharacter(beta.p, beta.j, beta.level, beta.at_p.embed(alpha.e))
            else:
                raise DomainError("characters over different fields")
        va = -alpha.at_p.valuation()
        vb = -beta.at_p.valuation()
        if isinstance(va, AtLeast) or isinstance(vb, AtLeast):
            raise PrecisionError("valuation of alpha(p) or beta(p) undeterminable")
        swapped = False
        if vb > va:
            alpha, beta, va, vb = beta, alpha, vb, va
            swapped = True
        if va + vb != k - 1:
            raise DomainError(f"val(alpha_p) + val(beta_p) = {va + vb}, expected {k - 1}")
        if not (0 < vb <= va < k - 1):
            raise DomainError("need 0 < val(beta_p) <= val(alpha_p) < k - 1")
        self.alpha = alpha
        self.beta = beta
        self.k = k
        self.swapped = swapped

    @property
    def p(self):
        return self.alpha.p

    @property
    def e(self):
        return self.alpha.e

    @property
    def alpha_p(self) -> PadicScalar:
        return self.alpha.at_p.inverse()

    @property
    def beta_p(self) -> PadicScalar:
        return self.beta.at_p.inverse()

    def ratio(self) -> SmoothCharacter:
        """beta * alpha^{-1}."""
        return self.beta / self.alpha

    def is_exceptional(self) -> bool:
        return self.alpha == self.beta

    def delta_alpha(self) -> ContinuousCharacter:
        """(beta alpha^{-1}) |x|^{-1} x^{k-2}."""
        absinv = norm_character(self.p, self.e).inverse()
        return ContinuousCharacter(self.ratio() * absinv, self.k - 2)

    def delta_beta(self) -> ContinuousCharacter:
        absinv = norm_character(self.p, self.e).inverse()
        return ContinuousCharacter(self.ratio().inverse() * absinv, self.k - 2)

    def __repr__(self):
        return f"CharacterPair(alpha={self.alpha!r}, beta={self.beta!r}, k={self.k})"

    def to_json(self):
        return {"alpha": self.alpha.to_json(), "beta": self.beta.to_json(), "k": self.k}


def essential_conductor(pair: CharacterPair) -> int:
    """m(alpha, beta) = max(n(beta alpha^{-1}), 1)."""
    return max(pair.ratio().conductor, 1)


def intertwining_constant(pair: CharacterPair) -> PadicScalar:
    ap, bp = pair.alpha_p, pair.beta_p
    p = pair.p
    if not pair.ratio().is_unramified:
        return (bp / (ap * p)) ** essential_conductor(pair)
    if ap == bp:
        raise DomainError("alpha_p = beta_p in the unramified branch")
    return (1 - bp / (ap * p)) / (1 - ap / bp)


def character_from_json(obj, p, e=1) -> ContinuousCharacter:
    at = PadicScalar.from_json(obj["at_p"]) if isinstance(obj["at_p"], dict) else \
        PadicScalar.from_rational(Fraction(obj["at_p"]), p, e=e)
    cond = int(obj["conductor"])
    sm = SmoothCharacter(p, int(obj["gen_value"]), max(cond, 1), at)
    if sm.conductor != cond:
        raise DomainError("conductor does not match the generator exponent")
    return ContinuousCharacter(sm, int(obj.get("alg_exp", 0)))
