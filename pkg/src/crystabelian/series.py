"""Truncated Laurent series with the phi, psi, Gamma and Res operators.

A ``TruncatedSeries`` stores coefficients a_i for i in [i_min, i_max].  When
``tail_order`` is None the series is a Laurent polynomial: coefficients past
the window are zero (modulo p^coeff_prec).  Otherwise coefficients with
exponent > tail_order are unknown.

phi, psi, gamma_a and Res are computed on exact integer digit vectors through
the (1+T)-basis, where they are re-indexings of exponents.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .cyclo import CycloElement, cyclo_val
from .errors import ContractError, DomainError, PrecisionError
from .padic import EXACT, AtLeast, PadicScalar, as_scalar, get_precision, ppow


def vp_factorial(n: int, p: int) -> int:
    v, q = 0, p
    while q <= n:
        v += n // q
        q *= p
    return v


def binom(x: int, n: int) -> int:
    """C(x, n) for any integer x (negative allowed)."""
    if n < 0:
        return 0
    if x >= 0:
        return math.comb(x, n)
    return (-1) ** n * math.comb(n - x - 1, n)


def taylor_shift(a: list, c: int) -> list:
    """Coefficients of f(x + c) from those of f (integers)."""
    a = list(a)
    n = len(a)
    for i in range(n - 1):
        for k in range(n - 2, i - 1, -1):
            a[k] += c * a[k + 1]
    return a


# ----------------------------------------------------------------------
# digit-vector plumbing

def _to_vectors(coeffs, p, e):
    """Common-shift integer digit vectors for a list of scalars."""
    S = max((c.s for c in coeffs), default=0)
    M = min((c.M for c in coeffs), default=EXACT)
    comps = [[0] * len(coeffs) for _ in range(e)]
    for idx, c in enumerate(coeffs):
        f = ppow(p, S - c.s)
        for k in range(e):
            comps[k][idx] = c.digits[k] * f
    return comps, S, M


def _from_vectors(comps, S, M, p, e):
    n = len(comps[0])
    return [PadicScalar._make(p, e, [comps[k][i] for k in range(e)], S, M) for i in range(n)]


def _min_valuation(coeffs):
    vals = [c.valuation() for c in coeffs]
    fin = [v for v in vals if not isinstance(v, AtLeast)]
    return min(fin) if fin else None


@dataclass(frozen=True)
class NormEstimate:
    """A sup-norm given as a valuation; ``exact`` is False when only a bound.

    For a window estimate of a series with unknown tail the true norm is at
    least p^(-val), i.e. ``val`` is an upper bound for the true valuation.
    """

    val: Fraction | AtLeast
    exact: bool


LAURENT_FLOOR = -64


def set_laurent_floor(n: int) -> None:
    """Lowest exponent a series window may start at."""
    global LAURENT_FLOOR
    LAURENT_FLOOR = int(n)


class TruncatedSeries:
    __slots__ = ("p", "e", "i_min", "coeffs", "tail_order")

    def __init__(self, p, coeffs, i_min=0, tail_order=None, e=1):
        self.p = p
        self.e = e
        self.i_min = int(i_min)
        if self.i_min < LAURENT_FLOOR and coeffs:
            raise DomainError(f"window starts at T^{self.i_min}, below the floor {LAURENT_FLOOR}")
        cs = [as_scalar(c, p, e) for c in coeffs]
        if tail_order is not None:
            tail_order = int(tail_order)
            width = tail_order - self.i_min + 1
            if width < 0:
                raise DomainError("tail_order below i_min")
            cs = cs[:width]
            cs += [PadicScalar.zero(p, e)] * (width - len(cs))
        else:
            while cs and cs[-1].is_zero() and cs[-1].is_exact:
                cs.pop()
        self.coeffs = tuple(cs)
        self.tail_order = tail_order

    # ------------------------------------------------------------------
    @classmethod
    def from_dict(cls, p, d, tail_order=None, e=1):
        if not d:
            lo = 0 if tail_order is None else min(0, tail_order + 1)
            return cls(p, [], lo, tail_order, e)
        lo = min(d)
        hi = max(d)
        if tail_order is not None:
            hi = max(hi, tail_order)
        cs = [d.get(i, 0) for i in range(lo, hi + 1)]
        return cls(p, cs, lo, tail_order, e)

    @classmethod
    def T(cls, p, e=1):
        return cls(p, [0, 1], 0, None, e)

    @classmethod
    def constant(cls, c, p, e=1):
        return cls(p, [c], 0, None, e)

    @classmethod
    def one_plus_T_power(cls, a: int, p, order=None, e=1):
        """(1+T)^a; exact for a >= 0 unless an order is given."""
        if a >= 0 and order is None:
            return cls(p, [math.comb(a, n) for n in range(a + 1)], 0, None, e)
        if order is None:
            raise DomainError("negative powers of 1+T need a truncation order")
        return cls(p, [binom(a, n) for n in range(order + 1)], 0, order, e)

    @property
    def i_max(self):
        return self.i_min + len(self.coeffs) - 1

    @property
    def is_exact(self):
        return self.tail_order is None

    @property
    def coeff_prec(self):
        return min((c.abs_prec for c in self.coeffs), default=math.inf)

    def coeff(self, i):
        if self.tail_order is not None and i > self.tail_order:
            raise PrecisionError(f"coefficient {i} beyond tail_order {self.tail_order}")
        if i < self.i_min or i > self.i_max:
            return PadicScalar.zero(self.p, self.e)
        return self.coeffs[i - self.i_min]

    def as_dict(self):
        return {self.i_min + k: c for k, c in enumerate(self.coeffs)}

    def t_valuation(self):
        """Lowest exponent with a nonzero coefficient (None for zero)."""
        for k, c in enumerate(self.coeffs):
            if not c.is_zero():
                return self.i_min + k
        return None

    def _new(self, d, tail):
        return TruncatedSeries.from_dict(self.p, d, tail, self.e)

    def truncate(self, N):
        tail = N if self.tail_order is None else min(self.tail_order, N)
        return self._new({i: c for i, c in self.as_dict().items() if i <= tail}, tail)

    def assume_exact(self):
        """Declare the window to be the whole series (coefficients beyond are 0)."""
        return TruncatedSeries(self.p, self.coeffs, self.i_min, None, self.e)

    def cap_precision(self, prec):
        return TruncatedSeries(self.p, [c.add_precision_cap(prec) for c in self.coeffs],
                               self.i_min, self.tail_order, self.e)

    # ------------------------------------------------------------------
    # ring operations
    def _coerce(self, other):
        if isinstance(other, TruncatedSeries):
            return other
        if isinstance(other, (int, Fraction, PadicScalar)):
            return TruncatedSeries.constant(other, self.p, self.e)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        tails = [t for t in (self.tail_order, o.tail_order) if t is not None]
        tail = min(tails) if tails else None
        d = self.as_dict()
        for i, c in o.as_dict().items():
            d[i] = d[i] + c if i in d else c
        if tail is not None:
            d = {i: c for i, c in d.items() if i <= tail}
        return self._new(d, tail)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries(self.p, [-c for c in self.coeffs], self.i_min, self.tail_order, self.e)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, PadicScalar)):
            return TruncatedSeries(self.p, [c * other for c in self.coeffs], self.i_min,
                                   self.tail_order, self.e)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        va = self.t_valuation()
        vb = o.t_valuation()
        tail = None
        if self.tail_order is not None:
            tail = self.tail_order + (vb if vb is not None else (o.tail_order or 0))
        if o.tail_order is not None:
            t2 = o.tail_order + (va if va is not None else (self.tail_order or 0))
            tail = t2 if tail is None else min(tail, t2)
        d = {}
        for k1, a in enumerate(self.coeffs):
            if a.is_zero() and a.is_exact:
                continue
            i = self.i_min + k1
            for k2, b in enumerate(o.coeffs):
                if b.is_zero() and b.is_exact:
                    continue
                j = i + o.i_min + k2
                if tail is not None and j > tail:
                    break
                t = a * b
                d[j] = d[j] + t if j in d else t
        return self._new(d, tail)

    __rmul__ = __mul__

    def inverse(self, order=None):
        """Inverse of T^v * (unit power series), to T-adic order ``order``."""
        v = self.t_valuation()
        if v is None:
            raise PrecisionError("inverse of zero series")
        u = self.coeffs[v - self.i_min:]
        if order is None:
            if self.tail_order is None:
                raise DomainError("inverse of a polynomial needs an order")
            order = self.tail_order - 2 * v
        width = order + v + 1
        if self.tail_order is not None:
            width = min(width, self.tail_order - v + 1)
        inv0 = u[0].inverse()
        out = [inv0]
        for n in range(1, width):
            s = None
            for k in range(1, min(n, len(u) - 1) + 1):
                t = u[k] * out[n - k]
                s = t if s is None else s + t
            out.append(-(s * inv0) if s is not None else PadicScalar.zero(self.p, self.e))
        return TruncatedSeries(self.p, out, -v, -v + width - 1, self.e)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, PadicScalar)):
            return self * (1 / Fraction(other) if not isinstance(other, PadicScalar) else other.inverse())
        return NotImplemented

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        diff = self - o
        return all(c.is_zero() for c in diff.coeffs)

    __hash__ = None

    def __repr__(self):
        terms = [f"({c})*T^{self.i_min + k}" for k, c in enumerate(self.coeffs) if not c.is_zero()]
        tail = "" if self.tail_order is None else f" + O(T^{self.tail_order + 1})"
        return "TruncatedSeries(" + (" + ".join(terms) or "0") + tail + ")"

    # ------------------------------------------------------------------
    def derivative(self, j=1):
        d = {}
        for i, c in self.as_dict().items():
            f = 1
            for r in range(j):
                f *= i - r
            if f:
                d[i - j] = c * f
        tail = None if self.tail_order is None else self.tail_order - j
        return self._new(d, tail)

    def evaluate(self, x, tail_bound=None):
        """f(x) for |x| < 1 (x a scalar or an element of some L_m).

        A truncated series needs ``tail_bound``: a lower bound for the
        valuations of all unknown coefficients.  The result's precision is
        capped by the certified size of the discarded tail.
        """
        if self.i_min < 0:
            raise DomainError("evaluation of Laurent tails is not supported")
        acc = None
        for c in reversed(self.coeffs):
            acc = c if acc is None else acc * x + c
        if acc is None:
            acc = PadicScalar.zero(self.p, self.e)
        if isinstance(x, CycloElement) and not isinstance(acc, CycloElement):
            acc = CycloElement.from_scalar(acc, x.p, x.m, x.e)
        if self.tail_order is None:
            return acc
        if tail_bound is None:
            raise ContractError("evaluating a truncated series needs a tail bound")
        N1 = self.tail_order + 1
        if isinstance(x, CycloElement):
            cap = Fraction(tail_bound) + math.floor(N1 * cyclo_val(x))
            return CycloElement(acc.p, acc.m, [c.add_precision_cap(cap) for c in acc.coeffs], acc.e)
        vx = x.valuation() if isinstance(x, PadicScalar) else Fraction(0)
        if isinstance(vx, AtLeast):
            vx = vx.bound
        return acc.add_precision_cap(Fraction(tail_bound) + N1 * vx)

    def to_json(self):
        return {
            "p": self.p,
            "e": self.e,
            "i_min": self.i_min,
            "coeffs": {str(self.i_min + k): c.to_json()["residue"] for k, c in enumerate(self.coeffs)},
            "tail_order": self.tail_order,
            "coeff_prec": _prec_str(self.coeff_prec),
        }

    @classmethod
    def from_json(cls, obj):
        p, e = int(obj["p"]), int(obj.get("e", 1))
        prec = obj.get("coeff_prec")
        d = {}
        for k, r in obj["coeffs"].items():
            sc = {"p": p, "e": e, "residue": r, "abs_prec": prec if prec not in (None, "inf") else get_precision()}
            x = PadicScalar.from_json(sc)
            if prec in (None, "inf"):
                x = _exact_from_residue(r, p, e)
            d[int(k)] = x
        s = cls.from_dict(p, d, obj.get("tail_order"), e)
        if obj.get("i_min") is not None and s.coeffs and int(obj["i_min"]) < s.i_min:
            pad = s.i_min - int(obj["i_min"])
            s = cls(p, [0] * pad + list(s.coeffs), int(obj["i_min"]), s.tail_order, e)
        return s


def _exact_from_residue(r, p, e):
    if isinstance(r, str):
        r = [r]
    pi = PadicScalar.uniformizer(p, e)
    total = PadicScalar.zero(p, e)
    for i, q in enumerate(r):
        total = total + PadicScalar.from_rational(Fraction(q), p, e=e) * pi ** i
    return total


def _prec_str(x):
    if x == math.inf:
        return "inf"
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# ----------------------------------------------------------------------
# the (1+T)-basis

def _poly_vectors(f: TruncatedSeries):
    if f.i_min < 0:
        raise DomainError("(1+T)-basis conversion needs a power series")
    coeffs = [f.coeff(i) for i in range(0, f.i_max + 1)] if f.coeffs else []
    return _to_vectors(coeffs, f.p, f.e)


def to_S_basis(f: TruncatedSeries):
    """(dict j -> integer digit vectors, S, M): f = sum_j b_j (1+T)^j on its window."""
    comps, S, M = _poly_vectors(f)
    out = [taylor_shift(c, -1) for c in comps]
    n = len(out[0]) if out else 0
    b = {}
    for j in range(n):
        vec = [out[k][j] for k in range(f.e)]
        if any(vec):
            b[j] = vec
    return b, S, M


def from_S_basis(b: dict, S, M, p, e, order=None, a_prec=None):
    """Series sum_j b_j (1+T)^j.

    Nonnegative exponents give an exact polynomial when order is None; negative
    exponents (or an explicit order) give a truncation to T^order.
    """
    if not b:
        return TruncatedSeries(p, [], 0, order, e).cap_precision(Fraction(M, e)) if M < EXACT >> 1 \
            else TruncatedSeries(p, [], 0, order, e)
    if order is None:
        if min(b) < 0:
            raise DomainError("negative (1+T)-exponents need a truncation order")
        deg = max(b)
        comps = [[0] * (deg + 1) for _ in range(e)]
        for j, vec in b.items():
            for k in range(e):
                comps[k][j] += vec[k]
        comps = [taylor_shift(c, 1) for c in comps]
        return TruncatedSeries(p, _from_vectors(comps, S, M, p, e), 0, None, e)
    comps = [[0] * (order + 1) for _ in range(e)]
    for j, vec in b.items():
        row = [binom(j, n) for n in range(order + 1)]
        for k in range(e):
            if vec[k]:
                ck = comps[k]
                for n in range(order + 1):
                    ck[n] += vec[k] * row[n]
    return TruncatedSeries(p, _from_vectors(comps, S, M, p, e), 0, order, e)


def frobenius_phi(f: TruncatedSeries) -> TruncatedSeries:
    """f((1+T)^p - 1)."""
    if f.i_min < 0:
        return _compose_unit(f, f.p, f.tail_order)
    b, S, M = to_S_basis(f)
    b2 = {f.p * j: v for j, v in b.items()}
    out = from_S_basis(b2, S, M, f.p, f.e)
    return out if f.tail_order is None else out.truncate(f.tail_order)


def gamma_act(a, f: TruncatedSeries, order=None) -> TruncatedSeries:
    """f((1+T)^a - 1) for a unit a (int, or a Z_p scalar known mod p^K)."""
    p = f.p
    if isinstance(a, PadicScalar):
        if a.e != 1 or a.s:
            raise DomainError("gamma_act needs a unit of Z_p")
        if a.is_exact:
            a = a.digits[0]
    if isinstance(a, int) and a % p == 0:
        raise DomainError("gamma_act needs a unit")
    if f.i_min < 0:
        tail = f.tail_order if f.tail_order is not None else order
        if tail is None:
            raise DomainError("Laurent input needs a truncation order")
        return _compose_unit(f, a, tail)
    tail = f.tail_order if order is None else (order if f.tail_order is None else min(order, f.tail_order))
    b, S, M = to_S_basis(f)
    if isinstance(a, int):
        b2 = {a * j: v for j, v in b.items()}
        if tail is None and a >= 0:
            return from_S_basis(b2, S, M, p, f.e)
        if tail is None:
            raise DomainError("gamma_act with a negative unit needs an order")
        return from_S_basis(b2, S, M, p, f.e, order=tail)
    if a.valuation() != 0:
        raise DomainError("gamma_act needs a unit")
    if tail is None:
        raise DomainError("gamma_act with a p-adic unit needs an order")
    r = a.residue_int()
    K = a.abs_prec
    b2 = {r * j: v for j, v in b.items()}
    out = from_S_basis(b2, S, M, p, f.e, order=tail)
    base = -S
    capped = []
    for n, c in enumerate(out.coeffs):
        cap = K - vp_factorial(n, p) + base
        capped.append(c.add_precision_cap(cap))
    return TruncatedSeries(p, capped, 0, tail, f.e)


def psi(f: TruncatedSeries, tail_bound=None) -> TruncatedSeries:
    """psi(f): keep the (1+T)^j with p | j and send them to (1+T)^(j/p).

    A truncated input needs ``tail_bound`` (valuation lower bound for every
    unknown coefficient); the output's precision is capped by it.
    """
    if f.i_min < 0 and any(not f.coeff(i).is_zero() for i in range(f.i_min, 0)):
        raise DomainError("psi is implemented on power series")
    if f.tail_order is not None and tail_bound is None:
        raise ContractError("psi of a truncated series needs exactness or a tail bound")
    b, S, M = to_S_basis(f)
    b2 = {j // f.p: v for j, v in b.items() if j % f.p == 0}
    out = from_S_basis(b2, S, M, f.p, f.e)
    if f.tail_order is not None and tail_bound is not None and tail_bound != math.inf:
        out = out.cap_precision(tail_bound)
    return out


def res_restrict(f: TruncatedSeries, i: int, n: int, tail_bound=None) -> TruncatedSeries:
    """Res_{i + p^n Z_p}(f) = (1+T)^i phi^n psi^n ((1+T)^{-i} f)."""
    if f.tail_order is not None and tail_bound is None:
        raise ContractError("Res of a truncated series needs exactness or a tail bound")
    p = f.p
    b, S, M = to_S_basis(f)
    q = p ** n
    # multiply by (1+T)^{-i}, apply psi^n, then phi^n, then multiply by (1+T)^i
    shifted = {j - i: v for j, v in b.items()}
    after_psi = {j // q: v for j, v in shifted.items() if j % q == 0}
    after_phi = {j * q: v for j, v in after_psi.items()}
    back = {j + i: v for j, v in after_phi.items()}
    out = from_S_basis(back, S, M, p, f.e)
    if f.tail_order is not None and tail_bound != math.inf:
        out = out.cap_precision(tail_bound)
    return out


def _compose_unit(f: TruncatedSeries, a, tail):
    """f((1+T)^a - 1) for Laurent f, via T^i -> T^i u^i with u = ((1+T)^a - 1)/T."""
    p, e = f.p, f.e
    if tail is None:
        raise DomainError("composition of a Laurent series needs an order")
    if isinstance(a, PadicScalar):
        r, K = a.residue_int(), a.abs_prec
    else:
        r, K = a, math.inf
    v0 = f.i_min
    width = tail - v0 + 1
    u_coeffs = []
    for n in range(width + 1):
        c = binom(r, n + 1)
        sc = PadicScalar.from_rational(c, p, e=e)
        if K != math.inf:
            sc = sc.add_precision_cap(K - vp_factorial(n + 1, p))
        u_coeffs.append(sc)
    u = TruncatedSeries(p, u_coeffs, 0, width, e)
    uinv = u.inverse(order=width)
    total = None
    for i, c in f.as_dict().items():
        if c.is_zero() and c.is_exact:
            continue
        w = uinv if i < 0 else u
        term = TruncatedSeries.constant(1, p, e).truncate(width)
        for _ in range(abs(i)):
            term = (term * w).truncate(width)
        term = TruncatedSeries(p, [x * c for x in term.coeffs], i, i + width, e)
        total = term if total is None else total + term
    if total is None:
        return TruncatedSeries(p, [], 0, tail, e)
    return total.truncate(tail)


# ----------------------------------------------------------------------
# residues and norms

def residue_at_zero(f: TruncatedSeries) -> PadicScalar:
    """res_0(f dT) = a_{-1}."""
    if f.tail_order is not None and f.tail_order < -1:
        raise PrecisionError("exponent -1 lies outside the certified window")
    return f.coeff(-1)


def _taylor_at(g: TruncatedSeries, a: PadicScalar, K: int, tail_bound=None):
    """Taylor coefficients g^{(r)}(a)/r! for r < K."""
    out = []
    va = a.valuation()
    for r in range(K):
        acc = None
        for n in range(max(r, g.i_min), g.i_max + 1):
            c = g.coeff(n)
            if c.is_zero() and c.is_exact:
                continue
            t = c * math.comb(n, r) * a ** (n - r)
            acc = t if acc is None else acc + t
        if acc is None:
            acc = PadicScalar.zero(a.p, a.e)
        if g.tail_order is not None:
            if tail_bound is None:
                raise ContractError("truncated g needs a tail bound")
            vv = va.bound if isinstance(va, AtLeast) else va
            acc = acc.add_precision_cap(Fraction(tail_bound) + (g.tail_order + 1 - r) * vv)
        out.append(acc)
    return out


def _check_poles(poles):
    out = []
    for a, k in poles:
        if k < 1:
            raise DomainError("pole orders must be >= 1")
        v = a.valuation()
        if isinstance(v, AtLeast):
            if v.bound <= 0:
                raise PrecisionError("cannot certify |a| < 1")
        elif v <= 0:
            raise DomainError("poles must satisfy |a| < 1")
        out.append((a, k))
    for i in range(len(out)):
        for j in range(i + 1, len(out)):
            if (out[i][0] - out[j][0]).is_zero():
                raise DomainError("coincident poles")
    return out


def partial_fraction_residue(g: TruncatedSeries, poles, tail_bound=None) -> PadicScalar:
    """res_0(g / prod (T - a_i)^{k_i} dT) for |a_i| < 1 and g a power series.

    Sum over i of the coefficient of (T - a_i)^{k_i - 1} in the Taylor
    expansion at a_i of g * prod_{j != i} (T - a_j)^{-k_j}.
    """
    p, e = g.p, g.e
    poles = [(as_scalar(a, p, e), int(k)) for a, k in poles]
    poles = _check_poles(poles)
    total = PadicScalar.zero(p, e)
    for i, (ai, ki) in enumerate(poles):
        K = ki
        series = _taylor_at(g, ai, K, tail_bound)
        for j, (aj, kj) in enumerate(poles):
            if j == i:
                continue
            d = ai - aj
            fac = [d ** (-kj - r) * binom(-kj, r) for r in range(K)]
            series = [sum((series[s] * fac[r - s] for s in range(r + 1)),
                          PadicScalar.zero(p, e)) for r in range(K)]
        total = total + series[K - 1]
    return total


def residue_naive_product_form(g: TruncatedSeries, poles, tail_bound=None) -> PadicScalar:
    """sum_i g^{(k_i-1)}(a_i) / ((k_i-1)! prod_{j!=i} (a_i-a_j)^{k_j}).

    This agrees with partial_fraction_residue when every k_i = 1 or when there
    is a single pole; in general it omits the derivatives of the other factors.
    """
    p, e = g.p, g.e
    poles = _check_poles([(as_scalar(a, p, e), int(k)) for a, k in poles])
    total = PadicScalar.zero(p, e)
    for i, (ai, ki) in enumerate(poles):
        t = _taylor_at(g, ai, ki, tail_bound)[ki - 1]
        for j, (aj, kj) in enumerate(poles):
            if j != i:
                t = t * (ai - aj) ** (-kj)
        total = total + t
    return total


def sup_norm_r(f: TruncatedSeries, r) -> NormEstimate:
    """||f||_r as the valuation min_i (val(a_i) + r i) over the window."""
    r = Fraction(r)
    best = None
    zero_bound = None
    for k, c in enumerate(f.coeffs):
        i = f.i_min + k
        v = c.valuation()
        if isinstance(v, AtLeast):
            b = v.bound + r * i
            zero_bound = b if zero_bound is None else min(zero_bound, b)
            continue
        w = v + r * i
        best = w if best is None else min(best, w)
    exact = f.tail_order is None
    if best is None:
        return NormEstimate(AtLeast(zero_bound if zero_bound is not None else math.inf), exact)
    if zero_bound is not None and zero_bound < best:
        exact = False
    return NormEstimate(best, exact)


def rho_radius(p: int, h: int) -> Fraction:
    """r with p^{-r} = rho_h = |eps^(h+1) - 1|."""
    return Fraction(1, (p - 1) * p ** h)


def log_one_plus_T(N: int, p: int, e=1) -> TruncatedSeries:
    """t = log(1+T) = sum_{n<=N} (-1)^{n+1} T^n / n."""
    if N < 1:
        raise DomainError("N >= 1 required")
    cs = [0] + [Fraction((-1) ** (n + 1), n) for n in range(1, N + 1)]
    return TruncatedSeries(p, cs, 0, N, e)


def log_product_form(K: int, N: int, p: int, e=1) -> TruncatedSeries:
    """T * prod_{n<K} phi^n(q)/p truncated at T^N, with q = phi(T)/T."""
    T = TruncatedSeries.T(p, e)
    q = TruncatedSeries(p, [math.comb(p, n + 1) for n in range(p)], 0, None, e)
    prod = T.truncate(N)
    factor = q
    for _ in range(K):
        prod = (prod * (factor * Fraction(1, p)).truncate(N)).truncate(N)
        factor = frobenius_phi(factor)
    return prod


# ----------------------------------------------------------------------
# finite elements of the Iwasawa algebra

class GroupAlgebraElement:
    """sum c_a [gamma_a] with chi(gamma_a) = a a unit of Z_p."""

    __slots__ = ("p", "terms")

    def __init__(self, p, terms):
        self.p = p
        out = []
        for a, c in terms:
            if isinstance(a, int) and a % p == 0:
                raise DomainError("group elements are indexed by units")
            out.append((a, c))
        self.terms = tuple(out)

    def __add__(self, other):
        return GroupAlgebraElement(self.p, self.terms + other.terms)

    def canonical(self, K):
        """Dict residue mod p^K -> summed coefficient."""
        mod = p_pow = self.p ** K
        d = {}
        for a, c in self.terms:
            r = a % mod if isinstance(a, int) else a.residue_int() % p_pow
            d[r] = d[r] + c if r in d else c
        return d

    def equals(self, other, K):
        d1, d2 = self.canonical(K), other.canonical(K)
        for r in set(d1) | set(d2):
            x = d1.get(r, 0)
            y = d2.get(r, 0)
            if not (x - y == 0 if not isinstance(x, int) else y - x == 0):
                return False
        return True

    def act(self, f: TruncatedSeries, order=None) -> TruncatedSeries:
        total = None
        for a, c in self.terms:
            g = gamma_act(a, f, order) * c
            total = g if total is None else total + g
        return total if total is not None else f * 0


def _unit_power(a, n, p):
    if isinstance(a, int):
        if n >= 0:
            return a ** n
        x = PadicScalar.from_rational(a, p, get_precision())
        return x ** n
    return a ** n


def twist_group_algebra(lam: GroupAlgebraElement, tau, n: int) -> GroupAlgebraElement:
    """T_{tau,n}: [gamma_a] -> tau(a) [gamma_{a^n}]."""
    terms = []
    for a, c in lam.terms:
        val = tau(a)
        terms.append((_unit_power(a, n, lam.p), val * c if not isinstance(c, int) else val * c))
    return GroupAlgebraElement(lam.p, terms)


def mellin_finite(lam: GroupAlgebraElement, order=None, e=1) -> TruncatedSeries:
    """sum c_a (1+T)^a."""
    p = lam.p
    total = TruncatedSeries(p, [], 0, order, e)
    for a, c in lam.terms:
        if isinstance(a, int) and a >= 0 and order is None:
            s = TruncatedSeries.one_plus_T_power(a, p, None, e)
        elif isinstance(a, int):
            s = TruncatedSeries.one_plus_T_power(a, p, order, e)
        else:
            s = gamma_act(a, TruncatedSeries.T(p, e) + 1, order)
        total = total + s * c
    return total


def duality_pairing(x, y) -> PadicScalar:
    """res_0(sum_i gamma_{-1}(x_i) y_i dT/(1+T))."""
    p = x[0].p
    e = x[0].e
    total = PadicScalar.zero(p, e)
    for xi, yi in zip(x, y):
        need = max(0, -1 - yi.i_min)
        xs = gamma_act(-1, xi, order=need)
        inv = TruncatedSeries(p, [(-1) ** n for n in range(need + 1)], 0, need, e)
        prod = (xs * inv).truncate(need) * yi
        total = total + residue_at_zero(prod)
    return total
