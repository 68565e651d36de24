"""p-adic scalars with tracked absolute precision.

A scalar lives in L = Q_p(pi) with pi^e = p (e = 1 is Q_p itself).  It is
stored as ``p^{-s} * sum_i d_i pi^i`` together with a precision ``M`` counted
in powers of pi: the value is known modulo pi^M.  Integers and rationals whose
denominator is a power of p can be carried exactly; anything that needs an
infinite expansion (inverses of units, Teichmuller lifts, logarithms) is capped
at the working precision.
"""

from __future__ import annotations

import contextlib
import contextvars
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import DomainError, PrecisionError

# precision (in pi-units) treated as "exact"
EXACT = 1 << 40
_EXACT_HALF = EXACT >> 1

_working = contextvars.ContextVar("working_precision", default=20)


def get_precision() -> int:
    """Working absolute precision (in powers of p) used to cap expansions."""
    return _working.get()


def set_precision(n: int) -> None:
    if n < 1:
        raise DomainError("precision must be >= 1")
    _working.set(int(n))


@contextlib.contextmanager
def working_precision(n: int):
    token = _working.set(int(n))
    try:
        yield
    finally:
        _working.reset(token)


@lru_cache(maxsize=4096)
def ppow(p: int, t: int) -> int:
    return p ** t


def vp_int(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of 0")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


@dataclass(frozen=True)
class AtLeast:
    """A valuation known only to be at least ``bound``."""

    bound: Fraction | float

    def __str__(self):
        return f">= {self.bound}"

    def __ge__(self, other):
        if isinstance(other, AtLeast):
            return NotImplemented
        return self.bound >= other


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


class PadicScalar:
    """Element of Q_p(pi), pi^e = p, known modulo pi^M."""

    __slots__ = ("p", "e", "digits", "s", "M")

    def __init__(self, p, e, digits, s, M):
        # raw constructor; use the classmethods or _make for normalisation
        self.p = p
        self.e = e
        self.digits = digits
        self.s = s
        self.M = M

    # ------------------------------------------------------------------
    # construction
    @classmethod
    def _make(cls, p, e, digits, s, M):
        if e == 1:
            d = digits[0]
            if d and M < _EXACT_HALF:
                t = s + M
                d = d % ppow(p, t) if t > 0 else 0
            if not d:
                return cls(p, 1, (0,), 0, M)
            while s > 0 and d % p == 0:
                d //= p
                s -= 1
            return cls(p, 1, (d,), s, M)
        digits = list(digits)
        if M < _EXACT_HALF:
            for i in range(e):
                d = digits[i]
                if d:
                    t = s + _ceil_div(M - i, e)
                    digits[i] = d % ppow(p, t) if t > 0 else 0
        if not any(digits):
            return cls(p, e, tuple(digits), 0, M)
        while s > 0 and all(d % p == 0 for d in digits):
            digits = [d // p for d in digits]
            s -= 1
        return cls(p, e, tuple(digits), s, M)

    @classmethod
    def from_rational(cls, q, p, prec=None, e=1):
        """Embed an int or Fraction; exact when the denominator is a power of p.

        ``prec`` (absolute, in powers of p) caps the result; it is required
        for denominators prime to p and defaults to the working precision.
        """
        q = Fraction(q)
        num, den = q.numerator, q.denominator
        s = 0
        while den % p == 0:
            den //= p
            s += 1
        if den == 1 and prec is None:
            return cls._make(p, e, [num] + [0] * (e - 1), s, EXACT)
        if prec is None:
            prec = get_precision()
        t = s + int(prec) + 1
        d0 = num * pow(den, -1, ppow(p, t)) if den != 1 else num
        return cls._make(p, e, [d0] + [0] * (e - 1), s, e * int(prec))

    @classmethod
    def zero(cls, p, e=1, prec=None):
        return cls(p, e, (0,) * e, 0, EXACT if prec is None else e * prec)

    @classmethod
    def one(cls, p, e=1):
        return cls(p, e, (1,) + (0,) * (e - 1), 0, EXACT)

    @classmethod
    def uniformizer(cls, p, e=1):
        if e == 1:
            return cls(p, 1, (p,), 0, EXACT)
        return cls(p, e, (0, 1) + (0,) * (e - 2), 0, EXACT)

    @classmethod
    def from_digits(cls, p, e, digits, s=0, prec=None):
        """Build ``p^-s * sum digits[i] pi^i`` known mod p^prec (exact if None)."""
        M = EXACT if prec is None else int(Fraction(prec) * e)
        return cls._make(p, e, list(digits) + [0] * (e - len(digits)), s, M)

    # ------------------------------------------------------------------
    # basic properties
    @property
    def is_exact(self) -> bool:
        return self.M >= _EXACT_HALF

    @property
    def abs_prec(self):
        if self.is_exact:
            return math.inf
        return Fraction(self.M, self.e)

    def is_zero(self) -> bool:
        return not any(self.digits)

    def __bool__(self):
        return not self.is_zero()

    def _vpi(self):
        """Valuation in pi-units, or None when indistinguishable from 0."""
        best = None
        p, e = self.p, self.e
        for i, d in enumerate(self.digits):
            if d:
                v = e * vp_int(d, p) + i
                if best is None or v < best:
                    best = v
        if best is None:
            return None
        return best - e * self.s

    def valuation(self):
        v = self._vpi()
        if v is None:
            return AtLeast(self.abs_prec)
        return Fraction(v, self.e)

    def embed(self, e):
        """Image under Q_p -> Q_p(pi) with pi^e = p (self must have e = 1)."""
        if e == self.e:
            return self
        if self.e != 1:
            raise DomainError("can only embed scalars of Q_p")
        M = self.M * e if not self.is_exact else EXACT
        return PadicScalar._make(self.p, e, [self.digits[0]] + [0] * (e - 1), self.s, M)

    def add_precision_cap(self, prec):
        """Return self known only modulo p^prec (prec absolute, may be a Fraction)."""
        M = math.floor(Fraction(prec) * self.e)
        if M >= self.M:
            return self
        return PadicScalar._make(self.p, self.e, self.digits, self.s, M)

    def _cap_M(self):
        """Precision used when an exact operand needs a finite expansion."""
        if self.is_exact:
            return self.e * get_precision()
        return self.M

    # ------------------------------------------------------------------
    # coercion
    def _coerce(self, other):
        if type(other) is int:
            return PadicScalar._make(self.p, self.e, [other] + [0] * (self.e - 1), 0, EXACT)
        if isinstance(other, PadicScalar):
            if other.p != self.p:
                raise DomainError("mismatched primes")
            if other.e != self.e:
                if other.e == 1:
                    return other.embed(self.e)
                if self.e == 1:
                    raise _Promote(other.e)
                raise DomainError("mismatched ramification")
            return other
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            den = q.denominator
            while den % self.p == 0:
                den //= self.p
            if den == 1:
                return PadicScalar.from_rational(q, self.p, e=self.e)
            cap = _ceil_div(self._cap_M(), self.e) + 1 + max(0, -self._vpi_or(0) // self.e)
            return PadicScalar.from_rational(q, self.p, cap, self.e)
        return None

    def _vpi_or(self, default):
        v = self._vpi()
        return default if v is None else v

    # ------------------------------------------------------------------
    # arithmetic
    def __neg__(self):
        return PadicScalar(self.p, self.e, tuple(-d for d in self.digits), self.s, self.M)._norm()

    def _norm(self):
        return PadicScalar._make(self.p, self.e, self.digits, self.s, self.M)

    def __add__(self, other):
        if type(other) is PadicScalar and other.e == self.e and other.p == self.p:
            o = other
        else:
            try:
                o = self._coerce(other)
            except _Promote as pr:
                return self.embed(pr.e) + other
            if o is None:
                return NotImplemented
        p = self.p
        if self.s == o.s:
            return PadicScalar._make(p, self.e, [a + b for a, b in zip(self.digits, o.digits)],
                                     self.s, min(self.M, o.M))
        s = max(self.s, o.s)
        fa = ppow(p, s - self.s)
        fb = ppow(p, s - o.s)
        digits = [a * fa + b * fb for a, b in zip(self.digits, o.digits)]
        return PadicScalar._make(p, self.e, digits, s, min(self.M, o.M))

    __radd__ = __add__

    def __sub__(self, other):
        try:
            o = self._coerce(other)
        except _Promote as pr:
            return self.embed(pr.e) - other
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if type(other) is int:
            if other == 0:
                return PadicScalar(self.p, self.e, (0,) * self.e, 0, EXACT)
            M = self.M + self.e * vp_int(other, self.p)
            return PadicScalar._make(self.p, self.e, [d * other for d in self.digits], self.s, M)
        try:
            o = self._coerce(other)
        except _Promote as pr:
            return self.embed(pr.e) * other
        if o is None:
            return NotImplemented
        p, e = self.p, self.e
        va = self._vpi()
        vb = o._vpi()
        if va is None:
            va = self.M
        if vb is None:
            vb = o.M
        M = min(self.M + vb, o.M + va)
        if e == 1:
            digits = [self.digits[0] * o.digits[0]]
        else:
            c = [0] * (2 * e - 1)
            for i, a in enumerate(self.digits):
                if a:
                    for j, b in enumerate(o.digits):
                        if b:
                            c[i + j] += a * b
            for k in range(2 * e - 2, e - 1, -1):
                c[k - e] += p * c[k]
            digits = c[:e]
        return PadicScalar._make(p, e, digits, self.s + o.s, M)

    __rmul__ = __mul__

    def _shift_pi(self, k):
        """Exact multiplication by pi^k."""
        p, e = self.p, self.e
        q, r = divmod(k, e)
        digits = list(self.digits)
        if r:
            new = [0] * e
            for i, d in enumerate(digits):
                j = i + r
                if j < e:
                    new[j] += d
                else:
                    new[j - e] += p * d
            digits = new
        s = self.s
        if q >= 0:
            f = ppow(p, q)
            digits = [d * f for d in digits]
        else:
            s += -q
        M = self.M if self.is_exact else self.M + k
        return PadicScalar._make(p, e, digits, s, M)

    def inverse(self):
        v = self._vpi()
        if v is None:
            raise PrecisionError("inverse of a scalar indistinguishable from 0")
        p, e = self.p, self.e
        u = self._shift_pi(-v)
        if u.is_exact:
            target = e * get_precision() + v
        else:
            target = u.M
        target = max(target, 1)
        K = _ceil_div(target, e) + 1
        mod = ppow(p, K)
        if e == 1:
            y = [pow(u.digits[0], -1, mod)]
        else:
            y = _unit_inverse(u.digits, p, e, K)
        inv_u = PadicScalar._make(p, e, y, 0, target)
        return inv_u._shift_pi(-v)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError
            return self * (1 / Fraction(other))
        if isinstance(other, PadicScalar):
            return self * other.inverse()
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.inverse() * other
        return NotImplemented

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = PadicScalar.one(self.p, self.e)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, (PadicScalar, int, Fraction)):
            try:
                return (self - other).is_zero()
            except DomainError:
                return False
        return NotImplemented

    __hash__ = None

    # ------------------------------------------------------------------
    # representatives
    def balanced_digits(self):
        """Digits reduced to the symmetric range, with the shift s."""
        out = []
        p, e = self.p, self.e
        for i, d in enumerate(self.digits):
            if not self.is_exact and d:
                t = self.s + _ceil_div(self.M - i, e)
                mod = ppow(p, t)
                d %= mod
                if 2 * d > mod:
                    d -= mod
            out.append(d)
        return out, self.s

    def lift(self) -> Fraction:
        """A rational representative (balanced residue) of a Q_p scalar."""
        if self.e != 1:
            raise DomainError("lift() is only defined for e = 1")
        d, s = self.balanced_digits()
        return Fraction(d[0], ppow(self.p, s))

    def residue_int(self) -> int:
        """The nonnegative integer residue of a p-adic integer mod p^prec."""
        if self.e != 1 or self.s:
            raise DomainError("not a p-adic integer of Q_p")
        if self.is_exact:
            return self.digits[0]
        return self.digits[0] % ppow(self.p, self.M)

    def __repr__(self):
        d, s = self.balanced_digits()
        if self.e == 1:
            body = str(d[0])
        else:
            body = " + ".join(f"{c}*pi^{i}" for i, c in enumerate(d) if c) or "0"
            body = f"({body})"
        if s:
            body = f"{body}/{self.p}^{s}"
        prec = "exact" if self.is_exact else f"O({self.p}^{self.abs_prec})"
        return f"{body} + {prec}" if not self.is_exact else f"{body} (exact)"

    # ------------------------------------------------------------------
    # JSON
    def to_json(self):
        x = self
        if x.is_exact:
            x = x.add_precision_cap(get_precision())
        d, s = x.balanced_digits()
        den = ppow(x.p, s)
        strs = [_frac_str(Fraction(c, den)) for c in d]
        return {
            "p": x.p,
            "residue": strs[0] if x.e == 1 else strs,
            "abs_prec": _frac_str(x.abs_prec),
            "e": x.e,
        }

    @classmethod
    def from_json(cls, obj):
        p, e = int(obj["p"]), int(obj.get("e", 1))
        res = obj["residue"]
        if isinstance(res, str):
            res = [res]
        prec = Fraction(str(obj["abs_prec"]))
        cap = math.ceil(prec) + 1
        pi = cls.uniformizer(p, e)
        total = cls.zero(p, e)
        for i, r in enumerate(res):
            q = Fraction(r)
            if q:
                total = total + cls.from_rational(q, p, cap, e) * pi ** i
        return total.add_precision_cap(prec)


class _Promote(Exception):
    def __init__(self, e):
        self.e = e


def _frac_str(q) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def _polymul_mod(a, b, p, e, mod):
    c = [0] * (2 * e - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    c[i + j] += x * y
    for k in range(2 * e - 2, e - 1, -1):
        c[k - e] += p * c[k]
    return [x % mod for x in c[:e]]


def _unit_inverse(u, p, e, K):
    """Inverse of a unit of Z_p[pi] modulo p^K by Newton iteration."""
    mod = ppow(p, K)
    y = [pow(u[0], -1, p)] + [0] * (e - 1)
    prec = 1  # in pi-units
    target = e * K
    while prec < target:
        uy = _polymul_mod(u, y, p, e, mod)
        two_minus = [(-c) % mod for c in uy]
        two_minus[0] = (two_minus[0] + 2) % mod
        y = _polymul_mod(y, two_minus, p, e, mod)
        prec *= 2
    return y


def as_scalar(x, p, e=1):
    """Coerce an int / Fraction / PadicScalar into a PadicScalar of Q_p(pi)."""
    if isinstance(x, PadicScalar):
        return x.embed(e) if x.e != e else x
    return PadicScalar.from_rational(x, p, e=e)


def padic_val(x: PadicScalar):
    """Valuation with val(p) = 1, or AtLeast(abs_prec) when undeterminable."""
    return x.valuation()


def teichmuller(a: int, p: int, prec=None) -> PadicScalar:
    """Teichmuller lift of a mod p, by iterating x -> x^p to its fixed point."""
    N = get_precision() if prec is None else prec
    mod = ppow(p, N)
    x = a % mod
    if x % p == 0:
        return PadicScalar.zero(p)
    for _ in range(N + 1):
        y = pow(x, p, mod)
        if y == x:
            break
        x = y
    return PadicScalar._make(p, 1, [x], 0, N)


def padic_log(x: PadicScalar) -> PadicScalar:
    """log(x) by the series sum (-1)^{n+1}(x-1)^n/n, for val(x - 1) >= 1."""
    y = x - 1
    p = x.p
    target = x.abs_prec if not x.is_exact else Fraction(get_precision())
    if y.is_zero():
        if y.abs_prec < 1:
            raise DomainError("val(x - 1) cannot be certified >= 1")
        return PadicScalar.zero(p, x.e).add_precision_cap(target)
    v = y.valuation()
    if v < 1:
        raise DomainError("padic_log needs val(x - 1) >= 1")

    def bound(n):
        return n * v - math.floor(math.log(n, p) + 1e-12)

    total = PadicScalar.zero(p, x.e)
    term = PadicScalar.one(p, x.e)
    n = 0
    while True:
        n += 1
        term = term * y
        piece = term * Fraction(1 if n % 2 else -1, n)
        total = total + piece
        if bound(n + 1) >= target and bound(n + 2) >= target:
            break
    return total.add_precision_cap(target)
