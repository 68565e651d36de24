"""The algebras L_m = L[X]/Phi_{p^m}(X) and their distinguished roots of unity."""

from __future__ import annotations

from fractions import Fraction

from .errors import DomainError, PrecisionError
from .padic import AtLeast, PadicScalar, as_scalar


def cyclo_degree(p: int, m: int) -> int:
    return 1 if m == 0 else (p - 1) * p ** (m - 1)


def reduce_cyclic(p: int, m: int, c: list) -> list:
    """Reduce coefficients indexed mod p^m (list of length p^m) modulo Phi_{p^m}.

    Entries may be None for zero.  Returns a list of length deg Phi_{p^m}.
    """
    d = cyclo_degree(p, m)
    if m == 0:
        total = None
        for x in c:
            if x is not None:
                total = x if total is None else total + x
        return [total]
    step = p ** (m - 1)
    out = list(c[:d])
    for k in range(d, len(c)):
        x = c[k]
        if x is None:
            continue
        r = k - d
        for j in range(p - 1):
            idx = r + j * step
            out[idx] = -x if out[idx] is None else out[idx] - x
    return out


class CycloElement:
    """Element of L_m; ``coeffs[i]`` is the coefficient of X^i, X = eps^(m)."""

    __slots__ = ("p", "e", "m", "coeffs")

    def __init__(self, p, m, coeffs, e=1):
        d = cyclo_degree(p, m)
        if len(coeffs) != d:
            raise DomainError(f"expected {d} coefficients at level {m}")
        self.p = p
        self.e = e
        self.m = m
        self.coeffs = tuple(as_scalar(c, p, e) for c in coeffs)

    # ------------------------------------------------------------------
    @classmethod
    def from_scalar(cls, x, p, m, e=1):
        d = cyclo_degree(p, m)
        zero = PadicScalar.zero(p, e)
        return cls(p, m, [as_scalar(x, p, e)] + [zero] * (d - 1), e)

    @classmethod
    def from_cyclic(cls, p, m, c, e=1):
        """Build from a list indexed by exponents mod p^m (None meaning 0)."""
        red = reduce_cyclic(p, m, c)
        zero = PadicScalar.zero(p, e)
        return cls(p, m, [zero if x is None else x for x in red], e)

    @classmethod
    def root(cls, p, m, a=1, e=1):
        """(eps^(m))^a."""
        n = p ** m
        c = [None] * n
        c[a % n] = PadicScalar.one(p, e)
        return cls.from_cyclic(p, m, c, e)

    @property
    def degree(self):
        return len(self.coeffs)

    def _like(self, coeffs):
        return CycloElement(self.p, self.m, coeffs, self.e)

    def _coerce(self, other):
        if isinstance(other, CycloElement):
            if other.p != self.p:
                raise DomainError("mismatched primes")
            a, b = self, other
            if a.m < b.m:
                a = a.embed(b.m)
            elif b.m < a.m:
                b = b.embed(a.m)
            if a.e != b.e:
                if a.e == 1:
                    a = a.change_ramification(b.e)
                else:
                    b = b.change_ramification(a.e)
            return a, b
        if isinstance(other, (int, Fraction, PadicScalar)):
            e = max(self.e, other.e) if isinstance(other, PadicScalar) else self.e
            a = self.change_ramification(e) if e != self.e else self
            return a, CycloElement.from_scalar(other, self.p, self.m, e)
        return None

    def change_ramification(self, e):
        return CycloElement(self.p, self.m, [c.embed(e) for c in self.coeffs], e)

    # ------------------------------------------------------------------
    def __add__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return a._like([x + y for x, y in zip(a.coeffs, b.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return self._like([-x for x in self.coeffs])

    def __sub__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return a._like([x - y for x, y in zip(a.coeffs, b.coeffs)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, PadicScalar)):
            if isinstance(other, PadicScalar) and other.e != self.e and self.e == 1:
                return self.change_ramification(other.e) * other
            return self._like([x * other for x in self.coeffs])
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        n = a.p ** a.m
        c = [None] * n
        for i, x in enumerate(a.coeffs):
            if x.is_zero() and x.is_exact:
                continue
            for j, y in enumerate(b.coeffs):
                if y.is_zero() and y.is_exact:
                    continue
                k = (i + j) % n
                t = x * y
                c[k] = t if c[k] is None else c[k] + t
        return CycloElement.from_cyclic(a.p, a.m, c, a.e)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        if isinstance(other, PadicScalar):
            return self * other.inverse()
        if isinstance(other, CycloElement):
            return self * other.inverse()
        return NotImplemented

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        result = CycloElement.from_scalar(1, self.p, self.m, self.e)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def is_zero(self):
        return all(c.is_zero() for c in self.coeffs)

    def __eq__(self, other):
        pair = self._coerce(other) if isinstance(other, (CycloElement, int, Fraction, PadicScalar)) else None
        if pair is None:
            return NotImplemented
        a, b = pair
        return (a - b).is_zero()

    __hash__ = None

    def scalar_part(self):
        """The element as a scalar of L, if it lies in L (higher coefficients 0)."""
        if any(not c.is_zero() for c in self.coeffs[1:]):
            raise DomainError("element does not lie in L")
        return self.coeffs[0]

    @property
    def abs_prec(self):
        return min(c.abs_prec for c in self.coeffs)

    # ------------------------------------------------------------------
    def times_root(self, k, level=None):
        """self * (eps^(level))^k, computed as a cyclic shift."""
        level = self.m if level is None else level
        x = self.embed(level) if level > self.m else self
        if level < x.m:
            k *= x.p ** (x.m - level)
        n = x.p ** x.m
        c = [None] * n
        for i, v in enumerate(x.coeffs):
            if not (v.is_zero() and v.is_exact):
                c[(i + k) % n] = v
        return CycloElement.from_cyclic(x.p, x.m, c, x.e)

    def embed(self, m2):
        """Tower map L_m -> L_{m2}, eps^(m) -> (eps^(m2))^(p^(m2-m))."""
        if m2 < self.m:
            raise DomainError("cannot embed into a lower level")
        if m2 == self.m:
            return self
        n = self.p ** m2
        f = self.p ** (m2 - self.m)
        c = [None] * n
        for i, x in enumerate(self.coeffs):
            c[(i * f) % n] = x
        return CycloElement.from_cyclic(self.p, m2, c, self.e)

    def mult_matrix(self):
        """Matrix of multiplication by self on the basis 1, X, ..., X^{d-1}."""
        d = self.degree
        cols = []
        for i in range(d):
            cols.append((self * CycloElement.root(self.p, self.m, i, self.e)).coeffs)
        return [[cols[j][i] for j in range(d)] for i in range(d)]

    def norm(self):
        """Norm to L, as the determinant of the multiplication matrix."""
        return determinant(self.mult_matrix())

    def inverse(self):
        """Inverse by solving the linear system (self) * y = 1."""
        A = self.mult_matrix()
        d = self.degree
        rhs = [PadicScalar.one(self.p, self.e)] + [PadicScalar.zero(self.p, self.e)] * (d - 1)
        return self._like(solve(A, rhs))

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if not c.is_zero():
                terms.append(f"({c})*X^{i}")
        return f"CycloElement(m={self.m}: " + (" + ".join(terms) or "0") + ")"

    def to_json(self):
        return {"p": self.p, "e": self.e, "m": self.m, "coeffs": [c.to_json() for c in self.coeffs]}

    @classmethod
    def from_json(cls, obj):
        coeffs = [PadicScalar.from_json(c) for c in obj["coeffs"]]
        return cls(int(obj["p"]), int(obj["m"]), coeffs, int(obj.get("e", 1)))


def _pivot_rows(A, col, start):
    best, best_v = None, None
    for r in range(start, len(A)):
        v = A[r][col]._vpi()
        if v is not None and (best_v is None or v < best_v):
            best, best_v = r, v
    return best


def determinant(A):
    """Determinant by Gaussian elimination with minimal-valuation pivots."""
    A = [list(row) for row in A]
    n = len(A)
    p, e = A[0][0].p, A[0][0].e
    det = PadicScalar.one(p, e)
    for col in range(n):
        r = _pivot_rows(A, col, col)
        if r is None:
            prec = min(A[i][col].M for i in range(col, n))
            return PadicScalar(p, e, (0,) * e, 0, prec) * det
        if r != col:
            A[col], A[r] = A[r], A[col]
            det = -det
        piv = A[col][col]
        det = det * piv
        inv = piv.inverse()
        for i in range(col + 1, n):
            if A[i][col].is_zero() and A[i][col].is_exact:
                continue
            f = A[i][col] * inv
            A[i] = [A[i][j] - f * A[col][j] if j >= col else A[i][j] for j in range(n)]
    return det


def solve(A, b):
    """Solve A x = b over L by Gaussian elimination."""
    n = len(A)
    M = [list(A[i]) + [b[i]] for i in range(n)]
    for col in range(n):
        r = _pivot_rows(M, col, col)
        if r is None:
            raise PrecisionError("singular system at tracked precision")
        M[col], M[r] = M[r], M[col]
        inv = M[col][col].inverse()
        M[col] = [x * inv for x in M[col]]
        for i in range(n):
            if i != col and not (M[i][col].is_zero() and M[i][col].is_exact):
                f = M[i][col]
                M[i] = [M[i][j] - f * M[col][j] for j in range(n + 1)]
    return [M[i][n] for i in range(n)]


def fourier_sum(values, c, m, p, e=1):
    """sum_a (eps^(m))^{c a} values[a] for scalars or L_m' elements, in L_max(m, m')."""
    levels = [v.m for v in values if isinstance(v, CycloElement)]
    L = max([m] + levels)
    if e == 1:
        return _fourier_sum_e1(values, c, m, L, p)
    n = p ** L
    arr = [None] * n
    step = p ** (L - m)
    for a, w in enumerate(values):
        if w is None:
            continue
        shift = (c * a * step) % n
        if isinstance(w, CycloElement):
            sp = p ** (L - w.m)
            for i, x in enumerate(w.coeffs):
                if x.is_zero() and x.is_exact:
                    continue
                idx = (i * sp + shift) % n
                arr[idx] = x if arr[idx] is None else arr[idx] + x
        else:
            if w.is_zero() and w.is_exact:
                continue
            arr[shift] = w if arr[shift] is None else arr[shift] + w
    if all(x is None for x in arr):
        return CycloElement.from_scalar(PadicScalar.zero(p, e), p, L, e)
    return CycloElement.from_cyclic(p, L, arr, e)


def _fourier_sum_e1(values, c, m, L, p):
    # same result as the generic path, summing integers over a common p-power
    # denominator and building each scalar once
    n = p ** L
    step = p ** (L - m)
    terms = []
    for a, w in enumerate(values):
        if w is None:
            continue
        shift = (c * a * step) % n
        if isinstance(w, CycloElement):
            sp = p ** (L - w.m)
            for i, x in enumerate(w.coeffs):
                if x.digits[0] or not x.is_exact:
                    terms.append(((i * sp + shift) % n, x))
        elif w.digits[0] or not w.is_exact:
            terms.append((shift, w))
    if not terms:
        return CycloElement.from_scalar(PadicScalar.zero(p), p, L)
    S = max(x.s for _, x in terms)
    num = [0] * n
    prec = [None] * n
    for idx, x in terms:
        num[idx] += x.digits[0] * p ** (S - x.s)
        prec[idx] = x.M if prec[idx] is None else min(prec[idx], x.M)
    d = cyclo_degree(p, L)
    if L > 0:
        step = p ** (L - 1)
        for k in range(d, n):
            if prec[k] is None:
                continue
            r = k - d
            for j in range(p - 1):
                idx = r + j * step
                num[idx] -= num[k]
                prec[idx] = prec[k] if prec[idx] is None else min(prec[idx], prec[k])
    else:
        total = [i for i in range(n) if prec[i] is not None]
        num = [sum(num[i] for i in total)]
        prec = [min(prec[i] for i in total)]
    zero = PadicScalar.zero(p)
    out = [zero if prec[i] is None else PadicScalar._make(p, 1, (num[i],), S, prec[i]) for i in range(d)]
    return CycloElement(p, L, out)


def cyclo_val(x: CycloElement):
    """Valuation of x in L_m, val(Norm(x)) / deg Phi_{p^m}."""
    N = x.norm()
    v = N.valuation()
    if isinstance(v, AtLeast):
        raise PrecisionError("norm indistinguishable from 0 at tracked precision")
    return v / x.degree


def root_order_exponent(eta: CycloElement) -> int:
    """r such that eta has order p^r (eta assumed a p-power root of unity)."""
    x = eta
    r = 0
    while not x == 1:
        x = x ** eta.p
        r += 1
        if r > eta.m + 1:
            raise DomainError("not a p-power root of unity of L_m")
    return r


def cyclo_power(eta: CycloElement, a, modulus=None) -> CycloElement:
    """eta^a for a p-power root of unity; ``a`` may be a residue mod ``modulus``."""
    r = root_order_exponent(eta)
    order = eta.p ** r
    if modulus is not None and modulus % order != 0:
        raise DomainError("exponent known modulo less than the order of eta")
    return eta ** (a % order if order > 1 else 0)


def additive_character(y, p, m=None, e=1) -> CycloElement:
    """e^{2 pi i y} = (eps^(m))^{p^m y} for rational y, as an element of L_m.

    m defaults to max(0, -val(y)); a larger m embeds via the tower maps.
    """
    y = Fraction(y)
    vy = 0
    if y:
        num, den = y.numerator, y.denominator
        while den % p == 0:
            den //= p
            vy -= 1
        while num % p == 0:
            num //= p
            vy += 1
    need = max(0, -vy)
    if m is None:
        m = need
    if m < need:
        raise DomainError("level too small for e^{2 pi i y}")
    n = p ** m
    z = y * n
    a = z.numerator * pow(z.denominator, -1, n) % n if n > 1 else 0
    return CycloElement.root(p, m, a, e)
