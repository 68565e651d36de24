"""Distributions on Z_p in the level-h, degree-M local moment model.

``d[a][i] = integral over a + p^h Z_p of ((z - a)/p^h)^i dmu`` for
0 <= a < p^h and 0 <= i < M.  Entries are scalars of L or elements of some
L_m (as produced by Gauss-sum twists).

A distribution built from Dirac masses keeps its atoms.  When every class
holds at most M atoms the moments i < M already span all LA_h test
functions on the atoms, so the LA_h norm computed from the entries is exact;
such distributions are called full.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .characters import CharacterPair, ContinuousCharacter
from .cyclo import CycloElement, cyclo_val, fourier_sum
from .errors import ContractError, DegreeError, DomainError, LevelError, SupportError
from .padic import AtLeast, PadicScalar, as_scalar
from .series import NormEstimate, TruncatedSeries, binom


def _is_zero(x):
    return x.is_zero()


def _val(x):
    """Valuation of a scalar or L_m element; AtLeast when indistinguishable from 0."""
    if isinstance(x, CycloElement):
        if x.is_zero():
            return AtLeast(x.abs_prec)
        return cyclo_val(x)
    return x.valuation()


def _zero(p, e):
    return PadicScalar.zero(p, e)


@dataclass
class LocalFunction:
    """sum_i c[a][i] ((z - a)/p^h)^i on each class a mod p^h, times eta^z if given."""

    p: int
    level: int
    coeffs: dict
    eta: CycloElement | None = None
    e: int = 1

    @property
    def degree(self):
        return max((len(c) - 1 for c in self.coeffs.values()), default=-1)

    @classmethod
    def monomial(cls, j, p, e=1, eta=None):
        """z^j (level 0)."""
        return cls(p, 0, {0: [0] * j + [1]}, eta, e)

    @classmethod
    def binomial(cls, n, p, e=1, eta=None):
        """C(z, n) (level 0)."""
        P = [1]
        for k in range(n):
            P = _poly_mul_linear(P, -k, 1)
        f = math.factorial(n)
        return cls(p, 0, {0: [Fraction(c, f) for c in P]}, eta, e)

    @classmethod
    def indicator(cls, a, h, p, e=1):
        return cls(p, h, {a % p ** h: [1]}, None, e)

    @classmethod
    def additive_character(cls, y, p, e=1, j=0):
        """z^j e^{2 pi i z y}."""
        from .cyclo import additive_character
        return cls(p, 0, {0: [0] * j + [1]}, additive_character(y, p, e=e), e)

    def norm_val(self):
        vals = []
        for cs in self.coeffs.values():
            for c in cs:
                v = as_scalar(c, self.p, self.e).valuation() if not isinstance(c, CycloElement) else _val(c)
                if not isinstance(v, AtLeast):
                    vals.append(v)
        return min(vals) if vals else AtLeast(math.inf)


def _poly_mul_linear(P, c0, c1):
    """P(u) * (c0 + c1 u) with integer coefficients."""
    out = [0] * (len(P) + 1)
    for r, x in enumerate(P):
        out[r] += x * c0
        out[r + 1] += x * c1
    return out


class LocalDistribution:
    __slots__ = ("p", "h", "M", "e", "entries", "atoms", "norm_bound")

    def __init__(self, p, h, M, entries, e=1, atoms=None, norm_bound=None):
        if M < 1:
            raise DomainError("degree M must be >= 1")
        n = p ** h
        if len(entries) != n or any(len(row) != M for row in entries):
            raise DomainError(f"entries must have shape {n} x {M}")
        self.p = p
        self.h = h
        self.M = M
        self.e = e
        self.entries = tuple(tuple(x if isinstance(x, CycloElement) else as_scalar(x, p, e)
                                   for x in row) for row in entries)
        self.atoms = None if atoms is None else tuple(atoms)
        # declared lower bound for val(integral of f) over the unit ball of LA_h
        self.norm_bound = norm_bound

    # ------------------------------------------------------------------
    @classmethod
    def zero(cls, p, h, M, e=1):
        return cls(p, h, M, [[0] * M for _ in range(p ** h)], e, atoms=[])

    @classmethod
    def dirac_sum(cls, atoms, p, h, M, e=1):
        """sum lambda_c delta_c for integer points c."""
        n = p ** h
        z = _zero(p, e)
        rows = [[z] * M for _ in range(n)]
        kept = []
        for c, lam in atoms:
            c = int(c)
            lam = as_scalar(lam, p, e) if not isinstance(lam, CycloElement) else lam
            a = c % n
            u = (c - a) // n
            row = rows[a]
            rows[a] = [row[i] + lam * (u ** i) for i in range(M)]
            kept.append((c, lam))
        mu = cls(p, h, M, rows, e, atoms=kept)
        mu.norm_bound = mu._atom_norm_bound()
        return mu

    @classmethod
    def dirac(cls, c, p, h, M, weight=1, e=1):
        return cls.dirac_sum([(c, weight)], p, h, M, e)

    def _atom_norm_bound(self):
        if not self.atoms:
            return AtLeast(math.inf)
        if self.full:
            return self.norm().val
        vals = [_val(lam) for _, lam in self.atoms]
        fin = [v for v in vals if not isinstance(v, AtLeast)]
        return min(fin) if fin else AtLeast(math.inf)

    @property
    def full(self):
        if self.atoms is None:
            return False
        counts = {}
        for c, _ in self.atoms:
            counts[c % self.p ** self.h] = counts.get(c % self.p ** self.h, 0) + 1
        return max(counts.values(), default=0) <= self.M

    @property
    def abs_prec(self):
        return min(x.abs_prec for row in self.entries for x in row)

    def _like(self, entries, atoms=None, norm_bound=None, h=None):
        return LocalDistribution(self.p, self.h if h is None else h, self.M, entries, self.e,
                                 atoms, norm_bound)

    # ------------------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, LocalDistribution):
            return NotImplemented
        if (self.p, self.h, self.M) != (other.p, other.h, other.M):
            raise LevelError("distributions at different levels or degrees")
        entries = [[x + y for x, y in zip(r1, r2)] for r1, r2 in zip(self.entries, other.entries)]
        atoms = None if self.atoms is None or other.atoms is None else self.atoms + other.atoms
        nb = _min_bound(self.norm_bound, other.norm_bound)
        out = self._like(entries, atoms, nb)
        if out.full:
            out.norm_bound = out.norm().val
        return out

    def __neg__(self):
        return self * -1

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, c):
        if isinstance(c, (int, Fraction, PadicScalar, CycloElement)):
            entries = [[x * c for x in row] for row in self.entries]
            atoms = None if self.atoms is None else [(a, lam * c) for a, lam in self.atoms]
            nb = self.norm_bound
            if nb is not None and not isinstance(nb, AtLeast):
                nb = nb + _val(as_scalar(c, self.p, self.e) if not isinstance(c, CycloElement) else c)
            return self._like(entries, atoms, nb)
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, LocalDistribution):
            return NotImplemented
        if (self.p, self.h, self.M) != (other.p, other.h, other.M):
            return False
        return all(_is_zero(x - y) for r1, r2 in zip(self.entries, other.entries) for x, y in zip(r1, r2))

    __hash__ = None

    def mismatches(self, other):
        """(a, i) positions where the entries differ at tracked precision."""
        out = []
        for a, (r1, r2) in enumerate(zip(self.entries, other.entries)):
            for i, (x, y) in enumerate(zip(r1, r2)):
                if not _is_zero(x - y):
                    out.append((a, i))
        return out

    def __repr__(self):
        return f"LocalDistribution(p={self.p}, h={self.h}, M={self.M}, full={self.full})"

    # ------------------------------------------------------------------
    def norm(self) -> NormEstimate:
        best = None
        zb = None
        for row in self.entries:
            for x in row:
                v = _val(x)
                if isinstance(v, AtLeast):
                    zb = v.bound if zb is None else min(zb, v.bound)
                elif best is None or v < best:
                    best = v
        if best is None:
            return NormEstimate(AtLeast(zb if zb is not None else math.inf), self.full)
        return NormEstimate(best, self.full)

    def to_json(self):
        def enc(x):
            return x.to_json()
        return {
            "p": self.p,
            "level": self.h,
            "degree": self.M,
            "entries": [[enc(x) for x in row] for row in self.entries],
            "abs_prec": "inf" if self.abs_prec == math.inf else str(self.abs_prec),
            "full": self.full,
            "atoms": None if self.atoms is None else [[c, lam.to_json()] for c, lam in self.atoms],
        }

    @classmethod
    def from_json(cls, obj):
        p, h, M = int(obj["p"]), int(obj["level"]), int(obj["degree"])

        def dec(x):
            return CycloElement.from_json(x) if "coeffs" in x else PadicScalar.from_json(x)
        entries = [[dec(x) for x in row] for row in obj["entries"]]
        atoms = obj.get("atoms")
        if atoms is not None:
            atoms = [(int(c), dec(lam)) for c, lam in atoms]
        e = next((x.e for row in entries for x in row), 1)
        mu = cls(p, h, M, entries, e, atoms)
        if atoms is not None:
            mu.norm_bound = mu._atom_norm_bound()
        return mu


def _min_bound(a, b):
    if a is None or b is None:
        return None
    av = a.bound if isinstance(a, AtLeast) else a
    bv = b.bound if isinstance(b, AtLeast) else b
    m = min(av, bv)
    return AtLeast(m) if isinstance(a, AtLeast) and isinstance(b, AtLeast) else m


def dist_norm_LA(mu: LocalDistribution) -> NormEstimate:
    """sup |d[a][i]| as a valuation; exact when mu is full."""
    return mu.norm()


# ----------------------------------------------------------------------
# integration

def integrate(mu: LocalDistribution, f: LocalFunction):
    p, h = mu.p, mu.h
    if f.level > h:
        raise LevelError(f"function of level {f.level} against a distribution of level {h}")
    if f.degree >= mu.M:
        raise DegreeError(f"polynomial degree {f.degree} needs M > {f.degree}")
    eta = f.eta
    if eta is not None:
        c_eta = _root_exp(eta)
        order = 0 if c_eta == 0 else eta.m - _vp(c_eta, p)
        if order > h:
            raise LevelError("eta^z is not constant on classes of the distribution")
    n = p ** h
    q = p ** f.level
    scale = p ** (h - f.level)
    by_exp = {}
    total = _zero(p, mu.e)
    for a in range(n):
        a1 = a % q
        cs = f.coeffs.get(a1)
        if not cs:
            continue
        s = (a - a1) // q
        row = mu.entries[a]
        acc = None
        for i, c in enumerate(cs):
            if c == 0:
                continue
            # ((z - a1)/p^h')^i = (s + scale u)^i with u = (z - a)/p^h
            for r in range(i + 1):
                coef = math.comb(i, r) * s ** (i - r) * scale ** r
                if coef == 0:
                    continue
                t = row[r] * (c * coef if not isinstance(c, CycloElement) else c * coef)
                acc = t if acc is None else acc + t
        if acc is None:
            continue
        if eta is None:
            total = acc + total
        else:
            k = a % (p ** eta.m) if eta.m else 0
            by_exp[k] = acc + by_exp[k] if k in by_exp else acc
    if eta is None:
        return total
    n_m = p ** eta.m
    vals = [None] * n_m
    for k, acc in by_exp.items():
        vals[k] = acc
    return fourier_sum(vals, c_eta, eta.m, p, eta.e)


def _vp(n, p):
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _root_exp(eta: CycloElement) -> int:
    """c with eta = (eps^(m))^c."""
    nz = [i for i, x in enumerate(eta.coeffs) if not x.is_zero()]
    if len(nz) == 1 and eta.coeffs[nz[0]] == 1:
        return nz[0]
    n = eta.p ** eta.m
    for c in range(len(eta.coeffs), n):
        if eta == CycloElement.root(eta.p, eta.m, c, eta.e):
            return c
    raise DomainError("twist must be a p-power root of unity")


def class_moments(mu: LocalDistribution, J: int):
    """Z[a][j] = integral over a + p^h Z_p of z^j dmu for j < J."""
    q = mu.p ** mu.h
    out = []
    for a in range(q):
        row = mu.entries[a]
        zs = []
        for j in range(J):
            acc = None
            for i in range(j + 1):
                x = row[i]
                if x.is_zero() and getattr(x, "is_exact", False):
                    continue
                t = x * (math.comb(j, i) * a ** (j - i) * q ** i)
                acc = t if acc is None else acc + t
            zs.append(acc if acc is not None else _zero(mu.p, mu.e))
        out.append(zs)
    return out


# ----------------------------------------------------------------------
# Gamma, phi, psi, Res

def dist_gamma(a, mu: LocalDistribution) -> LocalDistribution:
    """Push-forward under z -> a z."""
    p, h, M = mu.p, mu.h, mu.M
    n = p ** h
    if isinstance(a, int):
        if a % p == 0:
            raise DomainError("dist_gamma needs a unit")
        a_sc = PadicScalar.from_rational(a, p, e=mu.e)
        a_res = a
    else:
        if a.valuation() != 0:
            raise DomainError("dist_gamma needs a unit")
        a_sc = a.embed(mu.e) if a.e != mu.e else a
        a_res = a.residue_int()
    ainv = pow(a_res, -1, n) if n > 1 else 0
    apows = [a_sc ** r for r in range(M)]
    rows = []
    for b in range(n):
        c = (ainv * b) % n if n > 1 else 0
        t = (a_sc * c - b) / p ** h
        tpows = [t ** r for r in range(M)]
        src = mu.entries[c]
        row = []
        for i in range(M):
            acc = None
            for r in range(i + 1):
                x = src[r]
                if x.is_zero() and getattr(x, "is_exact", False):
                    continue
                term = x * (apows[r] * tpows[i - r] * math.comb(i, r))
                acc = term if acc is None else acc + term
            row.append(acc if acc is not None else _zero(p, mu.e))
        rows.append(row)
    atoms = None
    if mu.atoms is not None and isinstance(a, int):
        atoms = [(a * c, lam) for c, lam in mu.atoms]
    return mu._like(rows, atoms, mu.norm_bound)


def dist_phi(mu: LocalDistribution) -> LocalDistribution:
    """Push-forward under z -> p z, at level h + 1."""
    p, h, M = mu.p, mu.h, mu.M
    z = _zero(p, mu.e)
    rows = [[z] * M for _ in range(p ** (h + 1))]
    for a in range(p ** h):
        rows[p * a] = list(mu.entries[a])
    atoms = None if mu.atoms is None else [(p * c, lam) for c, lam in mu.atoms]
    return mu._like(rows, atoms, mu.norm_bound, h=h + 1)


def dist_psi(mu: LocalDistribution) -> LocalDistribution:
    """f -> integral over pZ_p of f(z/p), at level h - 1."""
    p, h = mu.p, mu.h
    if h == 0:
        raise LevelError("psi needs level >= 1")
    rows = [list(mu.entries[p * a]) for a in range(p ** (h - 1))]
    atoms = None if mu.atoms is None else [(c // p, lam) for c, lam in mu.atoms if c % p == 0]
    return mu._like(rows, atoms, mu.norm_bound, h=h - 1)


def dist_res(mu: LocalDistribution, classes, level: int) -> LocalDistribution:
    """Restriction to the union of the classes (residues mod p^level)."""
    p, h = mu.p, mu.h
    if level > h:
        raise LevelError("restriction level above the distribution's level")
    q = p ** level
    keep = {c % q for c in classes}
    z = _zero(p, mu.e)
    rows = [list(row) if a % q in keep else [z] * mu.M for a, row in enumerate(mu.entries)]
    atoms = None if mu.atoms is None else [(c, lam) for c, lam in mu.atoms if c % q in keep]
    return mu._like(rows, atoms, mu.norm_bound)


def restrict_units(mu):
    return dist_res(mu, [a for a in range(mu.p) if a % mu.p], 1)


def restrict_pZp(mu):
    return dist_res(mu, [0], 1)


def supported_on_units(mu) -> bool:
    return all(all(_is_zero(x) for x in mu.entries[a]) for a in range(0, mu.p ** mu.h, mu.p))


# ----------------------------------------------------------------------
# Amice transform

def _binom_poly_in_u(a, q, n):
    """Integer coefficients of n! C(a + q u, n) as a polynomial in u."""
    P = [1]
    for k in range(n):
        P = _poly_mul_linear(P, a - k, q)
    return P


def binomial_moment(mu: LocalDistribution, n: int, eta=None):
    """integral of C(z, n) (times eta^z) dmu."""
    if n >= mu.M:
        raise DegreeError(f"C(z, {n}) needs M > {n}")
    f = math.factorial(n)
    return integrate(mu, LocalFunction(mu.p, 0, {0: [Fraction(c, f) for c in _binom_poly_in_u(0, 1, n)]},
                                       eta, mu.e))


def amice(mu: LocalDistribution, N=None) -> TruncatedSeries:
    """A(mu) = sum_n T^n integral C(z, n) dmu, for n <= N < M.

    With N None and nonnegative integer atoms, the exact polynomial
    sum lambda_c (1+T)^c is returned.
    """
    p, h, M = mu.p, mu.h, mu.M
    if N is None:
        if mu.atoms is None or any(c < 0 for c, _ in mu.atoms):
            raise ContractError("exact Amice transform needs nonnegative integer atoms")
        total = TruncatedSeries(p, [], 0, None, mu.e)
        for c, lam in mu.atoms:
            total = total + TruncatedSeries.one_plus_T_power(c, p, None, mu.e) * lam
        return total
    if N >= M:
        raise DegreeError(f"amice order {N} needs M > {N}")
    q = p ** h
    coeffs = []
    Ps = {a: [1] for a in range(q)}
    for n in range(N + 1):
        acc = None
        for a in range(q):
            P = Ps[a]
            row = mu.entries[a]
            for r, c in enumerate(P):
                if c == 0:
                    continue
                x = row[r]
                if x.is_zero() and getattr(x, "is_exact", False):
                    continue
                t = x * c
                acc = t if acc is None else acc + t
            Ps[a] = _poly_mul_linear(P, a - n, q)
        f = math.factorial(n)
        coeffs.append(acc * Fraction(1, f) if acc is not None else _zero(p, mu.e))
    return TruncatedSeries(p, coeffs, 0, N, mu.e)


def derivative_at_root(mu: LocalDistribution, j: int, eta: CycloElement) -> CycloElement:
    """((d/dT)^j A(mu))(eta - 1) = j! eta^{-j} integral C(z, j) eta^z dmu."""
    val = binomial_moment(mu, j, eta)
    return val * eta ** (-j) * math.factorial(j)


# ----------------------------------------------------------------------
# the w-involution

def _unit_value(chi: ContinuousCharacter, u: int):
    val = chi(u)
    if isinstance(val, CycloElement):
        raise DomainError("character values must lie in L (conductor <= 1)")
    return val


def w_involution(mu: LocalDistribution, pair: CharacterPair, side="alpha",
                 norm_bound=None) -> LocalDistribution:
    """f -> integral over Z_p^x of eps delta(z) f(1/z) dmu.

    side "alpha" uses eps = beta(-1)(-1)^k and delta_alpha; side "beta" uses
    alpha(-1)(-1)^k and delta_beta.  Unseen moments of degree >= M are
    controlled by ``norm_bound`` (or the distribution's own bound); the
    dropped terms cost h (M - m) in precision for output degree m.
    """
    p, h, M, k = mu.p, mu.h, mu.M, pair.k
    ratio = pair.ratio() if side == "alpha" else pair.ratio().inverse()
    if ratio.conductor > 1:
        raise DomainError("w_involution is implemented for conductor(beta/alpha) <= 1")
    if h < max(1, ratio.conductor):
        raise LevelError("w_involution needs level h >= max(1, n(beta/alpha))")
    if not supported_on_units(mu):
        raise SupportError("w_involution needs a distribution supported on Z_p^x")
    if norm_bound is None:
        norm_bound = mu.norm_bound
    if norm_bound is None:
        raise ContractError("w_involution needs a norm bound for moments of degree >= M")
    nb = norm_bound.bound if isinstance(norm_bound, AtLeast) else norm_bound
    other = pair.beta if side == "alpha" else pair.alpha
    sign = other.on_unit(-1) * (-1) ** k
    q = p ** h
    e = mu.e
    rows = [[_zero(p, e)] * M for _ in range(q)]
    for b in range(q):
        if b % p == 0:
            continue
        c = pow(b, -1, q)
        src = mu.entries[c]
        if all(_is_zero(x) for x in src):
            continue
        t = (1 - b * c) // q
        # integrand on c + p^h Z_p: sign * chi(c) * (t - b u)^m * z^(k-2-m), z = c + q u
        chi_c = _unit_value(ContinuousCharacter(ratio), c) * sign
        row = []
        for m in range(M):
            poly = _integrand_poly(c, q, t, b, m, k, M, p, e)
            acc = None
            for r, coef in enumerate(poly):
                x = src[r]
                if x.is_zero() and getattr(x, "is_exact", False):
                    continue
                term = x * coef
                acc = term if acc is None else acc + term
            val = acc * chi_c if acc is not None else _zero(p, e)
            cap = nb + h * (M - m)
            row.append(_cap(val, cap, nb, k, m, M))
        rows[b] = row
    return mu._like(rows, None, mu.norm_bound)


def _cap(val, cap, nb, k, m, M):
    # the expansion was truncated only if it had terms of degree >= M
    if m <= k - 2 < M:
        return val
    if isinstance(val, CycloElement):
        return CycloElement(val.p, val.m, [c.add_precision_cap(cap) for c in val.coeffs], val.e)
    return val.add_precision_cap(cap)


def _integrand_poly(c, q, t, b, m, k, M, p, e):
    """Coefficients (u^0 .. u^{M-1}) of (t - b u)^m (c + q u)^{k-2-m}."""
    lin = [1]
    for _ in range(m):
        lin = _poly_mul_linear(lin, t, -b)
    n = k - 2 - m
    if n >= 0:
        P = lin
        for _ in range(n):
            P = _poly_mul_linear(P, c, q)
        P = P[:M]
        return [PadicScalar.from_rational(x, p, e=e) for x in P] + [PadicScalar.zero(p, e)] * (M - len(P))
    # (c + q u)^n = c^n sum_i C(n, i) (q u / c)^i for n < 0
    cinv = PadicScalar.from_rational(c, p, e=e).inverse()
    series = []
    for i in range(M):
        series.append(cinv ** (i - n) * (binom(n, i) * q ** i))
    out = []
    for r in range(M):
        acc = PadicScalar.zero(p, e)
        for s_ in range(min(r, len(lin) - 1) + 1):
            acc = acc + series[r - s_] * lin[s_]
        out.append(acc)
    return out


def delta_value(pair: CharacterPair, u: int, side="alpha"):
    """delta_alpha(u) (or delta_beta(u)) for a unit u."""
    d = pair.delta_alpha() if side == "alpha" else pair.delta_beta()
    return _unit_value(d, u)


def act_group_algebra(lam, mu: LocalDistribution) -> LocalDistribution:
    """sum c_a gamma_a(mu) for a finite group-algebra element."""
    total = None
    for a, c in lam.terms:
        g = dist_gamma(a, mu) * c
        total = g if total is None else total + g
    return total if total is not None else mu * 0
