"""Rank-2 filtered phi-modules D(alpha, beta), weak admissibility, duals, and
the trianguline classifier.

A ``FilteredPhiModule`` has a two-step filtration over L_n:
Fil^i = everything for i <= full_upto, the line L_n * ``line`` for
full_upto < i <= line_upto, and 0 above.  Hodge numbers are read off as
jumps: t_H(D) = full_upto + line_upto, t_H(l) = line_upto if l is the
filtration line and full_upto otherwise.  t_N of a phi-stable line is the
valuation of its eigenvalue.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

from .characters import (CharacterPair, ContinuousCharacter, SmoothCharacter, gauss_sum_std,
                         norm_character)
from .cyclo import CycloElement
from .errors import DomainError, LevelError
from .padic import AtLeast, PadicScalar


def _as_cyclo(x, p, n, e):
    if isinstance(x, CycloElement):
        return x.embed(max(x.m, n))
    return CycloElement.from_scalar(x, p, n, e)


def _proportional(v, w):
    a = v[0] * w[1] - v[1] * w[0]
    return a.is_zero()


@dataclass
class FilteredPhiModule:
    """Rank-2 module on basis (b0, b1); phi[i][j] is the b_i-coefficient of phi(b_j)."""

    p: int
    phi: list
    gamma_chars: list
    full_upto: int
    line_upto: int
    line: tuple
    n: int
    labels: tuple = ("e_alpha", "e_beta")
    e: int = 1
    notes: list = field(default_factory=list)

    def t_N(self):
        det = self.phi[0][0] * self.phi[1][1] - self.phi[0][1] * self.phi[1][0]
        return det.valuation()

    def t_H(self):
        return self.full_upto + self.line_upto

    def fil(self, i):
        """Basis of Fil^i as a list of vectors over L_n."""
        one = _as_cyclo(1, self.p, self.n, self.e)
        zero = _as_cyclo(0, self.p, self.n, self.e)
        if i <= self.full_upto:
            return [(one, zero), (zero, one)]
        if i <= self.line_upto:
            return [self.line]
        return []

    def line_t_H(self, v):
        vv = tuple(_as_cyclo(x, self.p, self.n, self.e) for x in v)
        return self.line_upto if _proportional(vv, self.line) else self.full_upto

    def stable_lines(self):
        """phi- and Gamma-stable lines as (vector, eigenvalue); None when every line is stable."""
        A = self.phi
        same_gamma = self.gamma_chars[0].unit_part_equal(self.gamma_chars[1])
        off_lo = A[1][0].is_zero()
        off_hi = A[0][1].is_zero()
        if not (off_lo or off_hi):
            raise DomainError("only triangular phi-matrices are supported")
        lam0, lam1 = A[0][0], A[1][1]
        zero = PadicScalar.zero(self.p, self.e)
        one = PadicScalar.one(self.p, self.e)
        if off_lo and off_hi:
            if (lam0 - lam1).is_zero() and same_gamma:
                return None
            return [((one, zero), lam0), ((zero, one), lam1)]
        if not same_gamma:
            # Gamma-stable lines are the basis lines; keep the phi-stable ones
            out = []
            if off_lo:
                out.append(((one, zero), lam0))
            if off_hi:
                out.append(((zero, one), lam1))
            return out
        out = []
        if off_lo:
            # upper triangular: b0 is an eigenvector; another for lam1 if lam0 != lam1
            out.append(((one, zero), lam0))
            if not (lam0 - lam1).is_zero():
                out.append(((A[0][1] / (lam1 - lam0), one), lam1))
        else:
            out.append(((zero, one), lam1))
            if not (lam0 - lam1).is_zero():
                out.append(((one, A[1][0] / (lam0 - lam1)), lam0))
        return out

    def to_json(self):
        def enc(x):
            return x.to_json()
        return {
            "basis": list(self.labels),
            "phi": [[enc(x) for x in row] for row in self.phi],
            "gamma": [c.to_json() for c in self.gamma_chars],
            "fil": {"full_upto": self.full_upto, "line_upto": self.line_upto,
                    "line": [enc(x) for x in self.line]},
            "level": self.n,
        }


def build_D(pair: CharacterPair, n: int) -> FilteredPhiModule:
    alpha, beta, k = pair.alpha, pair.beta, pair.k
    p, e = pair.p, pair.e
    need = max(alpha.conductor, beta.conductor)
    if n < need:
        raise LevelError(f"level n must be >= max(n(alpha), n(beta)) = {need}")
    zero = PadicScalar.zero(p, e)
    if pair.is_exceptional():
        phi = [[alpha.at_p, -beta.at_p], [zero, beta.at_p]]
        line = (_as_cyclo(0, p, n, e), _as_cyclo(1, p, n, e))
    else:
        phi = [[alpha.at_p, zero], [zero, beta.at_p]]
        G = gauss_sum_std(alpha / beta)
        line = (_as_cyclo(1, p, n, e), _as_cyclo(G, p, n, e))
    D = FilteredPhiModule(p, phi, [alpha, beta], -(k - 1), 0, line, n, ("e_alpha", "e_beta"), e)
    if pair.is_exceptional():
        D.notes.append("exceptional")
    return D


@dataclass
class AdmissibilityReport:
    admissible: bool
    irreducible: bool
    t_N: Fraction
    t_H: int
    witnesses: list
    convention_dependent: bool = False


def weakly_admissible_irreducible(D: FilteredPhiModule) -> AdmissibilityReport:
    tN = D.t_N()
    tH = D.t_H()
    witnesses = []
    admissible = not isinstance(tN, AtLeast) and tN == tH
    if not admissible:
        witnesses.append(("module", tN, tH))
    irreducible = admissible
    lines = D.stable_lines()
    if lines is None:
        # every line is stable: the filtration line is the worst case
        lam = D.phi[0][0]
        lines = [(D.line, lam)]
        for v in ((1, 0), (0, 1)):
            vv = tuple(_as_cyclo(x, D.p, D.n, D.e) for x in v)
            if not _proportional(vv, D.line):
                lines.append((v, lam))
                break
    for v, lam in lines:
        tn = lam.valuation()
        th = D.line_t_H(v)
        if isinstance(tn, AtLeast) or tn < th:
            admissible = False
            irreducible = False
            witnesses.append((v, tn, th))
        elif tn == th:
            irreducible = False
            witnesses.append((v, tn, th))
    return AdmissibilityReport(admissible, irreducible, tN, tH, witnesses, D.notes == ["exceptional"])


# ----------------------------------------------------------------------
# duals and twists

def _inv_transpose(A):
    a, b = A[0]
    c, d = A[1]
    det = a * d - b * c
    inv = [[d / det, -b / det], [-c / det, a / det]]
    return [[inv[0][0], inv[1][0]], [inv[0][1], inv[1][1]]]


def dual_module(D: FilteredPhiModule) -> FilteredPhiModule:
    """Hom(D, L): dual basis, phi* = (A^{-1})^T, Fil^i = (Fil^{1-i})^perp."""
    x, y = D.line
    perp = (y, -x)
    labels = tuple(s + "'" for s in D.labels)
    return FilteredPhiModule(D.p, _inv_transpose(D.phi), [c.inverse() for c in D.gamma_chars],
                             -D.line_upto, -D.full_upto, perp, D.n, labels, D.e)


def tate_twist(D: FilteredPhiModule, m: int) -> FilteredPhiModule:
    """D(m): phi scaled by p^{-m}, filtration shifted down by m."""
    f = PadicScalar.from_rational(Fraction(1, D.p ** m) if m >= 0 else D.p ** (-m), D.p, e=D.e)
    phi = [[x * f for x in row] for row in D.phi]
    return FilteredPhiModule(D.p, phi, list(D.gamma_chars), D.full_upto - m, D.line_upto - m,
                             D.line, D.n, D.labels, D.e)


def change_basis(D: FilteredPhiModule, P, labels) -> FilteredPhiModule:
    """New coordinates = P * old coordinates; P a signed permutation matrix."""
    Pinv = _inv_2x2(P)
    phi = _matmul(_matmul(P, D.phi), Pinv)
    perm = [0 if P[i][0] != 0 else 1 for i in range(2)]
    chars = [D.gamma_chars[perm[0]], D.gamma_chars[perm[1]]]
    v = D.line
    line = (v[0] * P[0][0] + v[1] * P[0][1], v[0] * P[1][0] + v[1] * P[1][1])
    return FilteredPhiModule(D.p, phi, chars, D.full_upto, D.line_upto, line, D.n, labels, D.e)


def _matmul(A, B):
    return [[A[i][0] * B[0][j] + A[i][1] * B[1][j] for j in range(2)] for i in range(2)]


def _inv_2x2(P):
    a, b = P[0]
    c, d = P[1]
    det = a * d - b * c
    return [[d * det, -b * det], [-c * det, a * det]]  # det = +-1


def compare_modules(D1: FilteredPhiModule, D2: FilteredPhiModule):
    """Mismatches between two modules on identified bases (empty when equal)."""
    out = []
    for i in range(2):
        for j in range(2):
            if not (D1.phi[i][j] - D2.phi[i][j]).is_zero():
                out.append(f"phi[{i}][{j}]")
    for i in range(2):
        if not D1.gamma_chars[i].unit_part_equal(D2.gamma_chars[i]):
            out.append(f"gamma[{i}]")
    if (D1.full_upto, D1.line_upto) != (D2.full_upto, D2.line_upto):
        out.append("jumps")
    if not _proportional(D1.line, D2.line):
        out.append("fil_line")
    return out


def dual_pair(pair: CharacterPair) -> CharacterPair:
    """(beta^{-1}|x|^{k-1}, alpha^{-1}|x|^{k-1}) with the same k."""
    k = pair.k
    nk = norm_character(pair.p, pair.e) ** (k - 1)
    return CharacterPair(pair.beta.inverse() * nk, pair.alpha.inverse() * nk, k)


@dataclass
class DualTwistReport:
    dual: FilteredPhiModule
    twisted: FilteredPhiModule
    transported: FilteredPhiModule
    target: FilteredPhiModule
    target_pair: CharacterPair
    mismatches: list


def dual_twist(pair: CharacterPair, n: int) -> DualTwistReport:
    """Hom(D(alpha, beta), L)(k-1) against D(beta^{-1}|x|^{k-1}, alpha^{-1}|x|^{k-1}),
    via -e'_beta -> e_{alpha'} and e'_alpha -> e_{beta'}."""
    D = build_D(pair, n)
    dual = dual_module(D)
    tw = tate_twist(dual, pair.k - 1)
    P = [[0, -1], [1, 0]]
    moved = change_basis(tw, P, ("e_alpha'", "e_beta'"))
    tp = dual_pair(pair)
    target = build_D(tp, n)
    mismatches = compare_modules(moved, target)
    if tp.swapped:
        mismatches.append("pair_order")
    return DualTwistReport(dual, tw, moved, target, tp, mismatches)


# ----------------------------------------------------------------------
# trianguline classification

class TriangulineClass(Enum):
    NG = "NG"
    CRIS = "CRIS"
    ST = "ST"
    NONE = "NONE"


@dataclass(frozen=True)
class TriangulationParams:
    delta1: ContinuousCharacter
    delta2: ContinuousCharacter
    h_bar_infinite: bool

    def u(self):
        return _val_at_p(self.delta1)

    def w(self):
        return self.delta1.weight() - self.delta2.weight()


def _val_at_p(delta):
    v = delta(delta.p)
    if isinstance(v, CycloElement):
        v = v.scalar_part()
    return v.valuation()


def classify_uw(u, w, h_bar_infinite: bool) -> TriangulineClass:
    u = Fraction(u)
    w = Fraction(w)
    w_int_ge1 = w.denominator == 1 and w >= 1
    if not w_int_ge1 and u > 0:
        return TriangulineClass.NG
    if w_int_ge1 and 0 < u < w:
        return TriangulineClass.CRIS if h_bar_infinite else TriangulineClass.ST
    return TriangulineClass.NONE


def classify_triangulation(s: TriangulationParams):
    """(class, u, w)."""
    u1 = _val_at_p(s.delta1)
    u2 = _val_at_p(s.delta2)
    if isinstance(u1, AtLeast) or isinstance(u2, AtLeast):
        raise DomainError("delta(p) indistinguishable from 0")
    if u1 + u2 != 0 or u1 < 0:
        raise DomainError("s is not in S_+: need val(delta1(p)) + val(delta2(p)) = 0, val(delta1(p)) >= 0")
    u, w = u1, s.w()
    return classify_uw(u, w, s.h_bar_infinite), u, w


def violating_module(p: int, k: int, e: int = 1) -> FilteredPhiModule:
    """phi = diag(1/p, p^{-(k-2)}) with filtration line e_alpha: t_N(e_alpha) = -1 < 0 = t_H(e_alpha)."""
    a = PadicScalar.from_rational(Fraction(1, p), p, e=e)
    b = PadicScalar.from_rational(Fraction(1, p ** (k - 2)), p, e=e)
    zero = PadicScalar.zero(p, e)
    triv = SmoothCharacter(p, 0, 1, 1)
    line = (_as_cyclo(1, p, 1, e), _as_cyclo(0, p, 1, e))
    return FilteredPhiModule(p, [[a, zero], [zero, b]], [triv, triv], -(k - 1), 0, line, 1,
                             ("e_alpha", "e_beta"), e)
