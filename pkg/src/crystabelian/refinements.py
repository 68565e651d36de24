"""Refinements of a crystabelline V(alpha, beta), the torus characters they
define, and the comparison with exponents of the Jacquet module."""

from __future__ import annotations

from dataclasses import dataclass

from .characters import (CharacterPair, ContinuousCharacter, SmoothCharacter, as_continuous,
                         norm_character, ur, x_power)
from .errors import DomainError
from .padic import PadicScalar

TAGS = ("e_alpha", "e_beta")


@dataclass
class TorusCharacter:
    """eta (x) psi on the diagonal torus."""

    first: ContinuousCharacter
    second: ContinuousCharacter

    def __post_init__(self):
        self.first = as_continuous(self.first)
        self.second = as_continuous(self.second)

    def __eq__(self, other):
        if not isinstance(other, TorusCharacter):
            return NotImplemented
        return self.first == other.first and self.second == other.second

    def twist(self, chi) -> "TorusCharacter":
        """(eta chi) (x) (psi chi), i.e. tensoring with chi o det."""
        return TorusCharacter(self.first * chi, self.second * chi)

    def to_json(self):
        return {"first": self.first.to_json(), "second": self.second.to_json()}


@dataclass
class Refinement:
    """(eta, c, r) with r carried as the label of the eigenvector it picks."""

    eta: ContinuousCharacter
    c: PadicScalar
    r_tag: str

    def __post_init__(self):
        self.eta = as_continuous(self.eta)
        if self.c.is_zero():
            raise DomainError("c must be invertible")
        if self.r_tag not in TAGS:
            raise DomainError(f"r_tag must be one of {TAGS}")

    def rescale(self, unit) -> "Refinement":
        """The equivalent refinement (eta ur(c'^{-1}), c' c, x r)."""
        u = unit if isinstance(unit, PadicScalar) else PadicScalar.from_rational(unit, self.c.p, e=self.c.e)
        if u.valuation() != 0:
            raise DomainError("rescaling factor must be a unit")
        return Refinement(self.eta * ur(u.inverse()), u * self.c, self.r_tag)

    def to_json(self):
        return {"eta": self.eta.to_json(), "c": self.c.to_json(), "r": self.r_tag}


def cyclotomic(p, e=1) -> ContinuousCharacter:
    """x|x|, the character matching the cyclotomic character."""
    return ContinuousCharacter(norm_character(p, e), 1)


def _unit_part(tau: SmoothCharacter) -> SmoothCharacter:
    return SmoothCharacter(tau.p, tau.j, tau.level, PadicScalar.one(tau.p, tau.e))


def det_V(pair: CharacterPair) -> ContinuousCharacter:
    """x^{k-1} alpha beta."""
    return ContinuousCharacter(pair.alpha * pair.beta, pair.k - 1)


def _require_generic(pair):
    if pair.is_exceptional():
        raise DomainError("alpha = beta is excluded")


def refinements_of(pair: CharacterPair) -> list:
    """[R_alpha, R_beta]; the unit part of alpha or beta rides along in eta."""
    _require_generic(pair)
    p, k, e = pair.p, pair.k, pair.e
    chi = cyclotomic(p, e) ** (k - 1)
    pk = PadicScalar.from_rational(p ** (k - 1), p, e=e)
    out = []
    for tau, tag in ((pair.alpha, "e_alpha"), (pair.beta, "e_beta")):
        out.append(Refinement(chi * _unit_part(tau), tau.at_p * pk, tag))
    return out


def sigma(R: Refinement, pair: CharacterPair) -> TorusCharacter:
    """(eta ur(c), det V eta^{-1} ur(c^{-1}))."""
    first = R.eta * ur(R.c)
    second = det_V(pair) * R.eta.inverse() * ur(R.c.inverse())
    return TorusCharacter(first, second)


def refinement_equivalent(R1: Refinement, R2: Refinement) -> bool:
    if R1.r_tag != R2.r_tag:
        return False
    cp = R2.c / R1.c
    if cp.valuation() != 0:
        return False
    return R2.eta == R1.eta * ur(cp.inverse())


def expected_sigmas(pair: CharacterPair) -> list:
    """(x^{k-1} beta, alpha) and (x^{k-1} alpha, beta)."""
    k = pair.k
    return [TorusCharacter(ContinuousCharacter(pair.beta, k - 1), pair.alpha),
            TorusCharacter(ContinuousCharacter(pair.alpha, k - 1), pair.beta)]


def dim_ref(pair: CharacterPair, s: TorusCharacter) -> int:
    """Projective dimension of the refinements with sigma(R) = s (-1 if none)."""
    _require_generic(pair)
    return 0 if any(sigma(R, pair) == s for R in refinements_of(pair)) else -1


def jacquet_exponents(pair: CharacterPair) -> list:
    """x^{k-2} beta (x) alpha |x|^{-1} and x^{k-2} alpha (x) beta |x|^{-1}."""
    _require_generic(pair)
    k = pair.k
    absinv = norm_character(pair.p, pair.e).inverse()
    return [TorusCharacter(ContinuousCharacter(pair.beta, k - 2), pair.alpha * absinv),
            TorusCharacter(ContinuousCharacter(pair.alpha, k - 2), pair.beta * absinv)]


def excluded_exponent(pair: CharacterPair) -> TorusCharacter:
    """x^{-1} alpha (x) x^{k-1} beta |x|^{-1}, which does not occur."""
    absinv = norm_character(pair.p, pair.e).inverse()
    return TorusCharacter(ContinuousCharacter(pair.alpha, -1),
                          ContinuousCharacter(pair.beta * absinv, pair.k - 1))


def dim_exp(pair: CharacterPair, s: TorusCharacter) -> int:
    """Projective dimension of the s-eigenspace of the Jacquet module of
    B(V)_an (x) (x|x| o det), with multiplicity one exponents."""
    chi = cyclotomic(pair.p, pair.e)
    count = sum(1 for t in jacquet_exponents(pair) if t.twist(chi) == s)
    return count - 1


def exponent_tables(pair: CharacterPair):
    """The sigma(R) and the twisted Jacquet exponents, computed once per pair."""
    _require_generic(pair)
    chi = cyclotomic(pair.p, pair.e)
    sigmas = [sigma(R, pair) for R in refinements_of(pair)]
    exps = [t.twist(chi) for t in jacquet_exponents(pair)]
    return sigmas, exps


def _dims(tables, ref_char, exp_char):
    sigmas, exps = tables
    lhs = 0 if any(s == ref_char for s in sigmas) else -1
    rhs = sum(1 for t in exps if t == exp_char) - 1
    return {"lhs": lhs, "rhs": rhs, "equal": lhs == rhs}


def verify_emerton(pair: CharacterPair, eta, psi, tables=None) -> dict:
    """Compare dim Ref^{eta (x) psi}(V) with dim Exp^{eta|x| (x) x psi}."""
    eta, psi = as_continuous(eta), as_continuous(psi)
    tables = exponent_tables(pair) if tables is None else tables
    absval = norm_character(pair.p, pair.e)
    return _dims(tables, TorusCharacter(eta, psi),
                 TorusCharacter(eta * absval, psi * x_power(1, pair.p, pair.e)))


def exponent_sweep(pair: CharacterPair, probes=None) -> list:
    """verify_emerton over all (eta, psi) drawn from ``probes``, as
    (eta, psi, result) triples."""
    probes = probe_characters(pair) if probes is None else [as_continuous(c) for c in probes]
    tables = exponent_tables(pair)
    absval = norm_character(pair.p, pair.e)
    x1 = x_power(1, pair.p, pair.e)
    shifted_eta = [eta * absval for eta in probes]
    shifted_psi = [psi * x1 for psi in probes]
    out = []
    for eta, eta2 in zip(probes, shifted_eta):
        for psi, psi2 in zip(probes, shifted_psi):
            out.append((eta, psi, _dims(tables, TorusCharacter(eta, psi), TorusCharacter(eta2, psi2))))
    return out


def probe_characters(pair: CharacterPair, jmin=-1, jmax=None) -> list:
    """Products of {1, alpha, beta} with x^j for jmin <= j <= jmax."""
    jmax = pair.k if jmax is None else jmax
    e = pair.e
    one = SmoothCharacter(pair.p, 0, 1, PadicScalar.one(pair.p, e))
    out = []
    for base in (one, pair.alpha, pair.beta, pair.alpha * pair.beta):
        for j in range(jmin, jmax + 1):
            out.append(ContinuousCharacter(base, j))
    return out
