"""Command-line front end: JSON in, JSON out.

Exit codes: 0 success, 2 domain or hypothesis error, 3 precision error,
64 usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import re
import sys
from fractions import Fraction

from . import characters as ch
from .errors import DomainError, PrecisionError
from .padic import PadicScalar, working_precision

EXIT_DOMAIN = 2
EXIT_PRECISION = 3
EXIT_USAGE = 64
DEFAULT_PREC = 20


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_USAGE)


# ----------------------------------------------------------------------
# input parsing

def _load(text):
    """Literal text, '@-' for stdin or '@path' for a file."""
    if text is None:
        return None
    if text.startswith("@"):
        src = text[1:]
        text = sys.stdin.read() if src == "-" else open(src, encoding="utf-8").read()
    return text.strip()


def _maybe_json(text):
    if text and text[0] in "{[":
        try:
            return json.loads(text)
        except json.JSONDecodeError as exc:
            raise UsageError(f"bad JSON: {exc}") from None
    return None


_SCALAR = re.compile(r"^(?P<q>[-+]?\d+(?:/\d+)?)?\s*\*?\s*(?:pi\^\(?(?P<r>[-+]?\d+)\)?)?$")


def parse_scalar(text, p, e=1) -> PadicScalar:
    """'a/b', optionally times 'pi^r' (then e defaults to 2)."""
    obj = _maybe_json(text)
    if isinstance(obj, dict):
        return PadicScalar.from_json(obj)
    m = _SCALAR.match(text.replace(" ", ""))
    if not m or (m.group("q") is None and m.group("r") is None):
        raise UsageError(f"cannot parse scalar {text!r}")
    q = Fraction(m.group("q") or 1)
    if m.group("r") is None:
        return PadicScalar.from_rational(q, p, e=e)
    e = max(e, 2)
    return PadicScalar.from_rational(q, p, e=e) * PadicScalar.uniformizer(p, e) ** int(m.group("r"))


def _split_top(text, sep):
    out, depth, cur = [], 0, ""
    for c in text:
        if c in "([{":
            depth += 1
        elif c in ")]}":
            depth -= 1
        if c == sep and depth == 0:
            out.append(cur)
            cur = ""
        else:
            cur += c
    out.append(cur)
    return [s.strip() for s in out]


def parse_character(text, p, e=1) -> ch.ContinuousCharacter:
    """Factors joined by '*': 'x^n', 'abs', 'ur(c)', 'quadratic', '1',
    'cond:n;gen:j;at_p:c'.  JSON objects are accepted too."""
    obj = _maybe_json(text)
    if isinstance(obj, dict):
        return ch.character_from_json(obj, p, e)
    total = ch.x_power(0, p, e)
    for tok in _split_top(text, "*"):
        total = total * _parse_factor(tok, p, e)
    if total.smooth.e < e:
        total = ch.ContinuousCharacter(ch.SmoothCharacter(p, total.smooth.j, total.smooth.level,
                                                          total.smooth.at_p.embed(e)), total.n)
    return total


def _parse_factor(tok, p, e):
    if tok in ("", "1", "triv"):
        return ch.x_power(0, p, e)
    m = re.fullmatch(r"x\^\(?([-+]?\d+)\)?", tok)
    if m:
        return ch.x_power(int(m.group(1)), p, e)
    if tok == "x":
        return ch.x_power(1, p, e)
    if tok == "abs":
        return ch.ContinuousCharacter(ch.norm_character(p, e))
    if tok == "quadratic":
        return ch.ContinuousCharacter(ch.SmoothCharacter(p, (p - 1) // 2, 1, PadicScalar.one(p, e)))
    m = re.fullmatch(r"ur\((.*)\)", tok)
    if m:
        return ch.ContinuousCharacter(ch.ur(parse_scalar(m.group(1), p, e)))
    if tok.startswith("cond:"):
        fields = {}
        for part in tok.split(";"):
            k, _, v = part.partition(":")
            fields[k.strip()] = v.strip()
        try:
            n = int(fields["cond"])
            j = int(fields.get("gen", 0))
        except (KeyError, ValueError):
            raise UsageError(f"bad conductor spec {tok!r}") from None
        at = parse_scalar(fields.get("at_p", "1"), p, e)
        sm = ch.SmoothCharacter(p, j, max(n, 1), at)
        if sm.conductor != n:
            raise DomainError(f"generator exponent {j} gives conductor {sm.conductor}, not {n}")
        return ch.ContinuousCharacter(sm)
    raise UsageError(f"cannot parse character factor {tok!r}")


def parse_pair(vals, p, e=1) -> ch.CharacterPair:
    a, b, k = vals
    alpha = parse_character(a, p, e)
    beta = parse_character(b, p, e)
    if alpha.n or beta.n:
        raise DomainError("alpha and beta must be smooth")
    try:
        k = int(k)
    except ValueError:
        raise UsageError(f"bad weight {k!r}") from None
    return ch.CharacterPair(alpha.smooth, beta.smooth, k)


def parse_series(text, p, e=1, order=None):
    """A Laurent polynomial or rational function in T, or a series JSON object.
    Rational functions are expanded up to T^order."""
    from .series import TruncatedSeries
    obj = _maybe_json(text)
    if isinstance(obj, dict):
        return TruncatedSeries.from_json(obj)
    import sympy
    T = sympy.Symbol("T")
    try:
        expr = sympy.sympify(text.replace("^", "**"), locals={"T": T}, rational=True)
    except (sympy.SympifyError, SyntaxError, TypeError) as exc:
        raise UsageError(f"cannot parse series {text!r}: {exc}") from None
    if expr.free_symbols - {T}:
        raise UsageError("series may only involve T")
    num, den = sympy.fraction(sympy.together(expr))
    den_poly = sympy.Poly(den, T)
    if len(den_poly.terms()) == 1:
        (shift,), c = den_poly.terms()[0]
        d = {}
        for (i,), coef in sympy.Poly(sympy.expand(num), T).terms():
            d[i - shift] = Fraction(int(coef.p), int(coef.q)) / Fraction(int(c.p), int(c.q))
        return TruncatedSeries.from_dict(p, {i: PadicScalar.from_rational(q, p, e=e) for i, q in d.items()},
                                         None, e)
    if order is None:
        raise UsageError("a rational function needs --order")
    ser = sympy.series(expr, T, 0, order + 1).removeO()
    d = {}
    for term in sympy.Add.make_args(sympy.expand(ser)):
        coef, powr = term.as_coeff_exponent(T)
        coef = sympy.Rational(coef)
        d[int(powr)] = PadicScalar.from_rational(Fraction(int(coef.p), int(coef.q)), p, e=e)
    return TruncatedSeries.from_dict(p, d, order, e)


def parse_atoms(text, p, e=1):
    """'c:w,c:w' with integer points c and rational weights w."""
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        c, _, w = part.partition(":")
        try:
            out.append((int(c), parse_scalar(w or "1", p, e)))
        except ValueError:
            raise UsageError(f"bad atom {part!r}") from None
    return out


def _distribution(args, p, e):
    from .distributions import LocalDistribution
    if args.dist:
        obj = _maybe_json(_load(args.dist))
        if not isinstance(obj, dict):
            raise UsageError("--dist expects a JSON object")
        return LocalDistribution.from_json(obj)
    if args.dirac is None:
        raise UsageError("give --dirac or --dist")
    return LocalDistribution.dirac_sum(parse_atoms(args.dirac, p, e), p, args.level, args.degree, e)


def _bound(text):
    if text is None:
        return None
    return math.inf if text in ("inf", "exact") else Fraction(text)


# ----------------------------------------------------------------------
# output

def _jsonable(x):
    if hasattr(x, "to_json"):
        return x.to_json()
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, float) and math.isinf(x):
        return "inf"
    if hasattr(x, "value") and hasattr(x, "name"):
        return x.value
    if hasattr(x, "bound"):
        return {"at_least": _jsonable(x.bound)}
    return x


def dumps(obj) -> str:
    return json.dumps(_jsonable(obj), sort_keys=True, separators=(",", ":"))


def _sparse_series(f):
    d = f.to_json()
    d["coeffs"] = {k: v for k, v in d["coeffs"].items() if v not in ("0", ["0"] * f.e)}
    return d


# ----------------------------------------------------------------------
# subcommands

def cmd_gauss_sum(args):
    p, e = args.p, args.e
    tau = parse_character(args.char, p, e).smooth
    if args.conductor is not None and tau.conductor != args.conductor:
        raise DomainError(f"character has conductor {tau.conductor}, not {args.conductor}")
    from .cyclo import CycloElement
    m = max(tau.conductor, 0)
    G = ch.gauss_sum(tau, CycloElement.root(p, m, args.eta_exp, tau.e))
    sq = G * G
    out = {"gauss_sum": G, "square": sq, "precision": G.abs_prec}
    if all(c.is_zero() for c in sq.coeffs[1:]):
        out["square_scalar"] = sq.coeffs[0]
    return out


def cmd_intertwine(args):
    from .intertwine import ElementaryFunction, embed_common, intertwine_closed, intertwine_oracle
    pair = parse_pair(args.pair, args.p, args.e)
    h = ElementaryFunction(args.p, Fraction(args.y), args.n, args.a, args.j)
    factor, hh = intertwine_closed(h, pair)
    out = {"factor": factor, "h": hh, "swapped": pair.swapped}
    if args.oracle:
        oracle, _ = intertwine_oracle(h, pair)
        a, b = embed_common(factor, oracle)
        out["oracle"] = oracle
        out["agree"] = a == b
    return out


def cmd_amice(args):
    from .intertwine import amice_any
    mu = _distribution(args, args.p, args.e)
    A = amice_any(mu, args.order)
    return A if hasattr(A, "components") else _sparse_series(A)


def cmd_psi(args):
    from .series import psi
    f = parse_series(args.series, args.p, args.e, args.order)
    return _sparse_series(psi(f, _bound(args.tail_bound)))


def cmd_residue(args):
    from .series import partial_fraction_residue, residue_naive_product_form
    g = parse_series(args.series, args.p, args.e, args.order)
    poles = []
    for part in _split_top(args.poles, ","):
        a, k = part, "1"
        if not part.endswith("}") and ":" in part:
            a, _, k = part.rpartition(":")
        poles.append((parse_scalar(a, args.p, args.e), int(k or 1)))
    fn = residue_naive_product_form if args.naive else partial_fraction_residue
    r = fn(g, poles, _bound(args.tail_bound))
    return {"residue": r, "precision": r.abs_prec}


def cmd_classify(args):
    from .modcris import TriangulationParams, classify_triangulation, classify_uw
    hbar = args.hbar in ("inf", "infinity")
    if args.delta1 is not None or args.delta2 is not None:
        if args.delta1 is None or args.delta2 is None:
            raise UsageError("give both --delta1 and --delta2")
        d1 = parse_character(args.delta1, args.p, args.e)
        d2 = parse_character(args.delta2, args.p, args.e)
        cls, u, w = classify_triangulation(TriangulationParams(d1, d2, hbar))
        return {"class": cls, "u": u, "w": w}
    if args.u is None or args.w is None:
        raise UsageError("give --u and --w, or --delta1 and --delta2")
    return {"class": classify_uw(Fraction(args.u), Fraction(args.w), hbar)}


def cmd_check_admissible(args):
    from .modcris import build_D, weakly_admissible_irreducible
    pair = parse_pair(args.pair, args.p, args.e)
    D = build_D(pair, args.n)
    rep = weakly_admissible_irreducible(D)
    return {"admissible": rep.admissible, "irreducible": rep.irreducible, "t_N": rep.t_N,
            "t_H": rep.t_H, "witnesses": [[list(w[0]) if isinstance(w[0], tuple) else w[0], w[1], w[2]]
                                          for w in rep.witnesses],
            "convention_dependent": rep.convention_dependent, "module": D}


def cmd_dual(args):
    from .modcris import dual_twist
    pair = parse_pair(args.pair, args.p, args.e)
    rep = dual_twist(pair, args.n)
    return {"dual_pair": rep.target_pair, "mismatches": rep.mismatches, "dual": rep.dual,
            "transported": rep.transported, "target": rep.target}


def cmd_refinements(args):
    from . import refinements as rf
    pair = parse_pair(args.pair, args.p, args.e)
    if args.eta is not None or args.psi is not None:
        return cmd_verify_emerton(args)
    Rs = rf.refinements_of(pair)
    return {"refinements": [{"refinement": R, "sigma": rf.sigma(R, pair)} for R in Rs],
            "equivalent": rf.refinement_equivalent(Rs[0], Rs[1]),
            "jacquet_exponents": rf.jacquet_exponents(pair)}


def cmd_verify_emerton(args):
    from . import refinements as rf
    pair = parse_pair(args.pair, args.p, args.e)
    if args.eta is None or args.psi is None:
        raise UsageError("give --eta and --psi")
    eta = parse_character(args.eta, args.p, pair.e)
    psi_ = parse_character(args.psi, args.p, pair.e)
    return rf.verify_emerton(pair, eta, psi_)


def cmd_fil_check(args):
    from .intertwine import fil_condition_check, transfer_distribution
    from .distributions import LocalDistribution
    pair = parse_pair(args.pair, args.p, args.e)
    mu_a = _distribution(args, args.p, args.e)
    if args.beta_dist:
        obj = _maybe_json(_load(args.beta_dist))
        if not isinstance(obj, dict):
            raise UsageError("--beta-dist expects a JSON object")
        mu_b = LocalDistribution.from_json(obj)
    else:
        mu_b = transfer_distribution(mu_a, pair)
    ok, wit = fil_condition_check(mu_a, mu_b, pair, args.m, jobs=args.jobs)
    return {"ok": ok, "witnesses": [list(w) for w in wit], "m": args.m}


# ----------------------------------------------------------------------

def _prec_default():
    raw = os.environ.get("CRYSTABELIAN_PREC")
    if raw is None:
        return DEFAULT_PREC
    try:
        return int(raw)
    except ValueError:
        return DEFAULT_PREC


def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--p", type=int, default=3, help="odd prime (default 3)")
    common.add_argument("--e", type=int, default=1, help="ramification index of L")
    common.add_argument("--prec", type=int, default=None, help="working precision")
    common.add_argument("--jobs", type=int, default=1)

    top = _Parser(prog="crystabelian", description=__doc__.splitlines()[0])
    sub = top.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    s = sub.add_parser("gauss-sum", parents=[common])
    s.add_argument("--char", required=True)
    s.add_argument("--conductor", type=int)
    s.add_argument("--eta-exp", type=int, default=1, help="eta = eps^c at the conductor level")
    s.set_defaults(fn=cmd_gauss_sum)

    def pair_arg(q):
        q.add_argument("--pair", nargs=3, metavar=("ALPHA", "BETA", "K"), required=True)

    s = sub.add_parser("intertwine", parents=[common])
    pair_arg(s)
    s.add_argument("--y", required=True)
    s.add_argument("--n", type=int, default=0)
    s.add_argument("--a", type=int, default=0)
    s.add_argument("--j", type=int, default=0)
    s.add_argument("--oracle", action="store_true")
    s.set_defaults(fn=cmd_intertwine)

    def dist_args(q):
        q.add_argument("--dirac", help="atoms 'c:w,c:w'")
        q.add_argument("--dist", help="distribution JSON (or @file)")
        q.add_argument("--level", type=int, default=0)
        q.add_argument("--degree", type=int, default=4)

    s = sub.add_parser("amice", parents=[common])
    dist_args(s)
    s.add_argument("--order", type=int, default=None)
    s.set_defaults(fn=cmd_amice)

    for name, fn in (("psi", cmd_psi), ("residue", cmd_residue)):
        s = sub.add_parser(name, parents=[common])
        s.add_argument("--series", required=True)
        s.add_argument("--order", type=int, default=None)
        s.add_argument("--tail-bound", default=None)
        if name == "residue":
            s.add_argument("--poles", required=True, help="'a:k,a:k'")
            s.add_argument("--naive", action="store_true")
        s.set_defaults(fn=fn)

    s = sub.add_parser("classify", parents=[common])
    s.add_argument("--u")
    s.add_argument("--w")
    s.add_argument("--delta1")
    s.add_argument("--delta2")
    s.add_argument("--hbar", choices=["inf", "infinity", "finite"], default="inf")
    s.set_defaults(fn=cmd_classify)

    for name, fn in (("check-admissible", cmd_check_admissible), ("dual", cmd_dual)):
        s = sub.add_parser(name, parents=[common])
        pair_arg(s)
        s.add_argument("--n", type=int, default=1, help="level of L_n")
        s.set_defaults(fn=fn)

    for name, fn in (("refinements", cmd_refinements), ("verify-emerton", cmd_verify_emerton)):
        s = sub.add_parser(name, parents=[common])
        pair_arg(s)
        s.add_argument("--eta")
        s.add_argument("--psi")
        s.set_defaults(fn=fn)

    s = sub.add_parser("fil-check", parents=[common])
    pair_arg(s)
    dist_args(s)
    s.add_argument("--beta-dist")
    s.add_argument("--m", type=int, required=True)
    s.set_defaults(fn=cmd_fil_check)
    return top


def run(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.p <= 2 or args.prec is not None and args.prec < 1 or getattr(args, "level", 0) < 0:
        sys.stderr.write("crystabelian: error: need p > 2, prec >= 1, level >= 0\n")
        return EXIT_USAGE
    for name in ("char", "series", "delta1", "delta2", "eta", "psi", "dirac"):
        if getattr(args, name, None) is not None:
            setattr(args, name, _load(getattr(args, name)))
    prec = args.prec if args.prec is not None else _prec_default()
    try:
        with working_precision(prec):
            result = args.fn(args)
            text = dumps(result)
    except UsageError as exc:
        sys.stderr.write(f"crystabelian: error: {exc}\n")
        return EXIT_USAGE
    except PrecisionError as exc:
        sys.stderr.write(f"crystabelian: precision error: {exc}\n")
        return EXIT_PRECISION
    except DomainError as exc:
        sys.stderr.write(f"crystabelian: {type(exc).__name__}: {exc}\n")
        return EXIT_DOMAIN
    out.write(text + "\n")
    return 0


def main():
    sys.exit(run())
