"""Command-line front end.

Every command prints deterministic JSON (CSV for Gauss tables).  Exit status
is 0 on success, 2 when a verification fails and 1 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import acceptance
from .cyclotomic import Cyclotomic
from .doublecoset import recursion_check
from .errors import WeilHeckeError
from .expansions import FourierExpansion, scalar_fixture, theta_series
from .gauss import (LEGENDRE, TRIVIAL, barnard_quotient_check, gauss_table, twist_reduction_check)
from .hecke import eigenvalue_extract, gstar_adjointness, hecke, kohnen_bound_check, torsion_sum_check
from .kloosterman import H_c, KloostermanQuery, kloosterman_zeta
from .lseries import (certified_eigenvalues, euler_factor_bad, euler_factor_good, hn_identity_check,
                      product_vs_series, series_coeffs)
from .arith import primerange
from .quadratic import FiniteQuadraticModule, Lattice, discriminant_form, is_anisotropic
from .weil import MetaplecticElement, WeilRep, is_unitary, mat_eq, mat_mul

EXIT_OK, EXIT_USAGE, EXIT_VERIFY = 0, 1, 2


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# parsing helpers


def _json_arg(text: str, what: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{what}: not valid JSON ({exc.msg})") from None


def _lattice(text: str) -> Lattice:
    return Lattice(_json_arg(text, "--gram"))


def _elem(text: str | None, rank: int) -> tuple:
    if text is None or text.strip() == "":
        return tuple(0 for _ in range(rank))
    val = _json_arg(text if text.strip().startswith("[") else f"[{text}]", "element")
    if len(val) != rank:
        raise UsageError(f"element {val} needs {rank} coordinates")
    return tuple(int(v) for v in val)


def _frac(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"not a rational number: {text!r}") from None


def _cx(c: Cyclotomic) -> dict:
    z = c.to_complex()
    return {"exact": str(c), "float": [z.real, z.imag]}


def _frac_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _read_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _emit(payload, out: str | None = None):
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _module(args) -> FiniteQuadraticModule:
    if getattr(args, "gram", None):
        return discriminant_form(_lattice(args.gram))
    if getattr(args, "module", None):
        data = _read_json(args.module)
        if "gram" in data:
            return discriminant_form(Lattice(data["gram"]))
        return FiniteQuadraticModule.from_json(data)
    raise UsageError("give --gram or --module")


def _expansion(args) -> FourierExpansion:
    if getattr(args, "fixture", None):
        if args.nmax is None:
            raise UsageError("--fixture needs --nmax")
        return scalar_fixture(args.fixture, int(args.nmax))
    if getattr(args, "inp", None):
        return FourierExpansion.from_json(_read_json(args.inp))
    raise UsageError("give --in FILE or --fixture NAME")


def _lattice_of(f: FourierExpansion, args) -> Lattice | None:
    if getattr(args, "gram", None):
        return _lattice(args.gram)
    return getattr(f.module, "lattice", None)


def module_payload(D: FiniteQuadraticModule) -> dict:
    out = D.to_json()
    out.update({"sig8": D.sig8, "level": D.level, "size": len(D)})
    lattice = getattr(D, "lattice", None)
    if lattice is not None:
        out["gram"] = [list(r) for r in lattice.gram]
    return out


# ---------------------------------------------------------------------------
# commands


def cmd_df_build(args):
    _emit(module_payload(_module(args)), args.out)
    return EXIT_OK


def cmd_df_info(args):
    D = _module(args)
    info = module_payload(D)
    info.pop("q")
    info["exponent"] = D.exponent
    info["anisotropic"] = is_anisotropic(D)
    info["gauss_sum"] = _cx(D.gauss(1))
    info["isotropic_elements"] = [list(x) for x in D.isotropic_elements()]
    _emit(info, args.out)
    return EXIT_OK


def _element(args) -> MetaplecticElement:
    m = _json_arg(args.matrix, "--matrix")
    try:
        (a, b), (c, d) = m
    except (TypeError, ValueError):
        raise UsageError("--matrix must be [[a,b],[c,d]]") from None
    return MetaplecticElement(int(a), int(b), int(c), int(d), args.branch)


def cmd_weil_dump(args):
    D = _module(args)
    W = WeilRep(D)
    g = _element(args)
    M = W.rho(g, args.mode)
    _emit({"element": g.to_json(), "basis": [list(x) for x in D.elements],
           "rho": [[str(c) for c in row] for row in M],
           "float": [[[c.to_complex().real, c.to_complex().imag] for c in row] for row in M]}, args.out)
    return EXIT_OK


def cmd_weil_check(args):
    import random
    D = _module(args)
    W = WeilRep(D)
    S, T, Z = W.rho_S(), W.rho_T(), W.rho_Z()
    ST = mat_mul(S, T)
    rng = random.Random(args.seed)
    words = True
    for _ in range(args.samples):
        a, b, c, d = acceptance.random_sl2(rng, args.bound)
        g = MetaplecticElement(a, b, c, d, rng.choice((1, -1)))
        words = words and mat_eq(W.rho(g, "floor"), W.rho(g, "round"))
    res = {"S2_eq_Z": mat_eq(mat_mul(S, S), Z), "ST3_eq_Z": mat_eq(mat_mul(ST, mat_mul(ST, ST)), Z),
           "unitary": is_unitary(S) and is_unitary(T), "word_independent": words,
           "samples": args.samples}
    _emit(res, args.out)
    return EXIT_OK if all(v for k, v in res.items() if k != "samples") else EXIT_VERIFY


def cmd_gauss_table(args):
    chi = {"trivial": TRIVIAL, "legendre": LEGENDRE}[args.chi]
    text = gauss_table(args.p, args.n, chi, args.mode)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_gauss_check(args):
    L = _lattice(args.gram)
    res = {}
    ok = True
    if discriminant_form(L).level % args.p:
        b = barnard_quotient_check(L, args.p)
        res["quotient"] = {k: _cx(v) if isinstance(v, Cyclotomic) else v for k, v in b.items()}
        ok = ok and b["ok"]
    for h in range(1, args.p):
        t = twist_reduction_check(L, args.p, args.n, h)
        res[f"twist_h{h}"] = t["ok"]
        ok = ok and t["ok"]
    _emit(res, args.out)
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_theta(args):
    L = _lattice(args.gram)
    f = theta_series(L, _frac(args.nmax))
    _emit(f.to_json(), args.out)
    return EXIT_OK


def cmd_hecke_apply(args):
    f = _expansion(args)
    kw = {"phase_variant": args.phase_variant} if args.formula == "bad" else {}
    g = hecke(f, args.p, args.formula, _lattice_of(f, args), **kw)
    _emit(g.to_json(), args.out)
    return EXIT_OK


def cmd_hecke_eigen(args):
    f = _expansion(args)
    g = hecke(f, args.p, args.formula, _lattice_of(f, args))
    rep = eigenvalue_extract(f, g)
    out = rep.to_json()
    out["kohnen"] = kohnen_bound_check(rep.eigenvalue, args.p, f.k2, len(f.module.torsion(args.p)))
    _emit(out, args.out)
    return EXIT_OK if rep.certified and out["kohnen"]["strict"] else EXIT_VERIFY


def cmd_hecke_recursion(args):
    res = recursion_check(args.p, args.r)
    _emit({"p": args.p, "r": args.r, **res}, args.out)
    return EXIT_OK if all(res.values()) else EXIT_VERIFY


def cmd_hecke_adjoint(args):
    D = _module(args)
    res = {"adjoint": gstar_adjointness(D, args.m), "torsion_sum": torsion_sum_check(D, args.m)}
    _emit(res, args.out)
    return EXIT_OK if all(res.values()) else EXIT_VERIFY


def _lam_t(f, args):
    lam = _elem(args.lam, len(f.module.orders))
    return lam, _frac(args.t)


def _factor(f, args, lam, t):
    L = _lattice_of(f, args)
    formula = "even" if f.module.sig8 % 2 == 0 else "odd"
    if f.module.level % args.p:
        lp = eigenvalue_extract(f, hecke(f, args.p, formula)).eigenvalue
        return lp, euler_factor_good(f, args.p, lam, t, lp)
    lp = eigenvalue_extract(f, hecke(f, args.p, "bad", L)).eigenvalue
    return lp, euler_factor_bad(f, L, args.p, lam, t, lp, x2_sign=args.x2_sign)


def _series_json(S) -> list:
    return [_cx(c) for c in S.coeffs]


def cmd_lseries_coeffs(args):
    f = _expansion(args)
    lam, t = _lam_t(f, args)
    rows = series_coeffs(f, lam, t, args.level_n, args.ncut)
    _emit({"lam": list(lam), "t": _frac_str(t), "coeffs": [{"n": n, **_cx(a)} for n, a in rows]}, args.out)
    return EXIT_OK


def cmd_lseries_factor(args):
    f = _expansion(args)
    lam, t = _lam_t(f, args)
    lp, (R, P) = _factor(f, args, lam, t)
    _emit({"p": args.p, "eigenvalue": _cx(lp), "R": _series_json(R), "P": _series_json(P)}, args.out)
    return EXIT_OK


def cmd_lseries_identity(args):
    f = _expansion(args)
    lam, t = _lam_t(f, args)
    lp, (R, P) = _factor(f, args, lam, t)
    res = hn_identity_check(f, args.p, lam, t, args.n, args.order, R, P)
    _emit({"p": args.p, "order": args.order, "ok": res["ok"], "H": _series_json(res["H"]),
           "lhs": _series_json(res["lhs"]), "rhs": _series_json(res["rhs"])}, args.out)
    return EXIT_OK if res["ok"] else EXIT_VERIFY


def cmd_lseries_compare(args):
    f = _expansion(args)
    lam, t = _lam_t(f, args)
    formula = "even" if f.module.sig8 % 2 == 0 else "odd"
    primes = [p for p in primerange(2, args.pmax + 1) if f.module.level % p]
    eig = certified_eigenvalues(f, primes, formula)
    rep = product_vs_series(f, lam, t, _frac(args.s), args.pmax, args.ncut, eig)
    _emit(rep.to_json(), args.out)
    return EXIT_OK if rep.certified and rep.gap <= args.tol else EXIT_VERIFY


def cmd_kloosterman(args):
    D = _module(args)
    W = WeilRep(D)
    r = len(D.orders)
    lam, mu = _elem(args.lam, r), _elem(args.mu, r)
    if args.zeta:
        if "," in args.s:
            re, im = args.s.split(",", 1)
            s = complex(float(_frac(re)), float(_frac(im)))
        else:
            s = _frac(args.s)
        res = kloosterman_zeta(W, lam, mu, _frac(args.n), args.k2, s, args.ccut, args.weighting)
        res["value"] = [res["value"].real, res["value"].imag]
        _emit(res, args.out)
        return EXIT_OK
    if args.c is None:
        raise UsageError("--c is required unless --zeta is given")
    q = KloostermanQuery(D, lam, _frac(args.m), mu, _frac(args.n), args.c, args.k2)
    _emit({"c": args.c, "lam": list(lam), "mu": list(mu), "m": _frac_str(q.m), "n": _frac_str(q.n),
           "k2": args.k2, "value": _cx(H_c(W, q))}, args.out)
    return EXIT_OK


def cmd_suite_acceptance(args):
    numbers = [int(x) for x in args.only.split(",")] if args.only else None
    results = acceptance.run_all(numbers)
    for r in results:
        print(r.line(), file=sys.stderr)
    if args.out:
        _emit([r.to_json() for r in results], args.out)
    return EXIT_OK if all(r.ok for r in results) else EXIT_VERIFY


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="weilhecke", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(group, name, fn, help_text):
        p = group.add_parser(name, help=help_text)
        p.set_defaults(fn=fn)
        p.add_argument("--out", help="write output here instead of stdout")
        return p

    def module_args(p):
        p.add_argument("--gram", help='Gram matrix as JSON, e.g. "[[2,1],[1,2]]"')
        p.add_argument("--module", help="module JSON file (from df build)")

    def expansion_args(p):
        p.add_argument("--in", dest="inp", help="expansion JSON file")
        p.add_argument("--fixture", choices=["delta24"], help="built-in scalar fixture")
        p.add_argument("--nmax", help="truncation for --fixture")
        p.add_argument("--gram", help="lattice for the direct and bad-prime routes")

    df = sub.add_parser("df", help="discriminant forms").add_subparsers(dest="sub", required=True)
    module_args(add(df, "build", cmd_df_build, "build a module from a Gram matrix"))
    module_args(add(df, "info", cmd_df_info, "invariants of a module"))

    weil = sub.add_parser("weil", help="Weil representation").add_subparsers(dest="sub", required=True)
    p = add(weil, "dump", cmd_weil_dump, "matrix of rho(g)")
    module_args(p)
    p.add_argument("--matrix", required=True, help="[[a,b],[c,d]] in SL2(Z)")
    p.add_argument("--branch", type=int, choices=[1, -1], default=1)
    p.add_argument("--mode", choices=["floor", "round"], default="floor")
    p = add(weil, "check", cmd_weil_check, "relations, unitarity and word independence")
    module_args(p)
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--bound", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)

    gauss = sub.add_parser("gauss", help="Gauss sums").add_subparsers(dest="sub", required=True)
    p = add(gauss, "table", cmd_gauss_table, "CSV table of character Gauss sums")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--chi", choices=["trivial", "legendre"], default="trivial")
    p.add_argument("--mode", choices=["closed", "brute"], default="closed")
    p = add(gauss, "check", cmd_gauss_check, "twist reduction and quotient identity for a lattice")
    p.add_argument("--gram", required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--n", type=int, default=1)

    p = add(sub, "theta", cmd_theta, "theta series of a positive definite lattice")
    p.add_argument("--gram", required=True)
    p.add_argument("--nmax", required=True)

    hk = sub.add_parser("hecke", help="Hecke operators").add_subparsers(dest="sub", required=True)
    p = add(hk, "apply", cmd_hecke_apply, "apply T(p^2)")
    expansion_args(p)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--formula", choices=["direct", "even", "odd", "bad"], default="direct")
    p.add_argument("--phase-variant", choices=["q_of_p_ell", "p_times_q_ell"], default="q_of_p_ell")
    p = add(hk, "eigen", cmd_hecke_eigen, "eigenvalue with certificate and Kohnen bound")
    expansion_args(p)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--formula", choices=["direct", "even", "odd", "bad"], default="direct")
    p = add(hk, "recursion", cmd_hecke_recursion, "double coset recursions")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p = add(hk, "adjoint", cmd_hecke_adjoint, "adjointness of g(m^2) and g*(m^2)")
    module_args(p)
    p.add_argument("--m", type=int, required=True)

    ls = sub.add_parser("lseries", help="L-series").add_subparsers(dest="sub", required=True)
    for name, fn, text in (("coeffs", cmd_lseries_coeffs, "Dirichlet coefficients a(n lam, n^2 t)"),
                           ("factor", cmd_lseries_factor, "Euler factor R/P at p"),
                           ("identity", cmd_lseries_identity, "check H_n P = a R through x^order"),
                           ("compare", cmd_lseries_compare, "truncated product against the series")):
        p = add(ls, name, fn, text)
        expansion_args(p)
        p.add_argument("--lam", help="element as JSON list or comma separated")
        p.add_argument("--t", default="1")
        if name == "coeffs":
            p.add_argument("--ncut", type=int, default=10)
            p.add_argument("--level-n", type=int, default=1, help="keep only n coprime to this")
        if name in ("factor", "identity"):
            p.add_argument("--p", type=int, required=True)
            p.add_argument("--x2-sign", type=int, choices=[1, -1], default=-1)
        if name == "identity":
            p.add_argument("--n", type=int, default=1)
            p.add_argument("--order", type=int, default=2)
        if name == "compare":
            p.add_argument("--s", required=True)
            p.add_argument("--pmax", type=int, default=100)
            p.add_argument("--ncut", type=int, default=500)
            p.add_argument("--tol", type=float, default=1e-3)

    p = add(sub, "kloosterman", cmd_kloosterman, "generalized Kloosterman sum H_c or its zeta series")
    module_args(p)
    p.add_argument("--c", type=int)
    p.add_argument("--lam")
    p.add_argument("--mu")
    p.add_argument("--m", default="0")
    p.add_argument("--n", default="0")
    p.add_argument("--k2", type=int, default=0, help="twice the weight")
    p.add_argument("--zeta", action="store_true", help="evaluate the truncated zeta series instead")
    p.add_argument("--s", default="2", help='real rational, or "re,im"')
    p.add_argument("--ccut", type=int, default=10)
    p.add_argument("--weighting", choices=["abs_c", "abs_2c"], default="abs_c")

    suite = sub.add_parser("suite", help="verification suites").add_subparsers(dest="sub", required=True)
    p = add(suite, "acceptance", cmd_suite_acceptance, "run the acceptance checks")
    p.add_argument("--only", help="comma separated check numbers")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.fn(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except WeilHeckeError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
