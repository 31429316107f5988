"""Command line interface.

Exit status: 0 success, 1 verification failure, 2 parse error, 3 domain error.
"""

from __future__ import annotations

import argparse
import sys
import random
from fractions import Fraction

from .algebra import VarTable, u_poly
from .errors import DomainError, NotAutomorphism, ParseError, PolyautError
from .family import (FamilyParams, FamilyResult, TargetTriangular, assemble_family, build_family,
                     counterexample_report, family_ring, sample_nonzero_rational, target_from_x,
                     verify_family)
from .inverse import formal_inverse, lemma_S, v_sequence, w_basis, w_recursive
from .planemap import PlaneMap, compose_all, decompose
from .textio import format_map_file, format_poly, parse_map_file, parse_poly
from .triangular import check_m_triangular

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_DOMAIN = 0, 1, 2, 3


def _rationals(text):
    try:
        return tuple(Fraction(v.strip()) for v in text.split(","))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected comma-separated rationals, got {text!r}")


def _fmt_seq(seq):
    return "(" + ",".join(str(v) for v in seq) + ")"


def _read(path):
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _load_map(path, laurent_z=False):
    a, f, g = parse_map_file(_read(path), laurent_z=laurent_z)
    if f is None or g is None:
        raise ParseError(f"{path}: a map file needs both F and G", 1, 1)
    return PlaneMap(f, g)


def _generic_u(a, at):
    U = u_poly(VarTable(a))
    if at is not None:
        if len(at) != a + 1:
            raise DomainError(f"--at needs {a + 1} values")
        U = U.evaluate_u(at)
    return U


def cmd_inverse(args, out):
    inv = formal_inverse(_generic_u(args.a, args.at), args.b, args.order)
    for k, c in enumerate(inv.coeffs):
        print(f"Z^{k}: {format_poly(c)}", file=out)
    return EXIT_OK


def cmd_vseq(args, out):
    for k, v in enumerate(v_sequence(_generic_u(args.a, args.at), args.b, args.order)):
        print(f"v_{k}: {format_poly(v)}", file=out)
    return EXIT_OK


def cmd_wpoly(args, out):
    U = u_poly(VarTable(args.a))
    print(format_poly(w_recursive(args.n, args.lam, U)), file=out)
    if args.basis:
        for k, q in w_basis(args.n, args.lam, args.a).table.items():
            print(f"q{_fmt_seq(k)} = {q}", file=out)
    return EXIT_OK


def cmd_lemma(args, out):
    S = lemma_S(args.n, args.k, args.m, args.r, u_poly(VarTable(args.a)), args.b)
    print(format_poly(S), file=out)
    return EXIT_OK if S.is_zero() else EXIT_FAIL


def cmd_check_triangular(args, out):
    a, f, _ = parse_map_file(_read(args.file))
    if f is None:
        raise ParseError(f"{args.file}: missing F line", 1, 1)
    if args.a is not None and args.a != a:
        raise DomainError(f"--a {args.a} does not match A: {a} in {args.file}")
    res = check_m_triangular(f, args.m)
    if res:
        print(f"triangular m={res.m} d={res.d} q={_fmt_seq(res.q)}", file=out)
        return EXIT_OK
    print(f"not triangular: {res.reason.value} at l={res.l}", file=out)
    return EXIT_FAIL


def cmd_polydegree(args, out):
    sigma = _load_map(args.file)
    try:
        fac = decompose(sigma)
    except NotAutomorphism as exc:
        print(f"NotAutomorphism: {exc}", file=sys.stderr)
        return EXIT_FAIL
    print(_fmt_seq(fac.polydegree), file=out)
    return EXIT_OK


def cmd_compose(args, out):
    maps = [_load_map(p, laurent_z=True) for p in args.file]
    a = {m.ring.a for m in maps}
    if len(a) != 1:
        raise DomainError("all maps must declare the same A")
    sigma = compose_all(maps)
    out.write(format_map_file(sigma.f, sigma.g))
    return EXIT_OK


_POLY_FIELDS = ("Ubar", "V", "E")
_MAP_FIELDS = ("tau1", "tau2", "tau3", "sigmaZ")


def format_build(res: FamilyResult) -> str:
    p, tau = res.params, res.target
    lines = ["# degeneration family", f"a={p.a}", f"b={p.b}", f"c={p.c}",
             f"r={tau.r}", f"s={tau.s}", f"t={tau.t}",
             "y=" + ",".join(str(v) for v in tau.y),
             "x=" + ",".join(str(v) for v in res.x)]
    for k, v in enumerate(res.vbar):
        lines.append(f"vbar{k}={format_poly(v)}")
    for name in _POLY_FIELDS:
        lines.append(f"{name}={format_poly(getattr(res, name))}")
    for name in _MAP_FIELDS:
        m = getattr(res, name)
        lines.append(f"{name}.F={format_poly(m.f)}")
        lines.append(f"{name}.G={format_poly(m.g)}")
    return "\n".join(lines) + "\n"


def parse_build(text: str) -> FamilyResult:
    values = {}
    where = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError("expected key=value", lineno, 1)
        key, val = line.split("=", 1)
        values[key.strip()] = val
        where[key.strip()] = (lineno, raw.index("=") + 2)

    def need(key):
        if key not in values:
            raise ParseError(f"missing {key}=", 1, 1)
        return values[key]

    try:
        p = FamilyParams(int(need("a")), int(need("b")), int(need("c")))
        tau = TargetTriangular(Fraction(need("r")), tuple(Fraction(v) for v in need("y").split(",")),
                               Fraction(need("s")), Fraction(need("t")))
        x = tuple(Fraction(v) for v in need("x").split(","))
    except ValueError as exc:
        raise ParseError(str(exc), 1, 1) from None
    ring = family_ring(p.a)

    def poly(key):
        line, col = where.get(key, (1, 1))
        return parse_poly(need(key), ring, line=line, column=col)

    vbar = tuple(poly(f"vbar{k}") for k in range(p.c + 1))
    maps = {name: PlaneMap(poly(f"{name}.F"), poly(f"{name}.G")) for name in _MAP_FIELDS}
    return FamilyResult(p, tau, x, poly("Ubar"), vbar, poly("V"), poly("E"),
                        maps["tau1"], maps["tau2"], maps["tau3"], maps["sigmaZ"])


def cmd_build_family(args, out):
    p = FamilyParams(args.a, args.b, args.c)
    if args.from_x is not None:
        rng = random.Random(args.seed)
        if args.tau:
            base = TargetTriangular.from_map(_load_map(args.tau))
            r, s, t = base.r, base.s, base.t
            tail = base.y[:p.c * p.d]
        else:
            r, s = sample_nonzero_rational(rng), sample_nonzero_rational(rng)
            t = rng.randint(-5, 5)
            tail = [rng.randint(-5, 5) for _ in range(p.c * p.d)]
        tau = target_from_x(p, args.from_x, r, s, t, tail)
        res = assemble_family(p, tau, args.from_x)
    else:
        if not args.tau:
            raise DomainError("build-family needs --tau FILE or --from-x")
        tau = TargetTriangular.from_map(_load_map(args.tau))
        res = build_family(p, tau)
    out.write(format_build(res))
    return EXIT_OK


def cmd_verify_family(args, out):
    res = parse_build(_read(args.input))
    rep = verify_family(res, seed=args.seed)
    print(rep.text(), file=out)
    print(rep.key_values(), file=out)
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_counterexample(args, out):
    rep = counterexample_report(args.a, args.c)
    print(rep.text(), file=out)
    print(rep.key_values(), file=out)
    return EXIT_OK


def build_parser():
    ap = argparse.ArgumentParser(prog="polyaut", description="Exact plane-automorphism calculus.")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("inverse", help="formal inverse of Y + Z U(Y)^b")
    sp.add_argument("--a", type=int, required=True)
    sp.add_argument("--b", type=int, required=True)
    sp.add_argument("--order", type=int, required=True)
    sp.add_argument("--at", type=_rationals, help="specialize u0..ua")
    sp.set_defaults(func=cmd_inverse)

    sp = sub.add_parser("vseq", help="v_0..v_N by the recursion")
    sp.add_argument("--a", type=int, required=True)
    sp.add_argument("--b", type=int, required=True)
    sp.add_argument("--order", type=int, required=True)
    sp.add_argument("--at", type=_rationals, help="specialize u0..ua")
    sp.set_defaults(func=cmd_vseq)

    sp = sub.add_parser("wpoly", help="w_{n,lambda}")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--lambda", dest="lam", type=int, required=True)
    sp.add_argument("--a", type=int, required=True)
    sp.add_argument("--basis", action="store_true", help="also print derivative-basis coefficients")
    sp.set_defaults(func=cmd_wpoly)

    sp = sub.add_parser("lemma", help="alternating sum S(n,k,m,r)")
    for name in ("n", "k", "m", "r", "a", "b"):
        sp.add_argument(f"--{name}", type=int, required=True)
    sp.set_defaults(func=cmd_lemma)

    sp = sub.add_parser("check-triangular", help="test the F polynomial of a file for m-triangularity")
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--a", type=int)
    sp.add_argument("-f", "--file", required=True)
    sp.set_defaults(func=cmd_check_triangular)

    sp = sub.add_parser("polydegree", help="Jung-van der Kulk polydegree of a map")
    sp.add_argument("-f", "--file", required=True)
    sp.set_defaults(func=cmd_polydegree)

    sp = sub.add_parser("compose", help="compose maps, outermost first")
    sp.add_argument("-f", "--file", action="append", required=True)
    sp.set_defaults(func=cmd_compose)

    sp = sub.add_parser("build-family", help="degeneration family for a triangular target")
    sp.add_argument("--a", type=int, required=True)
    sp.add_argument("--b", type=int, required=True)
    sp.add_argument("--c", type=int, required=True)
    sp.add_argument("--tau", help="map file of the target")
    sp.add_argument("--from-x", type=_rationals, help="synthesize the target from x0..xa")
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_build_family)

    sp = sub.add_parser("verify-family", help="verify build-family output")
    sp.add_argument("-i", "--input", default="-")
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_verify_family)

    sp = sub.add_parser("counterexample", help="order comparison for b = 2")
    sp.add_argument("--a", type=int, required=True)
    sp.add_argument("--c", type=int, required=True)
    sp.set_defaults(func=cmd_counterexample)
    return ap


def run(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    try:
        return args.func(args, out)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (DomainError, PolyautError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
