"""Command line front end.

Each invocation reads one JSON document (a path, or ``-`` for stdin) and
prints a deterministic report.  Exit codes: 0 success, 1 an identity check
failed, 2 bad input, 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction
from itertools import combinations
from typing import Any, Callable

from . import arcoracle, covers, resolution, toric
from .errors import BudgetExceeded, MotivicError
from .grothring import render_class
from .ratfunc import render_trational

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3
DEFAULT_SEED = 20240101


class UsageError(Exception):
    pass


# -- documents ------------------------------------------------------------------


def load_document(path: str) -> dict:
    try:
        text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None
    if not isinstance(doc, dict) or "kind" not in doc:
        raise UsageError(f"{path}: expected an object with a 'kind' field")
    return doc


def _need(doc: dict, key: str, kinds: tuple[str, ...]) -> Any:
    if doc.get("kind") not in kinds:
        raise UsageError(f"expected a document of kind {' or '.join(kinds)}, got {doc.get('kind')!r}")
    if key not in doc:
        raise UsageError(f"{doc['kind']} document lacks '{key}'")
    return doc[key]


def _int(x, what: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise UsageError(f"{what} must be an integer, got {x!r}")
    return x


def _rational(x) -> Fraction:
    try:
        return Fraction(x) if isinstance(x, (int, str)) else Fraction(str(x))
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"not a rational number: {x!r}") from None


def resolution_from_doc(doc: dict) -> resolution.ResolutionData:
    kind = doc.get("kind")
    if kind == "monomial":
        exps = _need(doc, "exps", ("monomial",))
        return arcoracle.MonomialFunction(_int(doc.get("d"), "d"), [_int(m, "exponent") for m in exps]).resolution()
    comps = _need(doc, "components", ("resolution",))
    parsed = []
    for i, c in enumerate(comps):
        if not isinstance(c, dict) or "m" not in c:
            raise UsageError(f"component {i + 1} must be an object with 'm' (and optional 'id', 'n')")
        parsed.append(resolution.Component(str(c.get("id", i + 1)), _int(c["m"], "m"), _int(c.get("n", 1), "n")))
    return resolution.ResolutionData(
        _int(doc.get("d"), "d"), tuple(parsed), base=str(doc.get("base", "X")), group_tags=tuple(doc.get("group_tags", ()))
    )


def triangulation_from_doc(doc: dict) -> toric.Triangulation:
    verts = _need(doc, "vertices", ("triangulation",))
    maximal = _need(doc, "maximal", ("triangulation",))
    S = toric.Triangulation(_int(doc.get("n"), "n"), [[_rational(c) for c in v] for v in verts], [frozenset(m) for m in maximal])
    return S


def fan_from_doc(doc: dict) -> tuple[toric.SimplicialFan, list | None]:
    rays = _need(doc, "rays", ("fan",))
    rays = [[_int(x, "ray entry") for x in r] for r in rays]
    if not rays:
        raise UsageError("fan needs at least one ray")
    maximal = doc.get("maximal", [list(range(len(rays)))])
    dim = _int(doc.get("dim", len(rays[0])), "dim")
    cone = doc.get("cone")
    return toric.SimplicialFan(dim, tuple(tuple(r) for r in rays), tuple(frozenset(m) for m in maximal)), cone


def sphere_face_vector(doc: dict) -> list[int]:
    if doc.get("kind") != "sphere":
        raise UsageError(f"expected a sphere document, got {doc.get('kind')!r}")
    if "f" in doc:
        f = [_int(x, "face number") for x in doc["f"]]
        if not f or f[0] != 1:
            raise UsageError("face vector must start with f_-1 = 1")
        return f
    facets = doc.get("facets")
    if not facets:
        raise UsageError("sphere document needs 'f' or 'facets'")
    faces = set()
    for F in facets:
        for r in range(1, len(F) + 1):
            faces.update(frozenset(c) for c in combinations(F, r))
    return toric.face_vector(faces, max(len(F) for F in facets))


def cover_from_doc(doc: dict) -> covers.CoverSpec:
    if doc.get("kind") != "cover":
        raise UsageError(f"expected a cover document, got {doc.get('kind')!r}")
    if "spec" in doc:
        return covers.parse_cover_spec(str(doc["spec"]))
    return covers.CoverSpec(_int(doc.get("d"), "d"), tuple(_int(v, "p_i") for v in doc.get("p", ())))


def arc_task_from_doc(doc: dict):
    kind = doc.get("kind")
    if kind not in ("arc-task", "monomial"):
        raise UsageError(f"expected an arc-task document, got {kind!r}")
    fn = doc.get("function", doc)
    f = arcoracle.MonomialFunction(_int(fn.get("d"), "d"), [_int(m, "exponent") for m in fn.get("exps", ())])
    qs = doc.get("qs", [doc.get("q", 3)])
    n_max = _int(doc.get("n_max", doc.get("n", 3)), "n_max")
    modes = doc.get("modes", list(arcoracle.MODES))
    for m in modes:
        if m not in arcoracle.MODES:
            raise UsageError(f"unknown mode {m!r}")
    return f, [_int(q, "q") for q in qs], n_max, modes


# -- output helpers ---------------------------------------------------------------


def _frac(x: Fraction) -> str:
    return str(x)


def _vec(v) -> str:
    return "(" + ", ".join(_frac(Fraction(x)) for x in v) + ")"


class Out:
    def __init__(self, as_json: bool):
        self.as_json = as_json
        self.lines: list[str] = []
        self.data: dict = {}

    def line(self, text: str) -> None:
        self.lines.append(text)

    def flush(self) -> None:
        if self.as_json:
            print(json.dumps(self.data, indent=2, sort_keys=True))
        else:
            print("\n".join(self.lines))


# -- commands -------------------------------------------------------------------


def cmd_zeta(args, out: Out) -> int:
    data = resolution_from_doc(load_document(args.file))
    z = resolution.equivariant_zeta(data) if args.equivariant else resolution.naive_zeta(data)
    text = render_trational(z)
    out.line(text)
    out.data = {"kind": "equivariant" if args.equivariant else "naive", "zeta": text}
    return EXIT_OK


def cmd_nearby(args, out: Out) -> int:
    data = resolution_from_doc(load_document(args.file))
    text = render_class(resolution.nearby_fiber(data))
    out.line(text)
    out.data = {"nearby_fiber": text}
    return EXIT_OK


def _identity_runner(name: str) -> Callable[[resolution.ResolutionData], resolution.IdentityReport]:
    simple = {
        "selfdual": resolution.check_self_duality,
        "naive-feq": resolution.check_functional_naive,
        "sprime-feq": resolution.check_functional_sprime,
    }
    if name in simple:
        return simple[name]
    if name.startswith("power:"):
        try:
            m = int(name.split(":", 1)[1])
        except ValueError:
            raise UsageError(f"bad power identity {name!r}") from None
        return lambda d: resolution.check_power_rule(d, m)
    raise UsageError(f"unknown identity {name!r}; use selfdual, naive-feq, sprime-feq or power:m")


def cmd_check(args, out: Out) -> int:
    run = _identity_runner(args.identity)
    reports = []
    if args.file:
        reports.append(run(resolution_from_doc(load_document(args.file))))
    if args.random:
        rng = random.Random(args.seed)
        for _ in range(args.random):
            reports.append(run(resolution.random_resolution(rng)))
    if not reports:
        raise UsageError("give an input file or --random N")
    if len(reports) == 1:
        out.line(reports[0].render())
        out.data = reports[0].to_dict()
    else:
        failed = [r for r in reports if not r.passed]
        out.line(f"{args.identity}: {len(reports) - len(failed)}/{len(reports)} passed (seed {args.seed})")
        for r in failed:
            out.line(r.render())
        out.data = {"identity": args.identity, "seed": args.seed, "total": len(reports), "failed": [r.to_dict() for r in failed]}
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def _yes(b: bool) -> str:
    return "yes" if b else "no"


def cmd_toric(args, out: Out) -> int:
    sub = args.sub
    doc = load_document(args.file)
    if sub == "ds":
        f = sphere_face_vector(doc)
        h, sym = toric.dehn_sommerville(f)
        out.line(f"h = {','.join(map(str, h))} symmetric: {_yes(sym)}")
        out.data = {"f": f, "h": h, "symmetric": sym}
        return EXIT_OK if sym else EXIT_FAIL
    if sub == "hpoly" or sub.startswith("gpoly:"):
        S = triangulation_from_doc(doc)
        S.validate(random.Random(args.seed))
        if sub == "hpoly":
            h = S.h_poly()
            ok = toric.check_h_palindromy(S)
            out.line(f"h = {toric.poly_text(h)}")
            out.line(f"palindromic: {_yes(ok)}")
            out.data = {"h": toric.poly_text(h), "palindromic": ok}
        else:
            try:
                tau = [int(v) for v in sub.split(":", 1)[1].split(",")]
            except ValueError:
                raise UsageError(f"bad simplex in {sub!r}") from None
            g = S.g_poly(tau)
            ok = toric.check_g_palindromy(S, tau)
            out.line(f"g = {toric.poly_text(g)}")
            out.line(f"palindromic: {_yes(ok)}")
            out.data = {"tau": tau, "g": toric.poly_text(g), "palindromic": ok}
        return EXIT_OK if ok else EXIT_FAIL
    fan, cone = fan_from_doc(doc)
    if sub == "resolve":
        refined = toric.stellar_refine(fan, args.strategy)
        out.line(f"rays: {' '.join(_vec(r) for r in refined.rays)}")
        for m in refined.maximal:
            out.line(f"cone {sorted(m)} multiplicity {refined.multiplicity(m)}")
        out.data = {"rays": [list(r) for r in refined.rays], "cones": [sorted(m) for m in refined.maximal]}
        return EXIT_OK
    if sub == "ppoly":
        if cone is not None:
            base_rays, refined = [[int(x) for x in r] for r in cone], fan
        else:
            if len(fan.maximal) != 1:
                raise UsageError("ppoly needs a single cone or a refinement with a 'cone' field")
            base_rays, refined = list(fan.rays), toric.stellar_refine(fan, args.strategy)
        k = len(base_rays)
        ok_all = True
        rows = []
        for r in range(1, k + 1):
            for face in combinations(range(k), r):
                p = toric.p_poly(refined, base_rays, face)
                ok = toric.check_p_palindromy(p, len(face))
                ok_all &= ok
                out.line(f"p{list(face)} = {toric.poly_text(p)}  palindromic: {_yes(ok)}")
                rows.append({"face": list(face), "p": toric.poly_text(p), "palindromic": ok})
        out.data = {"faces": rows}
        return EXIT_OK if ok_all else EXIT_FAIL
    if sub == "dual":
        if len(fan.maximal) != 1:
            raise UsageError("dual needs a single cone")
        reports = [toric.check_toric_duality(fan, s) for s in ("first", "last")]
        for r in reports:
            out.line(f"{r.name} [{r.details['refinement']}]: {'PASS' if r.passed else 'FAIL'}  {r.lhs}")
        same = reports[0].passed == reports[1].passed
        out.line(f"verdicts agree: {_yes(same)}")
        out.data = {"reports": [r.to_dict() for r in reports], "agree": same}
        return EXIT_OK if all(r.passed for r in reports) and same else EXIT_FAIL
    raise UsageError(f"unknown toric subcommand {sub!r}")


def cmd_cover(args, out: Out) -> int:
    spec = cover_from_doc(load_document(args.file))
    sub = args.sub
    M = covers.lattice_of_cover(spec)
    if sub == "lattice":
        for row in M.rational_basis():
            out.line(_vec(row))
        out.line(f"index over Z^k: {M.index_over_integers()}")
        out.data = {"spec": str(spec), "basis": [[str(x) for x in row] for row in M.rational_basis()], "index": str(M.index_over_integers())}
        return EXIT_OK
    if sub.startswith("restrict:"):
        try:
            axis = int(sub.split(":", 1)[1])
        except ValueError:
            raise UsageError(f"bad axis in {sub!r}") from None
        R = covers.restrict_lattice(M, axis)
        red = covers.reduced_restriction_spec(spec, axis)
        expect = covers.lattice_of_cover(red) if red.k else covers.LatticeModel(1, ())
        act = covers.restriction_action(spec, axis)
        same = R == expect
        out.line(f"restricted basis: {' '.join(_vec(r) for r in R.rational_basis()) or '(rank 0)'}")
        out.line(f"reduced spec: {red}")
        out.line(f"matches reduced lattice: {_yes(same)}")
        out.line(f"action: mu_{act.d} -> mu_{act.d_prime}, zeta -> zeta^{act.exponent}")
        out.data = {"restricted": [[str(x) for x in r] for r in R.rational_basis()], "reduced": str(red), "matches": same, "exponent": act.exponent}
        return EXIT_OK if same else EXIT_FAIL
    if sub == "components":
        c = covers.component_decomposition(spec)
        out.line(f"c = {c.c}, e = {c.e}, reduced = {c.reduced}")
        out.data = {"c": c.c, "e": c.e, "reduced": str(c.reduced)}
        return EXIT_OK
    if sub == "hilbert":
        hb = covers.hilbert_basis(M)
        for v in hb:
            out.line(_vec(v))
        out.data = {"hilbert_basis": [[str(x) for x in v] for v in hb]}
        return EXIT_OK
    if sub == "complete" or sub.startswith("complete:"):
        if ":" in sub:
            try:
                alpha = [int(v) for v in sub.split(":", 1)[1].split(",")]
            except ValueError:
                raise UsageError(f"bad vector in {sub!r}") from None
        else:
            alpha = list(covers.gcd_cover_order(spec.p, range(spec.k)).alpha)
        U = covers.unimodular_completion(alpha)
        for row in U:
            out.line(" ".join(str(v) for v in row))
        out.line(f"det = {covers.det(U)}")
        out.data = {"alpha": alpha, "matrix": U, "det": int(covers.det(U))}
        return EXIT_OK
    raise UsageError(f"unknown cover subcommand {sub!r}")


def cmd_arcs(args, out: Out) -> int:
    f, qs, n_max, modes = arc_task_from_doc(load_document(args.file))
    reports = [arcoracle.compare_zeta(q, n_max, f, modes=modes) for q in qs]
    for r in reports:
        out.line(r.render())
    out.data = {"reports": [r.to_dict() for r in reports]}
    if not any(r.checked for r in reports):
        raise BudgetExceeded("every requested arc count exceeds the budget")
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def cmd_twist(args, out: Out) -> int:
    try:
        g = [int(v) for v in args.g.split(",")]
    except ValueError:
        raise UsageError(f"bad coefficient list {args.g!r}") from None
    reports = [arcoracle.unit_twist_experiment(q, g) for q in args.q] if args.q else arcoracle.unit_twist_sweep(g)
    for r in reports:
        out.line(r.render())
    out.line(f"difference detected: {_yes(any(r.differ for r in reports))}")
    out.data = {"reports": [r.to_dict() for r in reports]}
    return EXIT_OK


# -- parser ---------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_INPUT)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED, help="seed for randomized checks")

    p = _Parser(prog="motzeta", description="Motivic zeta functions, nearby fibers and their identities.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    z = sub.add_parser("zeta", parents=[common], help="naive or equivariant zeta function")
    z.add_argument("file")
    g = z.add_mutually_exclusive_group()
    g.add_argument("--naive", action="store_true", default=True)
    g.add_argument("--equivariant", action="store_true")
    z.set_defaults(func=cmd_zeta)

    n = sub.add_parser("nearby", parents=[common], help="motivic nearby fiber")
    n.add_argument("file")
    n.set_defaults(func=cmd_nearby)

    c = sub.add_parser("check", parents=[common], help="verify an identity")
    c.add_argument("file", nargs="?")
    c.add_argument("identity", help="selfdual, naive-feq, sprime-feq or power:m")
    c.add_argument("--random", type=int, default=0, metavar="N", help="also run on N random resolutions")
    c.set_defaults(func=cmd_check)

    t = sub.add_parser("toric", parents=[common], help="triangulation and fan computations")
    t.add_argument("file")
    t.add_argument("sub", help="hpoly, gpoly:i,j,..., ds, ppoly, resolve or dual")
    t.add_argument("--strategy", choices=("first", "last"), default="first")
    t.set_defaults(func=cmd_toric)

    v = sub.add_parser("cover", parents=[common], help="cyclic cover lattices")
    v.add_argument("file")
    v.add_argument("sub", help="lattice, restrict:axis, components, hilbert or complete[:a1,a2,...]")
    v.set_defaults(func=cmd_cover)

    a = sub.add_parser("arcs", parents=[common], help="compare zeta coefficients with arc counts")
    a.add_argument("file")
    a.set_defaults(func=cmd_arcs)

    w = sub.add_parser("twist", parents=[common], help="unit twist point counts for t^2 = g(x)")
    w.add_argument("--g", required=True, help="coefficients of g, leading first, e.g. 1,0,-1,0")
    w.add_argument("--q", type=int, action="append", help="field size (repeatable); default sweeps 3,5,7,9")
    w.set_defaults(func=cmd_twist)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = Out(args.json)
    try:
        code = args.func(args, out)
    except BudgetExceeded as exc:
        print(f"motzeta: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (UsageError, MotivicError, ValueError) as exc:
        print(f"motzeta: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    out.flush()
    return code


if __name__ == "__main__":
    sys.exit(main())
