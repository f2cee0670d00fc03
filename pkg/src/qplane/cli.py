"""Command-line interface.

Exit codes: 0 all checks pass, 1 violations found, 2 usage or parse error,
3 unsupported scale.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import weightmod as wm
from .algebra import bracket, parse_element, render_element, verify_jacobi
from .errors import ParseError, UnsupportedScaleError
from .scalars import parse_cyclotomic
from .solver import (build_system, classify, sample_case3, solve, verify_case3_consequences,
                     verify_det_identity)
from .tables import CTable

EXIT_OK, EXIT_VIOLATIONS, EXIT_USAGE, EXIT_SCALE = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _emit(args, payload: dict, text: str) -> None:
    if args.format == "json":
        print(json.dumps(payload, sort_keys=True, indent=2))
    else:
        print(text)


def _alpha(text: str, N: int):
    parts = [p for p in text.split(",")]
    if len(parts) != 2:
        raise UsageError(f"alpha must be two comma-separated values, got {text!r}")
    return tuple(parse_cyclotomic(p, N) for p in parts)


def _module_spec(args):
    N = args.N
    if args.spec:
        data = json.loads(Path(args.spec).read_text())
        return wm.spec_from_json(data, N)
    if args.a is None:
        raise UsageError("check-module needs --a/--alpha/--b or --spec")
    return wm.ClosedForm(N, args.a, _alpha(args.alpha, N), parse_cyclotomic(args.b, N))


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_bracket(args) -> int:
    u = parse_element(args.left, args.N)
    v = parse_element(args.right, args.N)
    w = bracket(u, v)
    _emit(args, {"N": args.N, "result": render_element(w), "terms": w.to_json()}, render_element(w))
    return EXIT_OK


def cmd_check_algebra(args) -> int:
    K = args.K if args.K is not None else 2
    if K < 1:
        raise UsageError("K must be positive")
    rep = verify_jacobi(args.N, K)
    _emit(args, rep.to_json(),
          f"Jacobi N={args.N} K={K}: {rep.triples_checked} triples, {len(rep.violations)} violations")
    return EXIT_OK if rep.ok else EXIT_VIOLATIONS


def cmd_check_module(args) -> int:
    spec = _module_spec(args)
    N = args.N
    K = args.K if args.K is not None else 2 * N
    if K < 2 * N:
        raise UsageError(f"window radius K must be at least {2 * N} for N={N}")
    window = wm.Window((0, 0), K)
    axioms = wm.verify_module_axiom(spec, window)
    payload = {"spec": wm.spec_to_json(spec), "K": K, "axioms": axioms.to_json()}
    lines = [f"module axiom: {axioms.checks} checks, {len(axioms.violations)} violations"]
    ok = axioms.ok
    generic = spec if isinstance(spec, wm.Generic) else wm.generic_from_closed(spec)
    compat = wm.check_2_7(generic, wm.sample_compatibility(generic, args.samples, seed=args.seed))
    groups = wm.group_by_b(generic)
    payload["compatibility"] = compat.to_json()
    payload["b_groups"] = groups.to_json()
    lines.append(f"compatibility: {compat.samples} samples, {len(compat.failures)} violations")
    lines.append(f"b-grouping: {len(groups.groups)} groups, {len(groups.violations)} violations")
    ok = ok and compat.ok and groups.ok
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK if ok else EXIT_VIOLATIONS


def cmd_check_identities(args) -> int:
    det = verify_det_identity()
    case3 = verify_case3_consequences(sample_case3(args.samples, seed=args.seed, N=args.N))
    payload = {"det_identity": det, "mixed_b": case3.to_json()}
    text = "\n".join([
        f"determinant identity: {'pass' if det else 'FAIL'}",
        f"b dichotomy {[tuple(str(x) for x in s) for s in case3.dichotomy]}: "
        f"{'pass' if case3.dichotomy_ok else 'FAIL'}",
        f"forced vanishing: {case3.forced}/{len(case3.samples)} samples, "
        f"asserted multiple matched on {case3.matches}/{len(case3.samples)}"
        + (" (residue is identically zero)" if case3.residue_identically_zero else ""),
    ])
    _emit(args, payload, text)
    return EXIT_OK if det and case3.ok else EXIT_VIOLATIONS


def _orbit_line(o) -> str:
    pattern = "".join(str(b) for b in o.zero_pattern)
    rep = "{}" if o.representative is None else json.dumps(o.representative.to_json(), sort_keys=True)
    extra = " decomposable" if o.details.get("decomposable") else ""
    via = o.details.get("via") or {}
    if via and (via.get("translate") != "(0,0)" or via.get("swap")):
        extra += f" via translate={via['translate']} swap={via['swap']}"
    return f"{o.label:12s} {pattern}{extra} {rep}"


def _report(args, result, report) -> None:
    payload = report.to_json()
    payload.update({"complete": result.complete, "verified": result.verified,
                    "unverified": result.unverified, "unresolved": result.unresolved,
                    "stats": result.stats})
    lines = [f"N={result.N}: {len(report.orbits)} orbits"
             + ("" if result.complete else " (partial, unverified)")]
    lines += [_orbit_line(o) for o in report.orbits]
    if report.folded:
        lines.append(f"folded {len(report.folded)} coordinate-swap images")
    _emit(args, payload, "\n".join(lines))


def _oracle_check(result) -> bool:
    from .solver.gauge import gauge_equivalent
    from .solver.oracle import oracle_orbits

    oracle = oracle_orbits(result.N)
    reps = [o.representative for o in result.orbits]
    if oracle.parametric or len(oracle.tables) != len(reps) or None in reps:
        return False
    return all(sum(gauge_equivalent(t, r) for r in reps) == 1 for t in oracle.tables)


def cmd_solve(args) -> int:
    result = solve(build_system(args.N))
    oracle_ok = _oracle_check(result) if args.oracle and args.N == 2 else False
    report = classify(result.orbits, fold_symmetric=args.fold_symmetric, oracle_checked=oracle_ok)
    _report(args, result, report)
    if not result.complete and args.N != 2:
        print(f"complete solving is only supported for N = 2 (got N = {args.N})", file=sys.stderr)
        return EXIT_SCALE
    ok = result.verified and (oracle_ok or not args.oracle)
    return EXIT_OK if ok else EXIT_VIOLATIONS


def cmd_classify(args) -> int:
    if not args.input:
        return cmd_solve(args)
    from .solver.search import SolutionOrbit

    data = json.loads(Path(args.input).read_text())
    N = int(data.get("N", args.N))
    tables = [o["representative"] for o in data["orbits"]] if "orbits" in data else [data]
    system = build_system(N)
    orbits = []
    bad = []
    for t in tables:
        if t is None:
            continue
        table = CTable.from_json(t, N)
        if not system.satisfied_by(table):
            bad.append(t)
        orbits.append(SolutionOrbit(table, table.zero_pattern()))
    report = classify(orbits, fold_symmetric=args.fold_symmetric)
    payload = report.to_json()
    payload["unsatisfied"] = bad
    lines = [_orbit_line(o) for o in report.orbits]
    lines += [f"not a solution: {json.dumps(t, sort_keys=True)}" for t in bad]
    _emit(args, payload, "\n".join(lines))
    return EXIT_VIOLATIONS if bad else EXIT_OK


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--N", type=int, default=2, help="order of the root of unity q (default 2)")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--seed", type=int, default=0, help="seed for sampled checks")

    p = argparse.ArgumentParser(prog="qplane", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bracket", parents=[common], help="bracket of two elements")
    b.add_argument("left")
    b.add_argument("right")
    b.set_defaults(func=cmd_bracket)

    a = sub.add_parser("check-algebra", parents=[common], help="Jacobi identity on a box of basis keys")
    a.add_argument("--K", type=int, help="box radius (default 2)")
    a.set_defaults(func=cmd_check_algebra)

    m = sub.add_parser("check-module", parents=[common], help="module axioms on a window")
    m.add_argument("--K", type=int, help="window radius (default 2N)")
    m.add_argument("--a", type=int, choices=(0, 1))
    m.add_argument("--alpha", default="0,0", help='two exact values, e.g. "1/3,1/2"')
    m.add_argument("--b", default="0", help='exact value, e.g. "5/7"')
    m.add_argument("--spec", help="module spec JSON file")
    m.add_argument("--samples", type=int, default=50)
    m.set_defaults(func=cmd_check_module)

    i = sub.add_parser("check-identities", parents=[common], help="determinant and mixed-b identities")
    i.add_argument("--samples", type=int, default=20)
    i.set_defaults(func=cmd_check_identities)

    for name, func, helptext in (("solve", cmd_solve, "solve and classify the residue-table system"),
                                 ("classify", cmd_classify, "classify tables from a JSON file")):
        s = sub.add_parser(name, parents=[common], help=helptext)
        s.add_argument("--fold-symmetric", action="store_true",
                       help="merge orbits with their coordinate-swap images")
        s.add_argument("--oracle", action="store_true",
                       help="cross-check against the brute-force enumerator (N=2)")
        if name == "classify":
            s.add_argument("--input", help="solve output or a single table as JSON")
        s.set_defaults(func=func)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    if args.N < 2:
        print("error: N must be at least 2", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except UnsupportedScaleError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_SCALE
    except (ParseError, UsageError, ValueError, KeyError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
