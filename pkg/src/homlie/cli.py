"""Command line front end.

Exit status: 0 all checks pass, 1 a mathematical check failed, 2 bad input
or usage.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import List, Sequence

from . import algebrafile, paperverify
from .deform import Deformation, expand_all, untwist, vanishing_constraints, yau_twist
from .errors import InputError, NonlinearConstraint
from .homalg import check_hom_jacobi
from .linsolve import linearize, solve
from .symcore import MultiPoly

EXIT_OK, EXIT_FAILED, EXIT_INPUT = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _resolve(path: str) -> Path:
    """A path on disk, falling back to a bundled fixture of that name."""
    p = Path(path)
    if not p.exists() and p.name == path and path in algebrafile.FIXTURES:
        return algebrafile.fixture_path(path)
    return p


def _load(path: str) -> algebrafile.AlgebraFile:
    return algebrafile.load(_resolve(path))


def _emit(payload: dict, as_json: bool, text: str):
    if as_json:
        sys.stdout.write(json.dumps(payload, indent=2) + "\n")
    else:
        sys.stdout.write(text)


def _first_nonzero(reports, orders):
    for m in orders:
        for rep in reports:
            for k, c in enumerate(rep.order(m).coords, start=1):
                if c:
                    return m, rep.triple, k, c
    return None


def cmd_check(args) -> int:
    af = _load(args.file)
    d = af.to_deformation()
    names = af.basis.names
    if not args.deformed:
        verdict = check_hom_jacobi(d.algebra(0))
        if verdict.holds:
            _emit({"verdict": "holds"}, args.json, "holds: Hom-Jacobi identity on all basis triples\n")
            return EXIT_OK
        triple = ", ".join(names[i - 1] for i in verdict.triple)
        _emit({"verdict": "violated", "triple": list(verdict.triple),
               "coordinate": names[verdict.coordinate - 1], "witness": str(verdict.witness)},
              args.json,
              f"violated: Hom-Jacobi identity on ({triple}), coefficient of "
              f"{names[verdict.coordinate - 1]}\nwitness: {verdict.witness}\n")
        return EXIT_FAILED
    K = d.truncation_order - 1 if args.order is None else args.order
    reports = expand_all(d, "hom_jacobi", K)
    bad = _first_nonzero(reports, range(K + 1))
    if bad is None:
        _emit({"verdict": "holds", "orders": K}, args.json,
              f"holds: Hom-Jacobi expansion vanishes at orders 0..{K}\n")
        return EXIT_OK
    m, triple, k, c = bad
    _emit({"verdict": "violated", "order": m, "triple": list(triple),
           "coordinate": names[k - 1], "witness": str(c)}, args.json,
          f"violated: order t^{m} on ({', '.join(names[i - 1] for i in triple)}), "
          f"coefficient of {names[k - 1]}\nwitness: {c}\n")
    return EXIT_FAILED


def _constraints(d: Deformation, K: int, twist_hom_lie: bool):
    """(label, polys) blocks: Hom-Jacobi orders 0..K, optionally (V, [,]_0, alpha_1)."""
    reports = expand_all(d, "hom_jacobi", K)
    blocks = [(f"order {m}", vanishing_constraints(reports, [m])) for m in range(K + 1)]
    if twist_hom_lie:
        twisted = Deformation.from_algebra(d.algebra(1))
        blocks.insert(0, ("twist (V, [,]_0, alpha_1) Hom-Lie",
                          vanishing_constraints(expand_all(twisted, "hom_jacobi", 0), [0])))
    return blocks


def _split_linear(polys: Sequence[MultiPoly], unknowns):
    linear, nonlinear = [], []
    for p in polys:
        try:
            linearize([p], unknowns)
        except NonlinearConstraint:
            nonlinear.append(p)
        else:
            linear.append(p)
    return linear, nonlinear


def cmd_derive(args) -> int:
    af = _load(args.file)
    d = af.to_deformation()
    K = d.truncation_order - 1 if args.order is None else args.order
    blocks = _constraints(d, K, args.twist_hom_lie)
    all_polys = [p for _, ps in blocks for p in ps]
    unknowns = af.registry.names
    lines: List[str] = []
    payload: dict = {"orders": [], "linear_solution": None, "nonlinear": []}
    if not all_polys:
        lines.append("no constraints")
    for label, ps in blocks:
        payload["orders"].append({"label": label, "constraints": [str(p) for p in ps]})
        if ps:
            lines.append(f"{label}:")
            lines.extend(f"  {p} = 0" for p in ps)
    linear, nonlinear = _split_linear(all_polys, unknowns)
    status = EXIT_OK
    if linear:
        try:
            sol = solve(linearize(linear, unknowns))
        except InputError as exc:
            lines.append(f"linear constraints: {exc}")
            payload["linear_solution"] = {"error": str(exc)}
            status = EXIT_FAILED
        else:
            lines.append("solved (linear constraints):")
            lines.extend(f"  {s}" for s in sol.describe())
            lines.append(f"  free: {', '.join(sol.free_params) or '(none)'}")
            payload["linear_solution"] = {"pivots": sol.describe(), "free": list(sol.free_params)}
    if nonlinear:
        lines.append("nonlinear (not solved):")
        lines.extend(f"  {p} = 0" for p in nonlinear)
        payload["nonlinear"] = [str(p) for p in nonlinear]
    _emit(payload, args.json, "\n".join(lines) + "\n")
    return status


def cmd_untwist(args) -> int:
    af = _load(args.file)
    d = af.to_deformation()
    result = untwist(d)
    if args.retwist:
        result = yau_twist(result, d.map_series())
    out = algebrafile.AlgebraFile.from_deformation(result, af.registry)
    text = algebrafile.dumps(out)
    if args.out is None:
        sys.stdout.write(text)
    else:
        Path(args.out).write_text(text, encoding="utf-8")
        sys.stdout.write(f"wrote {args.out}\n")
    return EXIT_OK


def cmd_verify_paper(args) -> int:
    reports = paperverify.run_all(fault=args.inject_fault)
    sys.stdout.write(paperverify.render_text(reports))
    if args.json:
        Path(args.json).write_text(paperverify.render_json(reports), encoding="utf-8")
    failed = [r for r in reports if not r.overall]
    if failed:
        step = failed[0].first_failure()
        sys.stdout.write(f"first failing step: {failed[0].scenario}: {step.name}\n")
        return EXIT_FAILED
    return EXIT_OK


def cmd_audit(args) -> int:
    if args.samples < 1:
        raise InputError("--samples must be >= 1")
    af = _load(args.file)
    d = af.to_deformation()
    family = None
    if args.family != "none":
        polys = [p for _, ps in _constraints(d, d.truncation_order - 1, args.family == "theorem") for p in ps]
        family = solve(linearize(polys, af.registry.names))
    identity = args.identity.replace("-", "_")
    report = paperverify.random_audit(d, args.samples, args.seed, family, identity)
    _emit({"samples": report.samples, "failed_samples": report.failed_samples,
           "checked": report.checked,
           "first_failure": report.first_failure.describe() if report.first_failure else None},
          args.json, report.describe() + "\n")
    return EXIT_OK if report.passed else EXIT_FAILED


def _default_seed() -> int:
    raw = os.environ.get("HLD_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"HLD_SEED must be an integer, got {raw!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hld", description="Exact Hom-Lie deformation workbench.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("check", help="check the Hom-Jacobi identity")
    p.add_argument("file")
    p.add_argument("--deformed", action="store_true",
                   help="check every t-order of the deformed identity up to --order")
    p.add_argument("--order", type=int, help="highest order for --deformed (default N-1)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("derive", help="print vanishing constraints and their solution")
    p.add_argument("file")
    p.add_argument("--order", type=int, help="highest order (default N-1)")
    p.add_argument("--twist-hom-lie", action="store_true",
                   help="also require (V, [,]_0, alpha_1) to be Hom-Lie")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_derive)

    p = sub.add_parser("untwist", help="write the Lie bracket alpha_t^-1 o [,]_t")
    p.add_argument("file")
    p.add_argument("--out", help="output file (default stdout)")
    p.add_argument("--retwist", action="store_true",
                   help="Yau-twist back with the original maps (round trip)")
    p.set_defaults(func=cmd_untwist)

    p = sub.add_parser("verify-paper", help="run all sl2 deformation scenarios")
    p.add_argument("--json", metavar="PATH", help="also write a JSON report")
    p.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_verify_paper)

    p = sub.add_parser("audit", help="evaluate identities at seeded random rational points")
    p.add_argument("file")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=None, help="default: $HLD_SEED or 0")
    p.add_argument("--family", choices=("none", "deformation", "theorem"), default="none",
                   help="restrict to the solution family of the deformation's linear constraints "
                        "(theorem: also require (V, [,]_0, alpha_1) Hom-Lie)")
    p.add_argument("--identity", choices=("jacobi", "hom-jacobi"), default="jacobi")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_audit)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if getattr(args, "seed", 0) is None:
            args.seed = _default_seed()
        return args.func(args)
    except InputError as exc:
        sys.stderr.write(f"hld: error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
