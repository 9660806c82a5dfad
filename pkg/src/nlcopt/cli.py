"""Command-line entry point: ``nlcopt {solve,fibers,support,verify,gen}``.

Exit codes:
  0  success
  1  other error
  2  command-line usage error (argparse)
  3  instance parse error or invariant violation
  4  infeasible / empty feasible set
  5  size cap exceeded (grid, support, enumeration)
  6  oracle mismatch under --verify or in ``verify``
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .fibers import EmptyFiberError, FiberError, image_vertices
from .harness import EmptyFeasibleSetError, HarnessError, KINDS, gen_instance
from .io import (InvariantError, ParseError, dumps, finalize_report, instance_digest,
                 parse_instance, parse_vector, write_instance)
from .lp import CutBudgetExhausted, InfeasibleError
from .objectives import ObjectiveError, parse_objective
from .optimizers import EmptyFeasibleSet
from .rand_intersect import NoCommonBase, SupportCapExceeded, interpolate_support
from .runner import ALGORITHMS, AlgorithmError, Timer, build_report, region_of, solve, verify
from .weights import GridCapExceeded, materialize

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_PARSE = 3
EXIT_INFEASIBLE = 4
EXIT_CAP = 5
EXIT_MISMATCH = 6


def _emit(report: dict, out) -> None:
    text = dumps(report)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _objective(args, inst):
    text = args.objective or inst.objective
    return parse_objective(text, inst.weights.d)


def _primary(args):
    if not getattr(args, "primary_objective", None):
        return None
    c = parse_vector(args.primary_objective)
    if any(v.denominator != 1 for v in c):
        raise ParseError("--primary-objective must be an integer vector")
    return tuple(int(v) for v in c)


def cmd_solve(args, check: bool) -> int:
    inst = parse_instance(args.instance)
    f = _objective(args, inst)
    primary = _primary(args)
    params = {"seed": str(args.seed), "repeats": args.repeats, "threads": args.threads,
              "primary_objective": list(primary) if primary else None}
    with Timer() as t:
        res = solve(inst, args.algorithm, f, args.seed, args.repeats, primary, args.threads)
    ver = verify(inst, res, args.algorithm, f, primary) if check else None
    report = build_report(inst, args.algorithm, res, f, params, ver, t.elapsed)
    if check:
        report = dict(report, command="verify")
        report.pop("digest")
        report = finalize_report(report)
    _emit(report, args.out)
    if ver is not None and not ver["agree"]:
        return EXIT_MISMATCH
    return EXIT_OK


def cmd_fibers(args) -> int:
    inst = parse_instance(args.instance)
    P, meta = region_of(inst)
    with Timer() as t:
        iv = image_vertices(P, inst.weights, meta, threads=args.threads)
    report = {
        "command": "fibers",
        "instance_digest": instance_digest(inst),
        "W": [list(r) for r in materialize(inst.weights)],
        "images_with_nonempty_fiber": [list(u) for u in iv.candidates],
        "image_vertices": [list(u) for u in iv.vertices],
        "witnesses": [{"u": list(u), "x": list(x)} for u, x in sorted(iv.witnesses.items())],
        "timing": {"seconds": round(t.elapsed, 6)},
    }
    _emit(finalize_report(report), args.out)
    return EXIT_OK


def cmd_support(args) -> int:
    inst = parse_instance(args.instance)
    if not inst.is_matroid:
        raise InvariantError("support needs a matroid-pair instance")
    a = parse_vector(args.a)
    if any(v.denominator != 1 for v in a):
        raise ParseError("--a must be an integer vector")
    a = tuple(int(v) for v in a)
    poly = interpolate_support(inst.feasible, materialize(inst.weights), a, method=args.method)
    report = {
        "command": "support",
        "instance_digest": instance_digest(inst),
        "a": [str(v) for v in a],
        "z": poly.z,
        "d": poly.d,
        "coefficients": [{"u": list(u), "g": str(g)} for u, g in sorted(poly.entries.items())],
        "support": [list(u) for u in poly.support],
    }
    _emit(finalize_report(report), args.out)
    return EXIT_OK


def cmd_gen(args) -> int:
    params = {}
    for item in args.param or []:
        key, sep, val = item.partition("=")
        if not sep:
            raise ParseError(f"--param expects key=value, got {item!r}")
        params[key.strip()] = val.strip()
    inst = gen_instance(args.kind, params, args.seed)
    if args.out:
        write_instance(inst, args.out)
    else:
        from .io import instance_to_dict
        sys.stdout.write(dumps(instance_to_dict(inst)))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nlcopt", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--instance", required=True, help="instance JSON file")
        p.add_argument("--threads", type=int, default=1)
        p.add_argument("--out", help="write the report here instead of stdout")

    for name in ("solve", "verify"):
        p = sub.add_parser(name, help=f"{name} an instance")
        common(p)
        p.add_argument("--algorithm", required=True, choices=ALGORITHMS)
        p.add_argument("--objective", help="pnorm:<p>, linear[:w], l1-minus-lp:<p>, custom:<name>, ...")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--repeats", type=int, default=1)
        p.add_argument("--primary-objective", help="comma-separated integer vector c")
        if name == "solve":
            p.add_argument("--verify", action="store_true", help="also compare with brute force")

    p = sub.add_parser("fibers", help="image vertices and fiber witnesses")
    common(p)

    p = sub.add_parser("support", help="support polynomial for a substitution a")
    common(p)
    p.add_argument("--a", required=True, help="comma-separated positive integers")
    p.add_argument("--method", choices=("newton", "gauss"), default="newton")

    p = sub.add_parser("gen", help="generate an instance file")
    p.add_argument("--kind", required=True, choices=KINDS)
    p.add_argument("--param", action="append", help="key=value (n, r, d, beta, count, wmax, ...)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "solve":
            return cmd_solve(args, args.verify)
        if args.command == "verify":
            return cmd_solve(args, True)
        if args.command == "fibers":
            return cmd_fibers(args)
        if args.command == "support":
            return cmd_support(args)
        return cmd_gen(args)
    except (ParseError, InvariantError, ObjectiveError, AlgorithmError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (EmptyFeasibleSet, EmptyFeasibleSetError, EmptyFiberError, InfeasibleError,
            NoCommonBase) as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (GridCapExceeded, SupportCapExceeded, CutBudgetExhausted) as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (FiberError, HarnessError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
