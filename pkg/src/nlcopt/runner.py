"""Algorithm dispatch and brute-force verification for whole instances."""

from __future__ import annotations

import time
from typing import Optional

from .exact import Surd
from .harness import ExplicitFeasibleSet, Instance, brute_force_opt
from .io import HRepFeasibleSet, finalize_report, instance_digest, value_repr
from .linalg import dot, matvec
from .objectives import ObjectiveOracle, parse_objective
from .optimizers import (ApproxResult, norm_max_approx, primary_objective_face, quasiconvex_max,
                         raycave_min_approx)
from .rand_intersect import VectorialMatroidPair, optimal_common_base
from .weights import DEFAULT_GRID_CAP, materialize

ALGORITHMS = ("exact-max", "norm-max", "raycave-min", "matroid-random")


class AlgorithmError(ValueError):
    pass


def region_of(inst: Instance):
    F = inst.feasible
    if isinstance(F, HRepFeasibleSet):
        return F.polytope, F.meta
    if isinstance(F, VectorialMatroidPair):
        E = inst.explicit()
        return E.polytope(), E.meta
    return F.polytope(), F.meta


def explicit_of(inst: Instance) -> ExplicitFeasibleSet:
    F = inst.feasible
    if isinstance(F, HRepFeasibleSet):
        return F.explicit()
    return inst.explicit()


def sense_of(algorithm: str, inst: Instance) -> str:
    if algorithm in ("exact-max", "norm-max"):
        return "max"
    if algorithm == "raycave-min":
        return "min"
    return inst.sense


def solve(inst: Instance, algorithm: str, objective: Optional[ObjectiveOracle] = None,
          seed: int = 0, repeats: int = 1, primary: Optional[tuple] = None,
          threads: int = 1, cap: int = DEFAULT_GRID_CAP) -> ApproxResult:
    if algorithm not in ALGORITHMS:
        raise AlgorithmError(f"unknown algorithm {algorithm!r}; choose from {ALGORITHMS}")
    W = inst.weights
    f = objective or parse_objective(inst.objective, W.d)
    primary = primary if primary is not None else inst.primary
    if algorithm == "matroid-random":
        if not inst.is_matroid:
            raise AlgorithmError("matroid-random needs a matroid-pair instance")
        if primary is not None:
            raise AlgorithmError("a primary objective is not supported by matroid-random")
        res = optimal_common_base(inst.feasible, materialize(W), f, seed, repeats, inst.sense)
        x = tuple(1 if j in res.base else 0 for j in range(inst.feasible.n))
        return ApproxResult(x, res.u, res.value, None, algorithm,
                            {"base": list(res.base), "is_common_base": res.is_common_base,
                             "seeds": [str(s) for s in res.seeds]})
    P, meta = region_of(inst)
    if primary is not None:
        P = primary_objective_face(P, primary)
    if algorithm == "exact-max":
        return quasiconvex_max(P, W, meta, f, cap, threads)
    if algorithm == "raycave-min":
        return raycave_min_approx(P, W, meta, f, cap, threads)
    return norm_max_approx(P, W, f)


def _holds(lhs, guarantee, rhs) -> bool:
    """``lhs <= guarantee * rhs`` exactly."""
    return Surd.coerce(lhs) <= Surd.coerce(guarantee) * Surd.coerce(rhs)


def verify(inst: Instance, result: ApproxResult, algorithm: str,
           objective: Optional[ObjectiveOracle] = None, primary: Optional[tuple] = None) -> dict:
    """Compare a result against exhaustive search over the explicit feasible set."""
    W = inst.weights
    f = objective or parse_objective(inst.objective, W.d)
    F = explicit_of(inst)
    primary = primary if primary is not None else inst.primary
    pts = F.points
    if primary is not None:
        top = max(dot(primary, x) for x in pts)
        pts = tuple(x for x in pts if dot(primary, x) == top)
        F = ExplicitFeasibleSet(pts, F.meta)
    sense = sense_of(algorithm, inst)
    x_opt, v_opt = brute_force_opt(F, W, f, sense)
    Wd = materialize(W)
    member = tuple(result.x) in set(pts)
    consistent = member and matvec(Wd, result.x) == tuple(result.u or ())
    out = {"brute_x": list(x_opt), "brute_u": list(matvec(Wd, x_opt)), "brute_value": value_repr(v_opt),
           "member_of_F": member, "image_consistent": consistent}
    v = result.value
    if algorithm in ("exact-max", "matroid-random"):
        ok = consistent and v is not None and v == v_opt
        out["check"] = "value equals brute-force optimum"
    elif algorithm == "norm-max":
        ok = consistent and _holds(v_opt, result.guarantee, v)
        out["check"] = "f(opt) <= guarantee * f(returned)"
        out["ratio_approx"] = float(Surd.coerce(v_opt)) / float(Surd.coerce(v)) if v else None
    else:
        ok = consistent and _holds(v, result.guarantee, v_opt)
        out["check"] = "f(returned) <= guarantee * f(opt)"
        out["ratio_approx"] = float(Surd.coerce(v)) / float(Surd.coerce(v_opt)) if v_opt else None
    if primary is not None:
        out["primary_value"] = str(dot(primary, result.x))
        out["primary_optimum"] = str(max(dot(primary, x) for x in pts))
    out["agree"] = bool(ok)
    return out


def build_report(inst: Instance, algorithm: str, result: ApproxResult, objective: ObjectiveOracle,
                 params: dict, verification: Optional[dict] = None,
                 elapsed: Optional[float] = None) -> dict:
    report = {
        "command": "solve",
        "instance_digest": instance_digest(inst),
        "instance_name": inst.name,
        "algorithm": algorithm,
        "parameters": dict(params, objective=objective.spec),
        "result": {
            "x": list(result.x),
            "u": list(result.u) if result.u is not None else None,
            "value": value_repr(result.value),
            "guarantee": value_repr(result.guarantee),
            "details": result.details,
        },
    }
    if verification is not None:
        report["verify"] = verification
    if elapsed is not None:
        report["timing"] = {"seconds": round(elapsed, 6)}
    return finalize_report(report)


class Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start
        return False
