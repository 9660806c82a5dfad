"""Exact quasiconvex maximization and the two approximation algorithms."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .exact import Surd, to_exact
from .fibers import EmptyFiberError, _dense, fiber_integer_point, image_vertices
from .linalg import dot, frac_vector, matvec
from .lp import HPolytope, Region, SeparationOracle, VPolytope, lex_max, optimize
from .objectives import INF, NormConstants, ObjectiveOracle, norm_constants_pnorm
from .weights import DEFAULT_GRID_CAP, FeasibleMeta, as_weights, materialize


class OptimizerError(Exception):
    pass


class EmptyFeasibleSet(OptimizerError):
    pass


class NegativeWeights(OptimizerError, ValueError):
    pass


@dataclass(frozen=True)
class ApproxResult:
    x: tuple
    u: tuple
    value: object
    guarantee: object
    algorithm: str = ""
    details: dict = field(default_factory=dict, compare=False)


def best_image(images: Sequence[tuple], f: ObjectiveOracle, sense: str = "max") -> tuple:
    """f-best image; ties go to the lexicographically smallest image."""
    if not images:
        raise EmptyFeasibleSet("no images to choose from")
    best, best_val = None, None
    for u in sorted(images):
        v = f(u)
        if best is None or (v > best_val if sense == "max" else v < best_val):
            best, best_val = u, v
    return best


def _require_nonnegative(W) -> tuple:
    Wd = _dense(W) if not hasattr(W, "deltas") else materialize(W)
    if any(v < 0 for row in Wd for v in row):
        raise NegativeWeights("this algorithm requires a nonnegative weight matrix")
    return Wd


def _vertices(P, W, meta, cap, threads):
    try:
        return image_vertices(P, W, meta, cap, witnesses=False, threads=threads)
    except EmptyFiberError as exc:
        raise EmptyFeasibleSet(str(exc)) from exc


def quasiconvex_max(P: Region, W, meta: FeasibleMeta, f: ObjectiveOracle,
                    cap: int = DEFAULT_GRID_CAP, threads: int = 1) -> ApproxResult:
    """Exact maximiser of a quasiconvex ``f(Wx)`` over the integer points of ``P``.

    Computes the image vertices, picks the best one under ``f`` and pulls
    back an integer point of its fiber.
    """
    Wg = as_weights(W)
    verts = _vertices(P, Wg, meta, cap, threads).vertices
    u = best_image(verts, f, "max")
    x = fiber_integer_point(P, materialize(Wg), u)
    return ApproxResult(x, u, f(u), Fraction(1), "exact-max",
                        {"image_vertices": [list(v) for v in verts]})


def raycave_guarantee(f: ObjectiveOracle, d: int):
    """``d`` in general; ``d**(1/q)`` with ``1/p + 1/q = 1`` for p-norms."""
    if f.kind == "pnorm":
        p = f.p
        if p == INF:
            return Fraction(d)
        if p == 1:
            return Fraction(1)
        return to_exact(Surd.root(Fraction(d) ** (p - 1), p))
    return Fraction(d)


def raycave_min_approx(P: Region, W, meta: FeasibleMeta, f: ObjectiveOracle,
                       cap: int = DEFAULT_GRID_CAP, threads: int = 1) -> ApproxResult:
    """Approximate minimiser of a ray-concave non-decreasing ``f(Wx)`` over a nonnegative image.

    Returns the best image vertex; its value is within the guarantee of the optimum.
    """
    Wg = as_weights(W)
    _require_nonnegative(Wg)
    verts = _vertices(P, Wg, meta, cap, threads).vertices
    u = best_image(verts, f, "min")
    x = fiber_integer_point(P, materialize(Wg), u)
    return ApproxResult(x, u, f(u), raycave_guarantee(f, Wg.d), "raycave-min",
                        {"image_vertices": [list(v) for v in verts]})


def norm_max_approx(P: Region, W, f: ObjectiveOracle,
                    consts: Optional[NormConstants] = None) -> ApproxResult:
    """Norm maximisation from the ``d`` row-wise linear programs.

    For each weight row an optimal vertex of ``P`` is taken (lex-max on the
    optimal face, which makes the choice deterministic) and the row whose
    image has the largest ``f`` wins.
    """
    Wd = _require_nonnegative(W)
    d = len(Wd)
    if consts is None:
        if f.kind != "pnorm":
            raise OptimizerError("norm constants are required for objectives other than p-norms")
        consts = norm_constants_pnorm(f.p, d)
    candidates = []
    rows = []
    for row in Wd:
        top = optimize(P, row, "max")
        if not top.optimal:
            raise EmptyFeasibleSet(f"row LP is {top.status}")
        xv = lex_max(P, None, [(row, top.value)]).point
        if any(v.denominator != 1 for v in xv):
            raise OptimizerError(f"row LP vertex {xv} is not integral; P is not an integral polytope")
        x = tuple(int(v) for v in xv)
        u = matvec(Wd, x)
        candidates.append((u, x))
        rows.append({"row_value": str(top.value), "x": list(x), "u": list(u)})
    u = best_image([c[0] for c in candidates], f, "max")
    x = next(c[1] for c in candidates if c[0] == u)
    return ApproxResult(x, u, f(u), consts.ratio, "norm-max", {"rows": rows})


def primary_objective_face(P: Region, c: Sequence) -> Region:
    """The face of ``P`` where the linear objective ``c`` is maximal."""
    c = frac_vector(c)
    if len(c) != P.n:
        raise ValueError(f"primary objective has length {len(c)}, expected {P.n}")
    top = optimize(P, c, "max")
    if not top.optimal:
        raise EmptyFeasibleSet(f"primary objective LP is {top.status}")
    z = top.value
    if not any(c):
        return P
    if isinstance(P, HPolytope):
        return P.add_rows([c], [z], equality=True)
    if isinstance(P, VPolytope):
        return VPolytope(tuple(p for p in P.points if dot(c, p) == z))
    if isinstance(P, SeparationOracle):
        base = P.separate

        def separate(x):
            v = dot(c, x)
            if v > z:
                return c, z
            if v < z:
                return tuple(-ci for ci in c), -z
            return base(x)

        return SeparationOracle(P.lower, P.upper, separate, f"{P.name}|face")
    raise TypeError(f"unsupported region type {type(P).__name__}")


def primary_objective_value(P: Region, c: Sequence) -> Fraction:
    top = optimize(P, c, "max")
    if not top.optimal:
        raise EmptyFeasibleSet(f"primary objective LP is {top.status}")
    return top.value
