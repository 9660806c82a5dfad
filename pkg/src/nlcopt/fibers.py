"""Fibers ``{x in P : Wx = u}`` and the vertices of the image polytope ``W P``."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .linalg import frac_vector, matvec
from .lp import (INFEASIBLE, HPolytope, InfeasibleError, LPResult, Region, VPolytope,
                 is_feasible, lex_max, optimize)
from .weights import (DEFAULT_GRID_CAP, FeasibleMeta, as_weights, candidate_image_grid,
                      materialize)


class FiberError(Exception):
    pass


class EmptyFiberError(FiberError):
    pass


class NonIntegralFiberVertex(FiberError):
    pass


@dataclass(frozen=True)
class FiberFace:
    u: tuple
    tight_rows: tuple
    slack_rows: tuple


@dataclass(frozen=True)
class ImageVertexSet:
    vertices: tuple
    witnesses: dict = field(default_factory=dict)
    candidates: tuple = ()


def _dense(W) -> tuple[tuple[int, ...], ...]:
    if hasattr(W, "deltas"):
        return materialize(W)
    return tuple(tuple(int(v) for v in row) for row in W)


def _fiber_eqs(W, u) -> list[tuple]:
    W = _dense(W)
    u = frac_vector(u)
    if len(u) != len(W):
        raise ValueError(f"image point has length {len(u)}, W has {len(W)} rows")
    return [(row, ui) for row, ui in zip(W, u)]


def fiber_max(P: Region, W, u: Sequence, c: Sequence) -> LPResult:
    """``max {c.x : Wx = u, x in P}``; infeasible exactly when the fiber is empty."""
    return optimize(P, c, "max", _fiber_eqs(W, u))


def fiber_integer_point(P: Region, W, u: Sequence, order: Optional[Sequence[int]] = None
                        ) -> tuple[int, ...]:
    """Integer point of the fiber of an image vertex ``u``, chosen by lex-max.

    A fractional answer means ``u`` was not a vertex of ``W P``; it is reported,
    never rounded.
    """
    try:
        res = lex_max(P, order, _fiber_eqs(W, u))
    except InfeasibleError as exc:
        raise EmptyFiberError(f"fiber of {tuple(u)} is empty") from exc
    x = res.point
    if any(v.denominator != 1 for v in x):
        raise NonIntegralFiberVertex(
            f"fiber vertex {[str(v) for v in x]} over u={tuple(u)} is not integral")
    return tuple(int(v) for v in x)


def fiber_face_description(P: HPolytope, W, u: Sequence) -> FiberFace:
    """Split the rows of ``P`` into those tight on the whole fiber and the rest.

    Row i is tight iff ``min {A_i x : Wx = u, x in P} = b_i``.
    """
    if not isinstance(P, HPolytope):
        raise TypeError("fiber_face_description needs an H-representation")
    eqs = _fiber_eqs(W, u)
    tight, slack = [], []
    for i, (row, bi) in enumerate(zip(P.A, P.b)):
        if i in P.eq_rows:
            if not is_feasible(P, eqs):
                raise EmptyFiberError(f"fiber of {tuple(u)} is empty")
            tight.append(i)
            continue
        res = optimize(P, row, "min", eqs)
        if res.status == INFEASIBLE:
            raise EmptyFiberError(f"fiber of {tuple(u)} is empty")
        (tight if res.value == bi else slack).append(i)
    return FiberFace(tuple(frac_vector(u)), tuple(tight), tuple(slack))


def is_vertex(u: Sequence, U: Sequence[Sequence]) -> bool:
    """True iff ``u`` is not in the convex hull of the other points of ``U``."""
    u = frac_vector(u)
    others = sorted({frac_vector(p) for p in U} - {u})
    if not others:
        return True
    eqs = []
    for k in range(len(u)):
        e = [0] * len(u)
        e[k] = 1
        eqs.append((e, u[k]))
    return not is_feasible(VPolytope(tuple(others)), eqs)


def _line_interior(U: Sequence[tuple]) -> set:
    """Points of ``U`` lying strictly between two others on an axis-parallel line."""
    interior = set()
    d = len(U[0]) if U else 0
    for axis in range(d):
        lines: dict[tuple, list] = {}
        for u in U:
            lines.setdefault(u[:axis] + u[axis + 1:], []).append(u)
        for pts in lines.values():
            if len(pts) > 2:
                pts.sort(key=lambda p: p[axis])
                interior.update(pts[1:-1])
    return interior


class _FiberTester:
    """Nonemptiness test for fibers of one (region, W) pair."""

    def __init__(self, P: Region, W):
        self.P = P
        self.W = _dense(W)
        self.images = None
        if isinstance(P, VPolytope):
            # in multiplier space only the distinct images of the points matter
            imgs = sorted({matvec(self.W, p) for p in P.points})
            self.images = VPolytope(tuple(imgs))

    def __call__(self, u) -> bool:
        if self.images is not None:
            d = len(u)
            eqs = []
            for k in range(d):
                e = [0] * d
                e[k] = 1
                eqs.append((e, u[k]))
            return is_feasible(self.images, eqs)
        return is_feasible(self.P, _fiber_eqs(self.W, u))


def image_box(P: Region, W) -> list[tuple[Fraction, Fraction]]:
    """Coordinate ranges ``[min W_i x, max W_i x]`` over ``P``."""
    box = []
    for row in _dense(W):
        lo = optimize(P, row, "min")
        hi = optimize(P, row, "max")
        if not (lo.optimal and hi.optimal):
            raise EmptyFiberError("polytope is empty or unbounded along a weight row")
        box.append((lo.value, hi.value))
    return box


def _map(fn, items, threads: int):
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


def image_vertices(P: Region, W, meta: FeasibleMeta, cap: int = DEFAULT_GRID_CAP,
                   witnesses: bool = True, threads: int = 1,
                   order: Optional[Sequence[int]] = None) -> ImageVertexSet:
    """Vertices of ``W P`` by fiber tests over the candidate image grid.

    1. enumerate the candidate grid (clipped to the coordinate ranges of ``W P``);
    2. keep grid points with a nonempty fiber; their hull is ``W P``;
    3. keep those not in the hull of the rest.
    """
    Wg = as_weights(W)
    if P.n != Wg.n:
        raise ValueError(f"polytope has dimension {P.n} but W has {Wg.n} columns")
    box = image_box(P, Wg)
    grid = candidate_image_grid(Wg, meta, cap, box)
    tester = _FiberTester(P, Wg)
    feasible = _map(tester, grid, threads)
    U = [u for u, ok in zip(grid, feasible) if ok]
    if not U:
        raise EmptyFiberError("no grid point has a nonempty fiber; is the feasible set empty?")
    interior = _line_interior(U)
    survivors = [u for u in U if u not in interior]
    flags = _map(lambda u: is_vertex(u, survivors), survivors, threads)
    verts = tuple(sorted(u for u, ok in zip(survivors, flags) if ok))
    wit = {}
    if witnesses:
        pts = _map(lambda u: fiber_integer_point(P, materialize(Wg), u, order),
                   verts, threads)
        wit = dict(zip(verts, pts))
    return ImageVertexSet(verts, wit, tuple(U))
