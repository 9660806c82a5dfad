"""Exact rational linear programming.

The simplex core works on an integer tableau with a common denominator
(Edmonds' integer-preserving pivot), so no Fraction objects are created
inside the pivot loop. Bland's rule is used for entering and leaving
variables, which rules out cycling.

Three kinds of feasible regions are understood by :func:`optimize`:

* :class:`HPolytope`  -- ``{x : A x <= b}`` with some rows as equalities,
* :class:`VPolytope`  -- ``conv(points)``, solved in convex-multiplier space,
* :class:`SeparationOracle` -- solved by a cutting-plane loop.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence, Union

from .linalg import as_fraction, dot, frac_vector, nullspace

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

DEFAULT_MAX_CUTS = 10_000


class LPError(Exception):
    pass


class DimensionError(LPError, ValueError):
    pass


class InfeasibleError(LPError):
    pass


class CutBudgetExhausted(LPError):
    pass


class OracleContractError(LPError):
    pass


@dataclass(frozen=True)
class HPolytope:
    """``{x : A_i x <= b_i for i not in eq_rows, A_i x = b_i for i in eq_rows}``."""

    A: tuple
    b: tuple
    eq_rows: frozenset = frozenset()
    bounded: bool = False
    dim: Optional[int] = None

    def __post_init__(self):
        A = tuple(frac_vector(row) for row in self.A)
        b = frac_vector(self.b)
        n = self.dim if self.dim is not None else (len(A[0]) if A else 0)
        if len(A) != len(b):
            raise DimensionError(f"A has {len(A)} rows but b has {len(b)} entries")
        if any(len(row) != n for row in A):
            raise DimensionError("rows of A have inconsistent lengths")
        if n < 1:
            raise DimensionError("polytope dimension must be at least 1")
        eq = frozenset(int(i) for i in self.eq_rows)
        if any(i < 0 or i >= len(A) for i in eq):
            raise DimensionError("eq_rows index out of range")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "eq_rows", eq)
        object.__setattr__(self, "dim", n)

    @property
    def n(self) -> int:
        return self.dim

    @property
    def m(self) -> int:
        return len(self.A)

    @classmethod
    def box(cls, lower: Sequence, upper: Sequence) -> "HPolytope":
        n = len(lower)
        A, b = [], []
        for j in range(n):
            e = [0] * n
            e[j] = -1
            A.append(e)
            b.append(-as_fraction(lower[j]))
            e = [0] * n
            e[j] = 1
            A.append(e)
            b.append(as_fraction(upper[j]))
        return cls(tuple(A), tuple(b), bounded=True, dim=n)

    def add_rows(self, rows: Iterable, rhs: Iterable, equality: bool = False) -> "HPolytope":
        rows = [frac_vector(r) for r in rows]
        rhs = list(frac_vector(rhs))
        start = self.m
        eq = set(self.eq_rows)
        if equality:
            eq.update(range(start, start + len(rows)))
        return HPolytope(self.A + tuple(rows), self.b + tuple(rhs), frozenset(eq),
                         self.bounded, self.n)

    def with_equalities(self, eqs: Sequence[tuple]) -> "HPolytope":
        if not eqs:
            return self
        return self.add_rows([g for g, _ in eqs], [h for _, h in eqs], equality=True)

    def slack(self, x: Sequence) -> list[Fraction]:
        return [bi - dot(row, x) for row, bi in zip(self.A, self.b)]

    def contains(self, x: Sequence) -> bool:
        for i, s in enumerate(self.slack(x)):
            if s < 0 or (i in self.eq_rows and s != 0):
                return False
        return True


@dataclass(frozen=True)
class VPolytope:
    """``conv(points)`` for a finite, nonempty point list."""

    points: tuple
    int_points: Optional[tuple] = field(default=None, init=False, compare=False, repr=False)

    def __post_init__(self):
        pts = tuple(frac_vector(p) for p in self.points)
        if not pts:
            raise DimensionError("VPolytope needs at least one point")
        n = len(pts[0])
        if n < 1 or any(len(p) != n for p in pts):
            raise DimensionError("points of a VPolytope must share a positive dimension")
        object.__setattr__(self, "points", pts)
        # plain-int copy for the common integral case; int arithmetic is much faster
        object.__setattr__(self, "int_points", _ints_or_none(pts))

    @property
    def n(self) -> int:
        return len(self.points[0])


@dataclass(frozen=True)
class SeparationOracle:
    """A polytope known only through a separation routine and a bounding box.

    ``separate(x)`` returns ``None`` when ``x`` is inside, otherwise a pair
    ``(g, h)`` with ``g.x > h`` and ``g.y <= h`` for every ``y`` in the polytope.
    """

    lower: tuple
    upper: tuple
    separate: Callable = field(compare=False)
    name: str = "oracle"

    def __post_init__(self):
        object.__setattr__(self, "lower", frac_vector(self.lower))
        object.__setattr__(self, "upper", frac_vector(self.upper))
        if len(self.lower) != len(self.upper):
            raise DimensionError("bounding box corners differ in length")

    @property
    def n(self) -> int:
        return len(self.lower)


Region = Union[HPolytope, VPolytope, SeparationOracle]


@dataclass(frozen=True)
class LPResult:
    status: str
    point: Optional[tuple] = None
    value: Optional[Fraction] = None
    is_vertex: bool = False
    cuts: int = 0

    def __post_init__(self):
        if (self.point is not None) != (self.status == OPTIMAL):
            raise ValueError("point must be present exactly when status is optimal")

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL


# ---------------------------------------------------------------------------
# simplex core


def _ints_or_none(vectors) -> Optional[tuple]:
    out = []
    for v in vectors:
        if any(Fraction(x).denominator != 1 for x in v):
            return None
        out.append(tuple(int(x) for x in v))
    return tuple(out)


def _int_row(coeffs: Sequence[Fraction], rhs: Fraction) -> tuple[list[int], int]:
    lcm = 1
    for v in list(coeffs) + [rhs]:
        lcm = lcm * v.denominator // math.gcd(lcm, v.denominator)
    row = [int(v * lcm) for v in coeffs]
    return row, int(rhs * lcm)


def _pivot(T: list[list[int]], obj: list[int], D: int, r: int, c: int) -> int:
    p = T[r][c]
    rowr = T[r]
    width = len(rowr)
    for i, row in enumerate(T):
        if i == r:
            continue
        f = row[c]
        if f == 0:
            if p != D:
                for j in range(width):
                    if row[j]:
                        row[j] = row[j] * p // D
            continue
        for j in range(width):
            row[j] = (row[j] * p - f * rowr[j]) // D
    f = obj[c]
    if f == 0:
        if p != D:
            for j in range(width):
                if obj[j]:
                    obj[j] = obj[j] * p // D
    else:
        for j in range(width):
            obj[j] = (obj[j] * p - f * rowr[j]) // D
    if p < 0:
        for row in T:
            for j in range(width):
                row[j] = -row[j]
        for j in range(width):
            obj[j] = -obj[j]
        p = -p
    return p


def _run(T, obj, basis, D, allowed: int) -> tuple[str, int]:
    """Bland-rule primal simplex on columns ``< allowed``; ``obj`` holds reduced costs."""
    rhs = len(obj) - 1
    while True:
        c = next((j for j in range(allowed) if obj[j] < 0), None)
        if c is None:
            return OPTIMAL, D
        r = None
        for i, row in enumerate(T):
            a = row[c]
            if a <= 0:
                continue
            if r is None:
                r = i
                continue
            lhs = row[rhs] * T[r][c]
            cur = T[r][rhs] * a
            if lhs < cur or (lhs == cur and basis[i] < basis[r]):
                r = i
        if r is None:
            return UNBOUNDED, D
        D = _pivot(T, obj, D, r, c)
        basis[r] = c


def simplex_standard(A: Sequence[Sequence[int]], b: Sequence[int], c: Sequence[int]):
    """Minimise ``c.y`` subject to ``A y = b``, ``y >= 0`` with integer data.

    Returns ``(status, y, value)``; ``y`` and ``value`` are Fractions when optimal.
    """
    m = len(A)
    N = len(c)
    T = []
    for row, bi in zip(A, b):
        row = list(row)
        if bi < 0:
            row = [-v for v in row]
            bi = -bi
        T.append(row + [0] * m + [bi])
    for i in range(m):
        T[i][N + i] = 1
    width = N + m + 1
    basis = [N + i for i in range(m)]
    D = 1
    obj = [0] * width
    for row in T:
        for j in range(N):
            obj[j] -= row[j]
        obj[-1] -= row[-1]
    status, D = _run(T, obj, basis, D, N)
    if obj[-1] != 0:
        return INFEASIBLE, None, None
    # drive artificial variables out of the basis
    i = 0
    while i < len(T):
        if basis[i] >= N:
            c_in = next((j for j in range(N) if T[i][j] != 0), None)
            if c_in is None:
                del T[i]
                del basis[i]
                continue
            D = _pivot(T, obj, D, i, c_in)
            basis[i] = c_in
        i += 1
    obj = [0] * width
    for j in range(N):
        obj[j] = c[j] * D
    for row, bj in zip(T, basis):
        cb = c[bj]
        if cb:
            for j in range(N):
                obj[j] -= cb * row[j]
            obj[-1] -= cb * row[-1]
    status, D = _run(T, obj, basis, D, N)
    if status == UNBOUNDED:
        return UNBOUNDED, None, None
    y = [Fraction(0)] * N
    for row, bj in zip(T, basis):
        y[bj] = Fraction(row[-1], D)
    return OPTIMAL, y, Fraction(-obj[-1], D)


# ---------------------------------------------------------------------------
# H-representation


def _check_objective(c: Sequence, n: int) -> tuple[Fraction, ...]:
    c = frac_vector(c)
    if len(c) != n:
        raise DimensionError(f"objective has length {len(c)}, polytope dimension is {n}")
    return c


def _sense_sign(sense: str) -> int:
    if sense == "max":
        return -1
    if sense == "min":
        return 1
    raise ValueError(f"sense must be 'max' or 'min', got {sense!r}")


def _purify(P: HPolytope, x: list[Fraction], c: Sequence[Fraction]) -> tuple[list[Fraction], bool]:
    """Walk from an optimal ``x`` to an optimal vertex inside the optimal face."""
    n = P.n
    while True:
        slack = P.slack(x)
        tight = [i for i in range(P.m) if i in P.eq_rows or slack[i] == 0]
        basis = nullspace([P.A[i] for i in tight], n)
        if not basis:
            return x, True
        d = basis[0]
        if dot(c, d) != 0:
            # cannot happen at an optimum of a bounded-in-c problem
            raise LPError("purification found an improving direction")
        step = None
        for direction in (d, [-v for v in d]):
            best = None
            for i in range(P.m):
                if i in P.eq_rows or slack[i] == 0:
                    continue
                ad = dot(P.A[i], direction)
                if ad > 0:
                    t = slack[i] / ad
                    if best is None or t < best:
                        best = t
            if best is not None:
                step = (direction, best)
                break
        if step is None:
            return x, False
        direction, t = step
        x = [xi + t * di for xi, di in zip(x, direction)]


def lp_solve(P: HPolytope, c: Sequence, sense: str = "max") -> LPResult:
    """Optimise ``c.x`` over ``P`` exactly; optimal answers are vertices when ``P`` is pointed."""
    c = _check_objective(c, P.n)
    sign = _sense_sign(sense)
    n = P.n
    ineq = [i for i in range(P.m) if i not in P.eq_rows]
    slack_col = {i: 2 * n + k for k, i in enumerate(ineq)}
    A_std, b_std = [], []
    for i, (row, bi) in enumerate(zip(P.A, P.b)):
        irow, ib = _int_row(row, bi)
        full = irow + [-v for v in irow] + [0] * len(ineq)
        if i in slack_col:
            full[slack_col[i]] = _row_scale(row, bi)
        A_std.append(full)
        b_std.append(ib)
    cint, _ = _int_row([sign * v for v in c], Fraction(0))
    c_std = cint + [-v for v in cint] + [0] * len(ineq)
    status, y, _ = simplex_standard(A_std, b_std, c_std)
    if status != OPTIMAL:
        return LPResult(status)
    x = [y[j] - y[n + j] for j in range(n)]
    x, vertex = _purify(P, x, c)
    return LPResult(OPTIMAL, tuple(x), dot(c, x), vertex)


def _row_scale(row: Sequence[Fraction], rhs: Fraction) -> int:
    lcm = 1
    for v in list(row) + [rhs]:
        lcm = lcm * v.denominator // math.gcd(lcm, v.denominator)
    return lcm


# ---------------------------------------------------------------------------
# V-representation (convex multipliers)


def _vrep_solve(V: VPolytope, c: Sequence[Fraction], sense: str,
                eqs: Sequence[tuple]) -> LPResult:
    sign = _sense_sign(sense)
    points = V.points
    gs = [g for g, _ in eqs]
    if V.int_points is not None:
        ic, igs = _ints_or_none([c]), _ints_or_none(gs)
        if ic is not None and igs is not None:
            points, c, gs = V.int_points, ic[0], igs
    cols: dict[tuple, tuple[Fraction, int]] = {}
    for k, p in enumerate(points):
        key = tuple(dot(g, p) for g in gs)
        val = dot(c, p)
        prev = cols.get(key)
        # identical constraint columns: only the best objective can matter
        if prev is None or sign * val < sign * prev[0]:
            cols[key] = (val, k)
    keys = list(cols)
    rows = [[Fraction(1)] * len(keys)]
    rhs = [Fraction(1)]
    for e, (_, h) in enumerate(eqs):
        rows.append([key[e] for key in keys])
        rhs.append(as_fraction(h))
    A_std, b_std = [], []
    for row, h in zip(rows, rhs):
        irow, ih = _int_row(row, h)
        A_std.append(irow)
        b_std.append(ih)
    obj = [sign * cols[key][0] for key in keys]
    cint, _ = _int_row(obj, Fraction(0))
    status, lam, _ = simplex_standard(A_std, b_std, cint)
    if status != OPTIMAL:
        return LPResult(status)
    x = [Fraction(0)] * V.n
    for key, l in zip(keys, lam):
        if l:
            p = V.points[cols[key][1]]
            x = [xi + l * pi for xi, pi in zip(x, p)]
    return LPResult(OPTIMAL, tuple(x), Fraction(dot(c, x)), False)


# ---------------------------------------------------------------------------
# separation oracle (cutting planes)


def _cutting_plane(oracle: SeparationOracle, c: Sequence[Fraction], sense: str,
                   eqs: Sequence[tuple], max_cuts: int) -> LPResult:
    relax = HPolytope.box(oracle.lower, oracle.upper).with_equalities(eqs)
    cuts = 0
    while True:
        res = lp_solve(relax, c, sense)
        if not res.optimal:
            return LPResult(res.status, cuts=cuts)
        cut = oracle.separate(res.point)
        if cut is None:
            return LPResult(OPTIMAL, res.point, res.value, res.is_vertex, cuts)
        g, h = frac_vector(cut[0]), as_fraction(cut[1])
        if dot(g, res.point) <= h:
            raise OracleContractError(
                f"oracle {oracle.name} returned an inequality not violated by the query point")
        cuts += 1
        if cuts > max_cuts:
            raise CutBudgetExhausted(f"cut budget of {max_cuts} exhausted")
        relax = relax.add_rows([g], [h])


def lp_solve_oracle(oracle: SeparationOracle, c: Sequence, sense: str = "max",
                    max_cuts: int = DEFAULT_MAX_CUTS) -> LPResult:
    c = _check_objective(c, oracle.n)
    if max_cuts < 1:
        raise ValueError("max_cuts must be positive")
    return _cutting_plane(oracle, c, sense, (), max_cuts)


# ---------------------------------------------------------------------------
# region-generic entry points


def _normalize_eqs(eqs, n: int) -> tuple:
    out = []
    for g, h in eqs or ():
        g = frac_vector(g)
        if len(g) != n:
            raise DimensionError(f"equality row has length {len(g)}, expected {n}")
        out.append((g, as_fraction(h)))
    return tuple(out)


def optimize(region: Region, c: Sequence, sense: str = "max", eqs=None,
             max_cuts: int = DEFAULT_MAX_CUTS) -> LPResult:
    """Optimise ``c.x`` over ``region`` intersected with the equalities ``g.x = h``."""
    c = _check_objective(c, region.n)
    eqs = _normalize_eqs(eqs, region.n)
    if isinstance(region, HPolytope):
        return lp_solve(region.with_equalities(eqs), c, sense)
    if isinstance(region, VPolytope):
        return _vrep_solve(region, c, sense, eqs)
    if isinstance(region, SeparationOracle):
        return _cutting_plane(region, c, sense, eqs, max_cuts)
    raise TypeError(f"unsupported region type {type(region).__name__}")


def lex_max(region: Region, order: Optional[Sequence[int]] = None, eqs=None,
            max_cuts: int = DEFAULT_MAX_CUTS) -> LPResult:
    """Lexicographically largest point of ``region`` (plus equalities) under ``order``.

    ``order`` lists 0-based coordinates, most significant first; coordinates
    missing from it are appended in increasing order. The result is a vertex.
    """
    n = region.n
    order = list(order) if order is not None else []
    if sorted(set(order)) != sorted(order) or any(k < 0 or k >= n for k in order):
        raise DimensionError("order must list distinct coordinates")
    order += [k for k in range(n) if k not in order]
    eqs = list(_normalize_eqs(eqs, n))
    res = None
    for k in order:
        e = [0] * n
        e[k] = 1
        res = optimize(region, e, "max", eqs, max_cuts)
        if not res.optimal:
            if res.status == INFEASIBLE:
                raise InfeasibleError("lex_max over an empty region")
            raise LPError(f"lex_max: coordinate {k} is {res.status}")
        eqs.append((frac_vector(e), res.point[k]))
    return LPResult(OPTIMAL, res.point, res.point[order[0]], True, res.cuts)


def is_feasible(region: Region, eqs=None, max_cuts: int = DEFAULT_MAX_CUTS) -> bool:
    return optimize(region, [0] * region.n, "max", eqs, max_cuts).optimal
