"""Brute-force ground truth, explicit feasible sets and instance generators."""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

from .linalg import dot, frac_vector, gaussian_rank, matvec, row_echelon
from .lp import HPolytope, SeparationOracle, VPolytope, lp_solve
from .objectives import ObjectiveOracle
from .rand_intersect import (DEFAULT_BASES_CAP, NoCommonBase, VectorialMatroidPair,
                             base_dets, is_common_base)
from .weights import FeasibleMeta, GeneralizedUnaryWeights, as_weights, materialize


class HarnessError(ValueError):
    pass


class EmptyFeasibleSetError(HarnessError):
    pass


@dataclass(frozen=True)
class ExplicitFeasibleSet:
    points: tuple
    meta: FeasibleMeta

    def __post_init__(self):
        pts = []
        for p in self.points:
            if any(isinstance(v, bool) or int(v) != v or v < 0 for v in p):
                raise HarnessError(f"feasible points must be nonnegative integers, got {p}")
            pts.append(tuple(int(v) for v in p))
        if len(set(pts)) != len(pts):
            raise HarnessError("feasible points must be distinct")
        for p in pts:
            if len(p) != self.meta.n:
                raise HarnessError(f"point {p} does not have dimension {self.meta.n}")
            if sum(p) > self.meta.beta:
                raise HarnessError(f"point {p} has coordinate sum above beta={self.meta.beta}")
        object.__setattr__(self, "points", tuple(pts))

    @classmethod
    def of(cls, points, beta: Optional[int] = None) -> "ExplicitFeasibleSet":
        points = [tuple(int(v) for v in p) for p in points]
        if not points:
            raise EmptyFeasibleSetError("feasible set is empty")
        if beta is None:
            beta = max(sum(p) for p in points)
        return cls(tuple(points), FeasibleMeta(beta, len(points[0])))

    @property
    def n(self) -> int:
        return self.meta.n

    def polytope(self) -> VPolytope:
        if not self.points:
            raise EmptyFeasibleSetError("feasible set is empty")
        return VPolytope(self.points)

    def __contains__(self, x) -> bool:
        return tuple(int(v) for v in x) in set(self.points)

    def __len__(self):
        return len(self.points)


Feasible = Union[ExplicitFeasibleSet, VectorialMatroidPair]


@dataclass(frozen=True)
class Instance:
    feasible: object
    weights: GeneralizedUnaryWeights
    objective: str = "pnorm:2"
    sense: str = "max"
    primary: Optional[tuple] = None
    name: str = ""
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        W = as_weights(self.weights)
        object.__setattr__(self, "weights", W)
        n = self.feasible.n
        if W.n != n:
            raise HarnessError(f"weights have {W.n} columns but the feasible set has n={n}")
        if self.sense not in ("max", "min"):
            raise HarnessError("sense must be 'max' or 'min'")
        if self.primary is not None:
            c = tuple(int(v) for v in self.primary)
            if len(c) != n:
                raise HarnessError("primary objective has the wrong length")
            object.__setattr__(self, "primary", c)

    @property
    def is_matroid(self) -> bool:
        return isinstance(self.feasible, VectorialMatroidPair)

    def explicit(self, cap: int = DEFAULT_BASES_CAP) -> ExplicitFeasibleSet:
        if self.is_matroid:
            return enumerate_common_bases(self.feasible, cap)
        return self.feasible


# ---------------------------------------------------------------------------
# brute-force oracles


def characteristic(S: Sequence[int], n: int) -> tuple[int, ...]:
    x = [0] * n
    for j in S:
        x[j] = 1
    return tuple(x)


def enumerate_common_bases(pair: VectorialMatroidPair, cap: int = DEFAULT_BASES_CAP
                           ) -> ExplicitFeasibleSet:
    """Characteristic vectors of all common bases (lexicographic order of the subsets)."""
    if math.comb(pair.n, pair.r) > cap:
        raise HarnessError(f"C({pair.n},{pair.r}) exceeds the enumeration cap {cap}")
    pts = [characteristic(S, pair.n) for S in itertools.combinations(range(pair.n), pair.r)
           if is_common_base(pair, S)]
    return ExplicitFeasibleSet(tuple(pts), FeasibleMeta(pair.r, pair.n))


def brute_force_opt(F: ExplicitFeasibleSet, W, f: ObjectiveOracle, sense: str = "max"):
    """Exhaustive optimum; ties go to the lex-smallest image, then the lex-largest point.

    Returns ``(x, value)``.
    """
    if not F.points:
        raise EmptyFeasibleSetError("feasible set is empty")
    Wd = materialize(as_weights(W))
    best = None
    for x in F.points:
        u = matvec(Wd, x)
        v = f(u)
        key = (v, u, x)
        if best is None:
            best = key
            continue
        bv, bu, bx = best
        if (v > bv if sense == "max" else v < bv) or (v == bv and (u < bu or (u == bu and x > bx))):
            best = key
    return best[2], best[0]


def brute_images(F: ExplicitFeasibleSet, W) -> list[tuple]:
    Wd = materialize(as_weights(W))
    return sorted({matvec(Wd, x) for x in F.points})


def brute_image_optimum(pair: VectorialMatroidPair, W, f: ObjectiveOracle, sense: str = "max"):
    """Optimal image over all common bases of ``pair`` (None if there are none)."""
    best, best_val = None, None
    for S in itertools.combinations(range(pair.n), pair.r):
        if not is_common_base(pair, S):
            continue
        u = tuple(sum(row[j] for j in S) for row in W)
        v = f(u)
        if best is None or (v > best_val if sense == "max" else v < best_val) or (
                v == best_val and u < best):
            best, best_val = u, v
    return best


def brute_support(pair: VectorialMatroidPair, W, a: Sequence[int]) -> dict:
    """``g_u(a) = sum det(M1^x) det(M2^x) a^x`` over common bases with ``Wx = u``."""
    out: dict = {}
    for S in itertools.combinations(range(pair.n), pair.r):
        d1, d2 = base_dets(pair, S)
        if d1 == 0 or d2 == 0:
            continue
        u = tuple(sum(row[j] for j in S) for row in W)
        out[u] = out.get(u, 0) + d1 * d2 * math.prod(a[j] for j in S)
    return {u: g for u, g in out.items() if g != 0}


# ---------------------------------------------------------------------------
# independent hull-vertex oracle (no LP)


def _affine_chart(points: list[tuple]) -> tuple[list[tuple], int]:
    """Project points injectively onto coordinates spanning their affine hull."""
    base = points[0]
    dirs = [[Fraction(a - b) for a, b in zip(p, base)] for p in points[1:]]
    if not dirs or not any(any(v for v in row) for row in dirs):
        return [() for _ in points], 0
    _, pivots = row_echelon(dirs)
    return [tuple(p[k] for k in pivots) for p in points], len(pivots)


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _hull2d(points: list[tuple]) -> set:
    pts = sorted(set(points))
    if len(pts) <= 2:
        return set(pts)
    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return set(lower[:-1] + upper[:-1])


def _hull3d(points: list[tuple]) -> set:
    verts = set()
    m = len(points)
    for i, j, k in itertools.combinations(range(m), 3):
        a, b, c = points[i], points[j], points[k]
        u = [b[t] - a[t] for t in range(3)]
        v = [c[t] - a[t] for t in range(3)]
        nrm = (u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0])
        if nrm == (0, 0, 0):
            continue
        off = dot(nrm, a)
        side = [dot(nrm, p) - off for p in points]
        if all(s <= 0 for s in side) or all(s >= 0 for s in side):
            on = [p for p, s in zip(points, side) if s == 0]
            drop = next(t for t in range(3) if nrm[t] != 0)
            proj = {tuple(p[t] for t in range(3) if t != drop): p for p in on}
            verts.update(proj[q] for q in _hull2d(list(proj)))
    return verts


def _hull_general(points: list[tuple], k: int) -> set:
    verts = set()
    for p in points:
        others = [q for q in points if q != p]
        inside = False
        for size in range(2, k + 2):
            for sub in itertools.combinations(others, size):
                # barycentric solve: p = sum l_i sub_i, sum l_i = 1
                rows = [[Fraction(q[t]) for q in sub] + [Fraction(p[t])] for t in range(k)]
                rows.append([Fraction(1)] * size + [Fraction(1)])
                R, piv = row_echelon(rows)
                if size in piv:
                    continue
                if len(piv) < size:
                    continue
                lam = [R[i][size] for i in range(size)]
                if all(l >= 0 for l in lam):
                    inside = True
                    break
            if inside:
                break
        if not inside:
            verts.add(p)
    return verts


def brute_vertices(points: Sequence[Sequence[int]]) -> list[tuple]:
    """Vertices of ``conv(points)`` for integer points, by exact geometry without LP."""
    pts = sorted({tuple(int(v) for v in p) for p in points})
    if len(pts) <= 1:
        return pts
    chart, k = _affine_chart(pts)
    back = dict(zip(chart, pts))
    if k == 0:
        return pts[:1]
    if k == 1:
        vals = sorted(chart)
        verts = {vals[0], vals[-1]}
    elif k == 2:
        verts = _hull2d(chart)
    elif k == 3:
        verts = _hull3d(chart)
    else:
        verts = _hull_general(chart, k)
    return sorted(back[v] for v in verts)


# ---------------------------------------------------------------------------
# separation oracle for conv(F)


def hull_separation(F: ExplicitFeasibleSet) -> SeparationOracle:
    """Separation oracle for ``conv(F)``.

    Non-membership is certified by the Farkas-dual LP
    ``max g.q - h  s.t.  g.p <= h for p in F, -1 <= g <= 1``;
    a positive optimum gives the violated inequality ``g.x <= h``.
    """
    if not F.points:
        raise EmptyFeasibleSetError("feasible set is empty")
    n = F.n
    rows, rhs = [], []
    for p in F.points:
        rows.append(list(p) + [-1])
        rhs.append(0)
    for k in range(n):
        e = [0] * (n + 1)
        e[k] = 1
        rows.append(e)
        rhs.append(1)
        e = [0] * (n + 1)
        e[k] = -1
        rows.append(e)
        rhs.append(1)
    dual = HPolytope(tuple(rows), tuple(rhs), dim=n + 1)

    def separate(q):
        q = frac_vector(q)
        res = lp_solve(dual, list(q) + [-1], "max")
        if res.value <= 0:
            return None
        g, h = res.point[:n], res.point[n]
        return g, h

    lower = [min(p[k] for p in F.points) for k in range(n)]
    upper = [max(p[k] for p in F.points) for k in range(n)]
    return SeparationOracle(lower, upper, separate, "hull")


# ---------------------------------------------------------------------------
# instance generation

KINDS = ("uniform-matroid-pair", "graphic-like", "transversal-like", "permutation-matrices",
         "random-points")


def _random_weights(rng: random.Random, d: int, n: int, wmax: int, wmin: int = 0):
    return tuple(tuple(rng.randint(wmin, wmax) for _ in range(n)) for _ in range(d))


def _has_common_base(pair: VectorialMatroidPair) -> bool:
    return any(is_common_base(pair, S) for S in itertools.combinations(range(pair.n), pair.r))


def _incidence(nv: int, edges: Sequence[tuple[int, int]]) -> tuple:
    # directed incidence with the last vertex row dropped: graphic matroid over Q
    rows = []
    for v in range(nv - 1):
        rows.append(tuple(1 if e[0] == v else -1 if e[1] == v else 0 for e in edges))
    return tuple(rows)


def _random_tree_plus(rng: random.Random, nv: int, ne: int) -> list[tuple[int, int]]:
    edges = []
    for v in range(1, nv):
        edges.append((rng.randrange(v), v))
    while len(edges) < ne:
        a, b = rng.sample(range(nv), 2)
        edges.append((a, b))
    rng.shuffle(edges)
    return edges


def gen_instance(kind: str, params: Optional[dict] = None, seed: int = 0,
                 max_retries: int = 100) -> Instance:
    """Reproducible random instance; the seed fully determines the output."""
    params = dict(params or {})
    rng = random.Random(seed)
    d = int(params.get("d", 1))
    wmax = int(params.get("wmax", 3))
    wmin = int(params.get("wmin", 0))
    objective = params.get("objective", "pnorm:2")
    sense = params.get("sense", "max")
    meta = {"kind": kind, "seed": seed, "params": params}
    if kind == "random-points":
        n = int(params.get("n", 4))
        beta = int(params.get("beta", 3))
        count = int(params.get("count", 10))
        pool = [p for p in itertools.product(range(beta + 1), repeat=n) if sum(p) <= beta]
        if count > len(pool):
            raise HarnessError(f"only {len(pool)} points with n={n}, beta={beta}")
        pts = sorted(rng.sample(pool, count))
        F = ExplicitFeasibleSet(tuple(pts), FeasibleMeta(beta, n))
        W = _random_weights(rng, d, n, wmax, wmin)
        return Instance(F, GeneralizedUnaryWeights.unary(W), objective, sense,
                        name=f"{kind}-{seed}", meta=meta)
    if kind == "permutation-matrices":
        k = int(params.get("size", 3))
        pts = []
        for perm in itertools.permutations(range(k)):
            x = [0] * (k * k)
            for i, j in enumerate(perm):
                x[i * k + j] = 1
            pts.append(tuple(x))
        F = ExplicitFeasibleSet(tuple(sorted(pts)), FeasibleMeta(k, k * k))
        W = _random_weights(rng, d, k * k, wmax, wmin)
        return Instance(F, GeneralizedUnaryWeights.unary(W), objective, sense,
                        name=f"{kind}-{seed}", meta=meta)
    n = int(params.get("n", 4))
    r = int(params.get("r", 2))
    if r < 1 or r > n:
        raise HarnessError("need 1 <= r <= n")
    for _ in range(max_retries):
        if kind == "uniform-matroid-pair":
            if str(params.get("generic", True)).lower() not in ("0", "false", "no"):
                M = tuple(tuple((j + 1) ** i for j in range(n)) for i in range(r))
                M1, M2 = M, M
            else:
                M1 = tuple(tuple(rng.randint(-3, 3) for _ in range(n)) for _ in range(r))
                M2 = tuple(tuple(rng.randint(-3, 3) for _ in range(n)) for _ in range(r))
        elif kind == "graphic-like":
            M1 = _incidence(r + 1, _random_tree_plus(rng, r + 1, n))
            M2 = _incidence(r + 1, _random_tree_plus(rng, r + 1, n))
        elif kind == "transversal-like":
            density = float(params.get("density", 0.6))
            M1 = tuple(tuple(rng.randint(1, 5) if rng.random() < density else 0 for _ in range(n))
                       for _ in range(r))
            M2 = tuple(tuple(rng.randint(1, 5) if rng.random() < density else 0 for _ in range(n))
                       for _ in range(r))
        else:
            raise HarnessError(f"unknown instance kind {kind!r}; known: {KINDS}")
        pair = VectorialMatroidPair(M1, M2)
        if gaussian_rank(M1) != r or gaussian_rank(M2) != r or not _has_common_base(pair):
            continue
        W = _random_weights(rng, d, n, wmax, wmin)
        return Instance(pair, GeneralizedUnaryWeights.unary(W), objective, sense,
                        name=f"{kind}-{seed}", meta=meta)
    raise NoCommonBase(f"no valid {kind} instance after {max_retries} retries")
