"""Randomized nonlinear matroid intersection for matroids given by integer matrices.

The coefficient ``g_u(a)`` of ``b^u`` in ``det(M1(gamma) M2^T)`` is a signed,
``a``-weighted count of the common bases with image ``u``. Substituting random
integers for ``a`` and points of the moment curve for ``b`` turns the support
of that polynomial into an interpolation problem.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from .linalg import bigint_det, gaussian_rank, solve_square
from .objectives import ObjectiveOracle
from .weights import nonneg_shift

DEFAULT_SUPPORT_CAP = 10 ** 4
DEFAULT_DIGIT_CAP = 10 ** 6
DEFAULT_BASES_CAP = 10 ** 6


class MatroidError(ValueError):
    pass


class NoCommonBase(MatroidError):
    pass


class SupportCapExceeded(MatroidError):
    pass


def _int_rows(M) -> tuple[tuple[int, ...], ...]:
    rows = tuple(tuple(int(v) for v in row) for row in M)
    for row, orig in zip(rows, M):
        if list(row) != [v for v in orig]:
            raise MatroidError("matroid matrices must have integer entries")
    return rows


@dataclass(frozen=True)
class VectorialMatroidPair:
    """Two ``r x n`` integer matrices on a common ground set.

    ``columns`` maps local column indices back to the original ground set
    (identity unless the pair was produced by :func:`restrict`).
    """

    M1: tuple
    M2: tuple
    columns: tuple = ()

    def __post_init__(self):
        M1, M2 = _int_rows(self.M1), _int_rows(self.M2)
        if not M1 or not M2:
            raise MatroidError("matrices must have at least one row")
        r, n = len(M1), len(M1[0])
        if len(M2) != r:
            raise MatroidError("common rank required: M1 and M2 have different row counts")
        if any(len(row) != n for row in M1 + M2):
            raise MatroidError("M1 and M2 must both be r x n")
        cols = tuple(self.columns) if self.columns else tuple(range(n))
        if len(cols) != n:
            raise MatroidError("column map has the wrong length")
        object.__setattr__(self, "M1", M1)
        object.__setattr__(self, "M2", M2)
        object.__setattr__(self, "columns", cols)

    @property
    def r(self) -> int:
        return len(self.M1)

    @property
    def n(self) -> int:
        return len(self.M1[0])

    @classmethod
    def validated(cls, M1, M2, bases_cap: int = DEFAULT_BASES_CAP) -> "VectorialMatroidPair":
        """Construct and check full common rank and existence of a common base."""
        pair = cls(M1, M2)
        r = pair.r
        if gaussian_rank(pair.M1) != r or gaussian_rank(pair.M2) != r:
            raise MatroidError("common rank required: rank(M1) = rank(M2) = r")
        if math.comb(pair.n, r) > bases_cap:
            raise MatroidError(f"C({pair.n},{r}) exceeds the brute-force cap {bases_cap}")
        if not any(is_common_base(pair, S) for S in itertools.combinations(range(pair.n), r)):
            raise NoCommonBase("the matroids have no common base")
        return pair


def submatrix(M, S: Sequence[int]):
    return [[row[j] for j in S] for row in M]


def base_dets(pair: VectorialMatroidPair, S: Sequence[int]) -> tuple[int, int]:
    return bigint_det(submatrix(pair.M1, S)), bigint_det(submatrix(pair.M2, S))


def is_common_base(pair: VectorialMatroidPair, S: Sequence[int]) -> bool:
    if len(S) != pair.r:
        return False
    d1, d2 = base_dets(pair, S)
    return d1 != 0 and d2 != 0


def restrict(pair: VectorialMatroidPair, S: Sequence[int]) -> VectorialMatroidPair:
    """Column restriction to the local indices ``S`` (order preserved); ranks are not rechecked."""
    S = sorted(set(S))
    if not S:
        raise MatroidError("restriction to an empty set")
    return VectorialMatroidPair(tuple(map(tuple, submatrix(pair.M1, S))),
                                tuple(map(tuple, submatrix(pair.M2, S))),
                                tuple(pair.columns[j] for j in S))


def _check_weights(W, n: int) -> tuple[tuple[int, ...], ...]:
    W = tuple(tuple(int(v) for v in row) for row in W)
    if not W or any(len(row) != n for row in W):
        raise MatroidError(f"W must be d x {n}")
    if any(v < 0 for row in W for v in row):
        raise MatroidError("W must be nonnegative here; apply nonneg_shift first")
    return W


def grid_bound(pair: VectorialMatroidPair, W) -> int:
    """``z = r * max W``: every image of a common base lies in ``{0..z}^d``."""
    return pair.r * max(v for row in W for v in row)


def _exponents(W, z: int) -> list[int]:
    # gamma_j(t) = a_j * t**e_j with e_j = sum_i W_ij (z+1)**i
    d = len(W)
    return [sum(W[i][j] * (z + 1) ** i for i in range(d)) for j in range(len(W[0]))]


def gamma_subst_det(pair: VectorialMatroidPair, W, a: Sequence[int], t: int,
                    z: Optional[int] = None, digit_cap: int = DEFAULT_DIGIT_CAP) -> int:
    """``det(M1(gamma(t)) M2^T)`` with ``b_i = t**((z+1)**(i-1))``."""
    W = _check_weights(W, pair.n)
    if len(a) != pair.n or any(int(v) < 1 for v in a):
        raise MatroidError("a must be a positive integer vector of length n")
    if t < 1:
        raise MatroidError("t must be a positive integer")
    if z is None:
        z = grid_bound(pair, W)
    exps = _exponents(W, z)
    if t > 1:
        digits = max(exps) * pair.r * math.log10(t)
        if digits > digit_cap:
            raise SupportCapExceeded(f"determinant would need about {digits:.0f} digits")
    gamma = [int(aj) * t ** e for aj, e in zip(a, exps)]
    r = pair.r
    M = [[sum(pair.M1[k][j] * gamma[j] * pair.M2[l][j] for j in range(pair.n))
          for l in range(r)] for k in range(r)]
    return bigint_det(M)


def _index_to_u(k: int, z: int, d: int) -> tuple[int, ...]:
    u = []
    for _ in range(d):
        k, rem = divmod(k, z + 1)
        u.append(rem)
    return tuple(u)


def solve_moment_newton(values: Sequence[int]) -> list[int]:
    """Coefficients ``c`` with ``sum_k c_k t**k = values[t-1]`` for ``t = 1..N``.

    Newton form on the nodes 1..N, scaled by ``(N-1)!`` so every step stays in
    the integers; the result must be integral and is checked to be.
    """
    N = len(values)
    diffs = [int(v) for v in values]
    newton = []
    for k in range(N):
        newton.append(diffs[0])
        diffs = [diffs[i + 1] - diffs[i] for i in range(len(diffs) - 1)]
    # c_k = Delta^k y_1 / k!, scale by (N-1)!
    scale = math.factorial(N - 1)
    scaled = [newton[k] * (scale // math.factorial(k)) for k in range(N)]
    poly = [scaled[N - 1]]
    for k in range(N - 2, -1, -1):
        node = k + 1
        nxt = [0] * (len(poly) + 1)
        for i, c in enumerate(poly):
            nxt[i + 1] += c
            nxt[i] -= node * c
        nxt[0] += scaled[k]
        poly = nxt
    out = []
    for c in poly:
        q, rem = divmod(c, scale)
        if rem:
            raise ArithmeticError("interpolated coefficient is not an integer")
        out.append(q)
    return out


def solve_moment_gauss(values: Sequence[int]) -> list[int]:
    """Same system solved by exact Gauss-Jordan elimination on the moment matrix."""
    N = len(values)
    V = [[t ** k for k in range(N)] for t in range(1, N + 1)]
    sol = solve_square(V, values)
    if any(v.denominator != 1 for v in sol):
        raise ArithmeticError("interpolated coefficient is not an integer")
    return [int(v) for v in sol]


@dataclass(frozen=True)
class SupportPolynomial:
    """Coefficients ``g_u(a)`` for all ``u`` in ``{0..z}^d`` (zero ones omitted)."""

    z: int
    d: int
    a: tuple
    entries: dict = field(default_factory=dict)

    @property
    def support(self) -> list[tuple[int, ...]]:
        return sorted(self.entries)

    def coefficient(self, u: Sequence[int]) -> int:
        return self.entries.get(tuple(u), 0)


def interpolate_support(pair: VectorialMatroidPair, W, a: Sequence[int],
                        cap: int = DEFAULT_SUPPORT_CAP, method: str = "newton",
                        digit_cap: int = DEFAULT_DIGIT_CAP) -> SupportPolynomial:
    """Recover every ``g_u(a)`` from ``(z+1)^d`` determinant evaluations."""
    W = _check_weights(W, pair.n)
    a = tuple(int(v) for v in a)
    d = len(W)
    z = grid_bound(pair, W)
    N = (z + 1) ** d
    if N > cap:
        raise SupportCapExceeded(f"(z+1)^d = {N} exceeds the cap {cap}")
    values = [gamma_subst_det(pair, W, a, t, z, digit_cap) for t in range(1, N + 1)]
    if method == "newton":
        coeffs = solve_moment_newton(values)
    elif method == "gauss":
        coeffs = solve_moment_gauss(values)
    else:
        raise ValueError(f"unknown interpolation method {method!r}")
    entries = {_index_to_u(k, z, d): c for k, c in enumerate(coeffs) if c != 0}
    return SupportPolynomial(z, d, a, entries)


@dataclass(frozen=True)
class RandomRun:
    seed: Optional[int]
    s: int
    draws: tuple
    outcome: Optional[tuple]
    support: tuple = ()


def default_range(pair: VectorialMatroidPair) -> int:
    return 2 * pair.r * (pair.n + 1)


def _pick(images, f: ObjectiveOracle, sense: str):
    best, best_val = None, None
    for u in sorted(images):
        v = f(u)
        if best is None or (v > best_val if sense == "max" else v < best_val):
            best, best_val = u, v
    return best


def random_image_optimum(pair: VectorialMatroidPair, W, f: ObjectiveOracle,
                         rng_seed=None, sense: str = "max", s: Optional[int] = None,
                         cap: int = DEFAULT_SUPPORT_CAP, rng: Optional[random.Random] = None
                         ) -> RandomRun:
    """f-best image among the random support; ``outcome`` is None when the support is empty."""
    if rng is None:
        rng = random.Random(rng_seed)
    s = default_range(pair) if s is None else s
    draws = tuple(rng.randint(1, s) for _ in range(pair.n))
    poly = interpolate_support(pair, W, draws, cap)
    support = poly.support
    outcome = _pick(support, f, sense) if support else None
    return RandomRun(rng_seed, s, draws, outcome, tuple(support))


@dataclass(frozen=True)
class CommonBaseResult:
    base: tuple
    u: Optional[tuple]
    value: object
    is_common_base: bool
    seeds: tuple = ()
    runs: tuple = ()


ImageOptimum = Callable[[VectorialMatroidPair, tuple, ObjectiveOracle, str], Optional[tuple]]


def _better_or_equal(f, cand, ref, sense: str) -> bool:
    # None stands for the virtual point at -inf (max) or +inf (min)
    if cand is None:
        return ref is None
    if ref is None:
        return True
    a, b = f(cand), f(ref)
    return a >= b if sense == "max" else a <= b


def _image(W, S) -> tuple[int, ...]:
    return tuple(sum(row[j] for j in S) for row in W)


def base_recovery(pair: VectorialMatroidPair, W, f: ObjectiveOracle, image_optimum: ImageOptimum,
                  sense: str = "max") -> tuple[int, ...]:
    """Deletion loop over the ground set using an optimal-image routine for subproblems.

    ``W`` and ``f`` must already be in nonnegative form; returns local column indices.
    """
    r = pair.r
    S = list(range(pair.n))

    def sub(T):
        Tl = sorted(T)
        return image_optimum(restrict(pair, Tl), tuple(tuple(row[j] for j in Tl) for row in W),
                             f, sense)

    u_star = sub(S)
    for j in range(pair.n):
        T = [k for k in S if k != j]
        if not T:
            continue
        if gaussian_rank(submatrix(pair.M1, T)) == r and gaussian_rank(submatrix(pair.M2, T)) == r:
            uT = sub(T)
            if _better_or_equal(f, uT, u_star, sense):
                S = T
    return tuple(S)


def optimal_common_base(pair: VectorialMatroidPair, W, f: ObjectiveOracle, rng_seed: int = 0,
                        repeats: int = 1, sense: str = "max",
                        image_optimum: Optional[ImageOptimum] = None,
                        cap: int = DEFAULT_SUPPORT_CAP) -> CommonBaseResult:
    """Common base maximising (or minimising) ``f(Wx)``, correct with probability >= 1/2 per run.

    With ``repeats > 1`` independent runs are made and the best common base kept.
    Passing ``image_optimum`` replaces the randomized subproblem solver.
    """
    if sense not in ("max", "min"):
        raise ValueError("sense must be 'max' or 'min'")
    if repeats < 1:
        raise ValueError("repeats must be positive")
    W = tuple(tuple(int(v) for v in row) for row in W)
    if not W or any(len(row) != pair.n for row in W):
        raise MatroidError(f"W must be d x {pair.n}")
    W2, f2, _ = nonneg_shift(W, pair.r, f)
    if repeats == 1:
        seeds = (rng_seed,)
    else:
        master = random.Random(rng_seed)
        seeds = tuple(master.getrandbits(64) for _ in range(repeats))
    results = []
    for seed in seeds:
        if image_optimum is None:
            rng = random.Random(seed)

            def opt(p, Wsub, g, sn, rng=rng):
                return random_image_optimum(p, Wsub, g, sense=sn, rng=rng, cap=cap).outcome
        else:
            opt = image_optimum
        local = base_recovery(pair, W2, f2, opt, sense)
        ok = is_common_base(pair, local)
        base = tuple(pair.columns[j] for j in local)
        u = _image(W, local) if ok else None
        results.append((base, u, ok))
    valid = [res for res in results if res[2]]
    if valid:
        best = _pick([res[1] for res in valid], f, sense)
        base, u, ok = min((res for res in valid if res[1] == best), key=lambda res: res[0])
        value = f(u)
    else:
        base, u, ok = results[0]
        value = None
    return CommonBaseResult(base, u, value, ok, seeds, tuple(results))
