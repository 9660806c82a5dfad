"""Generalized unary encoding of weight matrices and the image grid."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

from .objectives import ObjectiveOracle, shifted

DEFAULT_GRID_CAP = 10 ** 6


class WeightError(ValueError):
    pass


class GridCapExceeded(WeightError):
    pass


def _int_matrix(M) -> tuple[tuple[int, ...], ...]:
    out = []
    for row in M:
        r = []
        for v in row:
            if isinstance(v, bool) or int(v) != v:
                raise WeightError(f"weight entries must be integers, got {v!r}")
            r.append(int(v))
        out.append(tuple(r))
    return tuple(out)


@dataclass(frozen=True)
class GeneralizedUnaryWeights:
    """``W = sum_k a[k] * deltas[k]`` with small-entry layers and distinct positive ``a``."""

    deltas: tuple
    a: tuple

    def __post_init__(self):
        deltas = tuple(_int_matrix(D) for D in self.deltas)
        a = tuple(int(v) for v in self.a)
        if not deltas:
            raise WeightError("at least one weight layer is required")
        if len(deltas) != len(a):
            raise WeightError(f"{len(deltas)} layers but {len(a)} multipliers")
        if any(v <= 0 for v in a):
            raise WeightError("a_k must be positive")
        if len(set(a)) != len(a):
            raise WeightError("a_k must be pairwise distinct")
        d = len(deltas[0])
        n = len(deltas[0][0]) if d else 0
        if d < 1 or n < 1:
            raise WeightError("weight layers must be nonempty d x n matrices")
        for D in deltas:
            if len(D) != d or any(len(row) != n for row in D):
                raise WeightError("all layers must share the same d x n shape")
        object.__setattr__(self, "deltas", deltas)
        object.__setattr__(self, "a", a)

    @classmethod
    def unary(cls, W: Sequence[Sequence[int]]) -> "GeneralizedUnaryWeights":
        return cls((W,), (1,))

    @property
    def p(self) -> int:
        return len(self.a)

    @property
    def d(self) -> int:
        return len(self.deltas[0])

    @property
    def n(self) -> int:
        return len(self.deltas[0][0])

    @property
    def omega(self) -> int:
        return max(abs(v) for D in self.deltas for row in D for v in row)


@dataclass(frozen=True)
class FeasibleMeta:
    """Every feasible point is a nonnegative integer vector with coordinate sum <= beta."""

    beta: int
    n: int

    def __post_init__(self):
        if int(self.beta) != self.beta or self.beta < 0:
            raise WeightError("beta must be a nonnegative integer")
        if self.n < 1:
            raise WeightError("n must be positive")


def as_weights(W) -> GeneralizedUnaryWeights:
    if isinstance(W, GeneralizedUnaryWeights):
        return W
    return GeneralizedUnaryWeights.unary(W)


def materialize(W) -> tuple[tuple[int, ...], ...]:
    W = as_weights(W)
    return tuple(
        tuple(sum(a * D[i][j] for a, D in zip(W.a, W.deltas)) for j in range(W.n))
        for i in range(W.d)
    )


def grid_size_bound(W: GeneralizedUnaryWeights, meta: FeasibleMeta) -> int:
    return (2 * W.omega * meta.beta + 1) ** (W.p * W.d)


def coordinate_values(W: GeneralizedUnaryWeights, meta: FeasibleMeta) -> list[int]:
    """All sums ``sum_k a_k t_k`` with ``|t_k| <= omega * beta``, sorted."""
    bound = W.omega * meta.beta
    values = {0}
    for a in W.a:
        values = {v + a * t for v in values for t in range(-bound, bound + 1)}
    return sorted(values)


def candidate_image_grid(W, meta: FeasibleMeta, cap: int = DEFAULT_GRID_CAP,
                         box: Optional[Sequence[tuple]] = None) -> list[tuple[int, ...]]:
    """Integer points that can be images ``Wx`` of feasible ``x``.

    The grid is a product of per-coordinate value sets, deduplicated and sorted
    lexicographically. ``box`` optionally clips coordinate i to ``box[i]``.
    """
    W = as_weights(W)
    if meta.n != W.n:
        raise WeightError(f"weights have n={W.n} but the feasible set has n={meta.n}")
    size = grid_size_bound(W, meta)
    if size > cap:
        raise GridCapExceeded(f"candidate grid would have {size} points, cap is {cap}")
    values = coordinate_values(W, meta)
    axes = []
    for i in range(W.d):
        if box is None:
            axes.append(values)
        else:
            lo, hi = box[i]
            axes.append([v for v in values if lo <= v <= hi])
    return [tuple(u) for u in itertools.product(*axes)]


def nonneg_shift(W: Sequence[Sequence[int]], r: int, f: ObjectiveOracle):
    """Make ``W`` nonnegative for sets whose points all have exactly ``r`` unit entries.

    Returns ``(W', f', v)`` with ``W' = W + v`` entrywise and ``f'(u) = f(u - r*v*1)``.
    """
    W = _int_matrix(W)
    if r < 1:
        raise WeightError("r must be positive")
    v = max(0, -min(x for row in W for x in row))
    if v == 0:
        return W, f, 0
    W2 = tuple(tuple(x + v for x in row) for row in W)
    return W2, shifted(f, [r * v] * len(W)), v
