"""Objective functions accessed through exact evaluation and comparison.

Values are ``Fraction`` when rational and :class:`~nlcopt.exact.Surd` when
they involve radicals (p-norms), so comparisons never go through floats.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .exact import Surd, to_exact
from .linalg import frac_vector

INF = math.inf


class ObjectiveError(ValueError):
    pass


def _check_p(p):
    if p == INF or p in ("inf", "oo", "infinity"):
        return INF
    if isinstance(p, float) and not p.is_integer():
        raise ObjectiveError("only integer p or infinity are supported")
    if Fraction(p).denominator != 1:
        raise ObjectiveError("only integer p or infinity are supported")
    p = int(p)
    if p < 1:
        raise ObjectiveError(f"p must be at least 1, got {p}")
    return p


def pnorm_value(u: Sequence, p) -> Fraction | Surd:
    u = frac_vector(u)
    if p == INF:
        return max((abs(v) for v in u), default=Fraction(0))
    if p == 1:
        return sum((abs(v) for v in u), Fraction(0))
    s = sum((abs(v) ** p for v in u), Fraction(0))
    return to_exact(Surd.root(s, p))


@dataclass(frozen=True)
class ObjectiveOracle:
    """An objective ``f: R^d -> R`` with an exact total preorder.

    ``p`` is set for p-norm-like families; ``power`` is set when ``f`` is a
    nonnegative function whose values are compared through ``f**power``.
    """

    kind: str
    func: Callable = field(compare=False, repr=False)
    name: str = ""
    p: object = None
    params: tuple = ()

    def evaluate(self, u: Sequence):
        return to_exact(self.func(frac_vector(u)))

    __call__ = evaluate

    def compare(self, u: Sequence, v: Sequence) -> int:
        a, b = self.evaluate(u), self.evaluate(v)
        return (a > b) - (a < b)

    @property
    def spec(self) -> str:
        return self.name or self.kind

    @property
    def is_norm(self) -> bool:
        return self.kind == "pnorm"


def pnorm(p) -> ObjectiveOracle:
    p = _check_p(p)
    label = "inf" if p == INF else str(p)
    return ObjectiveOracle("pnorm", lambda u: pnorm_value(u, p), f"pnorm:{label}", p)


def power_sum(p: int) -> ObjectiveOracle:
    """``sum |u_i|**p`` (e.g. the squared 2-norm for p = 2)."""
    p = _check_p(p)
    if p == INF:
        raise ObjectiveError("power-sum needs a finite p")
    return ObjectiveOracle("power-sum", lambda u: sum((abs(v) ** p for v in u), Fraction(0)),
                           f"power-sum:{p}", p)


def linear(w: Sequence) -> ObjectiveOracle:
    w = frac_vector(w)

    def f(u):
        if len(u) != len(w):
            raise ObjectiveError(f"linear objective of length {len(w)} applied to length {len(u)}")
        return sum((a * b for a, b in zip(w, u)), Fraction(0))

    return ObjectiveOracle("linear", f, "linear:" + ",".join(str(v) for v in w), params=w)


def identity() -> ObjectiveOracle:
    """``f(u) = u_1`` on one-dimensional images."""
    return ObjectiveOracle("linear", lambda u: u[0], "linear:1", params=(Fraction(1),))


def max_coordinate() -> ObjectiveOracle:
    return ObjectiveOracle("max-coordinate", lambda u: max(u), "max-coordinate")


def min_coordinate() -> ObjectiveOracle:
    return ObjectiveOracle("min-coordinate", lambda u: min(u), "min-coordinate")


def l1_minus_lp(p) -> ObjectiveOracle:
    """``||u||_1 - ||u||_p``: ray-concave and non-decreasing on the nonnegative orthant."""
    p = _check_p(p)
    label = "inf" if p == INF else str(p)
    return ObjectiveOracle("l1-minus-lp",
                           lambda u: Surd.coerce(pnorm_value(u, 1)) - Surd.coerce(pnorm_value(u, p)),
                           f"l1-minus-lp:{label}", p)


def product() -> ObjectiveOracle:
    """``prod u_i``: ray-convex, not ray-concave."""
    return ObjectiveOracle("product", lambda u: math.prod(u, start=Fraction(1)), "product")


def negated(f: ObjectiveOracle) -> ObjectiveOracle:
    return ObjectiveOracle("negated", lambda u: -Surd.coerce(f.func(u)), f"neg:{f.spec}", f.p, (f,))


def shifted(f: ObjectiveOracle, offset: Sequence) -> ObjectiveOracle:
    """``u -> f(u - offset)``."""
    offset = frac_vector(offset)
    if not any(offset):
        return f

    def g(u):
        return f.func(tuple(a - b for a, b in zip(u, offset)))

    return ObjectiveOracle("shifted", g, f.spec, f.p, (f, offset))


def custom(func: Callable, name: str = "custom") -> ObjectiveOracle:
    return ObjectiveOracle("custom", func, f"custom:{name}")


CUSTOM_REGISTRY: dict[str, Callable[[], ObjectiveOracle]] = {
    "identity": identity,
    "max-coordinate": max_coordinate,
    "min-coordinate": min_coordinate,
    "product": product,
}


def parse_objective(text: str, d: Optional[int] = None) -> ObjectiveOracle:
    """Parse ``pnorm:<p>``, ``power-sum:<p>``, ``linear[:w1,...]``, ``l1-minus-lp:<p>``,
    ``max-coordinate``, ``min-coordinate``, ``identity``, ``product``, ``custom:<name>``
    or ``neg:<spec>``."""
    text = text.strip()
    head, _, arg = text.partition(":")
    if head == "neg":
        return negated(parse_objective(arg, d))
    if head == "pnorm":
        return pnorm(arg or 2)
    if head == "power-sum":
        return power_sum(arg or 2)
    if head == "l1-minus-lp":
        return l1_minus_lp(arg or "inf")
    if head == "linear":
        if arg:
            return linear([Fraction(v) for v in arg.split(",")])
        if d is None:
            raise ObjectiveError("linear objective without weights needs the image dimension")
        return linear([1] * d)
    if head == "custom":
        if arg not in CUSTOM_REGISTRY:
            raise ObjectiveError(f"unknown custom objective {arg!r}; known: {sorted(CUSTOM_REGISTRY)}")
        return CUSTOM_REGISTRY[arg]()
    if head in CUSTOM_REGISTRY:
        return CUSTOM_REGISTRY[head]()
    raise ObjectiveError(f"cannot parse objective {text!r}")


# ---------------------------------------------------------------------------
# norm-equivalence constants


@dataclass(frozen=True)
class NormConstants:
    """``C_lower * ||u||_inf <= f(u) <= C_upper * ||u||_inf``."""

    C_lower: object
    C_upper: object
    d: Optional[int] = None
    p: object = None

    def __post_init__(self):
        lo, hi = to_exact(self.C_lower), to_exact(self.C_upper)
        if not lo > 0:
            raise ObjectiveError("C_lower must be positive")
        if lo > hi:
            raise ObjectiveError("C_lower must not exceed C_upper")
        object.__setattr__(self, "C_lower", lo)
        object.__setattr__(self, "C_upper", hi)

    @property
    def ratio(self):
        lo = self.C_lower
        if isinstance(lo, Surd):
            raise ObjectiveError("ratio needs a rational C_lower")
        return to_exact(Surd.coerce(self.C_upper) * (1 / lo))


def norm_constants_pnorm(p, d: int) -> NormConstants:
    p = _check_p(p)
    if d < 1:
        raise ObjectiveError("d must be positive")
    upper = Fraction(1) if p == INF else to_exact(Surd.root(d, p))
    return NormConstants(Fraction(1), upper, d, p)


def estimate_norm_constants(f: ObjectiveOracle, d: int, resolution: int = 4) -> NormConstants:
    """Certified constants for a norm given only by evaluations.

    The upper constant is ``sum_i f(e_i)`` (triangle inequality). The lower one
    is the minimum over a grid on the boundary of the infinity-norm unit ball,
    less the Lipschitz slack ``C_upper / resolution`` of the grid spacing.
    """
    if resolution < 1:
        raise ObjectiveError("resolution must be positive")
    basis = [[Fraction(int(i == j)) for j in range(d)] for i in range(d)]
    upper = to_exact(sum((Surd.coerce(f(e)) for e in basis), Surd(0)))
    ticks = [Fraction(-resolution + 2 * k, resolution) for k in range(resolution + 1)]
    best = None
    for axis in range(d):
        for sgn in (1, -1):
            for rest in itertools.product(ticks, repeat=d - 1):
                u = list(rest[:axis]) + [Fraction(sgn)] + list(rest[axis:])
                v = f(u)
                if best is None or v < best:
                    best = v
    lower = to_exact(Surd.coerce(best) - Surd.coerce(upper) * Fraction(1, resolution))
    if not lower > 0:
        raise ObjectiveError(
            f"grid of resolution {resolution} too coarse for a positive lower constant")
    if isinstance(lower, Surd):
        # keep C_lower rational so the ratio stays a radical expression
        lower = _rational_below(lower)
    return NormConstants(lower, upper, d)


def _rational_below(v: Surd) -> Fraction:
    x = Fraction(math.floor(float(v) * 2 ** 20), 2 ** 20)
    while not x < v:
        x -= Fraction(1, 2 ** 20)
    return x
