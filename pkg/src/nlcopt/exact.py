"""Exact real numbers of the form ``q + sum_i c_i * r_i**(1/k_i)``.

Objective values of p-norms (and things like ``||u||_1 - ||u||_p``) are
sums of rational multiples of real radicals of nonnegative rationals.
:class:`Surd` stores them symbolically and compares them exactly:

* zero-testing uses the linear independence over Q of real radicals whose
  pairwise ratios are irrational, after grouping radicals with rational
  ratios into one class;
* the sign of a nonzero value is found by interval refinement with
  integer k-th roots.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import total_ordering
from numbers import Rational


def iroot(n: int, k: int) -> int:
    """floor(n ** (1/k)) for n >= 0."""
    if n < 0:
        raise ValueError("iroot of a negative number")
    if n < 2 or k == 1:
        return n
    x = 1 << ((n.bit_length() + k - 1) // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    while x ** k > n:
        x -= 1
    while (x + 1) ** k <= n:
        x += 1
    return x


def exact_root(r: Fraction, k: int) -> Fraction | None:
    """``r**(1/k)`` if it is rational, else None."""
    if r < 0:
        raise ValueError("radicand must be nonnegative")
    a, b = r.numerator, r.denominator
    ra, rb = iroot(a, k), iroot(b, k)
    if ra ** k == a and rb ** k == b:
        return Fraction(ra, rb)
    return None


def _root_bounds(r: Fraction, k: int, bits: int) -> tuple[Fraction, Fraction]:
    M = 1 << bits
    lo = iroot(r.numerator * M ** k // r.denominator, k)
    return Fraction(lo, M), Fraction(lo + 1, M)


def _key(r: Fraction, k: int) -> tuple[Fraction, int]:
    """Canonical (radicand, index) for r**(1/k): the smallest index expressing it."""
    best = (r, k)
    for d in sorted((d for d in range(2, k + 1) if k % d == 0), reverse=True):
        s = exact_root(r, d)
        if s is not None:
            best = (s, k // d)
            break
    return best


@total_ordering
class Surd:
    """Exact value ``q + sum c * r**(1/k)`` with rational q, c and r >= 0."""

    __slots__ = ("q", "terms")

    def __init__(self, q=0, terms=None):
        q = Fraction(q)
        merged: dict[tuple[Fraction, int], Fraction] = {}
        for (r, k), c in (terms or {}).items():
            r, c, k = Fraction(r), Fraction(c), int(k)
            if k < 1:
                raise ValueError("root index must be positive")
            if c == 0 or r == 0:
                continue
            root = exact_root(r, k)
            if root is not None:
                q += c * root
                continue
            key = _key(r, k)
            merged[key] = merged.get(key, Fraction(0)) + c
        self.q = q
        self.terms = {key: c for key, c in merged.items() if c != 0}

    @classmethod
    def root(cls, r, k: int) -> "Surd":
        return cls(0, {(Fraction(r), k): Fraction(1)})

    @classmethod
    def coerce(cls, v) -> "Surd":
        if isinstance(v, Surd):
            return v
        if isinstance(v, (int, Rational)):
            return cls(Fraction(v))
        raise TypeError(f"cannot convert {type(v).__name__} to Surd")

    @property
    def is_rational(self) -> bool:
        return not self.terms

    def as_fraction(self) -> Fraction:
        if self.terms:
            raise ValueError("value is irrational")
        return self.q

    def simplify(self):
        return self.q if not self.terms else self

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        try:
            other = Surd.coerce(other)
        except TypeError:
            return NotImplemented
        terms = dict(self.terms)
        for key, c in other.terms.items():
            terms[key] = terms.get(key, Fraction(0)) + c
        return Surd(self.q + other.q, terms)

    __radd__ = __add__

    def __neg__(self):
        return Surd(-self.q, {key: -c for key, c in self.terms.items()})

    def __sub__(self, other):
        try:
            other = Surd.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return Surd.coerce(other) - self

    def __mul__(self, other):
        try:
            other = Surd.coerce(other)
        except TypeError:
            return NotImplemented
        a = [((Fraction(1), 1), self.q)] + list(self.terms.items())
        b = [((Fraction(1), 1), other.q)] + list(other.terms.items())
        terms: dict = {}
        for (r1, k1), c1 in a:
            for (r2, k2), c2 in b:
                if c1 == 0 or c2 == 0:
                    continue
                k = k1 * k2 // math.gcd(k1, k2)
                r = r1 ** (k // k1) * r2 ** (k // k2)
                terms[(r, k)] = terms.get((r, k), Fraction(0)) + c1 * c2
        return Surd(0, terms)

    __rmul__ = __mul__

    # -- comparison --------------------------------------------------------

    def _is_zero(self) -> bool:
        # group irrational radicals into classes with rational pairwise ratios
        classes: list[list] = []  # [representative (r, k), coefficient]
        for (r, k), c in self.terms.items():
            for cls_ in classes:
                r0, k0 = cls_[0]
                L = k * k0 // math.gcd(k, k0)
                ratio = r ** (L // k) / r0 ** (L // k0)
                rho = exact_root(ratio, L)
                if rho is not None:
                    cls_[1] += c * rho
                    break
            else:
                classes.append([(r, k), c])
        return self.q == 0 and all(c == 0 for _, c in classes)

    def sign(self) -> int:
        if not self.terms:
            return (self.q > 0) - (self.q < 0)
        if self._is_zero():
            return 0
        bits = 32
        while True:
            lo = hi = self.q
            for (r, k), c in self.terms.items():
                a, b = _root_bounds(r, k, bits)
                if c > 0:
                    lo += c * a
                    hi += c * b
                else:
                    lo += c * b
                    hi += c * a
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            bits *= 2

    def _cmp(self, other) -> int:
        return (self - Surd.coerce(other)).sign()

    def __eq__(self, other):
        try:
            return self._cmp(other) == 0
        except TypeError:
            return NotImplemented

    def __lt__(self, other):
        try:
            return self._cmp(other) < 0
        except TypeError:
            return NotImplemented

    def __hash__(self):
        if not self.terms or (self - self.q).sign() == 0:
            return hash(self.q)
        # equal irrational values may have different term layouts
        return hash("Surd")

    def __float__(self):
        v = float(self.q)
        for (r, k), c in self.terms.items():
            v += float(c) * float(r) ** (1.0 / k)
        return v

    def __repr__(self):
        return f"Surd({self})"

    def __str__(self):
        parts = []
        if self.q or not self.terms:
            parts.append(str(self.q))
        for (r, k), c in sorted(self.terms.items()):
            rad = f"{r}^(1/{k})"
            if c == 1:
                parts.append(rad)
            elif c == -1:
                parts.append(f"-{rad}")
            else:
                parts.append(f"{c}*{rad}")
        return " + ".join(parts).replace("+ -", "- ")


def to_exact(v):
    """Normalise an objective value: rationals become Fraction, radicals stay Surd."""
    if isinstance(v, Surd):
        return v.simplify()
    if isinstance(v, bool):
        return Fraction(int(v))
    if isinstance(v, (int, Rational)):
        return Fraction(v)
    return v


def exact_repr(v) -> dict:
    """JSON-friendly exact encoding plus a float approximation for reading."""
    v = to_exact(v)
    if isinstance(v, Fraction):
        return {"exact": f"{v.numerator}/{v.denominator}" if v.denominator != 1 else str(v.numerator),
                "approx": float(v)}
    if isinstance(v, Surd):
        return {"exact": str(v), "approx": float(v)}
    return {"exact": repr(v), "approx": float(v)}
