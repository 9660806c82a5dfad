import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from nlcopt.harness import brute_image_optimum, brute_support, enumerate_common_bases, gen_instance
from nlcopt.linalg import matvec
from nlcopt.objectives import identity, negated, pnorm
from nlcopt.rand_intersect import (MatroidError, NoCommonBase, SupportCapExceeded,
                                   VectorialMatroidPair, gamma_subst_det, interpolate_support,
                                   optimal_common_base, random_image_optimum, restrict,
                                   solve_moment_gauss, solve_moment_newton)
from nlcopt.weights import materialize

ONES = VectorialMatroidPair([[1, 1]], [[1, 1]])
CANCEL = VectorialMatroidPair([[1, 1]], [[1, -1]])
THREE = VectorialMatroidPair([[1, 0, 1], [0, 1, 1]], [[1, 0, 1], [0, 1, 1]])


def test_gamma_subst_det_examples():
    assert gamma_subst_det(ONES, [[0, 1]], (1, 1), 1) == 2
    assert gamma_subst_det(ONES, [[0, 1]], (1, 1), 2) == 3
    assert gamma_subst_det(ONES, [[0, 1]], (2, 3), 2) == 8


def test_interpolation_examples():
    poly = interpolate_support(ONES, [[0, 1]], (1, 1))
    assert poly.coefficient((0,)) == 1 and poly.coefficient((1,)) == 1
    assert poly.support == [(0,), (1,)]
    poly = interpolate_support(ONES, [[0, 1]], (2, 3))
    assert poly.coefficient((0,)) == 2 and poly.coefficient((1,)) == 3
    poly = interpolate_support(CANCEL, [[0, 0]], (1, 1))
    assert poly.support == []


def test_interpolation_methods_agree():
    pair = VectorialMatroidPair([[1, 2, 0, 1], [0, 1, 1, 3]], [[2, 0, 1, 1], [1, 1, 0, 2]])
    W = [[1, 0, 2, 1], [0, 1, 1, 0]]
    a = (2, 1, 3, 1)
    assert interpolate_support(pair, W, a, method="newton") == interpolate_support(pair, W, a, method="gauss")


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(-10 ** 6, 10 ** 6), min_size=1, max_size=9))
def test_moment_solvers_recover_coefficients(coeffs):
    N = len(coeffs)
    values = [sum(c * t ** k for k, c in enumerate(coeffs)) for t in range(1, N + 1)]
    assert solve_moment_newton(values) == coeffs
    assert solve_moment_gauss(values) == coeffs


def test_support_cap():
    with pytest.raises(SupportCapExceeded):
        interpolate_support(THREE, [[3, 3, 3], [3, 3, 3]], (1, 1, 1), cap=10)


def test_negative_weights_rejected():
    with pytest.raises(MatroidError):
        interpolate_support(ONES, [[-1, 1]], (1, 1))


def test_random_image_optimum_examples():
    for seed in range(10):
        assert random_image_optimum(ONES, [[0, 1]], identity(), seed).outcome == (1,)
    single = VectorialMatroidPair([[1, 0]], [[1, 0]])
    for seed in range(5):
        assert random_image_optimum(single, [[2, 5]], identity(), seed).outcome == (2,)


def test_cancellation_exhaustive():
    run = random_image_optimum(CANCEL, [[0, 0]], identity(), 0)
    assert run.s == 6
    misses = 0
    for a in itertools.product(range(1, 7), repeat=2):
        empty = not interpolate_support(CANCEL, [[0, 0]], a).support
        assert empty == (a[0] == a[1])
        misses += empty
    assert Fraction(misses, 36) == Fraction(1, 6)


def test_restrict_examples():
    M = [[1, 0, 1], [0, 1, 1]]
    pair = VectorialMatroidPair(M, M)
    assert restrict(pair, [0, 1, 2]) == pair
    sub = restrict(pair, [0, 2])
    assert sub.M1 == ((1, 1), (0, 1)) and sub.columns == (0, 2)
    assert restrict(pair, [1]).M1 == ((0,), (1,))
    assert restrict(sub, [1]).columns == (2,)


def test_optimal_common_base_examples():
    res = optimal_common_base(THREE, [[1, 2, 3]], identity(), rng_seed=0)
    assert res.base == (1, 2) and res.u == (5,)
    res = optimal_common_base(THREE, [[1, 2, 3]], negated(identity()), rng_seed=0)
    assert res.base == (0, 1) and res.u == (3,)
    res = optimal_common_base(THREE, [[1, 2, 3]], identity(), rng_seed=0, sense="min")
    assert res.base == (0, 1)
    single = VectorialMatroidPair([[1, 0, 0], [0, 1, 0]], [[1, 0, 0], [0, 1, 0]])
    for f in (identity(), negated(identity())):
        assert optimal_common_base(single, [[4, 1, 9]], f, rng_seed=3).base == (0, 1)


def test_negative_weights_are_shifted():
    res = optimal_common_base(THREE, [[-1, 2, -3]], identity(), rng_seed=1, repeats=3)
    assert res.base == (0, 1) and res.u == (1,)


def test_no_common_base():
    with pytest.raises(NoCommonBase):
        VectorialMatroidPair.validated([[1, 0]], [[0, 1]])
    with pytest.raises(MatroidError, match="common rank required"):
        VectorialMatroidPair.validated([[1, 0], [2, 0]], [[1, 0], [0, 1]])


def test_repeats_seeds_are_derived_and_reproducible():
    a = optimal_common_base(THREE, [[1, 2, 3]], identity(), rng_seed=42, repeats=4)
    b = optimal_common_base(THREE, [[1, 2, 3]], identity(), rng_seed=42, repeats=4)
    assert a == b and len(set(a.seeds)) == 4
    master = random.Random(42)
    assert a.seeds == tuple(master.getrandbits(64) for _ in range(4))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from(["uniform-matroid-pair", "graphic-like",
                                                 "transversal-like"]))
def test_determinant_identity_and_interpolation(seed, kind):
    rng = random.Random(seed)
    n = rng.randint(2, 5)
    inst = gen_instance(kind, {"n": n, "r": rng.randint(1, 2), "d": rng.randint(1, 2), "wmax": 2}, seed)
    pair, W = inst.feasible, materialize(inst.weights)
    a = tuple(rng.randint(1, 3) for _ in range(pair.n))
    g = brute_support(pair, W, a)
    poly = interpolate_support(pair, W, a)
    assert poly.entries == {u: v for u, v in g.items() if v != 0}
    z, d = poly.z, poly.d
    for t in (1, 2):
        b = [t ** ((z + 1) ** i) for i in range(d)]
        total = 0
        for u, gu in g.items():
            term = gu
            for bi, ui in zip(b, u):
                term *= bi ** ui
            total += term
        assert gamma_subst_det(pair, W, a, t) == total
    # no false positives
    images = {matvec(W, x) for x in enumerate_common_bases(pair).points}
    assert set(poly.support) <= images


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_base_recovery_with_exact_subsolver(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 7)
    inst = gen_instance(rng.choice(["uniform-matroid-pair", "graphic-like", "transversal-like"]),
                        {"n": n, "r": rng.randint(1, min(3, n)), "d": rng.randint(1, 2), "wmax": 3},
                        seed)
    pair, W = inst.feasible, materialize(inst.weights)
    f = rng.choice([pnorm(2), identity() if len(W) == 1 else pnorm(1), negated(pnorm(1))])
    res = optimal_common_base(pair, W, f, image_optimum=brute_image_optimum)
    best = brute_image_optimum(pair, W, f, "max")
    assert res.is_common_base and f(res.u) == f(best)
