import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from nlcopt.fibers import (EmptyFiberError, NonIntegralFiberVertex, fiber_face_description,
                           fiber_integer_point, fiber_max, image_vertices, is_vertex)
from nlcopt.harness import ExplicitFeasibleSet, brute_images, brute_vertices, hull_separation
from nlcopt.linalg import matvec
from nlcopt.lp import INFEASIBLE, HPolytope, VPolytope, is_feasible
from nlcopt.weights import FeasibleMeta, GeneralizedUnaryWeights, candidate_image_grid

TRI = VPolytope([(0, 0), (1, 0), (0, 1)])
SQUARE = HPolytope([[-1, 0], [0, -1], [1, 0], [0, 1]], [0, 0, 1, 1], bounded=True)


def test_fiber_max_examples():
    res = fiber_max(TRI, [[1, 2]], [2], [1, 0])
    assert res.optimal and res.point == (0, 1) and res.value == 0
    assert fiber_max(TRI, [[1, 2]], [3], [1, 0]).status == INFEASIBLE
    res = fiber_max(TRI, [[1, 2]], [1], [1, 0])
    assert res.value == 1 and res.point == (1, 0)
    # the other endpoint of the fiber segment is fractional
    assert fiber_max(TRI, [[1, 2]], [1], [0, 1]).point == (0, Fraction(1, 2))


def test_fiber_max_hrep_and_oracle_agree():
    F = ExplicitFeasibleSet.of([(0, 0), (1, 0), (0, 1)])
    o = hull_separation(F)
    for u in range(-1, 4):
        a = fiber_max(TRI, [[1, 2]], [u], [1, 1])
        b = fiber_max(o, [[1, 2]], [u], [1, 1])
        assert a.status == b.status and a.value == b.value


def test_fiber_integer_point_examples():
    assert fiber_integer_point(TRI, [[1, 2]], [2]) == (0, 1)
    assert fiber_integer_point(SQUARE, [[1, 1]], [2]) == (1, 1)
    P = VPolytope([(1, 0, 0), (0, 1, 0), (0, 0, 1)])
    assert fiber_integer_point(P, [[1, 1, 0]], [1], order=[0, 1, 2]) == (1, 0, 0)


def test_fiber_integer_point_errors():
    with pytest.raises(EmptyFiberError):
        fiber_integer_point(TRI, [[1, 2]], [3])
    # u=1 is not a vertex of W.P = [0,2]; lex order (2,1) reaches the fractional end
    with pytest.raises(NonIntegralFiberVertex):
        fiber_integer_point(TRI, [[1, 2]], [1], order=[1, 0])


def test_face_description_examples():
    face = fiber_face_description(SQUARE, [[1, 1]], [2])
    assert set(face.tight_rows) == {2, 3}
    face = fiber_face_description(SQUARE, [[1, 1]], [0])
    assert set(face.tight_rows) == {0, 1}
    seg = HPolytope([[-1, 0], [1, 0], [0, -1], [0, 1]], [0, 1, 0, 0], bounded=True)
    face = fiber_face_description(seg, [[1, 0]], [1])
    assert set(face.tight_rows) == {1, 2, 3}
    with pytest.raises(EmptyFiberError):
        fiber_face_description(SQUARE, [[1, 1]], [3])


@pytest.mark.parametrize("u, U, expect", [
    ((1, 0), [(0, 0), (1, 0), (2, 0)], False),
    ((0, 0), [(0, 0), (1, 0), (0, 1)], True),
    ((1, 1), [(0, 0), (2, 0), (0, 2), (1, 1)], False),
])
def test_is_vertex(u, U, expect):
    assert is_vertex(u, U) is expect


def test_image_vertices_examples():
    F = ExplicitFeasibleSet.of([(1, 0), (0, 1), (1, 1)])
    iv = image_vertices(F.polytope(), GeneralizedUnaryWeights.unary([[1, 1], [1, 0]]), F.meta)
    assert set(iv.vertices) == {(1, 1), (1, 0), (2, 1)}
    for u, x in iv.witnesses.items():
        assert x in F and matvec([[1, 1], [1, 0]], x) == u
    F = ExplicitFeasibleSet.of([(0, 0)])
    iv = image_vertices(F.polytope(), GeneralizedUnaryWeights.unary([[3, 1]]), F.meta)
    assert iv.vertices == ((0,),)
    F = ExplicitFeasibleSet.of([(0, 0), (1, 0), (2, 0)])
    iv = image_vertices(F.polytope(), GeneralizedUnaryWeights.unary([[1, 0]]), F.meta)
    assert set(iv.vertices) == {(0,), (2,)}
    assert set(iv.candidates) == {(0,), (1,), (2,)}


def test_image_vertices_hrep():
    iv = image_vertices(SQUARE, GeneralizedUnaryWeights.unary([[1, 1]]), FeasibleMeta(2, 2))
    assert set(iv.vertices) == {(0,), (2,)}


point_sets = st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(0, 2)),
                      min_size=1, max_size=12, unique=True)
weights = st.lists(st.lists(st.integers(-2, 2), min_size=3, max_size=3), min_size=1, max_size=2)


@settings(max_examples=40, deadline=None)
@given(point_sets, weights)
def test_image_vertices_complete_and_integral(points, W):
    F = ExplicitFeasibleSet.of(points)
    iv = image_vertices(F.polytope(), GeneralizedUnaryWeights.unary(W), F.meta)
    assert set(iv.vertices) == set(brute_vertices(brute_images(F, W)))
    for u in iv.vertices:
        x = fiber_integer_point(F.polytope(), W, u)
        assert x in F and matvec(W, x) == u


@settings(max_examples=25, deadline=None)
@given(point_sets, weights)
def test_fiber_feasibility_matches_hull_membership(points, W):
    F = ExplicitFeasibleSet.of(points)
    imgs = brute_images(F, W)
    o = hull_separation(F)
    d = len(W)
    for u in candidate_image_grid(GeneralizedUnaryWeights.unary(W), F.meta):
        unit = [tuple(1 if i == j else 0 for i in range(d)) for j in range(d)]
        in_hull = is_feasible(VPolytope(imgs), list(zip(unit, u)))
        by_v = fiber_max(F.polytope(), W, u, [0, 0, 0]).optimal
        by_o = fiber_max(o, W, u, [0, 0, 0]).optimal
        assert by_v == by_o == in_hull


def test_face_correctness_on_hrep_box():
    # integer points of [0,2]^2 under W=[[1,2]]; every vertex image's face matches its fiber
    P = HPolytope([[-1, 0], [0, -1], [1, 0], [0, 1]], [0, 0, 2, 2], bounded=True)
    W = [[1, 2]]
    pts = list(itertools.product(range(3), repeat=2))
    iv = image_vertices(P, GeneralizedUnaryWeights.unary(W), FeasibleMeta(4, 2))
    assert set(iv.vertices) == {(0,), (6,)}
    for u in iv.vertices:
        face = fiber_face_description(P, W, u)
        on_face = {x for x in pts if all(sum(a * b for a, b in zip(P.A[i], x)) == P.b[i]
                                         for i in face.tight_rows)}
        assert on_face == {x for x in pts if matvec(W, x) == u}
