import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import lambdahull as lh
from lambdahull import bodies
from lambdahull.config import DEFAULT_CONFIG


def unit_rows(rng, k, n):
    U = rng.normal(size=(k, n))
    return U / np.linalg.norm(U, axis=1, keepdims=True)


@pytest.fixture(scope="module")
def lens_half():
    return lh.lens(2, 1.0, 0.5)


@pytest.fixture(scope="module")
def lens_poly(lens_half):
    return lh.as_ballpoly(lens_half)


# --- construction -----------------------------------------------------------


def test_ballpoly_requires_interior():
    with pytest.raises(lh.EmptyBodyError):
        lh.BallPolytope(2, 1.0, np.array([[0.0, 0.0], [2.0, 0.0]]))
    # just inside the spread limit is fine
    lh.BallPolytope(2, 1.0, np.array([[0.0, 0.0], [1.9, 0.0]]))


def test_ballpoly_merges_duplicate_centers():
    C = np.array([[0.1, 0.0], [0.1, 0.0], [0.1, 5e-13], [-0.2, 0.3]])
    P = lh.BallPolytope(2, 1.0, C)
    assert P.m == 2


def test_dimension_limits():
    with pytest.raises(lh.InvalidParamError):
        lh.BallPolytope(1, 1.0, np.array([[0.0]]))
    with pytest.raises(lh.UnsupportedError):
        lh.BallPolytope(7, 1.0, np.zeros((1, 7)))


def test_rotsym_param_range():
    with pytest.raises(lh.InvalidParamError):
        lh.lens(2, 1.0, 0.0)
    with pytest.raises(lh.InvalidParamError):
        lh.lens(2, 1.0, 1.2)
    with pytest.raises(lh.InvalidParamError):
        lh.spindle(2, 2.0, 0.6)


def test_degenerate_params_canonicalize_to_ball():
    assert lh.lens(2, 1.0, 1.0).kind == "ball"
    assert lh.spindle(3, 2.0, 0.5).kind == "ball"


def test_centers_are_frozen(lens_poly):
    with pytest.raises(ValueError):
        lens_poly.centers[0, 0] = 9.0


# --- support ----------------------------------------------------------------


def test_lens_support_axis_values(lens_half):
    assert lh.support(lens_half, np.array([[1.0, 0.0]]))[0] == pytest.approx(0.5)
    assert lh.support(lens_half, np.array([[0.0, 1.0]]))[0] == pytest.approx(
        math.sqrt(0.75)
    )


def test_lens_two_ball_form_matches_closed_form(lens_half, lens_poly):
    rng = np.random.default_rng(0)
    U = unit_rows(rng, 1000, 2)
    h_poly = lh.support(lens_poly, U)
    h_closed = lh.support(lens_half, U)
    assert np.abs(h_poly - h_closed).max() < 1e-6


def test_support_routes_agree(lens_poly):
    rng = np.random.default_rng(1)
    U = unit_rows(rng, 1000, 2)
    h = lh.support(lens_poly, U)
    h_b = lh.support_bisect(lens_poly, U)
    assert np.abs(h - h_b).max() <= 2 * DEFAULT_CONFIG.tol


def test_support_ballpoly_returns_maximiser(lens_poly):
    h, y = lh.support_ballpoly(lens_poly, np.array([0.0, 1.0]))
    assert h == pytest.approx(math.sqrt(0.75), abs=1e-7)
    assert np.allclose(y, [0.0, math.sqrt(0.75)], atol=1e-6)


def test_support_monotone_under_ball_removal():
    rng = np.random.default_rng(2)
    C = np.array([[0.3, 0.0, 0.1], [-0.2, 0.25, 0.0], [0.0, -0.3, 0.2], [0.1, 0.1, -0.3]])
    full = lh.BallPolytope(3, 1.0, C)
    U = unit_rows(rng, 300, 3)
    h_full = lh.support(full, U)
    for drop in range(C.shape[0]):
        sub = lh.BallPolytope(3, 1.0, np.delete(C, drop, axis=0))
        assert np.all(lh.support(sub, U) >= h_full - 1e-12)


def test_translation_and_scaling_of_support():
    rng = np.random.default_rng(3)
    U = unit_rows(rng, 200, 2)
    L = lh.lens(2, 1.0, 0.4, center=[0.7, -0.2])
    L0 = lh.lens(2, 1.0, 0.4)
    shift = np.array([0.7, -0.2])
    assert np.allclose(lh.support(L, U), lh.support(L0, U) + U @ shift, atol=1e-12)
    half = lh.scale(L0, 0.5)
    assert half.lam == pytest.approx(2.0)
    assert np.allclose(lh.support(half, U), 0.5 * lh.support(L0, U), atol=1e-12)


@given(st.floats(0.5, 2.5), st.floats(0.1, 0.9), st.integers(0, 10**6))
@settings(max_examples=60, deadline=None)
def test_lens_poly_form_any_params(lam, frac, seed):
    r = frac / lam
    L = lh.lens(2, lam, r)
    P = lh.as_ballpoly(L)
    U = unit_rows(np.random.default_rng(seed), 64, 2)
    assert np.abs(lh.support(P, U) - lh.support(L, U)).max() < 1e-10


# --- duality ----------------------------------------------------------------


def test_dual_support_is_spindle(lens_half):
    rng = np.random.default_rng(4)
    U = unit_rows(rng, 1000, 2)
    S = lh.rotsym_dual(lens_half)
    assert S.kind == "spindle" and S.param == pytest.approx(0.5)
    assert np.abs(lh.dual_support(lens_half, U) - lh.support(S, U)).max() < 1e-9


def test_dual_involution_on_rotsym():
    L = lh.lens(3, 2.0, 0.2, center=[0.1, 0.0, 0.0], axis=[0.0, 1.0, 0.0])
    assert lh.rotsym_dual(lh.rotsym_dual(L)) == L


def test_dual_contains_lens_origin(lens_half):
    assert lh.dual_contains(lens_half, np.zeros(2)) is True
    # a point far out cannot cover the lens with a unit ball
    assert lh.dual_contains(lens_half, np.array([1.2, 0.0])) is False


def test_dual_support_batch_identity():
    P = lh.BallPolytope(2, 1.0, np.array([[0.2, 0.1], [-0.3, 0.0], [0.0, -0.25]]))
    rng = np.random.default_rng(5)
    U = unit_rows(rng, 100, 2)
    assert np.allclose(
        lh.dual_support(P, U), 1.0 - lh.support(P, -U), atol=1e-14
    )


# --- projection, membership, farthest ---------------------------------------


def test_project_lens_example(lens_half):
    y = lh.project(lens_half, np.array([2.0, 0.0]))
    assert np.allclose(y, [0.5, 0.0], atol=1e-9)


def test_project_properties(lens_poly):
    rng = np.random.default_rng(6)
    X = rng.normal(size=(300, 2)) * 1.5
    Y = lh.project(lens_poly, X)
    assert np.abs(Y - lh.project(lens_poly, Y)).max() <= DEFAULT_CONFIG.tol
    X2 = rng.normal(size=(300, 2)) * 1.5
    Y2 = lh.project(lens_poly, X2)
    assert np.all(
        np.linalg.norm(Y - Y2, axis=1) <= np.linalg.norm(X - X2, axis=1) + 1e-12
    )


def test_project_iterative_agrees(lens_poly):
    rng = np.random.default_rng(7)
    X = rng.normal(size=(50, 2)) * 1.5
    Y = lh.project(lens_poly, X)
    Z = bodies.project_iterative(lens_poly, X)
    assert np.linalg.norm(Y - Z, axis=1).max() < 1e-6


def test_contains_and_distance_consistency(lens_poly):
    rng = np.random.default_rng(8)
    X = rng.normal(size=(400, 2))
    d = lh.distance(lens_poly, X)
    inside = lh.contains(lens_poly, X)
    assert np.array_equal(inside, d <= DEFAULT_CONFIG.tol)


def test_spindle_ops_match_two_ball_form_in_plane():
    S = lh.spindle(2, 1.0, 0.5)
    P = lh.as_ballpoly(S)
    rng = np.random.default_rng(9)
    X = rng.normal(size=(200, 2)) * 1.3
    assert np.abs(lh.distance(S, X) - lh.distance(P, X)).max() < 1e-12
    assert np.abs(
        lh.farthest_distance(S, X) - lh.farthest_distance(P, X)
    ).max() < 1e-12
    U = unit_rows(rng, 200, 2)
    assert np.abs(lh.support(S, U) - lh.support(P, U)).max() < 1e-12


def test_spindle_three_dim_operations():
    S = lh.spindle(3, 1.0, 0.5, center=[0.2, -0.1, 0.3], axis=[1.0, 1.0, 1.0])
    rng = np.random.default_rng(10)
    U = unit_rows(rng, 300, 3)
    h, Y = lh.support(S, U, want_points=True)
    assert np.abs(np.sum(U * Y, axis=1) - h).max() < 1e-12
    assert lh.distance(S, Y).max() < 1e-9
    # vertices are the extreme points along the axis
    axis = S.axis
    v = np.asarray(S.center) + 0.5 * axis
    assert lh.contains(S, v)
    assert not lh.contains(S, np.asarray(S.center) + 0.5001 * axis)
    # projection from far along the axis lands on the vertex
    y = lh.project(S, np.asarray(S.center) + 3.0 * axis)
    assert np.allclose(y, v, atol=1e-9)


def test_farthest_distance_ball_closed_form():
    Bd = lh.ball(3, 2.0, radius=0.25, center=[0.1, 0.0, 0.0])
    x = np.array([1.1, 0.0, 0.0])
    assert lh.farthest_distance(Bd, x) == pytest.approx(1.0 + 0.25)


# --- feasibility -------------------------------------------------------------


def test_feasibility_point_or_none():
    a = (np.zeros(2), 1.0)
    b = (np.array([1.5, 0.0]), 1.0)
    y = lh.feasibility([a, b])
    assert np.linalg.norm(y - a[0]) <= 1.0 + 1e-8
    assert np.linalg.norm(y - b[0]) <= 1.0 + 1e-8
    assert lh.feasibility([a, (np.array([2.6, 0.0]), 1.0)]) is None


def test_feasibility_tangent_pair_within_tol():
    y = lh.feasibility([(np.zeros(2), 1.0), (np.array([2.0, 0.0]), 1.0)])
    assert np.allclose(y, [1.0, 0.0], atol=DEFAULT_CONFIG.tol)


def test_feasibility_pairwise_overlap_jointly_empty():
    R = 1.05
    centers = [R * np.array([np.cos(a), np.sin(a)])
               for a in (0.0, 2 * np.pi / 3, 4 * np.pi / 3)]
    assert lh.feasibility([(c, 1.0) for c in centers]) is None


# --- Minkowski membership ----------------------------------------------------


def test_minkowski_lens_ball_example(lens_half):
    terms = [(lens_half, 0.5), (lh.ball(2, 1.0), 0.5)]
    assert lh.minkowski_contains(terms, np.array([0.93, 0.0])) is False
    assert lh.minkowski_contains(terms, np.array([0.74, 0.0])) is True


def test_minkowski_ball_summand_additivity(lens_half):
    # support of K + eps*B along any direction is h_K + eps: the translate of
    # the maximiser by eps*u sits exactly on the boundary
    rng = np.random.default_rng(11)
    U = unit_rows(rng, 50, 2)
    eps = 0.3
    _, Y = lh.support(lens_half, U, want_points=True)
    terms = [(lens_half, 1.0), (lh.ball(2, 1.0), eps)]
    for u, y in zip(U, Y):
        assert lh.minkowski_contains(terms, y + (eps - 1e-9) * u)
        assert not lh.minkowski_contains(terms, y + (eps + 1e-6) * u)


def test_minkowski_two_nonball_terms(lens_half):
    terms = [(lens_half, 0.5), (lens_half, 0.5)]
    for pt, expect in [
        ([0.49, 0.0], True),
        ([0.51, 0.0], False),
        ([0.0, 0.85], True),
        ([0.0, 0.88], False),
    ]:
        assert lh.minkowski_contains(terms, np.array(pt)) is expect


def test_minkowski_requires_positive_weight(lens_half):
    with pytest.raises(lh.InvalidParamError):
        lh.minkowski_contains([(lens_half, 0.0)], np.zeros(2))
    with pytest.raises(lh.InvalidParamError):
        lh.minkowski_contains([(lens_half, -0.5)], np.zeros(2))


def test_minkowski_spindle_beyond_plane_unsupported():
    S = lh.spindle(3, 1.0, 0.5)
    L = lh.lens(3, 1.0, 0.5)
    with pytest.raises(lh.UnsupportedError):
        lh.minkowski_contains([(S, 0.5), (L, 0.5)], np.zeros(3))


# --- views and serialization --------------------------------------------------


def test_view_closures(lens_half):
    v = lh.as_view(lens_half)
    assert v.dim == 2
    assert v.support(np.array([[1.0, 0.0]]))[0] == pytest.approx(0.5)
    got = v.contains(np.array([[0.1, 0.1], [3.0, 0.0]]))
    assert got.tolist() == [True, False]


def test_json_round_trip(lens_half, lens_poly):
    for body in [lens_half, lens_poly, lh.spindle(3, 2.0, 0.3), lh.ball(2, 1.0)]:
        doc = json.loads(lh.to_json(body))
        assert set(doc) >= {"dim", "lambda", "kind"}
        again = lh.from_json(lh.to_json(body))
        assert lh.to_json(again) == lh.to_json(body)
        rng = np.random.default_rng(12)
        U = unit_rows(rng, 32, body.dim)
        assert np.array_equal(lh.support(again, U), lh.support(body, U))


def test_from_json_rejects_unknown_kind():
    with pytest.raises(lh.InvalidParamError):
        lh.from_json('{"dim": 2, "lambda": 1.0, "kind": "torus"}')


@given(st.floats(0.5, 2.0), st.floats(0.1, 0.9))
@settings(max_examples=40, deadline=None)
def test_support_identity_random_lens(lam, frac):
    L = lh.lens(3, lam, frac / lam)
    rng = np.random.default_rng(int(lam * 1000 + frac * 100))
    U = unit_rows(rng, 32, 3)
    h, Y = lh.support(L, U, want_points=True)
    # maximiser achieves the value and stays inside
    assert np.abs(np.sum(U * Y, axis=1) - h).max() < 1e-10
    assert lh.distance(L, Y).max() < 1e-9
