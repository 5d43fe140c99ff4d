"""Hit-or-miss volumes, Steiner fits, mixed volumes, and their identities."""

import math

import numpy as np
import pytest

import lambdahull as lh
from lambdahull import _geom, steiner_mixed as sm, sphere_quad as sq
from lambdahull.errors import (
    EmptyEstimateWarning,
    IllConditionedError,
    InvalidParamError,
    UnsupportedError,
)

LENS_AREA = 2 * (math.pi / 3 - math.sqrt(3) / 4)  # circular-segment formula, r=0.5


def lens_poly(n, lam, r):
    axis = np.zeros(n)
    axis[0] = 1.0
    C = _geom.lens_canonical_centers(lam, r, np.zeros(n), axis)
    return lh.BallPolytope(n, lam, C)


# ---------------------------------------------------------------------------
# mc_volume
# ---------------------------------------------------------------------------


def test_square_in_its_own_box_is_exact():
    bbox = (np.zeros(2), np.ones(2))
    vol, err = sm.mc_volume(lambda X: np.all((X >= 0) & (X <= 1), axis=1),
                            bbox, 1000, seed=0)
    assert vol == 1.0 and err == 0.0


def test_disc_volume_within_error():
    disc = lh.ball(2, 1.0)
    bbox = sm.bounding_box(disc)
    vol, err = sm.mc_volume(lambda X: lh.contains(disc, X), bbox, 200_000, seed=1)
    assert err > 0.0
    assert abs(vol - math.pi) < 4 * err
    assert abs(vol - math.pi) < 0.01


def test_lens_area_within_error():
    L = lens_poly(2, 1.0, 0.5)
    vol, err = sm.mc_volume(lambda X: lh.contains(L, X), sm.bounding_box(L),
                            200_000, seed=2)
    assert abs(vol - LENS_AREA) < 4 * err


def test_mc_volume_deterministic_per_seed():
    disc = lh.ball(2, 1.0)
    bbox = sm.bounding_box(disc)
    a = sm.mc_volume(lambda X: lh.contains(disc, X), bbox, 5000, seed=7)
    b = sm.mc_volume(lambda X: lh.contains(disc, X), bbox, 5000, seed=7)
    c = sm.mc_volume(lambda X: lh.contains(disc, X), bbox, 5000, seed=8)
    assert a == b
    assert a != c


def test_mc_volume_zero_hits_warns():
    bbox = (np.zeros(2), np.ones(2))
    with pytest.warns(EmptyEstimateWarning):
        vol, err = sm.mc_volume(lambda X: np.zeros(len(X), dtype=bool),
                                bbox, 100, seed=0)
    assert vol == 0.0 and err == 0.0


def test_mc_volume_rejects_bad_boxes():
    ok = lambda X: np.ones(len(X), dtype=bool)
    with pytest.raises(InvalidParamError):
        sm.mc_volume(ok, (np.zeros(2), np.zeros(2)), 100)
    with pytest.raises(InvalidParamError):
        sm.mc_volume(ok, (np.zeros(2), np.ones(3)), 100)
    with pytest.raises(InvalidParamError):
        sm.mc_volume(ok, (np.zeros(2), np.ones(2)), 0)


def test_bounding_box_margins():
    lo, hi = sm.bounding_box(lh.ball(2, 1.0))
    assert np.allclose(lo, -1.2) and np.allclose(hi, 1.2)
    lo, hi = sm.bounding_box(lh.ball(2, 1.0), pad=0.5)
    assert np.allclose(hi, 1.5 * 1.2)


# ---------------------------------------------------------------------------
# Steiner fits
# ---------------------------------------------------------------------------


def test_steiner_disc_recovers_all_three_coefficients():
    est = sm.steiner_intrinsic(lh.ball(2, 1.0), N=200_000, seed=0)
    want = np.array([1.0, math.pi, math.pi])
    assert est.dim == 2 and est.condition < 1e6
    assert np.all(np.abs(est.intrinsic - want) <= 3 * est.stderr)
    assert est.intrinsic[-1] > 0.0
    assert np.all(est.intrinsic >= -3 * est.stderr)


def test_steiner_ball3_first_intrinsic():
    est = sm.steiner_intrinsic(lh.ball(3, 1.0),
                               eps_grid=np.linspace(0.1, 1.0, 10),
                               N=1_000_000, seed=0)
    assert abs(est.intrinsic[1] - 4.0) < 0.1
    assert abs(est.intrinsic[0] - 1.0) <= 3 * est.stderr[0]
    assert abs(est.intrinsic[3] - 4 * math.pi / 3) < 0.05


def test_steiner_lens_matches_quadrature():
    L = lens_poly(2, 1.0, 0.5)
    est = sm.steiner_intrinsic(L, N=400_000, seed=1)
    v1, v1err = sq.intrinsic_v1(L, sq.sample_directions(2, "grid", 2048))
    assert abs(est.intrinsic[1] - v1) <= 3 * (est.stderr[1] + v1err)
    assert abs(est.intrinsic[2] - LENS_AREA) <= 3 * est.stderr[2]


def test_steiner_rigid_motion_invariance():
    L = lens_poly(2, 1.0, 0.5)
    th = 0.6
    Q = np.array([[math.cos(th), -math.sin(th)], [math.sin(th), math.cos(th)]])
    moved = lh.BallPolytope(2, 1.0, L.centers @ Q.T + np.array([0.2, -0.1]))
    a = sm.steiner_intrinsic(L, N=400_000, seed=1)
    b = sm.steiner_intrinsic(moved, N=400_000, seed=2)
    assert np.all(np.abs(a.intrinsic - b.intrinsic) <= 3 * (a.stderr + b.stderr))


def test_steiner_rejects_bad_grids_and_dimensions():
    disc = lh.ball(2, 1.0)
    with pytest.raises(InvalidParamError):
        sm.steiner_intrinsic(disc, eps_grid=[0.1, 0.2])  # too few nodes
    with pytest.raises(InvalidParamError):
        sm.steiner_intrinsic(disc, eps_grid=[0.1, 0.2, 1.5])  # node > 1
    with pytest.raises(InvalidParamError):
        sm.steiner_intrinsic(disc, eps_grid=[0.0, 0.1, 0.2])  # node at 0
    with pytest.raises(UnsupportedError):
        sm.steiner_intrinsic(lh.ball(5, 1.0))


def test_steiner_flags_ill_conditioned_grid():
    with pytest.raises(IllConditionedError):
        sm.steiner_intrinsic(lh.ball(2, 1.0),
                             eps_grid=[0.5, 0.5000001, 0.5000002], N=1000)


def test_steiner_serialization_fields():
    est = sm.steiner_intrinsic(lh.ball(2, 1.0), N=10_000, seed=4)
    doc = est.to_dict()
    assert set(doc) == {"value", "stderr", "N", "seed", "eps_grid", "condition"}
    assert doc["N"] == 10_000 and doc["seed"] == 4
    assert len(doc["value"]) == 3


# ---------------------------------------------------------------------------
# mixed volumes
# ---------------------------------------------------------------------------


def test_all_ball_tuple_gives_disc_area():
    mv = sm.mixed_volume([(lh.ball(2, 1.0), 2)], N=100_000, seed=8)
    assert abs(mv.value - math.pi) < max(4 * mv.stderr, 0.02)


def test_lens_ball_tuple_matches_first_intrinsic():
    # the 1-homogeneous coefficient: V_1 = n/kappa(n-1) * V(K, B^(n-1))
    L = lens_poly(2, 1.0, 0.5)
    mv = sm.mixed_volume([(L, 1), (lh.ball(2, 1.0), 1)], N=200_000, seed=6)
    assert abs(mv.value - 2 * math.pi / 3) < 0.01
    v1, v1err = sq.intrinsic_v1(L, sq.sample_directions(2, "grid", 2048))
    assert abs(2 * mv.value / _geom.kappa(1) - v1) <= 3 * mv.stderr + v1err


def test_repeated_lens_tuple_gives_its_area():
    mv = sm.mixed_volume([(lens_poly(2, 1.0, 0.5), 2)], N=200_000, seed=7)
    assert abs(mv.value - LENS_AREA) < max(4 * mv.stderr, 0.01)


def test_mixed_volume_is_order_invariant_and_merges_duplicates():
    L = lens_poly(2, 1.0, 0.5)
    B = lh.ball(2, 1.0)
    a = sm.mixed_volume([(L, 1), (B, 1)], N=10_000, seed=9)
    b = sm.mixed_volume([(B, 1), (L, 1)], N=10_000, seed=9)
    assert a.value == b.value and a.stderr == b.stderr
    c = sm.mixed_volume([(L, 1), (L, 1)], N=10_000, seed=5)
    d = sm.mixed_volume([(L, 2)], N=10_000, seed=5)
    assert c.value == d.value and c.stderr == d.stderr


def test_mixed_volume_scaling_homogeneity():
    L = lens_poly(2, 1.0, 0.5)
    B = lh.ball(2, 1.0)
    full = sm.mixed_volume([(L, 1), (B, 1)], N=100_000, seed=3)
    half = sm.mixed_volume([(lh.scale(L, 0.5), 1), (B, 1)], N=100_000, seed=4)
    assert abs(half.value - 0.5 * full.value) <= 3 * (half.stderr + 0.5 * full.stderr)


def test_mixed_volume_consistency_with_plain_volume():
    L = lens_poly(2, 1.0, 0.5)
    mv = sm.mixed_volume([(L, 2)], N=100_000, seed=11)
    vol, err = sm.mc_volume(lambda X: lh.contains(L, X), sm.bounding_box(L),
                            100_000, seed=12)
    assert abs(mv.value - vol) <= 3 * (mv.stderr + err) + 0.01


def test_mixed_volume_validation():
    L = lens_poly(2, 1.0, 0.5)
    with pytest.raises(InvalidParamError):
        sm.mixed_volume([(L, 1)])  # multiplicities must sum to the dimension
    with pytest.raises(InvalidParamError):
        sm.mixed_volume([])
    with pytest.raises(InvalidParamError):
        sm.mixed_volume([(L, 2)], grid_spec=[0.0, 0.5, 1.0])
    with pytest.raises(InvalidParamError):
        sm.mixed_volume([(L, 2)], grid_spec=[0.5, 1.0])
    with pytest.raises(UnsupportedError):
        sm.mixed_volume([(lh.ball(4, 1.0), 4)], N=100)


def test_mixed_volume_serialization_fields():
    mv = sm.mixed_volume([(lens_poly(2, 1.0, 0.5), 2)], N=5_000, seed=0)
    doc = mv.to_dict()
    assert set(doc) == {"value", "stderr", "N", "seed", "weight_grid",
                        "condition", "tuple"}
    assert doc["tuple"][0][1] == 2


# ---------------------------------------------------------------------------
# Alexandrov-Fenchel residuals
# ---------------------------------------------------------------------------


def test_af_residual_equal_bodies_is_exactly_zero():
    L = lens_poly(2, 1.0, 0.5)
    res, sig = sm.af_residual(L, L, N=5_000, seed=11)
    assert res == 0.0 and sig == 0.0


def test_af_residual_lens_ball_analytic():
    L = lens_poly(2, 1.0, 0.5)
    res, sig = sm.af_residual(L, lh.ball(2, 1.0), N=200_000, seed=10)
    want = (2 * math.pi / 3) ** 2 - LENS_AREA * math.pi
    assert abs(res - want) < max(3 * sig, 0.05)
    assert res >= -3 * sig


def test_af_residual_spindle_triple():
    res, sig = sm.af_residual(lh.spindle(3, 1.0, 0.5), lh.ball(3, 1.0),
                              rest=[lh.ball(3, 1.0)], N=50_000, seed=15)
    assert res >= -3 * sig


def test_af_residual_dimension_cap():
    with pytest.raises(UnsupportedError):
        sm.af_residual(lh.ball(4, 1.0), lh.ball(4, 1.0),
                       rest=[lh.ball(4, 1.0), lh.ball(4, 1.0)])


# ---------------------------------------------------------------------------
# lens-swap ratios
# ---------------------------------------------------------------------------


def test_ratio_is_one_when_body_is_the_lens():
    L = lens_poly(2, 1.0, 0.5)
    for s, t in ((1, 0), (2, 0), (2, 1)):
        ratio, sig = sm.lemma1_ratio(L, L, s=s, t=t, N=5_000, seed=12)
        assert ratio == 1.0 and sig == 0.0


def test_ratio_below_one_for_triangle_body():
    ang = np.array([0.0, 2 * np.pi / 3, 4 * np.pi / 3])
    K = lh.BallPolytope(2, 1.0, 0.3 * np.c_[np.cos(ang), np.sin(ang)])
    from lambdahull import radii
    L = lens_poly(2, 1.0, radii.inradius(K).radius)
    ratio, sig = sm.lemma1_ratio(K, L, s=1, t=0, N=50_000, seed=13)
    assert ratio <= 1.0 + 3 * sig
    assert ratio < 1.0  # strict for a genuinely non-lens body
    ratio, sig = sm.lemma1_ratio(K, L, s=2, t=1, N=10_000, seed=13)
    assert ratio <= 1.0 + 3 * sig


def test_ratio_validation():
    L = lens_poly(2, 1.0, 0.5)
    with pytest.raises(InvalidParamError):
        sm.lemma1_ratio(L, L, s=0, t=0)
    with pytest.raises(InvalidParamError):
        sm.lemma1_ratio(L, L, s=3, t=0)
    with pytest.raises(InvalidParamError):
        sm.lemma1_ratio(L, L, s=2, t=2)
    with pytest.raises(UnsupportedError):
        sm.lemma1_ratio(lh.ball(4, 1.0), lh.ball(4, 1.0), s=1, t=0)
