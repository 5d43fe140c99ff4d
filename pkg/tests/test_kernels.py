"""Kernel-level checks: the exact stratum-enumeration routines against closed
forms and brute force, and the bracketing support solver against both."""

import numpy as np
import pytest

from lambdahull import _geom
from lambdahull._backend import get_kernels


def unit_rows(rng, k, n):
    U = rng.normal(size=(k, n))
    return U / np.linalg.norm(U, axis=1, keepdims=True)


def random_body(rng, n, m, spread):
    """Centers sampled in a ball small enough to guarantee interior."""
    while True:
        C = rng.normal(size=(m, n))
        nrm = np.linalg.norm(C, axis=1, keepdims=True)
        C = C / np.maximum(nrm, 1e-12) * (spread * rng.uniform(0.2, 1.0, size=(m, 1)))
        _, r = _geom.min_enclosing_ball(C)
        if r < 0.9:
            return np.ascontiguousarray(C)


@pytest.fixture(scope="module")
def kern():
    return get_kernels()


def test_support_matches_lens_closed_form(kern):
    rng = np.random.default_rng(0)
    lam, r = 1.0, 0.5
    C = _geom.lens_canonical_centers(lam, r, np.zeros(2), np.array([1.0, 0.0]))
    data = _geom.build_poly_data(C, 1.0 / lam)
    U = unit_rows(rng, 500, 2)
    h, _ = kern.support_batch(U, C, 1.0 / lam, data.sub_q, data.sub_rho,
                              data.sub_w, data.sub_memb, 1e-12, False)
    t = np.arccos(np.clip(np.abs(U[:, 0]), 0, 1))
    href = _geom.lens_support_profile(t, lam, r)
    assert np.abs(h - href).max() < 1e-12


def test_support_points_achieve_value_and_stay_feasible(kern):
    rng = np.random.default_rng(1)
    for n, m in [(2, 5), (3, 6), (4, 4)]:
        C = random_body(rng, n, m, 0.5)
        data = _geom.build_poly_data(C, 1.0)
        U = unit_rows(rng, 200, n)
        h, Y = kern.support_batch(U, C, 1.0, data.sub_q, data.sub_rho,
                                  data.sub_w, data.sub_memb, 1e-12, True)
        assert np.abs(np.sum(U * Y, axis=1) - h).max() < 1e-12
        dC = np.linalg.norm(Y[:, None, :] - C[None, :, :], axis=2)
        assert dC.max() <= 1.0 + 1e-9


def test_bisect_support_agrees_with_enumeration(kern):
    # two independent algorithms for the same quantity
    rng = np.random.default_rng(2)
    worst = 0.0
    for n, m in [(2, 4), (2, 6), (3, 5), (3, 6)]:
        C = random_body(rng, n, m, 0.6)
        data = _geom.build_poly_data(C, 1.0)
        U = unit_rows(rng, 100, n)
        h_enum, _ = kern.support_batch(U, C, 1.0, data.sub_q, data.sub_rho,
                                       data.sub_w, data.sub_memb, 1e-12, False)
        h_bis, _ = kern.bisect_support(U, C, 1.0, 1e-8, 400, False)
        worst = max(worst, np.abs(h_enum - h_bis).max())
    assert worst < 1e-6


def test_bisect_support_witnesses(kern):
    rng = np.random.default_rng(3)
    C = random_body(rng, 3, 5, 0.5)
    U = unit_rows(rng, 50, 3)
    h, Y = kern.bisect_support(U, C, 1.0, 1e-8, 400, True)
    assert np.abs(np.sum(U * Y, axis=1) - h).max() < 1e-6
    dC = np.linalg.norm(Y[:, None, :] - C[None, :, :], axis=2)
    assert dC.max() <= 1.0 + 1e-7


def test_dist_batch_against_sampled_hull(kern):
    rng = np.random.default_rng(4)
    C = random_body(rng, 2, 4, 0.5)
    data = _geom.build_poly_data(C, 1.0)
    X = rng.normal(size=(150, 2)) * 1.5
    d, P = kern.dist_batch(X, C, 1.0, data.sub_q, data.sub_rho, data.sub_w,
                           data.sub_memb, 1e-12, True)
    # nearest points are feasible and no dense boundary sample beats them
    assert np.linalg.norm(P[:, None, :] - C[None, :, :], axis=2).max() <= 1.0 + 1e-9
    ang = np.linspace(0, 2 * np.pi, 4000, endpoint=False)
    V = np.c_[np.cos(ang), np.sin(ang)]
    hV, YV = kern.support_batch(V, C, 1.0, data.sub_q, data.sub_rho,
                                data.sub_w, data.sub_memb, 1e-12, True)
    brute = np.linalg.norm(X[:, None, :] - YV[None, :, :], axis=2).min(axis=1)
    inside = np.all(np.linalg.norm(X[:, None, :] - C[None, :, :], axis=2) <= 1.0, axis=1)
    assert np.all(d[inside] == 0.0)
    out = ~inside
    assert np.abs(d[out] - brute[out]).max() < 1e-5


def test_farthest_batch_against_sampled_hull(kern):
    rng = np.random.default_rng(5)
    C = random_body(rng, 2, 5, 0.5)
    data = _geom.build_poly_data(C, 1.0)
    X = rng.normal(size=(80, 2)) * 1.2
    f, _ = kern.farthest_batch(X, C, 1.0, data.sub_q, data.sub_rho,
                               data.sub_w, data.sub_memb, 1e-12, False)
    ang = np.linspace(0, 2 * np.pi, 4000, endpoint=False)
    V = np.c_[np.cos(ang), np.sin(ang)]
    _, YV = kern.support_batch(V, C, 1.0, data.sub_q, data.sub_rho,
                               data.sub_w, data.sub_memb, 1e-12, True)
    brute = np.linalg.norm(X[:, None, :] - YV[None, :, :], axis=2).max(axis=1)
    assert np.all(f >= brute - 1e-9)
    assert np.abs(f - brute).max() < 1e-5


def test_farthest_reaches_triple_vertex(kern):
    # the maximiser here is a vertex lying on all three spheres; the solve
    # that places it misses its own spheres by ~3e-12, so member balls must
    # be exempt from the feasibility slack or the vertex gets rejected
    C = np.array([
        [0.1481216, 0.22071898, -0.03266922],
        [-0.14041488, -0.02644382, -0.55971606],
        [-0.48003056, -0.43876081, -0.33080287],
    ])
    data = _geom.build_poly_data(C, 1.0)
    x = np.array([[-0.18294809, -0.12344973, -0.21359549]])
    f, Y = kern.farthest_batch(x, C, 1.0, data.sub_q, data.sub_rho,
                               data.sub_w, data.sub_memb, 1e-12, True)
    assert abs(f[0] - 0.8813434718463815) < 1e-12
    assert np.abs(np.linalg.norm(Y[0] - C, axis=1) - 1.0).max() < 1e-11


def test_dykstra_matches_exact_projection(kern):
    rng = np.random.default_rng(6)
    for n, m in [(2, 3), (3, 5)]:
        C = random_body(rng, n, m, 0.5)
        data = _geom.build_poly_data(C, 1.0)
        X = rng.normal(size=(40, n)) * 1.5
        _, P = kern.dist_batch(X, C, 1.0, data.sub_q, data.sub_rho,
                               data.sub_w, data.sub_memb, 1e-12, True)
        Y, used = kern.dykstra_batch(X, C, 1.0, 1e-9, 20000)
        assert used < 20000
        assert np.linalg.norm(Y - P, axis=1).max() < 1e-6


def test_sum_classify_two_lenses(kern):
    # 0.5*L + 0.5*L = L for a centrally placed lens, so thresholds can be
    # checked against the lens distance itself
    lam, r = 1.0, 0.5
    C = _geom.lens_canonical_centers(lam, r, np.zeros(2), np.array([1.0, 0.0]))
    half = _geom.build_poly_data(0.5 * C, 0.5)
    rng = np.random.default_rng(7)
    X = rng.normal(size=(300, 2)) * 1.3

    full = _geom.build_poly_data(C, 1.0)
    d_true, _ = kern.dist_batch(X, C, 1.0, full.sub_q, full.sub_rho,
                                full.sub_w, full.sub_memb, 1e-12, False)

    Cs = np.vstack([0.5 * C, 0.5 * C])
    qs = np.vstack([half.sub_q, half.sub_q])
    rhos = np.concatenate([half.sub_rho, half.sub_rho])
    ws = np.vstack([half.sub_w, half.sub_w])
    membs = np.vstack([half.sub_memb, half.sub_memb])
    offs = np.array([0, 2, 4], dtype=np.int64)
    qoffs = np.array([0, half.sub_q.shape[0], 2 * half.sub_q.shape[0]], dtype=np.int64)
    R_arr = np.array([0.5, 0.5])
    thresholds = np.array([0.05, 0.2, 0.5])
    keep = np.min(np.abs(d_true[:, None] - thresholds[None, :]), axis=1) > 1e-4
    X, d_true = X[keep], d_true[keep]
    idx = kern.sum_classify(X, Cs, qs, rhos, ws, membs, offs, qoffs, R_arr,
                            thresholds, 1e-12, 1e-7, 100000)
    expect = np.searchsorted(thresholds, d_true, side="left")
    assert np.array_equal(idx, expect)
