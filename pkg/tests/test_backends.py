"""The compiled kernels and the plain numpy kernels must be interchangeable."""

import importlib

import numpy as np
import pytest

from lambdahull import _geom
from lambdahull import _kern_np

_kern_nb = pytest.importorskip("lambdahull._kern_nb")


@pytest.fixture(scope="module")
def problem():
    rng = np.random.default_rng(11)
    while True:
        C = rng.normal(size=(5, 3)) * 0.35
        _, r = _geom.min_enclosing_ball(C)
        if r < 0.85:
            break
    data = _geom.build_poly_data(C, 1.0)
    U = rng.normal(size=(60, 3))
    U /= np.linalg.norm(U, axis=1, keepdims=True)
    X = rng.normal(size=(60, 3)) * 1.4
    return C, data, U, X


def test_backend_env_selection(monkeypatch):
    import lambdahull._backend as backend

    monkeypatch.setenv("LAMBDAHULL_BACKEND", "numpy")
    importlib.reload(backend)
    assert backend.get_kernels() is _kern_np
    monkeypatch.setenv("LAMBDAHULL_BACKEND", "numba")
    importlib.reload(backend)
    assert backend.get_kernels() is _kern_nb
    monkeypatch.delenv("LAMBDAHULL_BACKEND")
    importlib.reload(backend)


def test_support_parity(problem):
    C, data, U, _ = problem
    args = (U, C, 1.0, data.sub_q, data.sub_rho, data.sub_w, data.sub_memb,
            1e-12, True)
    h_np, Y_np = _kern_np.support_batch(*args)
    h_nb, Y_nb = _kern_nb.support_batch(*args)
    np.testing.assert_allclose(h_nb, h_np, rtol=0, atol=1e-13)
    np.testing.assert_allclose(Y_nb, Y_np, rtol=0, atol=1e-13)


def test_dist_and_farthest_parity(problem):
    C, data, _, X = problem
    args = (X, C, 1.0, data.sub_q, data.sub_rho, data.sub_w, data.sub_memb,
            1e-12, True)
    d_np, P_np = _kern_np.dist_batch(*args)
    d_nb, P_nb = _kern_nb.dist_batch(*args)
    np.testing.assert_allclose(d_nb, d_np, rtol=0, atol=1e-13)
    np.testing.assert_allclose(P_nb, P_np, rtol=0, atol=1e-13)
    f_np, _ = _kern_np.farthest_batch(*args)
    f_nb, _ = _kern_nb.farthest_batch(*args)
    np.testing.assert_allclose(f_nb, f_np, rtol=0, atol=1e-13)


def test_inside_and_dykstra_parity(problem):
    C, _, _, X = problem
    np.testing.assert_array_equal(
        _kern_nb.inside_batch(X, C, 1.0, 1e-9),
        _kern_np.inside_batch(X, C, 1.0, 1e-9),
    )
    Y_np, _ = _kern_np.dykstra_batch(X, C, 1.0, 1e-9, 5000)
    Y_nb, _ = _kern_nb.dykstra_batch(X, C, 1.0, 1e-9, 5000)
    np.testing.assert_allclose(Y_nb, Y_np, rtol=0, atol=1e-8)


def test_bisect_parity(problem):
    C, _, U, _ = problem
    h_np, _ = _kern_np.bisect_support(U, C, 1.0, 1e-8, 400, False)
    h_nb, _ = _kern_nb.bisect_support(U, C, 1.0, 1e-8, 400, False)
    np.testing.assert_allclose(h_nb, h_np, rtol=0, atol=1e-9)


def test_sum_classify_parity(problem):
    C, data, _, X = problem
    Cs = np.vstack([C, C * 0.5])
    half = _geom.build_poly_data(C * 0.5, 0.5)
    qs = np.vstack([data.sub_q, half.sub_q])
    rhos = np.concatenate([data.sub_rho, half.sub_rho])
    ws = np.vstack([data.sub_w, half.sub_w])
    membs = np.vstack([data.sub_memb, half.sub_memb])
    offs = np.array([0, C.shape[0], 2 * C.shape[0]], dtype=np.int64)
    qoffs = np.array(
        [0, data.sub_q.shape[0], data.sub_q.shape[0] + half.sub_q.shape[0]],
        dtype=np.int64,
    )
    R_arr = np.array([1.0, 0.5])
    thr = np.array([0.1, 0.4])
    args = (X * 1.5, Cs, qs, rhos, ws, membs, offs, qoffs, R_arr, thr,
            1e-12, 1e-7, 100000)
    np.testing.assert_array_equal(
        _kern_nb.sum_classify(*args), _kern_np.sum_classify(*args)
    )
