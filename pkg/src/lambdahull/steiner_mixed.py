"""Monte Carlo volumes, Steiner-polynomial fits, and mixed-volume estimates.

Volumes of parallel bodies K + eps*B are sampled with a single shared point
stream (only the distance threshold varies with eps), which correlates the
estimates across the grid and keeps the polynomial fit stable.  Mixed
volumes come from fitting the multihomogeneous expansion of
Vol(t_1 K_1 + ... + t_m K_m) on a tensor grid of positive weights; the
Alexandrov-Fenchel residual and the lens ratio checks extract several
coefficients from one fit so their errors stay correlated.
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass

import numpy as np

from lambdahull import _geom, bodies
from lambdahull.config import DEFAULT_CONFIG, SolverConfig
from lambdahull.errors import (
    EmptyEstimateWarning,
    IllConditionedError,
    InvalidParamError,
    UnsupportedError,
)

_CONDITION_CAP = 1e6
_DEFAULT_WEIGHTS = (0.25, 0.5, 0.75, 1.0)


def _philox(seed: int, stream: int) -> np.random.Generator:
    return np.random.Generator(
        np.random.Philox(key=np.array([seed, stream], dtype=np.uint64))
    )


def bounding_box(body, pad: float = 0.0,
                 cfg: SolverConfig = DEFAULT_CONFIG) -> tuple[np.ndarray, np.ndarray]:
    """Axis-aligned box around the body from coordinate supports.

    ``pad`` widens every side by an absolute amount (room for K + eps*B);
    a further 10% of each extent is added so boundary effects never clip
    the sampling domain.
    """
    n = body.dim
    E = np.vstack([np.eye(n), -np.eye(n)])
    h = np.asarray(bodies.support(body, E, cfg=cfg), dtype=np.float64)
    hi = h[:n] + pad
    lo = -(h[n:] + pad)
    width = hi - lo
    return lo - 0.1 * width, hi + 0.1 * width


def _box_points(lo, hi, N, seed, stream):
    """N box points: a jittered grid plus iid leftovers, Philox-seeded.

    One uniform point per cell of a k^n equal partition leaves every point
    uniform marginally (the estimate stays unbiased) while the indicator
    noise concentrates on boundary cells, so the realized error beats the
    binomial bound by a wide margin.
    """
    rng = _philox(seed, stream)
    n = lo.size
    k = int(math.floor(N ** (1.0 / n) + 1e-9))
    U = rng.random((N, n))
    if k >= 2:
        cells = np.stack(np.meshgrid(*([np.arange(k)] * n), indexing="ij"),
                         axis=-1).reshape(-1, n)
        U[: k ** n] = (cells + U[: k ** n]) / k
    return lo + U * (hi - lo)


def _box_hits(oracle, lo, hi, N, seed, stream):
    return int(np.count_nonzero(oracle(_box_points(lo, hi, N, seed, stream))))


def mc_volume(oracle, bbox, N: int, seed: int = 0) -> tuple[float, float]:
    """Hit-or-miss volume of ``{x : oracle(x)}`` inside the box.

    ``oracle`` maps an (N, n) batch to a boolean mask.  Returns the volume
    estimate and its binomial standard error; a run with zero hits emits
    EmptyEstimateWarning since nothing was learned beyond an upper bound.
    """
    lo = np.asarray(bbox[0], dtype=np.float64)
    hi = np.asarray(bbox[1], dtype=np.float64)
    if lo.shape != hi.shape or lo.ndim != 1:
        raise InvalidParamError("bbox must be a (lo, hi) pair of 1-d arrays")
    if not np.all(hi > lo):
        raise InvalidParamError("bbox must have positive extent on every axis")
    if N < 1:
        raise InvalidParamError(f"need at least one sample, got {N}")
    hits = _box_hits(oracle, lo, hi, N, seed, 0)
    box_vol = float(np.prod(hi - lo))
    p = hits / N
    if hits == 0:
        warnings.warn("volume estimate scored zero hits", EmptyEstimateWarning)
    return box_vol * p, box_vol * math.sqrt(p * (1.0 - p) / N)


# ---------------------------------------------------------------------------
# Steiner fit
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SteinerEstimate:
    """Intrinsic volumes V_0..V_n recovered from a parallel-volume fit."""

    dim: int
    intrinsic: np.ndarray
    stderr: np.ndarray
    eps_grid: np.ndarray
    condition: float
    count: int
    seed: int

    def to_dict(self) -> dict:
        return {
            "value": self.intrinsic.tolist(),
            "stderr": self.stderr.tolist(),
            "N": self.count,
            "seed": self.seed,
            "eps_grid": self.eps_grid.tolist(),
            "condition": self.condition,
        }


def default_eps_grid(n: int) -> np.ndarray:
    return 0.1 * np.arange(1, n + 3)


def steiner_intrinsic(body, eps_grid=None, N: int = 200_000,
                      seed: int = 0,
                      cfg: SolverConfig = DEFAULT_CONFIG) -> SteinerEstimate:
    """Fit Vol(K + eps*B) over the eps grid and read off V_0..V_n.

    One point cloud serves every eps: membership in K + eps*B is just
    dist(K, x) <= eps, so the indicators are nested and the fitted
    coefficients inherit strongly correlated (hence small) errors.  The
    coefficient of eps^(n-j) divided by kappa(n-j) is V_j; standard errors
    propagate through the normal equations from the binomial covariance of
    the nested hit counts.
    """
    n = body.dim
    if n > 4:
        raise UnsupportedError(
            "parallel-volume fitting is capped at 4 dimensions (MC error scaling)"
        )
    eps = default_eps_grid(n) if eps_grid is None else np.sort(
        np.unique(np.asarray(eps_grid, dtype=np.float64)))
    if eps.size < n + 1 or not (np.all(eps > 0.0) and np.all(eps <= 1.0)):
        raise InvalidParamError(
            f"eps grid needs at least {n + 1} distinct nodes in (0, 1]"
        )
    if N < eps.size:
        raise InvalidParamError("sample count below the number of grid nodes")
    lo, hi = bounding_box(body, pad=float(eps[-1]), cfg=cfg)
    X = _box_points(lo, hi, N, seed, 0)
    d = np.asarray(bodies.distance(body, X, cfg=cfg))
    box_vol = float(np.prod(hi - lo))
    p = np.array([np.count_nonzero(d <= e) / N for e in eps])
    y = box_vol * p

    A = eps[:, None] ** np.arange(n, -1, -1)[None, :]
    condition = float(np.linalg.cond(A))
    if condition > _CONDITION_CAP:
        raise IllConditionedError(
            f"Steiner design condition {condition:.3g} exceeds {_CONDITION_CAP:.0e};"
            " widen the eps grid"
        )
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    # nested indicators: Cov(1_i, 1_j) = p_min - p_i p_j
    pmin = np.minimum.outer(p, p)
    cov_y = box_vol ** 2 * (pmin - np.outer(p, p)) / N
    G = np.linalg.solve(A.T @ A, A.T)
    cov_c = G @ cov_y @ G.T
    kappas = np.array([_geom.kappa(n - j) for j in range(n + 1)])
    intrinsic = coef / kappas
    stderr = np.sqrt(np.maximum(np.diag(cov_c), 0.0)) / kappas
    intrinsic.setflags(write=False)
    stderr.setflags(write=False)
    eps.setflags(write=False)
    return SteinerEstimate(dim=n, intrinsic=intrinsic, stderr=stderr,
                           eps_grid=eps, condition=condition, count=N, seed=seed)


# ---------------------------------------------------------------------------
# mixed volumes
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class MixedVolumeEstimate:
    """One coefficient of the multihomogeneous volume expansion."""

    tuple_spec: tuple
    value: float
    stderr: float
    weight_grid: np.ndarray
    condition: float
    count: int
    seed: int

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "stderr": self.stderr,
            "N": self.count,
            "seed": self.seed,
            "weight_grid": self.weight_grid.tolist(),
            "condition": self.condition,
            "tuple": [[desc, mult] for desc, mult in self.tuple_spec],
        }


def _multinomial(alpha) -> int:
    n = sum(alpha)
    out = math.factorial(n)
    for a in alpha:
        out //= math.factorial(a)
    return out


def _canon_terms(terms):
    """Merge duplicate bodies and sort canonically; returns (bodies, alpha)."""
    merged: dict[str, list] = {}
    for body, mult in terms:
        mult = int(mult)
        if mult < 0:
            raise InvalidParamError("multiplicities must be nonnegative")
        if mult == 0:
            continue
        key = bodies.to_json(body)
        if key in merged:
            merged[key][1] += mult
        else:
            merged[key] = [body, mult]
    items = sorted(merged.items(), key=lambda kv: kv[0])
    return [body for _, (body, _m) in items], tuple(m for _, (_b, m) in items)


@dataclass(frozen=True, eq=False)
class _HomogFit:
    """All coefficients of Vol(sum t_i K_i) fitted on one weight grid."""

    bods: tuple
    alphas: tuple
    coef: np.ndarray
    cov: np.ndarray
    condition: float
    nodes: np.ndarray
    count: int
    seed: int

    def mixed(self, alpha) -> tuple[float, float, int]:
        """Mixed volume for the multi-index, its stderr, and its row index."""
        idx = self.alphas.index(tuple(alpha))
        mult = _multinomial(alpha)
        return (self.coef[idx] / mult,
                math.sqrt(max(self.cov[idx, idx], 0.0)) / mult, idx)


def _fit_sum_volumes(bods, n, nodes, N, seed,
                     cfg: SolverConfig = DEFAULT_CONFIG) -> _HomogFit:
    m = len(bods)
    if m > 3:
        raise UnsupportedError("mixed-volume fits are capped at 3 distinct bodies")
    if any(b.dim != n for b in bods):
        raise InvalidParamError("every body must live in the ambient dimension")
    nodes = np.sort(np.unique(np.asarray(nodes, dtype=np.float64)))
    if not np.all(nodes > 0.0):
        raise InvalidParamError("weight nodes must be positive (the fit covers 0)")
    if nodes.size < n + 1:
        raise InvalidParamError(f"need at least {n + 1} weight nodes per body")
    alphas = tuple(
        a for a in itertools.product(range(n + 1), repeat=m) if sum(a) == n
    )
    # coordinate supports of each body give the box of any weighted sum
    E = np.vstack([np.eye(n), -np.eye(n)])
    H = np.array([bodies.support(b, E, cfg=cfg) for b in bods])

    cells = list(itertools.product(nodes, repeat=m))
    M = np.empty((len(cells), len(alphas)))
    y = np.empty(len(cells))
    var = np.empty(len(cells))
    for c, ts in enumerate(cells):
        t = np.asarray(ts)
        h = t @ H
        hi, lo = h[:n], -h[n:]
        width = hi - lo
        lo, hi = lo - 0.1 * width, hi + 0.1 * width
        terms = list(zip(bods, ts))
        hits = _box_hits(lambda X: bodies.minkowski_contains_batch(terms, X, cfg),
                         lo, hi, N, seed, c + 1)
        box_vol = float(np.prod(hi - lo))
        p = hits / N
        y[c] = box_vol * p
        var[c] = box_vol ** 2 * p * (1.0 - p) / N
        M[c] = [np.prod(t ** np.asarray(a)) for a in alphas]
    condition = float(np.linalg.cond(M))
    if condition > _CONDITION_CAP:
        raise IllConditionedError(
            f"weight-grid condition {condition:.3g} exceeds {_CONDITION_CAP:.0e}"
        )
    coef, *_ = np.linalg.lstsq(M, y, rcond=None)
    G = np.linalg.solve(M.T @ M, M.T)
    cov = (G * var[None, :]) @ G.T
    return _HomogFit(bods=tuple(bods), alphas=alphas, coef=coef, cov=cov,
                     condition=condition, nodes=nodes, count=N, seed=seed)


def mixed_volume(terms, grid_spec=None, N: int = 20_000, seed: int = 0,
                 cfg: SolverConfig = DEFAULT_CONFIG) -> MixedVolumeEstimate:
    """Mixed volume V(K_1[a_1], ..., K_m[a_m]) with multiplicities a_i.

    Fits Vol(t_1 K_1 + ... + t_m K_m) on a tensor grid of positive weights
    (N Monte Carlo samples per grid cell), then divides the requested
    coefficient by its multinomial factor.  Duplicate bodies merge and the
    tuple is sorted canonically first, so the output is exactly invariant
    under permutations of the input.
    """
    bods, alpha = _canon_terms(terms)
    if not bods:
        raise InvalidParamError("at least one body with positive multiplicity")
    n = bods[0].dim
    if sum(alpha) != n:
        raise InvalidParamError(
            f"multiplicities sum to {sum(alpha)}, expected the dimension {n}"
        )
    if n > 3:
        raise UnsupportedError(
            "mixed volumes are capped at 3 dimensions (MC cost scaling)"
        )
    nodes = _DEFAULT_WEIGHTS if grid_spec is None else grid_spec
    fit = _fit_sum_volumes(bods, n, nodes, N, seed, cfg)
    value, stderr, _ = fit.mixed(alpha)
    spec = tuple((bodies.to_dict(b), a) for b, a in zip(bods, alpha))
    return MixedVolumeEstimate(tuple_spec=spec, value=value, stderr=stderr,
                               weight_grid=fit.nodes, condition=fit.condition,
                               count=N, seed=seed)


def _joint_alphas(fit, tuples):
    """Multi-indices of the given (body, mult) tuples relative to fit.bods."""
    keys = [bodies.to_json(b) for b in fit.bods]
    out = []
    for tup in tuples:
        alpha = [0] * len(keys)
        for body, mult in tup:
            if int(mult) == 0:
                continue
            alpha[keys.index(bodies.to_json(body))] += int(mult)
        out.append(tuple(alpha))
    return out


def af_residual(K1, K2, rest=(), N: int = 20_000, seed: int = 0,
                grid_spec=None,
                cfg: SolverConfig = DEFAULT_CONFIG) -> tuple[float, float]:
    """Quadratic mixed-volume residual V(K1,K2,..)^2 - V(K1,K1,..)V(K2,K2,..).

    All three coefficients come from one fit of the joint expansion, so the
    equality case K1 = K2 yields an exact zero and in general the shared
    noise cancels in first order.  The returned sigma is the delta-method
    standard deviation; nonnegativity holds when residual >= -3 sigma.
    """
    n = 2 + len(rest)
    if n > 3:
        raise UnsupportedError("residual checks are capped at 3 dimensions")
    base = [(K1, 1), (K2, 1)] + [(b, 1) for b in rest]
    bods, _ = _canon_terms(base)
    nodes = _DEFAULT_WEIGHTS if grid_spec is None else grid_spec
    fit = _fit_sum_volumes(bods, n, nodes, N, seed, cfg)
    restl = [(b, 1) for b in rest]
    a12, a11, a22 = _joint_alphas(fit, [
        [(K1, 1), (K2, 1)] + restl,
        [(K1, 2)] + restl,
        [(K2, 2)] + restl,
    ])
    v12, _, i12 = fit.mixed(a12)
    v11, _, i11 = fit.mixed(a11)
    v22, _, i22 = fit.mixed(a22)
    residual = v12 * v12 - v11 * v22
    grad = np.zeros(len(fit.alphas))
    grad[i12] += 2.0 * v12 / _multinomial(a12)
    grad[i11] -= v22 / _multinomial(a11)
    grad[i22] -= v11 / _multinomial(a22)
    sigma = math.sqrt(max(float(grad @ fit.cov @ grad), 0.0))
    return residual, sigma


def _ratio_from_fit(fit, num, den) -> tuple[float, float]:
    """Ratio of two mixed volumes drawn from one fit, with its sigma.

    The gradient entries accumulate, so when the two tuples collapse to the
    same multi-index (equal bodies) the ratio is exactly 1 with sigma 0.
    """
    a_num, a_den = _joint_alphas(fit, [num, den])
    v_num, _, i_num = fit.mixed(a_num)
    v_den, _, i_den = fit.mixed(a_den)
    if v_den <= 0.0:
        raise IllConditionedError("denominator mixed volume was not resolved")
    ratio = v_num / v_den
    grad = np.zeros(len(fit.alphas))
    grad[i_num] += 1.0 / (v_den * _multinomial(a_num))
    grad[i_den] -= v_num / (v_den * v_den * _multinomial(a_den))
    sigma = math.sqrt(max(float(grad @ fit.cov @ grad), 0.0))
    return ratio, sigma


def lemma1_ratio(K, L, s: int, t: int, N: int = 20_000, seed: int = 0,
                 grid_spec=None,
                 cfg: SolverConfig = DEFAULT_CONFIG) -> tuple[float, float]:
    """Ratio V(K[s-t], L[t], B[n-s]) / V(K[s-t-1], L[t+1], B[n-s]).

    Swapping one copy of the body for the lens of the same inradius can
    only grow the mixed volume, so the ratio stays at or below 1.  Both
    coefficients come from a single joint fit; sigma is the delta-method
    standard deviation of the ratio including their covariance.
    """
    n = K.dim
    if n > 3:
        raise UnsupportedError("ratio checks are capped at 3 dimensions")
    if not 1 <= s <= n:
        raise InvalidParamError(f"s must lie in [1, {n}], got {s}")
    if not 0 <= t <= s - 1:
        raise InvalidParamError(f"t must lie in [0, {s - 1}], got {t}")
    B = bodies.ball(n, 1.0)
    num = [(K, s - t), (L, t), (B, n - s)]
    den = [(K, s - t - 1), (L, t + 1), (B, n - s)]
    bods, _ = _canon_terms(num + den)
    nodes = _DEFAULT_WEIGHTS if grid_spec is None else grid_spec
    fit = _fit_sum_volumes(bods, n, nodes, N, seed, cfg)
    return _ratio_from_fit(fit, num, den)
