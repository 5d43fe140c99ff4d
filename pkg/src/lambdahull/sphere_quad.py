"""Direction quadrature on the unit sphere and rotational support profiles.

Mean-width-type measurements integrate the support function over the
direction sphere.  The rules here are seeded Monte Carlo (plain and
antithetic) and deterministic product grids, all normalized so the weights
sum to the sphere measure n*kappa(n).  The profile machinery reduces
averages of a lens support over caps and half-spheres to one-dimensional
colatitude integrals, which is both faster and far more accurate than
sampling the sphere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from lambdahull import _geom, bodies, radii
from lambdahull.config import DEFAULT_CONFIG, SolverConfig
from lambdahull.errors import (
    DegenerateCellError,
    InvalidParamError,
    UnsupportedError,
)

_SCHEMES = ("mc", "symmetrized", "grid")


@dataclass(frozen=True)
class DirectionRule:
    """Quadrature rule on the unit sphere: nodes, weights, provenance."""

    dim: int
    scheme: str
    nodes: np.ndarray
    weights: np.ndarray
    seed: int

    @property
    def count(self) -> int:
        return self.nodes.shape[0]

    def to_dict(self) -> dict:
        return {"dim": self.dim, "scheme": self.scheme,
                "N": self.count, "seed": self.seed}


def rule_from_dict(doc: dict) -> DirectionRule:
    return sample_directions(int(doc["dim"]), str(doc["scheme"]),
                             int(doc["N"]), int(doc["seed"]))


def _philox(seed: int, stream: int) -> np.random.Generator:
    return np.random.Generator(
        np.random.Philox(key=np.array([seed, stream], dtype=np.uint64))
    )


def sample_directions(n: int, scheme: str, N: int, seed: int = 0) -> DirectionRule:
    """Build a direction rule; deterministic in all arguments.

    ``mc`` draws independent uniform directions, ``symmetrized`` keeps them
    in antithetic pairs (u, -u), ``grid`` is equispaced angles for n=2 and
    Gauss-Legendre in the polar cosine times a periodic trapezoid in the
    azimuth for n=3 (the grid is rounded up to a full tensor product).
    """
    if n < 2:
        raise InvalidParamError(f"dimension must be at least 2, got {n}")
    if N < 2:
        raise InvalidParamError(f"need at least 2 nodes, got {N}")
    if seed < 0:
        raise InvalidParamError("seed must be a nonnegative integer")
    if scheme not in _SCHEMES:
        raise InvalidParamError(f"scheme must be one of {_SCHEMES}, got {scheme!r}")
    area = _geom.sphere_area(n)
    if scheme == "mc":
        U = _philox(seed, 0).normal(size=(N, n))
        U /= np.linalg.norm(U, axis=1, keepdims=True)
        w = np.full(N, area / N)
    elif scheme == "symmetrized":
        if N % 2:
            raise InvalidParamError("antithetic pairing needs an even node count")
        V = _philox(seed, 0).normal(size=(N // 2, n))
        V /= np.linalg.norm(V, axis=1, keepdims=True)
        U = np.vstack([V, -V])
        w = np.full(N, area / N)
    else:
        if n == 2:
            ang = 2.0 * np.pi * np.arange(N) / N
            U = np.c_[np.cos(ang), np.sin(ang)]
            w = np.full(N, 2.0 * np.pi / N)
        elif n == 3:
            n_pol = max(2, math.isqrt(max(N // 2 - 1, 0)) + 1)
            n_az = max(2, -(-N // n_pol))
            x, wx = np.polynomial.legendre.leggauss(n_pol)
            phi = 2.0 * np.pi * np.arange(n_az) / n_az
            st = np.sqrt(np.maximum(1.0 - x * x, 0.0))
            U = np.empty((n_pol * n_az, 3))
            U[:, 0] = np.outer(st, np.cos(phi)).ravel()
            U[:, 1] = np.outer(st, np.sin(phi)).ravel()
            U[:, 2] = np.repeat(x, n_az)
            w = np.repeat(wx, n_az) * (2.0 * np.pi / n_az)
        else:
            raise UnsupportedError("product grids are only available for n <= 3")
    U.setflags(write=False)
    w.setflags(write=False)
    return DirectionRule(dim=n, scheme=scheme, nodes=U, weights=w, seed=seed)


def _support_values(body, U: np.ndarray, cfg: SolverConfig) -> np.ndarray:
    if isinstance(body, bodies.ConvexBodyView):
        return np.asarray(body.support(U), dtype=np.float64)
    return np.asarray(bodies.support(body, U, cfg=cfg), dtype=np.float64)


def intrinsic_v1(body, rule: DirectionRule,
                 cfg: SolverConfig = DEFAULT_CONFIG) -> tuple[float, float]:
    """First intrinsic volume from support values on the rule's nodes.

    Returns (estimate, error).  Monte Carlo rules report the standard error
    of the weighted mean (pairs count once under the antithetic scheme).
    Grids carry no sampling noise; the reported error is the Richardson
    difference against the half-resolution grid, scaled for a second-order
    rule.
    """
    if rule.dim != body.dim:
        raise InvalidParamError("rule and body dimensions differ")
    h = _support_values(body, rule.nodes, cfg)
    kprev = _geom.kappa(rule.dim - 1)
    est = float(h @ rule.weights) / kprev
    if rule.scheme == "grid":
        coarse = sample_directions(rule.dim, "grid", max(rule.count // 2, 4),
                                   rule.seed)
        hc = _support_values(body, coarse.nodes, cfg)
        est_c = float(hc @ coarse.weights) / kprev
        return est, abs(est - est_c) / 3.0
    area = _geom.sphere_area(rule.dim)
    if rule.scheme == "symmetrized":
        half = rule.count // 2
        g = 0.5 * (h[:half] + h[half:])
        spread = float(np.std(g, ddof=1)) if half > 1 else 0.0
        return est, area / kprev * spread / math.sqrt(half)
    spread = float(np.std(h, ddof=1)) if rule.count > 1 else 0.0
    return est, area / kprev * spread / math.sqrt(rule.count)


# ---------------------------------------------------------------------------
# rotational profile of a lens
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RotProfile:
    """Colatitude profile of a lens about its touching direction.

    ``support_at(t)`` is the support value at angle ``t`` from the touching
    direction; ``weight_at(t) = sin(t)^(n-2)`` is the colatitude density of
    the sphere measure; ``hemisphere_mean`` is the weighted average of the
    support over the half-sphere around the touching direction.
    """

    dim: int
    lam: float
    inradius: float
    switch_angle: float
    hemisphere_mean: float

    def support_at(self, t) -> np.ndarray:
        return _geom.lens_support_profile(np.asarray(t, dtype=np.float64),
                                          self.lam, self.inradius)

    def weight_at(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=np.float64)
        return np.sin(t) ** (self.dim - 2)


def _colat_norm(n: int) -> float:
    # integral of sin(t)^(n-2) over [0, pi/2]
    k = n - 2
    return math.sqrt(math.pi) / 2.0 * math.gamma((k + 1) / 2.0) / math.gamma(k / 2.0 + 1.0)


def lens_profile(n: int, lam: float, r: float) -> RotProfile:
    """Profile data for the lens of inradius r (adaptive quadrature)."""
    if n < 2:
        raise InvalidParamError(f"dimension must be at least 2, got {n}")
    if lam <= 0.0:
        raise InvalidParamError("lambda must be positive")
    rb = 1.0 / lam
    if not (0.0 < r <= rb):
        raise InvalidParamError(f"lens inradius must lie in (0, {rb:.6g}], got {r}")
    a = _geom.lens_gap(lam, r)
    tstar = math.acos(min(a * lam, 1.0))

    def hq(t):
        return (float(_geom.lens_support_profile(np.array([t]), lam, r)[0])
                * math.sin(t) ** (n - 2))

    pts = [tstar] if 0.0 < tstar < math.pi / 2 else None
    num, _ = quad(hq, 0.0, math.pi / 2, points=pts, epsabs=1e-12, limit=200)
    return RotProfile(dim=n, lam=lam, inradius=r, switch_angle=tstar,
                      hemisphere_mean=num / _colat_norm(n))


def eval_R(profile: RotProfile, phi0: float) -> float:
    """Running weighted excess of the profile over its half-sphere mean.

    Integrates (support - hemisphere_mean) * weight from 0 to phi0.  The
    value is 0 at both endpoints and negative in between: the profile is
    increasing, so early colatitudes sit below the mean.
    """
    if not (-1e-12 <= phi0 <= math.pi / 2 + 1e-12):
        raise InvalidParamError(f"angle must lie in [0, pi/2], got {phi0}")
    phi0 = min(max(phi0, 0.0), math.pi / 2)
    if phi0 == 0.0:
        return 0.0
    lam, r, n, F = profile.lam, profile.inradius, profile.dim, profile.hemisphere_mean

    def f(t):
        h = float(_geom.lens_support_profile(np.array([t]), lam, r)[0])
        return (h - F) * math.sin(t) ** (n - 2)

    ts = profile.switch_angle
    pts = [ts] if 0.0 < ts < phi0 else None
    val, _ = quad(f, 0.0, phi0, points=pts, epsabs=1e-12, limit=200)
    return float(val)


# ---------------------------------------------------------------------------
# radial cells of a touching set
# ---------------------------------------------------------------------------


def radial_cell_contains(u: np.ndarray, T: np.ndarray, z: np.ndarray, i: int):
    """Whether directions fall in contact point i's cell (ties shared).

    A direction belongs to the cell of ``T[i]`` when no other contact point
    has a larger inner product with it; boundaries belong to every adjacent
    cell, so the cells cover the sphere.
    """
    U = np.atleast_2d(np.asarray(u, dtype=np.float64))
    T = np.atleast_2d(np.asarray(T, dtype=np.float64))
    if not 0 <= i < T.shape[0]:
        raise InvalidParamError(f"contact index {i} out of range for {T.shape[0]} points")
    rel = T - np.asarray(z, dtype=np.float64)[None, :]
    prof = U @ rel.T
    ok = prof[:, i] >= prof.max(axis=1) - 1e-12
    return bool(ok[0]) if np.asarray(u).ndim == 1 else ok


@dataclass(frozen=True)
class CellAverageCheck:
    """Cell average of a body's support against the matched lens average."""

    lhs: float
    rhs: float
    margin: float
    stderr: float
    cell_count: int


def lemma_m_check(P: bodies.BallPolytope, i: int, rule: DirectionRule,
                  cfg: SolverConfig = DEFAULT_CONFIG) -> CellAverageCheck:
    """Average the support over one contact cell and compare with the lens.

    The left side averages the body's support over the spherical cell of
    contact point i, weighted by the rule.  The right side is the exact
    half-sphere average of the lens with the same inradius, aligned so its
    touching direction matches; the cell average never exceeds it beyond
    sampling error.
    """
    ib = radii.inradius(P, cfg)
    if ib.degenerate or ib.touching.shape[0] < 2:
        raise InvalidParamError("body must have at least two inball contacts")
    mask = radial_cell_contains(rule.nodes, ib.touching, ib.center, i)
    count = int(mask.sum())
    if count < 50:
        raise DegenerateCellError(
            f"cell {i} captured only {count} of {rule.count} nodes; enlarge the rule"
        )
    h = _support_values(P, rule.nodes[mask], cfg)
    w = rule.weights[mask]
    lhs = float(h @ w) / float(w.sum())
    stderr = float(np.std(h, ddof=1)) / math.sqrt(count) if count > 1 else 0.0
    rhs = lens_profile(P.dim, P.lam, ib.radius).hemisphere_mean
    return CellAverageCheck(lhs=lhs, rhs=rhs, margin=rhs - lhs,
                            stderr=stderr, cell_count=count)
