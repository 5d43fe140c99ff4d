"""Inradius, circumradius, touching sets, and the tangent-polytope construction.

The inball of a ball polytope reduces exactly to a minimum enclosing ball of
the centers: B(z, r) fits inside the intersection iff every center lies
within 1/lam - r of z, so the best z is the MEB center and
r = 1/lam - MEB radius.  The circumball has no such finite reduction and is
found by minimizing the farthest-distance function, which is convex in the
candidate center.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from lambdahull import _geom, bodies
from lambdahull.config import DEFAULT_CONFIG, SolverConfig
from lambdahull.errors import (
    DegenerateSupportError,
    HemisphereViolationError,
    InvalidParamError,
    UnsupportedError,
)

_MEB_CONTACT_TOL = 1e-7


def min_enclosing_ball(points: np.ndarray) -> tuple[np.ndarray, float]:
    """Smallest ball containing the points: (center, radius)."""
    c, r = _geom.min_enclosing_ball(points)
    if not (np.all(np.isfinite(c)) and np.isfinite(r)):
        raise DegenerateSupportError("enclosing-ball support set is numerically degenerate")
    return c, r


@dataclass(frozen=True)
class InballResult:
    """Largest inscribed ball: radius, center, and boundary contacts.

    ``touching`` holds the points where the inball meets the body boundary
    (one per center on the enclosing sphere of the center set).  A single
    ball has the whole sphere as contact set and is flagged ``degenerate``.
    """

    radius: float
    center: np.ndarray
    touching: np.ndarray
    degenerate: bool = False


@dataclass(frozen=True)
class CircumResult:
    """Smallest enclosing ball of a body: radius, center, contact directions."""

    radius: float
    center: np.ndarray
    certificate: np.ndarray
    converged: bool = True
    iterations: int = 0


def inradius(P: bodies.BallPolytope, cfg: SolverConfig = DEFAULT_CONFIG) -> InballResult:
    """Inball of a ball polytope, exact up to the enclosing-ball solve."""
    z, meb_r = min_enclosing_ball(P.centers)
    r = P.radius - meb_r
    if P.m == 1:
        return InballResult(radius=P.radius, center=P.centers[0].copy(),
                            touching=np.zeros((0, P.dim)), degenerate=True)
    dC = np.linalg.norm(P.centers - z, axis=1)
    on_sphere = (dC >= meb_r - _MEB_CONTACT_TOL) & (dC > 1e-12)
    Csup = P.centers[on_sphere]
    dirs = (z - Csup) / np.linalg.norm(z - Csup, axis=1, keepdims=True)
    touching = Csup + P.radius * dirs
    return InballResult(radius=r, center=z, touching=touching)


def open_hemisphere_check(T: np.ndarray, z: np.ndarray | None = None,
                          cfg: SolverConfig = DEFAULT_CONFIG) -> bool:
    """Whether the points fit strictly inside an open hemisphere about z.

    Normalizes the rays from z and runs a conditional-gradient minimum-norm
    search over their convex hull.  Two certified exits: a direction whose
    worst inner product beats cfg.hemi_eps proves the hemisphere exists; an
    iterate of norm below cfg.hemi_eps proves the origin is (nearly) in the
    hull, ruling one out.
    """
    T = np.atleast_2d(np.asarray(T, dtype=np.float64))
    if T.shape[0] == 0:
        return True
    if z is None:
        z = np.zeros(T.shape[1])
    Q = T - np.asarray(z, dtype=np.float64)[None, :]
    nrm = np.linalg.norm(Q, axis=1)
    if np.any(nrm < 1e-14):
        raise InvalidParamError("points must be bounded away from the sphere center")
    Q = Q / nrm[:, None]
    eps = cfg.hemi_eps
    x = Q.mean(axis=0)
    for _ in range(20000):
        nx = float(np.linalg.norm(x))
        if nx <= eps:
            return False
        d = x / nx
        margins = Q @ d
        if margins.min() > eps:
            return True
        s = Q[int(np.argmin(margins))]
        diff = x - s
        den = float(diff @ diff)
        if den < 1e-30:
            return False
        gamma = float(np.clip((x @ diff) / den, 0.0, 1.0))
        x = x - gamma * diff
    # undecided band around the threshold: report the best estimate
    return bool(np.linalg.norm(x) > eps and (Q @ (x / np.linalg.norm(x))).min() > 0.0)


def tangent_polytope(T: np.ndarray, z: np.ndarray, r: float, lam: float,
                     cfg: SolverConfig = DEFAULT_CONFIG) -> bodies.BallPolytope:
    """Ball polytope tangent to the sphere(z, r) at the given points.

    Each output ball touches the sphere from outside at one point of T and
    contains it, so the result has the same inball.  Requires the contact
    set to pin the sphere down: if it fits in an open hemisphere a larger
    inscribed ball would exist and the construction is rejected.
    """
    T = np.atleast_2d(np.asarray(T, dtype=np.float64))
    z = np.asarray(z, dtype=np.float64).reshape(-1)
    rb = 1.0 / lam
    if not (0.0 < r <= rb):
        raise InvalidParamError(f"sphere radius must lie in (0, {rb:.6g}], got {r}")
    offs = np.abs(np.linalg.norm(T - z, axis=1) - r)
    if offs.max() > 1e-9 + 1e-9 * r:
        raise InvalidParamError("contact points must lie on the sphere")
    if open_hemisphere_check(T, z, cfg):
        raise HemisphereViolationError(
            "contact points fit in an open hemisphere; the sphere is not a maximal inball"
        )
    centers = z + (T - z) * (1.0 - rb / r)
    return bodies.BallPolytope(T.shape[1], lam, centers)


# ---------------------------------------------------------------------------
# circumradius
# ---------------------------------------------------------------------------


def _direction_net(dim: int, size: int) -> np.ndarray:
    if dim == 2:
        ang = np.linspace(0.0, 2.0 * np.pi, size, endpoint=False)
        return np.c_[np.cos(ang), np.sin(ang)]
    if dim == 3:
        # Fibonacci spiral: near-uniform without clustering at the poles
        k = np.arange(size)
        phi = np.pi * (3.0 - np.sqrt(5.0)) * k
        ct = 1.0 - 2.0 * (k + 0.5) / size
        st = np.sqrt(1.0 - ct**2)
        return np.c_[st * np.cos(phi), st * np.sin(phi), ct]
    rng = np.random.Generator(np.random.Philox(key=[0, 0]))
    U = rng.normal(size=(size, dim))
    return U / np.linalg.norm(U, axis=1, keepdims=True)


class _ViewFarthest:
    """Farthest-distance oracle for a support-only body.

    Support values on a fixed net are cached once (they do not depend on the
    candidate center); each query is then a matvec plus a local refinement
    of the best net direction on the sphere.
    """

    def __init__(self, view: bodies.ConvexBodyView):
        self.dim = view.dim
        self.support = view.support
        self.U = _direction_net(view.dim, 2048 if view.dim == 2 else 8192)
        self.h = np.asarray(view.support(self.U), dtype=np.float64)
        if not np.all(np.isfinite(self.h)):
            raise UnsupportedError("support is not finite on the direction net")
        self.half_diam = 0.5 * float(
            np.max(self.h + np.asarray(view.support(-self.U)))
        )

    def _refine(self, u0: np.ndarray, c: np.ndarray) -> tuple[float, np.ndarray]:
        # orthonormal chart around u0
        A = np.eye(self.dim) - np.outer(u0, u0)
        Vt = np.linalg.qr(A)[0][:, : self.dim - 1]

        def neg(xi):
            u = u0 + Vt @ xi
            u = u / np.linalg.norm(u)
            return -(float(self.support(u[None, :])[0]) - float(u @ c))

        res = minimize(neg, np.zeros(self.dim - 1), method="Nelder-Mead",
                       options={"xatol": 1e-8, "fatol": 1e-13, "maxiter": 160})
        u = u0 + Vt @ res.x
        u = u / np.linalg.norm(u)
        return -float(res.fun), u

    def __call__(self, c: np.ndarray) -> tuple[float, np.ndarray, np.ndarray]:
        vals = self.h - self.U @ c
        order = np.argsort(-vals)
        f, u = -np.inf, self.U[order[0]]
        picked: list[np.ndarray] = []
        for j in order[:64]:
            uj = self.U[j]
            if any(float(uj @ v) > 0.95 for v in picked):
                continue
            picked.append(uj)
            fj, uref = self._refine(uj, c)
            if fj > f:
                f, u = fj, uref
            if len(picked) == 3:
                break
        if vals[order[0]] > f:
            f, u = float(vals[order[0]]), self.U[order[0]]
        # the refined direction's supporting hyperplane touches the body at
        # c + f*u, which doubles as a farthest-point witness
        return f, u, c + f * u


class _BodyFarthest:
    """Exact farthest oracle for concrete bodies; also yields the witness."""

    def __init__(self, body: bodies.Body):
        self.body = body
        self.dim = body.dim

    def __call__(self, c: np.ndarray):
        f, y = bodies.farthest_distance(self.body, c, want_points=True)
        u = (y - c) / max(f, 1e-300)
        return float(f), u, y


def circumradius(body, cfg: SolverConfig = DEFAULT_CONFIG) -> CircumResult:
    """Smallest enclosing ball of a body or support-oracle view.

    Runs subgradient descent with Polyak steps on the convex map
    c -> max over the body of ‖x - c‖.  Farthest-point witnesses accumulate
    into an enclosing-ball lower bound that certifies the gap.  Views yield
    genuine witnesses too: per-direction support values are exact, so the
    inner maximum never overestimates and c + f*u lies on the body where
    its supporting hyperplane touches.
    """
    if isinstance(body, bodies.ConvexBodyView):
        oracle = _ViewFarthest(body)
        lb = oracle.half_diam
        c = np.zeros(body.dim)
        gap_target = max(1e-8, 0.1 * cfg.tol)
    else:
        oracle = _BodyFarthest(body)
        E = np.vstack([np.eye(body.dim), -np.eye(body.dim)])
        _, pts = bodies.support(body, E, want_points=True, cfg=cfg)
        c = pts.mean(axis=0)
        lb = 0.0
        gap_target = max(1e-9, 0.1 * cfg.tol)

    witnesses: list[np.ndarray] = []
    best_f = np.inf
    best_c = c.copy()
    iters = 0
    for iters in range(1, 10001):
        f, u, y = oracle(c)
        witnesses.append(y)
        if len(witnesses) >= 2:
            zc, zr = _geom.min_enclosing_ball(np.asarray(witnesses))
            lb = max(lb, zr)
            fz, uz, yz = oracle(zc)
            witnesses.append(yz)
            if fz < f:
                c, f, u = zc, fz, uz
        if f < best_f:
            best_f, best_c = f, c.copy()
        if best_f - lb <= gap_target:
            break
        step = max(f - lb, 1e-12) * 0.7
        c = c + min(step, 0.25 * f) * u

    converged = best_f - lb <= gap_target
    certificate = _contact_directions(best_c, best_f, witnesses)
    return CircumResult(radius=best_f, center=best_c, certificate=certificate,
                        converged=bool(converged), iterations=iters)


def _contact_directions(c, R, witnesses):
    W = np.asarray(witnesses)
    d = np.linalg.norm(W - c, axis=1)
    for band in (1e-7, 1e-5, 1e-3):
        hit = W[d >= R - band * max(R, 1.0)]
        if hit.shape[0] >= 2:
            dirs = (hit - c) / np.linalg.norm(hit - c, axis=1, keepdims=True)
            out = _dedupe_dirs(dirs)
            if out.shape[0] >= 2:
                return out
    top = W[np.argsort(-d)[:2]] - c
    return _dedupe_dirs(top / np.linalg.norm(top, axis=1, keepdims=True))


def _dedupe_dirs(dirs: np.ndarray, min_angle: float = 1e-3) -> np.ndarray:
    keep: list[np.ndarray] = []
    for u in dirs:
        if all(float(u @ v) < np.cos(min_angle) for v in keep):
            keep.append(u)
    return np.asarray(keep)
