"""Representations of bodies cut out by congruent balls, and their solvers.

Two concrete types cover everything the toolkit measures: ``BallPolytope``
(an intersection of finitely many balls of radius ``1/lam``) and
``RotSymBody`` (ball, lens, or spindle in closed form).  Support values,
projections, membership, farthest points and the ``lam``-dual all route
through here; the heavy per-direction work happens in the compiled kernels.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from lambdahull import _geom
from lambdahull._backend import get_kernels
from lambdahull.config import DEFAULT_CONFIG, SolverConfig
from lambdahull.errors import (
    EmptyBodyError,
    InvalidParamError,
    NonConvergenceError,
    UnsupportedError,
)

_MAX_DIM = 6


def _check_dim(dim: int) -> None:
    if dim < 2:
        raise InvalidParamError(f"dimension must be >= 2, got {dim}")
    if dim > _MAX_DIM:
        raise UnsupportedError(f"dimension {dim} exceeds the supported limit {_MAX_DIM}")


@dataclass(frozen=True, eq=False)
class BallPolytope:
    """Intersection of m balls of radius 1/lam with the given centers.

    Construction merges duplicate centers (within 1e-12) and requires a
    nonempty interior: the minimum enclosing ball of the centers must have
    radius strictly below 1/lam.
    """

    dim: int
    lam: float
    centers: np.ndarray
    _cache: Optional[_geom.PolyData] = field(
        default=None, init=False, repr=False, compare=False
    )

    def __post_init__(self) -> None:
        _check_dim(self.dim)
        if not (self.lam > 0.0 and math.isfinite(self.lam)):
            raise InvalidParamError(f"lambda must be positive, got {self.lam}")
        C = np.atleast_2d(np.asarray(self.centers, dtype=np.float64))
        if C.ndim != 2 or C.shape[1] != self.dim or C.shape[0] < 1:
            raise InvalidParamError(
                f"centers must be (m, {self.dim}) with m >= 1, got {C.shape}"
            )
        keep = []
        for i in range(C.shape[0]):
            if all(np.linalg.norm(C[i] - C[j]) > 1e-12 for j in keep):
                keep.append(i)
        C = np.ascontiguousarray(C[keep])
        rb = 1.0 / self.lam
        _, meb_r = _geom.min_enclosing_ball(C)
        if meb_r >= rb * (1.0 - 1e-12):
            raise EmptyBodyError(
                f"centers spread {meb_r:.6g} leaves no interior at ball radius {rb:.6g}"
            )
        C.flags.writeable = False
        object.__setattr__(self, "centers", C)

    @property
    def radius(self) -> float:
        return 1.0 / self.lam

    @property
    def m(self) -> int:
        return self.centers.shape[0]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BallPolytope):
            return NotImplemented
        return (
            self.dim == other.dim
            and self.lam == other.lam
            and np.array_equal(self.centers, other.centers)
        )


@dataclass(frozen=True, eq=False)
class RotSymBody:
    """Rotationally symmetric body: a ball, a lens, or a spindle.

    ``param`` is the radius for a ball, the inradius for a lens and the
    circumradius for a spindle; lens and spindle degenerate to the ball of
    radius 1/lam when the parameter reaches 1/lam (use the constructors,
    which canonicalize).
    """

    kind: str
    dim: int
    lam: float
    param: float
    center: np.ndarray
    axis: np.ndarray

    def __post_init__(self) -> None:
        _check_dim(self.dim)
        if self.kind not in ("ball", "lens", "spindle"):
            raise InvalidParamError(f"unknown kind {self.kind!r}")
        if not (self.lam > 0.0 and math.isfinite(self.lam)):
            raise InvalidParamError(f"lambda must be positive, got {self.lam}")
        rb = 1.0 / self.lam
        if not (0.0 < self.param <= rb * (1.0 + 1e-12)):
            raise InvalidParamError(
                f"{self.kind} parameter must lie in (0, {rb:.6g}], got {self.param}"
            )
        c = np.asarray(self.center, dtype=np.float64).reshape(self.dim).copy()
        a = np.asarray(self.axis, dtype=np.float64).reshape(self.dim).copy()
        nrm = np.linalg.norm(a)
        if nrm < 1e-12:
            raise InvalidParamError("axis must be a nonzero vector")
        a /= nrm
        c.flags.writeable = False
        a.flags.writeable = False
        object.__setattr__(self, "center", c)
        object.__setattr__(self, "axis", a)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RotSymBody):
            return NotImplemented
        return (
            self.kind == other.kind
            and self.dim == other.dim
            and self.lam == other.lam
            and self.param == other.param
            and np.array_equal(self.center, other.center)
            and np.array_equal(self.axis, other.axis)
        )


Body = BallPolytope | RotSymBody


@dataclass(frozen=True)
class ConvexBodyView:
    """Duck-typed convex body: a support oracle plus a membership oracle."""

    dim: int
    support: Callable[[np.ndarray], np.ndarray]
    contains: Callable[[np.ndarray, float], np.ndarray]


def _default_axis(dim: int) -> np.ndarray:
    e = np.zeros(dim)
    e[0] = 1.0
    return e


def ball(dim: int, lam: float, radius: float | None = None,
         center: Sequence[float] | np.ndarray | None = None) -> RotSymBody:
    """Ball of the given radius (default 1/lam, the largest admissible)."""
    rb = 1.0 / lam
    rho = rb if radius is None else float(radius)
    c = np.zeros(dim) if center is None else center
    return RotSymBody("ball", dim, lam, rho, c, _default_axis(dim))


def lens(dim: int, lam: float, inradius: float,
         center: Sequence[float] | np.ndarray | None = None,
         axis: Sequence[float] | np.ndarray | None = None) -> RotSymBody:
    """Intersection of two balls of radius 1/lam with the given inradius."""
    c = np.zeros(dim) if center is None else center
    a = _default_axis(dim) if axis is None else axis
    rb = 1.0 / lam
    if abs(inradius - rb) <= 1e-12 * rb:
        return RotSymBody("ball", dim, lam, rb, c, a)
    return RotSymBody("lens", dim, lam, float(inradius), c, a)


def spindle(dim: int, lam: float, circumradius: float,
            center: Sequence[float] | np.ndarray | None = None,
            axis: Sequence[float] | np.ndarray | None = None) -> RotSymBody:
    """Intersection of all balls of radius 1/lam containing two points.

    The two points (the vertices) sit at center +- circumradius * axis.
    """
    c = np.zeros(dim) if center is None else center
    a = _default_axis(dim) if axis is None else axis
    rb = 1.0 / lam
    if abs(circumradius - rb) <= 1e-12 * rb:
        return RotSymBody("ball", dim, lam, rb, c, a)
    return RotSymBody("spindle", dim, lam, float(circumradius), c, a)


def poly_data(P: BallPolytope) -> _geom.PolyData:
    """Cached boundary-sphere subset data of a ball polytope."""
    if P._cache is None:
        object.__setattr__(P, "_cache", _geom.build_poly_data(P.centers, P.radius))
    return P._cache


def as_ballpoly(body: Body) -> BallPolytope:
    """Finite-ball form of a body, when one exists.

    Lenses convert in any dimension, spindles only in the plane (their
    two-disc axial section), and a ball only at the full radius 1/lam.
    """
    if isinstance(body, BallPolytope):
        return body
    if body.kind == "lens":
        C = _geom.lens_canonical_centers(body.lam, body.param, body.center, body.axis)
        return BallPolytope(body.dim, body.lam, C)
    if body.kind == "ball":
        if abs(body.param - 1.0 / body.lam) <= 1e-12 / body.lam:
            return BallPolytope(body.dim, body.lam, body.center[None, :])
        raise UnsupportedError(
            "a ball below radius 1/lam is not a finite intersection of 1/lam-balls"
        )
    if body.dim == 2:
        sec = _geom.spindle_section_centers(body.lam, body.param)
        perp = np.array([-body.axis[1], body.axis[0]])
        C = body.center + sec[:, 1:] * perp
        return BallPolytope(2, body.lam, C)
    raise UnsupportedError("a spindle has no finite-ball form beyond the plane")


def rotsym_dual(body: RotSymBody) -> RotSymBody:
    """Closed-form lam-dual: lens <-> spindle, full ball <-> point-like ball."""
    if not isinstance(body, RotSymBody):
        raise UnsupportedError("closed-form duals exist only for symmetric bodies")
    rb = 1.0 / body.lam
    if body.kind == "lens":
        return spindle(body.dim, body.lam, rb - body.param, body.center, body.axis)
    if body.kind == "spindle":
        return lens(body.dim, body.lam, rb - body.param, body.center, body.axis)
    raise UnsupportedError("the dual of a ball degenerates to a point")


def scale(body: Body, t: float) -> Body:
    """The dilate t * body about the origin (t > 0)."""
    if not (t > 0.0 and math.isfinite(t)):
        raise InvalidParamError(f"scale factor must be positive, got {t}")
    if isinstance(body, BallPolytope):
        return BallPolytope(body.dim, body.lam / t, body.centers * t)
    return RotSymBody(
        body.kind, body.dim, body.lam / t, body.param * t,
        body.center * t, body.axis,
    )


# ---------------------------------------------------------------------------
# support
# ---------------------------------------------------------------------------


def _unit_rows(U: np.ndarray, dim: int) -> np.ndarray:
    U = np.atleast_2d(np.asarray(U, dtype=np.float64))
    if U.shape[1] != dim:
        raise InvalidParamError(f"directions must have dimension {dim}")
    return np.ascontiguousarray(U)


def support(body: Body, U: np.ndarray, want_points: bool = False,
            cfg: SolverConfig = DEFAULT_CONFIG):
    """Support values h(u) = max over the body of <u, .>, batched.

    Ball polytopes evaluate by enumerating boundary-sphere strata (exact up
    to round-off); symmetric bodies use their closed forms.  With
    ``want_points`` the maximisers come back alongside.
    """
    U = _unit_rows(U, body.dim)
    if isinstance(body, BallPolytope):
        data = poly_data(body)
        kern = get_kernels()
        h, Y = kern.support_batch(
            U, body.centers, body.radius, data.sub_q, data.sub_rho, data.sub_w,
            data.sub_memb, 1e-12, want_points,
        )
        return (h, Y) if want_points else h
    h = _geom.rotsym_support(U, body.kind, body.lam, body.param, body.center, body.axis)
    if not want_points:
        return h
    Y = np.stack([
        _geom.rotsym_support_point(u, body.kind, body.lam, body.param,
                                   body.center, body.axis)
        for u in U
    ])
    return h, Y


def support_bisect(body: Body, U: np.ndarray, want_points: bool = False,
                   cfg: SolverConfig = DEFAULT_CONFIG):
    """Support via level bracketing on the finite-ball form.

    Independent of :func:`support`: brackets the halfspace level and
    certifies it with feasible iterates and a stationarity bound (see the
    kernel).  Used as the cross-check route; absolute error <= cfg.tol.
    """
    P = as_ballpoly(body)
    U = _unit_rows(U, P.dim)
    kern = get_kernels()
    h, Y = kern.bisect_support(U, P.centers, P.radius, cfg.tol, 400, want_points)
    return (h, Y) if want_points else h


def support_ballpoly(P: BallPolytope, u: np.ndarray,
                     cfg: SolverConfig = DEFAULT_CONFIG) -> tuple[float, np.ndarray]:
    """Support value and maximiser in one direction, by the bracketing route."""
    h, Y = support_bisect(P, np.asarray(u)[None, :], want_points=True, cfg=cfg)
    return float(h[0]), Y[0]


def support_rotsym(B: RotSymBody, u: np.ndarray) -> float:
    """Closed-form support of a ball, lens, or spindle in one direction."""
    h = _geom.rotsym_support(
        np.asarray(u)[None, :], B.kind, B.lam, B.param, B.center, B.axis
    )
    return float(h[0])


def dual_support(body: Body, U: np.ndarray) -> np.ndarray:
    """Support of the lam-dual: 1/lam - h(-u), no dual body materialised."""
    U = _unit_rows(U, body.dim)
    return 1.0 / body.lam - support(body, -U)


# ---------------------------------------------------------------------------
# projection / membership / farthest point
# ---------------------------------------------------------------------------


def _as_points(X: np.ndarray, dim: int) -> tuple[np.ndarray, bool]:
    X = np.asarray(X, dtype=np.float64)
    single = X.ndim == 1
    X = np.atleast_2d(X)
    if X.shape[1] != dim:
        raise InvalidParamError(f"points must have dimension {dim}")
    return np.ascontiguousarray(X), single


def _spindle_section_solve(body: RotSymBody, X: np.ndarray, op: str,
                           want_points: bool):
    """Distance/farthest for a spindle through its 2-D axial section."""
    sec = _geom.reduce_to_section(X, body.center, body.axis)
    C2 = _geom.spindle_section_centers(body.lam, body.param)
    data = _geom.build_poly_data(C2, 1.0 / body.lam)
    kern = get_kernels()
    fn = kern.dist_batch if op == "dist" else kern.farthest_batch
    vals, pts2 = fn(sec, C2, 1.0 / body.lam, data.sub_q, data.sub_rho,
                    data.sub_w, data.sub_memb, 1e-12, want_points)
    if not want_points:
        return vals, None
    rel = X - body.center
    xi = rel @ body.axis
    rad_vec = rel - xi[:, None] * body.axis[None, :]
    rad = np.linalg.norm(rad_vec, axis=1)
    rad_dir = np.zeros_like(X)
    ok = rad > 1e-14
    rad_dir[ok] = rad_vec[ok] / rad[ok, None]
    if np.any(~ok):
        perp = _perp_vector(body.axis)
        rad_dir[~ok] = perp
    Y = body.center + pts2[:, :1] * body.axis[None, :] + pts2[:, 1:] * rad_dir
    return vals, Y


def _perp_vector(axis: np.ndarray) -> np.ndarray:
    k = int(np.argmin(np.abs(axis)))
    e = np.zeros(axis.shape[0])
    e[k] = 1.0
    p = e - (e @ axis) * axis
    return p / np.linalg.norm(p)


def distance(body: Body, X: np.ndarray, want_points: bool = False,
             cfg: SolverConfig = DEFAULT_CONFIG):
    """Euclidean distance from each point to the body (0 inside)."""
    X, single = _as_points(X, body.dim)
    if isinstance(body, RotSymBody) and body.kind == "ball":
        rel = np.linalg.norm(X - body.center, axis=1)
        d = np.maximum(rel - body.param, 0.0)
        if want_points:
            fac = np.where(rel > body.param, body.param / np.maximum(rel, 1e-300), 1.0)
            Y = body.center + (X - body.center) * fac[:, None]
            return (d[0], Y[0]) if single else (d, Y)
        return d[0] if single else d
    if isinstance(body, RotSymBody) and body.kind == "spindle":
        d, Y = _spindle_section_solve(body, X, "dist", want_points)
    else:
        P = as_ballpoly(body)
        data = poly_data(P)
        kern = get_kernels()
        d, Y = kern.dist_batch(X, P.centers, P.radius, data.sub_q, data.sub_rho,
                               data.sub_w, data.sub_memb, 1e-12, want_points)
    if want_points:
        return (float(d[0]), Y[0]) if single else (d, Y)
    return float(d[0]) if single else d


def project(body: Body, X: np.ndarray, cfg: SolverConfig = DEFAULT_CONFIG):
    """Nearest point(s) of the body; identity on members."""
    out = distance(body, X, want_points=True, cfg=cfg)
    return out[1]


def project_iterative(P: BallPolytope, X: np.ndarray,
                      cfg: SolverConfig = DEFAULT_CONFIG):
    """Projection by iterated corrected projections onto the defining balls.

    Slower than :func:`project` but independent of the subset enumeration;
    kept as a cross-check.  Raises NonConvergence when the sweep budget runs
    out before the per-sweep displacement settles.
    """
    X, single = _as_points(X, P.dim)
    kern = get_kernels()
    cap = max(64, cfg.max_iters // max(P.m, 1))
    Y, used = kern.dykstra_batch(X, P.centers, P.radius, cfg.tol, cap)
    if used >= cap:
        raise NonConvergenceError(
            f"projection did not settle within {cap} sweeps (tol {cfg.tol})"
        )
    return Y[0] if single else Y


def contains(body: Body, X: np.ndarray, tol: float | None = None,
             cfg: SolverConfig = DEFAULT_CONFIG):
    """Membership with additive tolerance (closed bodies: boundary counts)."""
    if tol is None:
        tol = cfg.tol
    X, single = _as_points(X, body.dim)
    if isinstance(body, BallPolytope):
        kern = get_kernels()
        ins = kern.inside_batch(X, body.centers, body.radius, tol)
    elif body.kind == "ball":
        ins = np.linalg.norm(X - body.center, axis=1) <= body.param + tol
    else:
        ins = distance(body, X, cfg=cfg) <= tol
    return bool(ins[0]) if single else ins


def farthest_distance(body: Body, X: np.ndarray, want_points: bool = False,
                      cfg: SolverConfig = DEFAULT_CONFIG):
    """max over the body of the distance to each query point."""
    X, single = _as_points(X, body.dim)
    if isinstance(body, RotSymBody) and body.kind == "ball":
        f = np.linalg.norm(X - body.center, axis=1) + body.param
        if want_points:
            rel = X - body.center
            nrm = np.linalg.norm(rel, axis=1)
            dirs = np.where(nrm[:, None] > 1e-14, rel / np.maximum(nrm, 1e-300)[:, None],
                            _default_axis(body.dim))
            Y = body.center - body.param * dirs
            return (float(f[0]), Y[0]) if single else (f, Y)
        return float(f[0]) if single else f
    if isinstance(body, RotSymBody) and body.kind == "spindle":
        f, Y = _spindle_section_solve(body, X, "far", want_points)
    else:
        P = as_ballpoly(body)
        data = poly_data(P)
        kern = get_kernels()
        f, Y = kern.farthest_batch(X, P.centers, P.radius, data.sub_q,
                                   data.sub_rho, data.sub_w, data.sub_memb,
                                   1e-12, want_points)
    if want_points:
        return (float(f[0]), Y[0]) if single else (f, Y)
    return float(f[0]) if single else f


def dual_contains(body: Body, X: np.ndarray,
                  cfg: SolverConfig = DEFAULT_CONFIG):
    """Membership in the lam-dual: the body fits in the 1/lam-ball around x."""
    X, single = _as_points(X, body.dim)
    f = farthest_distance(body, X, cfg=cfg)
    f = np.atleast_1d(f)
    ins = f <= 1.0 / body.lam + cfg.tol
    return bool(ins[0]) if single else ins


# ---------------------------------------------------------------------------
# feasibility and Minkowski membership
# ---------------------------------------------------------------------------


def feasibility(balls: Sequence[tuple[np.ndarray, float]],
                cfg: SolverConfig = DEFAULT_CONFIG) -> Optional[np.ndarray]:
    """A common point of the balls, or None when they do not intersect.

    Cyclic projections from the centroid; a pair of balls with a positive
    gap certifies emptiness up front.  A sweep that stalls while the worst
    violation still exceeds cfg.gap_tol also declares emptiness; stalling
    inside the ambiguous band raises NonConvergence so callers can tighten
    tolerances.
    """
    if not balls:
        raise InvalidParamError("feasibility needs at least one ball")
    C = np.asarray([np.asarray(c, dtype=np.float64) for c, _ in balls])
    radii = np.asarray([float(r) for _, r in balls])
    if np.any(radii <= 0.0):
        raise InvalidParamError("ball radii must be positive")
    m = C.shape[0]
    for i in range(m):
        for j in range(i + 1, m):
            if np.linalg.norm(C[i] - C[j]) > radii[i] + radii[j] + cfg.gap_tol:
                return None
    y = C.mean(axis=0)
    for _ in range(cfg.max_iters):
        y_prev = y.copy()
        worst = 0.0
        for i in range(m):
            rel = y - C[i]
            nrm = float(np.linalg.norm(rel))
            if nrm > radii[i]:
                worst = max(worst, nrm - radii[i])
                y = C[i] + rel * (radii[i] / nrm)
        if worst <= cfg.tol:
            return y
        # an empty intersection traps the sweep in a cycle: the iterate
        # returns to (almost) the same point while violations persist
        moved = float(np.linalg.norm(y - y_prev))
        if moved <= 1e-3 * worst:
            if worst > cfg.gap_tol:
                return None
            raise NonConvergenceError(
                f"feasibility stalled with violation {worst:.3g} inside the "
                f"ambiguous band (tol {cfg.tol}, gap_tol {cfg.gap_tol})"
            )
    raise NonConvergenceError(f"feasibility did not settle in {cfg.max_iters} sweeps")


def _split_ball_terms(terms):
    """Separate ball-like summands (exact radial shortcut) from the rest."""
    eps = 0.0
    shift = None
    hard = []
    for body, t in terms:
        t = float(t)
        if t < 0.0:
            raise InvalidParamError("Minkowski weights must be nonnegative")
        if t == 0.0:
            continue
        if shift is None:
            shift = np.zeros(body.dim)
        if isinstance(body, RotSymBody) and body.kind == "ball":
            eps += t * body.param
            shift += t * body.center
        elif isinstance(body, BallPolytope) and body.m == 1:
            eps += t * body.radius
            shift += t * body.centers[0]
        else:
            hard.append((body, t))
    return eps, shift, hard


def minkowski_contains(terms: Sequence[tuple[Body, float]], x: np.ndarray,
                       cfg: SolverConfig = DEFAULT_CONFIG) -> bool:
    """Membership of x in the weighted Minkowski sum of the terms.

    Ball summands collapse into a single radius (the mandatory shortcut:
    x in K + eps*B  iff  dist(K, x) <= eps); what remains is decided through
    the summand-block projection scheme with certified bounds.
    """
    x = np.asarray(x, dtype=np.float64).reshape(-1)
    return bool(minkowski_contains_batch(terms, x[None, :], cfg)[0])


def minkowski_contains_batch(terms: Sequence[tuple[Body, float]],
                             X: np.ndarray,
                             cfg: SolverConfig = DEFAULT_CONFIG) -> np.ndarray:
    """Vectorized minkowski_contains: one kernel invocation for all points."""
    eps, shift, hard = _split_ball_terms(terms)
    if shift is None:
        raise InvalidParamError("at least one positive weight is required")
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    target = X - shift
    if not hard:
        return np.linalg.norm(target, axis=1) <= eps + cfg.tol
    scaled = [scale(body, t) for body, t in hard]
    if len(scaled) == 1:
        d = np.asarray(distance(scaled[0], target, cfg=cfg))
        return d <= eps + cfg.tol
    polys = [as_ballpoly(b) for b in scaled]
    datas = [poly_data(P) for P in polys]
    kern = get_kernels()
    Cs = np.vstack([P.centers for P in polys])
    kmax = max(d.sub_w.shape[1] for d in datas)

    def pad(w):
        out = np.zeros((w.shape[0], kmax, w.shape[2]))
        out[:, : w.shape[1], :] = w
        return out

    def pad_memb(mb):
        out = np.full((mb.shape[0], kmax + 1), -1, dtype=np.int64)
        out[:, : mb.shape[1]] = mb
        return out

    qs = np.vstack([d.sub_q for d in datas])
    rhos = np.concatenate([d.sub_rho for d in datas])
    ws = np.vstack([pad(d.sub_w) for d in datas])
    membs = np.vstack([pad_memb(d.sub_memb) for d in datas])
    offs = np.cumsum([0] + [P.m for P in polys]).astype(np.int64)
    qoffs = np.cumsum([0] + [d.sub_q.shape[0] for d in datas]).astype(np.int64)
    R_arr = np.asarray([P.radius for P in polys])
    thr = np.asarray([eps + cfg.tol])
    idx = kern.sum_classify(
        target, Cs, qs, rhos, ws, membs, offs, qoffs, R_arr, thr,
        1e-12, cfg.tol * 0.1, cfg.max_iters,
    )
    return idx == 0


def as_view(body: Body, cfg: SolverConfig = DEFAULT_CONFIG) -> ConvexBodyView:
    """Support/membership closure over a concrete body."""
    return ConvexBodyView(
        dim=body.dim,
        support=lambda U: support(body, U, cfg=cfg),
        contains=lambda X, tol=cfg.tol: contains(body, X, tol, cfg=cfg),
    )


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def to_dict(body: Body) -> dict:
    if isinstance(body, BallPolytope):
        return {
            "dim": body.dim,
            "lambda": body.lam,
            "kind": "ballpoly",
            "centers": body.centers.tolist(),
        }
    return {
        "dim": body.dim,
        "lambda": body.lam,
        "kind": body.kind,
        "center": body.center.tolist(),
        "axis": body.axis.tolist(),
        "param": body.param,
    }


def from_dict(doc: dict) -> Body:
    try:
        dim = int(doc["dim"])
        lam = float(doc["lambda"])
        kind = doc["kind"]
    except KeyError as exc:
        raise InvalidParamError(f"body document missing field {exc}") from exc
    if kind == "ballpoly":
        return BallPolytope(dim, lam, np.asarray(doc["centers"], dtype=np.float64))
    if kind in ("ball", "lens", "spindle"):
        center = np.asarray(doc.get("center", np.zeros(dim)), dtype=np.float64)
        axis = np.asarray(doc.get("axis", _default_axis(dim)), dtype=np.float64)
        return RotSymBody(kind, dim, lam, float(doc["param"]), center, axis)
    raise InvalidParamError(f"unknown body kind {kind!r}")


def to_json(body: Body) -> str:
    return json.dumps(to_dict(body), sort_keys=True)


def from_json(text: str) -> Body:
    return from_dict(json.loads(text))
