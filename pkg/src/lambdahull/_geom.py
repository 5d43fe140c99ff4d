"""Exact geometric primitives for intersections of congruent balls.

A ball polytope is ``P = cap_i B(c_i, R)``.  The extreme structure of ``P``
is carried by sphere intersections: for an index subset ``A`` the set
``cap_{i in A} bd B(c_i, R)`` is (generically) a sphere of dimension
``n - |A|`` centred at the circumcentre ``q_A`` of the subset centres, with
radius ``rho_A = sqrt(R^2 - |q_A - c|^2)``, living in the affine flat
orthogonal to the span of the centre differences.  Maximisers of linear
functionals, nearest points and farthest points over ``P`` all lie on one of
these spheres with nonnegative multipliers, so enumerating the (small number
of) subsets yields closed-form evaluations.  The per-subset data is direction
and point independent and is precomputed once per body here; the hot loops
that consume it live in the kernel modules.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from lambdahull.errors import EmptyBodyError, InvalidParamError, UnsupportedError

_MAX_SUBSETS = 4096


def kappa(n: int) -> float:
    """Volume of the n-dimensional unit ball."""
    return math.pi ** (n / 2) / math.gamma(n / 2 + 1)


def sphere_area(n: int) -> float:
    """Surface measure of the unit sphere S^{n-1} in R^n."""
    return n * kappa(n)


@dataclass(frozen=True)
class PolyData:
    """Precomputed subset geometry for one ball polytope."""

    centers: np.ndarray  # (m, n)
    radius: float
    sub_q: np.ndarray  # (S, n) circumcentres
    sub_rho: np.ndarray  # (S,) sphere-intersection radii
    sub_w: np.ndarray  # (S, kmax-1, n) orthonormal difference bases, zero padded
    sub_memb: np.ndarray  # (S, kmax) defining ball indices, -1 padded

    @property
    def dim(self) -> int:
        return self.centers.shape[1]


def build_poly_data(centers: np.ndarray, radius: float) -> PolyData:
    """Enumerate subset spheres of ``cap_i B(c_i, radius)``.

    Subsets of size 1..min(m, n) are kept when their boundary spheres have a
    common point; affinely degenerate subsets are dropped (their intersections
    are covered by smaller subsets).
    """
    C = np.ascontiguousarray(centers, dtype=np.float64)
    m, n = C.shape
    R = float(radius)
    kmax = min(m, n)
    count = sum(math.comb(m, k) for k in range(1, kmax + 1))
    if count > _MAX_SUBSETS:
        raise UnsupportedError(
            f"{m} centers in dimension {n} need {count} subset spheres; "
            f"cap is {_MAX_SUBSETS}"
        )

    qs, rhos, ws, membs = [], [], [], []
    pad = kmax - 1
    for k in range(1, kmax + 1):
        for idx in combinations(range(m), k):
            c0 = C[idx[0]]
            if k == 1:
                q, rho2, W = c0, R * R, np.zeros((0, n))
            else:
                D = C[list(idx[1:])] - c0
                G = 2.0 * (D @ D.T)
                rhs = np.einsum("ij,ij->i", D, D)
                try:
                    alpha = np.linalg.solve(G, rhs)
                except np.linalg.LinAlgError:
                    continue
                if not np.all(np.isfinite(alpha)):
                    continue
                # reject near-singular solves (degenerate centre placement)
                if np.linalg.norm(G @ alpha - rhs) > 1e-9 * (1.0 + np.abs(rhs).max()):
                    continue
                q = c0 + alpha @ D
                rho2 = R * R - float(np.dot(q - c0, q - c0))
                Q, Rfac = np.linalg.qr(D.T)
                if np.abs(np.diag(Rfac)).min() < 1e-12:
                    continue
                W = Q.T
            if rho2 < -1e-12 * R * R:
                continue  # these boundary spheres never meet
            Wpad = np.zeros((pad, n))
            if W.shape[0]:
                Wpad[: W.shape[0]] = W
            qs.append(q)
            rhos.append(math.sqrt(max(rho2, 0.0)))
            ws.append(Wpad)
            membs.append(list(idx) + [-1] * (kmax - k))

    if not qs:  # m >= 1 always yields the size-1 subsets, so unreachable
        raise EmptyBodyError("no subset sphere data")
    return PolyData(
        centers=C,
        radius=R,
        sub_q=np.ascontiguousarray(qs, dtype=np.float64),
        sub_rho=np.ascontiguousarray(rhos, dtype=np.float64),
        sub_w=np.ascontiguousarray(ws, dtype=np.float64).reshape(len(qs), pad, n),
        sub_memb=np.ascontiguousarray(membs, dtype=np.int64),
    )


def scale_poly_data(data: PolyData, t: float) -> PolyData:
    """Subset data of the dilate ``t * P`` (t > 0)."""
    return PolyData(
        centers=data.centers * t,
        radius=data.radius * t,
        sub_q=data.sub_q * t,
        sub_rho=data.sub_rho * t,
        sub_w=data.sub_w,
        sub_memb=data.sub_memb,
    )


# ---------------------------------------------------------------------------
# closed forms for rotationally symmetric bodies (canonical, centred, axis e)
# ---------------------------------------------------------------------------


def lens_gap(lam: float, inradius: float) -> float:
    """Half-distance between the two generating centres of a lens."""
    return 1.0 / lam - inradius


def lens_rim_radius(lam: float, inradius: float) -> float:
    """Circumradius of a lens: the radius of its rim sphere."""
    r = inradius
    return math.sqrt(r * (2.0 / lam - r))


def lens_support_profile(t: np.ndarray, lam: float, inradius: float) -> np.ndarray:
    """Support of the canonical lens at angle ``t`` from its axis.

    Piecewise: the spherical caps give ``1/lam - a*|cos t|`` while directions
    past ``arccos(a*lam)`` are supported on the rim, giving ``rim * sin t``.
    """
    t = np.asarray(t, dtype=np.float64)
    rb = 1.0 / lam
    a = lens_gap(lam, inradius)
    c = np.abs(np.cos(t))
    s = np.sqrt(np.maximum(1.0 - c * c, 0.0))
    rim = lens_rim_radius(lam, inradius)
    return np.where(c >= a * lam, rb - a * c, rim * s)


def spindle_support_profile(t: np.ndarray, lam: float, circumradius: float) -> np.ndarray:
    """Support of the canonical spindle at angle ``t`` from its axis."""
    t = np.asarray(t, dtype=np.float64)
    rb = 1.0 / lam
    Rv = circumradius
    c = np.abs(np.cos(t))
    s = np.sqrt(np.maximum(1.0 - c * c, 0.0))
    belly = math.sqrt(max(rb * rb - Rv * Rv, 0.0))
    return np.where(c >= Rv * lam, Rv * c, rb - belly * s)


def rotsym_support(
    U: np.ndarray, kind: str, lam: float, param: float,
    center: np.ndarray, axis: np.ndarray,
) -> np.ndarray:
    """Support values of a centred rotationally symmetric body, batched."""
    U = np.atleast_2d(np.asarray(U, dtype=np.float64))
    off = U @ center
    if kind == "ball":
        return off + param
    ct = np.clip(U @ axis, -1.0, 1.0)
    t = np.arccos(ct)
    if kind == "lens":
        return off + lens_support_profile(t, lam, param)
    if kind == "spindle":
        return off + spindle_support_profile(t, lam, param)
    raise UnsupportedError(f"unknown rotationally symmetric kind {kind!r}")


def rotsym_support_point(
    u: np.ndarray, kind: str, lam: float, param: float,
    center: np.ndarray, axis: np.ndarray,
) -> np.ndarray:
    """A maximiser of ``<u, .>`` over the body (unit ``u``)."""
    u = np.asarray(u, dtype=np.float64)
    rb = 1.0 / lam
    if kind == "ball":
        return center + param * u
    ct = float(np.clip(np.dot(u, axis), -1.0, 1.0))
    perp = u - ct * axis
    np_ = np.linalg.norm(perp)
    if kind == "lens":
        a = lens_gap(lam, param)
        if abs(ct) >= a * lam or np_ < 1e-15:
            return center - math.copysign(a, ct) * axis + rb * u
        return center + lens_rim_radius(lam, param) * (perp / np_)
    if kind == "spindle":
        Rv = param
        if abs(ct) >= Rv * lam or np_ < 1e-15:
            return center + math.copysign(Rv, ct) * axis
        b = math.sqrt(max(rb * rb - Rv * Rv, 0.0))
        return center - b * (perp / np_) + rb * u
    raise UnsupportedError(f"unknown rotationally symmetric kind {kind!r}")


def lens_canonical_centers(
    lam: float, inradius: float, center: np.ndarray, axis: np.ndarray
) -> np.ndarray:
    """The two generating ball centres of a lens."""
    a = lens_gap(lam, inradius)
    return np.stack([center + a * axis, center - a * axis])


def spindle_section_centers(lam: float, circumradius: float) -> np.ndarray:
    """Disc centres of the 2-D axial section of a canonical spindle.

    In (axial, radial) coordinates the section is the intersection of two
    discs of radius 1/lam centred at (0, +-b) with b = sqrt(1/lam^2 - R^2).
    """
    b = math.sqrt(max(1.0 / lam**2 - circumradius**2, 0.0))
    return np.array([[0.0, b], [0.0, -b]])


def reduce_to_section(
    X: np.ndarray, center: np.ndarray, axis: np.ndarray
) -> np.ndarray:
    """Map points to (axial, radial) coordinates of the symmetry section."""
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    rel = X - center
    xi = rel @ axis
    rad = np.linalg.norm(rel - xi[:, None] * axis[None, :], axis=1)
    return np.column_stack([xi, rad])


# ---------------------------------------------------------------------------
# minimum enclosing ball (Welzl, move-to-front)
# ---------------------------------------------------------------------------


def _circumsphere(B: np.ndarray) -> tuple[np.ndarray, float]:
    """Smallest sphere through all points of B (B affinely independent)."""
    k = B.shape[0]
    if k == 1:
        return B[0].copy(), 0.0
    D = B[1:] - B[0]
    G = 2.0 * (D @ D.T)
    rhs = np.einsum("ij,ij->i", D, D)
    try:
        alpha = np.linalg.solve(G, rhs)
    except np.linalg.LinAlgError:
        alpha = np.linalg.lstsq(G, rhs, rcond=None)[0]
    q = B[0] + alpha @ D
    return q, float(np.linalg.norm(q - B[0]))


def min_enclosing_ball(
    points: np.ndarray, seed: int = 0
) -> tuple[np.ndarray, float]:
    """Centre and radius of the smallest ball containing all points.

    Welzl's algorithm on a deterministically shuffled order; exact for the
    boundary sets of size <= n+1 it recurses on.
    """
    P = np.ascontiguousarray(points, dtype=np.float64)
    if P.ndim != 2 or P.shape[0] == 0:
        raise InvalidParamError("min_enclosing_ball needs a (m, n) point array")
    if not np.all(np.isfinite(P)):
        raise InvalidParamError("points must be finite")
    n = P.shape[1]
    order = np.random.default_rng(seed).permutation(P.shape[0])
    P = P[order]

    def solve(i: int, B: list[int]) -> tuple[np.ndarray, float]:
        if i == 0 or len(B) == n + 1:
            if not B:
                return P[0].copy(), -1.0
            return _circumsphere(P[np.asarray(B)])
        c, r = solve(i - 1, B)
        if np.linalg.norm(P[i - 1] - c) <= r * (1 + 1e-12) + 1e-15:
            return c, r
        return solve(i - 1, B + [i - 1])

    c, r = solve(P.shape[0], [])
    return c, max(r, 0.0)
