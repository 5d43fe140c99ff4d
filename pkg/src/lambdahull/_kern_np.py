"""Pure-numpy kernels (fallback backend).

Each function has a numba twin in ``_kern_nb`` with the same signature and
semantics; ``tests/test_backends.py`` pins the two against each other.  All
kernels consume the precomputed subset-sphere arrays from ``_geom``.
"""

from __future__ import annotations

import numpy as np

_TINY = 1e-13


def _perp(V: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Component of each row of V orthogonal to the rows of w."""
    if w.shape[0] == 0:
        return V
    return V - (V @ w.T) @ w


def _memb_mask(memb: np.ndarray, m: int) -> np.ndarray:
    """Boolean (S, m) mask of each subset's defining balls.

    Candidates sit on their member spheres by construction, but only up to
    the circumcentre solve's rounding; the feasibility tests exempt member
    balls so that rounding cannot reject a true vertex.
    """
    mask = np.zeros((memb.shape[0], m), dtype=np.bool_)
    rows, cols = np.nonzero(memb >= 0)
    mask[rows, memb[rows, cols]] = True
    return mask


def support_batch(U, C, R, q, rho, w, memb, slack, want_points=False):
    """Support values (and maximisers) of a ball polytope, batched over rows of U."""
    U = np.ascontiguousarray(U, dtype=np.float64)
    N = U.shape[0]
    Y = np.zeros((N if want_points else 0, U.shape[1]))
    mmask = _memb_mask(memb, C.shape[0])
    for s in (slack, slack * 1e4, slack * 1e7):
        h = np.full(N, -np.inf)
        Y[:] = 0.0
        lim = R + s
        for j in range(q.shape[0]):
            up = _perp(U, w[j])
            nrm = np.linalg.norm(up, axis=1)
            ok = nrm > _TINY
            if not np.any(ok):
                continue
            dirs = np.zeros_like(U)
            dirs[ok] = up[ok] / nrm[ok, None]
            for sign in (1.0, -1.0):
                cand = q[j] + sign * rho[j] * dirs
                dmat = np.linalg.norm(cand[:, None, :] - C[None, :, :], axis=2)
                dmat[:, mmask[j]] = 0.0
                feas = ok & np.all(dmat <= lim, axis=1)
                if not np.any(feas):
                    continue
                val = np.einsum("ij,ij->i", U, cand)
                upd = feas & (val > h)
                h[upd] = val[upd]
                if want_points:
                    Y[upd] = cand[upd]
        if np.all(np.isfinite(h)):
            break
    return h, Y


def dist_batch(X, C, R, q, rho, w, memb, slack, want_points=False):
    """Euclidean distance to the polytope (0 inside); optional nearest points."""
    X = np.ascontiguousarray(X, dtype=np.float64)
    N = X.shape[0]
    dC = np.linalg.norm(X[:, None, :] - C[None, :, :], axis=2)
    inside = np.all(dC <= R + slack, axis=1)
    d = np.where(inside, 0.0, np.inf)
    P = X.copy() if want_points else np.zeros((0, X.shape[1]))
    out = ~inside
    if not np.any(out):
        return d, P
    Xo = X[out]
    do = np.full(Xo.shape[0], np.inf)
    Po = Xo.copy()
    mmask = _memb_mask(memb, C.shape[0])
    for s in (slack, slack * 1e4, slack * 1e7):
        lim = R + s
        for j in range(q.shape[0]):
            v = Xo - q[j]
            vp = _perp(v, w[j])
            nrm = np.linalg.norm(vp, axis=1)
            dirs = np.zeros_like(Xo)
            ok = nrm > _TINY
            dirs[ok] = vp[ok] / nrm[ok, None]
            if np.any(~ok):
                dirs[~ok] = _any_perp_dir(w[j], Xo.shape[1])
            cand = q[j] + rho[j] * dirs
            dmat = np.linalg.norm(cand[:, None, :] - C[None, :, :], axis=2)
            dmat[:, mmask[j]] = 0.0
            feas = np.all(dmat <= lim, axis=1)
            if not np.any(feas):
                continue
            val = np.linalg.norm(Xo - cand, axis=1)
            upd = feas & (val < do)
            do[upd] = val[upd]
            if want_points:
                Po[upd] = cand[upd]
        if np.all(np.isfinite(do)):
            break
    d[out] = do
    if want_points:
        P[out] = Po
    return d, P


def _any_perp_dir(w: np.ndarray, n: int) -> np.ndarray:
    """Some unit vector orthogonal to the rows of w (degenerate fallback)."""
    for k in range(n):
        e = np.zeros(n)
        e[k] = 1.0
        p = _perp(e[None, :], w)[0]
        nrm = np.linalg.norm(p)
        if nrm > 1e-6:
            return p / nrm
    return np.eye(n)[0]


def farthest_batch(X, C, R, q, rho, w, memb, slack, want_points=False):
    """Farthest distance from each point to the polytope (max over the body)."""
    X = np.ascontiguousarray(X, dtype=np.float64)
    N = X.shape[0]
    Y = np.zeros((N if want_points else 0, X.shape[1]))
    mmask = _memb_mask(memb, C.shape[0])
    for s in (slack, slack * 1e4, slack * 1e7):
        f = np.full(N, -np.inf)
        Y[:] = 0.0
        lim = R + s
        for j in range(q.shape[0]):
            v = q[j] - X
            vp = _perp(v, w[j])
            nrm = np.linalg.norm(vp, axis=1)
            dirs = np.zeros_like(X)
            ok = nrm > _TINY
            dirs[ok] = vp[ok] / nrm[ok, None]
            if np.any(~ok):
                dirs[~ok] = _any_perp_dir(w[j], X.shape[1])
            for sign in (1.0, -1.0):
                cand = q[j] + sign * rho[j] * dirs
                dmat = np.linalg.norm(cand[:, None, :] - C[None, :, :], axis=2)
                dmat[:, mmask[j]] = 0.0
                feas = np.all(dmat <= lim, axis=1)
                if not np.any(feas):
                    continue
                val = np.linalg.norm(X - cand, axis=1)
                upd = feas & (val > f)
                f[upd] = val[upd]
                if want_points:
                    Y[upd] = cand[upd]
        if np.all(np.isfinite(f)):
            break
    return f, Y


def inside_batch(X, C, R, slack):
    """Membership in the ball intersection, batched."""
    X = np.ascontiguousarray(X, dtype=np.float64)
    dC = np.linalg.norm(X[:, None, :] - C[None, :, :], axis=2)
    return np.all(dC <= R + slack, axis=1)


def dykstra_batch(X, C, R, tol, max_sweeps):
    """Dykstra's corrected cyclic projection onto the ball intersection.

    Returns the projected points and the number of sweeps used (max over the
    batch).  Convergence is declared when a full sweep moves every point by
    at most tol/10.
    """
    X = np.ascontiguousarray(X, dtype=np.float64)
    N, n = X.shape
    m = C.shape[0]
    Y = X.copy()
    P = np.zeros((m, N, n))
    used = 0
    for sweep in range(max_sweeps):
        Y0 = Y.copy()
        for i in range(m):
            Z = Y + P[i]
            rel = Z - C[i]
            nrm = np.linalg.norm(rel, axis=1)
            fac = np.where(nrm > R, R / np.maximum(nrm, _TINY), 1.0)
            Ynew = C[i] + rel * fac[:, None]
            P[i] = Z - Ynew
            Y = Ynew
        used = sweep + 1
        if np.max(np.linalg.norm(Y - Y0, axis=1)) <= tol * 0.1:
            break
    return Y, used


def bisect_support(U, C, R, lo_tol, sweep_cap, want_points=False):
    """Support by level bracketing with a certified stationary-point polish.

    For each direction u the level bracket starts at
    [max_i <c_i,u> - R, min_i <c_i,u> + R].  Projected ascent
    ``y <- Proj(y + R*u)`` localises the maximiser, after which a Newton
    polish on the first-order system certifies the level: with feasibility
    slacks s_i and multipliers lam >= 0 satisfying |u - sum lam_i n_i| <= d,
    every feasible z obeys <u, z - y> <= sum lam_i |s_i| + 2R d, so the
    bracket collapses below lo_tol.  Directions the polish cannot certify
    fall back to the ascent loop, whose projection variational inequality
    bounds the gap by twice the step displacement.
    """
    U = np.ascontiguousarray(U, dtype=np.float64)
    N = U.shape[0]
    h = np.empty(N)
    Y = np.zeros((N if want_points else 0, U.shape[1]))
    lo_guard = 1e-9 * R
    for kdir in range(N):
        u = U[kdir]
        cu = C @ u
        lo = np.max(cu) - R
        hi = np.min(cu) + R
        y = _dykstra_point(C.mean(axis=0), C, R, 1e-5 * R, sweep_cap)
        for _ in range(15):
            yn = _dykstra_point(y + R * u, C, R, 1e-5 * R, sweep_cap)
            d = float(np.linalg.norm(yn - y))
            y = yn
            if d < 1e-3 * R:
                break
        ok, yp, lvl, cert = _kkt_polish(y.copy(), u, C, R)
        if ok and cert + lo_guard <= lo_tol:
            h[kdir] = lvl + 0.5 * (cert - lo_guard)
            if want_points:
                Y[kdir] = yp
            continue
        anchor = C.mean(axis=0)
        margin = R - float(np.max(np.sqrt(np.sum((anchor - C) ** 2, axis=1))))
        lo = max(lo, _credit_level(y, u, C, R, anchor, margin))
        ybest = y.copy()
        for _ in range(200):
            if hi - lo <= lo_tol:
                break
            yn = _dykstra_point(y + R * u, C, R, lo_tol * 0.02, 50 * sweep_cap)
            lvl = _credit_level(yn, u, C, R, anchor, margin)
            d = float(np.linalg.norm(yn - y))
            if lvl > lo:
                lo = lvl
                ybest = yn.copy()
            hi = min(hi, float(u @ yn) + 2.0 * d + lo_tol * 0.3)
            y = yn
        h[kdir] = 0.5 * (lo + hi) if hi > lo else lo
        if want_points:
            Y[kdir] = ybest
    return h, Y


def _dykstra_point(x, C, R, tol, sweep_cap):
    """Dykstra projection of a point onto the ball intersection.

    Stops when the estimated distance to the limit (geometric-tail
    extrapolation of the per-sweep displacement) drops below tol; plain
    displacement thresholds lie inside shallow two-ball wedges where the
    linear rate approaches one.
    """
    m = C.shape[0]
    y = x.copy()
    P = np.zeros((m, x.shape[0]))
    d_prev = -1.0
    rho_prev = -1.0
    for _ in range(sweep_cap):
        y0 = y.copy()
        for i in range(m):
            z = y + P[i]
            rel = z - C[i]
            nrm = np.linalg.norm(rel)
            if nrm > R:
                yn = C[i] + rel * (R / nrm)
            else:
                yn = z
            P[i] = z - yn
            y = yn
        d = float(np.linalg.norm(y - y0))
        if d <= tol * 0.01:
            break
        if d_prev > 0.0 and d < d_prev:
            rho = d / d_prev
            # trust the geometric-tail estimate only once the ratio has
            # settled; during the initial superlinear transient it wildly
            # understates the remaining distance
            if (
                rho_prev > 0.0
                and abs(rho - rho_prev) <= 0.05 * rho
                and d * rho / (1.0 - rho) <= tol
            ):
                break
            rho_prev = rho
        else:
            rho_prev = -1.0
        d_prev = d
    return y


def _credit_level(y, u, C, R, anchor, margin):
    """Certified-feasible level at or below <u, y>.

    An infeasible iterate is pulled toward an interior anchor: residuals of
    the ball constraints are concave along the segment, so the blend with
    t = viol / (viol + margin) is feasible by convexity.
    """
    viol = float(np.max(np.sqrt(np.sum((y - C) ** 2, axis=1)))) - R
    if viol <= 1e-12 * R:
        return float(u @ y) - 1e-12 * R
    if margin <= 0.0:
        return -np.inf
    t = viol / (viol + margin)
    return float(u @ (y + t * (anchor - y)))


def _kkt_polish(y, u, C, R):
    """Newton refinement of the support maximiser plus a dual certificate.

    Returns (ok, y, certified_level, gap_bound).  The active set is seeded
    with at most n tightest balls (a larger seed usually makes the equality
    system inconsistent) and managed between Newton solves: violated balls
    join, negative multipliers leave, and a stalled solve evicts the
    equality with the worst residual.
    """
    m, n = C.shape
    dist = np.sqrt(np.sum((y - C) ** 2, axis=1))
    active = np.zeros(m, dtype=np.bool_)
    order = np.argsort(-dist)
    for j in range(min(m, n)):
        i = order[j]
        if R - dist[i] <= 1e-3 * R:
            active[i] = True
    if not np.any(active):
        active[order[0]] = True
    last_added = -1
    for _round in range(12):
        idx = np.where(active)[0]
        k = idx.shape[0]
        if k == 0 or k > n + 2:
            return False, y, 0.0, np.inf
        CA = C[idx]
        Nmat = (y - CA).T / R
        lam = np.linalg.lstsq(Nmat, u, rcond=-1)[0]
        for _ in range(40):
            Nmat = (y - CA).T / R
            F1 = u - Nmat @ lam
            F2 = (np.sum((y - CA) ** 2, axis=1) - R * R) / (2.0 * R)
            res = max(float(np.max(np.abs(F1))), float(np.max(np.abs(F2))))
            if res < 1e-13:
                break
            J = np.zeros((n + k, n + k))
            J[:n, :n] = -(np.sum(lam) / R) * np.eye(n)
            J[:n, n:] = -Nmat
            J[n:, :n] = Nmat.T
            rhs = np.concatenate((-F1, -F2))
            delta = np.linalg.lstsq(J, rhs, rcond=-1)[0]
            dn = float(np.linalg.norm(delta[:n]))
            if dn > 0.5 * R:
                delta *= 0.5 * R / dn
            y = y + delta[:n]
            lam = lam + delta[n:]
        if res >= 1e-10 and k > 1:
            # inconsistent equality system: evict the worst residual, but
            # never the ball that just entered (that cycles)
            F2 = np.abs(np.sum((y - CA) ** 2, axis=1) - R * R)
            drop_order = np.argsort(-F2)
            drop = idx[drop_order[0]]
            for j in drop_order:
                if idx[j] != last_added:
                    drop = idx[j]
                    break
            active[drop] = False
            continue
        dist = np.sqrt(np.sum((y - C) ** 2, axis=1))
        worst = int(np.argmax(dist))
        if dist[worst] > R + 1e-10 * R and not active[worst]:
            active[worst] = True
            last_added = worst
            continue
        if np.any(lam < -1e-9):
            active[idx[int(np.argmin(lam))]] = False
            continue
        lam = np.maximum(lam, 0.0)
        viol = max(0.0, float(dist[worst]) - R)
        if viol > 1e-11 * R:
            return False, y, 0.0, np.inf
        nrm = np.sqrt(np.sum((y - CA) ** 2, axis=1))
        Nunit = (y - CA).T / nrm
        resid_u = float(np.linalg.norm(u - Nunit @ lam))
        slack = np.abs(R - nrm)
        cert = float(slack @ lam) + 2.0 * R * resid_u
        return True, y, float(u @ y) - 1e-9 * R, cert + 2e-9 * R
    return False, y, 0.0, np.inf


def sum_classify(X, Cs, qs, rhos, ws, membs, offs, qoffs, R_arr, thresholds,
                 slack, gap_tol, max_iters):
    """Classify distances to a Minkowski sum of ball polytopes against thresholds.

    ``Cs, qs, rhos, ws, membs`` hold the (already scaled) subset data of the
    summands, concatenated; ``offs``/``qoffs`` delimit each body's centers and
    subset rows.  Returns, per point, the index of the first threshold that
    dominates the distance (len(thresholds) if none).  Alternating block
    minimisation gives upper bounds; support-function separation gives
    certified lower bounds; a point is resolved once every threshold falls
    outside the (lb, ub) gap or the gap closes below gap_tol.
    """
    X = np.ascontiguousarray(X, dtype=np.float64)
    N, n = X.shape
    nb = len(offs) - 1
    thr = np.asarray(thresholds, dtype=np.float64)
    T = thr.shape[0]

    bodies = []
    for k in range(nb):
        cs = Cs[offs[k]:offs[k + 1]]
        bodies.append(
            (cs, float(R_arr[k]), qs[qoffs[k]:qoffs[k + 1]],
             rhos[qoffs[k]:qoffs[k + 1]], ws[qoffs[k]:qoffs[k + 1]],
             membs[qoffs[k]:qoffs[k + 1]])
        )

    Y = np.empty((nb, N, n))
    for k, (cs, Rk, qk, rk, wk, mk) in enumerate(bodies):
        seed = np.broadcast_to(cs.mean(axis=0), (N, n)).copy()
        Y[k] = seed
    lb = np.zeros(N)
    ub = np.full(N, np.inf)
    active = np.ones(N, dtype=bool)

    def resolved(lbv, ubv):
        gapc = ubv - lbv <= gap_tol
        cls = np.ones_like(lbv, dtype=bool)
        for t in thr:
            cls &= (ubv <= t) | (lbv > t)
        return cls | gapc

    for it in range(max_iters):
        idxa = np.nonzero(active)[0]
        if idxa.size == 0:
            break
        for k, (cs, Rk, qk, rk, wk, mk) in enumerate(bodies):
            tgt = X[idxa] - Y[:, idxa].sum(axis=0) + Y[k][idxa]
            dk, Pk = dist_batch(tgt, cs, Rk, qk, rk, wk, mk, slack, want_points=True)
            Y[k][idxa] = Pk
        E = X[idxa] - Y[:, idxa].sum(axis=0)
        ubv = np.linalg.norm(E, axis=1)
        ub[idxa] = np.minimum(ub[idxa], ubv)
        nz = ubv > _TINY
        if np.any(nz):
            Eh = E[nz] / ubv[nz, None]
            sep = np.einsum("ij,ij->i", X[idxa][nz], Eh)
            for cs, Rk, qk, rk, wk, mk in bodies:
                hk, _ = support_batch(Eh, cs, Rk, qk, rk, wk, mk, slack)
                sep -= hk
            tmp = lb[idxa]
            tmp[nz] = np.maximum(tmp[nz], np.maximum(sep, 0.0))
            lb[idxa] = tmp
        ub[idxa[~nz]] = 0.0
        lb[idxa[~nz]] = 0.0
        active[idxa] = ~resolved(lb[idxa], ub[idxa])
    # point estimate: bound midpoint when the gap closed, else the safe bound
    d = np.where(
        np.isfinite(ub),
        np.where(ub - lb > gap_tol, ub, 0.5 * (lb + np.minimum(ub, lb + gap_tol))),
        lb,
    )
    return np.searchsorted(thr, d, side="left").astype(np.int64)
