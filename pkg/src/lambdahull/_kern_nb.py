"""Numba kernels (default backend).

Twin of ``_kern_np``: same functions, same signatures, loop-style bodies
compiled with ``@njit(cache=True)``.  Semantics must stay in lockstep with
the numpy module; the parity tests compare the two backends directly.
"""

from __future__ import annotations

import numpy as np
from numba import njit

_TINY = 1e-13


@njit(cache=True)
def _perp_into(u, wj, out):
    # out <- component of u orthogonal to the (orthonormal, zero-padded) rows of wj
    kw, n = wj.shape
    for t in range(n):
        out[t] = u[t]
    for b in range(kw):
        dot = 0.0
        for t in range(n):
            dot += u[t] * wj[b, t]
        for t in range(n):
            out[t] -= dot * wj[b, t]


@njit(cache=True)
def _any_perp_dir(wj, n):
    out = np.zeros(n)
    e = np.zeros(n)
    for k in range(n):
        for t in range(n):
            e[t] = 0.0
        e[k] = 1.0
        _perp_into(e, wj, out)
        nrm = 0.0
        for t in range(n):
            nrm += out[t] * out[t]
        nrm = np.sqrt(nrm)
        if nrm > 1e-6:
            for t in range(n):
                out[t] /= nrm
            return out
    for t in range(n):
        out[t] = 0.0
    out[0] = 1.0
    return out


@njit(cache=True)
def _feasible(cand, C, lim, memb_row):
    # member balls (indices in memb_row, -1 padded) are exempt: the candidate
    # lies on them by construction, up to the circumcentre solve's rounding
    m, n = C.shape
    for i in range(m):
        skip = False
        for b in range(memb_row.shape[0]):
            if memb_row[b] == i:
                skip = True
                break
        if skip:
            continue
        d2 = 0.0
        for t in range(n):
            diff = cand[t] - C[i, t]
            d2 += diff * diff
        if np.sqrt(d2) > lim:
            return False
    return True


@njit(cache=True)
def support_batch(U, C, R, q, rho, w, memb, slack, want_points=False):
    N, n = U.shape
    S = q.shape[0]
    h = np.full(N, -np.inf)
    Y = np.zeros((N if want_points else 0, n))
    up = np.empty(n)
    cand = np.empty(n)
    for sp in range(3):
        s = slack * (1e4 ** sp) if sp < 2 else slack * 1e7
        lim = R + s
        for p in range(N):
            h[p] = -np.inf
        if want_points:
            Y[:] = 0.0
        for p in range(N):
            u = U[p]
            for j in range(S):
                _perp_into(u, w[j], up)
                nrm = 0.0
                for t in range(n):
                    nrm += up[t] * up[t]
                nrm = np.sqrt(nrm)
                if nrm <= _TINY:
                    continue
                for sg in range(2):
                    sign = 1.0 - 2.0 * sg
                    for t in range(n):
                        cand[t] = q[j, t] + sign * rho[j] * up[t] / nrm
                    if not _feasible(cand, C, lim, memb[j]):
                        continue
                    val = 0.0
                    for t in range(n):
                        val += u[t] * cand[t]
                    if val > h[p]:
                        h[p] = val
                        if want_points:
                            for t in range(n):
                                Y[p, t] = cand[t]
        allfin = True
        for p in range(N):
            if not np.isfinite(h[p]):
                allfin = False
                break
        if allfin:
            break
    return h, Y


@njit(cache=True)
def dist_batch(X, C, R, q, rho, w, memb, slack, want_points=False):
    N, n = X.shape
    m = C.shape[0]
    S = q.shape[0]
    d = np.empty(N)
    P = X.copy() if want_points else np.zeros((0, n))
    vp = np.empty(n)
    v = np.empty(n)
    cand = np.empty(n)
    best_pt = np.empty(n)
    for p in range(N):
        inside = True
        for i in range(m):
            d2 = 0.0
            for t in range(n):
                diff = X[p, t] - C[i, t]
                d2 += diff * diff
            if np.sqrt(d2) > R + slack:
                inside = False
                break
        if inside:
            d[p] = 0.0
            continue
        best = np.inf
        for sp in range(3):
            s = slack * (1e4 ** sp) if sp < 2 else slack * 1e7
            lim = R + s
            for j in range(S):
                for t in range(n):
                    v[t] = X[p, t] - q[j, t]
                _perp_into(v, w[j], vp)
                nrm = 0.0
                for t in range(n):
                    nrm += vp[t] * vp[t]
                nrm = np.sqrt(nrm)
                if nrm > _TINY:
                    for t in range(n):
                        cand[t] = q[j, t] + rho[j] * vp[t] / nrm
                else:
                    alt = _any_perp_dir(w[j], n)
                    for t in range(n):
                        cand[t] = q[j, t] + rho[j] * alt[t]
                if not _feasible(cand, C, lim, memb[j]):
                    continue
                val = 0.0
                for t in range(n):
                    diff = X[p, t] - cand[t]
                    val += diff * diff
                val = np.sqrt(val)
                if val < best:
                    best = val
                    for t in range(n):
                        best_pt[t] = cand[t]
            if np.isfinite(best):
                break
        d[p] = best
        if want_points:
            for t in range(n):
                P[p, t] = best_pt[t]
    return d, P


@njit(cache=True)
def farthest_batch(X, C, R, q, rho, w, memb, slack, want_points=False):
    N, n = X.shape
    S = q.shape[0]
    f = np.full(N, -np.inf)
    Y = np.zeros((N if want_points else 0, n))
    vp = np.empty(n)
    v = np.empty(n)
    cand = np.empty(n)
    for sp in range(3):
        s = slack * (1e4 ** sp) if sp < 2 else slack * 1e7
        lim = R + s
        for p in range(N):
            f[p] = -np.inf
        if want_points:
            Y[:] = 0.0
        for p in range(N):
            for j in range(S):
                for t in range(n):
                    v[t] = q[j, t] - X[p, t]
                _perp_into(v, w[j], vp)
                nrm = 0.0
                for t in range(n):
                    nrm += vp[t] * vp[t]
                nrm = np.sqrt(nrm)
                degen = nrm <= _TINY
                if degen:
                    alt = _any_perp_dir(w[j], n)
                    for t in range(n):
                        vp[t] = alt[t]
                    nrm = 1.0
                for sg in range(2):
                    sign = 1.0 - 2.0 * sg
                    for t in range(n):
                        cand[t] = q[j, t] + sign * rho[j] * vp[t] / nrm
                    if not _feasible(cand, C, lim, memb[j]):
                        continue
                    val = 0.0
                    for t in range(n):
                        diff = X[p, t] - cand[t]
                        val += diff * diff
                    val = np.sqrt(val)
                    if val > f[p]:
                        f[p] = val
                        if want_points:
                            for t in range(n):
                                Y[p, t] = cand[t]
        allfin = True
        for p in range(N):
            if not np.isfinite(f[p]):
                allfin = False
                break
        if allfin:
            break
    return f, Y


@njit(cache=True)
def inside_batch(X, C, R, slack):
    N, n = X.shape
    m = C.shape[0]
    out = np.empty(N, dtype=np.bool_)
    for p in range(N):
        ok = True
        for i in range(m):
            d2 = 0.0
            for t in range(n):
                diff = X[p, t] - C[i, t]
                d2 += diff * diff
            if np.sqrt(d2) > R + slack:
                ok = False
                break
        out[p] = ok
    return out


@njit(cache=True)
def dykstra_batch(X, C, R, tol, max_sweeps):
    N, n = X.shape
    m = C.shape[0]
    Y = X.copy()
    P = np.zeros((m, N, n))
    Y0 = np.empty((N, n))
    used = 0
    for sweep in range(max_sweeps):
        for p in range(N):
            for t in range(n):
                Y0[p, t] = Y[p, t]
        for i in range(m):
            for p in range(N):
                nrm = 0.0
                for t in range(n):
                    z = Y[p, t] + P[i, p, t]
                    P[i, p, t] = z
                    diff = z - C[i, t]
                    nrm += diff * diff
                nrm = np.sqrt(nrm)
                fac = R / nrm if nrm > R else 1.0
                for t in range(n):
                    z = P[i, p, t]
                    yn = C[i, t] + (z - C[i, t]) * fac
                    P[i, p, t] = z - yn
                    Y[p, t] = yn
        used = sweep + 1
        worst = 0.0
        for p in range(N):
            d2 = 0.0
            for t in range(n):
                diff = Y[p, t] - Y0[p, t]
                d2 += diff * diff
            if d2 > worst:
                worst = d2
        if np.sqrt(worst) <= tol * 0.1:
            break
    return Y, used


@njit(cache=True)
def _dykstra_point(x, C, R, tol, sweep_cap):
    m = C.shape[0]
    n = x.shape[0]
    y = x.copy()
    P = np.zeros((m, n))
    y0 = np.empty(n)
    d_prev = -1.0
    rho_prev = -1.0
    for _ in range(sweep_cap):
        for t in range(n):
            y0[t] = y[t]
        for i in range(m):
            nrm = 0.0
            for t in range(n):
                z = y[t] + P[i, t]
                P[i, t] = z
                diff = z - C[i, t]
                nrm += diff * diff
            nrm = np.sqrt(nrm)
            fac = R / nrm if nrm > R else 1.0
            for t in range(n):
                z = P[i, t]
                yn = C[i, t] + (z - C[i, t]) * fac
                P[i, t] = z - yn
                y[t] = yn
        d = 0.0
        for t in range(n):
            diff = y[t] - y0[t]
            d += diff * diff
        d = np.sqrt(d)
        if d <= tol * 0.01:
            break
        if d_prev > 0.0 and d < d_prev:
            rho = d / d_prev
            # geometric-tail stop, gated on a settled ratio (the transient
            # understates the remaining distance)
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


@njit(cache=True)
def _credit_level(y, u, C, R, anchor, margin):
    m, n = C.shape
    worst = 0.0
    for i in range(m):
        d2 = 0.0
        for t in range(n):
            diff = y[t] - C[i, t]
            d2 += diff * diff
        d2 = np.sqrt(d2)
        if d2 > worst:
            worst = d2
    viol = worst - R
    lvl = 0.0
    for t in range(n):
        lvl += u[t] * y[t]
    if viol <= 1e-12 * R:
        return lvl - 1e-12 * R
    if margin <= 0.0:
        return -np.inf
    tt = viol / (viol + margin)
    out = 0.0
    for t in range(n):
        out += u[t] * (y[t] + tt * (anchor[t] - y[t]))
    return out


@njit(cache=True)
def _kkt_polish(y, u, C, R):
    m, n = C.shape
    dist = np.empty(m)
    for i in range(m):
        d2 = 0.0
        for t in range(n):
            diff = y[t] - C[i, t]
            d2 += diff * diff
        dist[i] = np.sqrt(d2)
    active = np.zeros(m, dtype=np.bool_)
    order = np.argsort(-dist)
    seeded = False
    for j in range(min(m, n)):
        i = order[j]
        if R - dist[i] <= 1e-3 * R:
            active[i] = True
            seeded = True
    if not seeded:
        active[order[0]] = True
    last_added = -1
    res = np.inf
    for _round in range(12):
        idx = np.nonzero(active)[0]
        k = idx.shape[0]
        if k == 0 or k > n + 2:
            return False, y, 0.0, np.inf
        CA = np.empty((k, n))
        for a in range(k):
            for t in range(n):
                CA[a, t] = C[idx[a], t]
        Nmat = np.empty((n, k))
        for a in range(k):
            for t in range(n):
                Nmat[t, a] = (y[t] - CA[a, t]) / R
        lam = np.linalg.lstsq(np.ascontiguousarray(Nmat), u, -1.0)[0]
        F = np.empty(n + k)
        J = np.empty((n + k, n + k))
        for _ in range(40):
            for a in range(k):
                for t in range(n):
                    Nmat[t, a] = (y[t] - CA[a, t]) / R
            res = 0.0
            for t in range(n):
                acc = u[t]
                for a in range(k):
                    acc -= Nmat[t, a] * lam[a]
                F[t] = acc
                if abs(acc) > res:
                    res = abs(acc)
            for a in range(k):
                d2 = 0.0
                for t in range(n):
                    diff = y[t] - CA[a, t]
                    d2 += diff * diff
                val = (d2 - R * R) / (2.0 * R)
                F[n + a] = val
                if abs(val) > res:
                    res = abs(val)
            if res < 1e-13:
                break
            lamsum = 0.0
            for a in range(k):
                lamsum += lam[a]
            J[:] = 0.0
            for t in range(n):
                J[t, t] = -lamsum / R
            for t in range(n):
                for a in range(k):
                    J[t, n + a] = -Nmat[t, a]
                    J[n + a, t] = Nmat[t, a]
            rhs = -F
            delta = np.linalg.lstsq(J, rhs, -1.0)[0]
            dn = 0.0
            for t in range(n):
                dn += delta[t] * delta[t]
            dn = np.sqrt(dn)
            if dn > 0.5 * R:
                fac = 0.5 * R / dn
                for t in range(n + k):
                    delta[t] *= fac
            for t in range(n):
                y[t] += delta[t]
            for a in range(k):
                lam[a] += delta[n + a]
        if res >= 1e-10 and k > 1:
            # inconsistent equality system: evict the worst residual, but
            # never the ball that just entered (that cycles)
            F2 = np.empty(k)
            for a in range(k):
                d2 = 0.0
                for t in range(n):
                    diff = y[t] - CA[a, t]
                    d2 += diff * diff
                F2[a] = abs(d2 - R * R)
            drop_order = np.argsort(-F2)
            drop = idx[drop_order[0]]
            for jj in range(k):
                if idx[drop_order[jj]] != last_added:
                    drop = idx[drop_order[jj]]
                    break
            active[drop] = False
            continue
        for i in range(m):
            d2 = 0.0
            for t in range(n):
                diff = y[t] - C[i, t]
                d2 += diff * diff
            dist[i] = np.sqrt(d2)
        worst = 0
        for i in range(1, m):
            if dist[i] > dist[worst]:
                worst = i
        if dist[worst] > R + 1e-10 * R and not active[worst]:
            active[worst] = True
            last_added = worst
            continue
        neg = -1
        for a in range(k):
            if lam[a] < -1e-9 and (neg < 0 or lam[a] < lam[neg]):
                neg = a
        if neg >= 0:
            active[idx[neg]] = False
            continue
        for a in range(k):
            if lam[a] < 0.0:
                lam[a] = 0.0
        viol = dist[worst] - R
        if viol < 0.0:
            viol = 0.0
        if viol > 1e-11 * R:
            return False, y, 0.0, np.inf
        cert = 0.0
        ru = np.empty(n)
        for t in range(n):
            ru[t] = u[t]
        for a in range(k):
            d2 = 0.0
            for t in range(n):
                diff = y[t] - CA[a, t]
                d2 += diff * diff
            nrm = np.sqrt(d2)
            cert += abs(R - nrm) * lam[a]
            for t in range(n):
                ru[t] -= lam[a] * (y[t] - CA[a, t]) / nrm
        resid_u = 0.0
        for t in range(n):
            resid_u += ru[t] * ru[t]
        cert += 2.0 * R * np.sqrt(resid_u)
        lvl = 0.0
        for t in range(n):
            lvl += u[t] * y[t]
        return True, y, lvl - 1e-9 * R, cert + 2e-9 * R
    return False, y, 0.0, np.inf


@njit(cache=True)
def bisect_support(U, C, R, lo_tol, sweep_cap, want_points=False):
    N, n = U.shape
    m = C.shape[0]
    h = np.empty(N)
    Y = np.zeros((N if want_points else 0, n))
    lo_guard = 1e-9 * R
    anchor = np.zeros(n)
    for i in range(m):
        for t in range(n):
            anchor[t] += C[i, t]
    for t in range(n):
        anchor[t] /= m
    margin_d = 0.0
    for i in range(m):
        d2 = 0.0
        for t in range(n):
            diff = anchor[t] - C[i, t]
            d2 += diff * diff
        d2 = np.sqrt(d2)
        if d2 > margin_d:
            margin_d = d2
    margin = R - margin_d
    for kdir in range(N):
        u = U[kdir]
        lo = -np.inf
        hi = np.inf
        for i in range(m):
            cu = 0.0
            for t in range(n):
                cu += C[i, t] * u[t]
            if cu - R > lo:
                lo = cu - R
            if cu + R < hi:
                hi = cu + R
        y = _dykstra_point(anchor, C, R, 1e-5 * R, sweep_cap)
        step = np.empty(n)
        for _ in range(15):
            for t in range(n):
                step[t] = y[t] + R * u[t]
            yn = _dykstra_point(step, C, R, 1e-5 * R, sweep_cap)
            d = 0.0
            for t in range(n):
                diff = yn[t] - y[t]
                d += diff * diff
            d = np.sqrt(d)
            y = yn
            if d < 1e-3 * R:
                break
        ok, yp, lvl, cert = _kkt_polish(y.copy(), u, C, R)
        if ok and cert + lo_guard <= lo_tol:
            h[kdir] = lvl + 0.5 * (cert - lo_guard)
            if want_points:
                for t in range(n):
                    Y[kdir, t] = yp[t]
            continue
        cl = _credit_level(y, u, C, R, anchor, margin)
        if cl > lo:
            lo = cl
        ybest = y.copy()
        for _ in range(200):
            if hi - lo <= lo_tol:
                break
            for t in range(n):
                step[t] = y[t] + R * u[t]
            yn = _dykstra_point(step, C, R, lo_tol * 0.02, 50 * sweep_cap)
            lvl2 = _credit_level(yn, u, C, R, anchor, margin)
            d = 0.0
            uy = 0.0
            for t in range(n):
                diff = yn[t] - y[t]
                d += diff * diff
                uy += u[t] * yn[t]
            d = np.sqrt(d)
            if lvl2 > lo:
                lo = lvl2
                ybest = yn.copy()
            cap = uy + 2.0 * d + lo_tol * 0.3
            if cap < hi:
                hi = cap
            y = yn
        h[kdir] = 0.5 * (lo + hi) if hi > lo else lo
        if want_points:
            for t in range(n):
                Y[kdir, t] = ybest[t]
    return h, Y


@njit(cache=True)
def sum_classify(X, Cs, qs, rhos, ws, membs, offs, qoffs, R_arr, thresholds,
                 slack, gap_tol, max_iters):
    N, n = X.shape
    nbod = offs.shape[0] - 1
    T = thresholds.shape[0]
    Y = np.empty((nbod, N, n))
    for k in range(nbod):
        c0 = offs[k]
        c1 = offs[k + 1]
        mean = np.zeros(n)
        for i in range(c0, c1):
            for t in range(n):
                mean[t] += Cs[i, t]
        for t in range(n):
            mean[t] /= c1 - c0
        for p in range(N):
            for t in range(n):
                Y[k, p, t] = mean[t]
    lb = np.zeros(N)
    ub = np.full(N, np.inf)
    active = np.ones(N, dtype=np.bool_)
    for _it in range(max_iters):
        idxa = np.nonzero(active)[0]
        na = idxa.shape[0]
        if na == 0:
            break
        tgt = np.empty((na, n))
        for k in range(nbod):
            for a in range(na):
                p = idxa[a]
                for t in range(n):
                    acc = X[p, t] + Y[k, p, t]
                    for kk in range(nbod):
                        acc -= Y[kk, p, t]
                    tgt[a, t] = acc
            dk, Pk = dist_batch(
                tgt,
                Cs[offs[k]:offs[k + 1]],
                R_arr[k],
                qs[qoffs[k]:qoffs[k + 1]],
                rhos[qoffs[k]:qoffs[k + 1]],
                ws[qoffs[k]:qoffs[k + 1]],
                membs[qoffs[k]:qoffs[k + 1]],
                slack,
                True,
            )
            for a in range(na):
                p = idxa[a]
                for t in range(n):
                    Y[k, p, t] = Pk[a, t]
        Eh = np.empty((na, n))
        ubv = np.empty(na)
        for a in range(na):
            p = idxa[a]
            d2 = 0.0
            for t in range(n):
                acc = X[p, t]
                for kk in range(nbod):
                    acc -= Y[kk, p, t]
                Eh[a, t] = acc
                d2 += acc * acc
            ubv[a] = np.sqrt(d2)
            if ubv[a] < ub[p]:
                ub[p] = ubv[a]
            if ubv[a] > _TINY:
                for t in range(n):
                    Eh[a, t] /= ubv[a]
        sep = np.empty(na)
        for a in range(na):
            p = idxa[a]
            acc = 0.0
            for t in range(n):
                acc += X[p, t] * Eh[a, t]
            sep[a] = acc
        for k in range(nbod):
            hk, _ = support_batch(
                Eh,
                Cs[offs[k]:offs[k + 1]],
                R_arr[k],
                qs[qoffs[k]:qoffs[k + 1]],
                rhos[qoffs[k]:qoffs[k + 1]],
                ws[qoffs[k]:qoffs[k + 1]],
                membs[qoffs[k]:qoffs[k + 1]],
                slack,
            )
            for a in range(na):
                sep[a] -= hk[a]
        for a in range(na):
            p = idxa[a]
            if ubv[a] > _TINY:
                cand = sep[a]
                if cand < 0.0:
                    cand = 0.0
                if cand > lb[p]:
                    lb[p] = cand
            else:
                ub[p] = 0.0
                lb[p] = 0.0
            done = ub[p] - lb[p] <= gap_tol
            if not done:
                done = True
                for tt in range(T):
                    thr = thresholds[tt]
                    if not (ub[p] <= thr or lb[p] > thr):
                        done = False
                        break
            active[p] = not done
    d = np.empty(N)
    for p in range(N):
        if not np.isfinite(ub[p]):
            d[p] = lb[p]
        elif ub[p] - lb[p] > gap_tol:
            d[p] = ub[p]
        else:
            hi = ub[p] if ub[p] < lb[p] + gap_tol else lb[p] + gap_tol
            d[p] = 0.5 * (lb[p] + hi)
    return np.searchsorted(thresholds, d, side="left").astype(np.int64)
