"""Compiled path-tracking kernels.

Everything here works on flat arrays produced by ``compiled.CompiledHomotopy``
and tracks one path at a time, so a path's arithmetic never depends on which
other paths share its batch.
"""

import numpy as np
from numba import njit

# status codes shared with the Python layer
RUNNING = 0
REACHED_END = 1
STEP_UNDERFLOW = 2
DIVERGED = 3
MAX_STEPS = 4

EULER = 0
RK4 = 1

# a residual within this many roundoff units counts as converged
NOISE_FACTOR = 64.0
# largest relative Newton step accepted on the roundoff criterion
NOISE_STEP_CAP = 1e-6


@njit(cache=True, nogil=True)
def _weights(t, gamma, detour):
    s = t + 1j * detour * t * (1.0 - t)
    ds = 1.0 + 1j * detour * (1.0 - 2.0 * t)
    return gamma * (1.0 - s), s, -gamma * ds, ds


@njit(cache=True, nogil=True)
def _monomials(z, mon_parent, mon_var, v):
    v[0] = 1.0
    for k in range(1, mon_parent.shape[0]):
        v[k] = v[mon_parent[k]] * z[mon_var[k]]


@njit(cache=True, nogil=True)
def _evaluate(z, t, mon_parent, mon_var, f_sys, f_eq, f_mon, f_coef,
              j_sys, j_eq, j_var, j_mon, j_coef, patch, gamma, detour,
              v, vals, jac, H, J, Ht, absvals):
    """Fill H, J (with the patch row last) and dH/dt at (z, t).

    absvals[s, i] receives the sum of term magnitudes of equation i of
    system s, which bounds the roundoff in H.
    """
    n = vals.shape[1]
    n1 = z.shape[0]
    _monomials(z, mon_parent, mon_var, v)
    vals[:, :] = 0.0
    absvals[:, :] = 0.0
    jac[:, :, :] = 0.0
    for k in range(f_sys.shape[0]):
        term = f_coef[k] * v[f_mon[k]]
        vals[f_sys[k], f_eq[k]] += term
        absvals[f_sys[k], f_eq[k]] += abs(term.real) + abs(term.imag)
    for k in range(j_sys.shape[0]):
        jac[j_sys[k], j_eq[k], j_var[k]] += j_coef[k] * v[j_mon[k]]
    a, b, da, db = _weights(t, gamma, detour)
    for i in range(n):
        H[i] = a * vals[0, i] + b * vals[1, i]
        Ht[i] = da * vals[0, i] + db * vals[1, i]
        for j in range(n1):
            J[i, j] = a * jac[0, i, j] + b * jac[1, i, j]
    acc = 0.0 + 0.0j
    for j in range(n1):
        acc += patch[j] * z[j]
        J[n, j] = patch[j]
    H[n] = acc - 1.0
    Ht[n] = 0.0


@njit(cache=True, nogil=True)
def t_weight(t, gamma, detour):
    a, b, da, db = _weights(t, gamma, detour)
    return abs(a), abs(b)


@njit(cache=True, nogil=True)
def _residual_ratio(H, absvals, w):
    """max_i |H_i| / (eps * roundoff bound of H_i)."""
    eps = 2.220446049250313e-16
    worst = 0.0
    n = absvals.shape[1]
    for i in range(n):
        bound = eps * (w[0] * absvals[0, i] + w[1] * absvals[1, i])
        r = abs(H[i])
        if bound > 0:
            r = r / bound
        elif r > 0:
            return np.inf
        if r > worst:
            worst = r
    return worst


@njit(cache=True, nogil=True)
def _lu_solve(A, b, x, LU, perm):
    """Solve A x = b by partial pivoting; returns False on an exactly
    singular pivot."""
    n = A.shape[0]
    LU[:, :] = A
    for i in range(n):
        perm[i] = i
        x[i] = b[i]
    for col in range(n):
        p = col
        best = abs(LU[col, col])
        for i in range(col + 1, n):
            a = abs(LU[i, col])
            if a > best:
                best = a
                p = i
        if best == 0.0:
            return False
        if p != col:
            for j in range(n):
                tmp = LU[col, j]
                LU[col, j] = LU[p, j]
                LU[p, j] = tmp
            tmp = x[col]
            x[col] = x[p]
            x[p] = tmp
        piv = LU[col, col]
        for i in range(col + 1, n):
            f = LU[i, col] / piv
            if f != 0.0:
                LU[i, col] = f
                for j in range(col + 1, n):
                    LU[i, j] -= f * LU[col, j]
                x[i] -= f * x[col]
    for i in range(n - 1, -1, -1):
        acc = x[i]
        for j in range(i + 1, n):
            acc -= LU[i, j] * x[j]
        x[i] = acc / LU[i, i]
    return True


@njit(cache=True, nogil=True)
def _norm(x):
    acc = 0.0
    for i in range(x.shape[0]):
        acc += x[i].real * x[i].real + x[i].imag * x[i].imag
    return np.sqrt(acc)


@njit(cache=True, nogil=True)
def _segment(z, t, t_end, h, h_min, h_max, grow, grow_after, shrink,
             corr_iters, corr_tol, corr_contract, divergence, max_steps, predictor,
             mon_parent, mon_var, f_sys, f_eq, f_mon, f_coef, j_sys, j_eq, j_var, j_mon, j_coef,
             patch, gamma, detour, v, vals, absvals, jac, H, Ht, J, LU, perm, dz, k1, k2, k3, k4, ztmp, zc, rhs,
             counters):
    """Predictor-corrector from t to t_end, updating z in place.

    counters[0], counters[1] accumulate accepted and rejected steps; returns
    (status, t, h).
    """
    n1 = z.shape[0]
    streak = 0
    used = 0
    status = RUNNING
    while status == RUNNING:
        if t >= t_end:
            status = REACHED_END
            break
        if used >= max_steps:
            status = MAX_STEPS
            break
        if h > t_end - t:
            h = t_end - t
        used += 1
        # predictor: tangent dz/dt = -J^{-1} H_t
        _evaluate(z, t, mon_parent, mon_var, f_sys, f_eq, f_mon, f_coef,
                  j_sys, j_eq, j_var, j_mon, j_coef, patch, gamma, detour, v, vals, jac, H, J, Ht, absvals)
        for i in range(n1):
            rhs[i] = -Ht[i]
        ok = _lu_solve(J, rhs, k1, LU, perm)
        if ok and predictor == RK4:
            for i in range(n1):
                ztmp[i] = z[i] + 0.5 * h * k1[i]
            _evaluate(ztmp, t + 0.5 * h, mon_parent, mon_var, f_sys, f_eq, f_mon, f_coef,
                      j_sys, j_eq, j_var, j_mon, j_coef, patch, gamma, detour, v, vals, jac, H, J, Ht, absvals)
            for i in range(n1):
                rhs[i] = -Ht[i]
            ok = _lu_solve(J, rhs, k2, LU, perm)
            if ok:
                for i in range(n1):
                    ztmp[i] = z[i] + 0.5 * h * k2[i]
                _evaluate(ztmp, t + 0.5 * h, mon_parent, mon_var, f_sys, f_eq, f_mon, f_coef,
                          j_sys, j_eq, j_var, j_mon, j_coef, patch, gamma, detour, v, vals, jac, H, J, Ht, absvals)
                for i in range(n1):
                    rhs[i] = -Ht[i]
                ok = _lu_solve(J, rhs, k3, LU, perm)
            if ok:
                for i in range(n1):
                    ztmp[i] = z[i] + h * k3[i]
                _evaluate(ztmp, t + h, mon_parent, mon_var, f_sys, f_eq, f_mon, f_coef,
                          j_sys, j_eq, j_var, j_mon, j_coef, patch, gamma, detour, v, vals, jac, H, J, Ht, absvals)
                for i in range(n1):
                    rhs[i] = -Ht[i]
                ok = _lu_solve(J, rhs, k4, LU, perm)
            if ok:
                for i in range(n1):
                    zc[i] = z[i] + h * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) / 6.0
        elif ok:
            for i in range(n1):
                zc[i] = z[i] + h * k1[i]
        # corrector: Newton at t + h
        converged = False
        if ok:
            tn = t + h
            if tn > t_end:
                tn = t_end
            prev = 0.0
            for it in range(corr_iters):
                _evaluate(zc, tn, mon_parent, mon_var, f_sys, f_eq, f_mon, f_coef,
                          j_sys, j_eq, j_var, j_mon, j_coef, patch, gamma, detour, v, vals, jac, H, J, Ht, absvals)
                # residual already at the roundoff level of the evaluation
                at_noise = it > 0 and _residual_ratio(H, absvals, t_weight(tn, gamma, detour)) <= NOISE_FACTOR
                for i in range(n1):
                    rhs[i] = -H[i]
                if not _lu_solve(J, rhs, dz, LU, perm):
                    break
                for i in range(n1):
                    zc[i] += dz[i]
                nd = _norm(dz)
                nz = _norm(zc)
                if at_noise and nd <= NOISE_STEP_CAP * (1.0 + nz):
                    converged = True
                    break
                if it > 0 and nd > corr_contract * prev:
                    break
                if nd <= corr_tol * (1.0 + nz):
                    converged = True
                    break
                prev = nd
        if converged:
            t = t + h
            if t > t_end:
                t = t_end
            for i in range(n1):
                z[i] = zc[i]
            counters[0] += 1
            streak += 1
            if streak >= grow_after:
                h = min(h * grow, h_max)
                streak = 0
            if _norm(z) > divergence:
                status = DIVERGED
        else:
            counters[1] += 1
            streak = 0
            h = h * shrink
            if h < h_min:
                status = STEP_UNDERFLOW
    return status, t, h


@njit(cache=True, nogil=True)
def track_paths(starts, mon_parent, mon_var, f_sys, f_eq, f_mon, f_coef,
                j_sys, j_eq, j_var, j_mon, j_coef, patch, gamma, detour,
                t_end, h0, h_min, h_max, grow, grow_after, shrink,
                corr_iters, corr_tol, corr_contract, divergence, max_steps,
                predictor, polish_iters, end_min_step, end_max_steps,
                out_z, out_status, out_t, out_steps, out_rejects, out_polish):
    """Track each row of ``starts`` (projective, on the patch) from t = 0.

    After the truncation point t_end < 1 an endgame continues the path to
    t = 1 with minimum step ``end_min_step`` and at most ``end_max_steps``
    steps; paths with a steep but regular approach to their endpoint need
    it. If the endgame fails, the point at t_end is kept. Either way the
    endpoint is then polished against the target.

    out_polish[p, k] holds the k-th polish step norm at t = 1 (relative),
    or -1 when unused. out_t is 1 when the endgame succeeded.
    """
    npaths = starts.shape[0]
    n1 = starts.shape[1]
    n = n1 - 1
    nmon = mon_parent.shape[0]
    v = np.empty(nmon, dtype=np.complex128)
    vals = np.empty((2, n), dtype=np.complex128)
    absvals = np.empty((2, n))
    jac = np.empty((2, n, n1), dtype=np.complex128)
    H = np.empty(n1, dtype=np.complex128)
    Ht = np.empty(n1, dtype=np.complex128)
    J = np.empty((n1, n1), dtype=np.complex128)
    LU = np.empty((n1, n1), dtype=np.complex128)
    perm = np.empty(n1, dtype=np.int64)
    dz = np.empty(n1, dtype=np.complex128)
    k1 = np.empty(n1, dtype=np.complex128)
    k2 = np.empty(n1, dtype=np.complex128)
    k3 = np.empty(n1, dtype=np.complex128)
    k4 = np.empty(n1, dtype=np.complex128)
    ztmp = np.empty(n1, dtype=np.complex128)
    zc = np.empty(n1, dtype=np.complex128)
    rhs = np.empty(n1, dtype=np.complex128)
    zsave = np.empty(n1, dtype=np.complex128)
    counters = np.zeros(2, dtype=np.int64)

    for p in range(npaths):
        z = starts[p].copy()
        counters[:] = 0
        status, t, h = _segment(z, 0.0, t_end, h0, h_min, h_max, grow, grow_after, shrink,
                                corr_iters, corr_tol, corr_contract, divergence, max_steps, predictor,
                                mon_parent, mon_var, f_sys, f_eq, f_mon, f_coef, j_sys, j_eq, j_var, j_mon, j_coef,
                                patch, gamma, detour, v, vals, absvals, jac, H, Ht, J, LU, perm, dz,
                                k1, k2, k3, k4, ztmp, zc, rhs, counters)
        if status == REACHED_END and t < 1.0 and end_max_steps > 0:
            for i in range(n1):
                zsave[i] = z[i]
            st2, t2, h2 = _segment(z, t, 1.0, min(h, 1.0 - t), end_min_step, h_max, grow, grow_after, shrink,
                                   corr_iters, corr_tol, corr_contract, divergence, end_max_steps, predictor,
                                   mon_parent, mon_var, f_sys, f_eq, f_mon, f_coef, j_sys, j_eq, j_var, j_mon,
                                   j_coef, patch, gamma, detour, v, vals, absvals, jac, H, Ht, J, LU, perm, dz,
                                   k1, k2, k3, k4, ztmp, zc, rhs, counters)
            if st2 == REACHED_END:
                t = t2
            else:
                for i in range(n1):
                    z[i] = zsave[i]
        # polish against the target at t = 1
        for k in range(polish_iters):
            out_polish[p, k] = -1.0
        if status == REACHED_END:
            for k in range(polish_iters):
                _evaluate(z, 1.0, mon_parent, mon_var, f_sys, f_eq, f_mon, f_coef,
                          j_sys, j_eq, j_var, j_mon, j_coef, patch, gamma, detour, v, vals, jac, H, J, Ht, absvals)
                for i in range(n1):
                    rhs[i] = -H[i]
                if not _lu_solve(J, rhs, dz, LU, perm):
                    break
                for i in range(n1):
                    z[i] += dz[i]
                nd = _norm(dz) / (1.0 + _norm(z))
                out_polish[p, k] = nd
                if nd < 1e-15:
                    break
        for i in range(n1):
            out_z[p, i] = z[i]
        out_status[p] = status
        out_t[p] = t
        out_steps[p] = counters[0]
        out_rejects[p] = counters[1]


@njit(cache=True, nogil=True)
def affine_diagnostics(points, mon_parent, mon_var, f_sys, f_eq, f_mon, f_coef,
                       j_sys, j_eq, j_var, j_mon, j_coef, newton_iters,
                       out_points, out_residual, out_cond, out_steps, out_noise, out_scale):
    """Newton-refine affine endpoints on the target and record residual,
    Jacobian condition number, the Newton step norms (relative), the
    roundoff level of a Newton step at the final point and the size of the
    summed term magnitudes (the scale the residual should be judged on)."""
    npts = points.shape[0]
    n = points.shape[1]
    n1 = n + 1
    nmon = mon_parent.shape[0]
    v = np.empty(nmon, dtype=np.complex128)
    vals = np.empty((2, n), dtype=np.complex128)
    jac = np.empty((2, n, n1), dtype=np.complex128)
    F = np.empty(n, dtype=np.complex128)
    JF = np.empty((n, n), dtype=np.complex128)
    LU = np.empty((n, n), dtype=np.complex128)
    perm = np.empty(n, dtype=np.int64)
    dx = np.empty(n, dtype=np.complex128)
    rhs = np.empty(n, dtype=np.complex128)
    z = np.empty(n1, dtype=np.complex128)
    absf = np.empty(n)
    for p in range(npts):
        x = points[p].copy()
        for k in range(newton_iters + 1):
            z[0] = 1.0
            for i in range(n):
                z[i + 1] = x[i]
            _monomials(z, mon_parent, mon_var, v)
            vals[:, :] = 0.0
            jac[:, :, :] = 0.0
            absf[:] = 0.0
            for q in range(f_sys.shape[0]):
                if f_sys[q] == 1:
                    term = f_coef[q] * v[f_mon[q]]
                    vals[1, f_eq[q]] += term
                    absf[f_eq[q]] += abs(term)
            for q in range(j_sys.shape[0]):
                if j_sys[q] == 1 and j_var[q] > 0:
                    jac[1, j_eq[q], j_var[q]] += j_coef[q] * v[j_mon[q]]
            for i in range(n):
                F[i] = vals[1, i]
                for j in range(n):
                    JF[i, j] = jac[1, i, j + 1]
            if k == newton_iters:
                break
            for i in range(n):
                rhs[i] = -F[i]
            if not _lu_solve(JF, rhs, dx, LU, perm):
                out_steps[p, k] = np.inf
                break
            for i in range(n):
                x[i] += dx[i]
            out_steps[p, k] = _norm(dx) / (1.0 + _norm(x))
        out_residual[p] = _norm(F)
        u, s, vh = np.linalg.svd(JF)
        out_cond[p] = s[0] / s[n - 1] if s[n - 1] > 0 else np.inf
        eps = 2.220446049250313e-16
        out_scale[p] = np.sqrt(np.sum(absf * absf))
        out_noise[p] = eps * out_scale[p] / s[n - 1] / (1.0 + _norm(x)) if s[n - 1] > 0 else np.inf
        for i in range(n):
            out_points[p, i] = x[i]
