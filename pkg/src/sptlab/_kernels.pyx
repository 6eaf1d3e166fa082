# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled simulation kernels.

Twin of ``_kernels_py.py``: identical loop order, expression shapes, and libm
calls, so that both backends produce bit-identical paths.  Compiled with
-ffp-contract=off to rule out FMA contraction.  Keep in sync with the Python
reference.
"""

from libc.math cimport exp, log, sqrt, pow, INFINITY, NAN

BACKEND = "cython"

KIND_FIXED = 0
KIND_MARKET = 1
KIND_ENTROPY = 2
KIND_DIVERSITY = 3
KIND_RANK = 4

# Stack scratch size; drivers enforce n <= 64 and d <= 64.
DEF MAXN = 64


def fixed_chunk(double[:, ::1] z, double[::1] drift, double[:, ::1] chol_dt,
                double[:, ::1] weights, double[::1] lnv, double[::1] qv,
                double[:, ::1] cov, long snap_every, long step0,
                double[:, ::1] snap_lnv):
    cdef Py_ssize_t m = z.shape[0]
    cdef Py_ssize_t n = z.shape[1]
    cdef Py_ssize_t n_strat = lnv.shape[0]
    cdef Py_ssize_t k, i, j, l, s
    cdef long s_glob, idx
    cdef double x, r, lnr, di
    cdef double d[MAXN]
    cdef double gross[MAXN]

    with nogil:
        for k in range(m):
            for i in range(n):
                x = drift[i]
                for l in range(i + 1):
                    x += chol_dt[i, l] * z[k, l]
                d[i] = x
                gross[i] = exp(x)
            for s in range(n_strat):
                r = 0.0
                for i in range(n):
                    r += weights[s, i] * gross[i]
                if r > 0.0:
                    lnr = log(r)
                elif r == 0.0:
                    lnr = -INFINITY
                else:
                    lnr = NAN
                lnv[s] += lnr
                qv[s] += lnr * lnr
            for i in range(n):
                di = d[i]
                for j in range(n):
                    cov[i, j] += di * d[j]
            s_glob = step0 + k + 1
            if s_glob % snap_every == 0:
                idx = s_glob // snap_every
                for s in range(n_strat):
                    snap_lnv[idx, s] = lnv[s]


def vsm_chunk(double[:, ::1] z, double sqrt_dt, double floor, double[::1] mu,
              long[::1] kinds, double[::1] params, double[:, ::1] weights,
              double[::1] lnv, double[::1] qv, double[:, ::1] cov,
              long[::1] counters, long snap_every, long step0,
              double[:, ::1] snap_lnv):
    cdef Py_ssize_t m = z.shape[0]
    cdef Py_ssize_t n = z.shape[1]
    cdef Py_ssize_t n_strat = lnv.shape[0]
    cdef Py_ssize_t k, i, j, s
    cdef long kd, s_glob, idx, nfl = 0
    cdef double mm, x, r, lnr, di, denom, ln_denom, c, pd, t, zsum
    cdef double d[MAXN]
    cdef double gross[MAXN]
    cdef double w[MAXN]

    with nogil:
        for k in range(m):
            for i in range(n):
                mm = mu[i]
                if mm < floor:
                    mm = floor
                    nfl += 1
                x = sqrt_dt / sqrt(mm) * z[k, i]
                d[i] = x
                gross[i] = exp(x)
            denom = 0.0
            for i in range(n):
                denom += mu[i] * gross[i]
            ln_denom = log(denom)
            for s in range(n_strat):
                kd = kinds[s]
                if kd == 1:  # KIND_MARKET
                    lnr = ln_denom
                else:
                    if kd == 0:  # KIND_FIXED
                        for i in range(n):
                            w[i] = weights[s, i]
                    elif kd == 2:  # KIND_ENTROPY
                        c = params[s]
                        zsum = 0.0
                        for i in range(n):
                            t = mu[i] * (c - log(mu[i]))
                            w[i] = t
                            zsum += t
                        for i in range(n):
                            w[i] = w[i] / zsum
                    else:  # KIND_DIVERSITY
                        pd = params[s]
                        zsum = 0.0
                        for i in range(n):
                            t = pow(mu[i], pd)
                            w[i] = t
                            zsum += t
                        for i in range(n):
                            w[i] = w[i] / zsum
                    r = 0.0
                    for i in range(n):
                        r += w[i] * gross[i]
                    if r > 0.0:
                        lnr = log(r)
                    elif r == 0.0:
                        lnr = -INFINITY
                    else:
                        lnr = NAN
                lnv[s] += lnr
                qv[s] += lnr * lnr
            for i in range(n):
                di = d[i]
                for j in range(n):
                    cov[i, j] += di * d[j]
            for i in range(n):
                mu[i] = mu[i] * gross[i] / denom
            s_glob = step0 + k + 1
            if s_glob % snap_every == 0:
                idx = s_glob // snap_every
                for s in range(n_strat):
                    snap_lnv[idx, s] = lnv[s]

    counters[0] += nfl


def atlas_chunk(double[:, ::1] z, double[::1] gdt, double[:, ::1] xi_dt,
                double[::1] mu, long[::1] order, long[::1] rank_of,
                double[::1] gaps, long[::1] kinds, double[::1] params,
                double[:, ::1] weights, double[::1] eps, double[::1] lnv,
                double[::1] qv, double[::1] lt_acc, double[::1] dg2_acc,
                double[::1] rankmu_acc, double[:, ::1] cov_rank,
                long snap_every, long step0, double[:, ::1] snap_lnv,
                double[:, ::1] snap_rlnmu):
    cdef Py_ssize_t m = z.shape[0]
    cdef Py_ssize_t d_noise = z.shape[1]
    cdef Py_ssize_t n = mu.shape[0]
    cdef Py_ssize_t n_strat = lnv.shape[0]
    cdef Py_ssize_t k, i, l, s, a, b
    cdef long kd, s_glob, idx, r_i, key, ob, ia
    cdef double x, r, lnr, da, denom, ln_denom, c, pd, t, zsum
    cdef double mk, mb, gnew, dg, sq
    cdef double d[MAXN]
    cdef double gross[MAXN]
    cdef double w[MAXN]
    cdef double gnew_buf[MAXN]
    cdef long bb
    cdef bint changed

    with nogil:
        for k in range(m):
            # drift and diffusion attach to the current rank of each name
            for i in range(n):
                r_i = rank_of[i]
                x = gdt[r_i]
                for l in range(d_noise):
                    x += xi_dt[r_i, l] * z[k, l]
                d[i] = x
                gross[i] = exp(x)
            denom = 0.0
            for i in range(n):
                denom += mu[i] * gross[i]
            ln_denom = log(denom)
            for s in range(n_strat):
                kd = kinds[s]
                if kd == 1:  # KIND_MARKET
                    lnr = ln_denom
                else:
                    if kd == 4:  # KIND_RANK
                        for i in range(n):
                            w[i] = weights[s, rank_of[i]]
                    elif kd == 0:  # KIND_FIXED
                        for i in range(n):
                            w[i] = weights[s, i]
                    elif kd == 2:  # KIND_ENTROPY
                        c = params[s]
                        zsum = 0.0
                        for i in range(n):
                            t = mu[i] * (c - log(mu[i]))
                            w[i] = t
                            zsum += t
                        for i in range(n):
                            w[i] = w[i] / zsum
                    else:  # KIND_DIVERSITY
                        pd = params[s]
                        zsum = 0.0
                        for i in range(n):
                            t = pow(mu[i], pd)
                            w[i] = t
                            zsum += t
                        for i in range(n):
                            w[i] = w[i] / zsum
                    r = 0.0
                    for i in range(n):
                        r += w[i] * gross[i]
                    if r > 0.0:
                        lnr = log(r)
                    elif r == 0.0:
                        lnr = -INFINITY
                    else:
                        lnr = NAN
                lnv[s] += lnr
                qv[s] += lnr * lnr
            # rank-coordinate accumulators use the pre-step ranking
            for a in range(n):
                ia = order[a]
                rankmu_acc[a] += mu[ia]
                da = d[ia]
                for b in range(n):
                    cov_rank[a, b] += da * d[order[b]]
            for i in range(n):
                mu[i] = mu[i] * gross[i] / denom
            # gap increments follow the step-start name pairs
            for a in range(n - 1):
                gnew = log(mu[order[a]] / mu[order[a + 1]])
                dg = gnew - gaps[a]
                sq = dg * dg
                dg2_acc[a] += sq
                if gaps[a] < eps[a]:
                    lt_acc[a] += sq
                gnew_buf[a] = gnew
            # re-rank: descending weight, ties broken by ascending name index
            changed = False
            for a in range(1, n):
                key = order[a]
                mk = mu[key]
                bb = a - 1
                while bb >= 0:
                    ob = order[bb]
                    mb = mu[ob]
                    if mb < mk or (mb == mk and ob > key):
                        order[bb + 1] = ob
                        bb -= 1
                        changed = True
                    else:
                        break
                order[bb + 1] = key
            for a in range(n):
                rank_of[order[a]] = a
            # carry the re-ranked gaps into the next step
            if changed:
                for a in range(n - 1):
                    gaps[a] = log(mu[order[a]] / mu[order[a + 1]])
            else:
                for a in range(n - 1):
                    gaps[a] = gnew_buf[a]
            s_glob = step0 + k + 1
            if s_glob % snap_every == 0:
                idx = s_glob // snap_every
                for s in range(n_strat):
                    snap_lnv[idx, s] = lnv[s]
                for a in range(n):
                    snap_rlnmu[idx, a] = log(mu[order[a]])
