"""Pure-Python simulation kernels (reference implementation).

The compiled twin in ``_kernels.pyx`` mirrors this file operation for
operation: same loop order, same expression shapes, same libm calls.  Both
backends therefore produce bit-identical paths; the equivalence tests assert
exact equality.  Keep the two files in sync.

All kernels advance one chunk of steps for a single path and mutate their
state and accumulator arguments in place.  Gaussian increments are drawn by
the caller, so the kernels are pure float arithmetic.
"""

from math import exp, log, sqrt

BACKEND = "python"

KIND_FIXED = 0
KIND_MARKET = 1
KIND_ENTROPY = 2
KIND_DIVERSITY = 3
KIND_RANK = 4

_INF = float("inf")
_NEG_INF = float("-inf")
_NAN = float("nan")


def _exp(x):
    # C exp() returns inf on overflow; math.exp raises instead.
    try:
        return exp(x)
    except OverflowError:
        return _INF


def fixed_chunk(z, drift, chol_dt, weights, lnv, qv, cov,
                snap_every, step0, snap_lnv):
    """Exact Gaussian steps for a constant-parameter market.

    z         (m, n) standard normals
    drift     (n,) per-step log drift, growth * dt
    chol_dt   (n, n) lower Cholesky factor of sigma scaled by sqrt(dt)
    weights   (n_strat, n) fixed portfolio weights
    lnv, qv   (n_strat,) log value / quadratic variation accumulators
    cov       (n, n) quadratic covariation accumulator
    snap_lnv  (n_snap, n_strat) snapshot rows, written every snap_every steps
    """
    m, n = z.shape
    n_strat = lnv.shape[0]
    zl = z.tolist()
    drift_l = drift.tolist()
    chol_l = chol_dt.tolist()
    weights_l = weights.tolist()
    lnv_l = lnv.tolist()
    qv_l = qv.tolist()
    cov_l = cov.tolist()
    d = [0.0] * n
    gross = [0.0] * n

    for k in range(m):
        zk = zl[k]
        for i in range(n):
            x = drift_l[i]
            row = chol_l[i]
            for l in range(i + 1):
                x += row[l] * zk[l]
            d[i] = x
            gross[i] = _exp(x)
        for s in range(n_strat):
            ws = weights_l[s]
            r = 0.0
            for i in range(n):
                r += ws[i] * gross[i]
            if r > 0.0:
                lnr = log(r)
            elif r == 0.0:
                lnr = _NEG_INF
            else:
                lnr = _NAN
            lnv_l[s] += lnr
            qv_l[s] += lnr * lnr
        for i in range(n):
            di = d[i]
            rowc = cov_l[i]
            for j in range(n):
                rowc[j] += di * d[j]
        s_glob = step0 + k + 1
        if s_glob % snap_every == 0:
            idx = s_glob // snap_every
            for s in range(n_strat):
                snap_lnv[idx, s] = lnv_l[s]

    lnv[:] = lnv_l
    qv[:] = qv_l
    for i in range(n):
        cov[i] = cov_l[i]


def vsm_chunk(z, sqrt_dt, floor, mu, kinds, params, weights, lnv, qv, cov,
              counters, snap_every, step0, snap_lnv):
    """Euler steps of the volatility-stabilized market on log capitalizations.

    Per-stock volatility 1/sqrt(mu_i) is evaluated at the step start with mu
    clamped at ``floor`` (occurrences counted in counters[0]).  Tracked
    strategies: fixed weights, the market itself, entropy-weighted (param c)
    and diversity-weighted (param p).
    """
    m, n = z.shape
    n_strat = lnv.shape[0]
    zl = z.tolist()
    mu_l = mu.tolist()
    kinds_l = kinds.tolist()
    params_l = params.tolist()
    weights_l = weights.tolist()
    lnv_l = lnv.tolist()
    qv_l = qv.tolist()
    cov_l = cov.tolist()
    d = [0.0] * n
    gross = [0.0] * n
    w = [0.0] * n
    nfl = 0

    for k in range(m):
        zk = zl[k]
        for i in range(n):
            mm = mu_l[i]
            if mm < floor:
                mm = floor
                nfl += 1
            x = sqrt_dt / sqrt(mm) * zk[i]
            d[i] = x
            gross[i] = _exp(x)
        denom = 0.0
        for i in range(n):
            denom += mu_l[i] * gross[i]
        ln_denom = log(denom)
        for s in range(n_strat):
            kd = kinds_l[s]
            if kd == KIND_MARKET:
                lnr = ln_denom
            else:
                if kd == KIND_FIXED:
                    ws = weights_l[s]
                    for i in range(n):
                        w[i] = ws[i]
                elif kd == KIND_ENTROPY:
                    c = params_l[s]
                    zsum = 0.0
                    for i in range(n):
                        t = mu_l[i] * (c - log(mu_l[i]))
                        w[i] = t
                        zsum += t
                    for i in range(n):
                        w[i] = w[i] / zsum
                else:  # KIND_DIVERSITY
                    pd = params_l[s]
                    zsum = 0.0
                    for i in range(n):
                        t = mu_l[i] ** pd
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
                    lnr = _NEG_INF
                else:
                    lnr = _NAN
            lnv_l[s] += lnr
            qv_l[s] += lnr * lnr
        for i in range(n):
            di = d[i]
            rowc = cov_l[i]
            for j in range(n):
                rowc[j] += di * d[j]
        for i in range(n):
            mu_l[i] = mu_l[i] * gross[i] / denom
        s_glob = step0 + k + 1
        if s_glob % snap_every == 0:
            idx = s_glob // snap_every
            for s in range(n_strat):
                snap_lnv[idx, s] = lnv_l[s]

    mu[:] = mu_l
    lnv[:] = lnv_l
    qv[:] = qv_l
    for i in range(n):
        cov[i] = cov_l[i]
    counters[0] += nfl


def atlas_chunk(z, gdt, xi_dt, mu, order, rank_of, gaps, kinds, params,
                weights, eps, lnv, qv, lt_acc, dg2_acc, rankmu_acc, cov_rank,
                snap_every, step0, snap_lnv, snap_rlnmu):
    """Euler steps of a rank-based market with per-step re-ranking.

    z          (m, d) standard normals
    gdt        (n,) rank drift times dt
    xi_dt      (n, d) rank factor loadings times sqrt(dt)
    mu         (n,) market weights by name, renormalized every step
    order      (n,) int64, names sorted by descending weight (ties by index)
    rank_of    (n,) int64, inverse permutation of order
    gaps       (n-1,) ranked log-weight gaps, carried across chunks
    eps        (n-1,) occupation-kernel widths per gap
    lt_acc     (n-1,) sum of gap-increment squares while the gap is below eps
    dg2_acc    (n-1,) sum of all gap-increment squares
    rankmu_acc (n,) running sum of ranked weights (time average * steps)
    cov_rank   (n, n) quadratic covariation accumulator in rank coordinates
    snap_rlnmu (n_snap, n) ranked log-weight snapshots

    Strategy kinds: rank-fixed weights, market, entropy, diversity.

    The per-step gap increment follows the two names that occupied the ranks
    at the step start; folding the increment at rank crossings instead would
    systematically lose quadratic variation and bias the local-time rates
    low.  The gap value carried to the next step is re-ranked.
    """
    m, d_noise = z.shape
    n = mu.shape[0]
    n_strat = lnv.shape[0]
    zl = z.tolist()
    gdt_l = gdt.tolist()
    xi_l = xi_dt.tolist()
    mu_l = mu.tolist()
    order_l = order.tolist()
    rank_of_l = rank_of.tolist()
    gaps_l = gaps.tolist()
    kinds_l = kinds.tolist()
    params_l = params.tolist()
    weights_l = weights.tolist()
    eps_l = eps.tolist()
    lnv_l = lnv.tolist()
    qv_l = qv.tolist()
    lt_l = lt_acc.tolist()
    dg2_l = dg2_acc.tolist()
    rankmu_l = rankmu_acc.tolist()
    cov_l = cov_rank.tolist()
    d = [0.0] * n
    gross = [0.0] * n
    w = [0.0] * n
    gnew_buf = [0.0] * (n - 1)

    for k in range(m):
        zk = zl[k]
        # drift and diffusion attach to the current rank of each name
        for i in range(n):
            r_i = rank_of_l[i]
            x = gdt_l[r_i]
            row = xi_l[r_i]
            for l in range(d_noise):
                x += row[l] * zk[l]
            d[i] = x
            gross[i] = _exp(x)
        denom = 0.0
        for i in range(n):
            denom += mu_l[i] * gross[i]
        ln_denom = log(denom)
        for s in range(n_strat):
            kd = kinds_l[s]
            if kd == KIND_MARKET:
                lnr = ln_denom
            else:
                if kd == KIND_RANK:
                    ws = weights_l[s]
                    for i in range(n):
                        w[i] = ws[rank_of_l[i]]
                elif kd == KIND_FIXED:
                    ws = weights_l[s]
                    for i in range(n):
                        w[i] = ws[i]
                elif kd == KIND_ENTROPY:
                    c = params_l[s]
                    zsum = 0.0
                    for i in range(n):
                        t = mu_l[i] * (c - log(mu_l[i]))
                        w[i] = t
                        zsum += t
                    for i in range(n):
                        w[i] = w[i] / zsum
                else:  # KIND_DIVERSITY
                    pd = params_l[s]
                    zsum = 0.0
                    for i in range(n):
                        t = mu_l[i] ** pd
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
                    lnr = _NEG_INF
                else:
                    lnr = _NAN
            lnv_l[s] += lnr
            qv_l[s] += lnr * lnr
        # rank-coordinate accumulators use the pre-step ranking
        for a in range(n):
            ia = order_l[a]
            rankmu_l[a] += mu_l[ia]
            da = d[ia]
            rowc = cov_l[a]
            for b in range(n):
                rowc[b] += da * d[order_l[b]]
        for i in range(n):
            mu_l[i] = mu_l[i] * gross[i] / denom
        # gap increments follow the step-start name pairs
        for a in range(n - 1):
            gnew = log(mu_l[order_l[a]] / mu_l[order_l[a + 1]])
            dg = gnew - gaps_l[a]
            sq = dg * dg
            dg2_l[a] += sq
            if gaps_l[a] < eps_l[a]:
                lt_l[a] += sq
            gnew_buf[a] = gnew
        # re-rank: descending weight, ties broken by ascending name index
        changed = False
        for a in range(1, n):
            key = order_l[a]
            mk = mu_l[key]
            b = a - 1
            while b >= 0:
                ob = order_l[b]
                mb = mu_l[ob]
                if mb < mk or (mb == mk and ob > key):
                    order_l[b + 1] = ob
                    b -= 1
                    changed = True
                else:
                    break
            order_l[b + 1] = key
        for a in range(n):
            rank_of_l[order_l[a]] = a
        # carry the re-ranked gaps into the next step
        if changed:
            for a in range(n - 1):
                gaps_l[a] = log(mu_l[order_l[a]] / mu_l[order_l[a + 1]])
        else:
            for a in range(n - 1):
                gaps_l[a] = gnew_buf[a]
        s_glob = step0 + k + 1
        if s_glob % snap_every == 0:
            idx = s_glob // snap_every
            for s in range(n_strat):
                snap_lnv[idx, s] = lnv_l[s]
            for a in range(n):
                snap_rlnmu[idx, a] = log(mu_l[order_l[a]])

    mu[:] = mu_l
    order[:] = order_l
    rank_of[:] = rank_of_l
    gaps[:] = gaps_l
    lnv[:] = lnv_l
    qv[:] = qv_l
    lt_acc[:] = lt_l
    dg2_acc[:] = dg2_l
    rankmu_acc[:] = rankmu_l
    for i in range(n):
        cov_rank[i] = cov_l[i]
