"""Seeded Monte Carlo integration of the three market models.

Three drivers share one chunked, per-path engine:

* ``simulate_fixed``: constant drift and covariance, exact Gaussian steps.
* ``simulate_vsm``: volatility-stabilized market, Euler steps on log caps
  with per-stock volatility 1/sqrt(mu_i) evaluated at the step start.
* ``simulate_atlas``: rank-based market with per-step re-ranking, gap
  local-time accumulation, and rank portfolios rebalanced every step.

Path k draws its Gaussian increments from a counter-based Philox stream
keyed by (master seed, k), so results are independent of scheduling and of
the worker count; aggregation is an ordered reduction over path indices.
Identical configuration and seed reproduce runs bit for bit.

Per-step portfolio updates use weighted arithmetic gross returns
``log(sum_i w_i exp(dlnV_i))`` with weights recomputed at every step, which
keeps long-only portfolio values positive by construction.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from ._backend import (
    BACKEND,
    KIND_DIVERSITY,
    KIND_ENTROPY,
    KIND_FIXED,
    KIND_MARKET,
    KIND_RANK,
    kernels,
)
from .errors import (
    ConfigInvalid,
    DimensionMismatch,
    InvalidParams,
    MissingGapRecord,
    MissingSnapshots,
    WeightCollapse,
    WeightFloorWarning,
)
from .frontier import MarketParams, Portfolio
from .markets import MarketWeights, SimpleAtlasSpec, simple_atlas_params
from .ranks import AtlasSpec, RankPortfolio, local_time_rates

__all__ = [
    "SimConfig",
    "RunReport",
    "Estimate",
    "FgpDecomposition",
    "FixedWeights",
    "TrackMarket",
    "EntropyWeighted",
    "DiversityWeighted",
    "RankWeights",
    "simulate_fixed",
    "simulate_vsm",
    "simulate_atlas",
    "estimate_local_times",
    "fgp_decomposition",
    "realized_stats",
    "RealizedStats",
    "BACKEND",
]

CHUNK_STEPS = 16384
MAX_UNIVERSE = 64  # stack scratch limit in the compiled kernels
WEIGHT_FLOOR = 1e-10
FLOOR_WARN_RATE = 1e-3
FLOOR_FAIL_RATE = 1e-2
# Occupation-kernel width: multiple of the RMS per-step gap increment.  The
# kernel increments follow names across rank crossings, so the only material
# bias left is the O(eps) density decay; a narrow kernel keeps that below
# ~3% for the fastest gaps while the occupancy counts stay large.
LOCAL_TIME_EPS_MULT = 1.5


class Estimate(NamedTuple):
    """Across-path sample mean and its standard error."""

    mean: float
    stderr: float


def _estimate(values: np.ndarray) -> Estimate:
    values = np.asarray(values, dtype=float)
    mean = float(np.mean(values))
    if values.shape[0] < 2:
        return Estimate(mean, float("nan"))
    return Estimate(mean, float(np.std(values, ddof=1) / math.sqrt(values.shape[0])))


@dataclass(frozen=True)
class SimConfig:
    """Monte Carlo run configuration.

    ``horizon`` must be an integer number of ``dt`` steps.  ``record_stride``
    0 picks a stride giving roughly 512 snapshots; ``local_time_epsilon``
    None derives a per-gap kernel width from the model (see simulate_atlas).
    ``n_workers`` only affects scheduling, never results.
    """

    horizon: float
    dt: float
    n_paths: int
    seed: int
    record_stride: int = 0
    local_time_epsilon: float | None = None
    n_workers: int = 1

    def __post_init__(self):
        if not (isinstance(self.dt, (int, float)) and self.dt > 0 and math.isfinite(self.dt)):
            raise ConfigInvalid("dt must be positive and finite")
        if not (math.isfinite(self.horizon) and self.horizon >= self.dt):
            raise ConfigInvalid("horizon must be at least dt")
        if int(self.n_paths) != self.n_paths or self.n_paths < 1:
            raise ConfigInvalid("n_paths must be a positive integer")
        if int(self.seed) != self.seed or not 0 <= self.seed < 2**64:
            raise ConfigInvalid("seed must be an integer in [0, 2^64)")
        if int(self.record_stride) != self.record_stride or self.record_stride < 0:
            raise ConfigInvalid("record_stride must be a non-negative integer")
        if self.local_time_epsilon is not None and not self.local_time_epsilon > 0:
            raise ConfigInvalid("local_time_epsilon must be positive")
        if int(self.n_workers) != self.n_workers or self.n_workers < 1:
            raise ConfigInvalid("n_workers must be a positive integer")
        steps = round(self.horizon / self.dt)
        if steps < 1 or abs(steps * self.dt - self.horizon) > 1e-9 * max(1.0, abs(self.horizon)):
            raise ConfigInvalid("horizon must be an integer multiple of dt")

    @property
    def n_steps(self) -> int:
        return int(round(self.horizon / self.dt))

    @property
    def horizon_effective(self) -> float:
        """n_steps * dt; used to normalize every per-time statistic."""
        return self.n_steps * self.dt

    @property
    def stride(self) -> int:
        if self.record_stride > 0:
            return int(self.record_stride)
        return max(1, self.n_steps // 512)


# ---------------------------------------------------------------------------
# Tracked strategies


@dataclass(frozen=True)
class FixedWeights:
    """Constant name-space weights, rebalanced every step."""

    weights: np.ndarray


@dataclass(frozen=True)
class TrackMarket:
    """The market portfolio (buy and hold the whole universe)."""


@dataclass(frozen=True)
class EntropyWeighted:
    """Weights proportional to mu_i (c - ln mu_i), recomputed every step."""

    c: float = 0.0


@dataclass(frozen=True)
class DiversityWeighted:
    """Weights proportional to mu_i^p, recomputed every step."""

    p: float = 0.5


@dataclass(frozen=True)
class RankWeights:
    """Rank-space weights, reassigned to names by current rank every step."""

    weights: np.ndarray


_Strategy = FixedWeights | TrackMarket | EntropyWeighted | DiversityWeighted | RankWeights


def _coerce_strategy(item) -> _Strategy:
    if isinstance(item, Portfolio):
        return FixedWeights(np.asarray(item.weights, dtype=float))
    if isinstance(item, RankPortfolio):
        return RankWeights(np.asarray(item.weights, dtype=float))
    if isinstance(item, (FixedWeights, TrackMarket, EntropyWeighted, DiversityWeighted, RankWeights)):
        return item
    raise InvalidParams(f"cannot track {type(item).__name__} as a portfolio")


def _strategy_tables(strategies: Sequence[_Strategy], n: int, allowed: set[int]):
    """Encode strategies into the (kinds, params, weights, labels) kernel tables."""
    n_strat = len(strategies)
    kinds = np.zeros(n_strat, dtype=np.int64)
    params = np.zeros(n_strat, dtype=float)
    weights = np.zeros((n_strat, n), dtype=float)
    labels: list[str] = []
    counters = {"portfolio": 0, "rank": 0, "entropy": 0, "diversity": 0, "market": 0}

    for s, st in enumerate(strategies):
        if isinstance(st, TrackMarket):
            kinds[s] = KIND_MARKET
            label = "market" if counters["market"] == 0 else f"market_{counters['market']}"
            counters["market"] += 1
        elif isinstance(st, FixedWeights):
            kinds[s] = KIND_FIXED
            w = np.asarray(st.weights, dtype=float)
            if w.shape != (n,):
                raise DimensionMismatch("fixed portfolio weights do not match the universe")
            weights[s] = w
            label = f"portfolio_{counters['portfolio']}"
            counters["portfolio"] += 1
        elif isinstance(st, RankWeights):
            kinds[s] = KIND_RANK
            w = np.asarray(st.weights, dtype=float)
            if w.shape != (n,):
                raise DimensionMismatch("rank portfolio weights do not match the universe")
            weights[s] = w
            label = f"rank_{counters['rank']}"
            counters["rank"] += 1
        elif isinstance(st, EntropyWeighted):
            kinds[s] = KIND_ENTROPY
            params[s] = float(st.c)
            label = f"entropy_{counters['entropy']}"
            counters["entropy"] += 1
        elif isinstance(st, DiversityWeighted):
            kinds[s] = KIND_DIVERSITY
            if not 0.0 <= st.p <= 1.0:
                raise InvalidParams("diversity exponent must lie in [0, 1]")
            params[s] = float(st.p)
            label = f"diversity_{counters['diversity']}"
            counters["diversity"] += 1
        else:  # pragma: no cover - guarded by _coerce_strategy
            raise InvalidParams(f"unsupported strategy {st!r}")
        if int(kinds[s]) not in allowed:
            raise InvalidParams(f"strategy {label} is not supported by this model")
        labels.append(label)
    return kinds, params, weights, labels


# ---------------------------------------------------------------------------
# Run report


@dataclass(frozen=True)
class FgpDecomposition:
    """Split of the relative log performance into d ln F and d Theta.

    ``residual`` is the recomputed identity gap |relperf - (dlnF + dTheta)|;
    it is zero by construction, the scientific content is the convergence of
    dTheta / horizon to its closed-form limit.
    """

    dlnf: Estimate
    dtheta: Estimate
    residual: float


@dataclass(frozen=True)
class RunReport:
    """Path ensemble statistics with full seed provenance.

    Per-path arrays are indexed by path, then snapshot/strategy.  The
    aggregate dictionaries are keyed by strategy label; the market portfolio,
    when tracked, is always strategy 0 with label "market".
    """

    model: str
    backend: str
    dt: float
    n_steps: int
    horizon: float
    n_paths: int
    seed: int
    labels: tuple[str, ...]
    final_log_value: np.ndarray
    qv_sum: np.ndarray
    cov_sum: np.ndarray
    snapshot_times: np.ndarray
    snapshot_log_value: np.ndarray
    realized_growth: dict[str, Estimate]
    realized_variance: dict[str, Estimate]
    realized_covariance: np.ndarray
    realized_covariance_stderr: np.ndarray
    relative_growth: dict[str, Estimate] | None = None
    relative_log_performance: dict[str, np.ndarray] | None = None
    # volatility-stabilized runs
    floor_count: int | None = None
    floor_rate: float | None = None
    # rank-based runs
    gap_eps: np.ndarray | None = None
    lt_sum: np.ndarray | None = None
    gap_sq_sum: np.ndarray | None = None
    ranked_mu_mean: np.ndarray | None = None
    ranked_log_mu_initial: np.ndarray | None = None
    ranked_log_mu_final: np.ndarray | None = None
    snapshot_ranked_log_mu: np.ndarray | None = None
    local_time_rates: tuple[Estimate, ...] | None = None
    rank_weight_table: dict[str, np.ndarray] | None = None
    fgp: dict[str, FgpDecomposition] | None = None

    @property
    def n(self) -> int:
        return self.cov_sum.shape[1]


@dataclass(frozen=True)
class RealizedStats:
    """Aggregated view: growth and variance per portfolio, covariance matrix."""

    growth: dict[str, Estimate]
    variance: dict[str, Estimate]
    covariance: np.ndarray
    covariance_stderr: np.ndarray
    relative_growth: dict[str, Estimate] | None


def realized_stats(run: RunReport) -> RealizedStats:
    """Realized growth, variance, and covariance estimates of a run."""
    return RealizedStats(
        growth=run.realized_growth,
        variance=run.realized_variance,
        covariance=run.realized_covariance,
        covariance_stderr=run.realized_covariance_stderr,
        relative_growth=run.relative_growth,
    )


def estimate_local_times(run: RunReport, gap: int) -> Estimate:
    """Across-path local-time rate estimate for one rank gap (1-based index).

    The per-path estimate is the occupation-kernel sum divided by
    2 * epsilon * horizon.
    """
    if run.lt_sum is None or run.gap_eps is None:
        raise MissingGapRecord("run does not carry rank-gap records")
    n_gaps = run.lt_sum.shape[1]
    if not 1 <= gap <= n_gaps:
        raise MissingGapRecord(f"gap index must be in 1..{n_gaps}")
    rates = run.lt_sum[:, gap - 1] / (2.0 * run.gap_eps[gap - 1] * run.horizon)
    return _estimate(rates)


def fgp_decomposition(run: RunReport, p: RankPortfolio) -> FgpDecomposition:
    """Decomposition of a tracked rank portfolio's relative log performance."""
    if run.fgp is None or run.rank_weight_table is None:
        raise MissingSnapshots("run does not track rank portfolios")
    for label, weights in run.rank_weight_table.items():
        if np.array_equal(weights, p.weights):
            return run.fgp[label]
    raise MissingSnapshots("portfolio is not tracked in this run")


# ---------------------------------------------------------------------------
# Path scheduling


def _path_rng(seed: int, idx: int) -> np.random.Generator:
    key = np.array([seed, idx], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def _run_paths(cfg: SimConfig, path_fn) -> None:
    if cfg.n_workers == 1:
        for idx in range(cfg.n_paths):
            path_fn(idx)
    else:
        with ThreadPoolExecutor(max_workers=cfg.n_workers) as pool:
            # list() re-raises worker exceptions in order
            list(pool.map(path_fn, range(cfg.n_paths)))


def _aggregate_common(labels, flv, qv, cov, horizon):
    growth = {lab: _estimate(flv[:, s] / horizon) for s, lab in enumerate(labels)}
    variance = {lab: _estimate(qv[:, s] / horizon) for s, lab in enumerate(labels)}
    cov_per_path = cov / horizon
    cov_mean = np.mean(cov_per_path, axis=0)
    if cov.shape[0] > 1:
        cov_se = np.std(cov_per_path, axis=0, ddof=1) / math.sqrt(cov.shape[0])
    else:
        cov_se = np.full_like(cov_mean, np.nan)
    return growth, variance, cov_mean, cov_se


def _relative_aggregates(labels, flv, snap_lnv, horizon):
    rel_growth = {}
    rel_series = {}
    for s, lab in enumerate(labels):
        if s == 0:
            continue
        rel_growth[lab] = _estimate((flv[:, s] - flv[:, 0]) / horizon)
        rel_series[lab] = snap_lnv[:, :, s] - snap_lnv[:, :, 0]
    return rel_growth, rel_series


# ---------------------------------------------------------------------------
# Drivers


def simulate_fixed(
    params: MarketParams, portfolios: Sequence, cfg: SimConfig
) -> RunReport:
    """Simulate the constant-parameter market with exact Gaussian increments.

    Increments of log capitalization are Gaussian with mean growth*dt and
    covariance sigma*dt, so the scheme is exact for the stocks; tracked
    portfolios rebalance to their fixed weights every step.
    """
    n = params.n
    if n > MAX_UNIVERSE:
        raise ConfigInvalid(f"universe size {n} exceeds the kernel limit {MAX_UNIVERSE}")
    strategies = [_coerce_strategy(p) for p in portfolios]
    for st in strategies:
        if not isinstance(st, FixedWeights):
            raise InvalidParams("simulate_fixed tracks fixed-weight portfolios only")
    kinds, sparams, weights, labels = _strategy_tables(strategies, n, {KIND_FIXED})
    n_strat = len(labels)

    n_steps = cfg.n_steps
    stride = cfg.stride
    n_snap = n_steps // stride + 1
    horizon = cfg.horizon_effective
    drift = params.log_growth() * cfg.dt
    chol_dt = np.ascontiguousarray(params.cholesky * math.sqrt(cfg.dt))

    flv = np.zeros((cfg.n_paths, n_strat))
    qv = np.zeros((cfg.n_paths, n_strat))
    cov = np.zeros((cfg.n_paths, n, n))
    snap_lnv = np.zeros((cfg.n_paths, n_snap, n_strat))

    def path_fn(idx: int) -> None:
        rng = _path_rng(cfg.seed, idx)
        lnv_p = flv[idx]
        qv_p = qv[idx]
        cov_p = cov[idx]
        snap_p = snap_lnv[idx]
        step0 = 0
        while step0 < n_steps:
            m = min(CHUNK_STEPS, n_steps - step0)
            z = rng.standard_normal((m, n))
            kernels.fixed_chunk(z, drift, chol_dt, weights, lnv_p, qv_p,
                                cov_p, stride, step0, snap_p)
            step0 += m

    _run_paths(cfg, path_fn)

    growth, variance, cov_mean, cov_se = _aggregate_common(labels, flv, qv, cov, horizon)
    return RunReport(
        model="fixed",
        backend=BACKEND,
        dt=cfg.dt,
        n_steps=n_steps,
        horizon=horizon,
        n_paths=cfg.n_paths,
        seed=cfg.seed,
        labels=tuple(labels),
        final_log_value=flv,
        qv_sum=qv,
        cov_sum=cov,
        snapshot_times=np.arange(n_snap) * (stride * cfg.dt),
        snapshot_log_value=snap_lnv,
        realized_growth=growth,
        realized_variance=variance,
        realized_covariance=cov_mean,
        realized_covariance_stderr=cov_se,
    )


def simulate_vsm(
    mu0: MarketWeights, portfolios: Sequence, cfg: SimConfig
) -> RunReport:
    """Simulate the volatility-stabilized market from initial weights mu0.

    The market portfolio is always tracked as strategy 0.  Weights below the
    1e-10 floor are clamped inside the volatility evaluation and counted; a
    trigger rate above 0.1% of step-stock slots raises a warning, above 1%
    the run is rejected as collapsed.
    """
    n = mu0.n
    if n > MAX_UNIVERSE:
        raise ConfigInvalid(f"universe size {n} exceeds the kernel limit {MAX_UNIVERSE}")
    strategies: list[_Strategy] = [TrackMarket()]
    strategies += [_coerce_strategy(p) for p in portfolios]
    kinds, sparams, weights, labels = _strategy_tables(
        strategies, n, {KIND_FIXED, KIND_MARKET, KIND_ENTROPY, KIND_DIVERSITY}
    )
    n_strat = len(labels)

    n_steps = cfg.n_steps
    stride = cfg.stride
    n_snap = n_steps // stride + 1
    horizon = cfg.horizon_effective
    sqrt_dt = math.sqrt(cfg.dt)

    flv = np.zeros((cfg.n_paths, n_strat))
    qv = np.zeros((cfg.n_paths, n_strat))
    cov = np.zeros((cfg.n_paths, n, n))
    snap_lnv = np.zeros((cfg.n_paths, n_snap, n_strat))
    counters = np.zeros(cfg.n_paths, dtype=np.int64)
    mu_final = np.zeros((cfg.n_paths, n))

    def path_fn(idx: int) -> None:
        rng = _path_rng(cfg.seed, idx)
        mu = np.array(mu0.mu, dtype=float)
        cnt = counters[idx : idx + 1]
        step0 = 0
        while step0 < n_steps:
            m = min(CHUNK_STEPS, n_steps - step0)
            z = rng.standard_normal((m, n))
            kernels.vsm_chunk(z, sqrt_dt, WEIGHT_FLOOR, mu, kinds, sparams,
                              weights, flv[idx], qv[idx], cov[idx], cnt,
                              stride, step0, snap_lnv[idx])
            step0 += m
        if not np.all(np.isfinite(mu)):
            raise WeightCollapse(f"market weights degenerated on path {idx}")
        mu_final[idx] = mu

    _run_paths(cfg, path_fn)

    total_triggers = int(np.sum(counters))
    floor_rate = total_triggers / (cfg.n_paths * n_steps * n)
    if floor_rate > FLOOR_FAIL_RATE:
        raise WeightCollapse(
            f"weight floor triggered on {floor_rate:.2%} of step-stock slots"
        )
    if floor_rate > FLOOR_WARN_RATE:
        warnings.warn(
            f"weight floor triggered on {floor_rate:.4%} of step-stock slots; "
            "decrease dt",
            WeightFloorWarning,
            stacklevel=2,
        )

    growth, variance, cov_mean, cov_se = _aggregate_common(labels, flv, qv, cov, horizon)
    rel_growth, rel_series = _relative_aggregates(labels, flv, snap_lnv, horizon)
    return RunReport(
        model="vsm",
        backend=BACKEND,
        dt=cfg.dt,
        n_steps=n_steps,
        horizon=horizon,
        n_paths=cfg.n_paths,
        seed=cfg.seed,
        labels=tuple(labels),
        final_log_value=flv,
        qv_sum=qv,
        cov_sum=cov,
        snapshot_times=np.arange(n_snap) * (stride * cfg.dt),
        snapshot_log_value=snap_lnv,
        realized_growth=growth,
        realized_variance=variance,
        realized_covariance=cov_mean,
        realized_covariance_stderr=cov_se,
        relative_growth=rel_growth,
        relative_log_performance=rel_series,
        floor_count=total_triggers,
        floor_rate=floor_rate,
    )


def _stationary_gap_rates(spec: AtlasSpec) -> np.ndarray:
    """Exponential rates of the stationary adjacent-rank gaps.

    Exact for equal rank variances (the gap law is a product of
    exponentials); used as an approximation otherwise.  Rate_i equals twice
    the local-time rate over the gap quadratic variation.
    """
    lam = local_time_rates(spec.g).rates
    cov = spec.rank_cov
    gap_var = np.array(
        [cov[i, i] + cov[i + 1, i + 1] - 2.0 * cov[i, i + 1] for i in range(spec.n - 1)]
    )
    return 2.0 * lam / gap_var


def _ranked_state(mu: np.ndarray):
    """Initial (order, rank_of, gaps) consistent with the kernel tie rule."""
    n = mu.shape[0]
    order = sorted(range(n), key=lambda i: (-mu[i], i))
    rank_of = [0] * n
    for k, name in enumerate(order):
        rank_of[name] = k
    gaps = [math.log(float(mu[order[a]]) / float(mu[order[a + 1]])) for a in range(n - 1)]
    return (
        np.array(order, dtype=np.int64),
        np.array(rank_of, dtype=np.int64),
        np.array(gaps, dtype=float),
    )


def simulate_atlas(
    spec: AtlasSpec | SimpleAtlasSpec,
    rank_portfolios: Sequence,
    cfg: SimConfig,
    *,
    initial="stationary",
    extra_strategies: Sequence = (),
) -> RunReport:
    """Simulate a stable rank-based market.

    Names are re-ranked every step (descending weight, ties by ascending
    index) and rank portfolios are reassigned to names accordingly.  The
    report carries the relative log performance of every tracked portfolio
    against the market, occupation-kernel local-time sums per rank gap, and
    the generating-functional decomposition of each rank portfolio.

    ``initial`` selects the starting weights: "stationary" (default) draws
    the rank gaps from their exponential stationary law per path, "equal"
    starts from equal weights, and an explicit weight vector is used as-is
    for every path.
    """
    if isinstance(spec, SimpleAtlasSpec):
        spec = simple_atlas_params(spec)
    n = spec.n
    if n > MAX_UNIVERSE:
        raise ConfigInvalid(f"universe size {n} exceeds the kernel limit {MAX_UNIVERSE}")

    strategies: list[_Strategy] = [TrackMarket()]
    rank_list = [_coerce_strategy(p) for p in rank_portfolios]
    for st in rank_list:
        if not isinstance(st, RankWeights):
            raise InvalidParams("simulate_atlas expects rank portfolios")
    strategies += rank_list
    strategies += [_coerce_strategy(s) for s in extra_strategies]
    kinds, sparams, weights, labels = _strategy_tables(
        strategies, n, {KIND_FIXED, KIND_MARKET, KIND_ENTROPY, KIND_DIVERSITY, KIND_RANK}
    )
    n_strat = len(labels)

    xi = spec.loadings
    if xi is None:
        xi = spec.market_params().cholesky
    d_noise = xi.shape[1]
    if d_noise > MAX_UNIVERSE:
        raise ConfigInvalid(f"noise dimension {d_noise} exceeds the kernel limit")
    xi_dt = np.ascontiguousarray(xi * math.sqrt(cfg.dt))
    gdt = spec.g * cfg.dt

    gap_var = np.array(
        [spec.rank_cov[i, i] + spec.rank_cov[i + 1, i + 1] - 2.0 * spec.rank_cov[i, i + 1]
         for i in range(n - 1)]
    )
    if cfg.local_time_epsilon is not None:
        eps = np.full(n - 1, float(cfg.local_time_epsilon))
    else:
        eps = LOCAL_TIME_EPS_MULT * np.sqrt(gap_var * cfg.dt)

    n_steps = cfg.n_steps
    stride = cfg.stride
    n_snap = n_steps // stride + 1
    horizon = cfg.horizon_effective

    stationary = False
    if isinstance(initial, str):
        if initial == "stationary":
            stationary = True
            kappa = _stationary_gap_rates(spec)
        elif initial == "equal":
            mu_start = np.full(n, 1.0 / n)
        else:
            raise ConfigInvalid(f"unknown initial condition {initial!r}")
    else:
        mu_start = np.asarray(initial, dtype=float)
        if mu_start.shape != (n,):
            raise ConfigInvalid("initial weights do not match the universe size")
        if np.any(mu_start <= 0) or abs(float(np.sum(mu_start)) - 1.0) > 1e-9:
            raise ConfigInvalid("initial weights must be positive and sum to one")

    flv = np.zeros((cfg.n_paths, n_strat))
    qv = np.zeros((cfg.n_paths, n_strat))
    cov = np.zeros((cfg.n_paths, n, n))
    snap_lnv = np.zeros((cfg.n_paths, n_snap, n_strat))
    snap_rlnmu = np.zeros((cfg.n_paths, n_snap, n))
    lt_sum = np.zeros((cfg.n_paths, n - 1))
    dg2_sum = np.zeros((cfg.n_paths, n - 1))
    rankmu = np.zeros((cfg.n_paths, n))
    rln_init = np.zeros((cfg.n_paths, n))
    rln_final = np.zeros((cfg.n_paths, n))

    def path_fn(idx: int) -> None:
        rng = _path_rng(cfg.seed, idx)
        if stationary:
            # ranked log levels from exponential gaps, then normalize
            g_draw = rng.standard_exponential(n - 1) / kappa
            levels = np.concatenate([[0.0], -np.cumsum(g_draw)])
            w = np.exp(levels)
            mu = w / np.sum(w)
        else:
            mu = np.array(mu_start, dtype=float)
        order, rank_of, gaps = _ranked_state(mu)
        for a in range(n):
            val = math.log(float(mu[order[a]]))
            snap_rlnmu[idx, 0, a] = val
            rln_init[idx, a] = val
        step0 = 0
        while step0 < n_steps:
            m = min(CHUNK_STEPS, n_steps - step0)
            z = rng.standard_normal((m, d_noise))
            kernels.atlas_chunk(z, gdt, xi_dt, mu, order, rank_of, gaps,
                                kinds, sparams, weights, eps, flv[idx],
                                qv[idx], lt_sum[idx], dg2_sum[idx],
                                rankmu[idx], cov[idx], stride, step0,
                                snap_lnv[idx], snap_rlnmu[idx])
            step0 += m
        if not np.all(np.isfinite(mu)):
            raise WeightCollapse(f"market weights degenerated on path {idx}")
        for a in range(n):
            rln_final[idx, a] = math.log(float(mu[order[a]]))

    _run_paths(cfg, path_fn)

    growth, variance, cov_mean, cov_se = _aggregate_common(labels, flv, qv, cov, horizon)
    rel_growth, rel_series = _relative_aggregates(labels, flv, snap_lnv, horizon)

    lt_estimates = tuple(
        _estimate(lt_sum[:, i] / (2.0 * eps[i] * horizon)) for i in range(n - 1)
    )

    rank_table: dict[str, np.ndarray] = {}
    fgp: dict[str, FgpDecomposition] = {}
    for s, lab in enumerate(labels):
        if kinds[s] != KIND_RANK:
            continue
        w = weights[s].copy()
        rank_table[lab] = w
        dlnf_paths = (rln_final - rln_init) @ w
        relperf_paths = flv[:, s] - flv[:, 0]
        dtheta_paths = relperf_paths - dlnf_paths
        residual = float(np.max(np.abs(relperf_paths - (dlnf_paths + dtheta_paths))))
        fgp[lab] = FgpDecomposition(
            dlnf=_estimate(dlnf_paths / horizon),
            dtheta=_estimate(dtheta_paths / horizon),
            residual=residual,
        )

    return RunReport(
        model="atlas",
        backend=BACKEND,
        dt=cfg.dt,
        n_steps=n_steps,
        horizon=horizon,
        n_paths=cfg.n_paths,
        seed=cfg.seed,
        labels=tuple(labels),
        final_log_value=flv,
        qv_sum=qv,
        cov_sum=cov,
        snapshot_times=np.arange(n_snap) * (stride * cfg.dt),
        snapshot_log_value=snap_lnv,
        realized_growth=growth,
        realized_variance=variance,
        realized_covariance=cov_mean,
        realized_covariance_stderr=cov_se,
        relative_growth=rel_growth,
        relative_log_performance=rel_series,
        gap_eps=eps,
        lt_sum=lt_sum,
        gap_sq_sum=dg2_sum,
        ranked_mu_mean=rankmu / n_steps,
        ranked_log_mu_initial=rln_init,
        ranked_log_mu_final=rln_final,
        snapshot_ranked_log_mu=snap_rlnmu,
        local_time_rates=lt_estimates,
        rank_weight_table=rank_table,
        fgp=fgp,
    )
