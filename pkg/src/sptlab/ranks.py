"""Rank-based market machinery: Atlas stability, local times, and the
asymptotic growth of fixed-by-rank portfolios relative to the market.

Ranks are indexed from the largest market capitalization: index 0 of a rank
vector is the top stock, index n-1 the bottom (Atlas) stock.  A market whose
rank growth rates satisfy the strict stability conditions admits stationary
rank gaps, and the local time accumulated at each adjacent-rank collision
grows linearly with known rates.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import frontier
from .errors import (
    DimensionMismatch,
    InvalidParams,
    NonPositiveInput,
    NotFullyFunded,
    TooShort,
    Unstable,
)
from .frontier import BaseStats, FrontierPoint, MarketParams, rational_grid

__all__ = [
    "AtlasSpec",
    "RankPortfolio",
    "LocalTimeRates",
    "StabilityReport",
    "RankFrontier",
    "check_stability",
    "local_time_rates",
    "generating_functional",
    "rank_excess_growth",
    "asymptotic_relative_growth",
    "rank_frontier",
]

SUM_ZERO_TOL = 1e-12

_readonly = frontier._readonly


@dataclass(frozen=True)
class StabilityReport:
    """Outcome of the partial-sum stability test.

    ``violations`` lists the failing 1-based prefix lengths; the entry n
    flags a total sum away from zero.
    """

    stable: bool
    violations: tuple[int, ...]


def check_stability(g) -> StabilityReport:
    """Test the strict stability conditions on rank growth rates.

    Every proper prefix of g must sum to a strictly negative value and the
    full sum must vanish within 1e-12.  Any non-negative partial sum fails;
    there is no slack on the strict inequalities.
    """
    g = np.asarray(g, dtype=float)
    if g.ndim != 1 or g.shape[0] < 2:
        raise TooShort("rank growth vector needs at least two entries")
    cs = np.cumsum(g)
    violations = [k + 1 for k in range(g.shape[0] - 1) if cs[k] >= 0.0]
    if abs(cs[-1]) > SUM_ZERO_TOL:
        violations.append(g.shape[0])
    return StabilityReport(stable=not violations, violations=tuple(violations))


@dataclass(frozen=True)
class AtlasSpec:
    """Stable rank-based market: growth rates and covariance attached to ranks.

    Construction enforces the stability conditions and positive-definiteness
    of the rank covariance.  Optional ``loadings`` (n x d) must reproduce the
    covariance as ``xi @ xi.T``.
    """

    g: np.ndarray
    rank_cov: np.ndarray
    loadings: np.ndarray | None = None
    _params: MarketParams = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        g = np.asarray(self.g, dtype=float)
        report = check_stability(g)
        if not report.stable:
            raise Unstable(
                f"rank growth rates violate stability at prefixes {list(report.violations)}"
            )
        cov = np.asarray(self.rank_cov, dtype=float)
        if cov.shape != (g.shape[0], g.shape[0]):
            raise DimensionMismatch("rank_cov shape does not match g")
        # MarketParams does the symmetry/SPD validation and caches the
        # Cholesky factor; alpha mirrors the name-based definition.
        params = MarketParams(sigma=cov, alpha=g + 0.5 * np.diag(cov))
        if self.loadings is not None:
            ld = np.asarray(self.loadings, dtype=float)
            if ld.ndim != 2 or ld.shape[0] != g.shape[0]:
                raise DimensionMismatch("loadings must be an n x d matrix")
            if ld.shape[1] < g.shape[0]:
                raise InvalidParams("loadings need at least n factor columns")
            if np.max(np.abs(ld @ ld.T - cov)) > 1e-10:
                raise InvalidParams("loadings @ loadings.T must reproduce rank_cov")
            object.__setattr__(self, "loadings", _readonly(ld))
        object.__setattr__(self, "g", _readonly(g))
        object.__setattr__(self, "rank_cov", params.sigma)
        object.__setattr__(self, "_params", params)

    @property
    def n(self) -> int:
        return self.g.shape[0]

    def market_params(self) -> MarketParams:
        """Rank-coordinate market with alpha = g + diag(rank_cov)/2."""
        return self._params


@dataclass(frozen=True)
class RankPortfolio:
    """Weights attached to capitalization ranks, summing to one."""

    weights: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.ndim != 1 or w.shape[0] < 2:
            raise TooShort("rank portfolio needs at least two weights")
        if not np.all(np.isfinite(w)):
            raise InvalidParams("weights must be finite")
        if abs(float(np.sum(w)) - 1.0) > 1e-12:
            raise NotFullyFunded(
                f"rank weights sum to {float(np.sum(w))!r}, expected 1 within 1e-12"
            )
        object.__setattr__(self, "weights", _readonly(w))

    @property
    def n(self) -> int:
        return self.weights.shape[0]


@dataclass(frozen=True)
class LocalTimeRates:
    """Asymptotic local-time rates of the n-1 adjacent-rank gaps."""

    rates: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "rates", _readonly(np.asarray(self.rates, float)))


def local_time_rates(g) -> LocalTimeRates:
    """Long-run local-time growth rates: rate_i = -2 (g_1 + ... + g_i).

    All rates are strictly positive for a strictly stable growth vector.
    """
    g = np.asarray(g, dtype=float)
    report = check_stability(g)
    if not report.stable:
        raise Unstable(f"stability violated at prefixes {list(report.violations)}")
    return LocalTimeRates(-2.0 * np.cumsum(g)[:-1])


def generating_functional(x, p: RankPortfolio) -> float:
    """Weighted geometric mean prod x_i^{p_i} of a positive vector.

    Homogeneous of degree one since the weights sum to one; log-additive.
    """
    x = np.asarray(x, dtype=float)
    if x.shape != p.weights.shape:
        raise DimensionMismatch("argument length does not match portfolio")
    if np.any(x <= 0.0):
        raise NonPositiveInput("generating functional needs strictly positive inputs")
    return float(np.prod(x**p.weights))


def rank_excess_growth(spec: AtlasSpec, p: RankPortfolio) -> float:
    """Excess growth of a rank portfolio under the rank covariance."""
    if p.n != spec.n:
        raise DimensionMismatch("portfolio size does not match spec")
    w = p.weights
    cov = spec.rank_cov
    return float(0.5 * (np.diag(cov) @ w - w @ cov @ w))


def asymptotic_relative_growth(spec: AtlasSpec, p: RankPortfolio) -> float:
    """Almost-sure long-run rate of log(V_p / V_market): g.p + excess growth.

    Valid for stable specs; the market portfolio itself has rate zero.
    """
    if p.n != spec.n:
        raise DimensionMismatch("portfolio size does not match spec")
    return float(spec.g @ p.weights) + rank_excess_growth(spec, p)


@dataclass(frozen=True)
class RankFrontier:
    """Extremal rank portfolios and frontier curve of a stable rank market."""

    nu0: RankPortfolio
    nu1: RankPortfolio
    stats: BaseStats
    gamma0: float
    gamma1: float
    curve: tuple[FrontierPoint, ...]


def rank_frontier(spec: AtlasSpec, p_grid=None) -> RankFrontier:
    """Apply the fixed-universe frontier machinery in rank coordinates.

    The rank market uses alpha = g + diag(rank_cov)/2, so the resulting
    growth rates are relative to the market portfolio benchmark.
    """
    params = spec.market_params()
    stats = frontier.base_stats(params)
    nu0 = frontier.min_volatility_portfolio(params)
    nu1 = frontier.max_growth_portfolio(params)
    if p_grid is None:
        p_grid = rational_grid(0.0, 1.0, 101)
    curve = tuple(frontier.frontier_curve(params, p_grid))
    s2 = stats.min_volatility**2
    big_s2 = stats.max_growth_volatility**2
    return RankFrontier(
        nu0=RankPortfolio(nu0.weights),
        nu1=RankPortfolio(nu1.weights),
        stats=stats,
        gamma0=stats.min_vol_return - 0.5 * s2,
        gamma1=stats.min_vol_return + 0.5 * big_s2 - s2,
        curve=curve,
    )
