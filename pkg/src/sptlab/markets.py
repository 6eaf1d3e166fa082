"""Closed-form specializations: volatility-stabilized markets and the simple
Atlas model.

In a volatility-stabilized market each stock's log return is driftless with
volatility 1/sqrt(mu_i), mu being the market weights, so the covariance is
diag(1/mu) and the arithmetic returns are 1/(2 mu).  The simple Atlas model
attaches drift -g to every rank except the bottom one, which gets (n-1)g,
with a common volatility sigma.

The closed forms here are deliberately independent of the generic frontier
solver; agreement between the two routes is part of the verification suite.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import frontier
from .errors import (
    InvalidOffset,
    InvalidParams,
    NonPositiveWeight,
    WrongDimension,
)
from .frontier import BaseStats, FrontierPoint, MarketParams, Portfolio
from .ranks import AtlasSpec, RankPortfolio

__all__ = [
    "MarketWeights",
    "SimpleAtlasSpec",
    "VsmExtremals",
    "EntropyPortfolio",
    "SimpleAtlasExtremals",
    "DiversityPortfolio",
    "vsm_params",
    "vsm_extremals",
    "d_minus_one",
    "entropy_weighted_portfolio",
    "vsm_n3_frontier",
    "simple_atlas_params",
    "simple_atlas_extremals",
    "diversity_weighted_portfolio",
]

_readonly = frontier._readonly


@dataclass(frozen=True)
class MarketWeights:
    """Strictly positive market weights summing to one."""

    mu: np.ndarray

    def __post_init__(self):
        mu = np.asarray(self.mu, dtype=float)
        if mu.ndim != 1 or mu.shape[0] < 2:
            raise InvalidParams("need at least two market weights")
        if not np.all(np.isfinite(mu)) or np.any(mu <= 0.0):
            raise NonPositiveWeight("market weights must be strictly positive")
        if abs(float(np.sum(mu)) - 1.0) > 1e-12:
            raise InvalidParams(
                f"market weights sum to {float(np.sum(mu))!r}, expected 1 within 1e-12"
            )
        object.__setattr__(self, "mu", _readonly(mu))

    @property
    def n(self) -> int:
        return self.mu.shape[0]


@dataclass(frozen=True)
class SimpleAtlasSpec:
    """Simple Atlas model: common volatility, drift -g except (n-1)g at the bottom."""

    n: int
    g: float
    sigma: float

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise InvalidParams("n must be an integer >= 2")
        if not self.g > 0.0:
            raise InvalidParams("g must be positive")
        if not self.sigma > 0.0:
            raise InvalidParams("sigma must be positive")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "g", float(self.g))
        object.__setattr__(self, "sigma", float(self.sigma))

    @property
    def lam(self) -> float:
        """Drift-to-variance ratio g / sigma^2."""
        return self.g / (self.sigma * self.sigma)


def vsm_params(mu: MarketWeights) -> MarketParams:
    """Fixed-universe view of the volatility-stabilized market at weights mu.

    Covariance diag(1/mu), arithmetic returns 1/(2 mu), zero log growth.
    """
    m = mu.mu
    return MarketParams(
        sigma=np.diag(1.0 / m),
        alpha=0.5 / m,
        growth=np.zeros(mu.n),
        loadings=np.diag(1.0 / np.sqrt(m)),
    )


def d_minus_one(mu: MarketWeights) -> float:
    """Diversity measure of order minus one: 1 / sum(1/mu_i).

    Maximal at the equal-weighted market where it equals 1/n^2.
    """
    return float(1.0 / np.sum(1.0 / mu.mu))


@dataclass(frozen=True)
class VsmExtremals:
    """Closed-form frontier endpoints of the volatility-stabilized market."""

    nu0: Portfolio
    nu1: Portfolio
    stats: BaseStats
    gamma0: float
    gamma1: float


def vsm_extremals(mu: MarketWeights) -> VsmExtremals:
    """Extremal portfolios of the volatility-stabilized market in closed form.

    The minimum-volatility portfolio is the market itself with unit
    volatility and growth (n-1)/2; the maximum-growth portfolio is
    e/2 + (1 - n/2) mu.
    """
    m = mu.mu
    n = mu.n
    dinv = float(np.sum(1.0 / m))  # 1 / D_{-1}
    nu0 = Portfolio(m.copy())
    nu1 = Portfolio(0.5 + (1.0 - 0.5 * n) * m)
    stats = BaseStats(
        min_volatility=1.0,
        min_vol_return=0.5 * n,
        max_growth_volatility=0.5 * np.sqrt(dinv + 4.0 - n * n),
    )
    return VsmExtremals(
        nu0=nu0,
        nu1=nu1,
        stats=stats,
        gamma0=0.5 * (n - 1.0),
        gamma1=(4.0 * n + dinv - n * n - 4.0) / 8.0,
    )


@dataclass(frozen=True)
class EntropyPortfolio:
    """Entropy-weighted portfolio with its variance and growth rate."""

    weights: Portfolio
    variance: float
    growth: float
    offset: float


def entropy_weighted_portfolio(mu: MarketWeights, c: float = 0.0) -> EntropyPortfolio:
    """Portfolio with weights proportional to mu_i (c - ln mu_i).

    Requires c > ln(mu_i) for every stock so the weights stay positive; the
    default c = 0 always qualifies for interior market weights.  Variance and
    growth are evaluated in closed form under the volatility-stabilized
    covariance diag(1/mu).
    """
    m = mu.mu
    lnm = np.log(m)
    if np.any(c - lnm <= 0.0):
        raise InvalidOffset("need c - ln(mu_i) > 0 for every weight")
    z = c - float(m @ lnm)
    weights = m * (c - lnm) / z
    variance = (float(m @ lnm**2) + 2.0 * c * z - c * c) / (z * z)
    growth = (mu.n * c - float(np.sum(lnm))) / (2.0 * z) - variance / 2.0
    return EntropyPortfolio(
        weights=Portfolio(weights),
        variance=float(variance),
        growth=float(growth),
        offset=float(c),
    )


def vsm_n3_frontier(mu: MarketWeights, p_grid) -> list[FrontierPoint]:
    """Efficient frontier of a three-stock volatility-stabilized market.

    Realized by long-only portfolios for every valid weight vector; the curve
    starts at (1, 1) and degenerates to that single point at equal weights.
    """
    if mu.n != 3:
        raise WrongDimension(f"expected 3 market weights, got {mu.n}")
    return frontier.frontier_curve(vsm_params(mu), p_grid)


def simple_atlas_params(spec: SimpleAtlasSpec) -> AtlasSpec:
    """Rank growth vector (-g, ..., -g, (n-1)g) and covariance sigma^2 I."""
    g_vec = np.full(spec.n, -spec.g)
    g_vec[-1] = (spec.n - 1) * spec.g
    return AtlasSpec(g=g_vec, rank_cov=spec.sigma**2 * np.eye(spec.n))


@dataclass(frozen=True)
class SimpleAtlasExtremals:
    """Closed-form extremal rank portfolios of the simple Atlas model.

    ``all_long`` reports whether both portfolios stay long in every market
    configuration, which holds exactly when g <= sigma^2 / n.
    """

    nu0: RankPortfolio
    nu1: RankPortfolio
    stats: BaseStats
    gamma0: float
    gamma1: float
    all_long: bool


def simple_atlas_extremals(spec: SimpleAtlasSpec) -> SimpleAtlasExtremals:
    """Extremal portfolios in rank coordinates, in closed form.

    nu0 is the equal-weighted portfolio; nu1 tilts weight lam * n onto the
    bottom rank, reaching the pure bottom-stock portfolio at lam = 1/n.
    """
    n = spec.n
    sig2 = spec.sigma * spec.sigma
    lam = spec.lam
    nu1 = np.full(n, 1.0 / n - lam)
    nu1[-1] += lam * n
    s = spec.sigma / np.sqrt(n)
    big_s = s * np.sqrt(1.0 + n * n * (n - 1.0) * lam * lam)
    return SimpleAtlasExtremals(
        nu0=RankPortfolio(np.full(n, 1.0 / n)),
        nu1=RankPortfolio(nu1),
        stats=BaseStats(
            min_volatility=float(s),
            min_vol_return=0.5 * sig2,
            max_growth_volatility=float(big_s),
        ),
        gamma0=0.5 * sig2 * (1.0 - 1.0 / n),
        gamma1=0.5 * sig2 * (1.0 - 1.0 / n + n * (n - 1.0) * lam * lam),
        all_long=lam <= 1.0 / n,
    )


@dataclass(frozen=True)
class DiversityPortfolio:
    """Diversity-weighted portfolio with its variance and growth rate."""

    weights: Portfolio
    variance: float
    growth: float
    p: float


def diversity_weighted_portfolio(
    mu: MarketWeights, p_div: float, spec: SimpleAtlasSpec
) -> DiversityPortfolio:
    """Portfolio with weights proportional to mu_i^p inside a simple Atlas market.

    p = 1 reproduces the market portfolio and p = 0 the equal-weighted one.
    The variance is sigma^2 sum(zeta^2); the growth rate is assembled from
    first principles as the rank-weighted drift plus the excess growth under
    the rank covariance sigma^2 I.
    """
    if not 0.0 <= p_div <= 1.0:
        raise InvalidParams("p_div must lie in [0, 1]")
    if mu.n != spec.n:
        raise WrongDimension("market weights and Atlas spec have different sizes")
    m = mu.mu
    powered = m**p_div
    zeta = powered / float(np.sum(powered))
    sig2 = spec.sigma * spec.sigma
    variance = sig2 * float(zeta @ zeta)

    # Rank the weights (descending, ties by original index); mu and zeta rank
    # identically since x -> x^p is monotone.
    order = np.argsort(-m, kind="stable")
    zeta_ranked = zeta[order]
    g_rank = np.full(spec.n, -spec.g)
    g_rank[-1] = (spec.n - 1) * spec.g
    growth = float(g_rank @ zeta_ranked) + 0.5 * sig2 * (1.0 - float(zeta @ zeta))
    return DiversityPortfolio(
        weights=Portfolio(zeta),
        variance=float(variance),
        growth=float(growth),
        p=float(p_div),
    )
