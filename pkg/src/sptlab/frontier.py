"""Closed-form portfolio analytics for a fixed-parameter equity universe.

An equity market is described by the arithmetic return vector ``alpha`` and a
symmetric positive-definite covariance ``sigma``, both per unit time.  The
growth rate of a fully funded portfolio ``w`` is ``w @ alpha - w @ sigma @ w / 2``
and its volatility is ``sqrt(w @ sigma @ w)``.  Weights may be negative.

The module exposes the two extremal portfolios (minimum volatility, maximum
growth), the one-parameter efficient frontier interpolating them, the
risk-adjusted return ratio against a fixed benchmark rate, and the sampled
sub-frontier curve for a pair of stocks.

Every covariance solve goes through a Cholesky factorization; the inverse is
never formed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.linalg import cho_solve

from .errors import (
    DegenerateCovariance,
    DimensionMismatch,
    GridOutOfRange,
    InvalidParams,
    NotFullyFunded,
    NotPositiveDefinite,
    ZeroVolatility,
)

__all__ = [
    "MarketParams",
    "BaseStats",
    "Portfolio",
    "FrontierPortfolio",
    "FrontierPoint",
    "TwoStockCurve",
    "base_stats",
    "min_volatility_portfolio",
    "max_growth_portfolio",
    "frontier_portfolio",
    "portfolio_volatility",
    "portfolio_growth",
    "excess_growth",
    "frontier_curve",
    "frontier_slopes",
    "theta_ratio",
    "two_stock_curve",
    "rational_grid",
]

FUNDING_TOL = 1e-12
SYMMETRY_RTOL = 1e-12
PIVOT_RTOL = 1e-12
CONSISTENCY_TOL = 1e-10


def _readonly(a: np.ndarray) -> np.ndarray:
    out = np.array(a, dtype=float, copy=True)
    out.setflags(write=False)
    return out


def _as_vector(x, name: str) -> np.ndarray:
    v = np.asarray(x, dtype=float)
    if v.ndim != 1:
        raise InvalidParams(f"{name} must be a one-dimensional vector")
    if not np.all(np.isfinite(v)):
        raise InvalidParams(f"{name} must be finite")
    return v


def rational_grid(lo: float, hi: float, count: int) -> np.ndarray:
    """Evenly spaced grid whose points are exact at simple rationals.

    Uses ``(lo*(m-k) + hi*k)/m`` instead of ``lo + k*step``, so that e.g. a
    grid over [-1, 2] with millesimal resolution contains 0.0 and 1.0 exactly.
    """
    if count < 2:
        return np.array([float(lo)])
    m = count - 1
    k = np.arange(count, dtype=float)
    return (lo * (m - k) + hi * k) / m


@dataclass(frozen=True)
class MarketParams:
    """Arithmetic returns and SPD covariance for a fixed universe of stocks.

    Either ``alpha`` (arithmetic returns) or ``growth`` (log growth rates) may
    be supplied; the other is derived via ``alpha = growth + diag(sigma)/2``.
    Supplying both requires consistency within 1e-10.  Optional factor
    ``loadings`` (n x d, d >= n) must reproduce ``sigma`` as ``xi @ xi.T``.
    """

    sigma: np.ndarray
    alpha: np.ndarray | None = None
    growth: np.ndarray | None = None
    loadings: np.ndarray | None = None
    _chol: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        sigma = np.asarray(self.sigma, dtype=float)
        if sigma.ndim != 2 or sigma.shape[0] != sigma.shape[1]:
            raise InvalidParams("sigma must be a square matrix")
        n = sigma.shape[0]
        if n < 2:
            raise InvalidParams("universe needs at least two stocks")
        if not np.all(np.isfinite(sigma)):
            raise InvalidParams("sigma must be finite")
        scale = float(np.max(np.abs(sigma)))
        if scale == 0.0 or np.max(np.abs(sigma - sigma.T)) > SYMMETRY_RTOL * scale:
            raise InvalidParams("sigma must be symmetric (relative tol 1e-12)")

        try:
            chol = np.linalg.cholesky(sigma)
        except np.linalg.LinAlgError as exc:
            raise NotPositiveDefinite("sigma is not positive-definite") from exc
        # Reject near-singular matrices: smallest pivot relative to the
        # largest diagonal entry.
        pivots = np.diag(chol) ** 2
        if np.min(pivots) < PIVOT_RTOL * np.max(np.diag(sigma)):
            raise NotPositiveDefinite(
                "sigma is numerically singular (pivot below 1e-12 of largest diagonal)"
            )

        alpha = self.alpha
        growth = self.growth
        if alpha is None and growth is None:
            raise InvalidParams("either alpha or growth must be given")
        if growth is not None:
            growth = _as_vector(growth, "growth")
            if growth.shape[0] != n:
                raise DimensionMismatch("growth length does not match sigma")
        if alpha is not None:
            alpha = _as_vector(alpha, "alpha")
            if alpha.shape[0] != n:
                raise DimensionMismatch("alpha length does not match sigma")
        if alpha is None:
            alpha = growth + 0.5 * np.diag(sigma)
        elif growth is not None:
            if np.max(np.abs(alpha - (growth + 0.5 * np.diag(sigma)))) > CONSISTENCY_TOL:
                raise InvalidParams(
                    "alpha and growth are inconsistent: alpha must equal "
                    "growth + diag(sigma)/2 within 1e-10"
                )

        loadings = self.loadings
        if loadings is not None:
            loadings = np.asarray(loadings, dtype=float)
            if loadings.ndim != 2 or loadings.shape[0] != n:
                raise DimensionMismatch("loadings must be an n x d matrix")
            if loadings.shape[1] < n:
                raise InvalidParams("loadings need at least n factor columns")
            if np.max(np.abs(loadings @ loadings.T - sigma)) > 1e-10:
                raise InvalidParams("loadings @ loadings.T must reproduce sigma within 1e-10")
            object.__setattr__(self, "loadings", _readonly(loadings))

        object.__setattr__(self, "sigma", _readonly(sigma))
        object.__setattr__(self, "alpha", _readonly(alpha))
        if growth is not None:
            object.__setattr__(self, "growth", _readonly(growth))
        object.__setattr__(self, "_chol", _readonly(chol))

    @property
    def n(self) -> int:
        return self.sigma.shape[0]

    @property
    def cholesky(self) -> np.ndarray:
        """Lower-triangular Cholesky factor of sigma."""
        return self._chol

    def solve(self, b: np.ndarray) -> np.ndarray:
        """Solve sigma @ x = b through the cached Cholesky factor."""
        return cho_solve((self._chol, True), np.asarray(b, dtype=float))

    def log_growth(self) -> np.ndarray:
        """Per-stock log growth rates alpha - diag(sigma)/2."""
        if self.growth is not None:
            return self.growth
        return self.alpha - 0.5 * np.diag(self.sigma)


@dataclass(frozen=True)
class BaseStats:
    """Scalar statistics of the market: the frontier endpoints.

    min_volatility        volatility of the minimum-volatility portfolio
    min_vol_return        arithmetic return of that portfolio
    max_growth_volatility volatility of the maximum-growth portfolio
    """

    min_volatility: float
    min_vol_return: float
    max_growth_volatility: float


@dataclass(frozen=True)
class Portfolio:
    """Fully funded weight vector; negative entries are allowed."""

    weights: np.ndarray

    def __post_init__(self):
        w = _as_vector(self.weights, "weights")
        if abs(float(np.sum(w)) - 1.0) > FUNDING_TOL:
            raise NotFullyFunded(
                f"weights sum to {float(np.sum(w))!r}, expected 1 within 1e-12"
            )
        object.__setattr__(self, "weights", _readonly(w))

    @property
    def n(self) -> int:
        return self.weights.shape[0]


@dataclass(frozen=True)
class FrontierPortfolio(Portfolio):
    """Frontier member with its interpolation parameter.

    ``extrapolated`` flags parameters outside [0, 1]: the closed form is still
    valid there but the point is not part of the efficient frontier.
    """

    p: float = 0.0
    extrapolated: bool = False


@dataclass(frozen=True)
class FrontierPoint:
    """(p, volatility, growth) sample of the efficient frontier."""

    p: float
    sigma: float
    gamma: float


def _check_dims(params: MarketParams, pf: Portfolio) -> np.ndarray:
    w = pf.weights
    if w.shape[0] != params.n:
        raise DimensionMismatch(
            f"portfolio has {w.shape[0]} weights, market has {params.n} stocks"
        )
    return w


def _solves(params: MarketParams):
    """Shared solves: x = sigma^-1 e and y = sigma^-1 alpha, plus s^2 and a.

    ``a`` is evaluated as ``s^2 * sum(y)`` so that the max-growth weights
    later sum to one at machine precision.
    """
    x = params.solve(np.ones(params.n))
    y = params.solve(params.alpha)
    s2 = 1.0 / float(np.sum(x))
    a = s2 * float(np.sum(y))
    return x, y, s2, a


def base_stats(params: MarketParams) -> BaseStats:
    """Frontier endpoint statistics (s, a, S) of the market.

    s = 1/sqrt(e' sigma^-1 e), a = s^2 e' sigma^-1 alpha and
    S = sqrt(alpha' sigma^-1 alpha - a^2/s^2 + s^2).  Cauchy-Schwarz
    guarantees the square-root argument is at least s^2, hence S >= s.
    """
    x, y, s2, a = _solves(params)
    big_s2 = float(params.alpha @ y) - a * a / s2 + s2
    return BaseStats(
        min_volatility=float(np.sqrt(s2)),
        min_vol_return=a,
        max_growth_volatility=float(np.sqrt(big_s2)),
    )


def min_volatility_portfolio(params: MarketParams) -> Portfolio:
    """Unique fully funded portfolio of minimal variance: s^2 sigma^-1 e.

    Its volatility equals s and its growth rate equals a - s^2/2.
    """
    x, _, s2, _ = _solves(params)
    return Portfolio(s2 * x)


def max_growth_portfolio(params: MarketParams) -> Portfolio:
    """Unique portfolio of maximal growth: sigma^-1 (alpha + (s^2 - a) e).

    Its volatility equals S and its growth rate equals a + S^2/2 - s^2.
    """
    x, y, s2, a = _solves(params)
    return Portfolio(y + (s2 - a) * x)


def frontier_portfolio(params: MarketParams, p: float) -> FrontierPortfolio:
    """Frontier member sigma^-1 (p alpha + (s^2 - a p) e).

    Coincides with ``(1-p) nu0 + p nu1``; ``p`` outside [0, 1] is computed as
    well but flagged as extrapolated.
    """
    x, y, s2, a = _solves(params)
    p = float(p)
    w = p * y + (s2 - a * p) * x
    return FrontierPortfolio(w, p=p, extrapolated=not 0.0 <= p <= 1.0)


def portfolio_volatility(params: MarketParams, pf: Portfolio) -> float:
    """sqrt(w' sigma w); bounded below by s with equality only at nu0."""
    w = _check_dims(params, pf)
    return float(np.sqrt(w @ params.sigma @ w))


def portfolio_growth(params: MarketParams, pf: Portfolio) -> float:
    """Growth rate w' alpha - w' sigma w / 2 (arithmetic return less half variance)."""
    w = _check_dims(params, pf)
    return float(w @ params.alpha - 0.5 * (w @ params.sigma @ w))


def excess_growth(params: MarketParams, pf: Portfolio) -> float:
    """Diversification bonus: half the weighted stock variances minus portfolio variance."""
    w = _check_dims(params, pf)
    return float(0.5 * (np.diag(params.sigma) @ w - w @ params.sigma @ w))


def _frontier_point(p: float, s2: float, a: float, big_s2: float) -> FrontierPoint:
    sig = float(np.sqrt((1.0 - p * p) * s2 + p * p * big_s2))
    gam = a + (p - p * p / 2.0) * big_s2 - (p + (1.0 - p * p) / 2.0) * s2
    return FrontierPoint(p=p, sigma=sig, gamma=float(gam))


def frontier_curve(params: MarketParams, p_grid: Sequence[float]) -> list[FrontierPoint]:
    """Sample the efficient frontier on a grid of parameters in [0, 1].

    Both volatility and growth are non-decreasing in p along the curve.
    """
    x, y, s2, a = _solves(params)
    big_s2 = float(params.alpha @ y) - a * a / s2 + s2
    pts = []
    for p in np.asarray(p_grid, dtype=float):
        if not 0.0 <= p <= 1.0:
            raise GridOutOfRange(f"frontier grid value {p!r} outside [0, 1]")
        pts.append(_frontier_point(float(p), s2, a, big_s2))
    return pts


def frontier_slopes(params: MarketParams, p: float) -> tuple[float, float]:
    """Derivatives (d sigma/dp, d gamma/dp) along the frontier at p in [0, 1].

    The first component vanishes at p=0 and the second at p=1, which gives the
    frontier an infinite slope at the minimum-volatility end and a flat slope
    at the maximum-growth end whenever S > s.
    """
    stats = base_stats(params)
    s2 = stats.min_volatility**2
    big_s2 = stats.max_growth_volatility**2
    p = float(p)
    diff = big_s2 - s2
    sig = float(np.sqrt((1.0 - p * p) * s2 + p * p * big_s2))
    return (p * diff / sig, (1.0 - p) * diff)


def theta_ratio(params: MarketParams, pf: Portfolio, b: float = 0.0) -> float:
    """Risk-adjusted return (growth - b) / volatility against benchmark rate b."""
    vol = portfolio_volatility(params, pf)
    if vol == 0.0:
        raise ZeroVolatility("portfolio has zero volatility")
    return (portfolio_growth(params, pf) - b) / vol


@dataclass(frozen=True)
class TwoStockCurve:
    """Sampled risk/growth curve of a two-stock portfolio plus its extrema.

    The portfolio holds weight x in stock 1 and 1-x in stock 2.  Analytic
    extrema use the denominator s11 + s22 - 2*s12 throughout.  Sampled extrema
    are grid argmax/argmin and agree with the analytic ones to grid
    resolution whenever those fall inside the x range.
    """

    x: np.ndarray
    sigma: np.ndarray
    gamma: np.ndarray
    growth_max_x: float
    growth_max: float
    variance_min_x: float
    variance_min: float
    sampled_growth_max_x: float
    sampled_growth_max: float
    sampled_variance_min_x: float
    sampled_variance_min: float


def two_stock_curve(
    g1: float,
    g2: float,
    s11: float,
    s22: float,
    s12: float,
    x_range: tuple[float, float] = (-1.0, 2.0),
    steps: int = 301,
) -> TwoStockCurve:
    """Trace growth and volatility of the two-stock interpolation.

    growth(x) = x g1 + (1-x) g2 + x(1-x)(s11+s22-2 s12)/2 is concave,
    variance(x) = x^2 s11 + (1-x)^2 s22 + 2x(1-x) s12 is convex; their
    extremum locations and values are returned in closed form alongside the
    sampled curve.
    """
    if s11 <= 0.0 or s22 <= 0.0 or s11 * s22 - s12 * s12 <= 0.0:
        raise DegenerateCovariance("two-stock covariance block is not positive-definite")
    den = s11 + s22 - 2.0 * s12
    if den <= 0.0:
        raise DegenerateCovariance("s11 + s22 - 2*s12 must be positive")
    lo, hi = float(x_range[0]), float(x_range[1])
    if not lo < hi:
        raise InvalidParams("x_range must be increasing")
    x = rational_grid(lo, hi, int(steps))
    gamma = x * g1 + (1.0 - x) * g2 + 0.5 * x * (1.0 - x) * den
    var = x * x * s11 + (1.0 - x) ** 2 * s22 + 2.0 * x * (1.0 - x) * s12
    sigma = np.sqrt(var)

    growth_max_x = 0.5 + (g1 - g2) / den
    growth_max = 0.5 * (g1 + g2) + (g1 - g2) ** 2 / (2.0 * den) + den / 8.0
    variance_min_x = (s22 - s12) / den
    variance_min = (s11 * s22 - s12 * s12) / den

    i_max = int(np.argmax(gamma))
    i_min = int(np.argmin(var))
    return TwoStockCurve(
        x=_readonly(x),
        sigma=_readonly(sigma),
        gamma=_readonly(gamma),
        growth_max_x=float(growth_max_x),
        growth_max=float(growth_max),
        variance_min_x=float(variance_min_x),
        variance_min=float(variance_min),
        sampled_growth_max_x=float(x[i_max]),
        sampled_growth_max=float(gamma[i_max]),
        sampled_variance_min_x=float(x[i_min]),
        sampled_variance_min=float(var[i_min]),
    )
