"""sptlab: closed-form portfolio optimization for stochastic portfolio
theory markets, verified against Monte Carlo simulation.

The library covers three model families: a fixed-parameter universe with its
efficient frontier in closed form, the volatility-stabilized market, and
rank-based Atlas markets.  A seeded simulation engine (compiled kernels with
a pure-Python fallback) checks every closed form; the ``sptlab`` CLI exposes
the experiments and the verification suites.
"""

from ._backend import BACKEND
from .errors import SptlabError
from .frontier import (
    BaseStats,
    FrontierPoint,
    FrontierPortfolio,
    MarketParams,
    Portfolio,
    TwoStockCurve,
    base_stats,
    excess_growth,
    frontier_curve,
    frontier_portfolio,
    frontier_slopes,
    max_growth_portfolio,
    min_volatility_portfolio,
    portfolio_growth,
    portfolio_volatility,
    theta_ratio,
    two_stock_curve,
)
from .markets import (
    DiversityPortfolio,
    EntropyPortfolio,
    MarketWeights,
    SimpleAtlasExtremals,
    SimpleAtlasSpec,
    VsmExtremals,
    d_minus_one,
    diversity_weighted_portfolio,
    entropy_weighted_portfolio,
    simple_atlas_extremals,
    simple_atlas_params,
    vsm_extremals,
    vsm_n3_frontier,
    vsm_params,
)
from .ranks import (
    AtlasSpec,
    LocalTimeRates,
    RankFrontier,
    RankPortfolio,
    StabilityReport,
    asymptotic_relative_growth,
    check_stability,
    generating_functional,
    local_time_rates,
    rank_excess_growth,
    rank_frontier,
)
from .simulate import (
    DiversityWeighted,
    EntropyWeighted,
    Estimate,
    FgpDecomposition,
    FixedWeights,
    RankWeights,
    RunReport,
    SimConfig,
    TrackMarket,
    estimate_local_times,
    fgp_decomposition,
    realized_stats,
    simulate_atlas,
    simulate_fixed,
    simulate_vsm,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "__version__",
    "SptlabError",
    # frontier
    "MarketParams", "BaseStats", "Portfolio", "FrontierPortfolio",
    "FrontierPoint", "TwoStockCurve", "base_stats",
    "min_volatility_portfolio", "max_growth_portfolio", "frontier_portfolio",
    "portfolio_volatility", "portfolio_growth", "excess_growth",
    "frontier_curve", "frontier_slopes", "theta_ratio", "two_stock_curve",
    # special markets
    "MarketWeights", "SimpleAtlasSpec", "VsmExtremals", "EntropyPortfolio",
    "SimpleAtlasExtremals", "DiversityPortfolio", "vsm_params",
    "vsm_extremals", "d_minus_one", "entropy_weighted_portfolio",
    "vsm_n3_frontier", "simple_atlas_params", "simple_atlas_extremals",
    "diversity_weighted_portfolio",
    # rank dynamics
    "AtlasSpec", "RankPortfolio", "LocalTimeRates", "StabilityReport",
    "RankFrontier", "check_stability", "local_time_rates",
    "generating_functional", "rank_excess_growth",
    "asymptotic_relative_growth", "rank_frontier",
    # simulator
    "SimConfig", "RunReport", "Estimate", "FgpDecomposition", "FixedWeights",
    "TrackMarket", "EntropyWeighted", "DiversityWeighted", "RankWeights",
    "simulate_fixed", "simulate_vsm", "simulate_atlas",
    "estimate_local_times", "fgp_decomposition", "realized_stats",
]
