"""Exception hierarchy shared across the package."""


class SptlabError(Exception):
    """Base class for every error raised by sptlab."""


class InvalidParams(SptlabError):
    """Structurally invalid model inputs (shape, symmetry, consistency)."""


class NotFullyFunded(InvalidParams):
    """Portfolio weights do not sum to one within tolerance."""


class NotPositiveDefinite(SptlabError):
    """Covariance failed the Cholesky positive-definiteness test."""


class DimensionMismatch(SptlabError):
    """Vector or matrix sizes do not agree with the market universe."""


class GridOutOfRange(SptlabError):
    """A frontier grid value lies outside [0, 1]."""


class ZeroVolatility(SptlabError):
    """Portfolio volatility is zero; ratio undefined (defensive)."""


class DegenerateCovariance(SptlabError):
    """Two-stock covariance block is not positive-definite."""


class NonPositiveWeight(SptlabError):
    """Market weights must be strictly positive."""


class InvalidOffset(SptlabError):
    """Entropy offset does not dominate all log-weights."""


class WrongDimension(SptlabError):
    """Operation restricted to a specific universe size."""


class TooShort(SptlabError):
    """Rank growth vector needs at least two entries."""


class Unstable(SptlabError):
    """Rank growth rates violate the stability conditions."""


class NonPositiveInput(SptlabError):
    """Generating functional requires strictly positive arguments."""


class ConfigInvalid(SptlabError):
    """Simulation configuration violates its invariants."""


class WeightCollapse(SptlabError):
    """Market weights degenerated during a simulation run."""


class MissingGapRecord(SptlabError):
    """Run does not carry the rank-gap record needed for local times."""


class MissingSnapshots(SptlabError):
    """Run does not track the requested portfolio."""


class UnknownSuite(SptlabError):
    """Verification suite name not recognized."""


class ConfigError(SptlabError):
    """Config-file validation failure, tagged with the offending field path."""

    def __init__(self, path: str, message: str):
        self.path = path
        self.message = message
        super().__init__(f"{path}: {message}" if path else message)


class WeightFloorWarning(UserWarning):
    """Weight floor triggered more often than the tolerated rate."""
