"""Exception hierarchy shared by all seplab modules."""


class SeplabError(Exception):
    """Base class for every error raised by this package."""


class DimensionMismatch(SeplabError):
    """Operands live in spaces of incompatible dimension."""


class NotHermitian(SeplabError):
    """Operator fails the hermiticity check required by the operation."""


class UnknownOutcome(SeplabError):
    """Outcome label not present in the measurement's outcome set."""


class ImpossibleOutcome(SeplabError):
    """Collapse requested onto an outcome of (numerically) zero probability."""


class NonCommuting(SeplabError):
    """Projector pair does not commute within tolerance."""


class EmptySubspace(SeplabError):
    """A required witness subspace has rank zero for this projector pair."""


class BadSpectrum(SeplabError):
    """Observable spectrum is not contained in {-1, +1} within tolerance."""


class MissingDistribution(SeplabError):
    """Coincidence model does not expose an exact joint distribution."""


class UnknownTest(SeplabError):
    """Named test is not defined for this entity (or its current state)."""


class ConfigError(SeplabError):
    """Scenario configuration is malformed; message names the offending field."""


class ScenarioError(SeplabError):
    """A scenario failed while running; wraps the underlying module error."""


class IoError(SeplabError):
    """Report could not be written to the requested destination."""
