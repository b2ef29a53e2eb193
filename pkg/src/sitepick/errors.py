"""Exception types shared across the package.

The CLI maps these onto distinct exit codes, so keep the hierarchy flat
and the classes specific.
"""


class SitepickError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(SitepickError, ValueError):
    """An argument violated a documented precondition."""


class EmptyClusterError(SitepickError):
    """A centroid was requested for a cluster with no members."""


class DegenerateClusteringError(SitepickError):
    """Cluster validity is undefined (e.g. every cluster is a coincident-point singleton)."""


class SweepError(SitepickError):
    """No k in the sweep range produced a scoreable clustering."""


class ParseError(SitepickError):
    """Input data could not be parsed (strict mode, or structural failure)."""


class ConfigError(SitepickError):
    """Run configuration is inconsistent or out of range."""
