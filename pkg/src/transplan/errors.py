"""Exception hierarchy shared by every transplan module."""

from __future__ import annotations


class TransplanError(Exception):
    """Base class for all errors raised by transplan."""


class OutOfDomain(TransplanError, ValueError):
    """A path parameter lies outside the admissible interval."""


class DimensionMismatch(TransplanError, ValueError):
    """Objects living in ambient spaces of different dimension were combined."""


class DiscontinuousJoin(TransplanError, ValueError):
    """Two paths were concatenated whose endpoints do not meet."""


class InvalidPath(TransplanError, ValueError):
    """A path violates its structural invariants (tiling, continuity, finiteness)."""


class QueryOutsideAllDomains(TransplanError, LookupError):
    """No domain of continuity of a planner contains the query."""


class BasepointOnSurface(TransplanError, ValueError):
    """A contraction basepoint lies on the hypersurface it must avoid."""


class DomainSamplingExhausted(TransplanError, RuntimeError):
    """Rejection sampling into planner domains hit its retry cap."""


class SceneError(TransplanError, ValueError):
    """A scene or path document is malformed or inconsistent."""
