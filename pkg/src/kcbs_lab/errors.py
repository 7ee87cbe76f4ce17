"""Exception types raised across the package."""


class KCBSLabError(Exception):
    """Base class for all package errors."""


class DomainError(KCBSLabError, ValueError):
    """An angle or parameter lies outside the region where an operation is defined."""


class ZeroVector(KCBSLabError, ValueError):
    """A vector is too short to be normalized into a ray."""


class NotAContext(KCBSLabError, ValueError):
    """Two test axes are not orthogonal, so the tests are not jointly measurable."""
