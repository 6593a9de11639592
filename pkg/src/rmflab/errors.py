"""Exception types shared across the package.

The CLI maps these onto exit codes: ConfigError -> 2, CapacityError -> 3,
InvariantError -> 4. DomainError/RangeError raised for bad arguments are
treated as configuration problems when they surface from a run.
"""


class RmflabError(Exception):
    pass


class ConfigError(RmflabError):
    """Invalid configuration (bad field, unknown key, precondition violated)."""


class DomainError(RmflabError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class RangeError(DomainError):
    """Index or cutoff outside the supported range (e.g. n > table limit)."""


class CapacityError(RmflabError):
    """Request exceeds a documented capacity limit (memory or runtime cap)."""


class InvariantError(RmflabError):
    """An internal consistency check failed; indicates a bug."""
