"""Exception types shared by all modules.

The CLI maps each class onto a process exit code.
"""


class DomainError(ValueError):
    """An argument lies outside the operation's domain (odd n, m = 0, bad digit)."""


class ConfigurationError(ValueError):
    """Inconsistent parameters, e.g. a prime table built for a different X."""


class SizeError(ValueError):
    """A configured size cap would be exceeded."""


class InvariantError(RuntimeError):
    """An internal cross-check failed. Always a bug, never bad input."""
