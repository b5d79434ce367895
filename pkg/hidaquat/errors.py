"""
Exception types raised by the hidaquat library.

Domain errors are ValueError subclasses so that callers which only guard
against bad input keep working; failed certificates are RuntimeErrors.
"""


class PrecisionError(ValueError):
    """A level or precision requirement is not met."""


class ConfigError(ValueError):
    """A job configuration violates one of its invariants."""


class NotDistinguishedError(ValueError):
    """Two eigensystem packets cannot be separated by the probe set."""


class VerificationError(RuntimeError):
    """A computed object failed its certificate (discriminant, mass, splitting, ...)."""
