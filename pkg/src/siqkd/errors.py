"""Exception types raised across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of a function."""


class InvalidSource(ValueError):
    """A (mean, g2) pair does not give a valid truncated photon distribution."""


class CutoffTooSmall(ValueError):
    """Fock-space truncation discards more norm than allowed."""


class ModeMismatch(KeyError):
    """A state lacks the optical modes an operation acts on."""


class NoConvergence(RuntimeError):
    """A fixed-point iteration did not reach its tolerance."""


class ParseError(ValueError):
    """Malformed configuration text."""


class ValidationError(ValueError):
    """A configuration value violates a parameter constraint."""
