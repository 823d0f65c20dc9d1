"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class BOError(Exception):
    """Base class for all numerical failures raised by :mod:`bozd`."""


class PoleHit(BOError):
    """A rational function was evaluated too close to one of its poles."""


class NonPositiveTime(BOError):
    """An operation that needs ``t > 0`` received ``t <= 0``."""


class NearCaustic(BOError):
    """The point is too close to the discriminant locus for reliable branch labels."""


class RootFindingFailure(BOError):
    """Polynomial root iteration stagnated before reaching the residual target."""


class QuadratureFailure(BOError):
    """Adaptive quadrature exhausted its subdivision budget."""


class NonPositiveModulus(BOError):
    """A squared modulation modulus came out non-positive."""


class SingularM(BOError):
    """A modulation matrix was numerically singular."""


class BudgetExceeded(BOError):
    """A trajectory trace ran out of arc-length or step budget."""


class DegenerateSaddle(BOError):
    """A critical point has a vanishing second derivative."""


class ContourConstructionFailure(BOError):
    """No valid set of integration contours could be assembled."""

    def __init__(self, message: str, dump: list | None = None):
        super().__init__(message)
        self.dump = dump or []


class SingularB(BOError):
    """The denominator determinant of the exact solution vanished numerically."""


class SingularResolvent(BOError):
    """The soliton resolvent matrix could not be inverted."""


class InsufficientData(BOError):
    """Too few samples to perform a fit."""


class JTooLarge(BOError):
    """A check restricted to at most one oscillatory phase met a J >= 2 point."""


class ConfigError(BOError):
    """Invalid user-supplied configuration or initial data."""
