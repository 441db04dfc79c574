"""Exception hierarchy.

Every failure that the numerical pipeline can detect is raised as a
subclass of :class:`WeylkitError`, so callers can catch the whole family or
a single condition.  Exceptions raised from a specific location along the
grid carry that location in ``x``.
"""


class WeylkitError(Exception):
    """Base class for all weylkit errors."""

    #: pipeline stage that raised, filled in by the reconstruction driver
    stage = None


class InvalidShape(WeylkitError, ValueError):
    """Matrix dimensions do not fit together."""


class NotHermitian(WeylkitError, ValueError):
    """A matrix that must be Hermitian is not, beyond tolerance."""


class InvalidBoundaryParam(WeylkitError, ValueError):
    """Boundary parameter violates alpha alpha* = I or alpha J alpha* = 0."""


class InvalidSpectralPoint(WeylkitError, ValueError):
    """Spectral parameter outside the admissible region."""


class NumericalFailure(WeylkitError, ArithmeticError):
    """A dense linear algebra kernel did not converge."""


class Diverged(NumericalFailure):
    """Propagated solution overflowed the magnitude guard."""


class WeylMatchSingular(NumericalFailure):
    """The m x m matching system for the Weyl function is ill-conditioned."""


class SingularWeyl(NumericalFailure):
    """A Weyl matrix that must be invertible (rank m) is numerically singular."""


class MoebiusSingular(NumericalFailure):
    """Denominator of the boundary-parameter transform is singular."""


class CayleySingular(NumericalFailure):
    """Denominator of a Cayley-type transform is singular."""


class InsufficientSamples(WeylkitError, ValueError):
    """Sample grid does not cover the requested interval."""


class GridMismatch(WeylkitError, ValueError):
    """Spectral sample grid cannot resolve the requested x grid."""


class InvalidWeylData(WeylkitError, ValueError):
    """Input samples violate the contractive / Herglotz contract."""


class _LocatedError(WeylkitError):
    def __init__(self, x, msg=None):
        self.x = float(x)
        super().__init__(msg or f"{type(self).__name__} at x = {self.x:.6g}")


class NotStrictlyPositive(_LocatedError, ArithmeticError):
    """Discretized S_x failed to factor: data inconsistent or under-resolved."""


class ContractionLost(_LocatedError, ArithmeticError):
    """The recovered ratio gamma_2^{-1} gamma_1 is no longer a strict contraction."""


class DegenerateHamiltonian(_LocatedError, ArithmeticError):
    """Lower-right block of H(x) is numerically singular."""


class DegenerateFrame(_LocatedError, ArithmeticError):
    """The frame product breve_beta S3 breve_beta* is numerically singular."""


class InvariantViolation(WeylkitError):
    """A post-condition checked by a driver failed."""


class ConfigError(WeylkitError, ValueError):
    """Run configuration is malformed or inconsistent."""
