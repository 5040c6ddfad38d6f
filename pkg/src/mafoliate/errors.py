"""Exception hierarchy for the toolkit.

Every error raised by the analysis modules derives from ``MafoliateError`` so
callers (and the CLI) can separate tool failures from ordinary Python bugs.
"""


class MafoliateError(Exception):
    """Base class for all toolkit errors."""


class RealityViolation(MafoliateError):
    """A polynomial's coefficients are not conjugate-paired, so it is not real-valued."""


class NegativeExponent(MafoliateError):
    """A monomial key carries a negative or non-integer exponent."""


class NonPositiveRho(MafoliateError):
    """An operation that requires rho > 0 was invoked where rho <= 0."""


class DegenerateLevi(MafoliateError):
    """The Levi determinant is below the degeneracy threshold eps_D."""


class ZeroDifferential(MafoliateError):
    """d(rho) vanishes at the requested point; no level hypersurface there."""


class TypeCapExceeded(MafoliateError):
    """No bracket word up to the configured length pairs nontrivially with d(rho)."""


class VanishingPhi(MafoliateError):
    """The transversality coefficient of the extension witness is numerically zero."""


class NoConvergence(MafoliateError):
    """Limit procedures (ray extrapolation, cross-checks) disagree beyond tolerance."""


class AllRaysDegenerate(MafoliateError):
    """Every default approach ray stays inside the Levi-degenerate set."""


class FlowEscape(MafoliateError):
    """A flow trajectory left the domain rho > 0 (or exhausted its step budget)."""


class IncompleteTrace(MafoliateError):
    """Leaf diagnostics were requested on a trace whose grid is not fully populated."""


class RankDeficientSamples(MafoliateError):
    """The least-squares sample set cannot determine the requested coefficients."""


class NonVanishingAtCenter(MafoliateError):
    """Weight extraction requires the fitted field to vanish at the origin."""


class ComplexEigenvalues(MafoliateError):
    """The linear part of the fitted field has eigenvalues with large imaginary parts."""


class NotHomogeneous(MafoliateError):
    """The polynomial mixes total degrees where homogeneity is required."""


class NotPositive(MafoliateError):
    """The polynomial fails to be positive on the test sphere; carries a witness point."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness
