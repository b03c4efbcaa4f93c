"""Exception hierarchy shared by all nhlab modules."""


class NhlabError(Exception):
    """Base class for all package-level errors."""


class ParameterError(NhlabError):
    """Model parameters violate a documented constraint."""


class DomainError(NhlabError):
    """Evaluation point too close to a zero of the model denominator."""


class ExcludedMomentum(NhlabError):
    """Continuum state requested at a momentum where it is undefined."""


class ConvergenceError(NhlabError):
    """A limit or extrapolation sequence failed to stabilize."""


class ToleranceNotMet(NhlabError):
    """Adaptive quadrature exhausted its budget above the requested tolerance."""


class SlowDecay(NhlabError):
    """Real-line integrand decays too slowly for a reliable tail bound."""


class OnCut(NhlabError):
    """Green function requested on the spectral cut."""


class AtPole(NhlabError):
    """Green function requested at (or numerically on top of) a pole."""


class AsymptoteNotReached(NhlabError):
    """Scattering amplitudes still drifting at the largest sampling points."""


class FitUnstable(NhlabError):
    """Log-log slope fit has residuals too large to trust."""


class SingularTransform(NhlabError):
    """Triangle transformation with vanishing leading coefficient."""


class ZeroDenominator(NhlabError):
    """Raw bilinear average with vanishing denominator but nonzero numerator."""
