"""Exception and warning types shared across the package."""


class OsgoodError(Exception):
    """Base class for package errors."""


class NonPositiveArgument(OsgoodError):
    """An argument required to be positive was <= 0."""


class SearchDivergence(OsgoodError):
    """No interior or boundary minimum could be bracketed."""


class HypothesisViolated(OsgoodError):
    """A sampled hypothesis check failed beyond the configured slack."""


class InvalidModulus(OsgoodError):
    """Modulus is non-positive or non-monotone on sample points."""


class InvalidExponent(OsgoodError):
    """Lebesgue exponent outside [1, inf]."""


class InvalidLambda(OsgoodError):
    """Rearrangement fraction outside (0, 1/2]."""


class NonZeroMean(OsgoodError):
    """Field must be mean-free for the requested spectral operation."""


class EmptySequence(OsgoodError):
    """Band sequence has no entries."""


class StepUnstable(OsgoodError):
    """A single integration step moved a particle more than half a period."""


class WindowTooLow(OsgoodError):
    """Requested t-window dips below the grid resolution floor."""


class AliasRisk(UserWarning):
    """Top frequency band touches the Nyquist annulus."""
