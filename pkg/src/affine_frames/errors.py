"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes, so each class states which family it
belongs to: hypothesis violations (2), numeric failures (3), configuration
problems (4).
"""


class AffineFramesError(Exception):
    exit_code = 1


class HypothesisError(AffineFramesError, ValueError):
    """A mathematical precondition does not hold for the given data.

    ``witness`` carries the offending point or pair when one is known.
    """

    exit_code = 2

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class SpectrumOverlapError(HypothesisError):
    """Two images of a spectrum under the dual maps share a point."""


class NotEllipticError(HypothesisError):
    """The matrix M*M has no positive lower bound."""


class ArgumentError(AffineFramesError, ValueError):
    exit_code = 2


class UnsupportedGeometryError(ArgumentError):
    """A domain-side map does not send boxes to boxes."""


class NumericDomainError(AffineFramesError, ArithmeticError):
    exit_code = 3


class IndeterminateError(NumericDomainError):
    """Floating point cannot decide the question at the requested margin."""


class ExactnessError(NumericDomainError):
    """An exact operation received data it cannot treat exactly."""


class ConfigError(AffineFramesError):
    exit_code = 4
