"""Exception types raised by gaussgeom."""


class NumericalError(RuntimeError):
    """A numerical routine failed or produced an inconsistent result."""


class QuadratureError(NumericalError):
    """An adaptive quadrature did not reach the requested tolerance."""


class SamplerExhausted(NumericalError):
    """The rejection sampler ran out of its retry budget."""


class CovarianceFormatError(ValueError):
    """A covariance-matrix file could not be parsed."""
