"""Exception hierarchy shared by every module of the package."""


class ClusterError(Exception):
    """Base class for computation errors (the CLI maps these to exit code 1)."""


class VariableMismatch(ClusterError, ValueError):
    pass


class NotDivisible(ClusterError):
    """Exact Laurent division left a nonzero remainder."""


class UnboundVariable(ClusterError, KeyError):
    pass


class NotAcyclic(ClusterError, ValueError):
    pass


class NotAffine(ClusterError):
    """The Euler form has no one-dimensional radical of affine signature."""


class DimensionMismatch(ClusterError, ValueError):
    pass


class InsufficientPrimes(ClusterError):
    pass


class NonPolynomialCount(ClusterError):
    """Point counts over the prime list are not explained by one integer polynomial."""


class NonRigidDimension(ClusterError):
    pass


class UndecomposableSign(ClusterError):
    pass


class ParityViolation(ClusterError, ValueError):
    pass


class OutOfRange(ClusterError, ValueError):
    pass


class NoPresentation(ClusterError):
    pass


class Unsupported(ClusterError):
    """The requested identity instance lies outside the cases the recursion covers."""


class PreconditionFailed(ClusterError):
    pass
