"""Exception types shared across the package."""


class RQFramesError(Exception):
    """Base class for all library errors."""


class DivisionByZero(RQFramesError, ZeroDivisionError):
    """Inversion of a quaternion whose magnitude is below the zero cutoff."""


class DimensionMismatch(RQFramesError, ValueError):
    """Operands live in spaces of different dimension."""


class ShapeMismatch(RQFramesError, ValueError):
    """Families, tables or matrices have incompatible shapes or measures."""


class SingularMatrix(RQFramesError, ArithmeticError):
    """Elimination met a pivot column with no usable pivot."""


class NotSelfAdjoint(RQFramesError, ValueError):
    """A spectral routine was handed a matrix that is not self-adjoint."""


class NoConvergence(RQFramesError, ArithmeticError):
    """An iteration did not reach its tolerance within the sweep cap."""


class AmbientMismatch(RQFramesError, ValueError):
    """Subspaces of different ambient spaces were combined."""


class NotAFrame(RQFramesError, ValueError):
    """The family's lower frame bound is (numerically) zero."""


class GapTooLarge(RQFramesError, ValueError):
    """The subspace gap is too close to 1 for the projection argument."""


class NotARieszFamily(RQFramesError, ValueError):
    """The integrated-vector Gram matrix is (numerically) singular."""


class GenerationExhausted(RQFramesError, RuntimeError):
    """Random instance generation hit its retry cap."""
