"""Exception types shared across the package."""


class CancellationError(ArithmeticError):
    """An alternating series lost all significant digits in floating point.

    Raised instead of returning a value whose error cannot be bounded.
    Carries the growth ratio (largest term over partial sum) that tripped
    the guard.
    """

    def __init__(self, message: str, ratio: float = float("nan")):
        super().__init__(message)
        self.ratio = ratio


class NumericFailureError(RuntimeError):
    """A numerical routine produced a non-finite or unusable result.

    The ``context`` dict carries the offending point (contour node,
    iteration index, spatial position) for diagnosis.
    """

    def __init__(self, message: str, **context):
        super().__init__(message)
        self.context = context


class DegenerateSpectrumError(NumericFailureError):
    """A discrete-ordinates eigenvalue collided with a quadrature ray."""


class TransformUnavailableError(ValueError):
    """No closed-form Laplace transform is implemented for this family."""


class QuadratureError(RuntimeError):
    """Adaptive quadrature could not certify the requested tolerance."""

    def __init__(self, message: str, estimate=None, bound=None):
        super().__init__(message)
        self.estimate = estimate
        self.bound = bound


class ProfileError(RuntimeError):
    """A solver failed while filling a spatial profile.

    Carries the solver name and the (x, t) point at which it failed.
    """

    def __init__(self, message: str, solver: str, x: float, t: float):
        super().__init__(message)
        self.solver = solver
        self.x = x
        self.t = t
