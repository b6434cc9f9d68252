"""Exception types shared across the package."""


class SlowdispError(Exception):
    """Base class for all package-specific errors."""


class InternalConsistencyError(SlowdispError):
    """A mathematically guaranteed identity failed beyond tolerance.

    Signals a bug or insufficient working precision, never bad user input.
    """


class ConditioningError(SlowdispError):
    """A linear system or Jacobian is too ill-conditioned to trust."""


class NonConvergenceError(SlowdispError):
    """An iterative method exhausted its budget without meeting tolerance."""


class NoCandidateError(SlowdispError):
    """Random sampling produced no point satisfying the validity constraints."""


class BranchDegeneracyError(SlowdispError):
    """|F(0)| too close to 1: the arccos branch of the Floquet angle degenerates."""


class DegenerateSpectrumError(SlowdispError):
    """Eigenvalue collision: the matrix cannot be diagonalized with distinct phases."""


class IndeterminateOrderError(SlowdispError):
    """Flatness classification impossible: jet too short or every derivative below tolerance."""


class QuadratureAccuracyError(SlowdispError):
    """Oscillatory quadrature failed to converge within its panel-halving budget."""

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved
