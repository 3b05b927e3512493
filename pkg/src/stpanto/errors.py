"""Exception taxonomy.

Three groups, matching the CLI exit codes: bad input (1), a sum or product
that failed to converge (2), and a theorem hypothesis that the supplied
parameters violate (3).
"""


class StError(Exception):
    exit_code = 1


# -- input / precondition errors (exit code 1) ------------------------------

class StInputError(StError):
    exit_code = 1


class ZeroParameter(StInputError):
    pass


class DegenerateDiscriminant(StInputError):
    pass


class BackendMismatch(StInputError):
    pass


class IndexOutOfRange(StInputError):
    pass


class DegenerateQ(StInputError):
    pass


class ParamsMismatch(StInputError):
    pass


class NonzeroConstantTerm(StInputError):
    pass


class ZeroPoint(StInputError):
    pass


class QOutOfRange(StInputError):
    pass


class DegenerateRatio(StInputError):
    pass


class InvalidBernoulliOrder(StInputError):
    pass


class DegenerateStNumber(StInputError):
    pass


class NonInvertibleSeries(StInputError):
    pass


class NonQPeriodicInitial(StInputError):
    pass


class DegreeOverflow(StInputError):
    pass


class ExpressionSyntaxError(StInputError):
    """Parse failure; ``position`` is the 1-based offset into the input."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at offset {position}")
        self.position = position


# -- convergence failures (exit code 2) --------------------------------------

class StConvergenceError(StError):
    exit_code = 2


class ConvergenceFailure(StConvergenceError):
    pass


class DivergentProduct(StConvergenceError):
    pass


class ZeroDenominator(StConvergenceError):
    pass


# -- violated theorem hypotheses (exit code 3) -------------------------------

class StHypothesisError(StError):
    exit_code = 3


class HypothesisViolated(StHypothesisError):
    pass


class ResonantParameters(StHypothesisError):
    pass


class ZeroDelay(StHypothesisError):
    pass
