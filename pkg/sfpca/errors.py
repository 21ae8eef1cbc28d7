# -*- coding: utf-8 -*-

# Exceptions raised by the sfpca solvers, deflation schemes and tooling.


class SFPCAError(Exception):
    pass


class ConfigError(SFPCAError, ValueError):
    pass


class DimensionError(SFPCAError, ValueError):
    pass


class MatrixFormatError(SFPCAError, ValueError):
    pass


class NumericError(SFPCAError, ArithmeticError):
    pass


class RankDeficiencyError(NumericError):
    """Raised when a retraction meets a Gram matrix that is not positive definite."""

    pass


class SingularPivotError(NumericError):
    pass


class ConditioningError(NumericError):
    def __init__(self, factor: str, condition: float):
        super().__init__(
            "‘{0}’ is ill-conditioned (condition number {1:.3e})".format(
                factor, condition
            )
        )
        self.factor = factor
        self.condition = condition


class DegenerateInputError(NumericError):
    pass


class FeasibilityError(NumericError):
    pass


class TuningDegenerateError(SFPCAError):
    pass


class GenerationError(SFPCAError):
    pass
