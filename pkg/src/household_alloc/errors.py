"""Exception hierarchy shared by every module of the package."""


class ModelError(Exception):
    """Base class for all model errors."""


class InvalidParameter(ModelError, ValueError):
    """A model parameter is not admissible (non-finite, wrong sign, out of range)."""

    def __init__(self, name, value, reason):
        self.name = name
        self.value = value
        super().__init__(f"{name} = {value!r}: {reason}")


class NonPositiveParameter(InvalidParameter):
    pass


class DiscountOutOfRange(InvalidParameter):
    pass


class NotInterior(ModelError):
    """Raised when an operation needs the interior regime but the instance is Corner or Singular."""

    def __init__(self, classification, message=None):
        self.classification = classification
        if message is None:
            message = (
                f"regime is {classification.regime.value} "
                f"(gamma2 + gamma5 - gamma3 = {classification.mqqt_margin:.17g}); "
                "no interior allocation exists"
            )
        super().__init__(message)


class NetIncomeNonPositive(ModelError):
    pass


class NonPositiveArgument(ModelError, ValueError):
    pass


class InvalidStep(ModelError, ValueError):
    pass


class NoFeasibleStart(ModelError):
    pass


class NotConverged(ModelError):
    """The numerical maximizer hit its iteration cap; ``result`` holds the partial iterate."""

    def __init__(self, result):
        self.result = result
        super().__init__(
            f"no convergence after {result.iterations} iterations "
            f"(utility {result.utility:.17g})"
        )


class EmptyGrid(ModelError, ValueError):
    pass


class BaseNotInterior(NotInterior):
    pass
