"""Exception hierarchy.

Every error raised on purpose by the library derives from `HarvestError`;
the CLI maps the subclasses onto exit codes.
"""


class HarvestError(Exception):
    """Base class for library errors."""


class RegimeError(HarvestError):
    """Inputs lie outside the regime where the model theory applies."""


class NoSignChange(RegimeError):
    pass


class Extinct(RegimeError):
    """The iteration collapsed onto the trivial solution.

    The collapsed `StateSolution` is attached as ``solution``.
    """

    def __init__(self, message, solution=None):
        super().__init__(message)
        self.solution = solution


class NotCoercive(RegimeError):
    pass


class NotPositiveDefinite(RegimeError):
    pass


class GridTooCoarse(HarvestError):
    pass


class NotMonotone(HarvestError):
    pass


class JacobianSingular(HarvestError):
    pass


class NotConverged(HarvestError):
    """An iteration hit its cap. ``trace`` holds whatever history was kept."""

    def __init__(self, message, trace=None, result=None):
        super().__init__(message)
        self.trace = trace
        self.result = result


class MaxIterations(NotConverged):
    pass


class Diverged(NotConverged):
    pass


class TooManyCombinations(HarvestError):
    pass


class ConfigError(HarvestError, ValueError):
    """Invalid run configuration; ``key`` names the offending entry."""

    def __init__(self, message, key=None):
        super().__init__(message)
        self.key = key


class UnknownKey(ConfigError):
    pass


class TypeMismatch(ConfigError):
    pass


class ConstraintViolation(ConfigError):
    pass


class DivisionByZero(HarvestError, ZeroDivisionError):
    pass
