"""Exception hierarchy shared by all modules."""


class PLStabError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(PLStabError, ValueError):
    """Input violates a documented precondition."""


class NonLogConcaveInput(ValidationError):
    pass


class EmptySupport(ValidationError):
    pass


class NonUniformGrid(ValidationError):
    pass


class LevelAboveMax(ValidationError):
    pass


class SlopeRangeTooNarrow(ValidationError):
    pass


class GridTooLarge(ValidationError):
    pass


class WeightSumInvalid(ValidationError):
    pass


class NotDecreasing(ValidationError):
    pass


class NotLogConcave(ValidationError):
    pass


class MixedVariants(ValidationError):
    pass


class DegenerateBody(ValidationError):
    pass


class PreconditionViolated(ValidationError):
    pass


class OverlappingInput(ValidationError):
    pass


class HypothesisViolated(ValidationError):
    pass


class HypothesisNotMet(ValidationError):
    pass


class DomainViolation(ValidationError):
    pass


class EpsilonOutOfRange(ValidationError):
    pass


class OmegaNotBelowOne(ValidationError):
    pass


class ConfigInvalid(ValidationError):
    pass


class ProfileNotLogConcave(PLStabError):
    """A mass profile failed its discrete log-concavity check."""


class EmptyInput(ValidationError):
    pass


class ParseError(ValidationError):
    """Malformed function-spec file; carries the offending line number."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
