"""Exception hierarchy shared by every vlmc module."""


class VLMCError(Exception):
    """Base class for all package errors."""


class InvalidInput(VLMCError, ValueError):
    """Malformed model, sample or configuration."""


class InvalidSymbol(InvalidInput):
    pass


class InvalidModel(InvalidInput):
    pass


class PreconditionViolation(VLMCError):
    """A bound or estimator was evaluated outside its hypotheses."""


class NoConvergence(VLMCError):
    pass


class UndefinedConditional(VLMCError):
    pass


class SummabilityViolation(VLMCError):
    pass


class DepthTooLarge(InvalidInput):
    pass


class DepthExceeded(VLMCError):
    pass


class DegenerateSample(PreconditionViolation):
    pass


class EnumerationTooLarge(VLMCError):
    pass
