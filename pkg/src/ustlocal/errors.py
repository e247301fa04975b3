"""Exception types raised across the package."""


class UstError(ValueError):
    """Base class for all package errors."""


class DisconnectedGraph(UstError):
    pass


class NonPositiveConductance(UstError):
    pass


class VertexOutOfRange(UstError):
    pass


class InvalidParams(UstError):
    pass


class GenerationTimeout(UstError):
    pass


class CycleInA(UstError):
    pass


class DisconnectsGraph(UstError):
    pass


class SingularSystem(UstError):
    pass


class LimitExceeded(UstError):
    pass
