"""Exception hierarchy shared by all modules."""


class ModularError(Exception):
    """Base class for every error raised by the package."""


class ShapeMismatch(ModularError, ValueError):
    pass


class SingularInput(ModularError):
    pass


class IllConditioned(ModularError):
    pass


class NotUnitary(ModularError):
    pass


class NotPositiveDefinite(ModularError):
    pass


class NotCyclicSeparating(ModularError):
    pass


class FormulaMismatch(ModularError):
    """Two independent evaluations of the same quantity disagree."""


class InvalidSpectralData(ModularError, ValueError):
    pass


class IndexOutOfHead(InvalidSpectralData, IndexError):
    pass


class EqualMultiplicities(InvalidSpectralData):
    pass


class TypeIForbidden(InvalidSpectralData):
    pass


class EpsTooLarge(InvalidSpectralData):
    pass


class UnsupportedTarget(ModularError):
    pass


class DimensionTooLarge(ModularError):
    pass
