"""Exception hierarchy shared by all modules."""


class DtcalcError(ValueError):
    """Base class for every domain error raised by the package."""


class CellError(DtcalcError):
    pass


class CycleInOrder(CellError):
    pass


class FrontierViolation(CellError):
    pass


class DuplicateCellId(CellError):
    pass


class UnknownCell(CellError):
    pass


class NotMonotone(CellError):
    pass


class NegativeFiberDim(CellError):
    pass


class ModeMismatch(CellError):
    pass


class SmoothFlagRejected(CellError):
    pass


class SpaceMismatch(DtcalcError):
    pass


class UnsupportedFragment(DtcalcError):
    pass


class ModeUnsupported(DtcalcError):
    pass


class SmoothFlagRequired(DtcalcError):
    pass


class SmoothRequired(DtcalcError):
    pass


class NotUnitriangular(DtcalcError):
    pass


class TargetMismatch(DtcalcError):
    pass


class ChainMismatch(DtcalcError):
    pass


class NotInvertible(DtcalcError):
    pass


class BoundExceeded(DtcalcError):
    pass


class SchemaError(DtcalcError):
    def __init__(self, message, path=()):
        self.path = tuple(path)
        where = "/".join(str(p) for p in self.path) or "<root>"
        super().__init__(f"{where}: {message}")


class VersionError(DtcalcError):
    pass
