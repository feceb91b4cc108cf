"""Exception hierarchy shared by every module of the package."""


class ItsError(ValueError):
    """Base class for all domain errors raised by itsrobust."""


class InvalidSeries(ItsError):
    pass


class EmptySegment(ItsError):
    pass


class EmptyInput(ItsError):
    pass


class InvalidProbability(ItsError):
    pass


class SingularDesign(ItsError):
    pass


class TooFewObservations(ItsError):
    pass


class DegenerateVariance(ItsError):
    pass


class InvalidDf(ItsError):
    pass


class TooFewPoints(ItsError):
    pass


class EmptySlopeSample(ItsError):
    pass


class InsufficientReplicates(ItsError):
    pass


class InvalidAlpha(ItsError):
    pass


class DegenerateResiduals(ItsError):
    pass


class InvalidLag(ItsError):
    pass


class InvalidConfig(ItsError):
    pass


class MalformedHeader(ItsError):
    pass


class NonNumericCell(ItsError):
    def __init__(self, row: int, column: str, cell: str):
        super().__init__(f"row {row}: column {column!r} is not numeric: {cell!r}")
        self.row = row
        self.column = column


class DuplicateTime(ItsError):
    def __init__(self, group: str, time: float):
        super().__init__(f"duplicate time {time:g} in group {group!r}")
        self.group = group
        self.time = time


class NonPositiveValue(ItsError):
    def __init__(self, group: str, time: float, value: float):
        super().__init__(
            f"cannot take log of non-positive value {value!r} at time {time:g}"
            + (f" in group {group!r}" if group else "")
        )
        self.group = group
        self.time = time


class EmptyCell(ItsError):
    def __init__(self, row: int, column: str):
        super().__init__(f"row {row}: column {column!r} is empty")
        self.row = row
        self.column = column
