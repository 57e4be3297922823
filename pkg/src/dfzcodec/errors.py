"""Typed errors. Every failure the codec can report derives from DfzError."""


class DfzError(Exception):
    """Base class for all codec errors."""


# point-cloud input / output
class EmptyCloud(DfzError):
    def __init__(self, msg="point cloud has no points"):
        super().__init__(msg)


class MalformedLine(DfzError):
    def __init__(self, line_no, detail=""):
        self.line_no = line_no
        msg = f"malformed data on line {line_no}"
        super().__init__(f"{msg}: {detail}" if detail else msg)


class BadMagic(DfzError):
    pass


class UnsupportedFormat(DfzError):
    pass


class MalformedHeader(DfzError):
    pass


class MissingProperty(DfzError):
    def __init__(self, name):
        self.name = name
        super().__init__(f"missing vertex property {name!r}")


class TruncatedBody(DfzError):
    pass


# elevation grid / spectrum
class NonPositiveResolution(DfzError):
    pass


class EmptyGrid(DfzError):
    pass


class InvalidCutoff(DfzError):
    def __init__(self, value):
        self.value = value
        super().__init__(f"cutoff must be in [0,1], got {value!r}")


# container
class UnsupportedVersion(DfzError):
    pass


class Truncated(DfzError):
    pass


class InvalidHeader(DfzError):
    pass


class InconsistentRuns(DfzError):
    pass


class CoefficientCountMismatch(DfzError):
    pass


# metrics / synthesis
class GridMismatch(DfzError):
    pass


class NoOccupiedCells(DfzError):
    pass


class ZeroPoints(DfzError):
    pass


class InvalidSpec(DfzError):
    pass


class NonFiniteCoordinate(DfzError):
    pass
