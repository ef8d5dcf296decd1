"""Exception hierarchy shared across the pipeline."""


class BallotwireError(Exception):
    """Base class for every error raised by this package."""


# --- data / parsing ---------------------------------------------------------

class DataError(BallotwireError):
    """Invalid or inconsistent input data."""


class MissingColumnError(DataError):
    def __init__(self, column, path=None):
        self.column = column
        self.path = path
        super().__init__(f"missing column {column!r}" + (f" in {path}" if path else ""))


class EmptyFileError(DataError):
    pass


class EncodingError(DataError):
    def __init__(self, path, line_number):
        self.path = path
        self.line_number = line_number
        super().__init__(f"non-UTF-8 content in {path} at line {line_number}")


class ZeroFollowersError(DataError):
    def __init__(self, row_number):
        self.row_number = row_number
        super().__init__(f"candidate post with 0 followers at data row {row_number}")


class DuplicateDateError(DataError):
    pass


class ShareOutOfRangeError(DataError):
    pass


class MissingCandidateColumnError(MissingColumnError):
    pass


class EmptyCorpusError(DataError):
    pass


class MalformedLexiconRowError(DataError):
    def __init__(self, line_number, line):
        self.line_number = line_number
        self.line = line
        super().__init__(f"malformed lexicon row at line {line_number}: {line!r}")


class EmptyLexiconError(DataError):
    pass


class MissingFeatureDayError(DataError):
    def __init__(self, day):
        self.day = day
        super().__init__(f"no feature data for {day}")


class MissingLagAnchorError(DataError):
    pass


class MissingTargetError(DataError):
    def __init__(self, day):
        self.day = day
        super().__init__(f"no polling target for {day}")


class SpecMismatchError(DataError):
    pass


# --- numerics ---------------------------------------------------------------

class NumericalError(BallotwireError):
    """Failure inside a numerical routine."""


class SeriesTooShortError(NumericalError):
    pass


class ConstantSeriesError(NumericalError):
    pass


class DegenerateRegressionError(NumericalError):
    pass


class SingularSystemError(NumericalError):
    pass


class NotConvergedError(NumericalError):
    pass


class DegenerateKernelError(NumericalError):
    pass


class DimensionMismatchError(NumericalError):
    pass


class LengthMismatchError(NumericalError):
    pass


class ConstantReferenceError(NumericalError):
    pass


class TooLargeError(NumericalError):
    pass
