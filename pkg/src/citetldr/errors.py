"""Exception types shared across the pipeline.

Everything derived from :class:`DataError` is a problem with the inputs and
maps to exit code 2 in the CLI; anything else escaping a command is treated
as an internal error.
"""


class DataError(ValueError):
    """Base class for errors caused by bad or unusable input data."""


class MalformedRecord(DataError):
    def __init__(self, message, line_no=None):
        self.line_no = line_no
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)


class SpanOutOfBounds(DataError):
    pass


class EmptyAbstract(DataError):
    pass


class EmptyReference(DataError):
    pass


class EmptyInput(DataError):
    pass


class SchemaViolation(DataError):
    pass


class MissingPrediction(DataError):
    def __init__(self, example_id):
        self.example_id = example_id
        super().__init__(f"no prediction for reference id {example_id!r}")


class EmptyReferenceSet(DataError):
    pass


class KTooLarge(DataError):
    pass
