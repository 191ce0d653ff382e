class InvalidInputError(ValueError):
    """Input data is malformed (non-finite, wrong shape, broken symmetry)."""


class InvalidParameterError(ValueError):
    """A tunable is outside its admissible range."""


class LoadError(Exception):
    """Base class for dataset loading failures.

    Carries the offending file and, when known, the 1-based line number.
    """

    def __init__(self, message, path=None, line=None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = f"{path}"
            if line is not None:
                where += f":{line}"
            where += ": "
        super().__init__(where + message)


class MissingViewError(LoadError):
    pass


class RaggedRowError(LoadError):
    pass


class NonNumericError(LoadError):
    pass


class RowCountMismatchError(LoadError):
    pass


class LabelLengthError(LoadError):
    pass
