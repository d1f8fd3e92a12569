"""Exception types shared across the package."""


class PipelineError(Exception):
    """Base class for all hunpipe errors."""


class ParseError(PipelineError):
    """Malformed input file. Carries the 1-based line number when known."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class UnsupportedConstructError(ParseError):
    """Valid CoNLL-U construct that this pipeline deliberately rejects
    (multiword-token ranges, empty nodes)."""


class IncomparableInputError(PipelineError):
    """Gold and system documents do not share the same underlying text."""


class NonProjectiveTreeError(PipelineError):
    """The static arc-eager oracle cannot derive a non-projective tree."""


class BundleError(PipelineError):
    """Model bundle directory is missing, corrupt, or version-incompatible."""
