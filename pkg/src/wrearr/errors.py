"""Exception types shared across the package."""


class WrearrError(Exception):
    """Base class for all library errors."""


class ValidationError(WrearrError):
    """An input violates a structural invariant (CLI exit code 3)."""


class ParseError(WrearrError):
    """Malformed input file or option string (CLI exit code 2)."""


class EigenSolverError(WrearrError):
    """The Jacobi iteration failed to converge on one block."""

    def __init__(self, block_index, message):
        super().__init__(f"block {block_index}: {message}")
        self.block_index = block_index


class InfiniteValueError(WrearrError):
    """Functional calculus produced an infinite value on the spectrum."""


class CrossRouteError(WrearrError):
    """Two supposedly equivalent computation routes disagreed."""
