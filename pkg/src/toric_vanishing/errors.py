"""Exception hierarchy shared by all modules."""


class ToricError(Exception):
    """Base class for errors raised by this package."""


class InputError(ToricError, ValueError):
    """Malformed or inconsistent input data."""


class UnsupportedError(ToricError):
    """Input lies outside the documented size or shape limits."""


class UnboundedPolyhedronError(ToricError):
    """A polyhedron that had to be bounded is not."""

    def __init__(self, message="unbounded polyhedron"):
        super().__init__(message)


class NotCartierError(ToricError):
    """A divisor fails to be Cartier on some maximal cone."""

    def __init__(self, cone_index, solution):
        self.cone_index = cone_index
        self.solution = solution
        super().__init__(f"not Cartier on cone {cone_index}: local data {solution}")


class NotQCartierError(NotCartierError):
    """No rational Cartier data exists on some maximal cone."""

    def __init__(self, cone_index):
        super().__init__(cone_index, None)
        self.args = (f"not Q-Cartier on cone {cone_index}",)


class HypothesisError(ToricError):
    """A theorem's hypothesis does not hold for the given instance."""


class VerificationError(ToricError):
    """An internal cross-check between two computations disagreed."""
