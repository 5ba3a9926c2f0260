"""Exception hierarchy shared by every solver and the command line."""

from __future__ import annotations


class ChordCutError(Exception):
    """Base class for all library errors."""


class InvalidPolygon(ChordCutError):
    """Raised when rings cannot form a valid polygon."""


class SegmentOutside(ChordCutError):
    """The segment to extend does not lie in the interior of the polygon."""


class DegenerateSegment(ChordCutError):
    """The segment to extend has zero length."""


class NotConvex(ChordCutError):
    """A convex polygon was required."""


class InvalidChord(ChordCutError):
    """A laser is not a maximal chord of the polygon.

    ``index`` names the first offending laser in the input sequence.
    """

    def __init__(self, index: int, reason: str):
        super().__init__(f"laser {index}: {reason}")
        self.index = index
        self.reason = reason


class ConvexInput(ChordCutError):
    """The polygon has no reflex vertex; use the convex solver instead."""


class EdgeNotFound(ChordCutError):
    """The requested parent edge is not incident to exactly one leaf."""


class Unreachable(ChordCutError):
    """Two boundary components are not connected inside a strip."""


class UncoverableElement(ChordCutError):
    """A set-cover element is not hit by any candidate chord."""


class UnsatisfiedAssignment(ChordCutError):
    """The supplied truth assignment does not satisfy the formula."""


class UnsupportedVariant(ChordCutError):
    """No algorithm is available for the requested problem variant."""


class DegenerateBudget(ChordCutError):
    """The laser budget is too small (or too large) for the grid search.

    The best state found so far is attached as ``solution``.
    """

    def __init__(self, message: str, solution=None):
        super().__init__(message)
        self.solution = solution


# Name used by the diameter solvers' contracts; same exception.
BudgetDegenerate = DegenerateBudget


class ParseError(ChordCutError):
    """Malformed input file, with location diagnostics."""

    def __init__(self, message: str, line: int | None = None, field: str | None = None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)
        self.line = line
        self.field = field
