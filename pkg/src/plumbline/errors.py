"""Exception hierarchy shared by all plumbline modules."""


class PlumblineError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(PlumblineError):
    """An argument lies outside the mathematical domain of an operation."""


class ParamOutOfRange(DomainError):
    """A family parameter violates its required bounds."""


# -- arrangement validation ------------------------------------------------

class ArrangementError(PlumblineError):
    pass


class PairAxiomViolation(ArrangementError):
    """Some pair of lines lies in zero points, or in more than one."""

    def __init__(self, pair, count):
        self.pair = tuple(pair)
        self.count = count
        super().__init__(f"pair {self.pair} lies in {count} points (expected 1)")


class DuplicatePoint(ArrangementError):
    pass


class DegeneratePoint(ArrangementError):
    """A point record contains fewer than two lines."""


class DuplicateLine(ArrangementError):
    pass


# -- continued fractions ---------------------------------------------------

class InconsistentRecursion(PlumblineError):
    """The string multiplicity recursion has no positive integer solution.

    This signals an implementation bug: the recursion is solvable for every
    valid (d, n) input.
    """


# -- plumbing graphs -------------------------------------------------------

class PlumbingError(PlumblineError):
    pass


class MissingMultiplicities(PlumbingError):
    pass


class FormatError(PlumblineError):
    """A text file does not conform to one of the documented formats."""

    def __init__(self, message, line_no=None):
        self.line_no = line_no
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)


# -- calculus --------------------------------------------------------------

class MoveNotApplicable(PlumblineError):
    """A rewriting move's applicability predicate fails on the given graph."""


class NonTerminating(PlumblineError):
    """Normalization exceeded its move budget.

    Raised when the input lies outside the class of graphs the restricted
    move set can reduce (e.g. graphs needing non-orientable moves).
    """


# -- reconstruction --------------------------------------------------------

class ReconstructionError(PlumblineError):
    pass


class NotNormalForm(ReconstructionError):
    pass


class NotBipartite(ReconstructionError):
    pass


class NoValidBipartition(ReconstructionError):
    pass


class AmbiguousBipartition(ReconstructionError):
    """Two bipartitions satisfy all reconstruction conditions.

    Never expected for true arrangement boundaries; surfaced rather than
    silently resolved.
    """


class Unrecognized(ReconstructionError):
    """A normal-form graph matches no boundary class of any arrangement."""
