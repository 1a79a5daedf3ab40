"""Exception hierarchy shared by all qcdual modules."""

__all__ = [
    "QCDualError",
    "ModuliMismatch",
    "ModulusBelowTwo",
    "BudgetExceeded",
    "NotQuasiConvex",
    "InvalidParams",
    "NonMonotoneModuli",
    "NoIndexWithinLimit",
    "InsufficientSupport",
    "ZeroElement",
    "AllCandidatesSkipped",
    "InvariantViolation",
    "ParseError",
]


class QCDualError(Exception):
    """Base class for every error raised by qcdual."""


class ModuliMismatch(QCDualError):
    """Two values were built over different moduli sequences."""


class ModulusBelowTwo(QCDualError, ValueError):
    pass


class BudgetExceeded(QCDualError):
    """An exhaustive enumeration would exceed the configured budget."""

    def __init__(self, needed, budget, what="enumeration"):
        self.needed = needed
        self.budget = budget
        super().__init__(f"{what} needs {needed} items, budget is {budget}")


class NotQuasiConvex(QCDualError):
    def __init__(self, counterexample):
        self.counterexample = counterexample
        super().__init__(f"set is not quasi-convex; hull adds {counterexample}")


class InvalidParams(QCDualError, ValueError):
    pass


class NonMonotoneModuli(QCDualError, ValueError):
    pass


class NoIndexWithinLimit(QCDualError):
    pass


class InsufficientSupport(QCDualError):
    """The finite prefix of a character is too short for any witness case."""


class ZeroElement(QCDualError, ValueError):
    pass


class AllCandidatesSkipped(QCDualError):
    pass


class InvariantViolation(QCDualError, AssertionError):
    """An internal check that must hold by construction failed."""

    def __init__(self, message, trace=None):
        self.trace = trace
        super().__init__(message)


class ParseError(QCDualError, ValueError):
    def __init__(self, text, position, expected):
        self.text = text
        self.position = position
        self.expected = tuple(expected)
        pointer = " " * position + "^"
        super().__init__(
            f"at position {position}: expected {' | '.join(self.expected)}\n"
            f"  {text}\n  {pointer}"
        )
