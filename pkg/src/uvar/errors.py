"""Exception hierarchy.

Everything a caller can trigger with bad input derives from
:class:`ValidationError`; :class:`InvariantViolation` signals a bug.
"""


class UvarError(Exception):
    """Base class for all package errors."""


class ValidationError(UvarError, ValueError):
    """Input rejected before any computation."""


class EmptyInput(ValidationError):
    def __init__(self, what: str = "input"):
        super().__init__(f"{what} is empty")


class NonFiniteValue(ValidationError):
    def __init__(self, label: str, detail: str = ""):
        self.label = label
        msg = f"non-finite value for {label!r}"
        super().__init__(f"{msg}: {detail}" if detail else msg)


class DuplicateLabel(ValidationError):
    def __init__(self, label: str):
        self.label = label
        super().__init__(f"duplicate label {label!r}")


class GroupTooSmall(ValidationError):
    def __init__(self, label: str, n: int):
        self.label = label
        self.n = n
        super().__init__(f"group {label!r} has {n} observation(s); need at least 2")


class NegativeVariance(ValidationError):
    def __init__(self, label: str, variance: float):
        self.label = label
        self.variance = variance
        super().__init__(
            f"entry {label!r} has negative variance {variance!r} "
            "(second_moment < mean**2); use the qp solver for arbitrary kappa"
        )


class IndexOutOfRange(ValidationError, IndexError):
    pass


class KTooLargeForGrid(ValidationError):
    def __init__(self, k: int, limit: int):
        self.k = k
        self.limit = limit
        super().__init__(f"grid search refused for K={k} > max_k_grid={limit}")


class ParseError(ValidationError):
    def __init__(self, line: int, detail: str):
        self.line = line
        super().__init__(f"line {line}: {detail}")


class InvariantViolation(UvarError, RuntimeError):
    """A guarantee of the closed form failed to hold numerically."""
