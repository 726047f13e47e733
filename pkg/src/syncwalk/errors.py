"""Exception hierarchy.

Every error carries an ``exit_code`` so the CLI can map failures onto its
documented exit statuses without a lookup table.
"""

from __future__ import annotations


class SyncWalkError(Exception):
    exit_code = 1


class ValidationError(SyncWalkError, ValueError):
    """Malformed input: bad numbers, bad shapes, broken invariants."""

    exit_code = 2


class NegativeEntry(ValidationError):
    def __init__(self, row: int, col: int, value) -> None:
        self.row, self.col, self.value = row, col, value
        super().__init__(f"negative entry {value} at row {row + 1}, column {col + 1}")


class RowSumNotOne(ValidationError):
    def __init__(self, row: int, total) -> None:
        self.row, self.total = row, total
        super().__init__(f"row {row + 1} sums to {total}, not 1")


class EmptyStateSpace(ValidationError):
    def __init__(self) -> None:
        super().__init__("state space is empty")


class DuplicateLabel(ValidationError):
    def __init__(self, label: str) -> None:
        self.label = label
        super().__init__(f"duplicate state label {label!r}")


class SizeMismatch(ValidationError):
    pass


class InvalidMatrix(ValidationError):
    pass


class NotAMappingLaw(ValidationError):
    pass


class InvalidColoring(ValidationError):
    pass


class PreconditionError(SyncWalkError):
    """Input is well formed but lacks a structural property (ergodicity...)."""

    exit_code = 3


class NotIrreducible(PreconditionError):
    pass


class NotErgodic(PreconditionError):
    pass


class NotPrimitive(PreconditionError):
    pass


class NoCycleThroughState(PreconditionError):
    pass


class DeterministicChain(PreconditionError):
    pass


class TargetOutOfRange(PreconditionError):
    pass


class NotSync(SyncWalkError):
    exit_code = 4


class ResourceLimit(SyncWalkError):
    exit_code = 5


class SupportTooLarge(ResourceLimit):
    pass


class StateSpaceTooLarge(ResourceLimit):
    pass


class SearchSpaceTooLarge(ResourceLimit):
    pass


class DepthCap(ResourceLimit):
    pass


class ToleranceNotReached(ResourceLimit):
    pass
