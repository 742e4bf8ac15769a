"""Exception hierarchy shared across the package."""

from __future__ import annotations


class TotalColorError(Exception):
    """Base class for every error raised by this package."""


class GraphFormatError(TotalColorError, ValueError):
    """Malformed serialized graph; ``offset`` is the byte position of the fault."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte {offset})")
        self.offset = offset


class PreconditionError(TotalColorError, ValueError):
    """An operation was called on input outside its contract.

    ``clause`` names the violated condition so callers and tests can match on it.
    """

    def __init__(self, clause: str, detail: str = ""):
        super().__init__(f"{clause}: {detail}" if detail else clause)
        self.clause = clause
        self.detail = detail


class OutOfScopeError(PreconditionError):
    """Input lies in a regime this construction does not cover (for example Δ ≥ 3n/4)."""


class ConstructionError(TotalColorError, RuntimeError):
    """A constructive step exhausted its budget without producing a certified object."""

    def __init__(self, stage: str, detail: str = ""):
        super().__init__(f"{stage}: {detail}" if detail else stage)
        self.stage = stage
        self.detail = detail


class AssertionFailure(ConstructionError):
    """A checked inequality of the construction did not hold.

    Both sides of the inequality are kept so reports can show them.
    """

    def __init__(self, name: str, lhs, rhs, relation: str):
        super().__init__(name, f"{lhs!r} {relation} {rhs!r} is false")
        self.name = name
        self.lhs = lhs
        self.rhs = rhs
        self.relation = relation
