"""Exception hierarchy shared by every module."""

from __future__ import annotations


class TdlError(Exception):
    """Base class for all errors raised by the package."""


class CycleError(TdlError):
    """The reflexive-transitive closure of a relation is not antisymmetric."""


class NotLattice(TdlError):
    def __init__(self, a: int, b: int, missing: str):
        self.pair = (a, b)
        self.missing = missing
        super().__init__(f"elements {a} and {b} have no {missing}")


class NotDistributive(TdlError):
    def __init__(self, triple: tuple[int, int, int]):
        self.triple = triple
        x, y, z = triple
        super().__init__(f"distributivity fails at x={x}, y={y}, z={z}")


class NoBounds(TdlError):
    """The poset lacks a bottom or a top element."""


class SizeLimit(TdlError):
    """An enumeration bound would be exceeded."""


class EmptyGenerator(TdlError):
    """A filter or ideal was requested from an empty generating set."""


class NoAdjoint(TdlError):
    def __init__(self, x: int):
        self.element = x
        super().__init__(f"no left adjoint value at element {x}")


class AxiomViolation(TdlError):
    """Operator tables fail the tense axioms; ``report`` lists every failure."""

    def __init__(self, report):
        self.report = report
        super().__init__(report.summary())


class DeMorganLawViolation(TdlError):
    pass


class NotHomomorphism(TdlError):
    pass


class NotTpsFunction(TdlError):
    pass


class NotTpsSet(TdlError):
    pass


class NotTenseFilter(TdlError):
    pass


class NotTenseIdeal(TdlError):
    pass


class MissingConnective(TdlError):
    pass


class UnsupportedConnective(TdlError):
    pass


class FormulaSyntaxError(TdlError):
    def __init__(self, message: str, position: int, text: str = ""):
        self.position = position
        self.text = text
        super().__init__(f"{message} at position {position}")


class RuleMismatch(TdlError):
    def __init__(self, node, reason: str):
        self.node = node
        self.reason = reason
        label = getattr(node, "label", None) or getattr(node, "rule", "?")
        super().__init__(f"node {label}: {reason}")


class DocumentError(TdlError):
    """An input document is malformed or fails its schema."""
