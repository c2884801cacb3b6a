"""Classification labels and shared error types."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class ClassLabel:
    """Equivalence-class tag; ``index`` is only set for obstructed classes."""

    kind: str
    index: int | None = None

    def __str__(self) -> str:
        if self.index is None:
            return self.kind
        return f"{self.kind}({self.index})"


RABBIT = ClassLabel("rabbit")
CORABBIT = ClassLabel("corabbit")
AIRPLANE = ClassLabel("airplane")
FI = ClassLabel("f_i")
F_MINUS_I = ClassLabel("f_-i")
F14 = ClassLabel("f_1/4")
F34 = ClassLabel("f_3/4")
F512 = ClassLabel("f_5/12")


def obstructed(index: int | None = None) -> ClassLabel:
    return ClassLabel("obstructed", index)


class AlphabetMismatch(ValueError):
    """Operands belong to different generator alphabets."""


class WordParseError(ValueError):
    """Word text did not match the grammar; carries token position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class BoundExceeded(RuntimeError):
    """A bounded search grew past its state/work budget."""


class Diverged(RuntimeError):
    """An iteration failed to reach a terminal value within its step budget."""


class BranchAmbiguity(RuntimeError):
    """Preimage branches came too close to continue a lift reliably."""


class PunctureProximity(ValueError):
    """A moduli-space evaluation point sits on or next to a puncture."""
