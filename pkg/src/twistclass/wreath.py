"""Wreath-recursion evaluation over the binary alphabet X = {0, 1}.

Multiplication follows the two rules
``<g0,g1>.<h0,h1> = <g0 h0, g1 h1>`` and ``s.<g0,g1> = <g1,g0>.s``;
letter 0 is always the first coordinate.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .labels import AlphabetMismatch
from .words import Alphabet, Endo, GenWord, Letter


@dataclass(frozen=True)
class WreathElem:
    """Pair of coordinate words plus an activity bit (the swap sigma)."""

    c0: GenWord
    c1: GenWord
    active: bool = False

    def __post_init__(self):
        if self.c0.alphabet != self.c1.alphabet:
            raise AlphabetMismatch("coordinates over different alphabets")

    @classmethod
    def identity(cls, alphabet: Alphabet) -> "WreathElem":
        one = alphabet.identity()
        return cls(one, one, False)

    @classmethod
    def sigma(cls, alphabet: Alphabet) -> "WreathElem":
        one = alphabet.identity()
        return cls(one, one, True)

    def coord(self, x: int) -> GenWord:
        return self.c0 if x == 0 else self.c1

    def __mul__(self, other: "WreathElem") -> "WreathElem":
        if self.active:
            return WreathElem(
                self.c0 * other.c1, self.c1 * other.c0, not other.active
            )
        return WreathElem(self.c0 * other.c0, self.c1 * other.c1, other.active)

    def __invert__(self) -> "WreathElem":
        if self.active:
            return WreathElem(~self.c1, ~self.c0, True)
        return WreathElem(~self.c0, ~self.c1, False)

    @property
    def is_identity(self) -> bool:
        return not self.active and self.c0.is_identity and self.c1.is_identity

    def __str__(self) -> str:
        return f"<{self.c0},{self.c1}>" + ("s" if self.active else "")


@dataclass(frozen=True)
class Recursion:
    """Finite table generator -> WreathElem, extended homomorphically.

    ``adding_machine`` designates a word mapping to <1, itself>.sigma when the
    recursion has one; it is validated at construction.
    """

    alphabet: Alphabet
    table: tuple[tuple[str, WreathElem], ...]
    adding_machine: GenWord | None = None

    def __post_init__(self):
        names = [n for n, _ in self.table]
        if names != list(self.alphabet.names):
            raise ValueError(
                f"table must list every generator once, in order: {names}"
            )
        for _, elem in self.table:
            if elem.c0.alphabet != self.alphabet:
                raise AlphabetMismatch("table entries over a different alphabet")
        if self.adding_machine is not None:
            img = phi_apply(self, self.adding_machine)
            want = WreathElem(
                self.alphabet.identity(), self.adding_machine, True
            )
            if img != want:
                raise ValueError(
                    f"adding machine {self.adding_machine} maps to {img}, "
                    f"expected {want}"
                )

    @classmethod
    def make(
        cls,
        alphabet: Alphabet,
        table: dict[str, WreathElem],
        adding_machine: GenWord | None = None,
    ) -> "Recursion":
        return cls(
            alphabet,
            tuple((n, table[n]) for n in alphabet.names),
            adding_machine,
        )

    def entry(self, name: str) -> WreathElem:
        for n, elem in self.table:
            if n == name:
                return elem
        raise KeyError(f"{name!r} absent from recursion table")

    def _letter_table(self) -> dict[Letter, tuple[tuple, tuple, bool]]:
        return _letter_table(self)


@lru_cache(maxsize=128)
def _letter_table(rec: "Recursion") -> dict[Letter, tuple[tuple, tuple, bool]]:
    # raw-letter form of each generator image and its inverse, for the
    # phi_apply hot loop
    out: dict[Letter, tuple[tuple, tuple, bool]] = {}
    for name, elem in rec.table:
        out[(name, 1)] = (elem.c0.letters, elem.c1.letters, elem.active)
        inv = ~elem
        out[(name, -1)] = (inv.c0.letters, inv.c1.letters, inv.active)
    return out


def _append_reduced(acc: list, letters: tuple) -> None:
    for letter in letters:
        if acc and acc[-1][0] == letter[0] and acc[-1][1] == -letter[1]:
            acc.pop()
        else:
            acc.append(letter)


def phi_apply(rec: Recursion, w: GenWord) -> WreathElem:
    """Image of ``w`` under the homomorphic extension of the table."""
    if w.alphabet != rec.alphabet:
        raise AlphabetMismatch("word is over a different alphabet")
    table = rec._letter_table()
    c0: list = []
    c1: list = []
    active = False
    for letter in w.letters:
        h0, h1, ha = table[letter]
        if active:
            _append_reduced(c0, h1)
            _append_reduced(c1, h0)
        else:
            _append_reduced(c0, h0)
            _append_reduced(c1, h1)
        active ^= ha
    return WreathElem(
        GenWord(rec.alphabet, tuple(c0)), GenWord(rec.alphabet, tuple(c1)), active
    )


def restrict(rec: Recursion, w: GenWord, v: str) -> GenWord:
    """Restriction w|_v at the vertex ``v`` (a word over '0'/'1')."""
    cur = w
    for ch in v:
        cur = phi_apply(rec, cur).coord(_bit(ch))
    return cur


def act(rec: Recursion, w: GenWord, v: str) -> str:
    """Image of the vertex ``v`` under the tree automorphism defined by ``w``."""
    out = []
    cur = w
    for ch in v:
        x = _bit(ch)
        elem = phi_apply(rec, cur)
        out.append(str(1 - x if elem.active else x))
        cur = elem.coord(x)
    return "".join(out)


def _bit(ch: str) -> int:
    if ch == "0":
        return 0
    if ch == "1":
        return 1
    raise ValueError(f"vertex letters must be '0' or '1', got {ch!r}")


def twist_recursion(base: Recursion, e_inv: Endo) -> Recursion:
    """Diagonal twist: every table entry gets ``e_inv`` applied to both
    coordinates.

    ``e_inv`` is the already-inverted twist action; invertibility is the
    caller's responsibility and is not checked here.
    """
    table = {
        name: WreathElem(e_inv(elem.c0), e_inv(elem.c1), elem.active)
        for name, elem in base.table
    }
    am = base.adding_machine
    if am is not None and e_inv(am) != am:
        am = None
    return Recursion.make(base.alphabet, table, am)


def substitute_recursion(base: Recursion, e: Endo) -> Recursion:
    """Recursion whose table sends each generator g to Phi_base(e(g)).

    This is the post-composition companion of :func:`twist_recursion`: it
    twists the argument instead of the coordinates.
    """
    table = {
        name: phi_apply(base, e(base.alphabet.gen(name)))
        for name in base.alphabet.names
    }
    am = base.adding_machine
    if am is not None and e(am) != am:
        am = None
    return Recursion.make(base.alphabet, table, am)
