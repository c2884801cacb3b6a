"""The preperiod-1 / period-2 family: recursions for the two rational maps
and the obstructed model map, the order-100 arithmetic classifier, and the
obstructed-index iterator."""

from __future__ import annotations

from dataclasses import dataclass

from .labels import (
    F_MINUS_I,
    FI,
    BoundExceeded,
    ClassLabel,
    Diverged,
    obstructed,
)
from .words import Alphabet, Endo, GenWord
from .wreath import Recursion, WreathElem, restrict, substitute_recursion
from .selfsim import is_kernel_element

# --- exact Gaussian-integer arithmetic ---------------------------------------


@dataclass(frozen=True)
class GaussInt:
    re: int
    im: int

    def __add__(self, other: "GaussInt") -> "GaussInt":
        return GaussInt(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "GaussInt") -> "GaussInt":
        return GaussInt(self.re - other.re, self.im - other.im)

    def __neg__(self) -> "GaussInt":
        return GaussInt(-self.re, -self.im)

    def __mul__(self, other: "GaussInt") -> "GaussInt":
        return GaussInt(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def conj(self) -> "GaussInt":
        return GaussInt(self.re, -self.im)

    def norm(self) -> int:
        return self.re * self.re + self.im * self.im

    def times_i_power(self, k: int) -> "GaussInt":
        k &= 3
        if k == 0:
            return self
        if k == 1:
            return GaussInt(-self.im, self.re)
        if k == 2:
            return -self
        return GaussInt(self.im, -self.re)

    def divisible_by(self, other: "GaussInt") -> bool:
        n = other.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero Gaussian integer")
        z = self * other.conj()
        return z.re % n == 0 and z.im % n == 0

    def __str__(self) -> str:
        return f"{self.re}{self.im:+}i"


GI_ZERO = GaussInt(0, 0)
GI_ONE = GaussInt(1, 0)
GI_I = GaussInt(0, 1)


@dataclass(frozen=True)
class AffineMap:
    """z -> i^k z + c with exact Gaussian-integer translation part."""

    k: int
    c: GaussInt

    def __post_init__(self):
        object.__setattr__(self, "k", self.k & 3)

    @classmethod
    def identity(cls) -> "AffineMap":
        return cls(0, GI_ZERO)

    def compose(self, other: "AffineMap") -> "AffineMap":
        """self o other: ``other`` is applied first."""
        return AffineMap((self.k + other.k) & 3, self.c + other.c.times_i_power(self.k))

    def inverse(self) -> "AffineMap":
        k = (-self.k) & 3
        return AffineMap(k, -self.c.times_i_power(k))

    def __str__(self) -> str:
        return f"z -> i^{self.k} z + ({self.c})"


@dataclass(frozen=True)
class QElem:
    """Image in the order-100 quotient: rotation mod 4, translation mod 5."""

    k: int
    cre: int
    cim: int


def q_reduce(m: AffineMap) -> QElem:
    return QElem(m.k & 3, m.c.re % 5, m.c.im % 5)


# --- alphabets and recursions -------------------------------------------------

PI1 = Alphabet(("alpha", "beta", "gamma"))
MODULI = Alphabet(("a", "b"))

_AL, _BE, _GA = PI1.gens()
_A, _B = MODULI.gens()
_ONE = PI1.identity()
_MONE = MODULI.identity()

ADDING_MACHINE = _GA * _BE * _AL


def fi_recursion() -> Recursion:
    """Recursion of the quadratic map with fixed ramification and period-2
    tail, normalized form z^2 + i."""
    table = {
        "alpha": WreathElem(~_AL * ~_BE, _BE * _AL, True),
        "beta": WreathElem(_AL, _GA),
        "gamma": WreathElem(_BE, _ONE),
    }
    return Recursion.make(PI1, table, ADDING_MACHINE)


def fstar_recursion() -> Recursion:
    """Recursion of the obstructed model map in this family."""
    table = {
        "alpha": WreathElem(~_AL, _AL, True),
        "beta": WreathElem(_AL, _GA),
        "gamma": WreathElem(_ONE, _GA * _BE * ~_GA),
    }
    return Recursion.make(PI1, table, ADDING_MACHINE)


def a_pi1_action() -> Endo:
    """Action of the twist ``a`` on the fundamental-group generators."""
    return Endo.make(PI1, {
        "alpha": _AL.conjugate(~_BE * _GA * _BE * _AL),
        "beta": _BE,
        "gamma": _GA.conjugate(_BE * _AL * ~_BE),
    })


def fstar_from_twist() -> Recursion:
    """The obstructed model rebuilt by post-twisting the rational recursion."""
    return substitute_recursion(fi_recursion(), a_pi1_action())


def moduli_i_recursion() -> Recursion:
    """Moduli-space recursion of this family on the two twist generators."""
    one = _MONE
    return Recursion.make(MODULI, {
        "a": WreathElem(one, one, True),
        "b": WreathElem(~_B * ~_A, _B),
    })


_MODULI_REC = moduli_i_recursion()


# --- the arithmetic classifier ------------------------------------------------

_PI_A = AffineMap(2, GI_ONE)            # z -> -z + 1
_PI_B = AffineMap(1, GaussInt(1, -1))   # z -> iz + 1 - i
_PI_IMAGES = {
    ("a", 1): _PI_A,
    ("a", -1): _PI_A.inverse(),
    ("b", 1): _PI_B,
    ("b", -1): _PI_B.inverse(),
}


def affine_image(w: GenWord) -> AffineMap:
    """Image of a twist word in the affine group, letters composed so that
    the rightmost letter acts first."""
    if w.alphabet != MODULI:
        raise ValueError("affine_image expects a word over the a,b alphabet")
    out = AffineMap.identity()
    for letter in w.letters:
        out = out.compose(_PI_IMAGES[letter])
    return out


def q_image(w: GenWord) -> QElem:
    """Image of a twist word in the order-100 quotient group."""
    return q_reduce(affine_image(w))


_C_SHIFT = GaussInt(-1, -1)  # c - i - 1, as a translation of c
_DIV_FI = GaussInt(2, 1)
_DIV_FMI = GaussInt(1, 2)


def classify_mod5(w: GenWord) -> ClassLabel:
    """Three-way label of the rational map post-twisted by ``w``.

    The obstructed label carries no index here; see
    :func:`obstructed_index` / :func:`classify_full` for that.
    """
    m = affine_image(w)
    shifted = m.c + _C_SHIFT
    if m.k == 0 and not shifted.divisible_by(_DIV_FI):
        return FI
    if m.k == 1 and not shifted.divisible_by(_DIV_FMI):
        return F_MINUS_I
    return obstructed()


# --- the obstructed-index iterator --------------------------------------------


def _a_parity(w: GenWord) -> int:
    return w.letter_count("a") & 1


def phi_bar(w: GenWord) -> GenWord:
    """One step of the obstructed-family iterator: the letter-1 coordinate
    map, with an ``a`` correction outside its domain."""
    if _a_parity(w) == 0:
        return restrict(_MODULI_REC, w, "1")
    return _A * restrict(_MODULI_REC, w * _A, "1")


def gx_trivial(w: GenWord, bound: int = 10000) -> bool:
    """Triviality of a twist word in the quotient by the iterated-recursion
    kernel, the group where obstructed twists are classified.

    Tree-action triviality is not enough here: the fourth twist power acts
    trivially on the tree but keeps non-trivial restriction words forever,
    and it is *not* trivial in this quotient (its order is infinite).
    """
    return is_kernel_element(_MODULI_REC, w, bound)


def gx_equal(w1: GenWord, w2: GenWord, bound: int = 10000) -> bool:
    """Equality of twist words in the obstructed-classification quotient."""
    return gx_trivial(w1 * ~w2, bound)


_B_POWERS_AFFINE = [AffineMap.identity()]
for _ in range(3):
    _B_POWERS_AFFINE.append(_B_POWERS_AFFINE[-1].compose(_PI_B))


def _candidate_indices(w: GenWord, k_max: int):
    """Indices n with pi(w) = pi(b)^n, in order 0, 1, -1, 2, -2, ..."""
    m = affine_image(w)
    for n in _scan_order(k_max):
        if _B_POWERS_AFFINE[n & 3] == m:
            yield n


def _scan_order(k_max: int):
    yield 0
    for k in range(1, k_max + 1):
        yield k
        yield -k


def _pure_b_exponent(w: GenWord) -> int | None:
    if all(n == "b" for n, _ in w.letters):
        return w.exponent_sum("b")
    return None


def obstructed_index(
    w: GenWord, k_max: int = 64, iter_max: int = 256, bound: int = 10000
) -> int:
    """Index n of the obstructed class: the iterator orbit of ``w`` meets
    the n-th twist power of b.

    The candidate scan is filtered through the exact affine group, which
    pins the residue of n mod 4.
    """
    cur = w
    for _ in range(iter_max):
        exp = _pure_b_exponent(cur)
        if exp is not None and abs(exp) > k_max:
            raise BoundExceeded(
                f"orbit landed on a b-power of exponent {exp}, beyond k_max={k_max}"
            )
        for n in _candidate_indices(cur, k_max):
            if gx_equal(cur, _B ** n, bound):
                return n
        cur = phi_bar(cur)
    raise Diverged(f"no b-power within {iter_max} iterator steps")


def classify_full(
    w: GenWord, k_max: int = 64, iter_max: int = 256, bound: int = 10000
) -> ClassLabel:
    """Complete classification: the three-way split, with the obstructed
    index attached by rewriting the input against the obstructed model."""
    label = classify_mod5(w)
    if label.kind != "obstructed":
        return label
    return obstructed(obstructed_index(~_A * w, k_max, iter_max, bound))
