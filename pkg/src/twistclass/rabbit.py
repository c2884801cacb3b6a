"""The period-3 quadratic family: rabbit/corabbit/airplane recursions, the
mapping-class iterator, and the twist-power classifiers."""

from __future__ import annotations

from .labels import AIRPLANE, CORABBIT, RABBIT, ClassLabel, Diverged
from .words import Alphabet, Endo, GenWord
from .wreath import Recursion, WreathElem, phi_apply, twist_recursion

PI1 = Alphabet(("alpha", "beta", "gamma"))
MCG = Alphabet(("T", "S"))

_AL, _BE, _GA = PI1.gens()
_T, _S = MCG.gens()
_ONE = PI1.identity()

#: the image of the circle at infinity; every recursion in this family sends
#: it to <1, itself>.sigma
ADDING_MACHINE = _GA * _BE * _AL

VARIANTS = ("R", "A", "C")


def rabbit_recursion(variant: str = "R") -> Recursion:
    """Built-in recursion for one of the three period-3 polynomials."""
    if variant == "R":
        table = {
            "alpha": WreathElem(~_AL * ~_BE, _GA * _BE * _AL, True),
            "beta": WreathElem(_AL, _ONE),
            "gamma": WreathElem(_BE, _ONE),
        }
    elif variant == "A":
        table = {
            "alpha": WreathElem(~_AL, _GA * _AL, True),
            "beta": WreathElem(_AL, _ONE),
            "gamma": WreathElem(_ONE, _BE.conjugate(~_GA)),
        }
    elif variant == "C":
        table = {
            "alpha": WreathElem(~_AL * ~_BE, _GA * _BE * _AL, True),
            "beta": WreathElem(_AL.conjugate(_BE * _AL), _ONE),
            "gamma": WreathElem(_BE.conjugate(_AL), _ONE),
        }
    else:
        raise ValueError(f"variant must be one of {VARIANTS}, got {variant!r}")
    return Recursion.make(PI1, table, ADDING_MACHINE)


def variant_label(variant: str) -> ClassLabel:
    return {"R": RABBIT, "A": AIRPLANE, "C": CORABBIT}[variant]


# Dehn twist actions on the fundamental group.  T twists about the curve
# around the first two punctures, S about the last two.

def t_action() -> Endo:
    return Endo.make(PI1, {
        "alpha": _AL.conjugate(_BE * _AL),
        "beta": _BE.conjugate(_AL),
        "gamma": _GA,
    })


def t_inverse_action() -> Endo:
    return Endo.make(PI1, {
        "alpha": _AL.conjugate(~_BE),
        "beta": _BE.conjugate(~_AL * ~_BE),
        "gamma": _GA,
    })


def s_action() -> Endo:
    return Endo.make(PI1, {
        "alpha": _AL,
        "beta": _BE.conjugate(_GA * _BE),
        "gamma": _GA.conjugate(_BE),
    })


def s_inverse_action() -> Endo:
    return Endo.make(PI1, {
        "alpha": _AL,
        "beta": _BE.conjugate(~_GA),
        "gamma": _GA.conjugate(~_BE * ~_GA),
    })


_LETTER_ACTIONS = {
    ("T", 1): t_action,
    ("T", -1): t_inverse_action,
    ("S", 1): s_action,
    ("S", -1): s_inverse_action,
}


def mcg_word_action(w: GenWord) -> Endo:
    """Action of a mapping-class word on the fundamental group, letters
    applied left to right."""
    if w.alphabet != MCG:
        raise ValueError("mcg_word_action expects a word over the T,S alphabet")
    out = Endo.identity(PI1)
    for letter in w.letters:
        out = out.then(_LETTER_ACTIONS[letter]())
    return out


def twisted_rabbit_recursion(m: int) -> Recursion:
    """Recursion of the rabbit pre-twisted by the m-th power of T.

    The table is the rabbit table with the inverse twist action applied to
    both coordinates, exponent expanded symbolically.
    """
    e = (t_inverse_action() if m >= 0 else t_action()).iterate(abs(m))
    return twist_recursion(rabbit_recursion("R"), e)


def twisted_mcg_recursion(g: GenWord) -> Recursion:
    """Recursion of the rabbit pre-twisted by an arbitrary mapping-class
    word: the diagonal twist by the inverse word's action (associative in
    ``g``, since the diagonal action composes cleanly)."""
    return twist_recursion(rabbit_recursion("R"), mcg_word_action(~g))


def mcg_recursion() -> Recursion:
    """Wreath recursion of the mapping-class group carrying the iterator."""
    one = MCG.identity()
    return Recursion.make(MCG, {
        "T": WreathElem(one, ~_S * ~_T, True),
        "S": WreathElem(_T, one),
    })


_MCG_REC = mcg_recursion()


def psi_bar(w: GenWord) -> GenWord:
    """One classification step on the mapping-class group.

    Reads the first coordinate of the recursion image, with a T correction
    when the element is active (i.e. outside the liftable subgroup).
    """
    elem = phi_apply(_MCG_REC, w)
    if elem.active:
        return _T * elem.c0
    return elem.c0


#: the corabbit attractor: the iterator 3-cycle through the inverse twist
CORABBIT_CYCLE = frozenset({~_T, _T * _T * _S, ~_S})


def classify_mcg(w: GenWord, max_iters: int = 1024) -> ClassLabel:
    """Label of the rabbit twisted by an arbitrary mapping-class word.

    Iterates :func:`psi_bar` until the orbit hits the identity (rabbit), T
    (airplane) or the known 3-cycle (corabbit); any other revisited value
    means a bug, reported as Diverged.
    """
    if w.alphabet != MCG:
        raise ValueError("classify_mcg expects a word over the T,S alphabet")
    seen: set[GenWord] = set()
    cur = w
    for _ in range(max_iters):
        if cur.is_identity:
            return RABBIT
        if cur == _T:
            return AIRPLANE
        if cur in CORABBIT_CYCLE:
            return CORABBIT
        if cur in seen:
            raise Diverged(f"unexpected iterator cycle through {cur}")
        seen.add(cur)
        cur = psi_bar(cur)
    raise Diverged(f"no terminal value within {max_iters} iterations")


def four_adic_digits(m: int) -> list[int]:
    """Base-4 digits of m, least significant first, stopping once the
    remainder is the constant tail (0 for m >= 0, -1 for m < 0)."""
    digits = []
    while True:
        digits.append(m % 4)
        m //= 4
        if m in (0, -1):
            return digits


def classify_twist_power(m: int) -> ClassLabel:
    """Arithmetic label of the rabbit twisted by T^m, via base-4 digits."""
    if m == 0:
        return RABBIT
    if any(d in (1, 2) for d in four_adic_digits(m)):
        return AIRPLANE
    return RABBIT if m >= 0 else CORABBIT


def classify_st_power(m: int, max_iters: int = 1024) -> ClassLabel:
    """Label of the rabbit twisted by (ST)^m, by iteration."""
    return classify_mcg((_S * _T) ** m, max_iters)
