import json
import random

import pytest

from conftest import random_word
from twistclass.labels import BoundExceeded
from twistclass.rabbit import (
    ADDING_MACHINE,
    MCG,
    PI1,
    mcg_recursion,
    rabbit_recursion,
    twisted_rabbit_recursion,
)
from twistclass.periodic2 import MODULI, moduli_i_recursion
from twistclass.preperiod2 import moduli_q_recursion
from twistclass.selfsim import (
    NotStateClosed,
    VirtualEndo,
    CosetAssignmentError,
    automata_distinct,
    homotopy_shift,
    is_kernel_element,
    is_trivial_action,
    moore_diagram,
    nucleus,
    recursion_from_virtual_endo,
    restriction_closure,
)
from twistclass.wreath import Recursion, WreathElem, phi_apply

T, S = MCG.gens()
A, B = MODULI.gens()


# --- closures -----------------------------------------------------------------

def test_closure_of_identity():
    rec = mcg_recursion()
    assert restriction_closure(rec, [MCG.identity()]) == {MCG.identity()}


def test_closure_of_t():
    rec = mcg_recursion()
    got = restriction_closure(rec, [T], 100)
    assert got == {T, MCG.identity(), ~S * ~T, S}


def test_closure_of_b_pinned():
    rec = moduli_i_recursion()
    got = restriction_closure(rec, [B], 100)
    assert got == {B, ~B * ~A, A * B, ~B}


def test_closure_bound():
    rec = moduli_i_recursion()
    with pytest.raises(BoundExceeded):
        restriction_closure(rec, [B], 2)


def test_closure_contracting_words_terminate():
    rec = rabbit_recursion("R")
    rng = random.Random(41)
    for _ in range(15):
        w = random_word(PI1, 12, rng)
        assert len(restriction_closure(rec, [w], 10000)) <= 10000


# --- word problem --------------------------------------------------------------

def test_trivial_action_examples():
    rec = moduli_i_recursion()
    assert is_trivial_action(rec, A * A)
    assert is_trivial_action(rec, (A * B) ** 4)
    assert not is_trivial_action(rec, B)
    assert not is_trivial_action(rec, B ** 2)
    assert not is_trivial_action(rec, B ** 3)


def test_fourth_twist_power_acts_trivially_but_is_no_kernel_element():
    # the action quotient has a twist of order four; the recursion-kernel
    # quotient does not
    rec = moduli_i_recursion()
    assert is_trivial_action(rec, B ** 4)
    assert not is_kernel_element(rec, B ** 4)
    assert not is_kernel_element(rec, B ** 8)
    assert is_kernel_element(rec, A * A)
    assert is_kernel_element(rec, (A * B) ** 4)


def test_trivial_action_inverse_agreement():
    rec = moduli_i_recursion()
    rng = random.Random(43)
    for _ in range(30):
        w = random_word(MODULI, rng.randrange(8), rng)
        assert is_trivial_action(rec, w) == is_trivial_action(rec, ~w)


def test_trivial_action_product_of_trivials():
    rec = moduli_i_recursion()
    trivials = [A * A, (A * B) ** 4, (B * A) ** 4, A ** -2]
    for u in trivials:
        for v in trivials:
            assert is_trivial_action(rec, u * v)


# --- nucleus -------------------------------------------------------------------

def test_mcg_nucleus_exact():
    rec = mcg_recursion()
    got = nucleus(rec, MCG.gens(), 100)
    assert got == {MCG.identity(), S, T, T * S, ~S, ~T, ~S * ~T}


def test_moduli_q_nucleus_exact():
    rec = moduli_q_recursion()
    got = nucleus(rec, MODULI.gens(), 100)
    expect = {MODULI.identity()}
    for w in (A, B, A * B, ~A * B):
        expect.add(w)
        expect.add(~w)
    assert got == expect


def test_gx_nucleus_not_contracting_within_bound():
    rec = moduli_i_recursion()
    with pytest.raises(BoundExceeded):
        nucleus(rec, MODULI.gens(), 1)
    with pytest.raises(BoundExceeded):
        nucleus(rec, MODULI.gens(), 60)


def test_nucleus_properties():
    for variant in ("R", "A", "C"):
        rec = rabbit_recursion(variant)
        n = nucleus(rec, PI1.gens(), 200)
        assert rec.alphabet.identity() in n
        assert {~w for w in n} == n
        for w in n:
            elem = phi_apply(rec, w)
            assert elem.c0 in n and elem.c1 in n


def test_rabbit_nucleus_sizes():
    sizes = {
        v: len(nucleus(rabbit_recursion(v), PI1.gens(), 200))
        for v in ("R", "A", "C")
    }
    assert sizes == {"R": 9, "A": 7, "C": 9}


# --- Moore diagrams ------------------------------------------------------------

def test_identity_diagram():
    rec = mcg_recursion()
    d = moore_diagram(rec, [MCG.identity()])
    assert d.size == 1
    assert d.next0 == (0,) and d.next1 == (0,)
    assert d.active == (False,)


def test_mcg_diagram_active_states():
    rec = mcg_recursion()
    d = moore_diagram(rec, nucleus(rec, MCG.gens(), 100))
    active = {d.states[i] for i in range(d.size) if d.active[i]}
    assert active == {T, ~T, T * S, ~S * ~T}


def test_moore_diagram_not_closed_error():
    rec = mcg_recursion()
    with pytest.raises(NotStateClosed) as err:
        moore_diagram(rec, [T], up_to_action=False)
    assert any(state == T for state, _, _ in err.value.violations)


def test_moore_serialization():
    rec = mcg_recursion()
    d = moore_diagram(rec, nucleus(rec, MCG.gens(), 100))
    dot = d.to_dot()
    assert "fillcolor=grey" in dot and "fillcolor=white" in dot
    assert 'label="0"' in dot and 'label="1"' in dot
    payload = json.loads(d.to_json())
    assert len(payload["states"]) == 7
    assert d.to_json() == moore_diagram(rec, nucleus(rec, MCG.gens(), 100)).to_json()


# --- automaton comparison --------------------------------------------------------

def diagram_of(variant):
    rec = rabbit_recursion(variant)
    return moore_diagram(rec, nucleus(rec, PI1.gens(), 200))


def test_automata_distinct_reflexively_false():
    d = diagram_of("R")
    assert not automata_distinct(d, d)


def test_automata_distinct_pairs():
    dr, da, dc = diagram_of("R"), diagram_of("A"), diagram_of("C")
    assert automata_distinct(dr, da)
    assert automata_distinct(dc, da)
    assert automata_distinct(dr, dc)
    assert automata_distinct(da, dr) and automata_distinct(da, dc)


def test_mirror_pair_only_merges_under_letter_swap():
    # complex-conjugate polynomials give mirror automata; the default
    # comparison must keep them apart
    dr, dc = diagram_of("R"), diagram_of("C")
    assert automata_distinct(dr, dc)
    assert not automata_distinct(dr, dc, allow_letter_swap=True)


# --- homotopy shift --------------------------------------------------------------

def test_homotopy_shift_equal_recursions():
    rec = rabbit_recursion("R")
    assert homotopy_shift(rec, rec, ADDING_MACHINE, 4) == 0


def test_homotopy_shift_twisted_vs_corabbit():
    assert (
        homotopy_shift(
            twisted_rabbit_recursion(-1), rabbit_recursion("C"), ADDING_MACHINE, 4
        )
        == 0
    )


def test_homotopy_shift_round_trip():
    rec_a = rabbit_recursion("R")
    table = {
        n: phi_apply(rec_a, PI1.gen(n).conjugate(~ADDING_MACHINE))
        for n in PI1.names
    }
    rec_b = Recursion.make(PI1, table)
    n_ab = homotopy_shift(rec_a, rec_b, ADDING_MACHINE, 4)
    n_ba = homotopy_shift(rec_b, rec_a, ADDING_MACHINE, 4)
    assert n_ba == 1
    assert n_ab == -n_ba


def test_homotopy_shift_absent():
    assert (
        homotopy_shift(rabbit_recursion("R"), rabbit_recursion("A"), ADDING_MACHINE, 4)
        is None
    )


# --- virtual endomorphism reconstruction -----------------------------------------

def mcg_virtual_endo():
    return VirtualEndo(
        alphabet=MCG,
        domain_gens=(T * T, S, S.conjugate(T)),
        images=(~S * ~T, T, MCG.identity()),
        coset_reps=(MCG.identity(), T),
        coset_of=lambda w: w.letter_count("T") & 1,
    )


def test_reconstruct_mcg_recursion():
    rec = recursion_from_virtual_endo(mcg_virtual_endo())
    assert rec.table == mcg_recursion().table
    assert homotopy_shift(rec, mcg_recursion(), T, 4) == 0


def test_reconstruct_moduli_i_recursion():
    ve = VirtualEndo(
        alphabet=MODULI,
        domain_gens=(A * A, B, B.conjugate(A)),
        images=(MODULI.identity(), ~B * ~A, B),
        coset_reps=(MODULI.identity(), A),
        coset_of=lambda w: w.letter_count("a") & 1,
    )
    assert recursion_from_virtual_endo(ve).table == moduli_i_recursion().table


def test_reconstruct_trivial_endo():
    ve = VirtualEndo(
        alphabet=MCG,
        domain_gens=(T * T, S, S.conjugate(T)),
        images=(MCG.identity(), MCG.identity(), MCG.identity()),
        coset_reps=(MCG.identity(), T),
        coset_of=lambda w: w.letter_count("T") & 1,
    )
    rec = recursion_from_virtual_endo(ve)
    assert rec.entry("S") == WreathElem(MCG.identity(), MCG.identity(), False)
    assert rec.entry("T").active


def test_reconstruct_with_h_words_shifts_by_inner():
    rec = recursion_from_virtual_endo(mcg_virtual_endo(), h_words=(MCG.identity(), T))
    base = mcg_recursion()
    # conjugating the coordinates moves the recursion but not its class:
    # a shift search against the base still succeeds at 0 with the same
    # activity pattern
    assert [e.active for _, e in rec.table] == [e.active for _, e in base.table]


def test_coset_inconsistency_detected():
    with pytest.raises(CosetAssignmentError):
        VirtualEndo(
            alphabet=MCG,
            domain_gens=(T * T,),
            images=(T,),
            coset_reps=(MCG.identity(), S),
            coset_of=lambda w: w.letter_count("T") & 1,
        )
