"""Contraction machinery: restriction closures, nuclei, word problems,
Moore diagrams, automaton comparison, homotopy shifts, and reconstruction of
a recursion from a virtual endomorphism.

All searches are bounded; blowing the bound raises BoundExceeded, which is
evidence (not proof) that the recursion is not contracting on the given seeds.

Two word problems live here and they differ: triviality of the tree action
(no active restriction anywhere) and membership in the kernel of the
iterated recursion (all deep restrictions become the empty word).  The
second is strictly stronger; see is_kernel_element.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from typing import Callable, Iterable

from .labels import BoundExceeded
from .words import Alphabet, GenWord
from .wreath import Recursion, WreathElem, phi_apply

Node = tuple[GenWord, GenWord, bool]  # (child0, child1, active)


def _sorted_words(words: Iterable[GenWord]) -> list[GenWord]:
    return sorted(words, key=GenWord.sort_key)


def closure_graph(
    rec: Recursion, seeds: Iterable[GenWord], bound: int
) -> dict[GenWord, Node]:
    """Breadth-first restriction closure with transition data.

    Deterministic order: seeds sorted, then letter 0 before letter 1.
    """
    graph: dict[GenWord, Node] = {}
    queue = deque(_sorted_words(set(seeds)))
    pending = set(queue)
    while queue:
        w = queue.popleft()
        pending.discard(w)
        if w in graph:
            continue
        elem = phi_apply(rec, w)
        graph[w] = (elem.c0, elem.c1, elem.active)
        if len(graph) > bound:
            raise BoundExceeded(
                f"restriction closure grew past {bound} states"
            )
        for child in (elem.c0, elem.c1):
            if child not in graph and child not in pending:
                queue.append(child)
                pending.add(child)
    return graph


def restriction_closure(
    rec: Recursion, seeds: Iterable[GenWord], bound: int = 10000
) -> set[GenWord]:
    """Smallest set containing ``seeds`` and closed under restriction."""
    return set(closure_graph(rec, seeds, bound))


def _cyclic_core(w: GenWord) -> GenWord:
    """Cyclically reduced conjugate of ``w`` (matching end pairs stripped)."""
    letters = w.letters
    i, j = 0, len(letters)
    while j - i >= 2 and letters[i][0] == letters[j - 1][0] and (
        letters[i][1] == -letters[j - 1][1]
    ):
        i += 1
        j -= 1
    if i == 0:
        return w
    return GenWord(w.alphabet, letters[i:j])


def is_trivial_action(rec: Recursion, w: GenWord, bound: int = 10000) -> bool:
    """True iff ``w`` acts trivially on the whole binary tree.

    The action is trivial exactly when no element of the restriction closure
    is active.  Triviality is a conjugacy invariant, so the search walks
    cyclically reduced conjugates (which keeps it finite for recursions whose
    tables conjugate rather than shorten), and it short-circuits on the first
    active restriction.
    """
    seen: set[GenWord] = set()
    queue = deque([_cyclic_core(w)])
    while queue:
        cur = queue.popleft()
        if cur in seen:
            continue
        seen.add(cur)
        if len(seen) > bound:
            raise BoundExceeded(
                f"restriction closure grew past {bound} states while "
                f"deciding triviality of {cur}"
            )
        elem = phi_apply(rec, cur)
        if elem.active:
            return False
        for child in (elem.c0, elem.c1):
            child = _cyclic_core(child)
            if child not in seen:
                queue.append(child)
    return True


def is_kernel_element(rec: Recursion, w: GenWord, bound: int = 10000) -> bool:
    """True iff ``w`` dies under iterated restriction: at some depth every
    restriction is the empty word (``w`` is trivial in the quotient by the
    kernels of the iterated wreath recursion).

    This is strictly stronger than acting trivially on the tree: an element
    may fix every vertex yet keep non-trivial restriction words forever, and
    such an element is *not* a kernel element.
    """
    succ: dict[GenWord, tuple[GenWord, GenWord]] = {}
    queue = deque([_cyclic_core(w)])
    while queue:
        cur = queue.popleft()
        if cur in succ:
            continue
        if len(succ) >= bound:
            raise BoundExceeded(
                f"restriction closure grew past {bound} states while "
                f"deciding kernel membership of {cur}"
            )
        elem = phi_apply(rec, cur)
        if elem.active:
            return False
        children = (_cyclic_core(elem.c0), _cyclic_core(elem.c1))
        succ[cur] = children
        for child in children:
            if child not in succ:
                queue.append(child)
    # every deep enough restriction must be literally trivial: no cycle
    # through a non-identity word may be reachable
    return all(g.is_identity for g in _cyclic_nodes(succ))


def action_equal(
    rec: Recursion, u: GenWord, v: GenWord, bound: int = 10000
) -> bool:
    """Equality of the tree actions of two words."""
    return is_trivial_action(rec, u * ~v, bound)


class _ActionIndex:
    """Canonical representatives of words up to equal tree action.

    Candidate matches are pre-filtered by the activity portrait of the first
    few tree levels; only portrait collisions pay for a word-problem run.
    """

    PORTRAIT_DEPTH = 4

    def __init__(self, rec: Recursion, bound: int, identify: bool = True):
        self.rec = rec
        self.bound = bound
        self.identify = identify
        self.rep_of: dict[GenWord, GenWord] = {}
        self.by_portrait: dict[tuple, list[GenWord]] = {}

    def _portrait(self, w: GenWord) -> tuple:
        bits = []
        level = [w]
        for _ in range(self.PORTRAIT_DEPTH):
            nxt = []
            for g in level:
                elem = phi_apply(self.rec, g)
                bits.append(elem.active)
                nxt.append(elem.c0)
                nxt.append(elem.c1)
            level = nxt
        return tuple(bits)

    def canon(self, w: GenWord) -> GenWord:
        hit = self.rep_of.get(w)
        if hit is not None:
            return hit
        if not self.identify:
            self.rep_of[w] = w
            return w
        key = self._portrait(w)
        for cand in self.by_portrait.get(key, []):
            if is_trivial_action(self.rec, w * ~cand, self.bound):
                self.rep_of[w] = cand
                return cand
        self.rep_of[w] = w
        self.by_portrait.setdefault(key, []).append(w)
        return w


def _class_closure_graph(
    index: _ActionIndex, seed: GenWord, bound: int, budget: list[int]
) -> dict[GenWord, tuple[GenWord, GenWord]]:
    """Restriction closure over action classes, as a successor graph."""
    rec = index.rec
    graph: dict[GenWord, tuple[GenWord, GenWord]] = {}
    queue = deque([index.canon(seed)])
    while queue:
        w = queue.popleft()
        if w in graph:
            continue
        budget[0] -= 1
        if len(graph) > bound or budget[0] < 0:
            raise BoundExceeded(
                f"restriction closure grew past its budget at {len(graph)} states"
            )
        elem = phi_apply(rec, w)
        children = (index.canon(elem.c0), index.canon(elem.c1))
        graph[w] = children
        for child in children:
            if child not in graph:
                queue.append(child)
    return graph


def _eventual_range(
    index: _ActionIndex,
    w: GenWord,
    bound: int,
    budget: list[int],
    cache: dict[GenWord, frozenset[GenWord]],
) -> frozenset[GenWord]:
    """Class representatives appearing as restrictions of ``w`` at
    arbitrarily large depth: the nodes reachable from a directed cycle
    (self-loops included) of the restriction graph.
    """
    w = index.canon(w)
    if w in cache:
        return cache[w]
    succ = _class_closure_graph(index, w, bound, budget)
    cyclic = _cyclic_nodes(succ)
    reach: set[GenWord] = set()
    queue = deque(cyclic)
    while queue:
        g = queue.popleft()
        if g in reach:
            continue
        reach.add(g)
        for child in succ[g]:
            if child not in reach:
                queue.append(child)
    out = frozenset(reach)
    cache[w] = out
    return out


def _cyclic_nodes(succ: dict[GenWord, tuple[GenWord, GenWord]]) -> set[GenWord]:
    # Tarjan SCC, iterative; a node is cyclic if its SCC has size > 1 or it
    # carries a self-loop.
    index: dict[GenWord, int] = {}
    low: dict[GenWord, int] = {}
    on_stack: set[GenWord] = set()
    stack: list[GenWord] = []
    cyclic: set[GenWord] = set()
    counter = [0]

    for root in succ:
        if root in index:
            continue
        work = [(root, 0)]
        while work:
            node, ei = work.pop()
            if ei == 0:
                index[node] = low[node] = counter[0]
                counter[0] += 1
                stack.append(node)
                on_stack.add(node)
            children = succ[node]
            advanced = False
            for k in range(ei, 2):
                child = children[k]
                if child not in index:
                    work.append((node, k + 1))
                    work.append((child, 0))
                    advanced = True
                    break
                if child in on_stack:
                    low[node] = min(low[node], index[child])
            if advanced:
                continue
            if low[node] == index[node]:
                comp = []
                while True:
                    g = stack.pop()
                    on_stack.discard(g)
                    comp.append(g)
                    if g == node:
                        break
                if len(comp) > 1 or node in succ[node]:
                    cyclic.update(comp)
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
    return cyclic


def nucleus(
    rec: Recursion,
    gens: Iterable[GenWord],
    bound: int = 10000,
    up_to_action: bool = False,
) -> set[GenWord]:
    """Nucleus of the recursion: the least set containing 1 whose products
    with generators have all sufficiently deep restrictions back in the set.

    By default states are reduced words of the group carrying the recursion.
    With ``up_to_action`` words are identified when their tree actions agree,
    which computes the nucleus of the faithful quotient instead; recursions
    whose quotient has torsion are only contracting in that sense.  Raises
    BoundExceeded when the candidate set or the search work grows past the
    budget, which reports the recursion as not contracting within bound.
    """
    one = rec.alphabet.identity()
    index = _ActionIndex(rec, bound, identify=up_to_action)
    symmetric: set[GenWord] = set()
    for g in gens:
        symmetric.add(index.canon(g))
        symmetric.add(index.canon(~g))
    symmetric.discard(one)
    gen_list = _sorted_words(symmetric)

    cache: dict[GenWord, frozenset[GenWord]] = {}
    budget = [max(100 * bound, 200000)]
    result: set[GenWord] = {index.canon(one)}
    while True:
        extra: set[GenWord] = set()
        for g in _sorted_words(result):
            for s in [one] + gen_list:
                for h in _eventual_range(index, g * s, bound, budget, cache):
                    if h not in result and h not in extra:
                        extra.add(h)
                        if len(result) + len(extra) > bound:
                            raise BoundExceeded(
                                f"nucleus candidate set grew past {bound}: "
                                f"not contracting within bound"
                            )
        if not extra:
            return result
        result |= extra


# --- Moore diagrams ---------------------------------------------------------


@dataclass(frozen=True)
class MooreDiagram:
    """Automaton view of a state-closed set: states, transitions, activity."""

    states: tuple[GenWord, ...]
    next0: tuple[int, ...]
    next1: tuple[int, ...]
    active: tuple[bool, ...]

    @property
    def size(self) -> int:
        return len(self.states)

    def to_json(self) -> str:
        payload = [
            {
                "state": str(self.states[i]),
                "active": self.active[i],
                "next": [str(self.states[self.next0[i]]),
                         str(self.states[self.next1[i]])],
            }
            for i in range(self.size)
        ]
        return json.dumps({"states": payload}, indent=2, sort_keys=True)

    def to_dot(self) -> str:
        lines = ["digraph moore {", "  rankdir=LR;"]
        for i, s in enumerate(self.states):
            color = "grey" if self.active[i] else "white"
            lines.append(
                f'  "{s}" [style=filled, fillcolor={color}];'
            )
        for i, s in enumerate(self.states):
            lines.append(f'  "{s}" -> "{self.states[self.next0[i]]}" [label="0"];')
            lines.append(f'  "{s}" -> "{self.states[self.next1[i]]}" [label="1"];')
        lines.append("}")
        return "\n".join(lines)


class NotStateClosed(ValueError):
    def __init__(self, violations: list[tuple[GenWord, int, GenWord]]):
        self.violations = violations
        detail = "; ".join(
            f"{state}|_{letter} = {target}" for state, letter, target in violations
        )
        super().__init__(f"state set is not closed under restriction: {detail}")


def moore_diagram(
    rec: Recursion,
    states: Iterable[GenWord],
    up_to_action: bool = True,
    bound: int = 10000,
) -> MooreDiagram:
    """Build the Moore diagram of a state-closed set, or report violations.

    With ``up_to_action`` a restriction target counts as one of the given
    states when their tree actions agree.
    """
    ordered = _sorted_words(set(states))
    pos = {s: i for i, s in enumerate(ordered)}

    def resolve(target: GenWord) -> int | None:
        hit = pos.get(target)
        if hit is not None or not up_to_action:
            return hit
        for s in ordered:
            if action_equal(rec, target, s, bound):
                pos[target] = pos[s]
                return pos[s]
        return None

    next0, next1, active = [], [], []
    violations: list[tuple[GenWord, int, GenWord]] = []
    for s in ordered:
        elem = phi_apply(rec, s)
        row = []
        for letter, child in ((0, elem.c0), (1, elem.c1)):
            hit = resolve(child)
            if hit is None:
                violations.append((s, letter, child))
            else:
                row.append(hit)
        if not violations:
            next0.append(row[0])
            next1.append(row[1])
            active.append(elem.active)
    if violations:
        raise NotStateClosed(violations)
    return MooreDiagram(tuple(ordered), tuple(next0), tuple(next1), tuple(active))


def _refine_colors(d: MooreDiagram, swap: bool) -> tuple[int, ...]:
    n0 = d.next1 if swap else d.next0
    n1 = d.next0 if swap else d.next1
    colors = tuple(1 if a else 0 for a in d.active)
    while True:
        sig = [
            (colors[i], colors[n0[i]], colors[n1[i]]) for i in range(d.size)
        ]
        palette = {s: c for c, s in enumerate(sorted(set(sig)))}
        new = tuple(palette[s] for s in sig)
        if new == colors:
            return colors
        colors = new


def _isomorphic(d1: MooreDiagram, d2: MooreDiagram, swap: bool) -> bool:
    """Transition/activity-preserving bijection test, optionally with the two
    input letters of d2 swapped."""
    if d1.size != d2.size:
        return False
    c1 = _refine_colors(d1, False)
    c2 = _refine_colors(d2, swap)
    if sorted(c1) != sorted(c2):
        return False
    n0 = d2.next1 if swap else d2.next0
    n1 = d2.next0 if swap else d2.next1

    mapping: dict[int, int] = {}
    used: set[int] = set()

    def consistent() -> bool:
        for k, m in mapping.items():
            if d1.active[k] != d2.active[m]:
                return False
            for nxt1, nxt2 in ((d1.next0[k], n0[m]), (d1.next1[k], n1[m])):
                if nxt1 in mapping and mapping[nxt1] != nxt2:
                    return False
        return True

    def extend(i: int) -> bool:
        if i == d1.size:
            return True
        for j in range(d2.size):
            if j in used or c1[i] != c2[j]:
                continue
            mapping[i] = j
            used.add(j)
            if consistent() and extend(i + 1):
                return True
            del mapping[i]
            used.discard(j)
        return False

    return extend(0)


def automata_distinct(
    d1: MooreDiagram, d2: MooreDiagram, allow_letter_swap: bool = False
) -> bool:
    """True iff no state bijection preserves transitions and activity.

    ``allow_letter_swap`` additionally accepts mirror images (the two tree
    branches relabelled) as isomorphic.  It is off by default: mirror-related
    recursions arise from complex-conjugate polynomials, which are genuinely
    inequivalent, so the mirror must count as distinct.
    """
    if _isomorphic(d1, d2, False):
        return False
    if allow_letter_swap and _isomorphic(d1, d2, True):
        return False
    return True


# --- homotopy shift ---------------------------------------------------------


def homotopy_shift(
    rec_a: Recursion, rec_b: Recursion, a_word: GenWord, nmax: int
) -> int | None:
    """Smallest |n| <= nmax with Phi_A(g) = Phi_B(a^n g a^-n) for every
    generator g, scanning n = 0, 1, -1, 2, -2, ...; None when no shift fits.
    """
    if rec_a.alphabet != rec_b.alphabet:
        return None
    gens = rec_a.alphabet.gens()
    for n in _shift_order(nmax):
        shift = a_word ** (-n)
        if all(
            phi_apply(rec_a, g) == phi_apply(rec_b, g.conjugate(shift))
            for g in gens
        ):
            return n
    return None


def _shift_order(nmax: int):
    yield 0
    for k in range(1, nmax + 1):
        yield k
        yield -k


# --- reconstruction from a virtual endomorphism ------------------------------


class CosetAssignmentError(ValueError):
    """The coset oracle disagrees with the supplied domain data."""


@dataclass(frozen=True)
class VirtualEndo:
    """Index-two virtual endomorphism given on domain generators.

    ``coset_of`` assigns each word its coset index in {0, 1}; it must be a
    homomorphism onto Z/2 with the first rep in coset 0 and the second in
    coset 1.
    """

    alphabet: Alphabet
    domain_gens: tuple[GenWord, ...]
    images: tuple[GenWord, ...]
    coset_reps: tuple[GenWord, GenWord]
    coset_of: Callable[[GenWord], int]

    def __post_init__(self):
        if len(self.domain_gens) != len(self.images):
            raise ValueError("domain_gens and images must have equal length")
        if not self.coset_reps[0].is_identity:
            raise ValueError("the first coset rep must be the identity")
        if self.coset_of(self.coset_reps[0]) != 0 or self.coset_of(
            self.coset_reps[1]
        ) != 1:
            raise CosetAssignmentError(
                "coset reps must land in cosets 0 and 1 respectively"
            )


class _PhiEvaluator:
    """Evaluates the virtual endomorphism on arbitrary domain words by
    rewriting them over Schreier generators for the rep transversal."""

    def __init__(self, v: VirtualEndo):
        self.v = v
        self.table: dict[GenWord, GenWord] = {}
        one = v.alphabet.identity()
        self.table[one] = one
        for g, img in zip(v.domain_gens, v.images):
            self.table[g] = img
            self.table[~g] = ~img

    def _lookup(self, s: GenWord) -> GenWord:
        if s in self.table:
            return self.table[s]
        # express s as a short product of supplied domain generators
        basis = [g for g in self.table if not g.is_identity]
        frontier: list[tuple[GenWord, GenWord]] = [
            (g, self.table[g]) for g in basis
        ]
        seen = {g for g, _ in frontier}
        for _ in range(3):  # products of length <= 4
            nxt: list[tuple[GenWord, GenWord]] = []
            for word, img in frontier:
                for g in basis:
                    w2 = word * g
                    if w2 in seen:
                        continue
                    seen.add(w2)
                    img2 = img * self.table[g]
                    if w2 == s:
                        self.table[s] = img2
                        return img2
                    nxt.append((w2, img2))
            frontier = nxt
        raise CosetAssignmentError(
            f"cannot express {s} in the supplied domain generators"
        )

    def __call__(self, u: GenWord) -> GenWord:
        v = self.v
        state = 0
        out = v.alphabet.identity()
        for name, sign in u.letters:
            letter = GenWord(v.alphabet, ((name, sign),))
            new_state = state ^ (v.coset_of(letter) & 1)
            s = v.coset_reps[state] * letter * ~v.coset_reps[new_state]
            out = out * self._lookup(s)
            state = new_state
        if state != 0:
            raise CosetAssignmentError(f"{u} is not in the domain")
        return out


def recursion_from_virtual_endo(
    v: VirtualEndo, h_words: tuple[GenWord, GenWord] | None = None
) -> Recursion:
    """Rebuild a wreath recursion whose letter-0 virtual endomorphism is ``v``.

    Coordinate i of Phi(g) is ``h_i^-1 phi(r_i g r_{k_i}^-1) h_{k_i}`` with
    k_i the coset of r_i g; changing the correction words ``h_words`` moves
    Phi by an inner automorphism only.
    """
    one = v.alphabet.identity()
    if h_words is None:
        h_words = (one, one)
    phi = _PhiEvaluator(v)
    reps = v.coset_reps
    table: dict[str, WreathElem] = {}
    for name in v.alphabet.names:
        g = v.alphabet.gen(name)
        k0 = v.coset_of(g) & 1
        coords: list[GenWord] = []
        for i in (0, 1):
            ki = i ^ k0
            arg = reps[i] * g * ~reps[ki]
            coords.append(~h_words[i] * phi(arg) * h_words[ki])
        table[name] = WreathElem(coords[0], coords[1], k0 == 1)
    return Recursion.make(v.alphabet, table)
