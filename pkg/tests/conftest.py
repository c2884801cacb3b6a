import random

from twistclass.words import Alphabet, GenWord


def reduced_words(alphabet: Alphabet, max_len: int, include_identity=True):
    """All freely reduced words up to the given length, breadth-first."""
    letters = alphabet.gens() + [~g for g in alphabet.gens()]
    if include_identity:
        yield alphabet.identity()
    frontier = [alphabet.identity()]
    for _ in range(max_len):
        nxt = []
        for w in frontier:
            for l in letters:
                w2 = w * l
                if len(w2) == len(w) + 1:
                    nxt.append(w2)
                    yield w2
        frontier = nxt


def random_word(alphabet: Alphabet, length: int, rng: random.Random) -> GenWord:
    letters = alphabet.gens() + [~g for g in alphabet.gens()]
    out = alphabet.identity()
    for _ in range(length):
        out = out * rng.choice(letters)
    return out
