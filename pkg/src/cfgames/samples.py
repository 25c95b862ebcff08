"""Seeded generators for words, lassos and small automata.

Everything takes an explicit ``random.Random`` so suites are reproducible
from a single seed.
"""
from __future__ import annotations

import itertools
import random
from typing import Iterator, Sequence

from .automata.machine import CounterBuchiMachine, TransitionRule
from .automata.words import Alphabet, Lasso, as_word
from .codings import HParams, ThetaParams, h_block_runs, theta_encode


def rand_word(rng: random.Random, letters: Sequence[str], lo: int, hi: int) -> tuple:
    return tuple(rng.choice(letters) for _ in range(rng.randint(lo, hi)))


def rand_lasso(rng: random.Random, letters: Sequence[str], max_u: int = 4, max_v: int = 4) -> Lasso:
    return Lasso(rand_word(rng, letters, 0, max_u), rand_word(rng, letters, 1, max_v))


def mutate(rng: random.Random, w: tuple, letters: Sequence[str]) -> tuple:
    """One random substitution, insertion or deletion."""
    w = list(w)
    op = rng.choice(("sub", "ins", "del")) if w else "ins"
    i = rng.randrange(len(w) + (op == "ins")) if (w or op == "ins") else 0
    if op == "sub":
        w[i] = rng.choice([a for a in letters if a != w[i]] or list(letters))
    elif op == "ins":
        w.insert(i, rng.choice(letters))
    elif len(w) > 1:
        del w[i]
    return tuple(w)


def mutate_lasso(rng: random.Random, l: Lasso, letters: Sequence[str]) -> Lasso:
    if rng.random() < 0.5 or not l.spoke:
        v = mutate(rng, l.cycle, letters)
        return Lasso(l.spoke, v or l.cycle)
    return Lasso(mutate(rng, l.spoke, letters), l.cycle)


def all_words(letters: Sequence[str], max_len: int, min_len: int = 0) -> Iterator[tuple]:
    for n in range(min_len, max_len + 1):
        yield from itertools.product(letters, repeat=n)


def all_lassos(letters: Sequence[str], max_u: int, max_v: int) -> Iterator[Lasso]:
    for u in all_words(letters, max_u):
        for v in all_words(letters, max_v, 1):
            yield Lasso(u, v)


# ------------------------------------------------------------ H-shaped words

def _even(rng, hi=3):
    return 2 * rng.randint(1, hi)


def h_shape_first(p: HParams, rng) -> tuple:
    return (p.C,) * (_even(rng) + 1) + (p.A, rng.choice(p.gamma.letters))


def h_shape_block(p: HParams, rng, odd: bool) -> tuple:
    """One H block: C^n A C^n' C (A if odd) x (B if even)."""
    x = rng.choice(p.gamma.letters)
    w = (p.C,) * _even(rng) + (p.A,) + (p.C,) * (_even(rng) + 1)
    return w + ((p.A, x) if odd else (x, p.B))


def h_shape_lasso(p: HParams, rng, max_pairs: int = 2) -> Lasso:
    """A member of H: a first block, some block pairs, then a periodic pair."""
    u = h_shape_first(p, rng)
    for _ in range(rng.randint(0, max_pairs)):
        u += h_shape_block(p, rng, False) + h_shape_block(p, rng, True)
    v = ()
    for _ in range(rng.randint(1, 2)):
        v += h_shape_block(p, rng, False) + h_shape_block(p, rng, True)
    return Lasso(u, v)


def v_comega_lasso(p: HParams, rng) -> Lasso:
    """A Pref(H) word that can idle in a C-run, followed by C^omega."""
    l = h_shape_lasso(p, rng, 1)
    w = l.prefix(rng.randint(1, len(l.spoke) + len(l.cycle)))
    while w[-1] != p.C:
        w = w[:-1] if len(w) > 1 else (p.C,)
    return Lasso(w, (p.C,))


def h_lasso_mix(p: HParams, rng) -> Lasso:
    """H members, V.C^omega members, mutants and noise in fixed proportions."""
    letters = p.coded_alphabet.letters
    r = rng.random()
    if r < 0.3:
        return h_shape_lasso(p, rng)
    if r < 0.45:
        return v_comega_lasso(p, rng)
    if r < 0.85:
        l = h_shape_lasso(p, rng)
        for _ in range(rng.randint(1, 2)):
            l = mutate_lasso(rng, l, letters)
        return l
    return rand_lasso(rng, letters, 6, 6)


# ------------------------------------------------------------ coding neighbourhoods

def theta_near_lasso(p: ThetaParams, rng, max_x: int = 4) -> Lasso:
    """A cut of a theta image followed by a short cycle (always exits)."""
    letters = p.coded_alphabet.letters
    w = theta_encode(p, rand_word(rng, p.sigma.letters, 1, max_x))
    u = w[:rng.randint(0, len(w))]
    if rng.random() < 0.3 and u:
        u = mutate(rng, u, letters)
    return Lasso(u, rand_word(rng, letters, 1, 3))


def _h_runs_word(runs) -> tuple:
    return tuple(a for a, c in runs for _ in range(c))


def h_perturbed(p: HParams, rng, kind: str, max_x: int = 3) -> Lasso:
    """Lassos around h images.

    ``consistent``: a cut of an h image and a random cycle.
    ``unequal-pair``: a block C^m A C^m' C with m != m'.
    ``wrong-ratio``: both runs of a block equal but not a power of K.
    ``shape``: a random mutation of an h image prefix.
    """
    letters = p.coded_alphabet.letters
    x = rand_word(rng, p.gamma.letters, 2, max_x)
    blocks = [list(h_block_runs(p, i, a)) for i, a in enumerate(x, 1)]
    if kind == "consistent":
        w = _h_runs_word(r for b in blocks for r in b)
        return Lasso(w[:rng.randint(0, len(w))], rand_word(rng, letters, 1, 4))
    if kind in ("unequal-pair", "wrong-ratio"):
        i = rng.randint(2, len(x))
        b = blocks[i - 1]
        m = b[0][1]
        if kind == "unequal-pair":
            d = rng.choice([d for d in (-2, -1, 1, 2) if m + d > 0])
            b[2] = (p.C, m + d + 1)
        else:
            d = rng.choice([d for d in (-2, -1, 1, 2) if m + d > 0])
            b[0] = (p.C, m + d)
            b[2] = (p.C, m + d + 1)
        w = _h_runs_word(r for b in blocks[:i] for r in b)
        tail = rand_word(rng, letters, 1, 4) if rng.random() < 0.5 else (p.C,)
        return Lasso(w, tail)
    if kind == "shape":
        w = _h_runs_word(r for b in blocks for r in b)
        w = mutate(rng, w[:rng.randint(1, len(w))], letters)
        return Lasso(w, rand_word(rng, letters, 1, 4))
    raise ValueError(kind)


H_PERTURBATIONS = ("consistent", "unequal-pair", "wrong-ratio", "shape")


# ------------------------------------------------------------ finite Büchi automata

def rand_buchi(rng, alphabet, n_states: int, density: float = 0.35, name="rand") -> CounterBuchiMachine:
    alphabet = Alphabet(alphabet) if not isinstance(alphabet, Alphabet) else alphabet
    states = [f"s{i}" for i in range(n_states)]
    rules = [TransitionRule(q, a, (), t, ())
             for q in states for a in alphabet for t in states if rng.random() < density]
    acc = {q for q in states if rng.random() < 0.4}
    return CounterBuchiMachine(name, alphabet, states, states[0], acc, rules)


def _buchi_from_masks(alphabet, n_states, mask, acc_mask) -> CounterBuchiMachine:
    states = [f"s{i}" for i in range(n_states)]
    slots = [(q, a, t) for q in states for a in alphabet for t in states]
    rules = [TransitionRule(q, a, (), t, ()) for j, (q, a, t) in enumerate(slots) if mask >> j & 1]
    acc = {q for j, q in enumerate(states) if acc_mask >> j & 1}
    return CounterBuchiMachine(f"e{n_states}.{mask}.{acc_mask}", alphabet, states,
                               states[0], acc, rules)


def enumerate_buchi(alphabet, n_states: int) -> Iterator[CounterBuchiMachine]:
    """Every Büchi automaton with the given state count (initial state s0)."""
    alphabet = Alphabet(alphabet) if not isinstance(alphabet, Alphabet) else alphabet
    for mask in range(1 << (n_states * len(alphabet) * n_states)):
        for acc_mask in range(1 << n_states):
            yield _buchi_from_masks(alphabet, n_states, mask, acc_mask)


def sample_buchi(rng, alphabet, n_states: int, count: int) -> list:
    """``count`` distinct machines drawn uniformly from :func:`enumerate_buchi`."""
    alphabet = Alphabet(alphabet) if not isinstance(alphabet, Alphabet) else alphabet
    total = count_buchi(len(alphabet), n_states)
    picks = rng.sample(range(total), min(count, total))
    return [_buchi_from_masks(alphabet, n_states, i >> n_states, i & ((1 << n_states) - 1))
            for i in picks]


def count_buchi(alphabet_size: int, n_states: int) -> int:
    return (1 << (n_states * alphabet_size * n_states)) * (1 << n_states)


def brute_buchi_accepts(m: CounterBuchiMachine, l: Lasso) -> bool:
    """Lasso acceptance by relation composition, independent of the product search.

    After the spoke, close the reachable set under reading the cycle; then
    look for a state on a cycle of cycle-readings that passes through F.
    """
    delta = {}
    for r in m.rules:
        delta.setdefault((r.source, r.label), set()).add(r.target)

    def read(qs, w):
        for a in w:
            qs = {t for q in qs for t in delta.get((q, a), ())}
        return qs

    def read_flag(q, w):
        cur = {(q, False)}
        for a in w:
            cur = {(t, f or t in m.accepting) for s, f in cur for t in delta.get((s, a), ())}
        return cur

    v = as_word(l.cycle)
    reach = read({m.initial}, as_word(l.spoke))
    frontier = set(reach)
    while frontier:
        nxt = read(frontier, v) - reach
        reach |= nxt
        frontier = nxt
    edges = {q: read_flag(q, v) for q in reach}

    def reaches(src, dst):
        seen, stack = {src}, [src]
        while stack:
            q = stack.pop()
            if q == dst:
                return True
            for t, _ in edges.get(q, ()):
                if t not in seen:
                    seen.add(t)
                    stack.append(t)
        return False

    return any(f and reaches(t, q) for q in reach for t, f in edges[q])


def seeded(seed: int, tag: str) -> random.Random:
    """Independent stream per (seed, tag)."""
    return random.Random(f"{seed}:{tag}")
