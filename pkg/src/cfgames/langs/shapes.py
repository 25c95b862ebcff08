"""The regular shape language H and its prefix-derived languages V and U.

H is the set of words

    C^n1 C A x(1) C^n2 A C^n2' C x(2) B C^n3 A C^n3' C A x(3) ...

with every n_i, n_i' even and non-null and x(i) in the base alphabet.  Two
independent deciders are kept: a deterministic shape automaton (the table
below, also used to build the Büchi automata) and a structural parser that
counts run lengths.  Tests cross-check one against the other.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from ..automata.words import Lasso, RunWord, as_word, runs_of
from ..codings import HParams, PrefixVerdict

# DFA over the letter classes C, A, B and X (any base letter)
_SHAPE = {
    "f0": {"C": "f1"},
    "f1": {"C": "f2"},
    "f2": {"C": "f3"},
    "f3": {"C": "f2", "A": "fA"},
    "fA": {"X": "xo"},
    # block with an even index: C^n A C^n' C x B
    "xo": {"C": "e1"},
    "e1": {"C": "e2"},
    "e2": {"C": "e1", "A": "eA"},
    "eA": {"C": "ec1"},
    "ec1": {"C": "ec2"},
    "ec2": {"C": "ec3"},
    "ec3": {"C": "ec2", "X": "xe"},
    "xe": {"B": "eB"},
    # block with an odd index: C^n A C^n' C A x
    "eB": {"C": "o1"},
    "o1": {"C": "o2"},
    "o2": {"C": "o1", "A": "oA"},
    "oA": {"C": "oc1"},
    "oc1": {"C": "oc2"},
    "oc2": {"C": "oc3"},
    "oc3": {"C": "oc2", "A": "oA2"},
    "oA2": {"X": "xo"},
}
SHAPE_STATES = tuple(_SHAPE)
SHAPE_INITIAL = "f0"
SHAPE_X_STATES = frozenset({"xo", "xe"})
SHAPE_C_STATES = frozenset(t for out in _SHAPE.values() for cls, t in out.items() if cls == "C")


def _letter_class(p: HParams, a: str) -> Optional[str]:
    if a in p.gamma:
        return "X"
    if a == p.A:
        return "A"
    if a == p.B:
        return "B"
    if a == p.C:
        return "C"
    return None


def shape_step(p: HParams, q: str, a: str) -> Optional[str]:
    cls = _letter_class(p, a)
    return _SHAPE[q].get(cls) if cls else None


def shape_delta(p: HParams) -> dict:
    """Explicit (state, letter) -> state table over the coded alphabet."""
    out = {}
    for q in SHAPE_STATES:
        for a in p.coded_alphabet:
            t = shape_step(p, q, a)
            if t is not None:
                out[(q, a)] = t
    return out


def classify_pref_H(p: HParams, w) -> PrefixVerdict:
    """Membership in Pref(H) by the deterministic shape automaton."""
    q = SHAPE_INITIAL
    pos = 0
    decoded = []
    runs = w.runs() if isinstance(w, RunWord) else runs_of(as_word(w))
    for a, c in runs:
        # C loops have period 2, so a long C run is replayed in short form
        m = 4 + c % 2 if a == p.C and c > 5 else c
        for _ in range(m):
            t = shape_step(p, q, a)
            if t is None:
                return PrefixVerdict(pos + 1, tuple(decoded))
            q = t
            pos += 1
            if a in p.gamma:
                decoded.append(a)
        pos += c - m
    nxt = _SHAPE[q]
    forced = None
    if len(nxt) == 1:
        cls = next(iter(nxt))
        forced = {"A": p.A, "B": p.B, "C": p.C}.get(cls)
    return PrefixVerdict(None, tuple(decoded), forced)


# ------------------------------------------------------------ structural parser

_FIRST = (("C", 3, 1), ("A",), ("X",))
_EVEN = (("C", 2, 0), ("A",), ("C", 3, 1), ("X",), ("B",))
_ODD = (("C", 2, 0), ("A",), ("C", 3, 1), ("A",), ("X",))
_PHASES = {"first": (_FIRST, "even"), "even": (_EVEN, "odd"), "odd": (_ODD, "even")}


class ShapeParser:
    """Run-length parser for Pref(H), independent of the shape automaton.

    A C-token ``("C", minimum, parity)`` absorbs a whole maximal run of C and
    is validated when the run ends; other tokens match one letter.
    """

    def __init__(self, p: HParams):
        self.p = p
        self.phase = "first"
        self.j = 0
        self.pending = 0
        self.position = 0
        self.x_count = 0
        self.exited_at: Optional[int] = None

    def _token(self):
        return _PHASES[self.phase][0][self.j]

    def _advance(self):
        tokens, nxt = _PHASES[self.phase]
        self.j += 1
        if self.j == len(tokens):
            self.phase, self.j = nxt, 0

    def state(self):
        return (self.phase, self.j, self.pending)

    def feed(self, a: str, count: int = 1) -> bool:
        p = self.p
        while count > 0 and self.exited_at is None:
            tok = self._token()
            if a == p.C:
                if tok[0] != "C":
                    self.exited_at = self.position + 1
                    break
                self.pending += count
                self.position += count
                return True
            if tok[0] == "C":
                _, minimum, parity = tok
                if self.pending < minimum or self.pending % 2 != parity:
                    self.exited_at = self.position + 1
                    break
                self.pending = 0
                self._advance()
                continue
            want = tok[0]
            ok = (a in p.gamma) if want == "X" else (a == {"A": p.A, "B": p.B}[want])
            if not ok:
                self.exited_at = self.position + 1
                break
            if want == "X":
                self.x_count += 1
            self.position += 1
            count -= 1
            self._advance()
        return self.exited_at is None


def structural_pref_exit(p: HParams, w) -> Optional[int]:
    sp = ShapeParser(p)
    for a, c in runs_of(as_word(w)):
        if not sp.feed(a, c):
            break
    return sp.exited_at


def shape_lasso_exit(p: HParams, l: Lasso) -> Optional[int]:
    """First exit of ``u.v^omega`` from Pref(H), or None if it never leaves.

    Exact: when the cycle holds a non-C letter the pending C count at cycle
    boundaries is bounded, so parser states at those boundaries repeat.
    """
    sp = ShapeParser(p)
    for a, c in runs_of(l.spoke):
        if not sp.feed(a, c):
            return sp.exited_at
    cycle = runs_of(l.cycle)
    if all(a == p.C for a, _ in cycle):
        sp.feed(p.C)
        return sp.exited_at
    seen = set()
    while True:
        key = sp.state()
        if key in seen:
            return None
        seen.add(key)
        for a, c in cycle:
            if not sp.feed(a, c):
                return sp.exited_at


def in_H(p: HParams, l: Lasso) -> bool:
    return shape_lasso_exit(p, l) is None and any(a != p.C for a in l.cycle)


def in_V_Comega(p: HParams, l: Lasso) -> bool:
    return shape_lasso_exit(p, l) is None and all(a == p.C for a in l.cycle)


def in_U_Gamma(p: HParams, l: Lasso) -> bool:
    e = shape_lasso_exit(p, l)
    return e is not None and e % 2 == 0


def decide_closure_H(p: HParams, l: Lasso) -> bool:
    """u.v^omega in Cl(H) = H ∪ V.C^omega."""
    return in_H(p, l) or in_V_Comega(p, l)


def never_exits_pref_H(p: HParams, l: Lasso) -> bool:
    """Lim side: cycle detection of the shape automaton along u.v^omega."""
    q = SHAPE_INITIAL
    for a in l.spoke:
        q = shape_step(p, q, a)
        if q is None:
            return False
    seen = set()
    while q not in seen:
        seen.add(q)
        for a in l.cycle:
            q = shape_step(p, q, a)
            if q is None:
                return False
    return True


# ------------------------------------------------------------ finite automata

@dataclass(frozen=True)
class FiniteDFA:
    """Partial DFA over finite words; a missing transition rejects."""

    name: str
    initial: str
    delta: dict
    accepting: frozenset

    def run(self, w) -> Optional[str]:
        q = self.initial
        for a in as_word(w):
            q = self.delta.get((q, a))
            if q is None:
                return None
        return q

    def accepts(self, w) -> bool:
        return self.run(w) in self.accepting


def V_dfa(p: HParams) -> FiniteDFA:
    return FiniteDFA("V", SHAPE_INITIAL, shape_delta(p), SHAPE_C_STATES)


def U_dfa(p: HParams) -> FiniteDFA:
    """Even-length words whose first exit from Pref(H) is their last letter."""
    base = shape_delta(p)
    delta = {}
    for q in SHAPE_STATES:
        for par in (0, 1):
            for a in p.coded_alphabet:
                t = base.get((q, a))
                if t is not None:
                    delta[(f"{q}.{par}", a)] = f"{t}.{1 - par}"
                elif par == 1:
                    delta[(f"{q}.{par}", a)] = "U"
    return FiniteDFA("U", f"{SHAPE_INITIAL}.0", delta, frozenset({"U"}))
