"""k-counter Büchi machines and their one-step / finite-prefix semantics.

Test bit convention: ``True`` means the counter is positive, ``False`` means
it is zero.  A rule fires from a configuration only when its test vector
equals the zero/positive pattern of the current counters.  A zero test may
not be paired with a decrement, which keeps every counter non-negative.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, NamedTuple, Optional, Sequence

from ..errors import InputError
from .words import Alphabet, as_word, check_letter

LAMBDA = None


@dataclass(frozen=True)
class TransitionRule:
    source: str
    label: Optional[str]  # None is a lambda move
    tests: tuple
    target: str
    updates: tuple

    def __post_init__(self):
        object.__setattr__(self, "tests", tuple(bool(t) for t in self.tests))
        object.__setattr__(self, "updates", tuple(int(j) for j in self.updates))
        if len(self.tests) != len(self.updates):
            raise InputError(f"rule {self}: tests and updates differ in length")
        for t, j in zip(self.tests, self.updates):
            if j not in (-1, 0, 1):
                raise InputError(f"rule {self}: update {j} not in {{-1, 0, +1}}")
            if not t and j == -1:
                raise InputError(f"rule {self}: decrement on a zero-tested counter")

    @property
    def is_lambda(self):
        return self.label is None


class Config(NamedTuple):
    state: str
    counters: tuple


@dataclass(frozen=True)
class CounterBuchiMachine:
    """A Büchi k-counter automaton (k = 0 is a plain Büchi automaton).

    ``rules`` keeps insertion order, which the text format preserves.  Build
    machines through the constructor; they are treated as immutable values.
    """

    name: str
    alphabet: Alphabet
    states: tuple
    initial: str
    accepting: frozenset
    rules: tuple
    k: int = 0
    realtime: bool = True

    def __post_init__(self):
        if not isinstance(self.alphabet, Alphabet):
            object.__setattr__(self, "alphabet", Alphabet(self.alphabet))
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "accepting", frozenset(self.accepting))
        object.__setattr__(self, "rules", tuple(self.rules))
        if self.k < 0:
            raise InputError("counter count must be >= 0")
        known = set(self.states)
        if len(known) != len(self.states):
            raise InputError("duplicate state names")
        for q in self.states:
            if not q or any(ch.isspace() for ch in q):
                raise InputError(f"illegal state name {q!r}")
        if self.initial not in known:
            raise InputError(f"initial state {self.initial!r} unknown")
        if not self.accepting <= known:
            raise InputError(f"accepting states {set(self.accepting - known)} unknown")
        for r in self.rules:
            if r.source not in known or r.target not in known:
                raise InputError(f"rule {r} references an unknown state")
            if r.label is not None and r.label not in self.alphabet:
                raise InputError(f"rule {r} reads letter outside the alphabet")
            if len(r.tests) != self.k:
                raise InputError(f"rule {r} has {len(r.tests)} counters, machine has {self.k}")
            if self.realtime and r.label is None:
                raise InputError(f"real-time machine has a lambda rule {r}")

    @cached_property
    def table(self) -> dict:
        """(state, label, tests) -> tuple of (target, updates)."""
        t = defaultdict(list)
        for r in self.rules:
            t[(r.source, r.label, r.tests)].append((r.target, r.updates))
        return {key: tuple(v) for key, v in t.items()}

    @cached_property
    def has_lambda(self) -> bool:
        return any(r.label is None for r in self.rules)

    def initial_config(self) -> Config:
        return Config(self.initial, (0,) * self.k)

    def summary(self) -> dict:
        return {
            "name": self.name,
            "states": len(self.states),
            "rules": len(self.rules),
            "counters": self.k,
            "realtime": self.realtime,
            "alphabet": list(self.alphabet),
        }


def pattern(counters: Sequence[int]) -> tuple:
    return tuple(c > 0 for c in counters)


def successors(m: CounterBuchiMachine, c: Config, label: Optional[str]) -> frozenset:
    """All configurations reachable from ``c`` by one rule reading ``label``."""
    if label is not None and label not in m.alphabet:
        raise InputError(f"letter {label!r} not in alphabet {m.alphabet}")
    if c.state not in m.states or len(c.counters) != m.k:
        raise InputError(f"configuration {c} does not fit machine {m.name}")
    out = set()
    for target, updates in m.table.get((c.state, label, pattern(c.counters)), ()):
        nc = tuple(x + j for x, j in zip(c.counters, updates))
        assert min(nc, default=0) >= 0, "counter went negative"
        out.add(Config(target, nc))
    return frozenset(out)


@dataclass(frozen=True)
class RunRecord:
    """Configurations reachable after a finite prefix.

    ``entries`` pairs each configuration with whether an accepting state was
    visited on the way there (per branch, so the flag is monotone along a
    branch).  ``pruned`` reports that the counter cap or the lambda budget
    cut some branch.
    """

    entries: frozenset
    lambda_steps: int = 0
    pruned: bool = False

    @property
    def configs(self) -> frozenset:
        return frozenset(c for c, _ in self.entries)

    def saw_accepting(self) -> bool:
        return any(saw for _, saw in self.entries)


def default_lambda_budget(m: CounterBuchiMachine, counter_cap: int) -> int:
    return 4 * len(m.states) * (counter_cap + 1)


def simulate_prefix(m: CounterBuchiMachine, w, lambda_budget: Optional[int] = None,
                    counter_cap: int = 64) -> RunRecord:
    """Run ``m`` over the finite word ``w``.

    Lambda moves are taken before each letter (at most ``lambda_budget`` of
    them between two letters on any branch); a run ends with the move that
    reads the last letter, so the empty word yields only the initial
    configuration.
    """
    w = as_word(w)
    if counter_cap < 0:
        raise InputError("counter cap must be >= 0")
    if lambda_budget is None:
        lambda_budget = default_lambda_budget(m, counter_cap)
    if lambda_budget < 0:
        raise InputError("lambda budget must be >= 0")
    for a in w:
        if a not in m.alphabet:
            raise InputError(f"letter {a!r} not in alphabet {m.alphabet}")

    init = m.initial_config()
    current = {(init, m.initial in m.accepting)}
    pruned = False
    steps = 0
    for a in w:
        if m.has_lambda and not m.realtime:
            frontier = set(current)
            seen = set(current)
            for _ in range(lambda_budget):
                nxt = set()
                for cfg, saw in frontier:
                    for d in successors(m, cfg, None):
                        steps += 1
                        if d.counters and max(d.counters) > counter_cap:
                            pruned = True
                            continue
                        item = (d, saw or d.state in m.accepting)
                        if item not in seen:
                            seen.add(item)
                            nxt.add(item)
                frontier = nxt
                if not frontier:
                    break
            else:
                if any(successors(m, cfg, None) for cfg, _ in frontier):
                    pruned = True
            current = seen
        nxt = set()
        for cfg, saw in current:
            for d in successors(m, cfg, a):
                if d.counters and max(d.counters) > counter_cap:
                    pruned = True
                    continue
                nxt.add((d, saw or d.state in m.accepting))
        current = nxt
    return RunRecord(frozenset(current), steps, pruned)


class RuleBuilder:
    """Accumulates rules, expanding don't-care test bits.

    A test entry of ``None`` means the rule fires whatever that counter holds;
    it is expanded into a positive and, unless the update decrements, a zero
    variant.
    """

    def __init__(self, k: int):
        self.k = k
        self.rules: list = []
        self._seen: set = set()

    def add(self, source, label, target, tests=None, updates=None):
        tests = (None,) * self.k if tests is None else tuple(tests)
        updates = (0,) * self.k if updates is None else tuple(updates)
        variants = [()]
        for t, j in zip(tests, updates):
            if t is None:
                opts = (True,) if j == -1 else (False, True)
            else:
                opts = (t,)
            variants = [v + (o,) for v in variants for o in opts]
        for v in variants:
            r = TransitionRule(source, label, v, target, updates)
            if r not in self._seen:
                self._seen.add(r)
                self.rules.append(r)

    def __iter__(self):
        return iter(self.rules)
