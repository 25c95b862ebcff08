"""Padding codings of infinite words and their prefix classifiers.

Three codings are implemented:

* ``theta``: x(1) E^S x(2) E^(S^2) x(3) ...
* ``hK``:    A C^K x(1) B C^(K^2) A C^(K^2) x(2) B ...
* ``h``:     C^K C A x(1) C^(K^2) A C^(K^2) C x(2) B C^(K^3) A C^(K^3) C A x(3) ...

Every coded word is a fixed *skeleton* of forced letter runs with one free
slot per letter of the source word.  :class:`CodingTracker` walks that
skeleton incrementally (whole runs at a time), which is what the
classifiers, the forced-move oracle and the strategy lifts share.  Blocks
grow geometrically, so long coded words are handled as :class:`RunWord`.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass, field
from typing import Callable, Optional

from .automata.words import Alphabet, Lasso, RunWord, as_word, runs_of
from .errors import InputError

CANONICAL_K = 2 * 3 * 5 * 7 * 11 * 13 * 17 * 19  # 9699690


@dataclass(frozen=True)
class ThetaParams:
    sigma: Alphabet
    S: int = 2
    pad: str = "E"

    def __post_init__(self):
        if not isinstance(self.sigma, Alphabet):
            object.__setattr__(self, "sigma", Alphabet(self.sigma))
        if self.S < 2 or self.S % 2:
            raise InputError(f"S must be even and >= 2, got {self.S}")
        if self.pad in self.sigma:
            raise InputError(f"padding letter {self.pad!r} occurs in the base alphabet")

    @property
    def coded_alphabet(self) -> Alphabet:
        return self.sigma.union([self.pad])

    @property
    def recommended_minimum(self) -> int:
        """(3k)^3 with k = |sigma| + 2, the size used with counter simulations."""
        return (3 * (len(self.sigma) + 2)) ** 3

    def describe(self) -> str:
        return f"theta S={self.S} sigma={''.join(self.sigma)} pad={self.pad}"


@dataclass(frozen=True)
class HParams:
    gamma: Alphabet
    K: int = 2
    markers: tuple = ("A", "B", "C")

    canonical_k = CANONICAL_K

    def __post_init__(self):
        if not isinstance(self.gamma, Alphabet):
            object.__setattr__(self, "gamma", Alphabet(self.gamma))
        object.__setattr__(self, "markers", tuple(self.markers))
        if self.K < 2:
            raise InputError(f"K must be >= 2, got {self.K}")
        if len(self.markers) != 3 or len(set(self.markers)) != 3:
            raise InputError("markers must be three distinct letters")
        if any(m in self.gamma for m in self.markers):
            raise InputError("markers must not occur in the base alphabet")

    @property
    def A(self):
        return self.markers[0]

    @property
    def B(self):
        return self.markers[1]

    @property
    def C(self):
        return self.markers[2]

    @property
    def coded_alphabet(self) -> Alphabet:
        return self.gamma.union(self.markers)

    def describe(self) -> str:
        return f"h K={self.K} gamma={''.join(self.gamma)} markers={','.join(self.markers)}"


@dataclass(frozen=True, slots=True)
class PrefixVerdict:
    """Classification of a finite word against a prefix language.

    ``exited_at`` is None while the word is still inside; otherwise it is the
    first position p (1-indexed) with w[p-1] inside and w[p] outside.
    ``next_forced`` is the unique letter that keeps the word inside, or None
    at a free slot (``next_slot`` then gives the x-index) and after an exit.
    """

    exited_at: Optional[int]
    decoded: tuple = ()
    next_forced: Optional[str] = None
    next_slot: Optional[int] = None

    @property
    def in_pref(self) -> bool:
        return self.exited_at is None

    def __str__(self):
        if self.in_pref:
            return f"InPref decoded={''.join(self.decoded) or 'λ'}"
        return f"ExitedAt({self.exited_at}) decoded={''.join(self.decoded) or 'λ'}"


# ---------------------------------------------------------------- skeletons

@functools.lru_cache(maxsize=1 << 15)
def _power(base: int, exp: int) -> int:
    # block sizes recur across plays of the same coding
    return base ** exp


# A skeleton maps a slot index i to the forced runs that precede x(i).

def theta_segment(p: ThetaParams, i: int) -> tuple:
    return () if i == 1 else ((p.pad, _power(p.S, i - 1)),)


def h_segment(p: HParams, i: int) -> tuple:
    A, B, C = p.markers
    if i == 1:
        return ((C, p.K + 1), (A, 1))
    block = _power(p.K, i)
    runs = ((B, 1),) if i % 2 else ()
    runs += ((C, block), (A, 1), (C, block + 1))
    return runs + ((A, 1),) if i % 2 else runs


def hK_segment(p: HParams, i: int) -> tuple:
    A, B, C = p.markers
    if i == 1:
        return ((A, 1), (C, p.K))
    block = _power(p.K, i)
    return ((B, 1), (C, block), (A, 1), (C, block))


@functools.lru_cache(maxsize=64)
def _segments(skeleton: Callable, p) -> Callable[[int], tuple]:
    """Per-parameter cache of a skeleton: every play of a coding repeats it."""
    return functools.lru_cache(maxsize=1 << 15)(functools.partial(skeleton, p))


class CodingTracker:
    """Incremental membership in the prefix set of a skeleton coding."""

    def __init__(self, segment: Callable[[int], tuple], base: Alphabet):
        self._segment = segment
        self.base = base
        self.position = 0
        self.decoded: list = []
        self.exited_at: Optional[int] = None
        self._i = 0
        self._next_segment()

    def _next_segment(self):
        self._i += 1
        self._runs = self._segment(self._i)
        self._k = 0
        self._set_run()

    def _set_run(self):
        if self._k < len(self._runs):
            self._letter, self._remaining = self._runs[self._k]
            self._slot = None
        else:
            self._letter, self._remaining, self._slot = None, 1, self._i

    @property
    def in_pref(self) -> bool:
        return self.exited_at is None

    @property
    def next_forced(self) -> Optional[str]:
        return self._letter if self.exited_at is None else None

    @property
    def next_slot(self) -> Optional[int]:
        return self._slot if self.exited_at is None else None

    @property
    def forced_remaining(self) -> int:
        """Length of the forced run ahead (0 at a slot or after an exit)."""
        if self.exited_at is not None or self._letter is None:
            return 0
        return self._remaining

    def runs_to_slot(self) -> tuple:
        """The forced runs between here and the next slot."""
        if self.exited_at is not None or self._letter is None:
            return ()
        return ((self._letter, self._remaining),) + self._runs[self._k + 1:]

    def skip_to_slot(self) -> int:
        """Consume :meth:`runs_to_slot`; returns the number of letters."""
        if self.exited_at is not None or self._letter is None:
            return 0
        n = self._remaining + sum(c for _, c in self._runs[self._k + 1:])
        self.position += n
        self._k = len(self._runs)
        self._set_run()
        return n

    def feed(self, letter: str, count: int = 1) -> bool:
        """Consume ``letter^count``; returns whether the word is still inside."""
        if letter == self._letter and count < self._remaining and self.exited_at is None:
            self.position += count
            self._remaining -= count
            return True
        while count > 0 and self.exited_at is None:
            if self._letter is None:
                if letter not in self.base:
                    self.exited_at = self.position + 1
                    break
                self.decoded.append(letter)
                self.position += 1
                count -= 1
                self._next_segment()
            elif letter == self._letter:
                m = min(count, self._remaining)
                self.position += m
                count -= m
                self._remaining -= m
                if self._remaining == 0:
                    self._k += 1
                    self._set_run()
            else:
                self.exited_at = self.position + 1
        return self.exited_at is None

    def feed_word(self, w) -> bool:
        runs = w.runs() if isinstance(w, RunWord) else runs_of(as_word(w))
        for a, c in runs:
            if not self.feed(a, c):
                break
        return self.exited_at is None

    def verdict(self) -> PrefixVerdict:
        return PrefixVerdict(self.exited_at, tuple(self.decoded), self.next_forced, self.next_slot)


def theta_tracker(p: ThetaParams) -> CodingTracker:
    return CodingTracker(_segments(theta_segment, p), p.sigma)


def h_tracker(p: HParams) -> CodingTracker:
    return CodingTracker(_segments(h_segment, p), p.gamma)


def hK_tracker(p: HParams) -> CodingTracker:
    return CodingTracker(_segments(hK_segment, p), p.gamma)


# ---------------------------------------------------------------- encoders

def _check_base(x, alphabet: Alphabet):
    x = as_word(x)
    for i, a in enumerate(x, 1):
        if a not in alphabet:
            raise InputError(f"letter {a!r} at position {i} not in {alphabet}")
    return x


def theta_block_runs(p: ThetaParams, i: int, a: str) -> list:
    """Runs contributed by x(i) = a: the padding before it, then the letter."""
    return ([(p.pad, _power(p.S, i - 1))] if i > 1 else []) + [(a, 1)]


def theta_encode_runs(p: ThetaParams, x) -> RunWord:
    x = _check_base(x, p.sigma)
    out = RunWord()
    for i, a in enumerate(x, 1):
        out.extend(theta_block_runs(p, i, a))
    return out


def theta_encode(p: ThetaParams, x) -> tuple:
    """x(1) E^S x(2) ... E^(S^(n-1)) x(n); no padding after the last letter."""
    return theta_encode_runs(p, x).expand()


def hK_encode_runs(p: HParams, x) -> RunWord:
    x = _check_base(x, p.gamma)
    A, B, C = p.markers
    out = RunWord()
    block = p.K
    for i, a in enumerate(x, 1):
        if i == 1:
            out.append(A)
            out.append(C, block)
        else:
            out.append(C, block)
            out.append(A)
            out.append(C, block)
        out.append(a)
        out.append(B)
        block *= p.K
    return out


def hK_encode(p: HParams, x) -> tuple:
    """The hK pattern through the B that follows x(n)."""
    return hK_encode_runs(p, x).expand()


def h_block_runs(p: HParams, i: int, a: str) -> list:
    """Runs contributed by x(i) = a in h(x), through its trailing B if any."""
    A, B, C = p.markers
    block = _power(p.K, i)
    if i == 1:
        return [(C, block + 1), (A, 1), (a, 1)]
    runs = [(C, block), (A, 1), (C, block + 1)]
    if i % 2:
        runs.append((A, 1))
    runs.append((a, 1))
    if i % 2 == 0:
        runs.append((B, 1))
    return runs


def h_encode_runs(p: HParams, x) -> RunWord:
    x = _check_base(x, p.gamma)
    out = RunWord()
    for i, a in enumerate(x, 1):
        out.extend(h_block_runs(p, i, a))
    return out


def h_encode(p: HParams, x) -> tuple:
    """The h pattern through x(n) (and the B after it when n is even)."""
    return h_encode_runs(p, x).expand()


def h_slot_position(p: HParams, i: int) -> int:
    """Global 1-indexed position of x(i) inside h(x)."""
    if i < 1:
        raise InputError("slot index must be >= 1")
    pos = p.K + 3
    block = p.K
    for j in range(2, i + 1):
        block *= p.K
        pos += (1 if j % 2 else 0) + 2 * block + 3 + (1 if j % 2 else 0)
    return pos


def theta_slot_position(p: ThetaParams, i: int) -> int:
    if i < 1:
        raise InputError("slot index must be >= 1")
    pos, block = 1, 1
    for _ in range(1, i):
        block *= p.S
        pos += block + 1
    return pos


# ---------------------------------------------------------------- classifiers

def theta_classify(p: ThetaParams, w) -> PrefixVerdict:
    t = theta_tracker(p)
    t.feed_word(w)
    return t.verdict()


def h_classify(p: HParams, w) -> PrefixVerdict:
    t = h_tracker(p)
    t.feed_word(w)
    return t.verdict()


def lasso_first_exit(make_tracker: Callable[[], CodingTracker], l: Lasso, limit: int) -> Optional[int]:
    """First exit position of ``u.v^omega`` from a coding's prefix set.

    Returns None when no exit is found within ``limit`` letters.  Coded
    blocks grow without bound while a lasso repeats, so every lasso leaves;
    the limit only guards against a too small budget.
    """
    t = make_tracker()
    t.feed_word(l.spoke)
    if not t.in_pref:
        return t.exited_at
    cycle = runs_of(l.cycle)
    if len(cycle) == 1:
        t.feed(cycle[0][0], max(limit - t.position, 1))
    else:
        while t.in_pref and t.position < limit:
            for a, c in cycle:
                if not t.feed(a, c):
                    break
    return t.exited_at


def theta_exit_limit(p: ThetaParams, l: Lasso) -> int:
    return 4 * p.S * (len(l.spoke) + len(l.cycle) + 4) + 64


def h_exit_limit(p: HParams, l: Lasso) -> int:
    return 8 * p.K * (len(l.spoke) + len(l.cycle) + 8) + 64


def theta_lasso_exit(p: ThetaParams, l: Lasso, limit: Optional[int] = None) -> Optional[int]:
    return lasso_first_exit(lambda: theta_tracker(p), l, limit or theta_exit_limit(p, l))


def h_lasso_exit(p: HParams, l: Lasso, limit: Optional[int] = None) -> Optional[int]:
    return lasso_first_exit(lambda: h_tracker(p), l, limit or h_exit_limit(p, l))


# ---------------------------------------------------------------- hK -> h

def hK_to_h(p: HParams, w) -> tuple:
    """Rewrite a complete hK image into the h image of the same source word.

    The rewrite follows the four rules literally: drop the leading A, drop
    the B after every odd-indexed letter, insert C before every even-indexed
    letter and C A before every odd-indexed one.
    """
    w = as_word(w)
    t = hK_tracker(p)
    for a in w:
        if not t.feed(a):
            raise InputError(f"not an hK image: mismatch at position {t.exited_at}")
    # a complete image stops right after a B, i.e. at the start of a block
    if len(w) != hK_encode_runs(p, t.decoded).length:
        raise InputError(f"not an hK image: incomplete at position {len(w)}")
    A, B, C = p.markers
    out = []
    index = 0
    for pos, a in enumerate(w):
        if pos == 0 and a == A:
            continue
        if a in p.gamma:
            index += 1
            out.extend((C,) if index % 2 == 0 else (C, A))
            out.append(a)
            continue
        if a == B and index % 2 == 1:
            continue
        out.append(a)
    return tuple(out)


# ---------------------------------------------------------------- writer parity

@dataclass(frozen=True)
class WriterReport:
    property1: bool
    property2: bool
    bad_slots: tuple = field(default=())
    bad_boundaries: tuple = field(default=())

    def __bool__(self):
        return self.property1 and self.property2


def verify_writer_properties(p: HParams, w, shape: str = "h") -> WriterReport:
    """Check the two writer properties by global position parity.

    Odd positions belong to Player 1 and even ones to Player 2.  Property 1:
    the n-th base letter sits at a position of the same parity as n.
    Property 2: the first non-C letter after a run of C sits at an even
    position.  ``shape`` picks the prefix set the word must belong to:
    ``"h"`` for the h coding, ``"H"`` for the regular shape language.
    """
    if shape == "h":
        verdict = h_classify(p, w)
    elif shape == "H":
        from .langs.shapes import classify_pref_H
        verdict = classify_pref_H(p, w)
    else:
        raise InputError(f"unknown shape {shape!r}")
    if not verdict.in_pref:
        raise InputError(f"word left the {shape} prefix set at position {verdict.exited_at}")
    runs = w.runs() if isinstance(w, RunWord) else runs_of(as_word(w))
    pos = 0
    n = 0
    prev = None
    bad_slots, bad_bounds = [], []
    for a, c in runs:
        if prev == p.C and a != p.C and (pos + 1) % 2:
            bad_bounds.append(pos + 1)
        if a in p.gamma:
            for j in range(c):
                n += 1
                if (pos + 1 + j) % 2 != n % 2:
                    bad_slots.append(pos + 1 + j)
        pos += c
        prev = a
    return WriterReport(not bad_slots, not bad_bounds, tuple(bad_slots), tuple(bad_bounds))


# ---------------------------------------------------------------- facade

@dataclass(frozen=True)
class Coding:
    """Uniform access to the theta and h codings for the game layer."""

    params: object

    def __post_init__(self):
        if not isinstance(self.params, (ThetaParams, HParams)):
            raise InputError("coding parameters must be ThetaParams or HParams")

    @property
    def kind(self) -> str:
        return "theta" if isinstance(self.params, ThetaParams) else "h"

    @property
    def base(self) -> Alphabet:
        return self.params.sigma if self.kind == "theta" else self.params.gamma

    @property
    def coded(self) -> Alphabet:
        return self.params.coded_alphabet

    def tracker(self) -> CodingTracker:
        return theta_tracker(self.params) if self.kind == "theta" else h_tracker(self.params)

    def block_runs(self, i: int, a: str) -> list:
        if self.kind == "theta":
            return theta_block_runs(self.params, i, a)
        return h_block_runs(self.params, i, a)

    def encode_runs(self, x) -> RunWord:
        if self.kind == "theta":
            return theta_encode_runs(self.params, x)
        return h_encode_runs(self.params, x)

    def classify(self, w) -> PrefixVerdict:
        if self.kind == "theta":
            return theta_classify(self.params, w)
        return h_classify(self.params, w)

    def describe(self) -> str:
        return self.params.describe()
