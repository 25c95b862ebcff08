"""Finite words, run-length words and ultimately periodic (lasso) words.

Letters are short string tokens.  A finite word is a tuple of letters; the
empty tuple is the empty word.  Positions are 1-indexed when exposed to
callers, so ``prefix(w, n)`` is the length-n prefix and ``prefix(w, 0)`` is
empty.
"""
from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from ..errors import InputError

Word = tuple

RESERVED = frozenset({"@", "|", "-"})


def check_letter(letter):
    if not isinstance(letter, str) or not letter:
        raise InputError(f"letter must be a non-empty string, got {letter!r}")
    if letter in RESERVED or any(ch.isspace() for ch in letter) or "|" in letter:
        raise InputError(f"illegal letter token {letter!r}")
    return letter


class Alphabet:
    """Ordered set of distinct letter tokens."""

    __slots__ = ("letters", "_index")

    def __init__(self, letters: Iterable[str]):
        if isinstance(letters, str):
            letters = tuple(letters)
        letters = tuple(check_letter(a) for a in letters)
        if not letters:
            raise InputError("alphabet must be non-empty")
        if len(set(letters)) != len(letters):
            raise InputError(f"alphabet letters not distinct: {letters}")
        self.letters = letters
        self._index = {a: i for i, a in enumerate(letters)}

    def __iter__(self):
        return iter(self.letters)

    def __len__(self):
        return len(self.letters)

    def __contains__(self, letter):
        return letter in self._index

    def __eq__(self, other):
        if isinstance(other, Alphabet):
            return self.letters == other.letters
        return NotImplemented

    def __hash__(self):
        return hash(self.letters)

    def __repr__(self):
        return f"Alphabet({' '.join(self.letters)})"

    def index(self, letter):
        return self._index[letter]

    def union(self, other: Iterable[str]) -> "Alphabet":
        extra = [a for a in other if a not in self._index]
        return Alphabet(self.letters + tuple(extra))


def as_word(w) -> Word:
    """Coerce a string (one letter per character) or a sequence to a word."""
    if isinstance(w, RunWord):
        return w.expand()
    if isinstance(w, str):
        return tuple(w)
    return tuple(w)


def format_word(w: Sequence[str]) -> str:
    """Serialize a word: contiguous when every letter is one character."""
    w = tuple(w)
    if all(len(a) == 1 for a in w):
        return "".join(w)
    return " ".join(w)


def parse_word(text: str) -> Word:
    """Inverse of :func:`format_word`; any whitespace switches to token mode."""
    if any(ch.isspace() for ch in text):
        return tuple(check_letter(a) for a in text.split())
    return tuple(check_letter(a) for a in text)


def prefix(w: Sequence[str], n: int) -> Word:
    if n < 0:
        raise InputError("prefix length must be >= 0")
    return tuple(w[:n])


def runs_of(w: Iterable[str]) -> list:
    """Group a word into maximal (letter, count) runs."""
    out = []
    for a in w:
        if out and out[-1][0] == a:
            out[-1][1] += 1
        else:
            out.append([a, 1])
    return [(a, c) for a, c in out]


class RunWord(Sequence):
    """Run-length encoded finite word.

    Coded words grow geometrically (a block of ``S**n`` padding letters), so
    encoders and long game transcripts keep them compressed.  Counts may be
    arbitrarily large integers; ``length`` is always exact but ``len()`` is
    limited to what the interpreter accepts as a size.
    """

    def __init__(self, runs: Iterable = ()):
        self._letters: list = []
        self._ends: list = []
        for a, c in runs:
            self.append(a, c)

    @classmethod
    def from_word(cls, w: Iterable[str]) -> "RunWord":
        return cls(runs_of(w))

    def append(self, letter: str, count: int = 1) -> None:
        if count < 0:
            raise InputError("run count must be >= 0")
        if count == 0:
            return
        if self._letters and self._letters[-1] == letter:
            self._ends[-1] += count
        else:
            start = self._ends[-1] if self._ends else 0
            self._letters.append(letter)
            self._ends.append(start + count)

    def extend(self, other: Iterable) -> None:
        for a, c in (other.runs() if isinstance(other, RunWord) else other):
            self.append(a, c)

    @property
    def length(self) -> int:
        return self._ends[-1] if self._ends else 0

    @property
    def num_runs(self) -> int:
        return len(self._letters)

    def __len__(self):
        return self.length

    def __iter__(self):
        for a, c in self.runs():
            for _ in range(c):
                yield a

    def runs(self) -> Iterator:
        start = 0
        for a, end in zip(self._letters, self._ends):
            yield a, end - start
            start = end

    def run_at(self, i: int):
        start = self._ends[i - 1] if i else 0
        return self._letters[i], self._ends[i] - start

    def __getitem__(self, i):
        if isinstance(i, slice):
            return self.expand()[i]
        n = self.length
        if i < 0:
            i += n
        if not 0 <= i < n:
            raise IndexError(i)
        return self._letters[bisect_right(self._ends, i)]

    def last(self):
        return self._letters[-1] if self._letters else None

    def expand(self, limit: int = 10**7) -> Word:
        if self.length > limit:
            raise InputError(f"refusing to expand a word of length {self.length}")
        return tuple(a for a, c in self.runs() for _ in range(c))

    def prefix(self, n: int) -> "RunWord":
        out = RunWord()
        for a, c in self.runs():
            if n <= 0:
                break
            out.append(a, min(c, n))
            n -= c
        return out

    def copy(self) -> "RunWord":
        out = RunWord()
        out._letters = list(self._letters)
        out._ends = list(self._ends)
        return out

    def __eq__(self, other):
        if isinstance(other, RunWord):
            return self._letters == other._letters and self._ends == other._ends
        if isinstance(other, (tuple, list)):
            return self == RunWord.from_word(other)
        return NotImplemented

    __hash__ = None

    def __repr__(self):
        body = " ".join(a if c == 1 else f"{a}^{c}" for a, c in self.runs())
        return f"RunWord({body})"


def _primitive_root(v: Word) -> Word:
    n = len(v)
    for d in range(1, n + 1):
        if n % d == 0 and v[:d] * (n // d) == v:
            return v[:d]
    return v


@dataclass(frozen=True, eq=False)
class Lasso:
    """The ultimately periodic word ``spoke . cycle^omega``.

    Equality and hashing go through the canonical presentation, so two
    lassos compare equal exactly when they denote the same infinite word.
    """

    spoke: Word
    cycle: Word

    def __post_init__(self):
        object.__setattr__(self, "spoke", as_word(self.spoke))
        object.__setattr__(self, "cycle", as_word(self.cycle))
        if not self.cycle:
            raise InputError("lasso cycle must be non-empty")

    def canonical(self) -> "Lasso":
        u, v = self.spoke, _primitive_root(self.cycle)
        while u and u[-1] == v[-1]:
            u = u[:-1]
            v = v[-1:] + v[:-1]
        return Lasso(u, v)

    def letter(self, i: int) -> str:
        """The letter at 1-indexed position i."""
        if i <= len(self.spoke):
            return self.spoke[i - 1]
        return self.cycle[(i - len(self.spoke) - 1) % len(self.cycle)]

    def prefix(self, n: int) -> Word:
        return lasso_prefix(self, n)

    def letters(self) -> set:
        return set(self.spoke) | set(self.cycle)

    def __eq__(self, other):
        if not isinstance(other, Lasso):
            return NotImplemented
        a, b = self.canonical(), other.canonical()
        return a.spoke == b.spoke and a.cycle == b.cycle

    def __hash__(self):
        c = self.canonical()
        return hash((c.spoke, c.cycle))

    def __str__(self):
        return format_lasso(self)

    def __repr__(self):
        return f"Lasso({format_lasso(self)!r})"


def lasso_prefix(l: Lasso, n: int) -> Word:
    if n < 0:
        raise InputError("prefix length must be >= 0")
    u, v = l.spoke, l.cycle
    if n <= len(u):
        return u[:n]
    k = n - len(u)
    reps = -(-k // len(v))
    return u + (v * reps)[:k]


def agreement_horizon(a: Lasso, b: Lasso) -> int:
    """Prefix length after which two lassos that agree so far agree forever."""
    return len(a.spoke) + len(b.spoke) + math.lcm(len(a.cycle), len(b.cycle))


def format_lasso(l: Lasso) -> str:
    u, v = l.spoke, l.cycle
    if all(len(a) == 1 for a in u + v):
        return "".join(u) + "|" + "".join(v)
    return " ".join(u) + " | " + " ".join(v)


def parse_lasso(text: str) -> Lasso:
    if text.count("|") != 1:
        raise InputError(f"lasso must have the form <u>|<v>: {text!r}")
    left, right = text.split("|")
    return Lasso(parse_word(left), parse_word(right))
