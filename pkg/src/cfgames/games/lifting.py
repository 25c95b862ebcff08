"""Lifting a strategy of the coded (big) game to the uncoded (small) game.

The lifted player simulates the big game on the side.  Padding positions
are filled with the unique letter the coding allows, whoever writes them;
the small opponent's letters are inserted at its own x-slots and the big
strategy's letters at ours.  Padding blocks grow geometrically, so the big
transcript is kept as a run-length word and, when the big player supports
``fast_forward``, the padding up to the next slot is consumed in one step.

After every slot the runs written since the previous slot are compared
with the coding's block for that slot: this is the re-encoding identity
encode(small history) = big transcript, checked incrementally.
"""
from __future__ import annotations

from typing import Optional

from ..automata.words import RunWord
from ..codings import Coding, CodingTracker
from ..errors import ExitsCoding, InputError
from .strategies import Player, Procedural, Role, Strategy


class BigGame:
    """The simulated big play, seen from the big player's side."""

    def __init__(self, coding: Coding, big: Player, role: Role):
        self.coding = coding
        self.big = big
        self.role = role
        self.tracker: CodingTracker = coding.tracker()
        self.transcript = RunWord()
        self.history: list = []  # small-game letters, x(1) x(2) ...
        self.pending: Optional[str] = None  # opponent letter the big player has not seen
        self.checks = 0
        self.fast_forwards = 0
        self._segment: list = []  # runs written since the last slot
        self._carry: list = []
        self._odd = False  # parity of the big position

    @property
    def position(self) -> int:
        return self.tracker.position

    def _writer(self) -> Role:
        return Role.P2 if self._odd else Role.P1

    def _write(self, letter: str, count: int = 1):
        self.tracker.feed(letter, count)
        self.transcript.append(letter, count)
        seg = self._segment
        if seg and seg[-1][0] == letter:
            seg[-1][1] += count
        else:
            seg.append([letter, count])
        if count & 1:
            self._odd = not self._odd

    def _big_move(self) -> str:
        out = self.big.move(self.pending)
        self.pending = None
        return out

    def _step_forced(self):
        letter = self.tracker.next_forced
        if self._writer() == self.role:
            out = self._big_move()
            if out != letter:
                raise ExitsCoding(self.position + 1, letter, out)
        else:
            self.pending = letter
        self._write(letter)

    def advance_to_slot(self):
        """Fill padding until the next x-slot."""
        t = self.tracker
        ff = getattr(self.big, "fast_forward", None)
        while t.next_slot is None:
            if t.next_forced is None:
                raise ExitsCoding(self.position + 1, "?", "?")
            if ff is not None and self.pending is None:
                runs = t.runs_to_slot()
                if ff(runs):
                    self._write_runs(runs)
                    self.fast_forwards += 1
                    continue
            self._step_forced()

    def _write_runs(self, runs: tuple):
        n = self.tracker.skip_to_slot()
        self.transcript.extend(runs)
        seg = self._segment
        for letter, count in runs:
            if seg and seg[-1][0] == letter:
                seg[-1][1] += count
            else:
                seg.append([letter, count])
        if n & 1:
            self._odd = not self._odd

    def _slot_writer(self, j: int) -> Role:
        w = self._writer()
        want = Role.P1 if j % 2 else Role.P2
        if w != want:
            raise InputError(f"{self.coding.describe()}: slot {j} falls on a {w} position; "
                             "lifting needs slot writers to alternate")
        return w

    def _close_slot(self, j: int, letter: str):
        self.history.append(letter)
        runs = [list(r) for r in self._carry + self.coding.block_runs(j, letter)]
        self._carry = []
        if runs[-1][0] != letter:
            self._carry = [tuple(runs.pop())]
        if self._segment != runs:
            raise AssertionError(f"re-encoding mismatch at slot {j}: {self._segment} vs {runs}")
        self.checks += 1
        self._segment = []

    def opponent_slot(self, letter: str):
        j = self.tracker.next_slot
        self._slot_writer(j)
        if letter not in self.coding.base:
            raise InputError(f"small opponent letter {letter!r} not in {self.coding.base}")
        self.pending = letter
        self._write(letter)
        self._close_slot(j, letter)

    def own_slot(self) -> str:
        j = self.tracker.next_slot
        self._slot_writer(j)
        out = self._big_move()
        if out not in self.coding.base:
            raise ExitsCoding(self.position + 1, f"a letter of {self.coding.base}", out)
        self._write(out)
        self._close_slot(j, out)
        return out


class LiftedP1(Player):
    def __init__(self, coding: Coding, big: Player):
        self.game = BigGame(coding, big, Role.P1)

    def move(self, observed):
        g = self.game
        if observed is not None:
            g.advance_to_slot()
            g.opponent_slot(observed)
        g.advance_to_slot()
        return g.own_slot()

    def close(self):
        self.game.big.close()


class LiftedP2(Player):
    def __init__(self, coding: Coding, big: Player):
        self.game = BigGame(coding, big, Role.P2)

    def move(self, observed):
        g = self.game
        g.advance_to_slot()
        g.opponent_slot(observed)
        g.advance_to_slot()
        return g.own_slot()

    def close(self):
        self.game.big.close()


def _lift(big: Strategy, coding: Coding, role: Role, cls) -> Procedural:
    if big.role != role:
        raise InputError(f"{big.name} is a {big.role} strategy, expected {role}")
    if big.game != "gs":
        raise InputError("only Gale-Stewart strategies can be lifted")
    if set(big.outputs) - set(coding.coded):
        raise InputError(f"{big.name} writes outside the coded alphabet {coding.coded}")
    return Procedural(f"lift{int(role)}[{big.name}]", role, coding.base, "gs",
                      lambda: cls(coding, big.start()))


def lift_p1(big: Strategy, coding: Coding) -> Procedural:
    """Small-game Player 1 strategy induced by a big-game Player 1 strategy."""
    return _lift(big, coding, Role.P1, LiftedP1)


def lift_p2(big: Strategy, coding: Coding) -> Procedural:
    """Small-game Player 2 strategy induced by a big-game Player 2 strategy."""
    return _lift(big, coding, Role.P2, LiftedP2)
