"""Gale-Stewart and Wadge game engines with finite-horizon adjudication.

Transcripts store the moves in play order: for Gale-Stewart games the
interleaved word a1 b1 a2 b2 ..., for Wadge games a1 m1 a2 m2 ... where
each m is a letter of the second alphabet or the skip symbol.  When both
strategies are finite-state the engine also computes the exact lasso the
play follows, by cycle detection on the joint state.
"""
from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from typing import Callable, Optional, Union

from ..automata.acceptance import Outcome
from ..automata.words import Lasso, as_word
from ..codings import PrefixVerdict
from ..errors import InputError
from ..langs.assembly import LanguageHandle
from .strategies import SKIP, FiniteState, Player, Role, Strategy


class Winner(enum.Enum):
    PLAYER1 = "Player1"
    PLAYER2 = "Player2"
    UNDETERMINED = "Undetermined"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class Verdict:
    winner: Winner
    reason: str  # membership | opponent-exited | b-finite | horizon
    detail: str = ""

    def __str__(self):
        tail = f" ({self.detail})" if self.detail else ""
        return f"{self.winner} [{self.reason}]{tail}"


@dataclass(frozen=True)
class PlayTranscript:
    kind: str  # "gs" or "wadge"
    moves: tuple
    horizon: int
    lasso: Optional[Lasso] = None  # gs: the play; wadge: Player 1's word a
    b_lasso: Optional[Lasso] = None  # wadge only
    b_finite: bool = False  # wadge: an all-skip cycle was certified
    b_spoke: tuple = ()  # wadge: the whole of b when b_finite

    @property
    def word(self) -> tuple:
        if self.kind != "gs":
            raise InputError("word is defined for Gale-Stewart transcripts")
        return self.moves

    @property
    def a_prefix(self) -> tuple:
        return self.moves[0::2]

    @property
    def p2_moves(self) -> tuple:
        return self.moves[1::2]

    @property
    def b_prefix(self) -> tuple:
        if self.kind == "gs":
            return self.p2_moves
        return tuple(m for m in self.p2_moves if m != SKIP)

    @property
    def skips(self) -> tuple:
        """Rounds (1-indexed) in which Player 2 skipped."""
        return tuple(i for i, m in enumerate(self.p2_moves, 1) if m == SKIP)

    @property
    def has_lasso_form(self) -> bool:
        return self.lasso is not None

    def records(self):
        for pos, letter in enumerate(self.moves, 1):
            yield {"pos": pos, "writer": "P1" if pos % 2 else "P2", "letter": letter}

    def to_jsonl(self) -> str:
        return "".join(json.dumps(r, ensure_ascii=False) + "\n" for r in self.records())

    def summary(self) -> str:
        if self.kind == "gs":
            s = f"word={''.join(self.moves) or 'λ'}"
            if self.lasso is not None:
                s += f" lasso={self.lasso}"
            return s
        s = f"a={''.join(self.a_prefix) or 'λ'} b={''.join(self.b_prefix) or 'λ'} skips={len(self.skips)}"
        if self.lasso is not None:
            s += f" a-lasso={self.lasso}"
        if self.b_finite:
            s += " b-finite(all-skip cycle)"
        elif self.b_lasso is not None:
            s += f" b-lasso={self.b_lasso}"
        return s


def _player(s) -> Player:
    return s if isinstance(s, Player) else s.start()


def _check_roles(s1, s2, game):
    for s, role in ((s1, Role.P1), (s2, Role.P2)):
        if isinstance(s, Strategy):
            if s.role != role:
                raise InputError(f"{s.name} is a {s.role} strategy, used as {role}")
            if s.game != game:
                raise InputError(f"{s.name} is a {s.game} strategy, used in a {game} game")


# ------------------------------------------------------------ Gale-Stewart

def _gs_lasso(m1: FiniteState, m2: FiniteState) -> Lasso:
    """Exact play of two transducers: rounds repeat once (q1, q2, last) does."""
    q1, q2, last = m1.initial, m2.initial, None
    seen = {}
    rounds = []
    while (q1, q2, last) not in seen:
        seen[(q1, q2, last)] = len(rounds)
        q1, a = m1.step(q1, last)
        q2, b = m2.step(q2, a)
        rounds.append((a, b))
        last = b
    start = seen[(q1, q2, last)]
    flat = lambda rs: tuple(x for r in rs for x in r)
    return Lasso(flat(rounds[:start]), flat(rounds[start:]))


def gs_play(f1: Union[Strategy, Player], f2: Union[Strategy, Player], horizon: int) -> PlayTranscript:
    """Play ``horizon`` rounds; the transcript has length 2 * horizon."""
    if horizon < 0:
        raise InputError("horizon must be >= 0")
    _check_roles(f1, f2, "gs")
    if isinstance(f1, Strategy) and isinstance(f2, Strategy):
        if set(f1.outputs) != set(f2.outputs):
            raise InputError(f"alphabets differ: {f1.outputs} vs {f2.outputs}")
    p1, p2 = _player(f1), _player(f2)
    moves = []
    try:
        last = None
        for n in range(horizon):
            a = p1.move(last)
            if isinstance(f1, Strategy):
                f1.check_output(a, 2 * n + 1)
            b = p2.move(a)
            if isinstance(f2, Strategy):
                f2.check_output(b, 2 * n + 2)
            moves += (a, b)
            last = b
    finally:
        for p in (p1, p2):
            if p is not f1 and p is not f2:
                p.close()
    lasso = None
    if isinstance(f1, FiniteState) and isinstance(f2, FiniteState):
        lasso = _gs_lasso(f1, f2)
    return PlayTranscript("gs", tuple(moves), horizon, lasso)


def gs_adjudicate(t: PlayTranscript, winning_set: LanguageHandle) -> Verdict:
    """Player 1 wins iff the play is in the winning set."""
    if t.kind != "gs":
        raise InputError("gs_adjudicate needs a Gale-Stewart transcript")
    if t.lasso is not None:
        r = winning_set.lasso_oracle(t.lasso)
        if r is Outcome.UNKNOWN:
            return Verdict(Winner.UNDETERMINED, "membership", "oracle unknown")
        return Verdict(Winner.PLAYER1 if r is Outcome.ACCEPT else Winner.PLAYER2, "membership")
    r = winning_set.prefix_oracle(t.moves)
    if r is Outcome.UNKNOWN:
        return Verdict(Winner.UNDETERMINED, "horizon")
    winner = Winner.PLAYER1 if r is Outcome.ACCEPT else Winner.PLAYER2
    if winning_set.prefix_classifier is not None:
        v = winning_set.prefix_classifier(t.moves)
        if not v.in_pref:
            who = "Player1" if v.exited_at % 2 else "Player2"
            return Verdict(winner, "opponent-exited", f"{who} left the coding at {v.exited_at}")
    return Verdict(winner, "membership", "decided by the prefix")


# ------------------------------------------------------------ Wadge

def _wadge_lasso(m1: FiniteState, m2: FiniteState):
    q1, q2, last = m1.initial, m2.initial, None
    seen = {}
    rounds = []
    while (q1, q2, last) not in seen:
        seen[(q1, q2, last)] = len(rounds)
        q1, a = m1.step(q1, last)
        q2, m = m2.step(q2, a)
        rounds.append((a, m))
        last = m
    start = seen[(q1, q2, last)]
    a_lasso = Lasso([a for a, _ in rounds[:start]], [a for a, _ in rounds[start:]])
    b_spoke = tuple(m for _, m in rounds[:start] if m != SKIP)
    b_cycle = tuple(m for _, m in rounds[start:] if m != SKIP)
    if not b_cycle:
        return a_lasso, None, True, b_spoke
    return a_lasso, Lasso(b_spoke, b_cycle), False, ()


def wadge_play(s1: Union[Strategy, Player], s2: Union[Strategy, Player], horizon: int) -> PlayTranscript:
    if horizon < 0:
        raise InputError("horizon must be >= 0")
    _check_roles(s1, s2, "wadge")
    p1, p2 = _player(s1), _player(s2)
    moves = []
    try:
        last = None
        for n in range(horizon):
            a = p1.move(last)
            if a == SKIP:
                raise InputError(f"Player1 may not skip (move {2 * n + 1})")
            if isinstance(s1, Strategy):
                s1.check_output(a, 2 * n + 1)
            m = p2.move(a)
            if isinstance(s2, Strategy):
                s2.check_output(m, 2 * n + 2)
            moves += (a, m)
            last = m
    finally:
        for p in (p1, p2):
            if p is not s1 and p is not s2:
                p.close()
    if isinstance(s1, FiniteState) and isinstance(s2, FiniteState):
        a_lasso, b_lasso, b_finite, b_spoke = _wadge_lasso(s1, s2)
        return PlayTranscript("wadge", tuple(moves), horizon, a_lasso, b_lasso, b_finite, b_spoke)
    return PlayTranscript("wadge", tuple(moves), horizon)


def wadge_adjudicate(t: PlayTranscript, L: LanguageHandle, L2: LanguageHandle) -> Verdict:
    """Player 2 wins iff b is infinite and (a in L iff b in L2)."""
    if t.kind != "wadge":
        raise InputError("wadge_adjudicate needs a Wadge transcript")
    if t.b_finite:
        return Verdict(Winner.PLAYER1, "b-finite", "all-skip cycle")
    if t.lasso is not None and t.b_lasso is not None:
        ra, rb = L.lasso_oracle(t.lasso), L2.lasso_oracle(t.b_lasso)
        if Outcome.UNKNOWN in (ra, rb):
            return Verdict(Winner.UNDETERMINED, "membership", "oracle unknown")
        return Verdict(Winner.PLAYER2 if ra == rb else Winner.PLAYER1, "membership")
    ra, rb = L.prefix_oracle(t.a_prefix), L2.prefix_oracle(t.b_prefix)
    if Outcome.UNKNOWN not in (ra, rb) and ra != rb:
        # a mismatch already decided; finiteness of b cannot rescue Player 2
        return Verdict(Winner.PLAYER1, "membership", "decided by the prefixes")
    return Verdict(Winner.UNDETERMINED, "horizon")


# ------------------------------------------------------------ coding discipline

@dataclass(frozen=True)
class Forced:
    letter: str


@dataclass(frozen=True)
class FreeSlot:
    writer: Role
    x_index: int


@dataclass(frozen=True)
class AlreadyExited:
    position: int


def forced_move(classifier: Callable[[tuple], PrefixVerdict], w):
    """What the coding demands after ``w``."""
    w = as_word(w)
    v = classifier(w)
    if not v.in_pref:
        return AlreadyExited(v.exited_at)
    if v.next_forced is not None:
        return Forced(v.next_forced)
    if v.next_slot is None:
        raise InputError("classifier reports neither a forced letter nor a slot")
    return FreeSlot(Role.P1 if (len(w) + 1) % 2 else Role.P2, v.next_slot)


@dataclass(frozen=True)
class ExitEvent:
    player: Role
    position: int


def detect_exit(t, classifier: Callable[[tuple], PrefixVerdict]) -> Optional[ExitEvent]:
    """First position leaving the coded prefix set, attributed by parity."""
    moves = t.moves if isinstance(t, PlayTranscript) else as_word(t)
    v = classifier(moves)
    if v.in_pref:
        return None
    return ExitEvent(Role.P1 if v.exited_at % 2 else Role.P2, v.exited_at)
