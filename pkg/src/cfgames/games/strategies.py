"""Strategies for Gale-Stewart and Wadge games.

A strategy is a recipe; ``start()`` gives a fresh :class:`Player` for one
play.  Players are fed the opponent's last move and answer with their own:
``move(observed)`` where ``observed`` is None on Player 1's very first turn
and ``"s"`` when a Wadge Player 2 skipped.

Finite-state strategies are Mealy machines keyed by (state, observed).
They are immutable and shareable; procedural and scripted players carry
private state, so each play must call ``start()`` anew.
"""
from __future__ import annotations

import enum
import random
import shlex
import subprocess
from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional

from ..automata.words import Alphabet, Lasso, check_letter, parse_lasso
from ..codings import Coding, CodingTracker
from ..errors import ExitsCoding, InputError, ParseError, SessionError

SKIP = "s"
START = None


class Role(enum.IntEnum):
    P1 = 1
    P2 = 2

    def __str__(self):
        return f"Player{self.value}"

    @classmethod
    def parse(cls, text) -> "Role":
        key = str(text).lower().replace("player", "p")
        if key in ("p1", "1"):
            return cls.P1
        if key in ("p2", "2"):
            return cls.P2
        raise InputError(f"unknown role {text!r}")


class Player:
    def move(self, observed: Optional[str]) -> str:
        raise NotImplementedError

    def close(self) -> None:
        pass


@dataclass(frozen=True)
class Strategy:
    name: str
    role: Role
    outputs: Alphabet
    game: str = "gs"  # "gs" or "wadge"

    def start(self) -> Player:
        raise NotImplementedError

    @property
    def may_skip(self) -> bool:
        return self.game == "wadge" and self.role == Role.P2

    @property
    def finite_state(self) -> bool:
        return False

    def check_output(self, letter, position) -> str:
        if letter == SKIP and self.may_skip:
            return letter
        if letter not in self.outputs:
            raise SessionError(f"{self.name} produced {letter!r} at move {position}, "
                               f"not in {self.outputs}" + (" or s" if self.may_skip else ""))
        return letter


# ------------------------------------------------------------------ finite state

class _MealyPlayer(Player):
    __slots__ = ("m", "state")

    def __init__(self, m: "FiniteState"):
        self.m = m
        self.state = m.initial

    def move(self, observed):
        try:
            self.state, out = self.m.table[(self.state, observed)]
        except KeyError:
            raise SessionError(f"{self.m.name}: no move from state {self.state!r} "
                               f"on {observed!r}") from None
        return out


@dataclass(frozen=True)
class FiniteState(Strategy):
    """Deterministic transducer: (state, observed) -> (state, output)."""

    initial: str = "q0"
    table: Mapping = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "table", dict(self.table))
        for (q, obs), (q2, out) in self.table.items():
            if out != SKIP or not self.may_skip:
                if out not in self.outputs:
                    raise InputError(f"{self.name}: output {out!r} outside {self.outputs}")

    @property
    def finite_state(self) -> bool:
        return True

    def start(self) -> Player:
        return _MealyPlayer(self)

    def step(self, state, observed):
        return self.table[(state, observed)]

    def states(self) -> set:
        out = {self.initial}
        for (q, _), (q2, _) in self.table.items():
            out.update((q, q2))
        return out

    def check_total(self, observations) -> None:
        for q in self.states():
            for obs in observations:
                if (q, obs) not in self.table:
                    raise InputError(f"{self.name}: missing move for state {q!r} on {obs!r}")


def observation_alphabet(role: Role, game: str, opponent: Alphabet) -> list:
    """What a player of ``role`` can observe, START included for Player 1."""
    if role == Role.P1:
        obs = [START] + list(opponent)
        if game == "wadge":
            obs.append(SKIP)
        return obs
    return list(opponent)


def _uniform(name, role, outputs, game, observations, fn):
    """One-state Mealy machine whose output depends on the observation only."""
    table = {("q0", o): ("q0", fn(o)) for o in observations}
    return FiniteState(name, role, outputs, game, "q0", table)


def const(letter, role=Role.P1, alphabet=None, game="gs", opponent=None):
    alphabet = Alphabet(alphabet or letter)
    opponent = Alphabet(opponent) if opponent else alphabet
    check_letter(letter)
    obs = observation_alphabet(role, game, opponent)
    return _uniform(f"const:{letter}", role, alphabet, game, obs, lambda o: letter)


def copy_last(role=Role.P2, alphabet="ab", game="gs", opponent=None):
    """Repeat the opponent's last letter (Player 1 opens with the first letter)."""
    alphabet = Alphabet(alphabet)
    opponent = Alphabet(opponent) if opponent else alphabet
    obs = observation_alphabet(role, game, opponent)
    first = alphabet.letters[0]
    table = {}
    for o in obs:
        if o in (START, SKIP):
            table[("q0", o)] = ("q0", first)
        elif o in alphabet:
            table[("q0", o)] = ("q0", o)
        else:
            raise InputError(f"copy: observed letter {o!r} is not an output letter")
    return FiniteState("copy", role, alphabet, game, "q0", table)


def always_skip(opponent="01", outputs="01"):
    obs = list(Alphabet(opponent))
    return _uniform("always-skip", Role.P2, Alphabet(outputs), "wadge", obs, lambda o: SKIP)


def skip_once_then_copy(alphabet="01"):
    alphabet = Alphabet(alphabet)
    table = {}
    for o in alphabet:
        table[("q0", o)] = ("q1", SKIP)
        table[("q1", o)] = ("q1", o)
    return FiniteState("skip-once-then-copy", Role.P2, alphabet, "wadge", "q0", table)


def first_letter_switch(trigger="1", yes="1", no="0", opponent="01", outputs="01"):
    """Wadge Player 2: emit ``yes`` forever if a(1) = trigger, else ``no`` forever."""
    opponent = Alphabet(opponent)
    table = {}
    for o in opponent:
        table[("q0", o)] = ("yes", yes) if o == trigger else ("no", no)
        table[("yes", o)] = ("yes", yes)
        table[("no", o)] = ("no", no)
    return FiniteState(f"first-letter-switch:{trigger}", Role.P2, Alphabet(outputs),
                       "wadge", "q0", table)


def lasso_player(l: Lasso, role=Role.P1, alphabet=None, game="gs", opponent=None):
    """Plays the letters of a lasso, one per own turn, ignoring the opponent."""
    word = l.spoke + l.cycle
    alphabet = Alphabet(alphabet) if alphabet else Alphabet(sorted(set(word)))
    opponent = Alphabet(opponent) if opponent else alphabet
    obs = observation_alphabet(role, game, opponent)
    n, back = len(word), len(l.spoke)
    table = {}
    for i, a in enumerate(word):
        nxt = i + 1 if i + 1 < n else back
        for o in obs:
            table[(f"w{i}", o)] = (f"w{nxt}", a)
    return FiniteState(f"word:{l}", role, alphabet, game, "w0", table)


# ------------------------------------------------------------------ procedural

@dataclass(frozen=True)
class Procedural(Strategy):
    factory: Callable[[], Player] = None

    def start(self) -> Player:
        return self.factory()


class _RandomPlayer(Player):
    def __init__(self, letters, seed, skip_rate):
        self.rng = random.Random(seed)
        self.letters = letters
        self.skip_rate = skip_rate

    def move(self, observed):
        if self.skip_rate and self.rng.random() < self.skip_rate:
            return SKIP
        return self.rng.choice(self.letters)


def random_player(alphabet, seed: int, role=Role.P2, game="gs", skip_rate=0.0):
    alphabet = Alphabet(alphabet)
    letters = alphabet.letters
    return Procedural(f"random:{seed}", role, alphabet, game,
                      lambda: _RandomPlayer(letters, seed, skip_rate))


class ForcedThenPlayer(Player):
    """Big-game player: the forced letter at padding positions, a fixed
    letter at its own free slots.

    It tracks the coded play through a :class:`CodingTracker`, fed with both
    sides' letters.  ``fast_forward`` consumes the padding up to the next
    slot in one step.
    """

    def __init__(self, coding: Coding, letter: str, role: Role):
        self.tracker: CodingTracker = coding.tracker()
        self.letter = letter
        self.role = role

    def move(self, observed):
        tracker = self.tracker
        if observed is not None:
            tracker.feed(observed)
        out = tracker.next_forced
        if out is None:
            out = self.letter
        tracker.feed(out)
        return out

    def fast_forward(self, runs: tuple) -> bool:
        """Both sides write the forced ``runs`` up to the next slot."""
        if runs != self.tracker.runs_to_slot():
            return False
        self.tracker.skip_to_slot()
        return True


def forced_then(coding: Coding, letter: str, role=Role.P1):
    if letter not in coding.base:
        raise InputError(f"{letter!r} is not a base letter of {coding.describe()}")
    return Procedural(f"forced-then:{letter}", role, coding.coded, "gs",
                      lambda: ForcedThenPlayer(coding, letter, role))


# ------------------------------------------------------------------ scripted

class _ScriptedPlayer(Player):
    def __init__(self, strategy: "Scripted"):
        self.s = strategy
        self.turn = 0
        try:
            self.proc = subprocess.Popen(shlex.split(strategy.command), stdin=subprocess.PIPE,
                                         stdout=subprocess.PIPE, text=True, bufsize=1)
        except OSError as e:
            raise SessionError(f"cannot start {strategy.command!r}: {e}") from None

    def move(self, observed):
        self.turn += 1
        last = "-" if observed is None else observed
        try:
            self.proc.stdin.write(f"TURN {self.turn} {last}\n")
            self.proc.stdin.flush()
            reply = self.proc.stdout.readline()
        except (BrokenPipeError, OSError) as e:
            raise SessionError(f"{self.s.name}: session closed at turn {self.turn}: {e}") from None
        if not reply:
            raise SessionError(f"{self.s.name}: no reply at turn {self.turn}")
        token = reply.strip()
        if token == SKIP and self.s.may_skip:
            return token
        if token not in self.s.outputs or len(reply.split()) != 1:
            raise SessionError(f"{self.s.name}: invalid reply {reply.strip()!r} at turn {self.turn}")
        return token

    def close(self):
        try:
            self.proc.stdin.close()
        except OSError:
            pass
        try:
            self.proc.wait(timeout=5)
        except subprocess.TimeoutExpired:
            self.proc.kill()


@dataclass(frozen=True)
class Scripted(Strategy):
    command: str = ""

    def start(self) -> Player:
        return _ScriptedPlayer(self)


# ------------------------------------------------------------------ mealy files

def parse_mealy(text: str, game: str = "gs") -> FiniteState:
    """Transducer table format::

        strategy <name>
        role p1|p2
        alphabet <letter>...
        initial <state>
        move <state> <observed|-> <next-state> <output>
    """
    fields = {}
    table = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, *rest = line.split()
        if head == "move":
            if len(rest) != 4:
                raise ParseError("move needs <state> <observed|-> <next> <output>", lineno)
            q, obs, q2, out = rest
            key = (q, None if obs == "-" else obs)
            if key in table:
                raise ParseError(f"duplicate move for {key}", lineno)
            table[key] = (q2, out)
        elif head in ("strategy", "role", "alphabet", "initial", "game"):
            fields[head] = rest
        else:
            raise ParseError(f"unknown directive {head!r}", lineno)
    for key in ("strategy", "role", "alphabet", "initial"):
        if key not in fields:
            raise ParseError(f"missing directive {key}")
    game = fields.get("game", [game])[0]
    try:
        return FiniteState(fields["strategy"][0], Role.parse(fields["role"][0]),
                           Alphabet(fields["alphabet"]), game, fields["initial"][0], table)
    except InputError as e:
        raise ParseError(str(e)) from None


def dump_mealy(m: FiniteState) -> str:
    lines = [f"strategy {m.name}", f"role p{int(m.role)}", f"game {m.game}",
             "alphabet " + " ".join(m.outputs), f"initial {m.initial}"]
    for (q, obs), (q2, out) in m.table.items():
        lines.append(f"move {q} {'-' if obs is None else obs} {q2} {out}")
    return "\n".join(lines) + "\n"


# ------------------------------------------------------------------ specifiers

def resolve_strategy(spec: str, role: Role, game: str = "gs", alphabet="ab",
                     opponent=None, coding: Optional[Coding] = None) -> Strategy:
    """Build a strategy from ``builtin:<name>[:params]``, ``mealy:<file>``
    or ``proc:<command>``."""
    kind, _, rest = spec.partition(":")
    alphabet = Alphabet(alphabet)
    opponent = Alphabet(opponent) if opponent else alphabet
    if kind == "builtin":
        name, _, params = rest.partition(":")
        args = params.split(":") if params else []
        if name == "const":
            if len(args) != 1:
                raise InputError("builtin:const needs a letter, e.g. builtin:const:a")
            return const(args[0], role, alphabet, game, opponent)
        if name in ("copy", "copy-last"):
            return copy_last(role, alphabet, game, opponent)
        if name == "forced-then":
            if coding is None:
                raise InputError("builtin:forced-then needs a coding (--coding)")
            if len(args) != 1:
                raise InputError("builtin:forced-then needs a letter")
            return forced_then(coding, args[0], role)
        if name == "first-letter-switch":
            trig, yes, no = (args + ["1", "1", "0"][len(args):])[:3]
            return first_letter_switch(trig, yes, no, opponent, alphabet)
        if name == "always-skip":
            return always_skip(opponent, alphabet)
        if name == "skip-once-then-copy":
            return skip_once_then_copy(alphabet)
        if name == "word":
            return lasso_player(parse_lasso(params), role, alphabet, game, opponent)
        if name == "random":
            seed = int(args[0]) if args else 0
            return random_player(alphabet, seed, role, game)
        raise InputError(f"unknown builtin strategy {name!r}")
    if kind == "mealy":
        try:
            with open(rest, encoding="utf-8") as fh:
                m = parse_mealy(fh.read(), game)
        except OSError as e:
            raise InputError(f"cannot read {rest}: {e}") from None
        if m.role != role:
            raise InputError(f"{rest} is a {m.role} strategy, expected {role}")
        return m
    if kind == "proc":
        return Scripted(f"proc:{rest}", role, alphabet, game, rest)
    raise InputError(f"unknown strategy specifier {spec!r}")
