"""Language handles: a machine paired with an independent semantic oracle.

Oracles decide membership by decoding and classification, never by running
the machine they sit next to.  Lasso oracles are three-valued (Outcome);
prefix oracles answer ACCEPT or REJECT only when every extension of the
prefix agrees.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional

from ..automata.acceptance import Outcome
from ..automata.closure import intersect_regular, union
from ..automata.machine import CounterBuchiMachine
from ..automata.words import Alphabet, Lasso, as_word
from ..codings import (HParams, PrefixVerdict, ThetaParams, h_classify, h_lasso_exit,
                       theta_classify, theta_lasso_exit)
from ..errors import InputError
from . import shapes
from .machines import (build_H_automaton, build_Lprime, build_UGammaomega, build_VComega,
                       first_letter_automaton, format_cond, zero_star_one)


def _unknown(_):
    return Outcome.UNKNOWN


@dataclass(frozen=True)
class LanguageHandle:
    name: str
    alphabet: Alphabet
    automaton: Optional[CounterBuchiMachine] = None
    lasso_oracle: Callable[[Lasso], Outcome] = _unknown
    prefix_oracle: Callable[[tuple], Outcome] = _unknown
    prefix_classifier: Optional[Callable] = None
    meta: dict = field(default_factory=dict)


def oracle_membership(handle: LanguageHandle, l: Lasso) -> Outcome:
    return handle.lasso_oracle(l)


@dataclass(frozen=True)
class ClopenCondition:
    """Base language {x : x(i) = a for every i -> a}."""

    constraints: Mapping[int, str]

    def __post_init__(self):
        object.__setattr__(self, "constraints", dict(self.constraints))
        for i, a in self.constraints.items():
            if not isinstance(i, int) or i < 1:
                raise InputError(f"constraint position {i!r} must be >= 1")

    def check_alphabet(self, alphabet):
        for a in self.constraints.values():
            if a not in alphabet:
                raise InputError(f"constraint letter {a!r} not in {alphabet}")
        return self

    @property
    def depth(self) -> int:
        return max(self.constraints, default=0)

    def holds_on_lasso(self, x: Lasso) -> bool:
        return all(x.letter(i) == a for i, a in self.constraints.items())

    def on_prefix(self, x) -> Outcome:
        x = as_word(x)
        for i, a in self.constraints.items():
            if i <= len(x) and x[i - 1] != a:
                return Outcome.REJECT
        return Outcome.ACCEPT if len(x) >= self.depth else Outcome.UNKNOWN

    def negated(self) -> "NegatedCondition":
        return NegatedCondition(self)

    def __str__(self):
        return format_cond(self.constraints)


@dataclass(frozen=True)
class NegatedCondition:
    base: ClopenCondition

    def holds_on_lasso(self, x: Lasso) -> bool:
        return not self.base.holds_on_lasso(x)

    def on_prefix(self, x) -> Outcome:
        r = self.base.on_prefix(x)
        return {Outcome.ACCEPT: Outcome.REJECT, Outcome.REJECT: Outcome.ACCEPT}.get(r, r)

    def __str__(self):
        return f"not({self.base})"


def clopen_handle(alphabet, cond, name=None) -> LanguageHandle:
    """Handle for a clopen base language over ``alphabet`` (no machine)."""
    alphabet = Alphabet(alphabet) if not isinstance(alphabet, Alphabet) else alphabet
    if isinstance(cond, Mapping):
        cond = ClopenCondition(cond)
    return LanguageHandle(
        name=name or str(cond),
        alphabet=alphabet,
        lasso_oracle=lambda l: Outcome.of(cond.holds_on_lasso(l)),
        prefix_oracle=cond.on_prefix,
        meta={"condition": str(cond)},
    )


def zero_star_one_handle() -> LanguageHandle:
    def lasso(l: Lasso) -> Outcome:
        return Outcome.of("1" in l.cycle)
    return LanguageHandle("(0*1)^w", Alphabet("01"), zero_star_one(), lasso, _unknown)


def first_letter_handle(alphabet, letter: str) -> LanguageHandle:
    def lasso(l: Lasso) -> Outcome:
        return Outcome.of(l.letter(1) == letter)

    def prefix(w) -> Outcome:
        w = as_word(w)
        return Outcome.of(w[0] == letter) if w else Outcome.UNKNOWN
    m = first_letter_automaton(alphabet, letter)
    return LanguageHandle(f"{letter}.S^w", m.alphabet, m, lasso, prefix)


# ------------------------------------------------------------------ H-side handles

def H_handle(p: HParams) -> LanguageHandle:
    return LanguageHandle(
        "H", p.coded_alphabet, build_H_automaton(p),
        lambda l: Outcome.of(shapes.in_H(p, l)),
        lambda w: Outcome.REJECT if not shapes.classify_pref_H(p, w).in_pref else Outcome.UNKNOWN,
        lambda w: shapes.classify_pref_H(p, w),
    )


def h_complement_oracle(p: HParams, l: Lasso) -> Outcome:
    """A lasso is outside h(gamma^omega) iff it exits Pref(h(gamma^omega)).

    Blocks of an h image grow without bound, so every lasso exits; UNKNOWN
    only reports an exhausted search budget.  The same verdict serves
    h(L0) ∪ complement for any base language L0.
    """
    return Outcome.ACCEPT if h_lasso_exit(p, l) is not None else Outcome.UNKNOWN


def assemble_A3(a2: CounterBuchiMachine, p: HParams) -> CounterBuchiMachine:
    return intersect_regular(a2, build_H_automaton(p), name=f"A3[{a2.name}]")


def A3_oracle(p: HParams, l: Lasso) -> Outcome:
    """h(L0) ∪ [complement ∩ H]; a lasso is never an image, so this is H."""
    if h_lasso_exit(p, l) is None:
        return Outcome.UNKNOWN
    return Outcome.of(shapes.in_H(p, l))


def game_language_oracle(p: HParams, l: Lasso) -> Outcome:
    if h_lasso_exit(p, l) is None:
        return Outcome.UNKNOWN
    return Outcome.of(shapes.in_H(p, l) or shapes.in_V_Comega(p, l) or shapes.in_U_Gamma(p, l))


def game_language_prefix(p: HParams, w) -> Outcome:
    """Prefix decisions for the game language: first exit from Pref(H)."""
    v = shapes.classify_pref_H(p, w)
    if v.in_pref:
        return Outcome.UNKNOWN
    return Outcome.of(v.exited_at % 2 == 0)


def assemble_game_language(a3: CounterBuchiMachine, p: HParams, base: Optional[ClopenCondition] = None) -> LanguageHandle:
    """A4 = a3 ∪ V.C^omega ∪ U.G1^omega with its composed semantic oracle."""
    regular = union(build_VComega(p), build_UGammaomega(p), name="V.C^w+U.G1^w")
    a4 = union(a3, regular, name=f"A4[{a3.name}]")
    return LanguageHandle(
        name="game-language",
        alphabet=p.coded_alphabet,
        automaton=a4,
        lasso_oracle=lambda l: game_language_oracle(p, l),
        prefix_oracle=lambda w: game_language_prefix(p, w),
        prefix_classifier=lambda w: h_classify(p, w),
        meta={"coding": p.describe(), "base": str(base) if base is not None else None},
    )


# ------------------------------------------------------------------ theta side

def Lprime_oracle(p: ThetaParams, l: Lasso) -> Outcome:
    e = theta_lasso_exit(p, l)
    if e is None:
        return Outcome.UNKNOWN
    return Outcome.of(e % 2 == 0)


def Lprime_definition(p: ThetaParams, y) -> bool:
    """Definitional form: some n with y[2n-1] inside and y[2n] outside."""
    y = as_word(y)
    for n in range(1, len(y) // 2 + 1):
        if theta_classify(p, y[:2 * n - 1]).in_pref and not theta_classify(p, y[:2 * n]).in_pref:
            return True
    return False


def theta_game_prefix(p: ThetaParams, w) -> Outcome:
    v = theta_classify(p, w)
    if v.in_pref:
        return Outcome.UNKNOWN
    return Outcome.of(v.exited_at % 2 == 0)


def assemble_theta_game(a2theta: CounterBuchiMachine, p: ThetaParams,
                        base: Optional[ClopenCondition] = None) -> LanguageHandle:
    """theta_S(L) ∪ L' as the union of a theta_S(L) machine with build_Lprime."""
    m = union(a2theta, build_Lprime(p), name=f"theta-game[{a2theta.name}]")
    return LanguageHandle(
        name="theta-game",
        alphabet=p.coded_alphabet,
        automaton=m,
        lasso_oracle=lambda l: Lprime_oracle(p, l),
        prefix_oracle=lambda w: theta_game_prefix(p, w),
        prefix_classifier=lambda w: theta_classify(p, w),
        meta={"coding": p.describe(), "base": str(base) if base is not None else None},
    )


def coded_prefix_verdict(handle: LanguageHandle, w) -> Optional[PrefixVerdict]:
    return handle.prefix_classifier(w) if handle.prefix_classifier else None
