"""Direct constructions of the counter and Büchi machines used by the games.

Counter convention for the two-counter padding checkers: one counter holds
the length P of the previous block and is decremented once every S letters
of the current block (mod-S finite control), while the other counts the
current block up.  A block is complete exactly when the phase is 0 and P is
zero; the counters then swap roles.
"""
from __future__ import annotations

from typing import Mapping

from ..automata.closure import union
from ..automata.machine import CounterBuchiMachine, RuleBuilder
from ..automata.words import Alphabet
from ..codings import HParams, ThetaParams, h_slot_position
from ..errors import InputError
from .shapes import SHAPE_INITIAL, SHAPE_STATES, SHAPE_X_STATES, shape_delta

ANY = None


def _machine(name, alphabet, rb, accepting, initial, k, states=None):
    seen = [initial]
    for r in rb.rules:
        for q in (r.source, r.target):
            if q not in seen:
                seen.append(q)
    for q in states or ():
        if q not in seen:
            seen.append(q)
    return CounterBuchiMachine(name=name, alphabet=alphabet, states=tuple(seen),
                               initial=initial, accepting=frozenset(accepting) & set(seen),
                               rules=tuple(rb.rules), k=k, realtime=True)


def zero_star_one() -> CounterBuchiMachine:
    """Büchi automaton for (0*1)^omega: infinitely many 1s."""
    rb = RuleBuilder(0)
    for q in ("q0", "q1"):
        rb.add(q, "0", "q0")
        rb.add(q, "1", "q1")
    return _machine("zero-star-one", Alphabet("01"), rb, {"q1"}, "q0", 0)


def first_letter_automaton(alphabet, letter: str) -> CounterBuchiMachine:
    """Büchi automaton for letter.alphabet^omega."""
    alphabet = Alphabet(alphabet) if not isinstance(alphabet, Alphabet) else alphabet
    if letter not in alphabet:
        raise InputError(f"{letter!r} not in {alphabet}")
    rb = RuleBuilder(0)
    rb.add("s", letter, "t")
    for a in alphabet:
        rb.add("t", a, "t")
    return _machine(f"first-{letter}", alphabet, rb, {"t"}, "s", 0)


def universal_automaton(alphabet) -> CounterBuchiMachine:
    alphabet = Alphabet(alphabet) if not isinstance(alphabet, Alphabet) else alphabet
    rb = RuleBuilder(0)
    for a in alphabet:
        rb.add("all", a, "all")
    return _machine("universal", alphabet, rb, {"all"}, "all", 0)


# ------------------------------------------------------------------ H and friends

def build_H_automaton(p: HParams) -> CounterBuchiMachine:
    """Deterministic Büchi automaton for H; accepting on x-letter reads."""
    rb = RuleBuilder(0)
    for (q, a), t in shape_delta(p).items():
        rb.add(q, a, t)
    return _machine("H", p.coded_alphabet, rb, SHAPE_X_STATES, SHAPE_INITIAL, 0, SHAPE_STATES)


def build_VComega(p: HParams) -> CounterBuchiMachine:
    rb = RuleBuilder(0)
    for (q, a), t in shape_delta(p).items():
        rb.add(q, a, t)
        if a == p.C:
            rb.add(q, p.C, "cstar")
    rb.add("cstar", p.C, "cstar")
    return _machine("V.C^w", p.coded_alphabet, rb, {"cstar"}, SHAPE_INITIAL, 0)


def build_UGammaomega(p: HParams) -> CounterBuchiMachine:
    delta = shape_delta(p)
    rb = RuleBuilder(0)
    for q in SHAPE_STATES:
        for par in (0, 1):
            for a in p.coded_alphabet:
                t = delta.get((q, a))
                if t is not None:
                    rb.add(f"{q}.{par}", a, f"{t}.{1 - par}")
                elif par == 1:
                    rb.add(f"{q}.{par}", a, "all")
    for a in p.coded_alphabet:
        rb.add("all", a, "all")
    return _machine("U.G1^w", p.coded_alphabet, rb, {"all"}, f"{SHAPE_INITIAL}.0", 0)


def build_regular_parts(p: HParams) -> dict:
    from .shapes import U_dfa, V_dfa
    return {
        "V_dfa": V_dfa(p),
        "U_dfa": U_dfa(p),
        "VComega": build_VComega(p),
        "UGammaomega": build_UGammaomega(p),
    }


# ------------------------------------------------------------------ theta side

def _pad(r, b, *extra):
    return "pad" + ".".join(str(v) for v in (r, b) + extra)


def _swap_tests(b, p_test):
    """Test vector with the P counter (index b) set, the other don't-care."""
    t = [ANY, ANY]
    t[b] = p_test
    return tuple(t)


def _upd(b, dp, dq):
    u = [0, 0]
    u[b] = dp
    u[1 - b] = dq
    return tuple(u)


def build_Lprime(p: ThetaParams) -> CounterBuchiMachine:
    """Real-time 2-counter machine for the words whose first exit from
    Pref(theta_S(sigma^omega)) happens at an even position."""
    S, E = p.S, p.pad
    sigma = list(p.sigma)
    coded = p.coded_alphabet
    rb = RuleBuilder(2)
    for a in sigma:
        rb.add("x1", a, _pad(0, 0, "e"), updates=(1, 0))

    def exit_to(src, a, par, tests):
        if par == "e":
            rb.add(src, a, "acc", tests=tests)

    for r in range(S):
        for b in (0, 1):
            for par in ("o", "e"):
                src = _pad(r, b, par)
                nxt = "e" if par == "o" else "o"
                r2 = (r + 1) % S
                # padding letter
                if r2 == 0:
                    rb.add(src, E, _pad(0, b, nxt), tests=_swap_tests(b, True), updates=_upd(b, -1, 1))
                elif r == 0:
                    rb.add(src, E, _pad(r2, b, nxt), tests=_swap_tests(b, True), updates=_upd(b, 0, 1))
                else:
                    rb.add(src, E, _pad(r2, b, nxt), updates=_upd(b, 0, 1))
                if r == 0:
                    # block complete: padding not allowed, base letter swaps roles
                    exit_to(src, E, par, _swap_tests(b, False))
                    for a in sigma:
                        rb.add(src, a, _pad(0, 1 - b, nxt), tests=_swap_tests(b, False))
                        exit_to(src, a, par, _swap_tests(b, True))
                else:
                    for a in sigma:
                        exit_to(src, a, par, None)
    for a in coded:
        rb.add("acc", a, "acc")
    return _machine(f"Lprime(S={S})", coded, rb, {"acc"}, "x1", 2)


def build_theta_checker(p: ThetaParams, cond: Mapping[int, str]) -> CounterBuchiMachine:
    """Real-time 2-counter machine for theta_S(L0), L0 = {x : x(i) = a for i -> a in cond}.

    Mismatches kill the run.  The x-index is tracked up to max(cond); the
    accepting states are those entered by reading an x-letter once every
    constraint is behind.
    """
    cond = _check_cond(cond, p.sigma)
    top = max(cond, default=0)
    S, E = p.S, p.pad
    rb = RuleBuilder(2)

    def idx_next(i):
        return min(i + 1, top + 1)

    def allowed(i, a):
        return cond.get(i, a) == a

    accepting = set()
    for a in p.sigma:
        if allowed(1, a):
            rb.add("x1", a, _pad(0, 0, idx_next(1), 1), updates=(1, 0))
    for i in range(1, top + 2):
        for b in (0, 1):
            for fresh in (0, 1):
                for r in range(S):
                    if fresh and r:
                        continue
                    src = _pad(r, b, i, fresh)
                    if fresh and i == top + 1:
                        accepting.add(src)
                    r2 = (r + 1) % S
                    if r2 == 0:
                        rb.add(src, E, _pad(0, b, i, 0), tests=_swap_tests(b, True), updates=_upd(b, -1, 1))
                    elif r == 0:
                        rb.add(src, E, _pad(r2, b, i, 0), tests=_swap_tests(b, True), updates=_upd(b, 0, 1))
                    else:
                        rb.add(src, E, _pad(r2, b, i, 0), updates=_upd(b, 0, 1))
                    if r == 0:
                        for a in p.sigma:
                            if allowed(i, a):
                                rb.add(src, a, _pad(0, 1 - b, idx_next(i), 1), tests=_swap_tests(b, False))
    return _machine(f"theta-check(S={S})", p.coded_alphabet, rb, accepting, "x1", 2)


def _check_cond(cond, alphabet) -> dict:
    cond = dict(cond or {})
    for i, a in cond.items():
        if not isinstance(i, int) or i < 1:
            raise InputError(f"condition position {i!r} must be an integer >= 1")
        if a not in alphabet:
            raise InputError(f"condition letter {a!r} not in {alphabet}")
    return cond


# ------------------------------------------------------------------ h side

def build_h_complement(p: HParams) -> CounterBuchiMachine:
    """Real-time 1-counter Büchi machine for the complement of h(gamma^omega).

    A word fails to be an h image iff one of these holds:

    * it leaves the loose shape (the h pattern with every C-run length
      free), or ends in an infinite run of C;
    * the first C-run does not have length K+1;
    * some block has a second C-run whose length is not the first one's plus one;
    * the first C-run of block 2 does not have length K*K, or the first
      C-run of block i+1 is not K times that of block i.

    The track component follows the loose shape and starts the counter
    checks nondeterministically at the first C of a block.
    """
    K = p.K
    A, B, C = p.markers
    gamma = list(p.gamma)
    coded = p.coded_alphabet
    rb = RuleBuilder(1)
    acc = "acc"
    Z, P = (False,), (True,)

    def track(q, a, t):
        rb.add(q, a, t)

    # loose shape; anything not listed leads to acc
    shape = {}
    for j in range(K + 2):
        shape[(f"F{j}", C)] = f"F{min(j + 1, K + 2)}"
    shape[(f"F{K + 1}", A)] = "FA"
    for x in gamma:
        shape[("FA", x)] = "XO"
    shape[("XO", C)] = "Pa.e"
    shape[("BO", C)] = "Pa.o"
    for par in ("e", "o"):
        shape[(f"Pa.{par}", C)] = f"Pa.{par}"
        shape[(f"Pa.{par}", A)] = f"PA.{par}"
        shape[(f"PA.{par}", C)] = f"Pb.{par}"
        shape[(f"Pb.{par}", C)] = f"Pb.{par}"
    shape[("Pb.o", A)] = "oA2"
    for x in gamma:
        shape[("Pb.e", x)] = "XE"
        shape[("oA2", x)] = "XO"
    shape[("XE", B)] = "BO"
    track_states = sorted({q for q, _ in shape} | set(shape.values()), key=str)
    for q in track_states:
        for a in coded:
            t = shape.get((q, a))
            track(q, a, t if t is not None else acc)
            if a == C:
                rb.add(q, C, "inf")
    rb.add("inf", C, "inf")
    for a in coded:
        rb.add(acc, a, acc)

    # first C-run: counter = r1 - 1, then compare with block 2
    rb.add("F0", C, "R1", updates=(1,))
    rb.add("R1", C, "R1", updates=(1,))
    rb.add("R1", A, "R1A", tests=P, updates=(-1,))
    for x in gamma:
        rb.add("R1A", x, "S.start")

    # guesses at the first C of block i >= 2
    for q in ("XO", "BO"):
        rb.add(q, C, "Q.a", updates=(1,))
        par = "e" if q == "XO" else "o"
        rb.add(q, C, f"R.a.{par}", updates=(1,))

    # pair check: second run must be first run + 1
    rb.add("Q.a", C, "Q.a", updates=(1,))
    rb.add("Q.a", A, "Q.b")
    for a in coded:
        if a not in (C, A):
            rb.add("Q.a", a, acc)
    rb.add("Q.b", C, "Q.b", tests=P, updates=(-1,))
    rb.add("Q.b", C, "Q.x", tests=Z)
    rb.add("Q.x", C, acc)
    for a in coded:
        if a != C:
            rb.add("Q.b", a, acc)

    # ratio check: count run a_i, skip to block i+1, decrement every K-th C
    for par in ("e", "o"):
        rb.add(f"R.a.{par}", C, f"R.a.{par}", updates=(1,))
        rb.add(f"R.a.{par}", A, f"S.A.{par}")
        rb.add(f"S.A.{par}", C, f"S.b.{par}")
        rb.add(f"S.b.{par}", C, f"S.b.{par}")
    rb.add("S.b.o", A, "S.oA2")
    for x in gamma:
        rb.add("S.b.e", x, "S.XE")
        rb.add("S.oA2", x, "S.start")
    rb.add("S.XE", B, "S.start")
    rb.add("S.start", C, "Rc.1" if K > 1 else "Rc.0")
    for r in range(K):
        src = f"Rc.{r}"
        r2 = (r + 1) % K
        if r2 == 0:
            rb.add(src, C, "Rc.0", tests=P, updates=(-1,))
            rb.add(src, C, acc, tests=Z)
        else:
            rb.add(src, C, f"Rc.{r2}")
        if r == 0:
            rb.add(src, A, acc, tests=P)
        else:
            rb.add(src, A, acc)
    return _machine(f"h-complement(K={K})", coded, rb, {acc, "inf"}, "F0", 1)


def build_slot_checker(p: HParams, cond: Mapping[int, str]) -> CounterBuchiMachine:
    """Büchi automaton for the words carrying cond's letters at the h slots."""
    cond = _check_cond(cond, p.gamma)
    coded = p.coded_alphabet
    rb = RuleBuilder(0)
    if not cond:
        for a in coded:
            rb.add("done", a, "done")
        return _machine("slot-check", coded, rb, {"done"}, "done", 0)
    required = {h_slot_position(p, i): a for i, a in cond.items()}
    last = max(required)
    for pos in range(1, last + 1):
        src = f"n{pos - 1}"
        dst = f"n{pos}" if pos < last else "done"
        for a in coded:
            if required.get(pos, a) == a:
                rb.add(src, a, dst)
    for a in coded:
        rb.add("done", a, "done")
    return _machine("slot-check", coded, rb, {"done"}, "n0", 0)


def build_toy_A2(p: HParams, cond: Mapping[int, str]) -> CounterBuchiMachine:
    """1-counter machine for h(L0) ∪ complement(h(gamma^omega)), L0 clopen."""
    cond = _check_cond(cond, p.gamma)
    m = union(build_h_complement(p), build_slot_checker(p, cond),
              name=f"toy-A2({format_cond(cond)})")
    return m


def format_cond(cond: Mapping[int, str]) -> str:
    return ",".join(f"{i}={a}" for i, a in sorted(cond.items())) or "true"


def parse_cond(text: str) -> dict:
    out = {}
    for part in filter(None, (s.strip() for s in text.split(","))):
        if part == "true":
            continue
        i, sep, a = part.partition("=")
        if not sep:
            raise InputError(f"condition entries look like 1=a, got {part!r}")
        try:
            out[int(i)] = a
        except ValueError:
            raise InputError(f"bad condition position {i!r}") from None
    return out
