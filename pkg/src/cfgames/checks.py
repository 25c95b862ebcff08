"""Verification suites: each acceptance criterion plus a few module properties.

Every suite takes a seed and returns a :class:`CheckResult`.  Oracles are
independent of the constructions they check: machines are compared with
decoders and structural parsers, the product search with relation
composition, and the liftings with re-encoding.
"""
from __future__ import annotations

import os
import time
from dataclasses import dataclass, field
from typing import Callable

from .automata.acceptance import Outcome, lasso_accepts_buchi, lasso_accepts_counter
from .automata.closure import intersect_regular, union
from .automata.words import Alphabet, Lasso, RunWord
from .codings import (Coding, HParams, ThetaParams, h_classify, h_encode, hK_encode, hK_to_h,
                      theta_classify, verify_writer_properties)
from .errors import ExitsCoding
from .games.engine import Winner, gs_adjudicate, gs_play, wadge_adjudicate, wadge_play
from .games.lifting import lift_p1, lift_p2
from .games.reduction import strategy_to_reduction
from .games.strategies import (Role, always_skip, copy_last, first_letter_switch, forced_then,
                               lasso_player, random_player)
from .langs import shapes
from .langs.assembly import (ClopenCondition, Lprime_definition, Lprime_oracle, assemble_A3,
                             assemble_game_language, clopen_handle, first_letter_handle,
                             h_complement_oracle, zero_star_one_handle)
from .langs.machines import build_H_automaton, build_h_complement, build_Lprime, build_toy_A2
from .samples import (H_PERTURBATIONS, all_lassos, all_words, brute_buchi_accepts, enumerate_buchi,
                      h_lasso_mix, h_perturbed, rand_buchi, rand_lasso, rand_word, sample_buchi, seeded,
                      theta_near_lasso)


@dataclass
class CheckResult:
    name: str
    criterion: int | None
    cases: int = 0
    failures: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    seconds: float = 0.0
    failed: int = 0

    @property
    def passed(self) -> bool:
        return self.cases > 0 and not self.failed

    def fail(self, msg):
        self.failed += 1
        if len(self.failures) < 20:
            self.failures.append(msg)
        else:
            self.failures[-1] = f"... and more (last: {msg})"

    def line(self) -> str:
        tag = f"criterion {self.criterion}" if self.criterion else "property"
        status = "PASS" if self.passed else "FAIL"
        extra = "; ".join(self.notes)
        head = f"[{status}] {tag:<12} {self.name}: {self.cases} cases, {self.failed} failures, {self.seconds:.1f}s"
        return head + (f" ({extra})" if extra else "")


SUITES: dict = {}


def suite(name: str, criterion: int | None = None):
    def wrap(fn: Callable[[CheckResult, int], None]):
        def run(seed: int = 0) -> CheckResult:
            r = CheckResult(name, criterion)
            t0 = time.perf_counter()
            fn(r, seed)
            r.seconds = time.perf_counter() - t0
            return r
        run.__name__ = fn.__name__
        run.criterion = criterion
        SUITES[name] = run
        return run
    return wrap


def run_suite(name: str, seed: int = 0) -> CheckResult:
    return SUITES[name](seed)


def exhaustive_enabled() -> bool:
    return os.environ.get("CFGAMES_EXHAUSTIVE", "") not in ("", "0")


_SIGMAS = ("a", "ab", "abc", "abcd")


# ------------------------------------------------------------------ 1

def _roundtrip_case(r, coding: Coding, x, rng, label):
    w = coding.encode_runs(x)
    v = coding.classify(w)
    if not v.in_pref or list(v.decoded) != list(x):
        r.fail(f"{label}: x={''.join(x)} classified {v}")
        return
    # every prefix: walk the runs, cutting them at random points
    tr = coding.tracker()
    pos, slots = 0, 0
    cuts = []
    for a, c in w.runs():
        pieces = sorted({0, c, *(rng.randint(1, c) for _ in range(2 if c > 2 else 0)), min(1, c)})
        for lo, hi in zip(pieces, pieces[1:]):
            tr.feed(a, hi - lo)
            pos += hi - lo
            if not tr.in_pref:
                r.fail(f"{label}: prefix of length {pos} left the coding")
                return
            cuts.append(pos)
        if a in coding.base:
            slots += c
        if len(tr.decoded) != slots:
            r.fail(f"{label}: decoded {len(tr.decoded)} letters after {slots} slots")
            return
    # fresh classification of a few prefixes agrees with the incremental walk
    for n in rng.sample(cuts, min(3, len(cuts))):
        pv = coding.classify(w.prefix(n))
        if not pv.in_pref or list(pv.decoded) != list(x[:len(pv.decoded)]):
            r.fail(f"{label}: fresh prefix {n} gave {pv}")
            return


@suite("coding-roundtrip", 1)
def check_coding_roundtrip(r: CheckResult, seed: int):
    configs = [("theta", S) for S in (2, 4, 1728)] + [("h", K) for K in (2, 3)]
    for kind, param in configs:
        rng = seeded(seed, f"roundtrip-{kind}-{param}")
        codings = [Coding(ThetaParams(s, param) if kind == "theta" else HParams(s, param))
                   for s in _SIGMAS]
        for _ in range(1000):
            coding = rng.choice(codings)
            x = rand_word(rng, coding.base.letters, 0, 64)
            _roundtrip_case(r, coding, x, rng, f"{kind}{param}")
            r.cases += 1
    r.notes.append("S=1728 prefixes checked at run boundaries and random cuts")


# ------------------------------------------------------------------ 2

def _forced_uniqueness(r, classify, coded: Alphabet, base: Alphabet, max_len: int, label):
    stack = [()]
    words = 0
    while stack:
        w = stack.pop()
        words += 1
        if len(w) == max_len:
            continue
        v = classify(w)
        inside = [a for a in coded if classify(w + (a,)).in_pref]
        if v.next_slot is None:
            if len(inside) != 1 or inside[0] != v.next_forced:
                r.fail(f"{label}: after {''.join(w)} continuations {inside}, forced {v.next_forced}")
        elif set(inside) != set(base):
            r.fail(f"{label}: slot after {''.join(w)} admits {inside}")
        stack.extend(w + (a,) for a in inside)
    return words


@suite("forced-moves", 2)
def check_forced_moves(r: CheckResult, seed: int):
    tp = ThetaParams("ab", 2)
    hp = HParams("ab", 2)
    n1 = _forced_uniqueness(r, lambda w: theta_classify(tp, w), tp.coded_alphabet, tp.sigma, 40, "theta")
    n2 = _forced_uniqueness(r, lambda w: h_classify(hp, w), hp.coded_alphabet, hp.gamma, 40, "h")
    r.cases = n1 + n2
    r.notes.append(f"{n1} theta and {n2} h prefixes")


# ------------------------------------------------------------------ 3

@suite("lprime", 3)
def check_lprime(r: CheckResult, seed: int):
    p = ThetaParams("ab", 2)
    for y in all_words(p.coded_alphabet.letters, 8):
        v = theta_classify(p, y)
        even_exit = v.exited_at is not None and v.exited_at % 2 == 0
        if Lprime_definition(p, y) != even_exit:
            r.fail(f"definition vs first exit on {''.join(y)}")
        r.cases += 1
    m = build_Lprime(p)
    rng = seeded(seed, "lprime-lassos")
    unknown = 0
    seen = set()
    while len(seen) < 500:
        l = theta_near_lasso(p, rng)
        if l in seen:
            continue
        seen.add(l)
        got = lasso_accepts_counter(m, l)
        want = Lprime_oracle(p, l)
        if got is Outcome.UNKNOWN or want is Outcome.UNKNOWN:
            unknown += 1
            r.fail(f"unknown on {l}: machine {got}, oracle {want}")
        elif got != want:
            r.fail(f"machine {got} vs oracle {want} on {l}")
        r.cases += 1
    r.notes.append(f"500 lassos, {unknown} unknown")


# ------------------------------------------------------------------ 4, 5

@suite("h-automaton", 4)
def check_h_automaton(r: CheckResult, seed: int):
    p = HParams("ab", 2)
    m = build_H_automaton(p)
    rng = seeded(seed, "h-automaton")
    members = 0
    for _ in range(1000):
        l = h_lasso_mix(p, rng)
        want = shapes.in_H(p, l)
        members += want
        if lasso_accepts_buchi(m, l) != want:
            r.fail(f"automaton disagrees on {l} (oracle {want})")
        r.cases += 1
    r.notes.append(f"{members} members")


@suite("closure-law", 5)
def check_closure_law(r: CheckResult, seed: int):
    p = HParams("ab", 2)
    rng = seeded(seed, "closure-law")
    inside = 0
    for _ in range(1000):
        l = h_lasso_mix(p, rng)
        a = shapes.never_exits_pref_H(p, l)
        b = shapes.decide_closure_H(p, l)
        inside += b
        if a != b:
            r.fail(f"never-exits {a} vs H ∪ V.C^w {b} on {l}")
        r.cases += 1
    r.notes.append(f"{inside} in the closure")


# ------------------------------------------------------------------ 6

def _family_agreement(r, machines, lassos):
    count = 0
    for m in machines:
        for l in lassos:
            if lasso_accepts_buchi(m, l) != brute_buchi_accepts(m, l):
                r.fail(f"{m.name} on {l}")
            r.cases += 1
        count += 1
    return count


@suite("closure-ops", 6)
def check_closure_ops(r: CheckResult, seed: int):
    rng = seeded(seed, "closure-ops")
    ab = Alphabet("ab")
    for i in range(50):
        m1 = rand_buchi(rng, ab, rng.randint(2, 4), name=f"m{i}a")
        m2 = rand_buchi(rng, ab, rng.randint(2, 4), name=f"m{i}b")
        u, x = union(m1, m2), intersect_regular(m1, m2)
        for _ in range(100):
            l = rand_lasso(rng, ab.letters, 4, 4)
            a, b = brute_buchi_accepts(m1, l), brute_buchi_accepts(m2, l)
            if lasso_accepts_buchi(u, l) != (a or b):
                r.fail(f"union of {m1.name},{m2.name} on {l}")
            if lasso_accepts_buchi(x, l) != (a and b):
                r.fail(f"product of {m1.name},{m2.name} on {l}")
            r.cases += 1
    lassos2 = list(all_lassos("ab", 2, 3))
    lassos1 = list(all_lassos("a", 2, 3))
    n = _family_agreement(r, enumerate_buchi("ab", 1), lassos2)
    n += _family_agreement(r, enumerate_buchi("ab", 2), lassos2)
    n += _family_agreement(r, enumerate_buchi("a", 3), lassos1)
    if exhaustive_enabled():
        n += _family_agreement(r, enumerate_buchi("ab", 3), lassos2)
        r.notes.append(f"exhaustive: {n} machines")
    else:
        n += _family_agreement(r, sample_buchi(rng, "ab", 3, 1500), lassos2)
        r.notes.append(f"{n} machines; 3-state/2-letter sampled (CFGAMES_EXHAUSTIVE=1 for all)")


# ------------------------------------------------------------------ 7

@suite("h-complement", 7)
def check_h_complement(r: CheckResult, seed: int):
    p = HParams("ab", 2)
    m = build_h_complement(p)
    rng = seeded(seed, "h-complement")
    tally = {k: 0 for k in H_PERTURBATIONS}
    unknown = 0
    for i in range(500):
        kind = H_PERTURBATIONS[i % len(H_PERTURBATIONS)]
        l = h_perturbed(p, rng, kind)
        want = h_complement_oracle(p, l)
        got = lasso_accepts_counter(m, l)
        if got is Outcome.UNKNOWN or want is Outcome.UNKNOWN:
            unknown += 1
        if got is not Outcome.UNKNOWN and want is not Outcome.UNKNOWN and got != want:
            r.fail(f"unsound {got} ({kind}) on {l}")
        elif got != want:
            r.fail(f"{kind}: machine {got}, oracle {want} on {l}")
        tally[kind] += 1
        r.cases += 1
    r.notes.append(f"{unknown} unknown; " + ", ".join(f"{k}={v}" for k, v in tally.items()))


# ------------------------------------------------------------------ 8

@suite("game-language", 8)
def check_game_language(r: CheckResult, seed: int):
    p = HParams("ab", 2)
    for cond in ({}, {1: "a"}):
        handle = assemble_game_language(assemble_A3(build_toy_A2(p, cond), p), p,
                                        ClopenCondition(cond))
        rng = seeded(seed, f"game-language-{cond}")
        accepted = 0
        for i in range(500):
            if i % 2:
                l = h_lasso_mix(p, rng)
            else:
                l = h_perturbed(p, rng, H_PERTURBATIONS[(i // 2) % 4])
            want = handle.lasso_oracle(l)
            got = lasso_accepts_counter(handle.automaton, l)
            accepted += got is Outcome.ACCEPT
            if got != want:
                r.fail(f"cond {cond}: machine {got}, oracle {want} on {l}")
            r.cases += 1
        r.notes.append(f"cond {cond or '∅'}: {accepted} accepted")


# ------------------------------------------------------------------ 9

def _capstone(r, coding: Coding, role: Role, letter, handle, want: Winner, seed, horizon, opponents):
    lift = (lift_p1 if role == Role.P1 else lift_p2)(forced_then(coding, letter, role), coding)
    opp_role = Role.P2 if role == Role.P1 else Role.P1
    label = f"{coding.kind} {role}"
    for i in range(opponents):
        opp = random_player(coding.base, seed * 1000 + i, opp_role)
        me = lift.start()
        try:
            t = gs_play(me, opp, horizon) if role == Role.P1 else gs_play(opp, me, horizon)
        except ExitsCoding as e:
            r.fail(f"{label}: ExitsCoding against opponent {i}: {e}")
            continue
        except AssertionError as e:
            r.fail(f"{label}: {e}")
            continue
        mine = t.moves[0::2] if role == Role.P1 else t.moves[1::2]
        if any(a != letter for a in mine):
            r.fail(f"{label}: lift differs from the constant-{letter} strategy")
        v = gs_adjudicate(t, handle)
        if v.winner != want:
            r.fail(f"{label}: opponent {i} verdict {v}")
        if me.game.checks != 2 * horizon - (role == Role.P1):
            r.fail(f"{label}: {me.game.checks} re-encoding checks for {2 * horizon} moves")
        r.cases += 1


@suite("lifting", 9)
def check_lifting(r: CheckResult, seed: int, horizon: int = 10_000, opponents: int = 100):
    ab = Alphabet("ab")
    first_a = clopen_handle(ab, ClopenCondition({1: "a"}))
    not_second_a = clopen_handle(ab, ClopenCondition({2: "a"}).negated())
    for coding in (Coding(ThetaParams(ab, 2)), Coding(HParams(ab, 2))):
        _capstone(r, coding, Role.P1, "a", first_a, Winner.PLAYER1, seed, horizon, opponents)
        _capstone(r, coding, Role.P2, "a", not_second_a, Winner.PLAYER2, seed, horizon, opponents)
    r.notes.append(f"horizon {horizon}, {opponents} opponents per case")


# ------------------------------------------------------------------ 10

@suite("wadge", 10)
def check_wadge(r: CheckResult, seed: int):
    rng = seeded(seed, "wadge")
    zs1 = zero_star_one_handle()
    one = first_letter_handle("01", "1")
    copy = copy_last(Role.P2, "01", "wadge")
    switch = first_letter_switch()
    lassos = [rand_lasso(rng, "01", 4, 4) for _ in range(100)]
    for l in lassos:
        p1 = lasso_player(l, Role.P1, "01", "wadge")
        for s2, L, name in ((copy, zs1, "copy"), (switch, one, "first-letter")):
            t = wadge_play(p1, s2, 3 * (len(l.spoke) + len(l.cycle)))
            v = wadge_adjudicate(t, L, zs1)
            if v.winner != Winner.PLAYER2:
                r.fail(f"{name} loses on {l}: {v}")
            r.cases += 1
        t = wadge_play(p1, always_skip(), 5)
        v = wadge_adjudicate(t, zs1, zs1)
        if v.winner != Winner.PLAYER1 or v.reason != "b-finite":
            r.fail(f"always-skip not refuted on {l}: {v}")
        r.cases += 1
    for f, L, name in ((copy, zs1, "copy"), (switch, one, "first-letter")):
        red = strategy_to_reduction(f)
        for l in lassos:
            img = red.limit(l)
            if not img.defined:
                r.fail(f"{name}: image of {l} is finite")
                continue
            if (L.lasso_oracle(l) is Outcome.ACCEPT) != (zs1.lasso_oracle(img.lasso) is Outcome.ACCEPT):
                r.fail(f"{name}: reduction fails on {l} -> {img.lasso}")
            pre = l.prefix(12)
            outs = [red(pre[:n]) for n in range(len(pre) + 1)]
            if any(b[:len(a)] != a for a, b in zip(outs, outs[1:])):
                r.fail(f"{name}: not prefix-monotone on {l}")
            if outs[-1] != img.lasso.prefix(len(outs[-1])):
                r.fail(f"{name}: prefix outputs disagree with the limit on {l}")
            r.cases += 1
    if strategy_to_reduction(always_skip()).limit(Lasso("", "01")).defined:
        r.fail("always-skip reduction reported as defined")


# ------------------------------------------------------------------ module properties

@suite("writer-properties")
def check_writer(r: CheckResult, seed: int):
    rng = seeded(seed, "writer")
    p = HParams("ab", 2)
    for _ in range(300):
        x = rand_word(rng, "ab", 0, 8)
        rep = verify_writer_properties(p, h_encode(p, x))
        if not rep:
            r.fail(f"h_encode({''.join(x)}): {rep}")
        r.cases += 1
    odd = HParams("ab", 3)
    rep = verify_writer_properties(odd, h_encode(odd, "abababab"))
    r.notes.append(f"K=3 reference: property1={rep.property1} property2={rep.property2}")


@suite("hk-to-h")
def check_hk_to_h(r: CheckResult, seed: int):
    rng = seeded(seed, "hk-to-h")
    for K in (2, 3):
        p = HParams("abc", K)
        for _ in range(250):
            x = rand_word(rng, "abc", 0, 7)
            if hK_to_h(p, hK_encode(p, x)) != h_encode(p, x):
                r.fail(f"K={K} x={''.join(x)}")
            r.cases += 1


@suite("uv-dfa")
def check_uv(r: CheckResult, seed: int):
    """Every word of length <= 12 over a one-letter gamma.

    Words extending a first exit are rejected by both automata (a missing
    transition or the transition-free U state), which is checked directly;
    the enumeration then covers Pref(H) and its one-letter exits.
    """
    p = HParams("a", 2)
    vd, ud = shapes.V_dfa(p), shapes.U_dfa(p)
    if any(q == "U" for q, _ in ud.delta):
        r.fail("U state has outgoing transitions")
    letters = p.coded_alphabet.letters
    stack = [()]
    while stack:
        w = stack.pop()
        inside = shapes.structural_pref_exit(p, w) is None
        v_def = inside and bool(w) and w[-1] == p.C
        u_def = (len(w) % 2 == 0 and len(w) > 0 and not inside
                 and shapes.structural_pref_exit(p, w[:-1]) is None)
        if vd.accepts(w) != v_def or ud.accepts(w) != u_def:
            r.fail(f"U/V on {''.join(w)}")
        if not inside and (vd.run(w) is not None or ud.run(w) not in (None, "U")):
            r.fail(f"automaton still alive after the exit in {''.join(w)}")
        r.cases += 1
        if inside and len(w) < 12:
            stack.extend(w + (a,) for a in letters)


@suite("absorption")
def check_absorption(r: CheckResult, seed: int):
    p = HParams("ab", 2)
    rng = seeded(seed, "absorption")
    a2 = build_toy_A2(p, {1: "a"})
    a3 = assemble_A3(a2, p)
    for i in range(200):
        l = h_lasso_mix(p, rng) if i % 2 else h_perturbed(p, rng, H_PERTURBATIONS[i % 4])
        in_a2 = lasso_accepts_counter(a2, l)
        in_a3 = lasso_accepts_counter(a3, l)
        want = in_a2 is Outcome.ACCEPT and shapes.in_H(p, l)
        if Outcome.UNKNOWN in (in_a2, in_a3):
            r.fail(f"unknown on {l}")
        elif (in_a3 is Outcome.ACCEPT) != want:
            r.fail(f"A3 {in_a3} vs A2∧H {want} on {l}")
        r.cases += 1


def run_all(seed: int = 0, names=None, report=print) -> list:
    out = []
    for name in names or SUITES:
        res = run_suite(name, seed)
        report(res.line())
        for f in res.failures[:5]:
            report(f"    {f}")
        out.append(res)
    return out
