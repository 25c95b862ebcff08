import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from cfgames.automata import (Alphabet, Bounds, Config, CounterBuchiMachine, Lasso, Outcome,
                              TransitionRule, buchi_nonempty, dump_automaton, format_lasso,
                              intersect_regular, lasso_accepts_buchi, lasso_accepts_counter,
                              lasso_prefix, parse_automaton, parse_lasso, simulate_prefix,
                              successors, union)
from cfgames.codings import ThetaParams
from cfgames.errors import InputError, ParseError, WrongOperationError
from cfgames.langs import build_H_automaton, build_h_complement, build_Lprime, zero_star_one
from cfgames.langs.machines import first_letter_automaton, universal_automaton
from cfgames.samples import brute_buchi_accepts, rand_buchi
from cfgames.codings import HParams


def one_counter(rules, accepting=()):
    return CounterBuchiMachine("t", Alphabet("a"), ("q0", "q1"), "q0", frozenset(accepting),
                               tuple(rules), k=1)


words01 = st.lists(st.sampled_from("01"), max_size=5).map(tuple)
cycles01 = st.lists(st.sampled_from("01"), min_size=1, max_size=5).map(tuple)
lassos01 = st.builds(Lasso, words01, cycles01)


# ------------------------------------------------------------------ words

@pytest.mark.parametrize("u,v,n,want", [("a", "b", 0, ""), ("a", "b", 3, "abb"), ("", "01", 5, "01010")])
def test_lasso_prefix_examples(u, v, n, want):
    assert "".join(lasso_prefix(Lasso(tuple(u), tuple(v)), n)) == want


def test_lasso_needs_cycle():
    with pytest.raises(InputError):
        Lasso(("a",), ())


@given(lassos01, st.integers(0, 30), st.integers(0, 30))
def test_lasso_prefix_monotone(l, m, n):
    m, n = sorted((m, n))
    assert lasso_prefix(l, n)[:m] == lasso_prefix(l, m)


@given(lassos01)
def test_canonical_idempotent(l):
    c = l.canonical()
    assert c.canonical() == c
    assert len(c.cycle) <= len(l.cycle) and len(c.spoke) <= len(l.spoke)


@given(lassos01, lassos01)
def test_lasso_equality_is_word_equality(a, b):
    n = len(a.spoke) + len(b.spoke) + math.lcm(len(a.cycle), len(b.cycle))
    assert (a == b) == (lasso_prefix(a, n) == lasso_prefix(b, n))


@given(lassos01)
def test_lasso_format_round_trip(l):
    assert parse_lasso(format_lasso(l)) == l


# ------------------------------------------------------------------ machines

def test_rule_rejects_decrement_on_zero():
    with pytest.raises(InputError):
        TransitionRule("q0", "a", (False,), "q1", (-1,))


def test_successors_examples():
    inc = TransitionRule("q0", "a", (False,), "q1", (1,))
    assert successors(one_counter([inc]), Config("q0", (0,)), "a") == {Config("q1", (1,))}
    dec = TransitionRule("q0", "a", (True,), "q1", (-1,))
    assert successors(one_counter([dec]), Config("q0", (0,)), "a") == frozenset()
    both = [TransitionRule("q0", "a", (True,), "q1", (-1,)), TransitionRule("q0", "a", (True,), "q0", (1,))]
    assert successors(one_counter(both), Config("q0", (2,)), "a") == {Config("q1", (1,)), Config("q0", (3,))}


def test_successors_unknown_label():
    with pytest.raises(InputError):
        successors(one_counter([]), Config("q0", (0,)), "z")


def test_simulate_empty_word():
    m = zero_star_one()
    rec = simulate_prefix(m, ())
    assert rec.entries == {(m.initial_config(), m.initial in m.accepting)}


def test_simulate_reports_pruning():
    m = one_counter([TransitionRule("q0", "a", (False,), "q0", (1,)),
                     TransitionRule("q0", "a", (True,), "q0", (1,))])
    assert simulate_prefix(m, "aaa", counter_cap=2).pruned
    assert not simulate_prefix(m, "aa", counter_cap=2).pruned


def test_simulate_counters_never_negative():
    m = build_Lprime(ThetaParams("ab", 2))
    rec = simulate_prefix(m, "aEEbEEEEa")
    assert rec.entries and all(min(c.counters) >= 0 for c in rec.configs)


# ------------------------------------------------------------------ acceptance

@pytest.mark.parametrize("lasso,want", [("|01", True), ("1|0", False), ("0|10", True)])
def test_zero_star_one_examples(lasso, want):
    assert lasso_accepts_buchi(zero_star_one(), parse_lasso(lasso)) is want


def test_buchi_rejects_counter_machine():
    with pytest.raises(WrongOperationError):
        lasso_accepts_buchi(build_Lprime(ThetaParams("ab", 2)), parse_lasso("a|E"))


@pytest.mark.parametrize("lasso,cap,want", [("a|E", 256, Outcome.ACCEPT), ("aEa|a", 256, Outcome.REJECT),
                                            ("a|E", 1, Outcome.UNKNOWN)])
def test_lprime_counter_examples(lasso, cap, want):
    m = build_Lprime(ThetaParams("ab", 2))
    assert lasso_accepts_counter(m, parse_lasso(lasso), Bounds(counter_cap=cap)) is want


@settings(max_examples=60, deadline=None)
@given(st.lists(st.sampled_from("abE"), max_size=6).map(tuple),
       st.lists(st.sampled_from("abE"), min_size=1, max_size=3).map(tuple))
def test_counter_bounds_never_flip(u, v):
    m = build_Lprime(ThetaParams("ab", 2))
    l = Lasso(u, v)
    answers = {lasso_accepts_counter(m, l, Bounds(counter_cap=c)) for c in (1, 4, 64)}
    assert not {Outcome.ACCEPT, Outcome.REJECT} <= answers


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**6), lassos01)
def test_buchi_matches_brute_force(seed, l):
    m = rand_buchi(random.Random(seed), "01", random.Random(seed).randint(1, 4))
    assert lasso_accepts_buchi(m, l) == brute_buchi_accepts(m, l)


# ------------------------------------------------------------------ closure

def test_union_examples():
    A, B = zero_star_one(), first_letter_automaton("01", "1")
    U = union(A, B)
    assert lasso_accepts_buchi(U, parse_lasso("1|0"))
    assert not lasso_accepts_buchi(U, parse_lasso("0|0"))


def test_union_alphabet_mismatch():
    with pytest.raises(InputError):
        union(zero_star_one(), first_letter_automaton("ab", "a"))


def test_union_pads_counters():
    p = ThetaParams("ab", 2)
    m = union(build_Lprime(p), universal_automaton(p.coded_alphabet))
    assert m.k == 2 and m.realtime


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**6), lassos01)
def test_union_and_product_are_boolean(seed, l):
    rng = random.Random(seed)
    a, b = rand_buchi(rng, "01", 3), rand_buchi(rng, "01", 3)
    ina, inb = lasso_accepts_buchi(a, l), lasso_accepts_buchi(b, l)
    assert lasso_accepts_buchi(union(a, b), l) == (ina or inb)
    assert lasso_accepts_buchi(intersect_regular(a, b), l) == (ina and inb)


@given(lassos01)
def test_union_idempotent_and_universal_identity(l):
    A = zero_star_one()
    want = lasso_accepts_buchi(A, l)
    assert lasso_accepts_buchi(union(A, A), l) == want
    assert lasso_accepts_buchi(intersect_regular(A, universal_automaton("01")), l) == want


def test_intersect_regular_rejects_counter_right_operand():
    p = ThetaParams("ab", 2)
    with pytest.raises(InputError):
        intersect_regular(universal_automaton(p.coded_alphabet), build_Lprime(p))


def test_complement_times_H_on_unequal_pair():
    p = HParams("ab", 2)
    m = intersect_regular(build_h_complement(p), build_H_automaton(p))
    l = parse_lasso("CCCAa|CCCCACCCCCCCbBCCACCCAa")
    assert lasso_accepts_counter(m, l) is Outcome.ACCEPT


# ------------------------------------------------------------------ emptiness

def test_nonempty_witness():
    w = buchi_nonempty(zero_star_one())
    assert w is not None and "1" in w.cycle and lasso_accepts_buchi(zero_star_one(), w)


def test_empty_when_no_accepting_state():
    m = CounterBuchiMachine("e", Alphabet("a"), ("q",), "q", frozenset(),
                            (TransitionRule("q", "a", (), "q", ()),))
    assert buchi_nonempty(m) is None


def test_self_loop_witness():
    m = CounterBuchiMachine("s", Alphabet("a"), ("q",), "q", frozenset({"q"}),
                            (TransitionRule("q", "a", (), "q", ()),))
    assert buchi_nonempty(m) == Lasso((), ("a",))


# ------------------------------------------------------------------ text format

@pytest.mark.parametrize("build", [zero_star_one, lambda: build_Lprime(ThetaParams("ab", 2)),
                                   lambda: build_h_complement(HParams("ab", 2))])
def test_text_round_trip(build):
    m = build()
    text = dump_automaton(m)
    again = parse_automaton(text)
    assert again == m and dump_automaton(again) == text


def test_parse_error_has_line():
    with pytest.raises(ParseError) as e:
        parse_automaton("automaton x\nk 0\nbogus line\n")
    assert e.value.line == 3
