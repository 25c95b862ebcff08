import itertools
import random
import re

import pytest
from hypothesis import given, settings, strategies as st

from cfgames.automata import Lasso, Outcome, lasso_accepts_buchi, lasso_accepts_counter, parse_lasso
from cfgames.codings import HParams, ThetaParams, theta_classify
from cfgames.errors import InputError
from cfgames.langs import (assemble_A3, assemble_game_language, assemble_theta_game,
                           build_H_automaton, build_h_complement, build_Lprime, build_regular_parts,
                           build_theta_checker, build_toy_A2, classify_pref_H, decide_closure_H,
                           never_exits_pref_H, oracle_membership, parse_cond)
from cfgames.langs.assembly import H_handle, Lprime_definition
from cfgames.langs.machines import format_cond
from cfgames.samples import h_perturbed, h_shape_lasso

HP = HParams("ab", 2)
TH = ThetaParams("ab", 2)
L = parse_lasso


# ------------------------------------------------------------------ regex oracle for Pref(H)

RUN_C = ("(?:CC)+", "C*")
RUN_C_ODD = ("(?:CC)+C", "C*")
ONE = {a: (a, "") for a in "AB"}
X = ("[ab]", "")
FIRST = [RUN_C_ODD, ONE["A"], X]
EVEN = [RUN_C, ONE["A"], RUN_C_ODD, X, ONE["B"]]
ODD = [RUN_C, ONE["A"], RUN_C_ODD, ONE["A"], X]


def full(tokens):
    return "".join(t for t, _ in tokens)


def partial(tokens):
    return "(?:" + "|".join(full(tokens[:j]) + tokens[j][1] for j in range(len(tokens))) + ")"


PREF_H = re.compile(
    f"{partial(FIRST)}|{full(FIRST)}(?:{full(EVEN + ODD)})*(?:{partial(EVEN)}|{full(EVEN)}{partial(ODD)})")


def regex_in_pref_H(w) -> bool:
    return PREF_H.fullmatch("".join(w)) is not None


def regex_in_H(l: Lasso) -> bool:
    n = len(l.spoke) + 40 * len(l.cycle)
    w = l.prefix(n)
    return all(regex_in_pref_H(w[:i]) for i in range(n + 1)) and any(a != "C" for a in l.cycle)


letters_H = st.sampled_from("abABC")
words_H = st.lists(letters_H, max_size=16).map(tuple)


def test_regex_oracle_sanity():
    assert regex_in_pref_H("CCCAaCCACCCbBCCACCCAa")
    assert not regex_in_pref_H("CA")


@given(words_H)
def test_pref_H_classifier_matches_regex(w):
    v = classify_pref_H(HP, w)
    assert v.in_pref == regex_in_pref_H(w)
    if not v.in_pref:
        assert regex_in_pref_H(w[:v.exited_at - 1]) and not regex_in_pref_H(w[:v.exited_at])


def test_pref_H_examples():
    assert classify_pref_H(HP, "CCCA").in_pref
    assert classify_pref_H(HP, "B").exited_at == 1
    assert classify_pref_H(HP, "CA").exited_at == 2


# ------------------------------------------------------------------ H automaton

H_EXAMPLE = L("CCCAa|CCACCCbBCCACCCAa")


def test_H_automaton_examples():
    m = build_H_automaton(HP)
    assert m.k == 0
    assert lasso_accepts_buchi(m, H_EXAMPLE)
    assert not lasso_accepts_buchi(m, L("|C"))
    # odd C-run where an even one is required
    assert not lasso_accepts_buchi(m, L("CCCAa|CCCACCCbBCCACCCAa"))


@settings(max_examples=150)
@given(st.integers(0, 10**9))
def test_H_automaton_matches_regex_on_shapes(seed):
    rng = random.Random(seed)
    l = h_shape_lasso(HP, rng)
    if rng.random() < 0.5:
        w = list(l.spoke)
        i = rng.randrange(len(w))
        w[i] = rng.choice("abABC")
        l = Lasso(tuple(w), l.cycle)
    assert lasso_accepts_buchi(build_H_automaton(HP), l) == regex_in_H(l)


@settings(max_examples=150)
@given(words_H, st.lists(letters_H, min_size=1, max_size=6).map(tuple))
def test_H_automaton_matches_regex_on_noise(u, v):
    l = Lasso(u, v)
    assert lasso_accepts_buchi(build_H_automaton(HP), l) == regex_in_H(l)


# ------------------------------------------------------------------ closure, U and V

@pytest.mark.parametrize("lasso,want", [(H_EXAMPLE, True), (L("CCC|C"), True), (L("B|C"), False)])
def test_closure_examples(lasso, want):
    assert decide_closure_H(HP, lasso) is want
    assert never_exits_pref_H(HP, lasso) is want


@given(words_H, st.lists(letters_H, min_size=1, max_size=6).map(tuple))
def test_closure_law(u, v):
    l = Lasso(u, v)
    assert decide_closure_H(HP, l) == never_exits_pref_H(HP, l)


def test_regular_parts_examples():
    parts = build_regular_parts(HP)
    assert parts["V_dfa"].accepts("CCC")
    assert parts["U_dfa"].accepts("CB")
    assert lasso_accepts_buchi(parts["VComega"], L("CCC|C"))


def test_U_and_V_match_definitions_exhaustively():
    p = HParams("a", 2)
    parts = build_regular_parts(p)
    for n in range(9):
        for w in itertools.product("aABC", repeat=n):
            inside = regex_in_pref_H_one_letter(w)
            want_v = inside and n > 0 and w[-1] == "C"
            want_u = (n > 0 and n % 2 == 0 and regex_in_pref_H_one_letter(w[:-1]) and not inside)
            assert parts["V_dfa"].accepts(w) == want_v, w
            assert parts["U_dfa"].accepts(w) == want_u, w


def regex_in_pref_H_one_letter(w):
    return regex_in_pref_H(w) and "b" not in w


# ------------------------------------------------------------------ L' and the theta game

def test_first_exit_equivalence_exhaustive():
    for n in range(9):
        for y in itertools.product("abE", repeat=n):
            v = theta_classify(TH, y)
            even_exit = not v.in_pref and v.exited_at % 2 == 0
            assert Lprime_definition(TH, y) == even_exit


def test_lprime_shape():
    m = build_Lprime(TH)
    assert m.k == 2 and m.realtime


@pytest.mark.parametrize("lasso,want", [("a|E", Outcome.ACCEPT), ("aEa|a", Outcome.REJECT),
                                        ("aEEbEEE|b", Outcome.ACCEPT), ("aEEbEEEE|E", Outcome.REJECT)])
def test_lprime_examples(lasso, want):
    assert lasso_accepts_counter(build_Lprime(TH), L(lasso)) is want


def test_lprime_example_exit_positions():
    assert theta_classify(TH, "aEEbEEEb").exited_at == 8
    assert theta_classify(TH, "aEEbEEEEE").exited_at == 9


def test_theta_game_examples():
    h = assemble_theta_game(build_theta_checker(TH, {1: "a"}), TH)
    assert h.automaton.realtime
    assert lasso_accepts_counter(h.automaton, L("a|E")) is Outcome.ACCEPT
    assert lasso_accepts_counter(h.automaton, L("aEa|a")) is Outcome.REJECT
    assert h.lasso_oracle(L("a|E")) is Outcome.ACCEPT


# ------------------------------------------------------------------ h complement and assemblies

def test_h_complement_examples():
    m = build_h_complement(HP)
    assert m.k == 1
    unequal = L("CCCAa|CCCCACCCCCCCbBCCACCCAa")
    assert lasso_accepts_counter(m, unequal) is Outcome.ACCEPT
    assert lasso_accepts_counter(m, L("B|B")) is Outcome.ACCEPT


@settings(max_examples=60)
@given(st.integers(0, 10**9), st.sampled_from(["unequal-pair", "wrong-ratio", "shape", "consistent"]))
def test_h_complement_accepts_only_non_images(seed, kind):
    # lassos are never h images, so an answer other than ACCEPT is incomplete, not wrong
    l = h_perturbed(HP, random.Random(seed), kind)
    assert lasso_accepts_counter(build_h_complement(HP), l) is not Outcome.REJECT


def test_toy_A2_examples():
    all_words = build_toy_A2(HP, {})
    assert lasso_accepts_counter(all_words, H_EXAMPLE) is Outcome.ACCEPT
    cond = build_toy_A2(HP, {1: "a"})
    assert lasso_accepts_counter(cond, L("B|B")) is Outcome.ACCEPT
    with pytest.raises(InputError):
        build_toy_A2(HP, {1: "z"})


def test_A3_examples():
    a3 = assemble_A3(build_toy_A2(HP, {1: "a"}), HP)
    assert lasso_accepts_counter(a3, L("CCCAa|CCCCACCCCCCCbBCCACCCAa")) is Outcome.ACCEPT
    assert lasso_accepts_counter(a3, L("B|B")) is Outcome.REJECT
    a3_all = assemble_A3(build_toy_A2(HP, {}), HP)
    assert lasso_accepts_counter(a3_all, H_EXAMPLE) is Outcome.ACCEPT


def test_game_language_examples():
    g = assemble_game_language(assemble_A3(build_toy_A2(HP, {}), HP), HP)
    assert g.automaton.k == 1
    for lasso in ("CCC|C", "CB|a", "CB|CA"):
        assert oracle_membership(g, L(lasso)) is Outcome.ACCEPT
        assert lasso_accepts_counter(g.automaton, L(lasso)) is Outcome.ACCEPT
    # exits Pref(H) at position 3 (odd): not in U, not in V.C^w, not in H
    assert oracle_membership(g, L("CCB|C")) is Outcome.REJECT
    assert lasso_accepts_counter(g.automaton, L("CCB|C")) is Outcome.REJECT


def test_H_handle_oracle():
    assert oracle_membership(H_handle(HP), L("|C")) is Outcome.REJECT


def test_cond_round_trip():
    assert parse_cond("1=a,3=b") == {1: "a", 3: "b"}
    assert format_cond(parse_cond("3=b,1=a")) == "1=a,3=b"
    with pytest.raises(InputError):
        parse_cond("x")
