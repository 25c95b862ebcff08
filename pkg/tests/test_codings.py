import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from cfgames.codings import (Coding, HParams, CANONICAL_K, ThetaParams, h_classify, h_encode,
                             h_encode_runs, h_slot_position, hK_encode, hK_to_h, theta_classify,
                             theta_encode, theta_slot_position, verify_writer_properties)
from cfgames.errors import InputError

TH = ThetaParams("ab", 2)
HP = HParams("ab", 2)


def w(text):
    return tuple(text)


def expand(*parts):
    """expand(("C", 2), "A") -> CCA"""
    out = []
    for part in parts:
        if isinstance(part, tuple):
            out += [part[0]] * part[1]
        else:
            out += list(part)
    return tuple(out)


def brute_in_pref(encode, letters, word):
    """Pref membership by searching for a source word whose image extends ``word``."""
    for n in range(min(len(word), 5) + 1):
        for x in itertools.product(letters, repeat=n):
            img = encode(x)
            if len(img) >= len(word) and img[:len(word)] == word:
                return True
    return False


xs = st.lists(st.sampled_from("ab"), max_size=7).map(tuple)


# ------------------------------------------------------------------ parameters

def test_theta_params_validation():
    for S in (0, 1, 3, 7):
        with pytest.raises(InputError):
            ThetaParams("ab", S)
    with pytest.raises(InputError):
        ThetaParams("aE", 2)
    assert ThetaParams("ab", 2).recommended_minimum == 12 ** 3


def test_h_params_validation():
    with pytest.raises(InputError):
        HParams("ab", 1)
    with pytest.raises(InputError):
        HParams("aA", 2)
    with pytest.raises(InputError):
        HParams("ab", 2, ("A", "A", "C"))
    assert HP.canonical_k == CANONICAL_K == 9699690


# ------------------------------------------------------------------ encoders

@pytest.mark.parametrize("x,want", [("ab", expand("a", ("E", 2), "b")),
                                    ("aba", expand("a", ("E", 2), "b", ("E", 4), "a")),
                                    ("", ())])
def test_theta_encode_examples(x, want):
    assert theta_encode(TH, w(x)) == want


def test_theta_encode_rejects_foreign_letter():
    with pytest.raises(InputError):
        theta_encode(TH, w("ac"))


@pytest.mark.parametrize("x,want", [
    ("a", expand("A", ("C", 2), "aB")),
    ("ab", expand("A", ("C", 2), "aB", ("C", 4), "A", ("C", 4), "bB")),
    ("", ()),
])
def test_hK_encode_examples(x, want):
    assert hK_encode(HP, w(x)) == want


H_AB = expand(("C", 3), "Aa", ("C", 4), "A", ("C", 5), "bB")


@pytest.mark.parametrize("x,want", [
    ("a", expand(("C", 3), "Aa")),
    ("ab", H_AB),
    ("aba", H_AB + expand(("C", 8), "A", ("C", 9), "Aa")),
])
def test_h_encode_examples(x, want):
    assert h_encode(HP, w(x)) == want


@pytest.mark.parametrize("x", ["a", "ab", "abba", "babab"])
def test_hK_to_h_examples(x):
    assert hK_to_h(HP, hK_encode(HP, w(x))) == h_encode(HP, w(x))


def test_hK_to_h_malformed():
    with pytest.raises(InputError, match="position 3"):
        hK_to_h(HP, w("ACC"))


@given(st.lists(st.sampled_from("abc"), max_size=10).map(tuple), st.sampled_from([2, 3]))
def test_hK_to_h_property(x, K):
    p = HParams("abc", K)
    assert hK_to_h(p, hK_encode(p, x)) == h_encode(p, x)


# ------------------------------------------------------------------ classifiers

@pytest.mark.parametrize("word,exit_at,decoded", [("aEEa", None, "aa"), ("aEa", 3, "a"), ("aEEE", 4, "a")])
def test_theta_classify_examples(word, exit_at, decoded):
    v = theta_classify(TH, w(word))
    assert v.exited_at == exit_at and "".join(v.decoded) == decoded


def test_h_classify_examples():
    v = h_classify(HP, expand(("C", 3), "Aa"))
    assert v.in_pref and v.decoded == ("a",)
    assert h_classify(HP, expand(("C", 3), "Aa", ("C", 5))).exited_at == 10
    assert h_classify(HP, w("B")).exited_at == 1


@given(xs, st.sampled_from([2, 4, 1728]))
def test_theta_round_trip(x, S):
    p = ThetaParams("ab", S)
    c = Coding(p)
    runs = c.encode_runs(x)
    t = c.tracker()
    for a, n in runs.runs():
        t.feed(a, n)
    assert t.in_pref and tuple(t.decoded) == x


@given(xs, st.sampled_from([2, 3]))
def test_h_round_trip(x, K):
    p = HParams("ab", K)
    v = h_classify(p, h_encode(p, x))
    assert v.in_pref and v.decoded == x


@given(xs)
def test_every_prefix_of_an_image_is_inside(x):
    img = theta_encode(TH, x)
    assert all(theta_classify(TH, img[:n]).in_pref for n in range(len(img) + 1))


@settings(max_examples=200)
@given(st.lists(st.sampled_from("abE"), max_size=9).map(tuple))
def test_theta_classifier_matches_brute_force(word):
    v = theta_classify(TH, word)
    assert v.in_pref == brute_in_pref(lambda x: theta_encode(TH, x), "ab", word)
    if not v.in_pref:
        p = v.exited_at
        assert theta_classify(TH, word[:p - 1]).in_pref and not theta_classify(TH, word[:p]).in_pref


@settings(max_examples=150)
@given(st.lists(st.sampled_from("abABC"), max_size=14).map(tuple))
def test_h_classifier_matches_brute_force(word):
    v = h_classify(HP, word)
    assert v.in_pref == brute_in_pref(lambda x: h_encode(HP, x), "ab", word)


@given(st.lists(st.sampled_from("abE"), max_size=12).map(tuple), st.lists(st.sampled_from("abE"), max_size=6).map(tuple))
def test_exit_is_stable_under_extension(word, ext):
    v = theta_classify(TH, word)
    if not v.in_pref:
        assert theta_classify(TH, word + ext).exited_at == v.exited_at


@given(xs.filter(bool), st.data())
def test_forced_letter_is_the_only_continuation(x, data):
    img = h_encode(HP, x)
    cut = img[:data.draw(st.integers(0, len(img)))]
    v = h_classify(HP, cut)
    keep = [a for a in HP.coded_alphabet if h_classify(HP, cut + (a,)).in_pref]
    if v.next_forced is None:
        assert set(keep) == set(HP.gamma)
    else:
        assert keep == [v.next_forced]


def test_slot_positions_agree_with_encoders():
    x = w("abbab")
    img, timg = h_encode(HP, x), theta_encode(TH, x)
    for i, a in enumerate(x, 1):
        assert img[h_slot_position(HP, i) - 1] == a
        assert timg[theta_slot_position(TH, i) - 1] == a


# ------------------------------------------------------------------ writer properties

@pytest.mark.parametrize("x", ["ab", "abab", "babba"])
def test_writer_properties_examples(x):
    r = verify_writer_properties(HP, h_encode(HP, w(x)))
    assert r.property1 and r.property2


def test_writer_property2_on_H_shape():
    # leading C^2 C A: the A after an odd C-run sits at position 4
    r = verify_writer_properties(HP, expand(("C", 3), "Aa"), shape="H")
    assert r.property2


@given(st.lists(st.sampled_from("ab"), min_size=1, max_size=8).map(tuple), st.sampled_from([2, 4]))
def test_writer_properties_for_even_K(x, K):
    p = HParams("ab", K)
    assert verify_writer_properties(p, h_encode_runs(p, x))


def test_writer_property_fails_for_odd_K():
    # the parity argument needs K even; K = 3 puts x(2) on an odd position
    p = HParams("ab", 3)
    assert not verify_writer_properties(p, h_encode(p, w("ab"))).property1


def test_writer_properties_need_inside_word():
    with pytest.raises(InputError):
        verify_writer_properties(HP, w("B"))


# ------------------------------------------------------------------ slot parity for lifting

@pytest.mark.parametrize("coding", [Coding(TH), Coding(HP), Coding(ThetaParams("abc", 4))])
def test_slots_alternate_writers(coding):
    rng = random.Random(1)
    x = tuple(rng.choice(coding.base.letters) for _ in range(8))
    img = coding.encode_runs(x).expand()
    t = coding.tracker()
    slots = []
    for pos, a in enumerate(img, 1):
        if t.next_forced is None:
            slots.append(pos)
        t.feed(a)
    assert [s % 2 for s in slots] == [i % 2 for i in range(1, len(x) + 1)]
