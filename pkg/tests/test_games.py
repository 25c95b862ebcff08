import sys
import textwrap

import pytest
from hypothesis import given, settings, strategies as st

from cfgames.automata import Alphabet, Lasso, lasso_prefix, parse_lasso
from cfgames.codings import Coding, HParams, ThetaParams, theta_classify, h_classify, verify_writer_properties
from cfgames.errors import ExitsCoding, InputError, ParseError, SessionError
from cfgames.games import (AlreadyExited, Forced, FreeSlot, Role, Scripted, SKIP, Winner, always_skip,
                           const, copy_last, detect_exit, dump_mealy, first_letter_switch, forced_move,
                           forced_then, gs_adjudicate, gs_play, lasso_player, lift_p1, lift_p2,
                           observation_alphabet, parse_mealy, random_player, resolve_strategy,
                           skip_once_then_copy, strategy_to_reduction, wadge_adjudicate, wadge_play)
from cfgames.langs import clopen_handle, first_letter_handle, zero_star_one_handle

AB = Alphabet("ab")
TH = ThetaParams(AB, 2)
HP = HParams(AB, 2)
CODINGS = [Coding(TH), Coding(HP)]


# ------------------------------------------------------------------ Gale-Stewart

def test_gs_const_vs_copy():
    t = gs_play(const("a", Role.P1, AB), copy_last(Role.P2, AB), 2)
    assert t.word == tuple("aaaa")
    assert t.lasso is not None and lasso_prefix(t.lasso, 4) == t.word


def test_gs_empty_horizon():
    assert gs_play(const("a", Role.P1, AB), copy_last(Role.P2, AB), 0).word == ()


def test_gs_role_check():
    with pytest.raises(InputError):
        gs_play(copy_last(Role.P2, AB), copy_last(Role.P2, AB), 2)


def test_gs_adjudicate_examples():
    t = gs_play(const("a", Role.P1, AB), const("b", Role.P2, AB), 3)
    assert gs_adjudicate(t, first_letter_handle(AB, "a")).winner is Winner.PLAYER1
    zo = Alphabet("01")
    t = gs_play(const("0", Role.P1, zo), const("1", Role.P2, zo), 3)
    assert gs_adjudicate(t, zero_star_one_handle()).winner is Winner.PLAYER1
    t = gs_play(random_player(zo, 1, Role.P1), random_player(zo, 2, Role.P2), 5)
    v = gs_adjudicate(t, zero_star_one_handle())
    assert v.winner is Winner.UNDETERMINED and v.reason == "horizon"


mealy_tables = st.lists(st.sampled_from("ab"), min_size=1, max_size=5)


@settings(max_examples=60)
@given(st.builds(Lasso, st.lists(st.sampled_from("ab"), max_size=3).map(tuple),
                 st.lists(st.sampled_from("ab"), min_size=1, max_size=3).map(tuple)),
       st.booleans(), st.integers(0, 25))
def test_lasso_form_is_exact(l, copy, n):
    p1 = lasso_player(l, Role.P1, AB)
    p2 = copy_last(Role.P2, AB) if copy else lasso_player(l, Role.P2, AB)
    t = gs_play(p1, p2, n)
    assert len(t.moves) == 2 * n
    assert [r["writer"] for r in t.records()] == ["P1", "P2"] * n
    assert lasso_prefix(t.lasso, 2 * n) == t.moves


# ------------------------------------------------------------------ Wadge

ZO = Alphabet("01")


def test_wadge_examples():
    p1 = const("0", Role.P1, ZO, "wadge")
    t = wadge_play(p1, copy_last(Role.P2, ZO, "wadge"), 3)
    assert (t.a_prefix, t.b_prefix, t.skips) == (tuple("000"), tuple("000"), ())
    t = wadge_play(p1, always_skip(ZO, ZO), 3)
    assert t.b_prefix == () and t.b_finite
    assert wadge_adjudicate(t, zero_star_one_handle(), zero_star_one_handle()).reason == "b-finite"
    t = wadge_play(p1, skip_once_then_copy(ZO), 3)
    assert t.b_prefix == tuple("00") and t.skips == (1,)


def test_wadge_first_letter_switch():
    a = lasso_player(parse_lasso("1|0"), Role.P1, ZO, "wadge")
    t = wadge_play(a, first_letter_switch(), 4)
    v = wadge_adjudicate(t, first_letter_handle(ZO, "1"), zero_star_one_handle())
    assert v.winner is Winner.PLAYER2


def test_wadge_player1_may_not_skip():
    with pytest.raises(InputError):
        FakeSkipper = const(SKIP, Role.P1, Alphabet("01s"), "wadge", ZO)
        wadge_play(FakeSkipper, copy_last(Role.P2, ZO, "wadge"), 1)


@given(st.builds(Lasso, st.lists(st.sampled_from("01"), max_size=3).map(tuple),
                 st.lists(st.sampled_from("01"), min_size=1, max_size=3).map(tuple)))
def test_copy_wins_wadge_on_lassos(l):
    t = wadge_play(lasso_player(l, Role.P1, ZO, "wadge"), copy_last(Role.P2, ZO, "wadge"), 6)
    L = zero_star_one_handle()
    assert wadge_adjudicate(t, L, L).winner is Winner.PLAYER2


# ------------------------------------------------------------------ coding discipline

def test_forced_move_examples():
    classify = lambda w: theta_classify(TH, w)
    assert forced_move(classify, "a") == Forced("E")
    assert forced_move(classify, "aEE") == FreeSlot(Role.P2, 2)
    assert forced_move(classify, "aEa") == AlreadyExited(3)


def test_detect_exit_examples():
    classify = lambda w: theta_classify(TH, w)
    assert detect_exit(tuple("aEab"), classify).player is Role.P1
    e = detect_exit(tuple("aEEEa"), classify)
    assert (e.player, e.position) == (Role.P2, 4)
    assert detect_exit(tuple("aEEbEE"), classify) is None


@settings(max_examples=60)
@given(st.integers(0, 10**6), st.integers(1, 40))
def test_exit_attribution_matches_writer_convention(seed, n):
    # a forced-then Player 1 against a random coded opponent; whoever leaves
    # the coding first is the writer of that position
    big1 = forced_then(Coding(HP), "a", Role.P1)
    opp = random_player(HP.coded_alphabet, seed, Role.P2)
    t = gs_play(big1, opp, n)
    classify = lambda w: h_classify(HP, w)
    e = detect_exit(t, classify)
    if e is None:
        assert verify_writer_properties(HP, t.moves)
    else:
        assert e.player == (Role.P1 if e.position % 2 else Role.P2)
        assert e.player is Role.P2  # the forced-then player never leaves
        assert verify_writer_properties(HP, t.moves[:e.position - 1])


# ------------------------------------------------------------------ lifting

def assert_reencodes(big, coding, seen):
    # the big play stops at the last slot it needed; any tail of the image is forced
    img = coding.encode_runs(seen)
    assert img.prefix(big.length) == big
    tail, pos = set(), 0
    for a, c in img.runs():
        pos += c
        if pos > big.length:
            tail.add(a)
    assert not tail & set(coding.base.letters)


@pytest.mark.parametrize("coding", CODINGS, ids=["theta", "h"])
@pytest.mark.parametrize("role,letter", [(Role.P1, "a"), (Role.P2, "b")])
def test_lift_plays_the_constant_and_reencodes(coding, role, letter):
    big = forced_then(coding, letter, role)
    lifted = (lift_p1 if role == Role.P1 else lift_p2)(big, coding)
    other = Role.P2 if role == Role.P1 else Role.P1
    opp = const("b" if letter == "a" else "a", other, AB)
    player = lifted.start()
    t = gs_play(player, opp, 6) if role == Role.P1 else gs_play(opp, player, 6)
    mine = t.moves[0::2] if role == Role.P1 else t.moves[1::2]
    assert set(mine) == {letter}
    # Player 1 has not yet seen Player 2's last letter
    seen = t.moves[:-1] if role == Role.P1 else t.moves
    assert_reencodes(player.game.transcript, coding, seen)


@settings(max_examples=40)
@given(st.sampled_from([0, 1]), st.sampled_from([Role.P1, Role.P2]), st.integers(1, 30), st.integers(0, 10**6))
def test_lift_consistency(which, role, n, seed):
    coding = CODINGS[which]
    big = forced_then(coding, "a", role)
    lifted = (lift_p1 if role == Role.P1 else lift_p2)(big, coding)
    other = Role.P2 if role == Role.P1 else Role.P1
    player = lifted.start()
    opp = random_player(AB, seed, other)
    t = gs_play(player, opp, n) if role == Role.P1 else gs_play(opp, player, n)
    seen = t.moves[:-1] if role == Role.P1 else t.moves
    assert_reencodes(player.game.transcript, coding, seen)
    assert player.game.checks == len(seen)


def test_lift_raises_when_big_strategy_leaves_the_coding():
    coding = Coding(TH)
    naive = const("a", Role.P1, coding.coded)
    lifted = lift_p1(naive, coding)
    with pytest.raises(ExitsCoding) as e:
        gs_play(lifted, const("b", Role.P2, AB), 3)
    assert e.value.position == 3 and e.value.got == "a"


def test_lift_needs_gale_stewart_and_role():
    coding = Coding(TH)
    with pytest.raises(InputError):
        lift_p2(forced_then(coding, "a", Role.P1), coding)


# ------------------------------------------------------------------ reductions

wadge_p2 = st.sampled_from(["copy", "switch", "skip-once"])


def make_p2(name):
    return {"copy": copy_last(Role.P2, ZO, "wadge"), "switch": first_letter_switch(),
            "skip-once": skip_once_then_copy(ZO)}[name]


def test_reduction_examples():
    assert strategy_to_reduction(first_letter_switch())(tuple("10")) == tuple("11")
    assert strategy_to_reduction(copy_last(Role.P2, ZO, "wadge"))(tuple("0110")) == tuple("0110")
    red = strategy_to_reduction(always_skip(ZO, ZO))
    assert red(tuple("0101")) == ()
    assert not red.limit(parse_lasso("|01")).defined


@given(wadge_p2, st.lists(st.sampled_from("01"), max_size=10).map(tuple), st.integers(0, 10))
def test_reduction_is_monotone(name, a, cut):
    red = strategy_to_reduction(make_p2(name))
    short, long_ = red(a[:cut]), red(a)
    assert long_[:len(short)] == short and len(short) <= len(long_)


@given(wadge_p2, st.builds(Lasso, st.lists(st.sampled_from("01"), max_size=3).map(tuple),
                           st.lists(st.sampled_from("01"), min_size=1, max_size=3).map(tuple)))
def test_reduction_limit_extends_prefixes(name, a):
    red = strategy_to_reduction(make_p2(name))
    img = red.limit(a)
    out = red(lasso_prefix(a, 12))
    assert lasso_prefix(img.lasso, len(out)) == out


# ------------------------------------------------------------------ strategies

def test_builtins_are_total():
    for s in (const("a", Role.P1, AB), copy_last(Role.P2, AB), copy_last(Role.P1, AB)):
        s.check_total(observation_alphabet(s.role, s.game, AB))
    for s in (always_skip(), skip_once_then_copy(), first_letter_switch()):
        s.check_total(observation_alphabet(Role.P2, "wadge", ZO))


def test_partial_mealy_detected():
    m = parse_mealy("strategy p\nrole p2\nalphabet a b\ninitial q\nmove q a q b\n")
    with pytest.raises(InputError):
        m.check_total(["a", "b"])


@pytest.mark.parametrize("s", [copy_last(Role.P1, AB), skip_once_then_copy(), first_letter_switch()])
def test_mealy_round_trip(s):
    text = dump_mealy(s)
    again = parse_mealy(text)
    assert again == s and dump_mealy(again) == text


def test_mealy_parse_errors():
    with pytest.raises(ParseError):
        parse_mealy("strategy p\nrole p2\n")
    with pytest.raises(ParseError):
        parse_mealy("strategy p\nrole p2\nalphabet a\ninitial q\nmove q a q\n")


def test_resolve_strategy_specs(tmp_path):
    assert resolve_strategy("builtin:const:a", Role.P1).name == "const:a"
    f = tmp_path / "s.mealy"
    f.write_text(dump_mealy(copy_last(Role.P2, AB)))
    assert resolve_strategy(f"mealy:{f}", Role.P2) == copy_last(Role.P2, AB)
    with pytest.raises(InputError):
        resolve_strategy(f"mealy:{f}", Role.P1)
    with pytest.raises(InputError):
        resolve_strategy("builtin:nope", Role.P1)


SCRIPT = textwrap.dedent("""
    import sys
    for line in sys.stdin:
        tag, n, last = line.split()
        print("b" if last == "a" else "a", flush=True)
""")

BAD_SCRIPT = textwrap.dedent("""
    import sys
    for line in sys.stdin:
        print("zz", flush=True)
""")


def test_scripted_protocol(tmp_path):
    f = tmp_path / "p.py"
    f.write_text(SCRIPT)
    s = Scripted("proc", Role.P2, AB, "gs", f"{sys.executable} {f}")
    t = gs_play(const("a", Role.P1, AB), s, 3)
    assert t.word == tuple("ababab")


def test_scripted_protocol_failure(tmp_path):
    f = tmp_path / "bad.py"
    f.write_text(BAD_SCRIPT)
    s = resolve_strategy(f"proc:{sys.executable} {f}", Role.P2, "gs", AB)
    with pytest.raises(SessionError, match="turn 1"):
        gs_play(const("a", Role.P1, AB), s, 2)
