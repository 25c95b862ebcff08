import json
import subprocess
import sys

import pytest

from cfgames.automata import parse_automaton
from cfgames.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def cli(*argv, stdin=""):
    return subprocess.run([sys.executable, "-m", "cfgames", *argv], input=stdin,
                          capture_output=True, text=True, timeout=120)


def test_build_writes_machine_and_metadata(tmp_path, capsys):
    out = tmp_path / "H.cbm"
    code, _, _ = run(capsys, "build", "H", "-o", str(out))
    assert code == 0
    m = parse_automaton(out.read_text())
    meta = json.loads((tmp_path / "H.cbm.meta.json").read_text())
    assert meta["target"] == "H" and meta["counters"] == m.k == 0
    assert meta["states"] == len(m.states)


def test_build_to_stdout_has_comment_header(capsys):
    code, out, _ = run(capsys, "build", "lprime")
    assert code == 0
    assert out.startswith("#")
    assert parse_automaton(out).k == 2


def test_simulate_accepts_H_example(tmp_path, capsys):
    f = tmp_path / "H.cbm"
    run(capsys, "build", "H", "-o", str(f))
    code, out, _ = run(capsys, "simulate", "--machine", str(f), "--lasso", "CCCAa|CCACCCbBCCACCCAa")
    assert code == 0 and "ACCEPT" in out


def test_encode_decode_classify(capsys):
    assert run(capsys, "encode", "ab", "--coding", "theta")[1].strip() == "aEEb"
    assert run(capsys, "encode", "ab", "--coding", "h")[1].strip() == "CCCAaCCCCACCCCCbB"
    assert "ab" in run(capsys, "decode", "aEEb", "--coding", "theta")[1]
    assert "3" in run(capsys, "classify", "aEa", "--coding", "theta")[1]


def test_play_gs_jsonl(capsys):
    code, out, _ = run(capsys, "play", "gs", "--p1", "builtin:const:a", "--p2", "builtin:copy",
                       "--horizon", "4", "--winset", "first:a", "--alphabet", "ab")
    assert code == 0
    lines = [json.loads(x) for x in out.splitlines()]
    verdict = lines[-1]
    assert verdict["winner"] == "Player1"
    assert all(r["letter"] == "a" for r in lines[:-1]) and len(lines) == 9


def test_play_wadge_skip(capsys):
    code, out, _ = run(capsys, "play", "wadge", "--p1", "builtin:const:0", "--p2", "builtin:always-skip",
                       "--horizon", "3", "--winset", "zero-star-one", "--alphabet", "01")
    verdict = json.loads(out.splitlines()[-1])
    assert code == 0 and verdict["winner"] == "Player1" and verdict["reason"] == "b-finite"


def test_reduce(capsys):
    assert run(capsys, "reduce", "--strategy", "builtin:first-letter-switch", "--prefix", "10")[1].strip() == "11"


def test_lift_reports_stats(capsys):
    code, out, err = run(capsys, "lift", "--role", "p1", "--big", "builtin:forced-then:a",
                         "--coding", "theta", "--horizon", "5", "--seed", "3")
    assert code == 0 and "3" in err
    stats = json.loads(out.splitlines()[-1])
    assert stats["slots_checked"] == 9


def test_export_dot(tmp_path, capsys):
    f = tmp_path / "z.cbm"
    run(capsys, "build", "zero-star-one", "-o", str(f))
    code, out, _ = run(capsys, "export-dot", "--machine", str(f))
    assert code == 0 and out.startswith("digraph")


def test_check_prints_seed(capsys):
    code, out, _ = run(capsys, "check", "hk-to-h", "--seed", "7")
    assert code == 0
    assert out.splitlines()[0] == "seed 7" and "[PASS]" in out


def test_usage_errors_exit_2(capsys):
    for argv in (["bogus"], ["play", "gs"], ["check", "all"], ["encode", "ab"]):
        with pytest.raises(SystemExit) as e:
            main(argv)
        assert e.value.code == 2
    capsys.readouterr()


def test_domain_errors_exit_1(tmp_path, capsys):
    assert run(capsys, "encode", "az", "--coding", "theta")[0] == 1
    assert run(capsys, "simulate", "--machine", str(tmp_path / "missing"), "--prefix", "a")[0] == 1
    bad = tmp_path / "bad.cbm"
    bad.write_text("automaton x\nbogus\n")
    code, _, err = run(capsys, "simulate", "--machine", str(bad), "--prefix", "a")
    assert code == 1 and "line 2" in err
    assert run(capsys, "check", "no-such-suite", "--seed", "0")[0] == 1


def test_interactive_piped_input():
    ok = cli("play", "gs", "--interactive", "p1", "--p2", "builtin:copy", "--horizon", "2",
             "--winset", "first:a", "--alphabet", "ab", stdin="a\nb\n")
    assert ok.returncode == 0
    assert [json.loads(x)["letter"] for x in ok.stdout.splitlines()[:-1]] == list("aabb")
    bad = cli("play", "gs", "--interactive", "p1", "--p2", "builtin:copy", "--horizon", "2",
              "--winset", "first:a", "--alphabet", "ab", stdin="a\nz\n")
    assert bad.returncode == 1 and "position 3" in bad.stderr


def test_output_is_deterministic():
    argv = ("play", "gs", "--p1", "builtin:random:5", "--p2", "builtin:random:9", "--horizon", "30",
            "--winset", "zero-star-one", "--alphabet", "01")
    a, b = cli(*argv), cli(*argv)
    assert a.returncode == 0 and a.stdout == b.stdout
