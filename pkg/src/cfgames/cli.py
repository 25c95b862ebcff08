"""Command-line entry point: ``cfgames <subcommand> ...``.

Exit status is 0 on success, 1 on domain errors (bad files, invalid moves,
protocol failures, failed checks) and 2 on usage errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

from .automata import (Bounds, Outcome, dump_automaton, format_lasso, format_word,
                       lasso_accepts_buchi, lasso_accepts_counter, parse_automaton, parse_lasso,
                       parse_word, simulate_prefix, to_dot)
from .automata.words import Alphabet
from .codings import Coding, HParams, ThetaParams
from .errors import ExitsCoding, InputError, SessionError, WrongOperationError
from .games import (SKIP, Player, Role, Verdict, Winner, gs_adjudicate, gs_play, lift_p1, lift_p2,
                    resolve_strategy, strategy_to_reduction, wadge_adjudicate, wadge_play)
from .langs import (assemble_A3, assemble_game_language, assemble_theta_game, build_H_automaton,
                    build_h_complement, build_Lprime, build_theta_checker, build_toy_A2,
                    clopen_handle, first_letter_handle, parse_cond, zero_star_one,
                    zero_star_one_handle)
from .langs.assembly import LanguageHandle

DOMAIN_ERRORS = (InputError, ExitsCoding, SessionError, WrongOperationError, OSError)


class DomainFailure(Exception):
    """Raised by subcommands to exit with status 1 after printing a message."""


# ------------------------------------------------------------ parameters

def _bounded_int(low: int):
    def conv(text: str) -> int:
        try:
            n = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
        if n < low:
            raise argparse.ArgumentTypeError(f"expected an integer >= {low}, got {n}")
        return n
    return conv


_positive = _bounded_int(1)
_non_negative = _bounded_int(0)


def _add_coding_params(p: argparse.ArgumentParser, required_kind=False):
    g = p.add_argument_group("coding parameters")
    if required_kind:
        g.add_argument("--coding", choices=("theta", "h"), required=True)
    g.add_argument("--S", type=_positive, default=2, help="theta block base (even, default 2)")
    g.add_argument("--sigma", default="ab", help="theta base alphabet (default ab)")
    g.add_argument("--pad", default="E", help="theta padding letter (default E)")
    g.add_argument("--K", type=_positive, default=2, help="h block base (default 2)")
    g.add_argument("--gamma", default="ab", help="h base alphabet (default ab)")
    g.add_argument("--markers", default="A,B,C", help="h markers A,B,C")


def _theta(args) -> ThetaParams:
    return ThetaParams(Alphabet(args.sigma), args.S, args.pad)


def _h(args) -> HParams:
    return HParams(Alphabet(args.gamma), args.K, tuple(args.markers.split(",")))


def _coding(args, kind: Optional[str] = None) -> Coding:
    kind = kind or args.coding
    return Coding(_theta(args) if kind == "theta" else _h(args))


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _machine(path: str):
    return parse_automaton(_read(path))


def _emit(text: str, out: Optional[str]):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ------------------------------------------------------------ build

BUILD_TARGETS = ("H", "lprime", "h-complement", "toy-a2", "a3", "a4", "theta-game", "zero-star-one")


def _build(args):
    target = args.target
    cond = parse_cond(args.cond)
    params = {}
    if target in ("lprime", "theta-game"):
        p = _theta(args)
        params = {"coding": p.describe()}
        if target == "lprime":
            m = build_Lprime(p)
        else:
            m = assemble_theta_game(build_theta_checker(p, cond), p).automaton
            params["cond"] = args.cond
    elif target == "zero-star-one":
        m = zero_star_one()
    else:
        p = _h(args)
        params = {"coding": p.describe()}
        if target == "H":
            m = build_H_automaton(p)
        elif target == "h-complement":
            m = build_h_complement(p)
        else:
            params["cond"] = args.cond
            m = build_toy_A2(p, cond)
            if target in ("a3", "a4"):
                m = assemble_A3(m, p)
            if target == "a4":
                m = assemble_game_language(m, p).automaton
    meta = {"target": target, "name": m.name, "parameters": params, "counters": m.k,
            "realtime": m.realtime, "states": len(m.states), "rules": len(m.rules)}
    text = dump_automaton(m)
    if args.output:
        _emit(text, args.output)
        _emit(json.dumps(meta, indent=2, sort_keys=True) + "\n", args.output + ".meta.json")
        print(f"wrote {args.output} ({meta['states']} states, {m.k} counters, "
              f"realtime={str(m.realtime).lower()}) and {args.output}.meta.json")
    else:
        sys.stdout.write("".join(f"# {line}\n" for line in json.dumps(meta, sort_keys=True).splitlines()))
        sys.stdout.write(text)


# ------------------------------------------------------------ simulate / export

def _simulate(args):
    m = _machine(args.machine)
    if args.lasso is not None:
        l = parse_lasso(args.lasso)
        if m.k == 0:
            print(Outcome.of(lasso_accepts_buchi(m, l)))
        else:
            b = Bounds(counter_cap=args.counter_cap, horizon=args.horizon)
            print(lasso_accepts_counter(m, l, b))
        return
    w = parse_word(args.prefix)
    rec = simulate_prefix(m, w, args.lambda_budget, args.counter_cap)
    for cfg, saw in sorted(rec.entries, key=lambda e: (e[0].state, e[0].counters, e[1])):
        counters = ",".join(map(str, cfg.counters)) or "-"
        print(f"{cfg.state} [{counters}] saw-accepting={str(saw).lower()}")
    print(f"configs={len(rec.entries)} lambda-steps={rec.lambda_steps} "
          f"pruned={str(rec.pruned).lower()}")


def _export_dot(args):
    _emit(to_dot(_machine(args.machine)), args.output)


# ------------------------------------------------------------ codings

def _encode(args):
    c = _coding(args)
    x = parse_word(args.word)
    runs = c.encode_runs(x)
    if runs.length > args.max_length:
        raise DomainFailure(f"encoding has {runs.length} letters, above --max-length {args.max_length}")
    print(format_word(runs.expand()))


def _classify_word(args):
    c = _coding(args)
    return c, c.classify(parse_word(args.word))


def _decode(args):
    c, v = _classify_word(args)
    if not v.in_pref:
        raise DomainFailure(f"not a prefix of a {c.kind} image: exits at position {v.exited_at}")
    print(format_word(v.decoded))


def _classify(args):
    _, v = _classify_word(args)
    print(v)
    if v.in_pref:
        print(f"next: slot x({v.next_slot})" if v.next_forced is None
              else f"next: forced {v.next_forced}")


# ------------------------------------------------------------ winning sets

def _winset(spec: Optional[str], args, alphabet: Alphabet) -> Optional[LanguageHandle]:
    """``zero-star-one``, ``first:<letter>``, ``cond:<i=a,...>``,
    ``theta-game[:cond]``, ``game-language`` or an automaton file."""
    if spec is None:
        return None
    kind, _, rest = spec.partition(":")
    if kind == "zero-star-one":
        return zero_star_one_handle()
    if kind == "first":
        return first_letter_handle(alphabet, rest)
    if kind == "cond":
        return clopen_handle(alphabet, parse_cond(rest))
    if kind == "theta-game":
        p = _theta(args)
        return assemble_theta_game(build_theta_checker(p, parse_cond(rest)), p)
    if kind == "game-language":
        p = _h(args)
        return assemble_game_language(assemble_A3(build_toy_A2(p, parse_cond(rest)), p), p)
    m = _machine(spec)
    bounds = Bounds()

    def lasso(l):
        if m.k == 0:
            return Outcome.of(lasso_accepts_buchi(m, l))
        return lasso_accepts_counter(m, l, bounds)
    return LanguageHandle(m.name, m.alphabet, m, lasso)


# ------------------------------------------------------------ interactive

class HumanPlayer(Player):
    """Reads one token per turn from a text stream.

    On a terminal an invalid token is re-prompted; on piped input it aborts
    with the position of the failure.
    """

    def __init__(self, role: Role, letters: Alphabet, may_skip: bool, stream, echo,
                 classifier=None):
        self.role = role
        self.letters = letters
        self.may_skip = may_skip
        self.stream = stream
        self.echo = echo
        self.classifier = classifier
        self.moves: list = []  # whole play so far, both players
        self.tty = stream.isatty()

    def _status(self):
        pos = len(self.moves) + 1
        line = f"pos {pos} writer {Role.P1 if pos % 2 else Role.P2}"
        if self.moves:
            line += f" play={format_word(self.moves)}"
        if self.classifier is not None:
            line += f" coding: {self.classifier(tuple(self.moves))}"
        return line

    def move(self, observed):
        if observed is not None:
            self.moves.append(observed)
        allowed = list(self.letters) + ([SKIP] if self.may_skip else [])
        while True:
            prompt = f"{self._status()} | your move ({'/'.join(allowed)}): "
            self.echo(prompt if self.tty else prompt + "\n")
            raw = self.stream.readline()
            if not raw:
                raise InputError(f"input ended at position {len(self.moves) + 1}")
            token = raw.strip()
            if token in allowed:
                self.moves.append(token)
                return token
            if not self.tty:
                raise InputError(f"invalid move {token!r} at position {len(self.moves) + 1}")
            self.echo(f"invalid move {token!r}\n")


# ------------------------------------------------------------ play

def _verdict_line(v: Verdict) -> str:
    return json.dumps({"winner": str(v.winner), "reason": v.reason, "detail": v.detail},
                      ensure_ascii=False)


def _play(args):
    alphabet = Alphabet(args.alphabet or ("01" if args.game == "wadge" else "ab"))
    opponent = Alphabet(args.opponent_alphabet) if args.opponent_alphabet else alphabet
    coding = _coding(args) if args.coding else None
    if args.game == "gs":
        alphabet = coding.coded if coding is not None and not args.alphabet else alphabet
        opponent = alphabet
    classifier = coding.classify if coding is not None else None

    def side(role: Role, spec: Optional[str]):
        own, other = (opponent, alphabet) if role == Role.P1 and args.game == "wadge" else (alphabet, opponent)
        if args.game == "gs":
            own = other = alphabet
        if args.interactive and Role.parse(args.interactive) == role:
            return HumanPlayer(role, own, args.game == "wadge" and role == Role.P2, sys.stdin,
                               lambda s: (sys.stderr.write(s), sys.stderr.flush()), classifier)
        if spec is None:
            raise InputError(f"--p{int(role)} is required unless that side is interactive")
        if "random" in spec:
            print(f"# seed {spec.rsplit(':', 1)[-1]}", file=sys.stderr)
        return resolve_strategy(spec, role, args.game, own, other, coding)

    s1, s2 = side(Role.P1, args.p1), side(Role.P2, args.p2)
    if args.game == "gs":
        t = gs_play(s1, s2, args.horizon)
        L = _winset(args.winset, args, alphabet)
        v = gs_adjudicate(t, L) if L is not None else None
    else:
        t = wadge_play(s1, s2, args.horizon)
        L = _winset(args.winset, args, opponent)
        L2 = _winset(args.winset_b, args, alphabet) if args.winset_b else L
        v = wadge_adjudicate(t, L, L2) if L is not None else None
    if args.format == "jsonl":
        sys.stdout.write(t.to_jsonl())
        if v is not None:
            print(_verdict_line(v))
    else:
        print(t.summary())
        if v is not None:
            print(f"verdict: {v}")


# ------------------------------------------------------------ lift / reduce

def _lift(args):
    coding = _coding(args)
    role = Role.parse(args.role)
    big = resolve_strategy(args.big, role, "gs", coding.coded, coding.coded, coding)
    small = (lift_p1 if role == Role.P1 else lift_p2)(big, coding)
    other = Role.P2 if role == Role.P1 else Role.P1
    opp_spec = args.opponent or f"builtin:random:{args.seed}"
    if "random" in opp_spec:
        print(f"# seed {opp_spec.rsplit(':', 1)[-1]}", file=sys.stderr)
    opp = resolve_strategy(opp_spec, other, "gs", coding.base, coding.base, coding)
    player = small.start()
    pair = (player, opp) if role == Role.P1 else (opp, player)
    t = gs_play(*pair, args.horizon)
    g = player.game
    if args.format == "jsonl":
        sys.stdout.write(t.to_jsonl())
    else:
        print(t.summary())
    print(json.dumps({"lifted": str(role), "big": big.name, "coding": coding.describe(),
                      "big_length": g.position, "slots_checked": g.checks,
                      "fast_forwards": g.fast_forwards}), file=sys.stderr if args.format == "jsonl" else sys.stdout)


def _reduce(args):
    inputs = Alphabet(args.alphabet)
    outputs = Alphabet(args.outputs or args.alphabet)
    f = resolve_strategy(args.strategy, Role.P2, "wadge", outputs, inputs)
    red = strategy_to_reduction(f)
    if args.lasso is not None:
        img = red.limit(parse_lasso(args.lasso))
        print(format_lasso(img.lasso) if img.defined else f"undefined (finite image {format_word(img.word) or 'λ'})")
    else:
        print(format_word(red(parse_word(args.prefix))) or "λ")


# ------------------------------------------------------------ check

def _check(args):
    from . import checks
    names = None if args.suite == "all" else [args.suite]
    if names and args.suite not in checks.SUITES:
        raise DomainFailure(f"unknown suite {args.suite!r}; choose from all, {', '.join(checks.SUITES)}")
    print(f"seed {args.seed}")
    results = checks.run_all(args.seed, names)
    if not all(r.passed for r in results):
        raise DomainFailure(f"{sum(not r.passed for r in results)} suite(s) failed")


# ------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cfgames", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True, metavar="<subcommand>")

    p = sub.add_parser("build", help="write an automaton file")
    p.add_argument("target", choices=BUILD_TARGETS)
    p.add_argument("--cond", default="", help="clopen base condition, e.g. 1=a,3=b")
    p.add_argument("-o", "--output")
    _add_coding_params(p)
    p.set_defaults(func=_build)

    p = sub.add_parser("simulate", help="run a machine on a lasso or a finite prefix")
    p.add_argument("--machine", required=True)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--lasso")
    g.add_argument("--prefix")
    p.add_argument("--counter-cap", type=_non_negative, default=256)
    p.add_argument("--horizon", type=_positive, default=250_000)
    p.add_argument("--lambda-budget", type=_non_negative, default=None)
    p.set_defaults(func=_simulate)

    for name, func, what in (("encode", _encode, "base word"), ("decode", _decode, "coded word"),
                             ("classify", _classify, "coded word")):
        p = sub.add_parser(name, help=f"{name} a {what}")
        p.add_argument("word", help=what)
        _add_coding_params(p, required_kind=True)
        if name == "encode":
            p.add_argument("--max-length", type=_positive, default=1_000_000)
        p.set_defaults(func=func)

    p = sub.add_parser("play", help="play a Gale-Stewart or Wadge game")
    p.add_argument("game", choices=("gs", "wadge"))
    p.add_argument("--p1")
    p.add_argument("--p2")
    p.add_argument("--horizon", type=_positive, required=True, help="number of rounds")
    p.add_argument("--winset", help="Player 1's set (gs) or L (wadge)")
    p.add_argument("--winset-b", help="wadge: the set for b (default: same as --winset)")
    p.add_argument("--alphabet", help="move alphabet (wadge: Player 2's)")
    p.add_argument("--opponent-alphabet", help="wadge: Player 1's alphabet")
    p.add_argument("--interactive", choices=("p1", "p2"))
    p.add_argument("--coding", choices=("theta", "h"), help="attach a coding classifier")
    p.add_argument("--format", choices=("jsonl", "text"), default="jsonl")
    _add_coding_params(p)
    p.set_defaults(func=_play)

    p = sub.add_parser("lift", help="play a lifted big-game strategy in the small game")
    p.add_argument("--role", choices=("p1", "p2"), required=True)
    p.add_argument("--big", required=True, help="big-game strategy, e.g. builtin:forced-then:a")
    p.add_argument("--opponent", help="small-game opponent (default builtin:random:<seed>)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--horizon", type=_positive, default=20)
    p.add_argument("--format", choices=("jsonl", "text"), default="text")
    _add_coding_params(p, required_kind=True)
    p.set_defaults(func=_lift)

    p = sub.add_parser("reduce", help="apply the reduction induced by a Wadge Player 2 strategy")
    p.add_argument("--strategy", required=True)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--prefix")
    g.add_argument("--lasso")
    p.add_argument("--alphabet", default="01", help="input alphabet")
    p.add_argument("--outputs", help="output alphabet (default: the input alphabet)")
    p.set_defaults(func=_reduce)

    p = sub.add_parser("check", help="run verification suites")
    p.add_argument("suite", help="suite name or 'all'")
    p.add_argument("--seed", type=int, required=True)
    p.set_defaults(func=_check)

    p = sub.add_parser("export-dot", help="render an automaton file as Graphviz DOT")
    p.add_argument("--machine", required=True)
    p.add_argument("-o", "--output")
    p.set_defaults(func=_export_dot)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except (DomainFailure, *DOMAIN_ERRORS) as e:
        sys.stdout.flush()
        print(f"cfgames: error: {e}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
