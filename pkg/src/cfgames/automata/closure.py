"""Effective closure of counter Büchi languages under union and under
intersection with regular (counter-free Büchi) languages."""
from __future__ import annotations

from collections import deque
from itertools import product

from ..errors import InputError
from .machine import CounterBuchiMachine, TransitionRule


def _same_alphabet(m1, m2):
    if set(m1.alphabet) != set(m2.alphabet):
        raise InputError(
            f"alphabet mismatch: {m1.name} over {list(m1.alphabet)}, "
            f"{m2.name} over {list(m2.alphabet)}")


def _padded(rule: TransitionRule, k: int, rename) -> list:
    extra = k - len(rule.tests)
    out = []
    for bits in product((False, True), repeat=extra):
        out.append(TransitionRule(rename(rule.source), rule.label, rule.tests + bits,
                                  rename(rule.target), rule.updates + (0,) * extra))
    return out


def union(m1: CounterBuchiMachine, m2: CounterBuchiMachine, name: str = None) -> CounterBuchiMachine:
    """Machine for L(m1) ∪ L(m2).

    States are tagged ``1.q`` / ``2.q``; a fresh initial state ``u0`` copies
    the outgoing rules of both initial states.  Counters are padded to
    ``max(k1, k2)``: the unused counters stay zero, and each rule of the
    smaller machine is duplicated for both test values of the padding.
    """
    _same_alphabet(m1, m2)
    k = max(m1.k, m2.k)
    rules = []
    init = "u0"
    for tag, m in (("1", m1), ("2", m2)):
        rename = (lambda q, tag=tag: f"{tag}.{q}")
        for r in m.rules:
            padded = _padded(r, k, rename)
            rules.extend(padded)
            if r.source == m.initial:
                for p in padded:
                    rules.append(TransitionRule(init, p.label, p.tests, p.target, p.updates))
    states = (init,) + tuple(f"1.{q}" for q in m1.states) + tuple(f"2.{q}" for q in m2.states)
    accepting = {f"1.{q}" for q in m1.accepting} | {f"2.{q}" for q in m2.accepting}
    return CounterBuchiMachine(
        name=name or f"union({m1.name},{m2.name})",
        alphabet=m1.alphabet,
        states=states,
        initial=init,
        accepting=accepting,
        rules=_dedupe(rules),
        k=k,
        realtime=m1.realtime and m2.realtime,
    )


def _dedupe(rules):
    seen = set()
    out = []
    for r in rules:
        if r not in seen:
            seen.add(r)
            out.append(r)
    return out


def intersect_regular(m: CounterBuchiMachine, b: CounterBuchiMachine, name: str = None) -> CounterBuchiMachine:
    """Product machine for L(m) ∩ L(b), with b counter-free.

    Product states are ``<p,q,f>`` with a flag f in {1, 2}: flag 1 waits for
    an accepting state of m, flag 2 for one of b; the flag is switched
    according to the source state of each move.  Accepting states are the
    ``<p,q,1>`` with p accepting in m.  Only states reachable from the
    initial product state are built.
    """
    _same_alphabet(m, b)
    if b.k != 0:
        raise InputError(f"{b.name} has counters; intersect_regular needs a Büchi automaton")
    k = m.k
    m_out, b_out = {}, {}
    for r in m.rules:
        m_out.setdefault(r.source, []).append(r)
    for r in b.rules:
        b_out.setdefault(r.source, []).append(r)

    def flag_after(p, q, f):
        if f == 1 and p in m.accepting:
            return 2
        if f == 2 and q in b.accepting:
            return 1
        return f

    def label(s):
        return f"<{s[0]},{s[1]},{s[2]}>"

    start = (m.initial, b.initial, 1)
    seen = {start}
    order = [start]
    queue = deque([start])
    rules = []
    any_tests = list(product((False, True), repeat=k))
    while queue:
        s = queue.popleft()
        p, q, f = s
        nf = flag_after(p, q, f)
        moves = []
        for r in m_out.get(p, ()):
            if r.label is None:
                moves.append((None, r.tests, (r.target, q, nf), r.updates))
        for r in b_out.get(q, ()):
            if r.label is None:
                for t in any_tests:
                    moves.append((None, t, (p, r.target, nf), (0,) * k))
        for r in m_out.get(p, ()):
            if r.label is None:
                continue
            for rb in b_out.get(q, ()):
                if rb.label == r.label:
                    moves.append((r.label, r.tests, (r.target, rb.target, nf), r.updates))
        for lab, tests, t, upd in moves:
            rules.append(TransitionRule(label(s), lab, tests, label(t), upd))
            if t not in seen:
                seen.add(t)
                order.append(t)
                queue.append(t)
    accepting = {label(s) for s in order if s[2] == 1 and s[0] in m.accepting}
    return CounterBuchiMachine(
        name=name or f"product({m.name},{b.name})",
        alphabet=m.alphabet,
        states=tuple(label(s) for s in order),
        initial=label(start),
        accepting=accepting,
        rules=_dedupe(rules),
        k=k,
        realtime=m.realtime and b.realtime,
    )
