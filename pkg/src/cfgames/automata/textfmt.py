"""Line-oriented text format for machines, plus DOT export.

::

    automaton <name>
    k <int>
    realtime <true|false>
    alphabet <letter>...
    states <id>...
    initial <id>
    accepting <id>...
    trans <q> <letter|@> <tests> <q'> <updates>

``@`` is the lambda label, tests is a string over {z, p} of length k and
updates a comma list over {-1, 0, +1}; both are ``-`` when k = 0.
``#`` starts a comment.  :func:`dump_automaton` output re-parses to an equal
machine and re-dumps to the same bytes.
"""
from __future__ import annotations

from ..errors import ParseError
from .machine import CounterBuchiMachine, TransitionRule
from .words import Alphabet

_HEADER = ("automaton", "k", "realtime", "alphabet", "states", "initial", "accepting")


def _fmt_update(j):
    return "+1" if j == 1 else str(j)


def dump_automaton(m: CounterBuchiMachine) -> str:
    lines = [
        f"automaton {m.name}",
        f"k {m.k}",
        f"realtime {'true' if m.realtime else 'false'}",
        "alphabet " + " ".join(m.alphabet),
        "states " + " ".join(m.states),
        f"initial {m.initial}",
        " ".join(["accepting"] + [q for q in m.states if q in m.accepting]),
    ]
    for r in m.rules:
        tests = "".join("p" if t else "z" for t in r.tests) or "-"
        updates = ",".join(_fmt_update(j) for j in r.updates) or "-"
        label = "@" if r.label is None else r.label
        lines.append(f"trans {r.source} {label} {tests} {r.target} {updates}")
    return "\n".join(lines) + "\n"


def parse_automaton(text: str) -> CounterBuchiMachine:
    fields = {}
    rules = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, *rest = line.split()
        if head == "trans":
            if len(rest) != 5:
                raise ParseError("trans needs <q> <letter|@> <tests> <q'> <updates>", lineno)
            rules.append((lineno, rest))
        elif head in _HEADER:
            if head in fields:
                raise ParseError(f"duplicate directive {head}", lineno)
            fields[head] = (lineno, rest)
        else:
            raise ParseError(f"unknown directive {head!r}", lineno)
    for key in _HEADER:
        if key not in fields and key != "accepting":
            raise ParseError(f"missing directive {key}")

    def single(key):
        lineno, rest = fields[key]
        if len(rest) != 1:
            raise ParseError(f"{key} takes exactly one value", lineno)
        return rest[0]

    name = single("automaton")
    try:
        k = int(single("k"))
    except ValueError:
        raise ParseError("k must be an integer", fields["k"][0]) from None
    rt = single("realtime")
    if rt not in ("true", "false"):
        raise ParseError("realtime must be true or false", fields["realtime"][0])

    parsed = []
    for lineno, (q, label, tests, q2, updates) in rules:
        if tests == "-":
            tv = ()
        elif set(tests) <= {"z", "p"}:
            tv = tuple(ch == "p" for ch in tests)
        else:
            raise ParseError(f"bad tests {tests!r}", lineno)
        try:
            uv = () if updates == "-" else tuple(int(x) for x in updates.split(","))
        except ValueError:
            raise ParseError(f"bad updates {updates!r}", lineno) from None
        try:
            parsed.append(TransitionRule(q, None if label == "@" else label, tv, q2, uv))
        except ValueError as e:
            raise ParseError(str(e), lineno) from None
    try:
        return CounterBuchiMachine(
            name=name,
            alphabet=Alphabet(fields["alphabet"][1]),
            states=tuple(fields["states"][1]),
            initial=single("initial"),
            accepting=frozenset(fields.get("accepting", (0, []))[1]),
            rules=tuple(parsed),
            k=k,
            realtime=(rt == "true"),
        )
    except ValueError as e:
        raise ParseError(str(e)) from None


def to_dot(m: CounterBuchiMachine) -> str:
    """Graphviz rendering (display only; not parsed back)."""
    out = [f'digraph "{m.name}" {{', "  rankdir=LR;", '  __start [shape=point];']
    for q in m.states:
        shape = "doublecircle" if q in m.accepting else "circle"
        out.append(f'  "{q}" [shape={shape}];')
    out.append(f'  __start -> "{m.initial}";')
    for r in m.rules:
        label = "λ" if r.label is None else r.label
        if m.k:
            tests = "".join("p" if t else "z" for t in r.tests)
            ups = ",".join(_fmt_update(j) for j in r.updates)
            label = f"{label} [{tests}] {ups}"
        out.append(f'  "{r.source}" -> "{r.target}" [label="{label}"];')
    out.append("}")
    return "\n".join(out) + "\n"
