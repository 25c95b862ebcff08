"""Lasso acceptance for Büchi and counter Büchi machines.

Both procedures search the product of machine configurations with the
positions of ``u.v`` (position ``len(u)+len(v)-1`` loops back to
``len(u)``).  A run is accepting iff it reaches a strongly connected
component that holds an accepting state and at least one letter-reading
edge; components made of lambda moves alone do not read the input.

For counter machines the configuration graph is explored up to a counter
cap and a node budget.  Before the concrete search, an abstraction that
ignores counter tests marks the (state, position) pairs from which an
accepting cycle is reachable at all; concrete branches into the other pairs
are discarded, since no accepting run can pass through them.
"""
from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import breadth_first_order, connected_components

from ..errors import WrongOperationError
from .machine import Config, CounterBuchiMachine, pattern, successors
from .words import Lasso


class Outcome(enum.Enum):
    ACCEPT = "accept"
    REJECT = "reject"
    UNKNOWN = "unknown"

    def __str__(self):
        return self.value.upper()

    @classmethod
    def of(cls, flag: bool) -> "Outcome":
        return cls.ACCEPT if flag else cls.REJECT


@dataclass(frozen=True)
class Bounds:
    counter_cap: int = 256
    horizon: int = 250_000
    lambda_budget: Optional[int] = None  # consumed by simulate_prefix only

    def __post_init__(self):
        if self.counter_cap < 0 or self.horizon <= 0:
            raise ValueError("bounds must be positive")


@dataclass(frozen=True)
class Step:
    config: Config
    position: int  # 0-based index into spoke + cycle
    label: Optional[str]  # letter read to leave this node, None for lambda


@dataclass(frozen=True)
class Certificate:
    """An accepting lasso-shaped run: ``stem`` then ``loop`` forever.

    ``loop`` starts and ends at the same (configuration, position), which is
    the last node reached by ``stem``.
    """

    stem: tuple
    loop: tuple


_SMALL_GRAPH = 256


def _scc_small(n_nodes, src, dst):
    """Iterative Tarjan; cheaper than building a sparse matrix for tiny graphs."""
    adj = [[] for _ in range(n_nodes)]
    for s, d in zip(src, dst):
        adj[s].append(d)
    index = [-1] * n_nodes
    low = [0] * n_nodes
    on_stack = [False] * n_nodes
    labels = [-1] * n_nodes
    stack, counter, comp = [], 0, 0
    for root in range(n_nodes):
        if index[root] >= 0:
            continue
        work = [(root, 0)]
        while work:
            v, i = work.pop()
            if i == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            recurse = False
            while i < len(adj[v]):
                w = adj[v][i]
                i += 1
                if index[w] < 0:
                    work.append((v, i))
                    work.append((w, 0))
                    recurse = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if recurse:
                continue
            if low[v] == index[v]:
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    labels[w] = comp
                    if w == v:
                        break
                comp += 1
            if work:
                u = work[-1][0]
                low[u] = min(low[u], low[v])
    return np.asarray(labels, dtype=int)


def _scc_labels(n_nodes, src, dst):
    if n_nodes == 0:
        return np.zeros(0, dtype=int)
    if n_nodes <= _SMALL_GRAPH:
        return _scc_small(n_nodes, src, dst)
    g = csr_matrix((np.ones(len(src), dtype=np.int8), (src, dst)), shape=(n_nodes, n_nodes))
    _, labels = connected_components(g, directed=True, connection="strong")
    return labels


def _good_components(labels, src, dst, is_letter, accepting_nodes):
    """Components with an internal letter edge and an accepting node."""
    src = np.asarray(src, dtype=int)
    dst = np.asarray(dst, dtype=int)
    is_letter = np.asarray(is_letter, dtype=bool)
    if len(src) == 0:
        return set()
    internal = (labels[src] == labels[dst]) & is_letter
    with_letter = set(labels[src[internal]].tolist())
    acc = set(labels[np.asarray(sorted(accepting_nodes), dtype=int)].tolist()) if accepting_nodes else set()
    return with_letter & acc


class _LassoProduct:
    def __init__(self, m: CounterBuchiMachine, lasso: Lasso):
        self.m = m
        self.word = lasso.spoke + lasso.cycle
        self.n = len(self.word)
        self.back = len(lasso.spoke)
        self.qindex = {q: i for i, q in enumerate(m.states)}

    def nxt(self, pos):
        return pos + 1 if pos + 1 < self.n else self.back

    def abstract_live(self) -> np.ndarray:
        """Boolean array over (state, position): can an accepting cycle be reached?"""
        m, n = self.m, self.n
        src, dst, letter = [], [], []
        by_letter = {}
        for pos, a in enumerate(self.word):
            by_letter.setdefault(a, []).append(pos)
        for r in m.rules:
            s = self.qindex[r.source] * n
            t = self.qindex[r.target] * n
            if r.label is None:
                for pos in range(n):
                    src.append(s + pos)
                    dst.append(t + pos)
                    letter.append(False)
            else:
                for pos in by_letter.get(r.label, ()):
                    src.append(s + pos)
                    dst.append(t + self.nxt(pos))
                    letter.append(True)
        total = len(m.states) * n
        labels = _scc_labels(total, src, dst)
        acc_nodes = {self.qindex[q] * n + p for q in m.accepting for p in range(n)}
        good = _good_components(labels, src, dst, letter, acc_nodes)
        live = np.zeros(total, dtype=bool)
        if not good:
            return live
        seeds = np.flatnonzero(np.isin(labels, list(good)))
        if total <= _SMALL_GRAPH:
            back = [[] for _ in range(total)]
            for s, d in zip(src, dst):
                back[d].append(s)
            todo = seeds.tolist()
            live[todo] = True
            while todo:
                for s in back[todo.pop()]:
                    if not live[s]:
                        live[s] = True
                        todo.append(s)
            return live
        # backward reachability from the good components via a virtual root
        root = total
        rs = np.concatenate([np.asarray(dst, dtype=int), np.full(len(seeds), root)])
        rd = np.concatenate([np.asarray(src, dtype=int), seeds])
        g = csr_matrix((np.ones(len(rs), dtype=np.int8), (rs, rd)), shape=(total + 1, total + 1))
        order = breadth_first_order(g, root, directed=True, return_predecessors=False)
        live[order[order < total]] = True
        return live


@dataclass
class _Exploration:
    nodes: list
    parent: list
    src: list
    dst: list
    letter: list
    accepting: set
    good: set
    labels: np.ndarray
    pruned: bool
    truncated: bool
    dead_start: bool
    word: tuple = ()


def _explore(m: CounterBuchiMachine, lasso: Lasso, cap: int, horizon: int) -> _Exploration:
    prod = _LassoProduct(m, lasso)
    live = prod.abstract_live()
    n = prod.n
    qi = prod.qindex
    word = prod.word
    table = m.table
    acc_states = m.accepting

    start = (m.initial, (0,) * m.k, 0)
    if not live[qi[m.initial] * n]:
        return _Exploration([start], [None], [], [], [], set(), set(),
                            np.zeros(1, dtype=int), False, False, True, word)

    ids = {start: 0}
    nodes = [start]
    parent = [None]
    src, dst, letter = [], [], []
    pruned = truncated = False
    queue = deque([0])
    while queue:
        i = queue.popleft()
        q, cs, pos = nodes[i]
        pat = pattern(cs)
        for lab, npos, is_letter in ((None, pos, False), (word[pos], prod.nxt(pos), True)):
            for target, upd in table.get((q, lab, pat), ()):
                if not live[qi[target] * n + npos]:
                    continue
                ncs = tuple(c + j for c, j in zip(cs, upd)) if upd else cs
                if ncs and max(ncs) > cap:
                    pruned = True
                    continue
                key = (target, ncs, npos)
                j = ids.get(key)
                if j is None:
                    if len(nodes) >= horizon:
                        truncated = True
                        continue
                    j = len(nodes)
                    ids[key] = j
                    nodes.append(key)
                    parent.append((i, lab))
                    queue.append(j)
                src.append(i)
                dst.append(j)
                letter.append(is_letter)
    accepting = {i for i, (q, _, _) in enumerate(nodes) if q in acc_states}
    labels = _scc_labels(len(nodes), src, dst)
    good = _good_components(labels, src, dst, letter, accepting)
    return _Exploration(nodes, parent, src, dst, letter, accepting, good, labels,
                        pruned, truncated, False, word)


def lasso_accepts_buchi(b: CounterBuchiMachine, l: Lasso) -> bool:
    """Exact Büchi acceptance of ``u.v^omega`` for a counter-free machine."""
    if b.k != 0:
        raise WrongOperationError(
            f"{b.name} has {b.k} counters; use lasso_accepts_counter")
    # without counters the (state, position) graph is the whole product
    prod = _LassoProduct(b, l)
    return bool(prod.abstract_live()[prod.qindex[b.initial] * prod.n])


def lasso_accepts_counter(m: CounterBuchiMachine, l: Lasso, bounds: Bounds = Bounds()) -> Outcome:
    """Three-valued acceptance: ACCEPT and REJECT are sound, UNKNOWN is not an answer.

    ACCEPT is returned only when the explored graph holds an accepting cycle
    (a run that repeats a configuration exactly, see :func:`accepting_run`).
    REJECT is returned only when every branch that could still reach an
    accepting cycle was explored in full without hitting the counter cap or
    the node horizon.
    """
    ex = _explore(m, l, bounds.counter_cap, bounds.horizon)
    if ex.good:
        return Outcome.ACCEPT
    if ex.dead_start or not (ex.pruned or ex.truncated):
        return Outcome.REJECT
    return Outcome.UNKNOWN


def accepting_run(m: CounterBuchiMachine, l: Lasso, bounds: Bounds = Bounds()) -> Optional[Certificate]:
    """Extract an accepting lasso-shaped run when the bounded search finds one."""
    ex = _explore(m, l, bounds.counter_cap, bounds.horizon)
    if not ex.good:
        return None
    target = min(i for i in ex.accepting if ex.labels[i] in ex.good)
    comp = ex.labels[target]

    stem = []
    i = target
    while ex.parent[i] is not None:
        p, lab = ex.parent[i]
        q, cs, pos = ex.nodes[p]
        stem.append(Step(Config(q, cs), pos, lab))
        i = p
    stem.reverse()

    adj = {}
    for s, d, lt in zip(ex.src, ex.dst, ex.letter):
        if ex.labels[s] == comp and ex.labels[d] == comp:
            adj.setdefault(s, []).append((d, lt))
    # BFS over (node, letter-seen) back to the accepting node
    start = (target, False)
    prev = {start: None}
    queue = deque([start])
    goal = None
    while queue and goal is None:
        node, seen = queue.popleft()
        for d, lt in adj.get(node, ()):
            state = (d, seen or lt)
            if state in prev:
                continue
            prev[state] = (node, seen, lt)
            if state == (target, True):
                goal = state
                break
            queue.append(state)
    assert goal is not None, "good component without a letter cycle"
    loop = []
    cur = goal
    while cur != start:
        node, seen, lt = prev[cur]
        q, cs, pos = ex.nodes[node]
        loop.append(Step(Config(q, cs), pos, ex.word[pos] if lt else None))
        cur = (node, seen)
    loop.reverse()
    return Certificate(tuple(stem), tuple(loop))


def verify_certificate(m: CounterBuchiMachine, l: Lasso, cert: Certificate) -> bool:
    """Replay a certificate rule by rule; independent of the search."""
    word = l.spoke + l.cycle
    n, back = len(word), len(l.spoke)

    def advance(step: Step):
        lab = step.label
        npos = step.position
        if lab is not None:
            if word[step.position] != lab:
                return None
            npos = step.position + 1 if step.position + 1 < n else back
        return lab, npos

    steps = list(cert.stem) + list(cert.loop)
    if not cert.loop:
        return False
    first = steps[0]
    if first.config != m.initial_config() or first.position != 0:
        return False
    for cur, nxt in zip(steps, steps[1:] + [cert.loop[0]]):
        moved = advance(cur)
        if moved is None:
            return False
        lab, npos = moved
        if npos != nxt.position or nxt.config not in successors(m, cur.config, lab):
            return False
    loop_ok = any(s.label is not None for s in cert.loop)
    acc_ok = any(s.config.state in m.accepting for s in cert.loop)
    return loop_ok and acc_ok


def buchi_nonempty(b: CounterBuchiMachine) -> Optional[Lasso]:
    """A canonical accepted lasso, or None when the language is empty."""
    if b.k != 0:
        raise WrongOperationError(f"{b.name} has counters")
    out = {}
    for r in b.rules:
        out.setdefault(r.source, []).append((r.label, r.target))

    # breadth-first paths from the initial state
    dist = {b.initial: ()}
    queue = deque([b.initial])
    while queue:
        q = queue.popleft()
        for lab, t in out.get(q, ()):
            if t not in dist:
                dist[t] = dist[q] + ((lab,) if lab is not None else ())
                queue.append(t)

    best = None
    for f in b.states:
        if f not in b.accepting or f not in dist:
            continue
        start = (f, False)
        seen = {start: ()}
        queue = deque([start])
        found = None
        while queue and found is None:
            q, used = queue.popleft()
            for lab, t in out.get(q, ()):
                st = (t, used or lab is not None)
                if st in seen:
                    continue
                seen[st] = seen[(q, used)] + ((lab,) if lab is not None else ())
                if st == (f, True):
                    found = seen[st]
                    break
                queue.append(st)
        if found is None:
            continue
        cand = Lasso(dist[f], found).canonical()
        key = (len(cand.spoke) + len(cand.cycle), cand.spoke, cand.cycle)
        if best is None or key < best[0]:
            best = (key, cand)
    return best[1] if best else None
