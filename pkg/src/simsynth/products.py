"""Product constructions that reduce string-quantified conditions to reachability.

* :func:`controllable_product` pairs a spec with the plant and adds a
  violation sink for uncontrollable plant events the spec does not offer.
* :func:`observable_product` pairs spec strings with plant strings of equal
  projection.
* :func:`so_track_product` runs two synchronized spec/plant tracks whose
  strings have equal projection; it decides the strong observable condition.
* :func:`unobs_inclusion_check` decides inclusion of the unobservable-only
  languages by a subset construction on the unobservable fragment.
"""
from collections import deque
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

from .automata import (Automaton, ensure_same_alphabet, nondet_active_events)

# '#' starts a comment in .aut files, so no user state can carry this name.
VIOLATION = ("#qv", "#xv")


def _trace_back(parents, node):
    labels = []
    while parents[node] is not None:
        node, label = parents[node]
        labels.append(label)
    labels.reverse()
    return labels


@dataclass(frozen=True)
class ControllableProduct:
    initial: Optional[tuple]
    pairs: frozenset
    edges: tuple
    marked: frozenset
    _parents: dict = field(repr=False, compare=False)

    @property
    def violations(self) -> list:
        """``[(pair, event), ...]`` for every edge into the violation sink."""
        return [(src, ev) for src, ev, dst in self.edges if dst == VIOLATION]

    def witness(self, pair) -> tuple:
        """A shortest string leading the product to ``pair``."""
        return tuple(_trace_back(self._parents, pair))


def controllable_product(rz: Automaton, g: Automaton, nondet=True) -> ControllableProduct:
    """Spec/plant product with a violation sink.

    From a reachable ``(q, x)``, an uncontrollable event the plant can do but
    ``q`` cannot leads to :data:`VIOLATION`; shared events move both sides.
    With ``nondet`` the plant side offers the events of every state reachable
    by a string that also reaches ``x``; otherwise only the events of ``x``.
    """
    ensure_same_alphabet(rz, g)
    if rz.is_empty or g.is_empty:
        return ControllableProduct(None, frozenset(), (), frozenset(), {})
    unc = rz.alphabet.uncontrollable
    start = (rz.initial, g.initial)
    parents = {start: None}
    queue = deque([start])
    edges = []
    while queue:
        q, x = queue.popleft()
        out_q, out_x = rz.outgoing(q), g.outgoing(x)
        plant_events = nondet_active_events(g, x) if nondet else frozenset(out_x)
        for ev in sorted((plant_events & unc) - set(out_q)):
            edges.append(((q, x), ev, VIOLATION))
        for ev, qs in out_q.items():
            for q2 in qs:
                for x2 in out_x.get(ev, ()):
                    nxt = (q2, x2)
                    edges.append(((q, x), ev, nxt))
                    if nxt not in parents:
                        parents[nxt] = ((q, x), ev)
                        queue.append(nxt)
    pairs = frozenset(parents)
    marked = frozenset(p for p in pairs if p[0] in rz.marked and p[1] in g.marked)
    return ControllableProduct(start, pairs, tuple(sorted(edges, key=repr)), marked, parents)


@dataclass(frozen=True)
class ObservableProduct:
    initial: Optional[tuple]
    pairs: frozenset
    edges: tuple
    marked: frozenset
    _parents: dict = field(repr=False, compare=False)

    def witness(self, pair) -> tuple:
        """Strings ``(s1, s2)`` with equal projection leading to ``pair``."""
        labels = _trace_back(self._parents, pair)
        s1 = tuple(a for a, _ in labels if a is not None)
        s2 = tuple(b for _, b in labels if b is not None)
        return s1, s2


def observable_product(r: Automaton, g: Automaton) -> ObservableProduct:
    """Pairs of spec/plant states reached by strings with equal projection.

    Edge labels are ``(e1, e2)`` with ``None`` standing for the empty string;
    the idle ``(None, None)`` self-loop is left implicit.
    """
    ensure_same_alphabet(r, g)
    if r.is_empty or g.is_empty:
        return ObservableProduct(None, frozenset(), (), frozenset(), {})
    obs = r.alphabet.observable
    start = (r.initial, g.initial)
    parents = {start: None}
    queue = deque([start])
    edges = []

    def visit(src, label, nxt):
        edges.append((src, label, nxt))
        if nxt not in parents:
            parents[nxt] = (src, label)
            queue.append(nxt)

    while queue:
        q, x = queue.popleft()
        out_q, out_x = r.outgoing(q), g.outgoing(x)
        for ev, xs in out_x.items():
            if ev not in obs:
                for x2 in xs:
                    visit((q, x), (None, ev), (q, x2))
        for ev, qs in out_q.items():
            if ev not in obs:
                for q2 in qs:
                    visit((q, x), (ev, None), (q2, x))
            else:
                for q2 in qs:
                    for x2 in out_x.get(ev, ()):
                        visit((q, x), (ev, ev), (q2, x2))
    pairs = frozenset(parents)
    marked = frozenset(p for p in pairs if p[0] in r.marked and p[1] in g.marked)
    return ObservableProduct(start, pairs, tuple(sorted(edges, key=repr)), marked, parents)


def reachable_pairs_by_strings(r: Automaton, g: Automaton, maxlen: int) -> set:
    """Witnesses ``(pair, s1, s2)`` found by walking string pairs of equal projection.

    Works on whole state sets (``delta(q0, s1)``, ``alpha(x0, s2)``) rather
    than on single pairs, so it is independent of :func:`observable_product`.
    At most ``maxlen`` moves are made; a joint observable move counts once.
    """
    ensure_same_alphabet(r, g)
    if r.is_empty or g.is_empty:
        return set()
    obs = r.alphabet.observable
    names = r.alphabet.names

    def post(a, cur, ev):
        return frozenset(t for u in cur for t in a.successors(u, ev))

    start = (frozenset([r.initial]), frozenset([g.initial]))
    seen = {start: ((), ())}
    frontier = [start]
    for _ in range(maxlen):
        nxt = []
        for node in frontier:
            qs, xs = node
            s1, s2 = seen[node]
            for ev in names:
                if ev in obs:
                    moves = [((post(r, qs, ev), post(g, xs, ev)), (s1 + (ev,), s2 + (ev,)))]
                else:
                    moves = [((post(r, qs, ev), xs), (s1 + (ev,), s2)),
                             ((qs, post(g, xs, ev)), (s1, s2 + (ev,)))]
                for key, wit in moves:
                    if key[0] and key[1] and key not in seen:
                        seen[key] = wit
                        nxt.append(key)
        frontier = nxt
        if not frontier:
            break
    return {((q, x), s1, s2) for (qs, xs), (s1, s2) in seen.items() for q in qs for x in xs}


class TrackState(NamedTuple):
    q1: str
    x1: str
    q2: str
    x2: str
    s1_nonempty: bool


class _Sync:
    """Integer-indexed synchronous product of a spec and a plant."""

    def __init__(self, rz: Automaton, g: Automaton):
        start = (rz.initial, g.initial)
        self.nodes = [start]
        index = {start: 0}
        self.moves = []
        i = 0
        while i < len(self.nodes):
            q, x = self.nodes[i]
            out_x = g.outgoing(x)
            moves = {}
            for ev, qs in rz.outgoing(q).items():
                xs = out_x.get(ev)
                if not xs:
                    continue
                targets = []
                for q2 in qs:
                    for x2 in xs:
                        j = index.get((q2, x2))
                        if j is None:
                            j = index[(q2, x2)] = len(self.nodes)
                            self.nodes.append((q2, x2))
                        targets.append(j)
                moves[ev] = targets
            self.moves.append(moves)
            i += 1


@dataclass(frozen=True)
class TrackProduct:
    nodes: list = field(repr=False)
    _visited: dict = field(repr=False)

    @property
    def states(self) -> frozenset:
        n, nodes = len(self.nodes), self.nodes
        out = set()
        for key in self._visited:
            pair, flag = divmod(key, 2)
            a1, a2 = divmod(pair, n)
            out.add(TrackState(*nodes[a1], *nodes[a2], bool(flag)))
        return frozenset(out)

    def keys(self):
        """Yield ``(a1, a2, flag)`` index triples of the reachable tuples."""
        n = len(self.nodes)
        for key in self._visited:
            pair, flag = divmod(key, 2)
            a1, a2 = divmod(pair, n)
            yield a1, a2, flag

    def witness_key(self, a1, a2, flag):
        n = len(self.nodes)
        labels = _trace_back(self._visited, (a1 * n + a2) * 2 + flag)
        s1 = tuple(a for a, _ in labels if a is not None)
        s2 = tuple(b for _, b in labels if b is not None)
        return s1, s2

    def witness(self, state: TrackState):
        index = {p: i for i, p in enumerate(self.nodes)}
        return self.witness_key(index[(state.q1, state.x1)], index[(state.q2, state.x2)],
                                int(state.s1_nonempty))

    def __contains__(self, state):
        return state in self.states


def so_track_product(rz: Automaton, g: Automaton) -> TrackProduct:
    """Reachable tuples ``(q1, x1, q2, x2, s1_nonempty)``.

    A tuple is reachable iff there are strings ``s1``, ``s2`` with equal
    projection, both generated by ``rz`` and ``g``, with ``s1`` leading to
    ``(q1, x1)`` and ``s2`` to ``(q2, x2)``; the flag records ``s1 != eps``.
    """
    ensure_same_alphabet(rz, g)
    if rz.is_empty or g.is_empty:
        return TrackProduct([], {})
    sync = _Sync(rz, g)
    n = len(sync.nodes)
    obs = rz.alphabet.observable
    moves = sync.moves
    unobs_labels = [[(ev, t) for ev, ts in m.items() if ev not in obs for t in ts]
                    for m in moves]
    obs_moves = [{ev: ts for ev, ts in m.items() if ev in obs} for m in moves]

    visited = {0: None}
    queue = deque([0])
    while queue:
        key = queue.popleft()
        pair, flag = divmod(key, 2)
        a1, a2 = divmod(pair, n)
        for ev, b1 in unobs_labels[a1]:
            k2 = (b1 * n + a2) * 2 + 1
            if k2 not in visited:
                visited[k2] = (key, (ev, None))
                queue.append(k2)
        for ev, b2 in unobs_labels[a2]:
            k2 = (a1 * n + b2) * 2 + flag
            if k2 not in visited:
                visited[k2] = (key, (None, ev))
                queue.append(k2)
        om2 = obs_moves[a2]
        if om2:
            for ev, t1 in obs_moves[a1].items():
                t2 = om2.get(ev)
                if not t2:
                    continue
                for b1 in t1:
                    base = b1 * n
                    for b2 in t2:
                        k2 = (base + b2) * 2 + 1
                        if k2 not in visited:
                            visited[k2] = (key, (ev, ev))
                            queue.append(k2)
    return TrackProduct(sync.nodes, visited)


def unobs_inclusion_check(g: Automaton, rz: Automaton) -> Optional[tuple]:
    """Check that every plant string without observable events is in ``L(rz)``.

    Returns ``None`` when the inclusion holds, otherwise a shortest
    counterexample string.  Only unobservable events are explored, so the
    subset construction stays confined to the unobservable fragment.
    """
    ensure_same_alphabet(rz, g)
    if g.is_empty:
        return None
    if rz.is_empty:
        return ()
    uo = sorted(g.alphabet.unobservable)
    start = (g.initial, frozenset([rz.initial]))
    parents = {start: None}
    queue = deque([start])
    while queue:
        x, qs = queue.popleft()
        for ev in uo:
            xs = g.successors(x, ev)
            if not xs:
                continue
            qs2 = frozenset(t for q in qs for t in rz.successors(q, ev))
            if not qs2:
                return tuple(_trace_back(parents, (x, qs)) + [ev])
            for x2 in xs:
                nxt = (x2, qs2)
                if nxt not in parents:
                    parents[nxt] = ((x, qs), ev)
                    queue.append(nxt)
    return None
