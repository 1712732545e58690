"""Reference checks that do not share code paths with the synthesis engine.

The bounded condition checks walk *strings*: every string (or pair of
strings with equal projection) up to a length bound is followed through the
automata as a set of current states.  Strings that reach the same state sets
are interchangeable for the conditions, so each set configuration is
expanded once; nothing else is pruned.

:func:`brute_force_supremal` enumerates every pair set ``Z`` that contains
the initial pair and keeps those that are simulation relations for
``Rc(Z)`` and whose ``Rc(Z)`` passes the bounded condition checks.
"""
import random
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .automata import Automaton, Event, EventAlphabet, StatePairSet, restrict

MAX_PAIRS = 16
CHUNK = 1 << 20


class Witness(NamedTuple):
    s1: tuple
    s2: tuple = ()
    state: Optional[str] = None
    event: Optional[str] = None


def _post(a, states, ev):
    return frozenset(t for u in states for t in a.successors(u, ev))


def _events(a, states):
    return {ev for u in states for ev in a.outgoing(u)}


def _walk(start, moves, k):
    """Breadth-first over configurations, ``k`` moves deep, yielding
    ``(config, witness)`` with the witness of the first visit."""
    seen = {start[0]: start[1]}
    frontier = [start[0]]
    yield start
    for _ in range(k):
        nxt = []
        for node in frontier:
            for key, wit in moves(node, seen[node]):
                if key not in seen:
                    seen[key] = wit
                    nxt.append(key)
                    yield key, wit
        frontier = nxt
        if not frontier:
            return


def bounded_controllable_condition(rz: Automaton, g: Automaton, k: int) -> Optional[Witness]:
    """Every uncontrollable plant continuation of a spec string up to ``k`` is
    offered by every spec state that string reaches."""
    if rz.is_empty or g.is_empty:
        return None
    unc = sorted(rz.alphabet.uncontrollable)
    names = rz.alphabet.names

    def moves(node, s):
        qs, xs = node
        for ev in names:
            qs2 = _post(rz, qs, ev)
            if qs2:
                yield (qs2, _post(g, xs, ev)), s + (ev,)

    for (qs, xs), s in _walk(((frozenset([rz.initial]), frozenset([g.initial])), ()), moves, k):
        plant = _events(g, xs)
        for ev in unc:
            if ev in plant:
                for q in sorted(qs):
                    if not rz.successors(q, ev):
                        return Witness(s, (), q, ev)
    return None


def _unobservable_inclusion(rz, g, k):
    uo = sorted(rz.alphabet.unobservable)

    def moves(node, s):
        qs, xs = node
        for ev in uo:
            xs2 = _post(g, xs, ev)
            if xs2:
                yield (_post(rz, qs, ev), xs2), s + (ev,)

    for (qs, xs), s in _walk(((frozenset([rz.initial]), frozenset([g.initial])), ()), moves, k):
        if not qs:
            return Witness((), s)
    return None


def _two_tracks(a1, b1, a2, b2, k, start1, start2):
    """Walk pairs of strings with equal projection.  Track ``i`` follows its
    string in automata ``ai`` and ``bi``; configurations with an empty state
    set are dropped.  Yields ``((A1, B1, A2, B2, nonempty1), (s1, s2))``."""
    alpha = a1.alphabet
    names = alpha.names
    obs = alpha.observable

    def moves(node, wit):
        p1, r1, p2, r2, ne = node
        s1, s2 = wit
        for ev in names:
            n1 = (_post(a1, p1, ev), _post(b1, r1, ev))
            if ev in obs:
                n2 = (_post(a2, p2, ev), _post(b2, r2, ev))
                if all(n1) and all(n2):
                    yield (*n1, *n2, True), (s1 + (ev,), s2 + (ev,))
            else:
                if all(n1):
                    yield (*n1, p2, r2, True), (s1 + (ev,), s2)
                n2 = (_post(a2, p2, ev), _post(b2, r2, ev))
                if all(n2):
                    yield (p1, r1, *n2, ne), (s1, s2 + (ev,))

    start = ((*start1, *start2, False), ((), ()))
    yield from _walk(start, moves, k)


def bounded_strong_observable_condition(rz: Automaton, g: Automaton, k: int) -> Optional[Witness]:
    """Both clauses of the strong observable condition over strings up to ``k``.

    Returns ``Witness((), s')`` for a failing unobservable plant string, or
    ``Witness(s1, s2, q, event)`` for a refused controllable event.
    """
    if rz.is_empty or g.is_empty:
        return None
    cex = _unobservable_inclusion(rz, g, k)
    if cex is not None:
        return cex
    ctrl = sorted(rz.alphabet.controllable)
    init = (frozenset([rz.initial]), frozenset([g.initial]))
    for (q1, x1, q2, x2, ne), (s1, s2) in _two_tracks(rz, g, rz, g, k, init, init):
        if not ne:
            continue
        both = _events(g, x1) & _events(g, x2)
        for ev in ctrl:
            if ev in both:
                for q in sorted(q2):
                    if not rz.successors(q, ev):
                        return Witness(s1, s2, q, ev)
    return None


def bounded_observable_condition(rz: Automaton, g: Automaton, k: int) -> Optional[Witness]:
    """For spec strings ``s``, ``s'`` with equal projection and controllable
    ``e``: ``s' e`` in L(rz) and ``s e`` in L(g) imply every state reached by
    ``s`` offers ``e``."""
    if rz.is_empty or g.is_empty:
        return None
    ctrl = sorted(rz.alphabet.controllable)
    init = (frozenset([rz.initial]), frozenset([g.initial]))
    init2 = (frozenset([rz.initial]), frozenset([rz.initial]))
    # track 1 follows s in (rz, g); track 2 follows s' in (rz, rz)
    for (qs, xs, qs2, _, _), (s, s2) in _two_tracks(rz, g, rz, rz, k, init, init2):
        cont = _events(g, xs) & _events(rz, qs2)
        for ev in ctrl:
            if ev in cont:
                for q in sorted(qs):
                    if not rz.successors(q, ev):
                        return Witness(s, s2, q, ev)
    return None


def bounded_language_controllable(sub: Automaton, g: Automaton, k: int) -> Optional[Witness]:
    """``s`` in L(sub), ``s e`` in L(g), ``e`` uncontrollable => ``s e`` in L(sub)."""
    if sub.is_empty or g.is_empty:
        return None
    unc = sorted(sub.alphabet.uncontrollable)
    names = sub.alphabet.names

    def moves(node, s):
        qs, xs = node
        for ev in names:
            qs2 = _post(sub, qs, ev)
            if qs2:
                yield (qs2, _post(g, xs, ev)), s + (ev,)

    for (qs, xs), s in _walk(((frozenset([sub.initial]), frozenset([g.initial])), ()), moves, k):
        missing = (_events(g, xs) - _events(sub, qs))
        for ev in unc:
            if ev in missing:
                return Witness(s, (), None, ev)
    return None


def bounded_language_observable(sub: Automaton, g: Automaton, k: int) -> Optional[Witness]:
    """``s``, ``s'`` in L(sub) with equal projection, ``s e`` in L(sub) and
    ``s' e`` in L(g) for controllable ``e`` => ``s' e`` in L(sub)."""
    if sub.is_empty or g.is_empty:
        return None
    ctrl = sorted(sub.alphabet.controllable)
    init = (frozenset([sub.initial]), frozenset([sub.initial]))
    init2 = (frozenset([sub.initial]), frozenset([g.initial]))
    for (qs, _, qs2, xs2, _), (s, s2) in _two_tracks(sub, sub, sub, g, k, init, init2):
        missing = (_events(sub, qs) & _events(g, xs2)) - _events(sub, qs2)
        for ev in ctrl:
            if ev in missing:
                return Witness(s, s2, None, ev)
    return None


def condition_bound(r: Automaton, g: Automaton) -> int:
    return len(r.states) * len(g.states) * 2


class OracleResult(NamedTuple):
    pairs: Optional[StatePairSet]   # canonical supremal pair set, None if there is none
    union: Optional[StatePairSet]   # plain union of every valid set
    union_closed: bool              # whether ``union`` is itself valid
    valid_count: int
    states: tuple = ()              # states of the largest valid subautomaton
    subautomata: tuple = ()         # every distinct valid subautomaton

    @property
    def exists(self):
        return self.pairs is not None


class OracleGuardExceeded(ValueError):
    pass


def naive_greatest_simulation(a: Automaton, g: Automaton) -> set:
    """Largest set of pairs ``(q, x)`` with ``x`` simulating ``q``, by repeated deletion."""
    rel = {(q, x) for q in a.states for x in g.states
           if q not in a.marked or x in g.marked}
    changed = True
    while changed:
        changed = False
        for q, x in sorted(rel):
            for src, ev, dst in a.transitions:
                if src == q and not any((dst, x2) in rel for x2 in g.successors(x, ev)):
                    rel.discard((q, x))
                    changed = True
                    break
    return rel


def brute_force_supremal(r: Automaton, g: Automaton, mode="cso", k=None,
                         max_pairs=MAX_PAIRS) -> OracleResult:
    """Enumerate all ``2^(|Q||X|)`` pair sets and keep the valid ones.

    A set is valid when it contains the initial pair, is a simulation for
    the transitions among its own spec states, and its subautomaton passes
    the bounded condition checks.  The union of the valid sets is reported
    together with whether it is valid itself.  ``pairs`` is the canonical
    answer: the largest valid subautomaton (which exists whenever one valid
    subautomaton contains all others) paired with its greatest simulation
    into ``g``.
    """
    nq, nx = len(r.states), len(g.states)
    n = nq * nx
    if n > max_pairs:
        raise OracleGuardExceeded(f"|Q|*|X| = {n} exceeds {max_pairs}")
    k = condition_bound(r, g) if k is None else k
    qi = {q: i for i, q in enumerate(r.states)}
    xi = {x: i for i, x in enumerate(g.states)}
    bit = lambda q, x: qi[q] * nx + xi[x]
    init_bit = 1 << bit(r.initial, g.initial)
    row_mask = [sum(1 << (i * nx + j) for j in range(nx)) for i in range(nq)]
    forbidden = 0
    obligations = []    # (pair bit, row index of target, bits of matching pairs)
    for q in r.states:
        for x in g.states:
            if q in r.marked and x not in g.marked:
                forbidden |= 1 << bit(q, x)
                continue
            for ev, qs in r.outgoing(q).items():
                for q2 in qs:
                    match = sum(1 << bit(q2, x2) for x2 in g.successors(x, ev))
                    obligations.append((1 << bit(q, x), qi[q2], match))

    subautomata, rejected = {}, set()

    def conditions_hold(p):
        if p in subautomata:
            return True
        if p in rejected:
            return False
        rows = [r.states[i] for i in range(nq) if p >> i & 1]
        rz = restrict(r, StatePairSet(r.states, g.states, ((q, x) for q in rows for x in g.states)))
        good = bounded_strong_observable_condition(rz, g, k) is None
        if good and mode == "cso":
            good = bounded_controllable_condition(rz, g, k) is None
        (subautomata.__setitem__(p, rz) if good else rejected.add(p))
        return good

    def keep(masks):
        has_row = [(masks & m) != 0 for m in row_mask]
        ok = ((masks & init_bit) != 0) & ((masks & forbidden) == 0)
        for b, target, match in obligations:
            # obligation only while the target is still a row of Z
            ok &= ~(((masks & b) != 0) & has_row[target] & ((masks & match) == 0))
        proj = np.zeros_like(masks)
        for i in range(nq):
            proj |= has_row[i].astype(np.int64) << i
        for p in np.unique(proj[ok]):
            if not conditions_hold(int(p)):
                ok &= proj != p
        return ok

    union_mask, count = 0, 0
    total = 1 << n
    for start in range(0, total, CHUNK):
        masks = np.arange(start, min(start + CHUNK, total), dtype=np.int64)
        masks = masks[(masks & init_bit) != 0]
        valid = masks[keep(masks)]
        if len(valid):
            count += len(valid)
            union_mask |= int(np.bitwise_or.reduce(valid))
    if count == 0:
        return OracleResult(None, None, True, 0)
    closed = bool(keep(np.array([union_mask], dtype=np.int64))[0])
    decode = lambda m: StatePairSet(r.states, g.states, [
        (q, x) for q in r.states for x in g.states if m >> bit(q, x) & 1])

    top = set().union(*(a.states for a in subautomata.values()))
    best = next((a for a in subautomata.values() if set(a.states) == top), None)
    pairs = None
    if best is not None:
        pairs = StatePairSet(r.states, g.states, naive_greatest_simulation(best, g))
    return OracleResult(pairs, decode(union_mask), closed, count,
                        best.states if best is not None else (),
                        tuple(subautomata[p] for p in sorted(subautomata)))


@dataclass(frozen=True)
class RandomInstanceSpec:
    seed: int = 0
    spec_states: tuple = (2, 4)
    plant_states: tuple = (2, 4)
    n_events: int = 3
    density: float = 0.4
    frac_uncontrollable: float = 0.3
    frac_unobservable: float = 0.3
    marked_prob: float = 0.3
    substructure: bool = True


def _random_alphabet(rng, spec):
    events = []
    for i in range(spec.n_events):
        events.append(Event(f"e{i}", rng.random() >= spec.frac_uncontrollable,
                            rng.random() >= spec.frac_unobservable))
    return EventAlphabet(events)


def _random_automaton(rng, alphabet, n, density, marked_prob, prefix, name):
    states = [f"{prefix}{i}" for i in range(n)]
    trans = set()
    for s in states:
        for ev in alphabet.names:
            while rng.random() < density:
                trans.add((s, ev, rng.choice(states)))
                density_left = density * 0.5
                if rng.random() >= density_left:
                    break
    marked = {s for s in states if rng.random() < marked_prob}
    return Automaton(alphabet, tuple(states), states[0], frozenset(marked), frozenset(trans), name)


def random_instance(spec: RandomInstanceSpec):
    """A seeded ``(spec, plant)`` pair.

    With ``substructure`` the spec is grown along plant edges (each spec
    state shadows a plant state), so the plant always simulates it.
    """
    rng = random.Random(spec.seed)
    alphabet = _random_alphabet(rng, spec)
    nx = rng.randint(*spec.plant_states)
    nq = rng.randint(*spec.spec_states)
    g = _random_automaton(rng, alphabet, nx, spec.density, spec.marked_prob, "x", "G")
    if not spec.substructure:
        r = _random_automaton(rng, alphabet, nq, spec.density, spec.marked_prob, "q", "R")
        return r, g

    shadow = {"q0": g.initial}
    trans = set()
    for i in range(1, nq):
        options = [(q, ev, x2) for q, x in sorted(shadow.items())
                   for ev, xs in g.outgoing(x).items() for x2 in xs]
        if not options:
            break
        q, ev, x2 = rng.choice(options)
        new = f"q{i}"
        shadow[new] = x2
        trans.add((q, ev, new))
    for q, x in sorted(shadow.items()):
        for q2, x2 in sorted(shadow.items()):
            for ev, xs in g.outgoing(x).items():
                if x2 in xs and rng.random() < spec.density * 0.5:
                    trans.add((q, ev, q2))
    marked = {q for q, x in shadow.items() if x in g.marked and rng.random() < 0.7}
    r = Automaton(alphabet, tuple(shadow), "q0", frozenset(marked), frozenset(trans), "R")
    return r, g
