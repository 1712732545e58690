"""Simulation operator, greatest simulations and bisimilarity."""
from typing import Optional

from .automata import (Automaton, StatePairSet, ensure_same_alphabet, ensure_valid)

FULL = "full"
RESTRICTED = "restricted"


def f_s_step(r: Automaton, g: Automaton, z: StatePairSet, mode=FULL) -> StatePairSet:
    """One application of the simulation operator to ``z``.

    A pair ``(q, x)`` of ``z`` survives when ``q`` marked implies ``x`` marked
    and every move ``q -e-> q'`` has a matching ``x -e-> x'`` with
    ``(q', x')`` in ``z``.  In ``restricted`` mode only moves into spec states
    that still occur in ``z`` are obligations.
    """
    z.check_universe(r, g)
    if mode not in (FULL, RESTRICTED):
        raise ValueError(f"unknown mode {mode!r}")
    rows = z.spec_projection() if mode == RESTRICTED else None
    pairs = z.pairs
    keep = []
    for q, x in pairs:
        if q in r.marked and x not in g.marked:
            continue
        ok = True
        for ev, qs in r.outgoing(q).items():
            xs = g.successors(x, ev)
            for q2 in qs:
                if rows is not None and q2 not in rows:
                    continue
                if not any((q2, x2) in pairs for x2 in xs):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            keep.append((q, x))
    return z.like(keep)


def simulation_fixpoint(r: Automaton, g: Automaton, z: Optional[StatePairSet] = None,
                        mode=FULL) -> StatePairSet:
    """Iterate :func:`f_s_step` from ``z`` (default ``Q x X``) to its fixpoint."""
    z = StatePairSet.full(r, g) if z is None else z
    while True:
        nxt = f_s_step(r, g, z, mode)
        if nxt == z:
            return z
        z = nxt


def greatest_simulation(r: Automaton, g: Automaton) -> Optional[StatePairSet]:
    """The largest simulation of ``r`` by ``g``, or ``None`` if ``r`` is not simulated."""
    ensure_valid(r, g)
    ensure_same_alphabet(r, g)
    if r.is_empty:
        return None
    if g.is_empty:
        return None
    z = simulation_fixpoint(r, g)
    return z if (r.initial, g.initial) in z else None


def is_simulated_by(r: Automaton, g: Automaton) -> bool:
    return greatest_simulation(r, g) is not None


def greatest_bisimulation(a: Automaton, b: Automaton) -> frozenset:
    """Largest relation matching moves both ways and marking both ways."""
    pairs = {(p, q) for p in a.states for q in b.states
             if (p in a.marked) == (q in b.marked)}
    while True:
        keep = set()
        for p, q in pairs:
            out_p, out_q = a.outgoing(p), b.outgoing(q)
            if set(out_p) != set(out_q):
                continue
            fwd = all(any((p2, q2) in pairs for q2 in out_q[ev])
                      for ev, ps in out_p.items() for p2 in ps)
            bwd = fwd and all(any((p2, q2) in pairs for p2 in out_p[ev])
                              for ev, qs in out_q.items() for q2 in qs)
            if bwd:
                keep.add((p, q))
        if keep == pairs:
            return frozenset(pairs)
        pairs = keep


def is_bisimilar(a: Automaton, b: Automaton) -> bool:
    ensure_valid(a, b)
    ensure_same_alphabet(a, b)
    if a.is_empty or b.is_empty:
        return a.is_empty and b.is_empty
    return (a.initial, b.initial) in greatest_bisimulation(a, b)
