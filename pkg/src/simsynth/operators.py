"""The controllable and strong observable operators, calculability, h2/h3.

Both operators remove whole spec-state rows from a pair set ``Z``:

    F_c(Z)  = Z minus (Q_d(Z)  x X)
    F_so(Z) = Z minus (Q_d'(Z) x X)

``Q_d`` collects spec states of ``Rc(Z)`` that refuse an uncontrollable
plant event; ``Q_d'`` collects spec states that refuse a controllable event
the plant can do after a projection-equivalent string.
"""
from dataclasses import dataclass
from typing import NamedTuple, Optional

from .automata import (Automaton, StatePairSet, accessible, restrict,
                       string_count_class)
from .products import (controllable_product, observable_product,
                       so_track_product, unobs_inclusion_check)
from .simulation import RESTRICTED, f_s_step

CONTROLLABILITY = "controllability"
OBSERVABILITY = "observability"
UNOBSERVABLE_INCLUSION = "unobservable-inclusion"
SIMULATION = "simulation"


@dataclass(frozen=True)
class Removal:
    """Why a spec state is dropped, with strings that replay the failure.

    * controllability: ``s1`` leads the spec to ``state`` and the plant to
      ``plant_state``, which can do the uncontrollable ``event``.
    * observability: ``s1`` and ``s2`` have equal projection, ``s2`` leads
      the spec to ``state``; the plant can do the controllable ``event``
      after both, the spec cannot after ``s2``.
    * unobservable-inclusion: the plant generates ``s2`` (no observable
      events) but the spec does not.
    * simulation: every pair of the row failed the simulation operator.
    """
    state: str
    reason: str
    event: Optional[str] = None
    s1: tuple = ()
    s2: tuple = ()
    plant_state: Optional[str] = None

    def describe(self):
        fmt = lambda s: " ".join(s) if s else "eps"
        if self.reason == CONTROLLABILITY:
            return f"{self.state}: uncontrollable {self.event} after '{fmt(self.s1)}' (plant {self.plant_state})"
        if self.reason == OBSERVABILITY:
            return (f"{self.state}: controllable {self.event} refused after '{fmt(self.s2)}'"
                    f" ~ '{fmt(self.s1)}'")
        if self.reason == UNOBSERVABLE_INCLUSION:
            return f"{self.state}: plant string '{fmt(self.s2)}' is unobservable and not in spec"
        return f"{self.state}: no simulating plant state"


class FailureSet(NamedTuple):
    states: frozenset
    witnesses: tuple


def q_d(r: Automaton, g: Automaton, z: StatePairSet, nondet=False) -> FailureSet:
    """Spec states of ``Rc(Z)`` with an edge into the controllable product's sink."""
    rz = restrict(r, z)
    prod = controllable_product(rz, g, nondet=nondet)
    found = {}
    for (q, x), ev in sorted(prod.violations):
        if q not in found:
            found[q] = Removal(q, CONTROLLABILITY, ev, prod.witness((q, x)), (), x)
    return FailureSet(frozenset(found), tuple(found[q] for q in sorted(found)))


def f_c(r, g, z, nondet=False) -> StatePairSet:
    return z.without_rows(q_d(r, g, z, nondet).states)


def _strong_observable_failures(rz: Automaton, g: Automaton) -> dict:
    found = {}
    if rz.is_empty:
        return found
    cex = unobs_inclusion_check(g, rz)
    if cex is not None:
        found[rz.initial] = Removal(rz.initial, UNOBSERVABLE_INCLUSION, None, (), cex)
    track = so_track_product(rz, g)
    ctrl = rz.alphabet.controllable
    nodes = track.nodes
    names = sorted(ctrl)
    bit = {ev: 1 << i for i, ev in enumerate(names)}
    plant_mask, missing_mask = [], []
    for q, x in nodes:
        pm = 0
        for ev in g.outgoing(x):
            pm |= bit.get(ev, 0)
        plant_mask.append(pm)
        qm = 0
        for ev in rz.outgoing(q):
            qm |= bit.get(ev, 0)
        missing_mask.append(pm & ~qm)
    for a1, a2, flag in track.keys():
        if not flag:
            continue
        hit = plant_mask[a1] & missing_mask[a2]
        if not hit:
            continue
        q2 = nodes[a2][0]
        if q2 in found:
            continue
        ev = names[(hit & -hit).bit_length() - 1]
        s1, s2 = track.witness_key(a1, a2, flag)
        found[q2] = Removal(q2, OBSERVABILITY, ev, s1, s2, nodes[a2][1])
    return found


def q_d_prime(r: Automaton, g: Automaton, z: StatePairSet) -> FailureSet:
    """Spec states of ``Rc(Z)`` failing the strong observable condition."""
    found = _strong_observable_failures(restrict(r, z), g)
    return FailureSet(frozenset(found), tuple(found[q] for q in sorted(found)))


def f_so(r, g, z) -> StatePairSet:
    return z.without_rows(q_d_prime(r, g, z).states)


class Calculability(NamedTuple):
    ok: bool
    witness: Optional[tuple] = None   # (q, s, s', event)

    def __bool__(self):
        return self.ok


def is_calculable_controllable(r: Automaton, g: Automaton) -> Calculability:
    """No multi-string spec state refuses an uncontrollable plant continuation."""
    multi = string_count_class(r).multi
    unc = r.alphabet.uncontrollable
    prod = controllable_product(accessible(r), g, nondet=False)
    for q, x in sorted(prod.pairs):
        if q not in multi:
            continue
        missing = (set(g.outgoing(x)) & unc) - set(r.outgoing(q))
        if missing:
            s = prod.witness((q, x))
            return Calculability(False, (q, s, s, min(missing)))
    return Calculability(True)


def is_calculable_strong_observable(r: Automaton, g: Automaton) -> Calculability:
    """No multi-string spec state refuses a controllable plant continuation
    after any projection-equivalent plant string."""
    multi = string_count_class(r).multi
    ctrl = r.alphabet.controllable
    prod = observable_product(accessible(r), accessible(g))
    for q, x in sorted(prod.pairs):
        if q not in multi:
            continue
        missing = (set(g.outgoing(x)) & ctrl) - set(r.outgoing(q))
        if missing:
            s, s2 = prod.witness((q, x))
            return Calculability(False, (q, s, s2, min(missing)))
    return Calculability(True)


class Step(NamedTuple):
    z: StatePairSet
    removals: tuple


def apply_h(r, g, z: StatePairSet, controllable=True, nondet=False) -> Step:
    """One step of h3 (or h2 with ``controllable=False``) with diagnostics."""
    z.check_universe(r, g)
    sim = f_s_step(r, g, z, RESTRICTED)
    rz = restrict(r, z)
    removals = {}
    if controllable:
        for w in q_d(r, g, z, nondet).witnesses:
            removals.setdefault(w.state, w)
    for q, w in sorted(_strong_observable_failures(rz, g).items()):
        removals.setdefault(q, w)
    nxt = sim.without_rows(removals)
    for q in sorted(z.spec_projection() - nxt.spec_projection() - set(removals)):
        removals[q] = Removal(q, SIMULATION)
    return Step(nxt, tuple(removals[q] for q in sorted(removals)))


def h2(r, g, z) -> StatePairSet:
    return apply_h(r, g, z, controllable=False).z


def h3(r, g, z, nondet=False) -> StatePairSet:
    return apply_h(r, g, z, controllable=True, nondet=nondet).z
