"""Fixpoint synthesis of the supremal simulation-based controllable and/or
strong observable subautomaton, and verification of a candidate."""
from dataclasses import dataclass, field
from typing import Optional

from .automata import (Automaton, StatePairSet, accessible, ensure_same_alphabet,
                       ensure_valid, restrict)
from .operators import (apply_h, is_calculable_controllable,
                        is_calculable_strong_observable, q_d, q_d_prime)
from .simulation import greatest_simulation

STRONG_OBSERVABLE = "so"
CONTROLLABLE_STRONG_OBSERVABLE = "cso"

RESULT = "result"
NONEXISTENT = "nonexistent"
NOT_CALCULABLE = "not-calculable"


@dataclass(frozen=True)
class Iteration:
    index: int
    size: int
    removed: tuple        # Removal records, one per dropped spec state

    @property
    def removed_states(self):
        return tuple(w.state for w in self.removed)


@dataclass
class SynthesisTrace:
    mode: str
    calculable: dict = field(default_factory=dict)
    iterations: list = field(default_factory=list)
    outcome: str = NONEXISTENT
    reason: str = ""
    fixpoint: Optional[StatePairSet] = None
    result: Optional[Automaton] = None
    pairs: Optional[StatePairSet] = None    # greatest simulation of the result into the plant

    @property
    def exists(self):
        return self.outcome == RESULT

    def lines(self):
        """The trace as ``key=value`` records, one per line."""
        out = [f"mode={self.mode}"]
        for key, verdict in self.calculable.items():
            out.append(f"calculable_{key}={'true' if verdict.ok else 'false'}")
            if not verdict.ok:
                q, s, s2, ev = verdict.witness
                out.append(f"calculable_{key}_witness=state:{q} s:{_fmt(s)} s':{_fmt(s2)} event:{ev}")
        for it in self.iterations:
            removed = ",".join(it.removed_states)
            reasons = ";".join(w.describe() for w in it.removed)
            out.append(f"iter={it.index} size={it.size} removed={removed} reason={reasons}")
        out.append(f"outcome={self.outcome}")
        if self.reason:
            out.append(f"reason={self.reason}")
        if self.fixpoint is not None:
            out.append(f"fixpoint_states={','.join(sorted(self.fixpoint.spec_projection()))}")
        if self.result is not None:
            out.append(f"result_states={','.join(self.result.states)}")
        return out


def _fmt(s):
    return " ".join(s) if s else "eps"


def _run(r, g, mode, nondet=False):
    ensure_valid(r, g)
    ensure_same_alphabet(r, g)
    trace = SynthesisTrace(mode)
    if mode == CONTROLLABLE_STRONG_OBSERVABLE:
        trace.calculable["controllable"] = is_calculable_controllable(r, g)
    elif mode != STRONG_OBSERVABLE:
        raise ValueError(f"unknown mode {mode!r}")
    trace.calculable["strong_observable"] = is_calculable_strong_observable(r, g)
    if not all(trace.calculable.values()):
        trace.outcome = NOT_CALCULABLE
        trace.reason = "specification is not calculable"
        return trace
    if r.is_empty or g.is_empty:
        trace.reason = "empty automaton"
        return trace

    z = StatePairSet.full(r, g)
    index = 0
    while True:
        index += 1
        step = apply_h(r, g, z, controllable=(mode == CONTROLLABLE_STRONG_OBSERVABLE),
                       nondet=nondet)
        trace.iterations.append(Iteration(index, len(step.z), step.removals))
        if step.z == z:
            break
        z = step.z
    trace.fixpoint = z
    if (r.initial, g.initial) not in z:
        trace.reason = f"({r.initial}, {g.initial}) removed"
        return trace
    trace.outcome = RESULT
    trace.result = restrict(r, z)
    trace.pairs = canonical_pairs(r, g, trace.result)
    return trace


def canonical_pairs(r: Automaton, g: Automaton, sub: Automaton) -> Optional[StatePairSet]:
    """The greatest simulation of ``sub`` into ``g``, over the pair universe of ``r``.

    The last iterate may keep rows of states that are no longer accessible
    and may lack pairs dropped before their obligations vanished; this form
    depends on the result subautomaton only.
    """
    sim = greatest_simulation(sub, g) if not sub.is_empty else None
    if sim is None:
        return None
    return StatePairSet(r.states, g.states, sim)


def algorithm1(r: Automaton, g: Automaton) -> SynthesisTrace:
    """Supremal simulation-based strong observable subautomaton of ``r``."""
    return _run(r, g, STRONG_OBSERVABLE)


def algorithm2(r: Automaton, g: Automaton, nondet=False) -> SynthesisTrace:
    """Supremal simulation-based controllable and strong observable subautomaton."""
    return _run(r, g, CONTROLLABLE_STRONG_OBSERVABLE, nondet=nondet)


def synthesize(r, g, mode=CONTROLLABLE_STRONG_OBSERVABLE):
    return algorithm2(r, g) if mode == CONTROLLABLE_STRONG_OBSERVABLE else algorithm1(r, g)


@dataclass
class Check:
    name: str
    ok: bool
    detail: str = ""
    required: bool = True     # informational checks do not affect the outcome


@dataclass
class VerificationReport:
    checks: list

    @property
    def ok(self):
        return all(c.ok for c in self.checks if c.required)

    def __getitem__(self, name) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def lines(self):
        out = []
        for c in self.checks:
            verdict = ("ok" if c.ok else "FAIL") if c.required else ("ok" if c.ok else "no") + " [info]"
            out.append(f"{c.name}: {verdict}" + (f" ({c.detail})" if c.detail else ""))
        out.append("outcome: " + ("valid result" if self.ok else "not a valid result"))
        return out


def verify_result(r: Automaton, g: Automaton, sub: Automaton, bound=None,
                  mode=CONTROLLABLE_STRONG_OBSERVABLE) -> VerificationReport:
    """Check a candidate subautomaton against every condition separately.

    In ``so`` mode the controllability checks are still reported but do not
    count against the candidate.
    """
    from .oracle import bounded_language_controllable, bounded_language_observable

    ensure_valid(r, g, sub)
    ensure_same_alphabet(r, g)
    ensure_same_alphabet(r, sub)
    checks = []
    sim = greatest_simulation(sub, g) if not sub.is_empty else None
    checks.append(Check("simulated_by_plant", sim is not None,
                        "" if sim is not None else "no simulation contains the initial pair"))

    full = StatePairSet.full(sub, g)
    qd = q_d(sub, g, full, nondet=False)
    need_ctrl = mode == CONTROLLABLE_STRONG_OBSERVABLE
    checks.append(Check("controllable", not qd.states,
                        "; ".join(w.describe() for w in qd.witnesses), need_ctrl))
    qdp = q_d_prime(sub, g, full)
    checks.append(Check("strong_observable", not qdp.states,
                        "; ".join(w.describe() for w in qdp.witnesses)))

    if sub.is_empty:
        checks.append(Check("simulated_by_spec", False, "empty candidate"))
    else:
        in_spec = greatest_simulation(sub, r) is not None
        checks.append(Check("simulated_by_spec", in_spec))

    k = bound if bound is not None else (len(accessible(sub).states) + 1) * (len(g.states) + 1)
    lc = bounded_language_controllable(sub, g, k)
    checks.append(Check("language_controllable", lc is None,
                        "" if lc is None else f"witness {lc}", need_ctrl))
    lo = bounded_language_observable(sub, g, k)
    checks.append(Check("language_observable", lo is None,
                        "" if lo is None else f"witness {lo}"))
    return VerificationReport(checks)
