import itertools

from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import instances, nested_pair_sets, pairs, rows
from simsynth.automata import Automaton, EventAlphabet, StatePairSet, bounded_language
from simsynth.simulation import (FULL, RESTRICTED, f_s_step, greatest_simulation,
                                 is_bisimilar, is_simulated_by, simulation_fixpoint)

T1_SIM = {("q0", "x0"), ("q2", "x2")} | {(q, x) for q in ("q1", "q3")
                                        for x in ("x0", "x1", "x2", "x3", "x4")}


def test_empty_set_maps_to_empty(t1):
    r, g = t1
    empty = StatePairSet.empty(r, g)
    assert len(f_s_step(r, g, empty, FULL)) == 0
    assert len(f_s_step(r, g, empty, RESTRICTED)) == 0


def test_t1_one_step_both_modes(t1):
    r, g = t1
    full = StatePairSet.full(r, g)
    for mode in (FULL, RESTRICTED):
        assert set(f_s_step(r, g, full, mode)) == T1_SIM


def test_t1_mode_fork_without_q1(t1):
    r, g = t1
    z = rows(r, g, ["q0", "q2", "q3"])
    assert ("q0", "x0") not in f_s_step(r, g, z, FULL)
    assert ("q0", "x0") in f_s_step(r, g, z, RESTRICTED)


def test_single_state_reflexive():
    alpha = EventAlphabet.of("a")
    r = Automaton.build(alpha, [], initial="q0")
    g = Automaton.build(alpha, [], initial="x0")
    assert set(greatest_simulation(r, g)) == {("q0", "x0")}


def test_t1_greatest_simulation(t1):
    r, g = t1
    sim = greatest_simulation(r, g)
    assert set(sim) == T1_SIM and ("q0", "x0") in sim


def test_unmatched_event_at_root():
    alpha = EventAlphabet.of("a e")
    r = Automaton.build(alpha, [("q0", "e", "q1")])
    g = Automaton.build(alpha, [("x0", "a", "x1")], initial="x0")
    assert greatest_simulation(r, g) is None


def test_bisimilar_identical(t1):
    r, _ = t1
    assert is_bisimilar(r, r)


def test_classic_split():
    alpha = EventAlphabet.of("a b c")
    merged = Automaton.build(alpha, [("p0", "a", "p1"), ("p1", "b", "p2"), ("p1", "c", "p3")],
                             initial="p0")
    split = Automaton.build(alpha, [("r0", "a", "r1"), ("r1", "b", "r3"),
                                    ("r0", "a", "r2"), ("r2", "c", "r4")], initial="r0")
    assert set(bounded_language(merged, 3)) == set(bounded_language(split, 3))
    assert not is_bisimilar(merged, split)
    assert is_simulated_by(split, merged)
    assert not is_simulated_by(merged, split)


def test_t1_simulation_direction(t1):
    r, g = t1
    assert is_simulated_by(r, g)
    assert not is_simulated_by(g, r)


@given(st.data())
def test_step_shrinks(data):
    r, g = data.draw(instances())
    _, z = data.draw(nested_pair_sets(r, g))
    for mode in (FULL, RESTRICTED):
        assert f_s_step(r, g, z, mode) <= z


@settings(max_examples=200)
@given(st.data())
def test_full_mode_monotone(data):
    r, g = data.draw(instances())
    z, z2 = data.draw(nested_pair_sets(r, g))
    assert f_s_step(r, g, z, FULL) <= f_s_step(r, g, z2, FULL)


def _is_simulation(r, g, rel):
    for q, x in rel:
        if q in r.marked and x not in g.marked:
            return False
        for ev, qs in r.outgoing(q).items():
            for q2 in qs:
                if not any((q2, x2) in rel for x2 in g.successors(x, ev)):
                    return False
    return True


@settings(max_examples=60)
@given(instances(max_states=3))
def test_fixpoint_is_union_of_all_simulations(inst):
    r, g = inst
    universe = [(q, x) for q in r.states for x in g.states]
    union = set()
    for bits in itertools.product((0, 1), repeat=len(universe)):
        rel = {p for p, b in zip(universe, bits) if b}
        if _is_simulation(r, g, rel):
            union |= rel
    assert set(simulation_fixpoint(r, g)) == union


@settings(max_examples=100)
@given(instances())
def test_bisimilar_implies_equal_bounded_languages(inst):
    r, g = inst
    if is_bisimilar(r, g):
        for k in range(7):
            assert set(bounded_language(r, k)) == set(bounded_language(g, k))
    # a renamed copy is always bisimilar
    ren = {q: "c" + q for q in r.states}
    copy = Automaton(r.alphabet, tuple(ren.values()), ren[r.initial],
                     frozenset(ren[q] for q in r.marked),
                     frozenset((ren[a], e, ren[b]) for a, e, b in r.transitions))
    assert is_bisimilar(r, copy)
