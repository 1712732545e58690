import pytest
from hypothesis import settings
from hypothesis import strategies as st

from simsynth import fixtures
from simsynth.automata import Automaton, Event, EventAlphabet, StatePairSet

settings.register_profile("suite", deadline=None)
settings.load_profile("suite")


@pytest.fixture
def t1():
    return fixtures.load("t1")


@pytest.fixture
def t2():
    return fixtures.load("t2")


@pytest.fixture
def t3():
    return fixtures.load("t3")


@pytest.fixture
def mfg():
    return fixtures.load("mfg")


def pairs(r, g, items):
    return StatePairSet(r.states, g.states, items)


def rows(r, g, spec_states):
    return StatePairSet(r.states, g.states, [(q, x) for q in spec_states for x in g.states])


@st.composite
def alphabets(draw, max_events=3):
    n = draw(st.integers(1, max_events))
    return EventAlphabet(Event(f"e{i}", draw(st.booleans()), draw(st.booleans()))
                         for i in range(n))


@st.composite
def automata(draw, alphabet, prefix="q", max_states=4):
    n = draw(st.integers(1, max_states))
    states = [f"{prefix}{i}" for i in range(n)]
    candidates = [(s, e, t) for s in states for e in alphabet.names for t in states]
    trans = draw(st.sets(st.sampled_from(candidates), max_size=2 * n + 2))
    marked = draw(st.sets(st.sampled_from(states)))
    return Automaton(alphabet, tuple(states), states[0], frozenset(marked), frozenset(trans))


@st.composite
def instances(draw, max_states=4, max_events=3):
    """``(spec, plant)`` over a shared random alphabet."""
    alpha = draw(alphabets(max_events))
    return draw(automata(alpha, "q", max_states)), draw(automata(alpha, "x", max_states))


@st.composite
def nested_pair_sets(draw, r, g):
    """``(Z, Z')`` with ``Z`` a subset of ``Z'``."""
    universe = [(q, x) for q in r.states for x in g.states]
    big = draw(st.sets(st.sampled_from(universe)))
    small = draw(st.sets(st.sampled_from(sorted(big)))) if big else set()
    return StatePairSet(r.states, g.states, small), StatePairSet(r.states, g.states, big)


# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for key in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[key])
