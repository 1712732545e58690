"""Nondeterministic automata with controllability/observability flags.

All values are immutable; every operation is a pure function.  States and
events are plain strings and are kept in lexicographic order so that every
traversal (and every file or trace derived from one) is reproducible.
"""
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Optional

CONTROLLABLE = "c"
UNCONTROLLABLE = "uc"
OBSERVABLE = "o"
UNOBSERVABLE = "uo"


class AutomatonError(ValueError):
    """Raised when an automaton (or a pair of automata) is not usable."""


class AlphabetMismatch(AutomatonError):
    pass


@dataclass(frozen=True, order=True)
class Event:
    name: str
    controllable: bool = True
    observable: bool = True

    @property
    def flags(self):
        return (CONTROLLABLE if self.controllable else UNCONTROLLABLE,
                OBSERVABLE if self.observable else UNOBSERVABLE)


@dataclass(frozen=True)
class EventAlphabet:
    events: tuple

    def __init__(self, events: Iterable[Event] = ()):
        object.__setattr__(self, "events", tuple(sorted(events, key=lambda e: e.name)))

    @classmethod
    def of(cls, controllable="", uncontrollable="", unobservable=()):
        """Shorthand: ``EventAlphabet.of("a b", "u", unobservable={"u"})``."""
        uo = set(unobservable.split() if isinstance(unobservable, str) else unobservable)
        evs = [Event(n, True, n not in uo) for n in controllable.split()]
        evs += [Event(n, False, n not in uo) for n in uncontrollable.split()]
        return cls(evs)

    def __iter__(self) -> Iterator[Event]:
        return iter(self.events)

    def __len__(self):
        return len(self.events)

    def __contains__(self, name):
        return name in self._by_name

    def __getitem__(self, name) -> Event:
        return self._by_name[name]

    @cached_property
    def _by_name(self):
        return {e.name: e for e in self.events}

    @property
    def names(self):
        return tuple(e.name for e in self.events)

    @cached_property
    def controllable(self):
        return frozenset(e.name for e in self.events if e.controllable)

    @cached_property
    def uncontrollable(self):
        return frozenset(e.name for e in self.events if not e.controllable)

    @cached_property
    def observable(self):
        return frozenset(e.name for e in self.events if e.observable)

    @cached_property
    def unobservable(self):
        return frozenset(e.name for e in self.events if not e.observable)


@dataclass(frozen=True)
class Automaton:
    """A nondeterministic automaton ``(states, alphabet, initial, trans, marked)``.

    ``initial`` is ``None`` only for the empty automaton (no states, empty
    language).  ``transitions`` is a set of ``(src, event, dst)`` triples, so
    a successor can never be listed twice.
    """
    alphabet: EventAlphabet
    states: tuple
    initial: Optional[str]
    marked: frozenset = frozenset()
    transitions: frozenset = frozenset()
    name: str = field(default="A", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(sorted(set(self.states))))
        object.__setattr__(self, "marked", frozenset(self.marked))
        object.__setattr__(self, "transitions", frozenset(tuple(t) for t in self.transitions))

    @classmethod
    def build(cls, alphabet, transitions=(), initial="q0", marked=(), states=(), name="A"):
        """Build from a transition list; states are inferred from the edges."""
        transitions = [tuple(t) for t in transitions]
        all_states = set(states) | {initial}
        for src, _, dst in transitions:
            all_states.update((src, dst))
        return cls(alphabet, tuple(all_states), initial, frozenset(marked),
                   frozenset(transitions), name)

    @classmethod
    def empty(cls, alphabet, name="empty"):
        return cls(alphabet, (), None, frozenset(), frozenset(), name)

    @property
    def is_empty(self):
        return self.initial is None

    @cached_property
    def _out(self):
        out = {s: {} for s in self.states}
        for src, ev, dst in sorted(self.transitions):
            out.setdefault(src, {}).setdefault(ev, []).append(dst)
        return {s: {e: tuple(d) for e, d in m.items()} for s, m in out.items()}

    def successors(self, state, event) -> tuple:
        return self._out.get(state, {}).get(event, ())

    def outgoing(self, state) -> dict:
        """``{event: successors}`` for one state, events in canonical order."""
        return self._out.get(state, {})

    def sorted_transitions(self):
        return sorted(self.transitions)

    def with_name(self, name):
        return Automaton(self.alphabet, self.states, self.initial, self.marked,
                         self.transitions, name)


def validate(a: Automaton) -> list:
    """Return a list of violation messages; an empty list means valid."""
    problems = []
    seen = set()
    for ev in a.alphabet.events:
        if ev.name in seen:
            problems.append(f"duplicate event {ev.name}")
        seen.add(ev.name)
    states = set(a.states)
    if a.initial is None:
        if states or a.transitions:
            problems.append("missing initial state")
    elif a.initial not in states:
        problems.append(f"unknown state {a.initial} (initial)")
    for m in sorted(a.marked - states):
        problems.append(f"unknown state {m} (marked)")
    for src, ev, dst in sorted(a.transitions):
        for s in (src, dst):
            if s not in states:
                problems.append(f"unknown state {s} (transition {src} {ev} {dst})")
        if ev not in seen:
            problems.append(f"unknown event {ev} (transition {src} {ev} {dst})")
    return problems


def ensure_valid(*automata):
    for a in automata:
        problems = validate(a)
        if problems:
            raise AutomatonError(f"{a.name}: " + "; ".join(problems))


def ensure_same_alphabet(r: Automaton, g: Automaton):
    if r.alphabet.events != g.alphabet.events:
        raise AlphabetMismatch(f"alphabets of {r.name} and {g.name} differ")


def reachable_states(a: Automaton, start=None) -> set:
    if a.is_empty:
        return set()
    start = [a.initial] if start is None else list(start)
    seen = set(start)
    queue = deque(start)
    while queue:
        s = queue.popleft()
        for succ in a.outgoing(s).values():
            for t in succ:
                if t not in seen:
                    seen.add(t)
                    queue.append(t)
    return seen


def _sub(a: Automaton, keep: set, name=None) -> Automaton:
    return Automaton(a.alphabet, tuple(keep), a.initial, a.marked & keep,
                     frozenset(t for t in a.transitions if t[0] in keep and t[2] in keep),
                     name or a.name)


def accessible(a: Automaton) -> Automaton:
    """Trim ``a`` to the states reachable from its initial state."""
    if a.is_empty:
        return a
    return _sub(a, reachable_states(a))


def restrict(r: Automaton, z: "StatePairSet") -> Automaton:
    """The subautomaton of ``r`` on the spec states occurring in ``z``, trimmed.

    Returns the empty automaton if the initial state is cut away.
    """
    if tuple(z.spec_states) != tuple(r.states):
        raise AutomatonError("state-pair universe does not match the spec states")
    keep = z.spec_projection()
    if r.initial not in keep:
        return Automaton.empty(r.alphabet, r.name)
    return accessible(_sub(r, set(keep)))


def step(a: Automaton, start, s) -> frozenset:
    """States reachable from the set ``start`` by exactly the string ``s``."""
    current = set(start)
    for ev in s:
        if ev not in a.alphabet:
            raise AutomatonError(f"unknown event {ev}")
        current = {t for q in current for t in a.successors(q, ev)}
        if not current:
            break
    return frozenset(current)


def generates(a: Automaton, s) -> bool:
    return not a.is_empty and bool(step(a, {a.initial}, s))


def project(alphabet: EventAlphabet, s) -> tuple:
    """Natural projection: erase the unobservable events of ``s``."""
    out = []
    for ev in s:
        if ev not in alphabet:
            raise AutomatonError(f"unknown event {ev}")
        if alphabet[ev].observable:
            out.append(ev)
    return tuple(out)


def active_events(a: Automaton, x) -> frozenset:
    if x not in a._out:
        raise AutomatonError(f"unknown state {x}")
    return frozenset(a.outgoing(x))


def co_reachable_pairs(a: Automaton, b: Automaton) -> set:
    """Pairs ``(u, v)`` such that one string leads ``a`` to ``u`` and ``b`` to ``v``."""
    if a.is_empty or b.is_empty:
        return set()
    start = (a.initial, b.initial)
    seen = {start}
    queue = deque([start])
    while queue:
        u, v = queue.popleft()
        out_v = b.outgoing(v)
        for ev, us in a.outgoing(u).items():
            for u2 in us:
                for v2 in out_v.get(ev, ()):
                    if (u2, v2) not in seen:
                        seen.add((u2, v2))
                        queue.append((u2, v2))
    return seen


@dataclass(frozen=True)
class _NondetInfo:
    state_sets: dict
    active: dict


def _nondet_info(a: Automaton) -> _NondetInfo:
    cached = a.__dict__.get("_nondet_cache")
    if cached is not None:
        return cached
    pairs = co_reachable_pairs(a, a)
    sets = {}
    for u, v in pairs:
        sets.setdefault(u, set()).add(v)
    state_sets = {u: frozenset(vs) for u, vs in sets.items()}
    active = {u: frozenset(ev for v in vs for ev in a.outgoing(v)) for u, vs in state_sets.items()}
    info = _NondetInfo(state_sets, active)
    a.__dict__["_nondet_cache"] = info
    return info


def nondet_state_set(a: Automaton, x) -> frozenset:
    """States reachable by some string that also reaches ``x``."""
    try:
        return _nondet_info(a).state_sets[x]
    except KeyError:
        raise AutomatonError(f"state {x} is not reachable") from None


def nondet_active_events(a: Automaton, x) -> frozenset:
    try:
        return _nondet_info(a).active[x]
    except KeyError:
        raise AutomatonError(f"state {x} is not reachable") from None


UNREACHABLE, EXACTLY_ONE, TWO_OR_MORE = "unreachable", "exactly-one", "two-or-more"


@dataclass(frozen=True)
class StringCountClass:
    tags: dict

    @property
    def multi(self) -> frozenset:
        """States reached by at least two distinct strings."""
        return frozenset(q for q, t in self.tags.items() if t == TWO_OR_MORE)

    def __getitem__(self, q):
        return self.tags[q]


def _backward_closure(a: Automaton, targets) -> set:
    pred = {}
    for src, _, dst in a.transitions:
        pred.setdefault(dst, set()).add(src)
    seen = set(targets)
    queue = deque(targets)
    while queue:
        s = queue.popleft()
        for p in pred.get(s, ()):
            if p not in seen:
                seen.add(p)
                queue.append(p)
    return seen


def string_count_class(a: Automaton) -> StringCountClass:
    """Classify each state by how many distinct strings reach it (0, 1, >=2).

    Two distinct strings reach ``q`` iff either one is a proper prefix of the
    other (some ``u`` co-reachable with ``q`` has a nonempty path back to
    ``q``) or, after a common prefix leading to ``u`` and ``u'`` (possibly
    equal), they continue with different events and both later reach ``q``.
    Both tests are reachability questions, so no determinization is needed.
    """
    reach = reachable_states(a)
    tags = {q: UNREACHABLE for q in a.states}
    if not reach:
        return StringCountClass(tags)
    pairs = co_reachable_pairs(a, a)
    with_partner = {}
    for q, u in pairs:
        with_partner.setdefault(q, set()).add(u)
    for q in sorted(reach):
        # states with a nonempty path to q
        reaches_q = _backward_closure(a, [q])
        plus = {src for src, _, dst in a.transitions if dst in reaches_q}
        multi = any(u in plus for u in with_partner.get(q, ()))
        if not multi:
            toward = {u: {ev for ev, succ in a.outgoing(u).items()
                          if any(t in reaches_q for t in succ)} for u in reach}
            multi = any(toward[u] and toward[v] and len(toward[u] | toward[v]) >= 2
                        for u, v in pairs)
        tags[q] = TWO_OR_MORE if multi else EXACTLY_ONE
    return StringCountClass(tags)


def bounded_language(a: Automaton, k: int) -> list:
    """All strings of ``L(a)`` of length at most ``k``, shortest first."""
    if a.is_empty:
        return []
    out = [()]
    frontier = {(): frozenset([a.initial])}
    for _ in range(k):
        nxt = {}
        for s, cur in frontier.items():
            for ev in a.alphabet.names:
                succ = frozenset(t for q in cur for t in a.successors(q, ev))
                if succ:
                    nxt[s + (ev,)] = succ
        frontier = dict(sorted(nxt.items()))
        out.extend(frontier)
        if not frontier:
            break
    return out


class StatePairSet:
    """An immutable subset of ``Q x X`` with a fixed universe."""

    __slots__ = ("spec_states", "plant_states", "pairs", "_hash")

    def __init__(self, spec_states, plant_states, pairs=()):
        self.spec_states = tuple(spec_states)
        self.plant_states = tuple(plant_states)
        self.pairs = frozenset(pairs)
        self._hash = None
        qs, xs = set(self.spec_states), set(self.plant_states)
        for q, x in self.pairs:
            if q not in qs or x not in xs:
                raise AutomatonError(f"pair ({q}, {x}) outside the state-pair universe")

    @classmethod
    def full(cls, r: Automaton, g: Automaton):
        return cls(r.states, g.states, ((q, x) for q in r.states for x in g.states))

    @classmethod
    def empty(cls, r: Automaton, g: Automaton):
        return cls(r.states, g.states)

    def like(self, pairs):
        return StatePairSet(self.spec_states, self.plant_states, pairs)

    def check_universe(self, r: Automaton, g: Automaton):
        if self.spec_states != r.states or self.plant_states != g.states:
            raise AutomatonError("state-pair universe does not match the automata")

    def spec_projection(self) -> frozenset:
        return frozenset(q for q, _ in self.pairs)

    def row(self, q) -> frozenset:
        return frozenset(x for p, x in self.pairs if p == q)

    def without_rows(self, rows):
        rows = set(rows)
        return self.like(p for p in self.pairs if p[0] not in rows)

    def _same_universe(self, other):
        if (self.spec_states, self.plant_states) != (other.spec_states, other.plant_states):
            raise AutomatonError("state-pair sets over different universes")

    def __and__(self, other):
        self._same_universe(other)
        return self.like(self.pairs & other.pairs)

    def __or__(self, other):
        self._same_universe(other)
        return self.like(self.pairs | other.pairs)

    def __sub__(self, other):
        self._same_universe(other)
        return self.like(self.pairs - other.pairs)

    def __le__(self, other):
        self._same_universe(other)
        return self.pairs <= other.pairs

    def __eq__(self, other):
        if not isinstance(other, StatePairSet):
            return NotImplemented
        return (self.spec_states, self.plant_states, self.pairs) == \
            (other.spec_states, other.plant_states, other.pairs)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.spec_states, self.plant_states, self.pairs))
        return self._hash

    def __contains__(self, pair):
        return tuple(pair) in self.pairs

    def __iter__(self):
        return iter(sorted(self.pairs))

    def __len__(self):
        return len(self.pairs)

    def __repr__(self):
        return f"StatePairSet({sorted(self.pairs)!r})"
