"""The ``.aut`` text format and Graphviz export.

One directive per line, ``#`` starts a comment::

    automaton G
    event a c o          # controllable, observable
    event g uc uo        # uncontrollable, unobservable
    state x0
    state x1 marked
    initial x0
    trans x0 a x1
"""
from .automata import Automaton, Event, EventAlphabet
from .products import VIOLATION, ControllableProduct, ObservableProduct


class AutParseError(ValueError):
    pass


def parse_aut(text: str) -> Automaton:
    name = "A"
    events, states, marked, trans = {}, [], set(), []
    initial = None
    seen_states = set()

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        word, *args = line.split()

        def fail(msg):
            raise AutParseError(f"{msg} (line {lineno})")

        if word == "automaton":
            if len(args) != 1:
                fail("usage: automaton <name>")
            name = args[0]
        elif word == "event":
            if len(args) != 3 or args[1] not in ("c", "uc") or args[2] not in ("o", "uo"):
                fail("usage: event <name> <c|uc> <o|uo>")
            if args[0] in events:
                fail(f"duplicate event {args[0]}")
            events[args[0]] = Event(args[0], args[1] == "c", args[2] == "o")
        elif word == "state":
            if not args or len(args) > 2 or (len(args) == 2 and args[1] != "marked"):
                fail("usage: state <name> [marked]")
            if args[0] in seen_states:
                fail(f"duplicate state {args[0]}")
            seen_states.add(args[0])
            states.append(args[0])
            if len(args) == 2:
                marked.add(args[0])
        elif word == "initial":
            if len(args) != 1:
                fail("usage: initial <name>")
            if initial is not None:
                fail("duplicate initial state")
            if args[0] not in seen_states:
                fail(f"unknown state {args[0]}")
            initial = args[0]
        elif word == "trans":
            if len(args) != 3:
                fail("usage: trans <src> <event> <dst>")
            src, ev, dst = args
            for s in (src, dst):
                if s not in seen_states:
                    fail(f"unknown state {s}")
            if ev not in events:
                fail(f"unknown event {ev}")
            trans.append((src, ev, dst))
        else:
            fail(f"unknown directive {word}")

    if initial is None:
        if states:
            raise AutParseError("missing initial state")
        return Automaton.empty(EventAlphabet(events.values()), name)
    return Automaton(EventAlphabet(events.values()), tuple(states), initial,
                     frozenset(marked), frozenset(trans), name)


def read_aut(path) -> Automaton:
    with open(path, encoding="utf-8") as fh:
        return parse_aut(fh.read())


def write_aut(a: Automaton) -> str:
    lines = [f"automaton {a.name}"]
    for ev in a.alphabet:
        lines.append("event {} {} {}".format(ev.name, *ev.flags))
    for s in a.states:
        lines.append(f"state {s} marked" if s in a.marked else f"state {s}")
    if a.initial is not None:
        lines.append(f"initial {a.initial}")
    for src, ev, dst in a.sorted_transitions():
        lines.append(f"trans {src} {ev} {dst}")
    return "\n".join(lines) + "\n"


def _q(s):
    return '"{}"'.format(str(s).replace('"', r'\"'))


def _pair(p):
    return "({}, {})".format(*p)


def export_dot(obj) -> str:
    """Render an automaton or a product as a Graphviz digraph."""
    if isinstance(obj, Automaton):
        nodes = [(s, s in obj.marked, False) for s in obj.states]
        initial = obj.initial
        edges = [(src, ev, dst) for src, ev, dst in obj.sorted_transitions()]
        title = obj.name
    elif isinstance(obj, (ControllableProduct, ObservableProduct)):
        names = sorted(obj.pairs)
        has_sink = any(dst == VIOLATION for _, _, dst in obj.edges)
        nodes = [(_pair(p), p in obj.marked, False) for p in names]
        if has_sink:
            nodes.append(("(qv, xv)", False, True))
        initial = _pair(obj.initial) if obj.initial else None
        edges = []
        for src, label, dst in obj.edges:
            if isinstance(obj, ObservableProduct):
                label = "({},{})".format(*(e if e is not None else "~" for e in label))
            target = "(qv, xv)" if dst == VIOLATION else _pair(dst)
            edges.append((_pair(src), label, target))
        title = "product"
    else:
        raise TypeError(f"cannot export {type(obj).__name__}")

    out = [f"digraph {_q(title)} {{", "  rankdir=LR;"]
    if initial is not None:
        out.append('  "__start" [shape=point];')
    for name, is_marked, is_sink in nodes:
        attrs = ["shape=doublecircle" if is_marked else "shape=circle"]
        if is_sink:
            attrs.append("style=filled fillcolor=gray")
        out.append(f"  {_q(name)} [{' '.join(attrs)}];")
    if initial is not None:
        out.append(f'  "__start" -> {_q(initial)};')
    for src, label, dst in edges:
        out.append(f"  {_q(src)} -> {_q(dst)} [label={_q(label)}];")
    out.append("}")
    return "\n".join(out) + "\n"
