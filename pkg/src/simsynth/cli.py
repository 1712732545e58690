"""Command-line front end.

Exit codes: 0 success, 1 input or usage error, 2 clean negative verdict
(no result exists, candidate rejected), 3 specification not calculable.
"""
import argparse
import sys

from .autfile import AutParseError, export_dot, read_aut, write_aut
from .automata import AutomatonError, StatePairSet, accessible, ensure_same_alphabet, ensure_valid
from .operators import (is_calculable_controllable, is_calculable_strong_observable,
                        q_d, q_d_prime)
from .oracle import MAX_PAIRS, OracleGuardExceeded, brute_force_supremal
from .simulation import greatest_simulation
from .synthesis import (CONTROLLABLE_STRONG_OBSERVABLE, NOT_CALCULABLE, RESULT,
                        STRONG_OBSERVABLE, algorithm1, algorithm2, verify_result)

EXIT_OK, EXIT_INPUT, EXIT_NEGATIVE, EXIT_NOT_CALCULABLE = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(message)


class _UsageError(Exception):
    pass


def _parser():
    p = _Parser(prog="simsynth", description="Simulation-based supervisor synthesis.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def pair(sp):
        sp.add_argument("--plant", required=True)
        sp.add_argument("--spec", required=True)

    pair(sub.add_parser("check", help="report simulation, calculability and condition verdicts"))
    syn = sub.add_parser("synthesize", help="compute the supremal subautomaton")
    pair(syn)
    syn.add_argument("--mode", choices=[STRONG_OBSERVABLE, CONTROLLABLE_STRONG_OBSERVABLE],
                     default=CONTROLLABLE_STRONG_OBSERVABLE)
    syn.add_argument("--out")
    syn.add_argument("--trace")
    syn.add_argument("--dot")
    ver = sub.add_parser("verify", help="check a candidate subautomaton")
    pair(ver)
    ver.add_argument("--candidate", required=True)
    ver.add_argument("--bound", type=int)
    ver.add_argument("--mode", choices=[STRONG_OBSERVABLE, CONTROLLABLE_STRONG_OBSERVABLE],
                     default=CONTROLLABLE_STRONG_OBSERVABLE)
    orc = sub.add_parser("oracle", help="brute-force supremal pair set (small inputs only)")
    pair(orc)
    orc.add_argument("--mode", choices=[STRONG_OBSERVABLE, CONTROLLABLE_STRONG_OBSERVABLE],
                     default=CONTROLLABLE_STRONG_OBSERVABLE)
    orc.add_argument("--max-pairs", type=int, default=MAX_PAIRS,
                     help="enumeration guard on |Q|*|X| (default %(default)s)")
    return p


def _load(path):
    try:
        a = read_aut(path)
    except OSError as e:
        raise AutParseError(f"{path}: {e.strerror}") from None
    except AutParseError as e:
        raise AutParseError(f"{path}: {e}") from None
    return a


def _load_pair(args):
    g, r = _load(args.plant), _load(args.spec)
    ensure_valid(r, g)
    ensure_same_alphabet(r, g)
    return r, g


def _yes(flag):
    return "yes" if flag else "no"


def _cmd_check(args, out):
    r, g = _load_pair(args)
    sim = greatest_simulation(r, g) if not r.is_empty else None
    out.write(f"simulated_by_plant: {_yes(sim is not None)}\n")
    for name, fn in (("calculable_controllable", is_calculable_controllable),
                     ("calculable_strong_observable", is_calculable_strong_observable)):
        verdict = fn(r, g)
        out.write(f"{name}: {_yes(verdict.ok)}\n")
        if not verdict.ok:
            q, s, s2, ev = verdict.witness
            out.write(f"  witness: state {q}, s='{' '.join(s)}', s'='{' '.join(s2)}', event {ev}\n")
    spec = accessible(r)
    full = StatePairSet.full(spec, g)
    for name, fs in (("controllable_condition", q_d(spec, g, full)),
                     ("strong_observable_condition", q_d_prime(spec, g, full))):
        out.write(f"{name}: {_yes(not fs.states)}\n")
        for w in fs.witnesses:
            out.write(f"  {w.describe()}\n")
    return EXIT_OK


def _write(path, text):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _cmd_synthesize(args, out):
    r, g = _load_pair(args)
    algo = algorithm2 if args.mode == CONTROLLABLE_STRONG_OBSERVABLE else algorithm1
    trace = algo(r, g)
    # render everything first so a failure cannot leave partial files behind
    files = {}
    if args.trace:
        files[args.trace] = "\n".join(trace.lines()) + "\n"
    if trace.outcome == RESULT:
        result = trace.result
        if args.out:
            files[args.out] = write_aut(result)
        if args.dot:
            files[args.dot] = export_dot(result)
    for path, text in files.items():
        _write(path, text)
    for line in trace.lines():
        out.write(line + "\n")
    if trace.outcome == RESULT:
        return EXIT_OK
    return EXIT_NOT_CALCULABLE if trace.outcome == NOT_CALCULABLE else EXIT_NEGATIVE


def _cmd_verify(args, out):
    r, g = _load_pair(args)
    cand = _load(args.candidate)
    ensure_valid(cand)
    ensure_same_alphabet(r, cand)
    extra = set(cand.states) - set(r.states)
    if extra:
        raise AutomatonError(f"candidate states not in spec: {', '.join(sorted(extra))}")
    report = verify_result(r, g, cand, bound=args.bound, mode=args.mode)
    for line in report.lines():
        out.write(line + "\n")
    return EXIT_OK if report.ok else EXIT_NEGATIVE


def _cmd_oracle(args, out):
    r, g = _load_pair(args)
    res = brute_force_supremal(r, g, args.mode, max_pairs=args.max_pairs)
    fmt = lambda z: " ".join(f"({q},{x})" for q, x in z)
    out.write(f"valid_sets: {res.valid_count}\n")
    if res.union is not None:
        out.write(f"union: {fmt(res.union)}\n")
        out.write(f"union_closed: {_yes(res.union_closed)}\n")
    if res.pairs is None:
        out.write("outcome: nonexistent\n" if res.valid_count == 0 else
                  "outcome: no largest valid subautomaton\n")
        return EXIT_NEGATIVE
    out.write(f"result_states: {','.join(res.states)}\n")
    out.write(f"pairs: {fmt(res.pairs)}\n")
    out.write("outcome: result\n")
    return EXIT_OK


_COMMANDS = {"check": _cmd_check, "synthesize": _cmd_synthesize,
             "verify": _cmd_verify, "oracle": _cmd_oracle}


def run_cli(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = _parser().parse_args(argv)
        return _COMMANDS[args.command](args, out)
    except _UsageError as e:
        err.write(f"error: {e}\n")
    except (AutParseError, AutomatonError, OracleGuardExceeded) as e:
        err.write(f"error: {e}\n")
    except OSError as e:
        err.write(f"error: {e}\n")
    return EXIT_INPUT


def main():
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
