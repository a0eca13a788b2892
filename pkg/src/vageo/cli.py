"""Command line front end.

Exit codes: 0 success or a true verdict, 1 a false verdict, 2 usage errors,
3 data errors (bad files, invalid groups, inconsistent results).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .counter import (
    ACCEPT, BUDGET_EXHAUSTED, MachineError, build_geodesic_machine, format_machine, load_decomposition,
    machine_to_dot, parse_machine, run_bounded, windowed_decomposition,
)
from .geodesic import build_ball, is_geodesic_oracle, is_geodesic_word
from .group import DATA_DIR, SpecError, evaluate_word, format_word, load_spec, parse_word, validate_spec, word_weight
from .growth import classify_growth, fit_rational_series, geodesic_counts, growth_rate_estimate
from .paths import build_gamma
from .shuffle import AlphabetYP, format_pattern, shuffle

OK, FALSE, USAGE, DATA = 0, 1, 2, 3


class DataError(Exception):
    pass


def _group(path: str):
    """A group file, or the name of a bundled one (``z``, ``z2``, ``dinf``, ``p4``)."""
    p = Path(path)
    if not p.exists() and (DATA_DIR / f"{path}.grp").exists():
        p = DATA_DIR / f"{path}.grp"
    try:
        return load_spec(p)
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc.strerror}") from None


def _word(spec, text: str):
    w = parse_word(text)
    for s in w:
        spec.generator(s)
    return w


def _write(path, text: str):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8", newline="\n")


def cmd_validate(args) -> int:
    rep = validate_spec(_group(args.group), args.bound)
    print(rep)
    return OK if rep.ok else DATA


def cmd_eval(args) -> int:
    spec = _group(args.group)
    w = _word(spec, args.word)
    print(f"element: {evaluate_word(spec, w)}")
    print(f"weight: {word_weight(spec, w)}")
    return OK


def cmd_shuffle(args) -> int:
    spec = _group(args.group)
    yp = AlphabetYP(spec)
    pw, trace = shuffle(yp, _word(spec, args.word))
    for u, tau, rest in trace.steps:
        print(f"({' '.join(map(str, u))} | {tau}) {format_word(rest)}")
    print(f"pattern: {format_pattern(pw.pattern.letters)}")
    print(f"v: {' '.join(map(str, pw.v))}")
    return OK


def cmd_geodesic(args) -> int:
    spec = _group(args.group)
    w = _word(spec, args.word)
    verdicts = {}
    if args.method in ("pattern", "both"):
        verdicts["pattern"] = is_geodesic_word(AlphabetYP(spec), w)
    if args.method in ("oracle", "both"):
        verdicts["oracle"] = is_geodesic_oracle(spec, build_ball(spec, word_weight(spec, w)), w)
    if len(set(verdicts.values())) > 1:
        raise DataError(f"methods disagree on {format_word(w)}: {verdicts}")
    verdict = next(iter(verdicts.values()))
    print("geodesic" if verdict else "not geodesic")
    return OK if verdict else FALSE


def cmd_growth(args) -> int:
    spec = _group(args.group)
    yp = AlphabetYP(spec)
    ball = build_ball(spec, args.max_weight) if args.method == "oracle" else None
    table = geodesic_counts(yp, ball, args.max_weight, args.method)
    if args.csv:
        _write(args.csv, table.to_csv())
    else:
        sys.stdout.write(table.to_csv())
    if args.summary:
        out = sys.stdout if args.csv else sys.stderr
        print(f"classification: {classify_growth(table)}", file=out)
        if len(table) >= 4:
            print(f"rate: {growth_rate_estimate(table)}", file=out)
        fit = fit_rational_series(table)
        print(f"recurrence: {fit if fit else 'none found'}", file=out)
    return OK


def cmd_gamma_export(args) -> int:
    spec = _group(args.group)
    g = build_gamma(AlphabetYP(spec), eager=False)
    try:
        g.build(args.max_vertices)
    except MemoryError as exc:
        raise DataError(str(exc)) from None
    _write(args.dot, g.to_dot())
    return OK


def cmd_machine_build(args) -> int:
    spec = _group(args.group)
    yp = AlphabetYP(spec)
    kind, _, arg = args.decomposition.partition(":")
    if kind == "windowed" and arg.isdigit():
        dec = windowed_decomposition(yp, int(arg))
    elif kind == "file" and arg:
        try:
            dec = load_decomposition(arg, yp)
        except OSError as exc:
            raise DataError(f"cannot read {arg}: {exc.strerror}") from None
    else:
        print(f"error: --decomposition must be windowed:W or file:PATH, got {args.decomposition!r}", file=sys.stderr)
        return USAGE
    m = build_geodesic_machine(yp, dec).materialize(args.max_states)
    _write(args.out, format_machine(m))
    if args.dot:
        _write(args.dot, machine_to_dot(m))
    print(f"{len(m.states)} states, {m.k} counters", file=sys.stderr)
    return OK


def cmd_machine_run(args) -> int:
    try:
        m = parse_machine(Path(args.machine).read_text(encoding="utf-8"))
    except OSError as exc:
        raise DataError(f"cannot read {args.machine}: {exc.strerror}") from None
    w = parse_word(args.word)
    unknown = [s for s in w if s not in m.alphabet]
    if unknown:
        raise DataError(f"letters not in the machine alphabet: {' '.join(unknown)}")
    if not m.in_window(w):
        print(f"reject: outside certified window (weight bound {m.window})")
        return FALSE
    res = run_bounded(m, w, args.budget)
    if res == BUDGET_EXHAUSTED:
        print(f"undecided: search budget of {args.budget} configurations exhausted", file=sys.stderr)
        return DATA
    print(res)
    return OK if res == ACCEPT else FALSE


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="vageo", description="Geodesics and growth in virtually abelian groups.")
    sub = p.add_subparsers(dest="command", required=True)

    def with_group(sp):
        sp.add_argument("--group", required=True, help="group file, or a bundled name: z, z2, dinf, p4")
        return sp

    sp = with_group(sub.add_parser("validate", help="check the invariants of a group file"))
    sp.add_argument("--bound", type=int, default=None, help="weight bound for the generation check")
    sp.set_defaults(func=cmd_validate)

    sp = with_group(sub.add_parser("eval", help="normal form and weight of a word"))
    sp.add_argument("--word", required=True)
    sp.set_defaults(func=cmd_eval)

    sp = with_group(sub.add_parser("shuffle", help="trace of the shuffle of a word"))
    sp.add_argument("--word", required=True)
    sp.set_defaults(func=cmd_shuffle)

    sp = with_group(sub.add_parser("geodesic", help="decide whether a word is geodesic"))
    sp.add_argument("--word", required=True)
    sp.add_argument("--method", choices=["oracle", "pattern", "both"], default="pattern")
    sp.set_defaults(func=cmd_geodesic)

    sp = with_group(sub.add_parser("growth", help="geodesic growth table"))
    sp.add_argument("--max-weight", type=int, required=True)
    sp.add_argument("--csv", default=None, help="write the table here instead of stdout")
    sp.add_argument("--method", choices=["pattern", "oracle"], default="pattern")
    sp.add_argument("--summary", action="store_true", help="also report classification, rate and recurrence")
    sp.set_defaults(func=cmd_growth)

    gamma = sub.add_parser("gamma", help="the shuffle graph").add_subparsers(dest="action", required=True)
    sp = with_group(gamma.add_parser("export", help="write the reachable graph as DOT"))
    sp.add_argument("--dot", default="-")
    sp.add_argument("--max-vertices", type=int, default=200_000)
    sp.set_defaults(func=cmd_gamma_export)

    machine = sub.add_parser("machine", help="geodesic counter machines").add_subparsers(dest="action", required=True)
    sp = with_group(machine.add_parser("build", help="build and write a machine"))
    sp.add_argument("--decomposition", required=True, help="windowed:W or file:PATH")
    sp.add_argument("--out", default="-")
    sp.add_argument("--dot", default=None)
    sp.add_argument("--max-states", type=int, default=100_000)
    sp.set_defaults(func=cmd_machine_build)
    sp = machine.add_parser("run", help="run a machine file on a word")
    sp.add_argument("--machine", required=True)
    sp.add_argument("--word", required=True)
    sp.add_argument("--budget", type=int, default=100_000)
    sp.set_defaults(func=cmd_machine_run)
    return p


def cli_main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    try:
        return args.func(args)
    except (DataError, SpecError, MachineError, KeyError, ValueError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return DATA


def main():
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
