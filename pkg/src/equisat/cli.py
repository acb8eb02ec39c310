"""Command-line front end: compile, solve, gen."""

from __future__ import annotations

import argparse
import sys

from . import benchmarks
from .encode import write_dimacs
from .model import Constraint, Model
from .parser import ModelParseError, parse_model, print_model
from .pipeline import compile_model, solve_model


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def _write(path: str, text: str) -> None:
    if path == "-" or path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _load_model(path: str) -> Model:
    return parse_model(_read(path))


def cmd_compile(args) -> int:
    model = _load_model(args.model)
    trace = None
    if args.trace_ep:
        trace = lambda cid, c, eqs: print(
            "ep #%d %s: %d equations" % (cid, c.pretty(), len(eqs)), file=sys.stderr
        )
    result = compile_model(
        model,
        simplify_store=not args.no_simplify,
        node_budget=args.node_budget,
        trace=trace,
    )
    write_dimacs(result.cnf, result.varmap, args.output, args.map)
    if args.stats:
        print(result.stats_line(), file=sys.stderr)
    return 0


def cmd_solve(args) -> int:
    model = _load_model(args.model)
    report = solve_model(
        model,
        simplify_store=not args.no_simplify,
        solver_command=args.solver,
        count_to=args.count_to,
        node_budget=args.node_budget,
    )
    if args.stats:
        line = report.result.stats_line()
        print(
            "%s solver-calls %d" % (line, report.solver_calls), file=sys.stderr
        )
    if args.count_to is not None:
        print("c solutions %d (cutoff %d)" % (report.count, args.count_to))
    if report.kind == "sat":
        print("s SATISFIABLE")
        if report.assignment is not None:
            for name, value in report.decoded_ints().items():
                print("c %s = %d" % (name, value))
            for name, bits in report.decoded_vecs().items():
                print("c %s = %s" % (name, "".join("1" if b else "0" for b in bits)))
        return 10
    if report.kind == "unsat":
        print("s UNSATISFIABLE")
        return 20
    print("s UNKNOWN")
    return 0


def cmd_gen(args) -> int:
    if args.family == "qcp":
        grid = benchmarks.parse_qcp_text(_read(args.input))
        model = benchmarks.gen_qcp(grid)
    elif args.family == "nonogram":
        rows, cols = benchmarks.parse_nonogram_text(_read(args.input))
        model = benchmarks.gen_nonogram(rows, cols)
    elif args.family == "bibd":
        v, b, r, k, lam = args.params
        model = benchmarks.gen_bibd(v, b, r, k, lam, symmetry=args.symb)
    else:
        nt, nm = args.params
        model = benchmarks.gen_dna(nt, nm)
    _write(args.output, print_model(model))
    return 0


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="equisat",
        description="Compile finite-domain constraint models to CNF via "
        "Boolean equality propagation.",
    )
    sub = top.add_subparsers(dest="command", required=True)

    pc = sub.add_parser("compile", help="compile a model to DIMACS")
    pc.add_argument("model", help="model file, or - for stdin")
    pc.add_argument("-o", "--output", required=True, help="CNF file, or -")
    pc.add_argument("--map", help="bit-to-solver-variable map file")
    pc.add_argument("--stats", action="store_true")
    pc.add_argument("--no-simplify", action="store_true",
                    help="skip elimination and restriction")
    pc.add_argument("--trace-ep", action="store_true",
                    help="stream one line per fired propagator")
    pc.add_argument("--node-budget", type=int, default=1 << 22)
    pc.set_defaults(fn=cmd_compile)

    ps = sub.add_parser("solve", help="compile and solve a model")
    ps.add_argument("model", help="model file, or - for stdin")
    ps.add_argument("--solver", help="external DIMACS solver command")
    ps.add_argument("--count-to", type=int,
                    help="count solutions up to the cutoff")
    ps.add_argument("--stats", action="store_true")
    ps.add_argument("--no-simplify", action="store_true")
    ps.add_argument("--node-budget", type=int, default=1 << 22)
    ps.set_defaults(fn=cmd_solve)

    pg = sub.add_parser("gen", help="generate a benchmark model")
    gsub = pg.add_subparsers(dest="family", required=True)
    gq = gsub.add_parser("qcp")
    gq.add_argument("input", help="grid file, or - for stdin")
    gn = gsub.add_parser("nonogram")
    gn.add_argument("input", help="clue file, or - for stdin")
    gb = gsub.add_parser("bibd")
    gb.add_argument("params", type=int, nargs=5, metavar="N",
                    help="v b r k lambda")
    gb.add_argument("--symb", action="store_true", help="break symmetry")
    gd = gsub.add_parser("dna")
    gd.add_argument("params", type=int, nargs=2, metavar="N",
                    help="template count, map count")
    for g in (gq, gn, gb, gd):
        g.add_argument("-o", "--output", default="-", help="model file, or -")
        g.set_defaults(fn=cmd_gen)

    return top


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code else 0
    try:
        return args.fn(args)
    except ModelParseError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1
    except OSError as exc:
        print("io error: %s" % exc, file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
