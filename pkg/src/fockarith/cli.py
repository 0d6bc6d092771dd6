"""Command-line driver over the operator machinery.

Every arithmetic subcommand routes through the operators, never the
oracle, so ordinary use exercises the constructions end to end; --oracle
prints the independently computed value next to the operator result.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from . import integers, naturals, physical_map, rationals, verification
from .fock_core import (
    BOSON,
    FERMION,
    FockArithError,
    StateVector,
    dump_state,
    parse_state,
)
from .numerals import DomainError, INT, NAT, RAT, Numeral, parse_numeral
from .numerals import format_raw_digits
from .operator_algebra import Power, ResourceTrace, adjoint, apply


class UsageError(FockArithError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _build_parser() -> _Parser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--base", type=int, default=10, metavar="K",
                        help="positional base, k >= 2 (default 10)")
    common.add_argument("--stats", choices=("b", "f"), default="b",
                        help="particle statistics: b(oson) or f(ermion)")
    common.add_argument("--flavor", choices=(NAT, INT, RAT), default=NAT)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--max-len", type=int, default=3, dest="max_len")
    common.add_argument("--trace", action="store_true",
                        help="print primitive events and stage snapshots")
    common.add_argument("--oracle", action="store_true",
                        help="also print the independent oracle value")
    common.add_argument("--out", type=str, default=None,
                        help="write output to this path instead of stdout")

    parser = _Parser(prog="fockarith",
                     description="Arithmetic on Fock-space number states")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("encode", parents=[common],
                       help="numeral text -> basis-word dump")
    p.add_argument("numeral")
    p = sub.add_parser("decode", parents=[common],
                       help="basis-word dump (stdin or file) -> numeral")
    p.add_argument("path", nargs="?", default=None)
    p = sub.add_parser("succ", parents=[common], help="apply the site-j successor")
    p.add_argument("--j", type=int, default=1)
    p.add_argument("--iterations", type=int, default=1)
    p.add_argument("numeral")
    p = sub.add_parser("add", parents=[common], help="print t + s")
    p.add_argument("s")
    p.add_argument("t")
    p = sub.add_parser("sub", parents=[common], help="print t - s")
    p.add_argument("s")
    p.add_argument("t")
    p = sub.add_parser("mul", parents=[common],
                       help="print x + s*t (x defaults to zero)")
    p.add_argument("s")
    p.add_argument("t")
    p.add_argument("x", nargs="?", default=None)
    sub.add_parser("verify", parents=[common],
                   help="run the axiom suite for the chosen flavor")
    sub.add_parser("resources", parents=[common],
                   help="measure primitive counts and fit scaling")
    return parser


def _stats_name(flag: str) -> str:
    return FERMION if flag == "f" else BOSON


def _emit(args, text: str) -> None:
    if args.out:
        with open(args.out, "a") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _zero(flavor: str, k: int) -> Numeral:
    from .numerals import numeral_from_fraction, numeral_from_int
    if flavor == RAT:
        return numeral_from_fraction(Fraction(0), k, RAT)
    return numeral_from_int(0, k, flavor)


def _run_succ(args, ops) -> int:
    k, stats = args.base, _stats_name(args.stats)
    n = parse_numeral(args.numeral, k, args.flavor)
    state = StateVector.from_word(ops.encode(n))
    trace = ResourceTrace(log_events=True) if args.trace else None
    for _ in range(args.iterations):
        if args.trace and args.flavor == NAT:
            padded = apply(naturals.build_pad(args.j, k), state, stats, trace)
            word, _ = padded.single_word()
            _emit(args, f"stage=pad word={format_raw_digits(naturals.raw_digits(word))}")
            state = apply(naturals.build_successor_natural(args.j, k), state, stats)
            word, _ = state.single_word()
            _emit(args, f"stage=succ word={format_raw_digits(naturals.raw_digits(word))}")
        else:
            state = apply(ops.successor(args.j, k), state, stats, trace)
    if state.is_zero():
        raise DomainError("successor annihilated the state")
    word, amp = state.single_word()
    if trace is not None and trace.events:
        for line in trace.events:
            _emit(args, line)
    _emit(args, ops.decode(word, k).text() if args.flavor != NAT
          else ops.decode(word, k).text())
    if args.oracle:
        from .verification import OracleValue, numeral_to_oracle, oracle, oracle_to_numeral
        step = OracleValue(k, k ** (args.j - 1), 0) if args.j > 0 else \
            OracleValue(k, 1, -args.j)
        val = numeral_to_oracle(n)
        for _ in range(args.iterations):
            val = oracle("add", val, step)
        _emit(args, f"oracle={oracle_to_numeral(val, args.flavor).text()}")
    return 0


def _run_pairwise(args, ops, subtract: bool) -> int:
    k, stats = args.base, _stats_name(args.stats)
    s = parse_numeral(args.s, k, args.flavor)
    t = parse_numeral(args.t, k, args.flavor)
    pair = StateVector.from_word(ops.pair_word(s, t))
    trace = ResourceTrace(log_events=True) if args.trace else None
    result = (ops.subtract if subtract else ops.add)(pair, k, stats, trace)
    if result.is_zero():
        raise DomainError(f"{'difference' if subtract else 'sum'} is undefined "
                          f"for these operands")
    word, amp = result.single_word()
    if trace is not None and trace.events:
        for line in trace.events:
            _emit(args, line)
    _emit(args, ops.decode(word, k, 2).text())
    if args.oracle:
        from .verification import numeral_to_oracle, oracle, oracle_to_numeral
        op = "sub" if subtract else "add"
        a, b = (numeral_to_oracle(s), numeral_to_oracle(t))
        val = oracle("add", b, a) if op == "add" else oracle("sub", b, a)
        _emit(args, f"oracle={oracle_to_numeral(val, args.flavor).text()}")
    return 0


def _run_mul(args, ops) -> int:
    k, stats = args.base, _stats_name(args.stats)
    s = parse_numeral(args.s, k, args.flavor)
    t = parse_numeral(args.t, k, args.flavor)
    x = parse_numeral(args.x, k, args.flavor) if args.x else _zero(args.flavor, k)
    triple = StateVector.from_word(ops.triple_word(s, t, x))
    trace = ResourceTrace(log_events=True) if args.trace else None
    result = ops.multiply(triple, k, stats, trace)
    word, amp = result.single_word()
    if trace is not None and trace.events:
        for line in trace.events:
            _emit(args, line)
    _emit(args, ops.decode(word, k, 3).text())
    if args.oracle:
        from .verification import numeral_to_oracle, oracle, oracle_to_numeral
        val = oracle("add", numeral_to_oracle(x),
                     oracle("mul", numeral_to_oracle(s), numeral_to_oracle(t)))
        _emit(args, f"oracle={oracle_to_numeral(val, args.flavor).text()}")
    return 0


def _run_verify(args) -> int:
    cfg = verification.SuiteConfig(k=args.base, stats=_stats_name(args.stats),
                                   flavor=args.flavor, max_len=args.max_len,
                                   seed=args.seed)
    report = verification.run_axiom_suite(cfg)
    for line in report.lines():
        _emit(args, line)
    return 0 if report.all_passed else 2


def _run_resources(args) -> int:
    k = args.base
    top = max(args.max_len, 24)
    lengths = sorted({4, 8, 12, 16, top // 2, 3 * top // 4, top})
    if len(lengths) < 6:
        lengths = sorted(set(lengths) | {6, 10, 14})
    master = ResourceTrace()
    stats = _stats_name(args.stats)
    fits = []
    for name, points in (
        ("successor", physical_map.measure_successor(k, lengths, stats=stats, master=master)),
        ("add", physical_map.measure_addition(k, lengths, stats=stats, master=master)),
        ("multiply", physical_map.measure_multiplication(k, lengths, stats=stats, master=master)),
    ):
        fits.append(physical_map.fit_scaling(points, name))
    for line in master.report_lines():
        _emit(args, line)
    for fit in fits:
        _emit(args, f"op={fit.op_name} slope={fit.slope:.3f} verdict={fit.verdict}")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.base < 2:
            raise UsageError(f"base must be >= 2, got {args.base}")
        ops = verification.flavor_ops(args.flavor)
        if args.command == "encode":
            n = parse_numeral(args.numeral, args.base, args.flavor)
            _emit(args, dump_state(StateVector.from_word(ops.encode(n))).rstrip("\n"))
            return 0
        if args.command == "decode":
            text = (open(args.path).read() if args.path else sys.stdin.read())
            state = parse_state(text)
            word, amp = state.single_word()
            _emit(args, ops.decode(word, args.base).text())
            return 0
        if args.command == "succ":
            return _run_succ(args, ops)
        if args.command == "add":
            return _run_pairwise(args, ops, subtract=False)
        if args.command == "sub":
            return _run_pairwise(args, ops, subtract=True)
        if args.command == "mul":
            return _run_mul(args, ops)
        if args.command == "verify":
            return _run_verify(args)
        if args.command == "resources":
            return _run_resources(args)
        raise UsageError(f"unknown command {args.command!r}")
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return 1
    except FockArithError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
