"""Command-line interface.

All randomness enters through --seed (default 0); output for a fixed
(command, inputs, seed) is byte-identical across runs.  Bench commands
write wall-clock numbers only to their CSV file; stdout carries the
deterministic summary.

Exit status: 0 success, 1 domain error (one `E_CODE: message` line on
stderr), 2 usage error.
"""

import argparse
import sys
import time

from . import _coeffs
from . import int_factor as int_factor_mod
from .ddf_engine import (
    RngStream,
    ddf_naive_oracle,
    factor_full,
    recursive_split,
)
from .divisor_sets import (
    load_pair_spec,
    save_pair_spec,
    search_ap,
    trivial_pair,
    verify_divisor_property,
)
from .errors import ContractViolationError, ResourceBudgetError
from .ffield import FieldPoly, PrimeField, format_poly_text, parse_poly_text
from .int_factor import factor_integer, pollard_strassen_oracle
from .numutil import factor_counter

CSV_HEADER = "name,param,seed,wall_ns,ops"


def _read_poly(path):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_poly_text(fh.readline())


def _load_pair(path, n_needed=None):
    pair = load_pair_spec(path)
    report = verify_divisor_property(pair)
    if not report.holds:
        raise ValueError(
            f"divisor-set spec fails verification; uncovered: {list(report.uncovered)[:8]}"
        )
    if n_needed is not None and pair.n < n_needed:
        raise ValueError(f"pair covers n={pair.n}, need at least {n_needed}")
    return pair


def _cmd_ddf(args):
    f = _read_poly(args.polyfile)
    if f.degree < 1:
        raise ValueError("input polynomial must have degree >= 1")
    f = f.monic()
    if args.naive:
        result = ddf_naive_oracle(f)
    else:
        pair = _load_pair(args.pair, f.degree) if args.pair else trivial_pair(f.degree)
        result = recursive_split(f, pair, RngStream(args.seed))
    for deg, poly in result.factors.items():
        print(f"{deg}: {','.join(str(c) for c in poly.coeffs)}")
    return 0


def _cmd_factor(args):
    f = _read_poly(args.polyfile)
    if f.degree < 1:
        raise ValueError("input polynomial must have degree >= 1")
    for poly, mult in factor_full(f, RngStream(args.seed)):
        print(f"({','.join(str(c) for c in poly.coeffs)})^{mult}")
    return 0


def _cmd_factor_int(args):
    n = int(args.n)
    if args.baseline == "pollard-strassen":
        result = pollard_strassen_oracle(n).factors
    elif args.baseline == "trial":
        result = factor_counter(n) if n > 1 else {}
    else:
        pair = _load_pair(args.pair) if args.pair else None
        result = factor_integer(n, pair).factors
    print(" ".join(f"{p}^{e}" for p, e in sorted(result.items())))
    return 0


def _cmd_verify(args):
    pair = load_pair_spec(args.specfile)
    report = verify_divisor_property(pair)
    if report.holds:
        print(f"divisor property holds for n={pair.n} "
              f"(|S|={len(pair.s_enum)}, |T|={len(pair.t_enum)})")
        return 0
    shown = " ".join(str(i) for i in report.uncovered[:16])
    more = "" if len(report.uncovered) <= 16 else f" (+{len(report.uncovered) - 16} more)"
    print(f"divisor property FAILS for n={pair.n}; uncovered: {shown}{more}")
    print("E_VERIFY: divisor property does not hold", file=sys.stderr)
    return 1


def _cmd_make_trivial(args):
    pair = trivial_pair(args.n)
    save_pair_spec(pair, args.out, include_factorizations=args.embed_factorizations)
    print(f"wrote trivial pair for n={args.n} to {args.out}")
    return 0


def _cmd_search_ap(args):
    found = search_ap(args.n, args.max_b, args.max_c, args.max_len, args.primes_only)
    for ap in found:
        print(f"base={ap.base} step={ap.step} length={ap.length}")
    print(f"# {len(found)} progressions")
    return 0


def _rand_squarefree(field, degree, rng):
    from .ffield import poly_gcd_monic

    while True:
        coeffs = [rng.randbelow(field.q) for _ in range(degree)] + [1]
        f = FieldPoly(field, coeffs)
        if f.degree != degree:
            continue
        d = f.derivative()
        if not d.is_zero() and poly_gcd_monic(f, d).degree == 0:
            return f


def _cmd_bench_ddf(args):
    field = PrimeField(args.q)
    degrees = [int(x) for x in args.degrees.split(",") if x]
    rows = []
    for degree in degrees:
        pair = _load_pair(args.pair, degree) if args.pair else trivial_pair(degree)
        f = _rand_squarefree(field, degree, RngStream(args.seed).fork(degree))
        for name, runner in (
            ("recursive_split", lambda: recursive_split(f, pair, RngStream(args.seed))),
            ("ddf_naive_oracle", lambda: ddf_naive_oracle(f)),
        ):
            _coeffs.reset_counts()
            t0 = time.perf_counter_ns()
            result = runner()
            wall = time.perf_counter_ns() - t0
            ops = sum(_coeffs.counts_snapshot().values())
            rows.append((name, degree, args.seed, wall, ops))
            del result
    _emit_bench(rows, args.csv)
    return 0


def _cmd_bench_int(args):
    bit_sizes = [int(x) for x in args.bits.split(",") if x]
    rows = []
    for bits in bit_sizes:
        rng = RngStream(args.seed).fork(bits)
        n = (1 << (bits - 1)) + rng.randbelow(max(1 << (bits - 1), 1))
        for name, runner in (
            ("factor_integer", lambda: factor_integer(n)),
            ("pollard_strassen", lambda: pollard_strassen_oracle(n)),
        ):
            int_factor_mod.reset_counts()
            t0 = time.perf_counter_ns()
            result = runner()
            wall = time.perf_counter_ns() - t0
            ops = sum(int_factor_mod.COUNTS.values())
            rows.append((name, bits, args.seed, wall, ops))
            del result
    _emit_bench(rows, args.csv)
    return 0


def _emit_bench(rows, csv_path):
    with open(csv_path, "w", encoding="utf-8") as fh:
        fh.write(CSV_HEADER + "\n")
        for name, param, seed, wall, ops in rows:
            fh.write(f"{name},{param},{seed},{wall},{ops}\n")
    for name, param, seed, _, ops in rows:
        print(f"{name},{param},{ops}")


def build_parser():
    top = argparse.ArgumentParser(
        prog="ddfkit",
        description="Distinct-degree polynomial factorization over prime fields, "
        "divisor-set tooling, and deterministic integer factoring.",
    )
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ddf", help="distinct-degree factorization of a polynomial file")
    p.add_argument("polyfile")
    p.add_argument("--pair", help="divisor-set JSON spec (default: trivial pair)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--naive", action="store_true", help="use the sequential baseline")
    p.set_defaults(func=_cmd_ddf)

    p = sub.add_parser("factor", help="full irreducible factorization of a polynomial")
    p.add_argument("polyfile")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_factor)

    p = sub.add_parser("factor-int", help="prime factorization of an integer")
    p.add_argument("n")
    p.add_argument("--pair", help="divisor-set JSON spec (default: auto trivial pair)")
    p.add_argument("--baseline", choices=["pollard-strassen", "trial"])
    p.set_defaults(func=_cmd_factor_int)

    p = sub.add_parser("verify-divisor-set", help="check the n-divisor property")
    p.add_argument("specfile")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("make-trivial-pair", help="write the trivial pair spec for n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--embed-factorizations", action="store_true")
    p.set_defaults(func=_cmd_make_trivial)

    p = sub.add_parser("search-ap", help="exhaustive divisor-covering progression search")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--max-b", type=int, required=True)
    p.add_argument("--max-c", type=int, required=True)
    p.add_argument("--max-len", type=int, required=True)
    p.add_argument("--primes-only", action="store_true")
    p.set_defaults(func=_cmd_search_ap)

    p = sub.add_parser("bench-ddf", help="recursive splitting vs naive DDF timings")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--degrees", required=True, help="comma-separated degree list")
    p.add_argument("--pair")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--csv", required=True)
    p.set_defaults(func=_cmd_bench_ddf)

    p = sub.add_parser("bench-int", help="framework vs Pollard-Strassen timings")
    p.add_argument("--bits", required=True, help="comma-separated bit sizes")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--csv", required=True)
    p.set_defaults(func=_cmd_bench_int)
    return top


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except OSError as exc:
        print(f"E_IO: {exc}", file=sys.stderr)
        return 1
    except ResourceBudgetError as exc:
        print(f"E_BUDGET: {exc}", file=sys.stderr)
        return 1
    except ContractViolationError as exc:
        print(f"E_INTERNAL: {exc}", file=sys.stderr)
        return 1
    except (ValueError, KeyError, IndexError, ZeroDivisionError) as exc:
        print(f"E_DOMAIN: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
