"""Command-line front end: ``cylroman <command> [options]``."""
from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from pathlib import Path

from . import solver
from .cache import DiskCache
from .errors import CapacityError, FormatError
from .oracle import CylinderGraph, border_loss_dp, brute_force_gamma_R, diagonal_pattern, validate_rdf
from .transfer import DEFAULT_MEMORY_BUDGET, build_transfer_matrix, write_word_table
from .tropical import INF, MemorySink, PowerStats, min_diagonal, power_sequence, set_default_threads, write_matrix
from .words import BORDER, STANDARD, VARIANTS, generate_words

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_CAPACITY = 3
EXIT_IO = 4
EXIT_NOT_FOUND = 5

log = logging.getLogger("cylroman")


class Report:
    """Collects key/value output and renders it as text or JSON."""

    def __init__(self, command: str):
        self.fields = {"command": command}
        self.timing = {}
        self.lines = []

    def emit(self, fmt: str, out=None) -> None:
        out = out if out is not None else sys.stdout
        if fmt == "machine":
            doc = dict(self.fields)
            if self.timing:
                doc["timing"] = self.timing
            out.write(json.dumps(_plain(doc), sort_keys=True, allow_nan=False) + "\n")
        else:
            for line in self.lines:
                out.write(line + "\n")
            if self.timing:
                parts = ", ".join(f"{k}={v}" for k, v in self.timing.items())
                out.write(f"timing: {parts}\n")


def _plain(obj):
    # JSON has no infinity; tropical infinity is written as the string "inf"
    if isinstance(obj, dict):
        return {k: _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, float) and obj == INF:
        return "inf"
    return obj


def _sink_for(args, base, m, variant):
    if args.cache_dir:
        return DiskCache(Path(args.cache_dir), base, m, variant)
    return MemorySink()


def _build(args, m, variant):
    t0 = time.perf_counter()
    table, a = build_transfer_matrix(m, variant, args.memory_budget)
    return table, a, time.perf_counter() - t0


def cmd_words(args, parser) -> int:
    if args.variant == STANDARD and args.m is None:
        parser.error("--m is required")
    if args.variant == STANDARD and args.m < 2:
        parser.error("--m must be >= 2")
    table = generate_words(args.m if args.variant == STANDARD else None, args.variant)
    rep = Report("words")
    rep.fields.update(m=table.m, variant=table.variant, count=len(table))
    if args.list:
        rep.fields["words"] = list(table.words)
    if args.out:
        write_word_table(table, args.out)
    rep.lines.append(f"correct words of length {table.m} ({table.variant}): {len(table)}")
    if args.list:
        rep.lines.extend(table.words)
    rep.emit(args.format)
    return EXIT_OK


def cmd_matrix(args, parser) -> int:
    m = _require_m(args, parser)
    table, a, build_s = _build(args, m, args.variant)
    rep = Report("matrix")
    rep.fields.update(m=table.m, variant=args.variant, dim=a.dim, arcs=a.dim * a.dim - a.infinity_count())
    rep.lines.append(f"A(G) for m={table.m} ({args.variant}): {a.dim} x {a.dim}, {rep.fields['arcs']} arcs")
    if args.out:
        out = Path(args.out)
        t0 = time.perf_counter()
        write_matrix(a, out)
        words_path = out.with_suffix(".words.txt")
        write_word_table(table, words_path)
        rep.timing["write_seconds"] = round(time.perf_counter() - t0, 6)
        rep.fields.update(out=str(out), words_file=str(words_path))
        rep.lines.append(f"written to {out} (word index in {words_path})")
    rep.timing["build_seconds"] = round(build_s, 6)
    rep.emit(args.format)
    return EXIT_OK


def cmd_power(args, parser) -> int:
    m = _require_m(args, parser)
    k_max = args.n if args.n is not None else args.max_power
    if k_max < 1:
        parser.error("power must be >= 1")
    table, a, build_s = _build(args, m, args.variant)
    sink = _sink_for(args, a, table.m, args.variant)
    stats = PowerStats()
    rep = Report("power")
    last = None
    minima = {}
    for k, p in power_sequence(a, k_max, sink, stats):
        minima[k] = min_diagonal(p)
        last = p
    if args.out:
        write_matrix(last, args.out)
        rep.fields["out"] = args.out
    rep.fields.update(m=table.m, variant=args.variant, power=k_max, dim=a.dim,
                      infinite_entries=last.infinity_count(), diagonal_minima={str(k): v for k, v in minima.items()},
                      operations={"products": stats.products, "cache_hits": stats.cache_hits})
    rep.lines.append(f"A(G)^{k_max} for m={table.m} ({args.variant}): min diagonal {minima[k_max]}, "
                     f"{last.infinity_count()} infinite entries")
    rep.lines.append(f"products computed: {stats.products}, powers loaded from cache: {stats.cache_hits}")
    _fill_timing(rep, stats, build_s)
    rep.emit(args.format)
    return EXIT_OK


def cmd_gamma(args, parser) -> int:
    m = _require_m(args, parser)
    if args.n is None or args.n < 3:
        parser.error("--n must be given and >= 3")
    t0 = time.perf_counter()
    value = solver.roman_number(m, args.n, args.threads, args.memory_budget)
    rep = Report("gamma")
    rep.fields.update(m=m, n=args.n, gamma_R=value)
    rep.lines.append(f"gamma_R(P_{m} x C_{args.n}) = {value}")
    rep.timing["total_seconds"] = round(time.perf_counter() - t0, 6)
    rep.emit(args.format)
    return EXIT_OK


def _recurrence(args, parser):
    m = _require_m(args, parser)
    if args.max_power < 2:
        parser.error("--max-power must be >= 2")
    table, a, build_s = _build(args, m, args.variant)
    sink = _sink_for(args, a, table.m, args.variant)
    rec = solver.find_recurrence(a, args.max_power, sink=sink, alpha=args.alpha)
    return table.m, rec, build_s


def _rec_lines(m, variant, rec):
    if rec.found:
        return [f"m={m} ({variant}), K={rec.K_searched}: n0={rec.n0} alpha={rec.alpha} beta={rec.beta}"]
    return [f"m={m} ({variant}), K={rec.K_searched}: recurrence not found"]


def cmd_recurrence(args, parser) -> int:
    m, rec, build_s = _recurrence(args, parser)
    rep = Report("recurrence")
    rep.fields.update(m=m, variant=args.variant, **rec.as_dict(),
                      operations={"products": rec.stats.products, "cache_hits": rec.stats.cache_hits})
    rep.lines.extend(_rec_lines(m, args.variant, rec))
    rep.lines.append(f"products computed: {rec.stats.products}, powers loaded from cache: {rec.stats.cache_hits}")
    _fill_timing(rep, rec.stats, build_s)
    rep.emit(args.format)
    return EXIT_OK if rec.found else EXIT_NOT_FOUND


def cmd_formula(args, parser) -> int:
    if args.variant != STANDARD:
        parser.error("formula is defined for the standard variant only")
    m, rec, build_s = _recurrence(args, parser)
    rep = Report("formula")
    rep.fields.update(m=m, recurrence=rec.as_dict())
    rep.lines.extend(_rec_lines(m, STANDARD, rec))
    if not rec.found:
        _fill_timing(rep, rec.stats, build_s)
        rep.emit(args.format)
        return EXIT_NOT_FOUND
    formula = solver.solve_formula(m, rec)
    verified = formula.verify_simplification(200)
    doc = formula.as_dict()
    doc["verification"] = {"ceiling_form_matches_recurrence_n_le_200": verified}
    rep.fields.update(doc)
    rep.lines.append(formula.describe())
    rep.lines.append(f"ceiling form verified for 3 <= n <= 200: {verified}")
    if args.n is not None:
        if args.n < 3:
            parser.error("--n must be >= 3")
        rep.fields["value"] = {"n": args.n, "gamma_R": formula(args.n)}
        rep.lines.append(f"gamma_R(P_{m} x C_{args.n}) = {formula(args.n)}")
    _fill_timing(rep, rec.stats, build_s)
    rep.emit(args.format)
    return EXIT_OK


def cmd_bound(args, parser) -> int:
    m = _require_m(args, parser)
    if args.n is None or args.n < 1:
        parser.error("--n must be given and >= 1")
    n = args.n
    value = solver.lower_bound(m, n)
    exact = m >= 4 and n >= 4 and n % 5 == 0
    rep = Report("bound")
    rep.fields.update(m=m, n=n, lower_bound=value, exact=exact, theorem_applies=m >= 10 and n >= 10)
    note = " (exact: n = 0 mod 5)" if exact else ""
    rep.lines.append(f"gamma_R(P_{m} x C_{n}) >= {value}{note}")
    if not rep.fields["theorem_applies"]:
        rep.lines.append("note: the bound is only guaranteed for m, n >= 10")
    rep.emit(args.format)
    return EXIT_OK


def cmd_loss_verify(args, parser) -> int:
    if args.lo is None or args.hi is None or not 10 <= args.lo <= args.hi:
        parser.error("need 10 <= --from <= --to")
    t0 = time.perf_counter()
    sink = None
    if args.cache_dir:
        _, a = build_transfer_matrix(4, BORDER)
        sink = DiskCache(Path(args.cache_dir), a, 4, BORDER)
    report = solver.verify_loss_lemma(args.lo, args.hi, args.max_power, sink=sink)
    rep = Report("loss-verify")
    stats = report.pop("stats")
    rep.fields.update(report)
    for row in report["rows"]:
        mark = "ok" if row["equals_n"] else "MISMATCH"
        rep.lines.append(f"n={row['n']:3d}  2L_a(n)={row['twice_min_loss']}  {mark}")
    r = report["recurrence"]
    if r["found"]:
        rep.lines.append(f"border recurrence: n0={r['n0']} alpha={r['alpha']} beta={r['beta']}")
    else:
        rep.lines.append("border recurrence not found")
    if report["holds_for_all_n_from"] is not None:
        rep.lines.append(f"2L_a(n) = n for every n >= {report['holds_for_all_n_from']}")
    elif report["mismatches"]:
        rep.lines.append(f"2L_a(n) != n for n = {', '.join(map(str, report['mismatches']))}")
    if report["bound_holds_for_all_n_from"] is not None:
        rep.lines.append(f"2L_a(n) >= n for every n >= {report['bound_holds_for_all_n_from']}")
    rep.timing.update(stats)
    rep.timing["total_seconds"] = round(time.perf_counter() - t0, 6)
    rep.emit(args.format)
    return EXIT_OK if report["all_equal"] else 1


def cmd_oracle(args, parser) -> int:
    m = _require_m(args, parser)
    if args.n is None or args.n < 3:
        parser.error("--n must be given and >= 3")
    rep = Report("oracle")
    if args.certificate:
        f = diagonal_pattern(m, args.n)
        valid = validate_rdf(CylinderGraph(m, args.n), f)
        rep.fields.update(m=m, n=args.n, weight=f.weight, valid=valid, grid=f.to_text().splitlines())
        rep.lines.append(f"diagonal pattern on P_{m} x C_{args.n}: weight {f.weight}, valid={valid}")
        rep.lines.append(f.to_text().rstrip("\n"))
        rep.emit(args.format)
        return EXIT_OK
    if args.variant == BORDER:
        # 2 L_a(n): column DP against the border transfer matrix
        brute = border_loss_dp(args.n)
        matrix = solver.border_loss(args.n, args.threads)
        what = f"2L_a({args.n})"
    else:
        brute = brute_force_gamma_R(m, args.n, args.mode)
        matrix = solver.roman_number(m, args.n, args.threads, args.memory_budget)
        what = f"gamma_R(P_{m} x C_{args.n})"
    rep.fields.update(m=m, n=args.n, variant=args.variant, mode=args.mode, brute_force=brute,
                      transfer_matrix=matrix, agree=brute == matrix)
    rep.lines.append(f"{what}: oracle {brute}, transfer matrix {matrix}, "
                     f"{'agree' if brute == matrix else 'DISAGREE'}")
    rep.emit(args.format)
    return EXIT_OK if brute == matrix else 1


def _require_m(args, parser) -> int:
    if args.variant == BORDER:
        if args.m not in (None, 4):
            parser.error("the border variant is defined for m = 4 only")
        return 4
    if args.m is None:
        parser.error("--m is required")
    if args.m < 2:
        parser.error("--m must be >= 2")
    return args.m


def _fill_timing(rep, stats, build_s):
    rep.timing.update(build_seconds=round(build_s, 6), **{k: v for k, v in stats.as_dict().items() if k.endswith("seconds")})


COMMANDS = {
    "words": cmd_words,
    "matrix": cmd_matrix,
    "power": cmd_power,
    "gamma": cmd_gamma,
    "recurrence": cmd_recurrence,
    "formula": cmd_formula,
    "bound": cmd_bound,
    "loss-verify": cmd_loss_verify,
    "oracle": cmd_oracle,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--m", type=int, help="number of rows (path length)")
    common.add_argument("--n", type=int, help="number of columns (cycle length) or power")
    common.add_argument("--max-power", type=int, default=solver.DEFAULT_MAX_POWER, help="K, highest power (default 50)")
    common.add_argument("--alpha", type=int, help="search only this period")
    common.add_argument("--variant", choices=VARIANTS, default=STANDARD)
    common.add_argument("--cache-dir", help="directory for cached powers")
    common.add_argument("--threads", type=int, default=None, help="worker threads for matrix products")
    common.add_argument("--memory-budget", type=float, default=DEFAULT_MEMORY_BUDGET / 2**20,
                        help="refuse matrices larger than this many MiB (default %(default)s)")
    common.add_argument("--format", choices=("text", "machine"), default="text")
    common.add_argument("--list", action="store_true", help="print every word")
    common.add_argument("--out", help="output file")
    common.add_argument("--from", dest="lo", type=int, help="first n (loss-verify)")
    common.add_argument("--to", dest="hi", type=int, help="last n (loss-verify)")
    common.add_argument("--mode", choices=("auto", "exhaustive", "dp"), default="auto", help="oracle mode")
    common.add_argument("--certificate", action="store_true", help="oracle: print the periodic construction")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="cylroman", description="Roman domination of cylinders P_m x C_n via (min,+) matrix powers")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    if args.threads is not None:
        if args.threads < 1:
            parser.error("--threads must be >= 1")
        set_default_threads(args.threads)
    args.memory_budget = int(args.memory_budget * 2**20)
    sub_parser = parser._subparsers._group_actions[0].choices[args.command]
    try:
        return COMMANDS[args.command](args, sub_parser)
    except CapacityError as exc:
        print(f"capacity error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (OSError, FormatError) as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
