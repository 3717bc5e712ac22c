#!/usr/bin/env python3
"""
FILE: main.py
DESCRIPTION:
  Command line entry point.
  - Subcommands: rvalue, spectrum brute|construct, verify, steiner, compare,
    import-table2, witness-check.
  - Results go to stdout (sys.stdout.write); everything printed goes through
    timestamped_print to stderr.
  - Exit codes: 0 success, 1 verification/diff failure, 2 usage error.
"""
import argparse
import builtins
import os
import re
import signal
import sys
from datetime import datetime

import config
from constructive import assemble_full, bootstrap, compare, lift
from enumerator import (
    clear_stop,
    enumerate_zero_free_combinations,
    extend_full,
    install_stop_handler,
    run_sharded,
)
from errors import (
    EnumerationError,
    FieldError,
    HypothesisError,
    RuleEmissionError,
    ShardMergeError,
    SweepInterrupted,
    TableFormatError,
)
from gf2n import FieldSpec, parse_subset
from identities import identity_ids, run_sweep
from reference_tables import TABLE1_N, TABLE2_N, TABLE2_PATH, table1_report
from rvalue import is_partial_steiner_system, r_abc, r_set, steiner_blocks
from spectrum import ZERO_FREE, check_invariants
from spectrum_io import (
    import_table2,
    load_table,
    read_pool,
    render_grid,
    render_max_blocks,
    write_pool,
    write_table_csv,
    write_table_json,
)
from system_monitor import default_worker_count
from utils import parse_classes, parse_int, validate_run_config

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

# --- 1. GLOBAL LOGGING & COLOR SETUP ---
c_cyan    = "\033[1;36m"   # Bold Cyan (tags)
c_magenta = "\033[1;35m"   # Bold Magenta (sweep/shard tags, DEBUG header)
c_green   = "\033[1;32m"   # Bold Green (INFO)
c_yellow  = "\033[1;33m"   # Bold Yellow (WARN)
c_red     = "\033[1;31m"   # Bold Red (ERROR)
c_white   = "\033[1;37m"   # Bold White (brackets / colons)
c_dim     = "\033[37m"     # Standard White (timestamp)
c_reset   = "\033[0m"

_original_print = builtins.print


def _use_color():
    if not config.LOG_COLOR:
        return False
    try:
        return sys.stderr.isatty()
    except Exception:
        return False


def _paint(color, text, enabled):
    return f"{color}{text}{c_reset}" if enabled else text


def get_source_color(tag):
    t = tag.lower()
    if t in ("sweep", "shard", "checkpoint", "extend"):
        return c_magenta
    if t in ("lift", "pool"):
        return c_green
    if t in ("table1", "verify"):
        return c_yellow
    return c_cyan


def format_log_line(msg, now=None, color=False):
    """Return the formatted stderr line, or None when the message is dropped."""
    now = now or datetime.now().strftime("%H:%M:%S")
    lower_msg = msg.lower()

    if any(x in lower_msg for x in ["error", "critical", "failed"]):
        header = _paint(c_red, "ERROR", color)
        msg = msg.replace("CRITICAL:", "").replace("ERROR:", "").strip()
    elif "warning" in lower_msg:
        header = _paint(c_yellow, "WARN", color)
        msg = msg.replace("WARNING:", "").strip()
    elif "debug" in lower_msg:
        if not config.VERBOSE:
            return None
        header = _paint(c_magenta, "DEBUG", color)
        msg = msg.replace("DEBUG:", "").replace("[DEBUG]", "").strip()
    else:
        header = _paint(c_green, "INFO", color)

    match = re.match(r"^\[(.*?)\]\s*(.*)", msg)
    if match:
        src_text = match.group(1)
        rest_of_msg = re.sub(r"^:\s*", "", match.group(2)).strip()
        msg = (
            f"{_paint(c_white, '[', color)}{_paint(get_source_color(src_text), src_text, color)}"
            f"{_paint(c_white, ']:', color)} {rest_of_msg}"
        )
    return f"{_paint(c_dim, f'[{now}]', color)} {header}{_paint(c_white, ':', color)} {msg}"


def timestamped_print(*args, **kwargs):
    kwargs.pop("file", None)
    kwargs.pop("flush", None)
    msg = " ".join(map(str, args))
    line = format_log_line(msg, color=_use_color())
    if line is None:
        return
    _original_print(line, file=sys.stderr, flush=True, **kwargs)


def install_log_hook():
    """Route print() through timestamped_print; returns the previous print."""
    previous = builtins.print
    builtins.print = timestamped_print
    return previous


def get_version():
    try:
        from version_utils import get_display_version
        return get_display_version(prefix="v")
    except Exception:
        return "Unknown"


def _emit(text):
    sys.stdout.write(text)
    sys.stdout.flush()


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def _field(args):
    poly = parse_int(args.poly) if getattr(args, "poly", None) else None
    return FieldSpec.of(args.n, poly)


def cmd_rvalue(args):
    field = _field(args)
    a = parse_subset(args.set, field)
    b = parse_subset(args.b, field) if args.b is not None else a
    c = parse_subset(args.c, field) if args.c is not None else a
    _emit(f"{r_abc(a, b, c)}\n")
    if args.triples:
        for t in r_set(a, b, c):
            _emit(f"{t.a} + {t.b} = {t.c}\n")
    return EXIT_OK


def _write_output(table, args):
    if not args.out:
        return
    if args.format == "csv":
        write_table_csv(table, args.out)
    else:
        write_table_json(table, args.out)


def _run_brute(args, field):
    workers = args.workers or default_worker_count()
    if args.sweep == "combinations":
        return enumerate_zero_free_combinations(
            field.n, args.max_size, args.counts, workers, poly=field.poly,
        )
    return run_sharded(
        field.n, args.max_size, args.shards or None, workers, args.counts,
        poly=field.poly, checkpoint_dir=args.checkpoint_dir, resume=args.resume,
    )


def _run_construct(args, field):
    if args.pool:
        pool = read_pool(args.pool, poly=None)
        if pool.n > field.n:
            raise FieldError(f"base pool is for n={pool.n}, cannot lift down to n={field.n}")
        print(f"[POOL] Base pool n={pool.n} with {len(pool.buckets)} witness(es) from {args.pool}")
        while pool.n < field.n:
            pool = lift(pool)
    else:
        cache_dir = None if args.no_cache else (args.cache_dir or config.CACHE_DIR)
        pool = bootstrap(field.n, cache_dir)
    for finding in pool.findings:
        print(f"[LIFT] WARNING: {finding}")
    if args.pool_out:
        write_pool(pool, args.pool_out)
    return assemble_full(pool)


def _reference_check(table):
    """Extra stdout lines and an exit code for the published anchor tables."""
    lines = []
    code = EXIT_OK
    if table.n == TABLE1_N:
        report = table1_report(table)
        lines.append("table 1 check")
        lines.extend(f"  {line}" for line in report.lines())
    elif table.n == TABLE2_N:
        published = import_table2(TABLE2_PATH, TABLE2_N)
        rep = compare(table, published, classes=(ZERO_FREE,))
        lines.append(f"table 2 check: {rep.only_b_count} table-only value(s), {rep.only_a_count} generated-only value(s)")
        for row in rep.differences():
            if row.only_b:
                lines.append(f"  size {row.size}: table-only {row.only_b}")
                print(f"[CONSTRUCT] WARNING: size {row.size}: published value(s) {row.only_b} not generated")
        if rep.only_b_count:
            code = EXIT_FAILED
    else:
        print(f"[TABLE] WARNING: no published table for n={table.n}; --reference skipped")
    return lines, code


def cmd_spectrum(args):
    field = _field(args)
    previous = None
    if args.mode == "brute":
        clear_stop()
        previous = install_stop_handler()
    try:
        if args.mode == "brute":
            table = _run_brute(args, field)
            if table.has(field.half, ZERO_FREE) or (args.max_size is None):
                table = extend_full(table)
        else:
            table = _run_construct(args, field)
    finally:
        if previous is not None:
            signal.signal(signal.SIGINT, previous)

    problems = check_invariants(table)
    for p in problems:
        print(f"[TABLE] ERROR: {p}")

    _write_output(table, args)
    _emit(render_grid(table))
    _emit(render_max_blocks(table))
    total = table.total_count()
    if total is not None:
        _emit(f"classified {total} subsets\n")

    code = EXIT_FAILED if problems else EXIT_OK
    if args.reference:
        lines, ref_code = _reference_check(table)
        if lines:
            _emit("\n".join(lines) + "\n")
        code = max(code, ref_code)
    return code


def cmd_verify(args):
    field = _field(args)
    trials = args.trials if args.trials is not None else config.VERIFY_TRIALS
    seed = args.seed if args.seed is not None else config.VERIFY_SEED
    ids = [s.strip() for s in args.identity.split(",")] if args.identity else None
    if ids:
        known = {i.value for i in identity_ids()}
        unknown = [i for i in ids if i not in known]
        if unknown:
            raise HypothesisError(f"unknown identity id(s) {unknown}; known: {sorted(known)}")

    results = run_sweep(field, trials, seed, exhaustive=args.exhaustive, ids=ids)
    mode = "exhaustive" if args.exhaustive else f"trials={trials} seed={seed}"
    _emit(f"identity sweep n={field.n} {mode}\n")
    for res in results:
        status = "PASS" if res.passed else "FAIL"
        _emit(
            f"{res.identity_id.value:<18} {res.checked - res.failed:>7}/{res.checked:<7} "
            f"skipped={res.skipped:<6} {status}\n"
        )
    failed = [r for r in results if not r.passed]
    _emit(f"{len(results) - len(failed)}/{len(results)} identities passed\n")
    return EXIT_FAILED if failed else EXIT_OK


def cmd_steiner(args):
    field = _field(args)
    a = parse_subset(args.set, field)
    blocks = steiner_blocks(a)
    value = r_abc(a, a, a)
    for blk in blocks:
        _emit(f"{{{blk.a}, {blk.b}, {blk.c}}}\n")
    _emit(f"blocks: {len(blocks)}\n")
    consistent = value == 6 * len(blocks)
    _emit(f"r = {value}, r/6 = {value // 6} ({'consistent' if consistent else 'INCONSISTENT'})\n")
    partial = is_partial_steiner_system(blocks)
    _emit(f"partial steiner triple system of order {a.cardinality}: {'yes' if partial else 'no'}\n")
    return EXIT_OK if consistent and partial else EXIT_FAILED


def cmd_compare(args):
    a = load_table(args.file_a, n=args.n)
    b = load_table(args.file_b, n=args.n)
    rep = compare(a, b, classes=parse_classes(args.classes))
    if rep.identical:
        _emit("identical\n")
        return EXIT_OK
    for row in rep.differences():
        _emit(f"size {row.size} {row.cls.value}: only in A {row.only_a}, only in B {row.only_b}\n")
    _emit(f"{rep.only_a_count} value(s) only in A, {rep.only_b_count} value(s) only in B\n")
    if args.b_partial:
        # B is a partial listing: only values missing from A count as failures
        return EXIT_FAILED if rep.only_b_count else EXIT_OK
    return EXIT_FAILED


def cmd_import_table2(args):
    poly = parse_int(args.poly) if args.poly else None
    table = import_table2(args.csv, args.n, poly)
    _write_output(table, args)
    sizes = sorted({k for k, _ in table.entries})
    values = sum(len(e.values) for e in table.entries.values())
    _emit(f"imported {values} value(s) over {len(sizes)} size(s) for n={table.n}\n")
    return EXIT_OK


def cmd_witness_check(args):
    pool = read_pool(args.pool_file, verify=True)
    problems = pool.verify()
    for p in problems:
        print(f"[POOL] ERROR: {p}")
    if problems:
        return EXIT_FAILED
    _emit(f"ok: {len(pool.buckets)} witness(es) verified for n={pool.n}\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def _add_field_args(p, n_default=None):
    p.add_argument("--n", type=int, required=n_default is None, default=n_default, help="field dimension (F_2^n)")
    p.add_argument("--poly", default=None, help="irreducible polynomial, e.g. 0x13 (default per n)")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="rvalue-spectra",
        description="r-values and r-value spectra of subsets of F_2^n.",
    )
    parser.add_argument("--version", action="version", version=get_version())
    parser.add_argument("--verbose", action="store_true", help="print DEBUG lines")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rvalue", help="r(A) or r(A,B,C)")
    _add_field_args(p)
    p.add_argument("--set", required=True, help="A as '1,2,3' or '0x0E'")
    p.add_argument("--b", default=None, help="B (default A)")
    p.add_argument("--c", default=None, help="C (default A)")
    p.add_argument("--triples", action="store_true", help="also list the triples a + b = c")
    p.set_defaults(func=cmd_rvalue)

    p = sub.add_parser("spectrum", help="full spectrum by sweep or construction")
    p.add_argument("mode", choices=["brute", "construct"])
    _add_field_args(p)
    p.add_argument("--max-size", type=int, default=None, help="largest zero-free size to sweep")
    p.add_argument("--counts", action="store_true", help="count subsets per value (brute only)")
    p.add_argument("--sweep", choices=["gray", "combinations"], default="gray")
    p.add_argument("--shards", type=int, default=0, help="power of two; 0 derives from workers")
    p.add_argument("--workers", type=int, default=0, help="worker processes; 0 uses all cores")
    p.add_argument("--checkpoint-dir", default=None)
    p.add_argument("--resume", action="store_true", help="continue from checkpoints in --checkpoint-dir")
    p.add_argument("--confirm-long", action="store_true", help="allow the n=5 exhaustive sweep")
    p.add_argument("--pool", default=None, help="base witness pool (JSON lines) for construct")
    p.add_argument("--pool-out", default=None, help="write the level-n witness pool here")
    p.add_argument("--cache-dir", default=None, help="bootstrap pool cache (default RSPEC_CACHE_DIR)")
    p.add_argument("--no-cache", action="store_true", help="do not read or write cached pools")
    p.add_argument("--reference", action="store_true", help="check against the published tables (n=4, n=6)")
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("verify", help="check the identities on random or all inputs")
    _add_field_args(p)
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--exhaustive", action="store_true", help="every input tuple (n <= 2)")
    p.add_argument("--identity", default=None, help="comma list of identity ids (default all)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("steiner", help="triple blocks of a zero-free set")
    _add_field_args(p)
    p.add_argument("--set", required=True)
    p.set_defaults(func=cmd_steiner)

    p = sub.add_parser("compare", help="diff two spectrum files")
    p.add_argument("file_a")
    p.add_argument("file_b")
    p.add_argument("--n", type=int, default=None, help="field dimension for CSV inputs")
    p.add_argument("--classes", default=None, help="zero_free, contains_zero or both")
    p.add_argument("--b-partial", action="store_true", help="B is a partial listing; only B-only values fail")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("import-table2", help="published F_64 values as a spectrum file")
    p.add_argument("csv", nargs="?", default=TABLE2_PATH)
    _add_field_args(p, n_default=TABLE2_N)
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.set_defaults(func=cmd_import_table2)

    p = sub.add_parser("witness-check", help="re-verify every witness in a pool file")
    p.add_argument("pool_file")
    p.set_defaults(func=cmd_witness_check)

    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE

    previous_print = install_log_hook()
    previous_verbose = config.VERBOSE
    if args.verbose:
        config.VERBOSE = True
    try:
        errors, warnings = validate_run_config(vars(args))
        for w in warnings:
            print(f"[CLI] WARNING: {w}")
        if errors:
            for e in errors:
                print(f"[CLI] ERROR: {e}")
            return EXIT_USAGE
        print(f"[CLI] DEBUG: {args.command} {os.getpid()} {get_version()}")
        return args.func(args)
    except SweepInterrupted as e:
        print(f"[SWEEP] ERROR: {e}")
        for path in e.checkpoints:
            print(f"[CHECKPOINT] Resume from {path} with --resume")
        return EXIT_FAILED
    except (RuleEmissionError, ShardMergeError) as e:
        print(f"[CLI] ERROR: {e}")
        return EXIT_FAILED
    except (FieldError, HypothesisError, TableFormatError, EnumerationError) as e:
        print(f"[CLI] ERROR: {e}")
        return EXIT_USAGE
    except KeyboardInterrupt:
        print("[CLI] ERROR: interrupted")
        return EXIT_FAILED
    finally:
        config.VERBOSE = previous_verbose
        builtins.print = previous_print


if __name__ == "__main__":
    sys.exit(main())
