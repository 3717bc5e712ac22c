# utils.py
"""
FILE: utils.py
DESCRIPTION:
  Shared helpers for the command line.
  - parse_int(): decimal or 0x-prefixed integers (--poly, --seed).
  - parse_classes(): "zero_free,contains_zero" style class filters.
  - validate_run_config(): checks a parsed run for mistakes before dispatch.
"""
import os

from errors import FieldError
from gf2n import MAX_N
from spectrum import SpectrumClass

BRUTE_CLI_MAX_N = 5
LONG_BRUTE_N = 5
CONSTRUCT_SLOW_N = 7
EXHAUSTIVE_VERIFY_MAX_N = 2
FORMATS = ("json", "csv")
MODES = ("gray", "combinations")


def parse_int(text):
    """Integer from '41', '0x29' or '0b101001'."""
    if isinstance(text, int):
        return text
    s = str(text).strip().lower()
    try:
        return int(s, 0)
    except ValueError:
        raise FieldError(f"'{text}' is not an integer (use decimal or 0x...)") from None


def parse_classes(text):
    """Tuple of SpectrumClass from a comma list; accepts zf/cz shorthands."""
    if text is None or str(text).strip() == "":
        return None
    aliases = {"zf": "zero_free", "cz": "contains_zero"}
    out = []
    for token in str(text).split(","):
        t = token.strip().lower().replace("-", "_")
        if not t:
            continue
        try:
            out.append(SpectrumClass(aliases.get(t, t)))
        except ValueError:
            raise FieldError(f"unknown class '{token.strip()}' (expected zero_free or contains_zero)") from None
    return tuple(out) or None


def _safe_int(value, default=0):
    try:
        if value is None:
            return default
        if isinstance(value, bool):
            return int(value)
        s = str(value).strip()
        if s == "":
            return default
        return int(s, 0)
    except Exception:
        return default


def validate_run_config(run_conf):
    """Analyze a run configuration dictionary (argparse namespace as dict).

    Returns (errors, warnings). Errors block dispatch (exit 2); warnings are
    logged and the run continues. Never raises.
    """
    errors = []
    warnings = []

    command = str(run_conf.get("command") or "")
    mode = str(run_conf.get("mode") or "")
    n = _safe_int(run_conf.get("n"), 0)

    # 1) Field dimension
    if run_conf.get("n") is not None and not 1 <= n <= MAX_N:
        errors.append(f"--n {run_conf.get('n')} is outside the supported range 1..{MAX_N}.")
        return errors, warnings

    order = 1 << n if n else 0

    # 2) Output format vs file extension
    fmt = str(run_conf.get("format") or "json").lower()
    out = str(run_conf.get("out") or "").strip()
    if fmt not in FORMATS:
        errors.append(f"Output format '{fmt}' is not supported; use one of {', '.join(FORMATS)}.")
    elif out:
        ext = os.path.splitext(out)[1].lower().lstrip(".")
        if ext in FORMATS and ext != fmt:
            warnings.append(f"Output file '{out}' ends in .{ext} but --format is {fmt}; writing {fmt}.")

    if command == "spectrum":
        max_size = run_conf.get("max_size")
        if max_size is not None:
            m = _safe_int(max_size, -1)
            if m < 0 or (order and m > order - 1):
                errors.append(f"--max-size {max_size} is outside 0..{order - 1} for n={n}.")
            elif order and m < order // 2:
                warnings.append(
                    f"--max-size {m} stops below 2^(n-1)={order // 2}; the full spectrum cannot be assembled "
                    "and only the zero-free rows are written."
                )

        if mode == "brute":
            # 3) Exhaustive sweep guard rails
            if n > BRUTE_CLI_MAX_N:
                errors.append(
                    f"spectrum brute is limited to n <= {BRUTE_CLI_MAX_N} (2^{order - 1} subsets at n={n}). "
                    "Use 'spectrum construct' instead."
                )
            elif n == LONG_BRUTE_N and not run_conf.get("confirm_long"):
                errors.append(
                    f"spectrum brute --n {n} walks 2^{order - 1} subsets and can take hours. "
                    "Pass --confirm-long to run it (checkpoints are written to --checkpoint-dir)."
                )

            shards = run_conf.get("shards")
            if shards not in (None, 0, "0", ""):
                s = _safe_int(shards, 0)
                if s <= 0 or s & (s - 1):
                    errors.append(f"--shards {shards} must be a positive power of two.")
                elif order and s.bit_length() - 1 > order - 1:
                    errors.append(f"--shards {s} fixes more elements than F_2^{n} has.")
                elif str(run_conf.get("sweep") or "gray") == "combinations":
                    warnings.append("--shards is ignored in combinations mode (one task per size).")

            if run_conf.get("resume") and not run_conf.get("checkpoint_dir"):
                errors.append("--resume needs --checkpoint-dir to find the shard checkpoints.")

        elif mode == "construct":
            if run_conf.get("counts"):
                errors.append("--counts is only available for 'spectrum brute'; constructed pools carry no counts.")
            if n >= CONSTRUCT_SLOW_N:
                warnings.append(f"spectrum construct --n {n} lifts through every level from n=3 and may take a long time.")
            pool = str(run_conf.get("pool") or "").strip()
            if pool and not os.path.exists(pool):
                errors.append(f"Base pool file '{pool}' does not exist.")

    # 4) Identity sweeps
    if command == "verify":
        trials = run_conf.get("trials")
        if trials is not None and _safe_int(trials, 0) <= 0:
            errors.append(f"--trials {trials} must be a positive integer.")
        if run_conf.get("exhaustive") and n > EXHAUSTIVE_VERIFY_MAX_N:
            errors.append(
                f"--exhaustive is limited to n <= {EXHAUSTIVE_VERIFY_MAX_N}; use --trials for n={n}."
            )

    return errors, warnings
