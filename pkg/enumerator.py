"""
FILE: enumerator.py
DESCRIPTION:
  Exhaustive zero-free spectra and their extension to the full spectrum.
  - GrayWalker: walks every subset of F_{2^n} minus {0} (or one shard of it) in
    reflected Gray-code order, toggling one element per step and updating r
    incrementally. Step i toggles element ctz(i) + 1, so after step i the walk
    holds shard_base | (gray(i) << 1).
  - enumerate_zero_free(): one shard, optional checkpoint/resume.
  - run_sharded(): all shards on a process pool, merged with merge_shards().
  - enumerate_zero_free_combinations(): revolving-door order per size, for
    size-bounded runs that should not traverse large subsets.
  - extend_full(): zero-containing sizes via the zero-added shift, large sizes
    via the two complement maps. Derived witnesses are re-verified.

CHECKPOINTS:
  JSON (docs/FORMATS.md), written to <path>.tmp then os.replace()d.
  Every config.CHECKPOINT_EVERY steps, and when a stop is requested.
"""
from __future__ import annotations

import math
import os
import signal
import threading
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass
from typing import Iterator

from pydantic import BaseModel, ValidationError

import config
from errors import CheckpointError, EnumerationError, ShardMergeError, SweepInterrupted, TableFormatError
from gf2n import FieldSpec, format_mask, translate_bits
from rvalue import r_self_bits
from spectrum import (
    CONTAINS_ZERO,
    ZERO_FREE,
    SpectrumTable,
    TableModel,
    table_from_model,
    table_to_model,
)
from system_monitor import default_worker_count, format_stats, make_monitor

MAX_EXHAUSTIVE_N = 6
CHECKPOINT_VERSION = 1

# Set by SIGINT (see install_stop_handler); walkers poll it every STOP_POLL + 1 steps.
_STOP = threading.Event()
STOP_POLL = 1023


def request_stop() -> None:
    _STOP.set()


def clear_stop() -> None:
    _STOP.clear()


def _on_sigint(signum, frame):
    if _STOP.is_set():
        # second Ctrl-C: give up on a clean checkpoint
        raise KeyboardInterrupt
    print("[SWEEP] WARNING: interrupt received; stopping at the next checkpoint boundary")
    _STOP.set()


def install_stop_handler():
    """Route SIGINT to a graceful stop. Returns the previous handler (main thread only)."""
    if threading.current_thread() is not threading.main_thread():
        return None
    return signal.signal(signal.SIGINT, _on_sigint)


def _worker_init():
    _STOP.clear()
    signal.signal(signal.SIGINT, _on_sigint)


def gray(i: int) -> int:
    return i ^ (i >> 1)


# ---------------------------------------------------------------------------
# Shards
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ShardSpec:
    """Shard `index` of `count` (a power of two).

    The top t = log2(count) nonzero elements (2^n - 1, 2^n - 2, ...) are fixed:
    bit j of index decides membership of element 2^n - 1 - j.
    """

    index: int = 0
    count: int = 1

    @property
    def fixed_bits(self) -> int:
        return self.count.bit_length() - 1

    def validate(self, n: int) -> None:
        if self.count < 1 or self.count & (self.count - 1):
            raise EnumerationError(f"shard count {self.count} is not a power of two")
        if self.fixed_bits > (1 << n) - 1:
            raise EnumerationError(f"shard count {self.count} fixes more elements than F_2^{n} has")
        if not 0 <= self.index < self.count:
            raise EnumerationError(f"shard index {self.index} is out of range 0..{self.count - 1}")

    def fixed_elements(self, n: int) -> list[int]:
        top = (1 << n) - 1
        return [top - j for j in range(self.fixed_bits)]

    def base_bits(self, n: int) -> int:
        bits = 0
        for j, x in enumerate(self.fixed_elements(n)):
            if (self.index >> j) & 1:
                bits |= 1 << x
        return bits


def default_shard_count(n: int, workers: int) -> int:
    """2^t with t ~ log2(workers * 64), leaving at least 4 free elements."""
    configured = int(getattr(config, "SHARDS", 0) or 0)
    if configured > 0:
        return configured
    t = max(0, math.ceil(math.log2(max(1, workers) * 64)))
    t = min(t, max(0, (1 << n) - 1 - 4))
    return 1 << t


# ---------------------------------------------------------------------------
# Checkpoint file
# ---------------------------------------------------------------------------

class CheckpointModel(BaseModel):
    version: int = CHECKPOINT_VERSION
    n: int
    poly: str
    max_size: int
    shard_index: int
    shard_count: int
    count_mode: bool
    step: int
    bits: str
    r: int
    card: int
    first: dict[int, dict[int, str]]
    counts: dict[int, dict[int, int]] | None = None


class ShardDoneModel(BaseModel):
    """Finished shard: its table plus the run parameters it was swept with."""

    version: int = CHECKPOINT_VERSION
    max_size: int
    count_mode: bool
    table: TableModel


def _write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    tmp = f"{path}.tmp"
    with open(tmp, "w", encoding="utf-8") as f:
        f.write(text)
    os.replace(tmp, path)


# ---------------------------------------------------------------------------
# Gray-code walk
# ---------------------------------------------------------------------------

class GrayWalker:
    """Incremental r over one shard of the zero-free subsets."""

    def __init__(self, field: FieldSpec, max_size: int, shard: ShardSpec = ShardSpec(),
                 count_mode: bool = False, checkpoint_path: str | None = None):
        shard.validate(field.n)
        self.field = field
        self.max_size = max_size
        self.shard = shard
        self.count_mode = count_mode
        self.checkpoint_path = checkpoint_path

        self.base = shard.base_bits(field.n)
        self.free = field.order - 1 - shard.fixed_bits
        self.last_step = (1 << self.free) - 1

        self.step = 0
        self.bits = self.base
        self.r = r_self_bits(self.base, field.n)
        self.card = self.base.bit_count()
        self.first: list[dict[int, int]] = [{} for _ in range(max_size + 1)]
        self.counts: list[dict[int, int]] | None = (
            [{} for _ in range(max_size + 1)] if count_mode else None
        )
        self._record_current()

    def _record_current(self) -> None:
        if self.card <= self.max_size:
            d = self.first[self.card]
            if self.r not in d:
                d[self.r] = self.bits
            if self.counts is not None:
                c = self.counts[self.card]
                c[self.r] = c.get(self.r, 0) + 1

    def expected_bits(self, step: int) -> int:
        return self.base | (gray(step) << 1)

    @property
    def complete(self) -> bool:
        return self.step >= self.last_step

    def _heartbeat(self, step: int, monitor) -> None:
        pct = 100.0 * step / self.last_step if self.last_step else 100.0
        stats = format_stats(monitor.read_stats()) if monitor else ""
        print(
            f"[SWEEP] n={self.field.n} shard {self.shard.index}/{self.shard.count}: "
            f"step {step}/{self.last_step} ({pct:.1f}%) {stats}".rstrip()
        )

    def run(self, max_steps: int | None = None) -> bool:
        """Walk until the shard is exhausted, max_steps steps were taken, or a stop is requested."""
        n = self.field.n
        bits, r, card, step = self.bits, self.r, self.card, self.step
        first, counts, max_size = self.first, self.counts, self.max_size
        stop_at = self.last_step if max_steps is None else min(self.last_step, step + max_steps)
        progress_every = int(config.PROGRESS_EVERY or 0)
        checkpoint_every = int(config.CHECKPOINT_EVERY or 0) if self.checkpoint_path else 0
        monitor = make_monitor() if progress_every else None

        while step < stop_at:
            step += 1
            x = (step & -step).bit_length()
            xb = 1 << x
            ov = (bits & translate_bits(bits, x, n)).bit_count()
            if bits & xb:
                bits ^= xb
                r -= 3 * ov
                card -= 1
            else:
                bits |= xb
                r += 3 * ov
                card += 1
            if card <= max_size:
                d = first[card]
                if r not in d:
                    d[r] = bits
                if counts is not None:
                    c = counts[card]
                    c[r] = c.get(r, 0) + 1
            if progress_every and step % progress_every == 0:
                self._heartbeat(step, monitor)
            if checkpoint_every and step % checkpoint_every == 0:
                self.bits, self.r, self.card, self.step = bits, r, card, step
                self.save_checkpoint()
            if not step & STOP_POLL and _STOP.is_set():
                break

        self.bits, self.r, self.card, self.step = bits, r, card, step
        if not self.complete and self.checkpoint_path:
            self.save_checkpoint()
        return self.complete

    # --- persistence ---

    def to_checkpoint(self) -> CheckpointModel:
        return CheckpointModel(
            n=self.field.n,
            poly=f"0x{self.field.poly:X}",
            max_size=self.max_size,
            shard_index=self.shard.index,
            shard_count=self.shard.count,
            count_mode=self.count_mode,
            step=self.step,
            bits=format_mask(self.bits),
            r=self.r,
            card=self.card,
            first={k: {r: format_mask(w) for r, w in sorted(d.items())} for k, d in enumerate(self.first) if d},
            counts=(
                {k: dict(sorted(c.items())) for k, c in enumerate(self.counts) if c}
                if self.counts is not None else None
            ),
        )

    def save_checkpoint(self, path: str | None = None) -> str:
        path = path or self.checkpoint_path
        if not path:
            raise CheckpointError("no checkpoint path configured")
        _write_atomic(path, self.to_checkpoint().model_dump_json(indent=1))
        print(f"[CHECKPOINT] DEBUG: wrote {path} at step {self.step}/{self.last_step}")
        return path

    @classmethod
    def from_checkpoint(cls, path: str, field: FieldSpec, max_size: int, shard: ShardSpec,
                        count_mode: bool) -> "GrayWalker":
        try:
            with open(path, "r", encoding="utf-8") as f:
                model = CheckpointModel.model_validate_json(f.read())
        except (OSError, ValidationError, ValueError) as e:
            raise CheckpointError(f"cannot read checkpoint {path}: {e}") from None

        if model.version != CHECKPOINT_VERSION:
            raise CheckpointError(f"checkpoint {path} has version {model.version}, expected {CHECKPOINT_VERSION}")
        mismatches = []
        if model.n != field.n:
            mismatches.append(f"n={model.n} (run has n={field.n})")
        if model.poly.upper() != f"0X{field.poly:X}":
            mismatches.append(f"poly={model.poly}")
        if (model.shard_index, model.shard_count) != (shard.index, shard.count):
            mismatches.append(f"shard {model.shard_index}/{model.shard_count}")
        if model.max_size != max_size:
            mismatches.append(f"max_size={model.max_size}")
        if model.count_mode != count_mode:
            mismatches.append(f"count_mode={model.count_mode}")
        if mismatches:
            raise CheckpointError(f"checkpoint {path} belongs to a different run: {', '.join(mismatches)}")

        walker = cls(field, max_size, shard, count_mode, checkpoint_path=path)
        try:
            bits = int(model.bits, 16)
        except ValueError:
            raise CheckpointError(f"checkpoint {path}: bad subset mask {model.bits}") from None
        if not 0 <= model.step <= walker.last_step or bits != walker.expected_bits(model.step):
            raise CheckpointError(f"checkpoint {path}: subset does not match Gray position {model.step}")
        if model.r != r_self_bits(bits, field.n) or model.card != bits.bit_count():
            raise CheckpointError(f"checkpoint {path}: stored r/size do not match the stored subset")
        if any(k > max_size for k in model.first):
            raise CheckpointError(f"checkpoint {path}: table has sizes above max_size")

        walker.step, walker.bits, walker.r, walker.card = model.step, bits, model.r, model.card
        walker.first = [{} for _ in range(max_size + 1)]
        for k, d in model.first.items():
            walker.first[k] = {r: int(w, 16) for r, w in d.items()}
        if count_mode:
            walker.counts = [{} for _ in range(max_size + 1)]
            for k, c in (model.counts or {}).items():
                walker.counts[k] = dict(c)
        print(f"[CHECKPOINT] Resuming {path} at step {model.step}/{walker.last_step}")
        return walker

    def to_table(self) -> SpectrumTable:
        table = SpectrumTable(
            self.field,
            visited=self.step + 1,
            shard_count=self.shard.count,
            shards={self.shard.index},
            source="brute",
        )
        for k, d in enumerate(self.first):
            for r, w in d.items():
                count = self.counts[k][r] if self.counts is not None else None
                table.record(k, ZERO_FREE, r, w, count)
        return table


def _check_sweep_args(n: int, max_size: int | None, poly: int | None) -> tuple[FieldSpec, int]:
    if n > MAX_EXHAUSTIVE_N:
        raise EnumerationError(
            f"n={n} is too large for an exhaustive sweep (limit {MAX_EXHAUSTIVE_N}); use the constructive generator"
        )
    field = FieldSpec.of(n, poly)
    if max_size is None:
        max_size = field.half
    if not 0 <= max_size <= field.order - 1:
        raise EnumerationError(f"max_size {max_size} is outside 0..{field.order - 1}")
    return field, max_size


def enumerate_zero_free(n: int, max_size: int | None = None, shard: ShardSpec | None = None,
                        count_mode: bool = False, *, poly: int | None = None,
                        checkpoint_path: str | None = None, resume: bool = False,
                        max_steps: int | None = None) -> SpectrumTable:
    """Zero-free spectrum (sizes 0..max_size) of one shard by Gray-code walk.

    Raises SweepInterrupted (carrying the partial table) when the walk stops
    before the shard is exhausted.
    """
    field, max_size = _check_sweep_args(n, max_size, poly)
    shard = shard or ShardSpec()
    shard.validate(n)

    if resume and checkpoint_path and os.path.exists(checkpoint_path):
        walker = GrayWalker.from_checkpoint(checkpoint_path, field, max_size, shard, count_mode)
    else:
        if resume:
            print(f"[CHECKPOINT] WARNING: no checkpoint at {checkpoint_path}; starting from step 0")
        walker = GrayWalker(field, max_size, shard, count_mode, checkpoint_path)

    complete = walker.run(max_steps)
    table = walker.to_table()
    if not complete:
        raise SweepInterrupted(
            f"shard {shard.index}/{shard.count} stopped at step {walker.step}/{walker.last_step}",
            partial=table,
            checkpoints=[checkpoint_path] if checkpoint_path else [],
        )
    if checkpoint_path and os.path.exists(checkpoint_path):
        os.remove(checkpoint_path)
    return table


def shard_checkpoint_path(directory: str, n: int, shard: ShardSpec) -> str:
    return os.path.join(directory, f"sweep-n{n}-s{shard.index}of{shard.count}.json")


def shard_done_path(directory: str, n: int, shard: ShardSpec) -> str:
    return os.path.join(directory, f"sweep-n{n}-s{shard.index}of{shard.count}.done.json")


def write_shard_done(path: str, table: SpectrumTable, max_size: int, count_mode: bool) -> str:
    model = ShardDoneModel(max_size=max_size, count_mode=count_mode, table=table_to_model(table))
    _write_atomic(path, model.model_dump_json())
    return path


def read_shard_done(path: str, field: FieldSpec, max_size: int, shard: ShardSpec,
                    count_mode: bool) -> SpectrumTable:
    """Table of a finished shard; raises CheckpointError when it belongs to another run."""
    try:
        with open(path, "r", encoding="utf-8") as f:
            model = ShardDoneModel.model_validate_json(f.read())
        table = table_from_model(model.table)
    except (OSError, ValidationError, ValueError, TableFormatError) as e:
        raise CheckpointError(f"cannot read finished-shard marker {path}: {e}") from None

    mismatches = []
    if model.version != CHECKPOINT_VERSION:
        mismatches.append(f"version={model.version}")
    if (table.n, table.field.poly) != (field.n, field.poly):
        mismatches.append(f"n={table.n} poly=0x{table.field.poly:X}")
    if table.shards != {shard.index} or table.shard_count != shard.count:
        mismatches.append(f"shards {sorted(table.shards)} of {table.shard_count}")
    if model.max_size != max_size:
        mismatches.append(f"max_size={model.max_size}")
    if model.count_mode != count_mode:
        mismatches.append(f"count_mode={model.count_mode}")
    if mismatches:
        raise CheckpointError(f"finished-shard marker {path} belongs to a different run: {', '.join(mismatches)}")
    return table


def _run_shard(n, poly, max_size, shard, count_mode, checkpoint_path, resume, done_path=None):
    # process-pool entry point: never raises SweepInterrupted across the pickle boundary
    try:
        table = enumerate_zero_free(
            n, max_size, shard, count_mode,
            poly=poly, checkpoint_path=checkpoint_path, resume=resume,
        )
    except SweepInterrupted as e:
        return e.partial, False
    if done_path:
        write_shard_done(done_path, table, max_size, count_mode)
    return table, True


def run_sharded(n: int, max_size: int | None = None, shard_count: int | None = None,
                workers: int | None = None, count_mode: bool = False, *,
                poly: int | None = None, checkpoint_dir: str | None = None,
                resume: bool = False) -> SpectrumTable:
    """All shards of the zero-free sweep, on a process pool when workers > 1.

    With checkpoint_dir, every finished shard leaves a marker holding its table;
    a resumed run reuses those and only walks the rest. Markers are removed once
    the merged sweep is complete.
    """
    field, max_size = _check_sweep_args(n, max_size, poly)
    workers = workers or default_worker_count()
    shard_count = shard_count or default_shard_count(n, workers)
    shards = [ShardSpec(i, shard_count) for i in range(shard_count)]
    ShardSpec(0, shard_count).validate(n)

    def ckpt(s):
        return shard_checkpoint_path(checkpoint_dir, n, s) if checkpoint_dir else None

    def done(s):
        return shard_done_path(checkpoint_dir, n, s) if checkpoint_dir else None

    results: list[tuple[SpectrumTable, bool]] = []
    pending = []
    for s in shards:
        if resume and done(s) and os.path.exists(done(s)):
            results.append((read_shard_done(done(s), field, max_size, s, count_mode), True))
        else:
            pending.append(s)
    if len(pending) < shard_count:
        print(f"[SHARD] Reusing {shard_count - len(pending)} finished shard(s) from {checkpoint_dir}")

    print(f"[SWEEP] n={n} max_size={max_size}: {len(pending)} shard(s) on {max(1, min(workers, len(pending)))} worker(s)")
    if workers <= 1 or len(pending) <= 1:
        for s in pending:
            results.append(_run_shard(n, field.poly, max_size, s, count_mode, ckpt(s), resume, done(s)))
            if _STOP.is_set():
                break
    else:
        with ProcessPoolExecutor(max_workers=workers, initializer=_worker_init) as pool:
            futures = {
                pool.submit(_run_shard, n, field.poly, max_size, s, count_mode, ckpt(s), resume, done(s)): s
                for s in pending
            }
            for fut in as_completed(futures):
                table, finished = fut.result()
                results.append((table, finished))
                print(f"[SHARD] DEBUG: shard {futures[fut].index}/{shard_count} {'done' if finished else 'stopped'}")

    merged = merge_shards([t for t, _ in results], expected_count=None)
    unfinished = [t for t, finished in results if not finished]
    if unfinished or len(results) < shard_count:
        paths = [ckpt(s) for s in shards if ckpt(s) and os.path.exists(ckpt(s))]
        raise SweepInterrupted(
            f"{len(unfinished) + shard_count - len(results)} of {shard_count} shard(s) did not finish",
            partial=merged,
            checkpoints=paths,
        )
    space = 1 << (field.order - 1)
    if merged.visited != space:
        raise ShardMergeError(f"shards visited {merged.visited} subsets, expected {space}")
    for s in shards:
        if done(s) and os.path.exists(done(s)):
            os.remove(done(s))
    return merged


def merge_shards(tables: list[SpectrumTable], expected_count: int | None = None) -> SpectrumTable:
    """Union of values, summed counts, first witness kept (tables ordered by shard index)."""
    tables = [t for t in tables if t is not None]
    if not tables:
        raise ShardMergeError("nothing to merge")
    n_values = {t.n for t in tables}
    if len(n_values) > 1:
        raise ShardMergeError(f"cannot merge tables for different n: {sorted(n_values)}")

    real = [t for t in tables if t.entries or t.shards]
    if not real:
        return tables[0]
    real.sort(key=lambda t: min(t.shards) if t.shards else -1)

    counts_on = {t.has_counts for t in real if t.entries}
    if len(counts_on) > 1:
        raise ShardMergeError("cannot merge counted and uncounted tables")

    shard_counts = {t.shard_count for t in real if t.shards}
    if len(shard_counts) > 1:
        raise ShardMergeError(f"tables come from different shardings: {sorted(shard_counts)}")

    field = real[0].field
    merged = SpectrumTable(field, shard_count=shard_counts.pop() if shard_counts else 1, source=real[0].source)
    for t in real:
        overlap = merged.shards & t.shards
        if overlap:
            raise ShardMergeError(f"shard(s) {sorted(overlap)} appear in more than one table")
        merged.shards |= t.shards
        merged.visited += t.visited
        for key in t.sorted_keys():
            src = t.entries[key]
            dst = merged.entry(*key)
            for r in src.r_values:
                count = src.counts.get(r, 0) if src.counts is not None else None
                dst.add(r, src.witnesses.get(r), count)

    space = 1 << (field.order - 1)
    if merged.visited > space:
        raise ShardMergeError(f"merged tables visited {merged.visited} subsets, more than the {space} that exist")
    total = merged.total_count()
    if total is not None and total > merged.visited:
        raise ShardMergeError(f"merged counts ({total}) exceed subsets visited ({merged.visited}); shards overlap")
    if expected_count is not None and merged.visited != expected_count:
        raise ShardMergeError(f"merged tables visited {merged.visited} subsets, expected {expected_count}")
    return merged


# ---------------------------------------------------------------------------
# Combinations mode
# ---------------------------------------------------------------------------

def revolving_door(m: int, k: int, reverse: bool = False) -> Iterator[int]:
    """k-subsets of {0..m-1} as bitmasks; consecutive masks swap one element for another."""
    if k < 0 or k > m:
        return
    if k == 0:
        yield 0
        return
    if k == m:
        yield (1 << m) - 1
        return
    top = 1 << (m - 1)
    if not reverse:
        yield from revolving_door(m - 1, k)
        for c in revolving_door(m - 1, k - 1, reverse=True):
            yield c | top
    else:
        for c in revolving_door(m - 1, k - 1):
            yield c | top
        yield from revolving_door(m - 1, k, reverse=True)


def _sweep_size(n: int, k: int, count_mode: bool) -> tuple[int, dict[int, int], dict[int, int] | None, int]:
    """All zero-free k-subsets in revolving-door order; position p is element p + 1."""
    m = (1 << n) - 1
    first: dict[int, int] = {}
    counts: dict[int, int] | None = {} if count_mode else None
    prev = None
    r = 0
    visited = 0
    for combo in revolving_door(m, k):
        bits = combo << 1
        if prev is None:
            r = r_self_bits(bits, n)
            cur = bits
        else:
            diff = prev ^ bits
            cur = prev
            removed, added = prev & diff, bits & diff
            while removed:
                low = removed & -removed
                x = low.bit_length() - 1
                r -= 3 * (cur & translate_bits(cur, x, n)).bit_count()
                cur ^= low
                removed ^= low
            while added:
                low = added & -added
                x = low.bit_length() - 1
                r += 3 * (cur & translate_bits(cur, x, n)).bit_count()
                cur |= low
                added ^= low
        prev = cur
        visited += 1
        if r not in first:
            first[r] = cur
        if counts is not None:
            counts[r] = counts.get(r, 0) + 1
    return k, first, counts, visited


def enumerate_zero_free_combinations(n: int, max_size: int | None = None, count_mode: bool = False,
                                     workers: int | None = None, *, poly: int | None = None) -> SpectrumTable:
    """Zero-free spectrum of sizes 0..max_size, one revolving-door task per size."""
    field, max_size = _check_sweep_args(n, max_size, poly)
    table = SpectrumTable(field, source="brute")
    sizes = list(range(max_size + 1))
    workers = workers or 1
    print(f"[SWEEP] n={n} combinations mode, sizes 0..{max_size} on {min(workers, len(sizes))} worker(s)")
    if workers <= 1:
        results = [_sweep_size(n, k, count_mode) for k in sizes]
    else:
        with ProcessPoolExecutor(max_workers=workers, initializer=_worker_init) as pool:
            results = list(pool.map(_sweep_size, [n] * len(sizes), sizes, [count_mode] * len(sizes)))
    for k, first, counts, visited in sorted(results, key=lambda t: t[0]):
        table.visited += visited
        for r, w in first.items():
            table.record(k, ZERO_FREE, r, w, counts[r] if counts is not None else None)
    return table


def enumerate_direct(n: int, max_size: int | None = None, count_mode: bool = True, *,
                     poly: int | None = None) -> SpectrumTable:
    """Reference oracle: r recomputed from scratch for every zero-free subset (small n only)."""
    field, max_size = _check_sweep_args(n, max_size, poly)
    if n > 4:
        raise EnumerationError("the direct oracle is limited to n <= 4")
    table = SpectrumTable(field, source="direct")
    for combo in range(1 << (field.order - 1)):
        bits = combo << 1
        k = bits.bit_count()
        table.visited += 1
        if k <= max_size:
            table.record(k, ZERO_FREE, r_self_bits(bits, n), bits, 1 if count_mode else None)
    return table


# ---------------------------------------------------------------------------
# Full spectrum from the zero-free half
# ---------------------------------------------------------------------------

def zero_added_value(k: int, r: int) -> int:
    """r(A ∪ {0}) for a zero-free k-set A."""
    return r + 3 * k + 1


def complement_value(g: int, k: int, r: int) -> int:
    """r of the complement in F_{2^n} of a k-set with value r."""
    return g * g - 3 * g * k + 3 * k * k - r


def complement_nonzero_value(g: int, k: int, r: int) -> int:
    """r of the complement inside F_{2^n} minus {0} of a zero-free k-set with value r."""
    return g * g - 3 * (g - k - 1) * (k + 1) - (3 * k + 1) - r


def _derive(dst: SpectrumTable, size: int, cls, src_entry, value_fn, witness_fn) -> None:
    n = dst.field.n
    for r in src_entry.r_values:
        value = value_fn(r)
        w = src_entry.witnesses.get(r)
        witness = witness_fn(w) if w is not None else None
        if witness is not None and r_self_bits(witness, n) != value:
            raise EnumerationError(
                f"derived witness {format_mask(witness)} for size {size} {cls.value} has r="
                f"{r_self_bits(witness, n)}, expected {value}"
            )
        count = src_entry.counts.get(r, 0) if src_entry.counts is not None else None
        dst.record(size, cls, value, witness, count)


def extend_full(table: SpectrumTable) -> SpectrumTable:
    """Full spectrum (both classes, sizes 0..2^n) from zero-free sizes 0..2^{n-1}."""
    field = table.field
    g, h = field.order, field.half
    missing = [k for k in range(h + 1) if not table.has(k, ZERO_FREE)]
    if missing:
        raise EnumerationError(f"extend_full needs zero-free entries for sizes {missing}")

    out = SpectrumTable(field, visited=table.visited, shard_count=table.shard_count,
                        shards=set(table.shards), source=table.source)
    for k in range(h + 1):
        src = table.entries[(k, ZERO_FREE)]
        dst = out.entry(k, ZERO_FREE)
        for r in src.r_values:
            dst.add(r, src.witnesses.get(r), src.counts.get(r, 0) if src.counts is not None else None)

    # zero-free k > 2^{n-1}: complement inside F_{2^n} minus {0} of size 2^n - 1 - k
    for k in range(h + 1, g):
        j = g - 1 - k
        _derive(out, k, ZERO_FREE, out.entries[(j, ZERO_FREE)],
                lambda r, j=j: complement_nonzero_value(g, j, r),
                lambda w: field.nonzero_bits ^ w)

    # contains zero, s <= 2^{n-1}: zero added to a zero-free (s-1)-set
    for s in range(1, h + 1):
        _derive(out, s, CONTAINS_ZERO, out.entries[(s - 1, ZERO_FREE)],
                lambda r, s=s: zero_added_value(s - 1, r),
                lambda w: w | 1)

    # contains zero, s > 2^{n-1}: complement of a zero-free (2^n - s)-set
    for s in range(h + 1, g + 1):
        _derive(out, s, CONTAINS_ZERO, out.entries[(g - s, ZERO_FREE)],
                lambda r, s=s: complement_value(g, g - s, r),
                lambda w: field.full_bits ^ w)

    for (k, cls), e in table.entries.items():
        if cls is ZERO_FREE and k > h and e.values and set(e.values) != set(out.values(k, cls)):
            raise EnumerationError(
                f"zero-free size {k}: enumerated {e.r_values} disagree with derived {out.values(k, cls)}"
            )
    total = out.total_count()
    if total is not None:
        print(f"[EXTEND] n={field.n}: full table classifies {total} subsets")
    return out


def symmetry_violations(table: SpectrumTable) -> list[str]:
    """Zero-free sizes k and 2^n-1-k whose value sets are not images of each other."""
    g = table.field.order
    problems = []
    for k in range(g):
        j = g - 1 - k
        if k > j or not (table.has(k, ZERO_FREE) and table.has(j, ZERO_FREE)):
            continue
        image = {complement_nonzero_value(g, k, r) for r in table.values(k, ZERO_FREE)}
        if image != set(table.values(j, ZERO_FREE)):
            problems.append(f"zero-free sizes {k} and {j} are not complement images")
    return problems
