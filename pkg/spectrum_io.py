"""
FILE: spectrum_io.py
DESCRIPTION:
  File formats (see docs/FORMATS.md) and the console summary grid.
  - write_table_json()/read_table_json(): SpectrumTable <-> JSON (pydantic schema).
  - write_table_csv()/read_table_csv(): size,class,r,count,witness rows (pandas).
  - write_pool()/read_pool(): WitnessPool as JSON lines; witnesses re-verified on read.
  - import_table2(): size,r CSV of published zero-free values (values only).
  - load_table(): picks the reader from the file extension / header.
  - render_grid()/render_max_blocks(): text output of the spectrum subcommand.
"""
from __future__ import annotations

import os

import pandas as pd
from pydantic import BaseModel, Field, ValidationError

from constructive import WitnessEntry, WitnessPool
from errors import FieldError, RuleEmissionError, TableFormatError
from gf2n import FieldSpec, format_mask
from rvalue import r_self_bits
from spectrum import (
    CONTAINS_ZERO,
    ZERO_FREE,
    SpectrumClass,
    SpectrumTable,
    model_from_json,
    table_from_model,
    table_to_model,
)

CSV_COLUMNS = ["size", "class", "r", "count", "witness"]
TABLE2_COLUMNS = ["size", "r"]


def _ensure_parent(path: str) -> None:
    parent = os.path.dirname(os.path.abspath(path))
    os.makedirs(parent, exist_ok=True)


# ---------------------------------------------------------------------------
# JSON table
# ---------------------------------------------------------------------------

def dump_table_json(table: SpectrumTable) -> str:
    return table_to_model(table).model_dump_json(by_alias=True, indent=1) + "\n"


def write_table_json(table: SpectrumTable, path: str) -> str:
    _ensure_parent(path)
    with open(path, "w", encoding="utf-8") as f:
        f.write(dump_table_json(table))
    print(f"[TABLE] Wrote {path}")
    return path


def read_table_json(path: str, verify: bool = True) -> SpectrumTable:
    try:
        with open(path, "r", encoding="utf-8") as f:
            text = f.read()
    except OSError as e:
        raise TableFormatError(f"cannot read {path}: {e}") from None
    return table_from_model(model_from_json(text), verify=verify)


# ---------------------------------------------------------------------------
# CSV table
# ---------------------------------------------------------------------------

def table_frame(table: SpectrumTable) -> pd.DataFrame:
    rows = []
    for size, cls in table.sorted_keys():
        e = table.entries[(size, cls)]
        for r in e.r_values:
            w = e.witnesses.get(r)
            rows.append({
                "size": size,
                "class": cls.value,
                "r": r,
                "count": e.counts.get(r) if e.counts is not None else None,
                "witness": format_mask(w) if w is not None else "",
            })
    df = pd.DataFrame(rows, columns=CSV_COLUMNS)
    df["count"] = df["count"].astype("Int64")
    return df


def write_table_csv(table: SpectrumTable, path: str) -> str:
    _ensure_parent(path)
    table_frame(table).to_csv(path, index=False)
    print(f"[TABLE] Wrote {path}")
    return path


def _read_csv(path: str, required: list[str]) -> pd.DataFrame:
    try:
        df = pd.read_csv(path, dtype=str, keep_default_na=False, skipinitialspace=True)
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise TableFormatError(f"cannot read {path}: {e}") from None
    df.columns = [str(c).strip().lower() for c in df.columns]
    missing = [c for c in required if c not in df.columns]
    if missing:
        raise TableFormatError(f"{path}: missing column(s) {missing}; expected {required}")
    return df


def _int_column(df: pd.DataFrame, col: str, path: str) -> pd.Series:
    values = pd.to_numeric(df[col].str.strip(), errors="coerce")
    bad = df[col][values.isna()]
    if len(bad):
        raise TableFormatError(f"{path}: column '{col}' has non-integer value '{bad.iloc[0]}'")
    return values.astype(int)


def read_table_csv(path: str, n: int, poly: int | None = None, verify: bool = True) -> SpectrumTable:
    """CSV export back into a table. The CSV carries no field header, so n is required."""
    df = _read_csv(path, CSV_COLUMNS)
    field = FieldSpec.of(n, poly)
    table = SpectrumTable(field, source=os.path.basename(path))
    sizes = _int_column(df, "size", path)
    rs = _int_column(df, "r", path)
    for i in range(len(df)):
        try:
            cls = SpectrumClass(df["class"].iloc[i].strip())
        except ValueError:
            raise TableFormatError(f"{path}: unknown class '{df['class'].iloc[i]}'") from None
        size = int(sizes.iloc[i])
        if size > field.order:
            raise TableFormatError(f"{path}: size {size} exceeds field order {field.order}")
        count_text = df["count"].iloc[i].strip()
        witness_text = df["witness"].iloc[i].strip()
        table.record(
            size,
            cls,
            int(rs.iloc[i]),
            int(witness_text, 16) if witness_text else None,
            int(count_text) if count_text else None,
        )
    if verify:
        problems = table.verify_witnesses()
        if problems:
            raise TableFormatError(f"{path}: {problems[0]}")
    return table


# ---------------------------------------------------------------------------
# Published table import
# ---------------------------------------------------------------------------

def import_table2(path: str, n: int = 6, poly: int | None = None) -> SpectrumTable:
    """size,r rows of zero-free values into a values-only table."""
    df = _read_csv(path, TABLE2_COLUMNS)
    field = FieldSpec.of(n, poly)
    sizes = _int_column(df, "size", path)
    rs = _int_column(df, "r", path)
    table = SpectrumTable(field, source="table2")
    for size, r in zip(sizes, rs):
        if not 0 <= size < field.order:
            raise TableFormatError(f"{path}: size {size} is not a zero-free size in F_2^{n}")
        table.record(int(size), ZERO_FREE, int(r))
    print(f"[TABLE] Imported {len(df)} value(s) over {len({int(s) for s in sizes})} size(s) from {path}")
    return table


def load_table(path: str, n: int | None = None, verify: bool = True) -> SpectrumTable:
    """Read a JSON table, a CSV export, or a size,r CSV (the latter two need n)."""
    if path.lower().endswith(".json"):
        return read_table_json(path, verify=verify)
    header = _read_csv(path, []).columns.tolist()
    if n is None:
        raise TableFormatError(f"{path}: CSV input needs --n")
    if header == TABLE2_COLUMNS:
        return import_table2(path, n)
    return read_table_csv(path, n, verify=verify)


# ---------------------------------------------------------------------------
# Witness pool (JSON lines)
# ---------------------------------------------------------------------------

class PoolLineModel(BaseModel):
    n: int = Field(ge=1)
    size: int = Field(ge=0)
    r: int
    subset: str
    rule: str
    parent_line: int | None = None


def write_pool(pool: WitnessPool, path: str) -> str:
    _ensure_parent(path)
    with open(path, "w", encoding="utf-8") as f:
        for e in pool.entries():
            line = PoolLineModel(
                n=e.n, size=e.size, r=e.r, subset=format_mask(e.subset),
                rule=e.rule, parent_line=e.parent_line,
            )
            f.write(line.model_dump_json() + "\n")
    print(f"[POOL] Wrote {len(pool.buckets)} witness(es) to {path}")
    return path


def read_pool(path: str, verify: bool = True, poly: int | None = None) -> WitnessPool:
    """Load a pool file; with verify, any witness whose r differs from its line raises RuleEmissionError."""
    pool = None
    try:
        with open(path, "r", encoding="utf-8") as f:
            lines = [ln for ln in f.read().splitlines() if ln.strip()]
    except OSError as e:
        raise TableFormatError(f"cannot read {path}: {e}") from None
    if not lines:
        raise TableFormatError(f"{path}: empty pool file")

    for lineno, text in enumerate(lines, 1):
        try:
            m = PoolLineModel.model_validate_json(text)
        except ValidationError as e:
            raise TableFormatError(f"{path}:{lineno}: {e.errors()[0].get('msg')}") from None
        if pool is None:
            try:
                pool = WitnessPool(FieldSpec.of(m.n, poly))
            except FieldError as e:
                raise TableFormatError(f"{path}:{lineno}: {e}") from None
        if m.n != pool.n:
            raise TableFormatError(f"{path}:{lineno}: n={m.n} in a pool for n={pool.n}")
        try:
            bits = int(m.subset, 16)
        except ValueError:
            raise TableFormatError(f"{path}:{lineno}: bad subset '{m.subset}'") from None
        if bits & ~pool.field.full_bits:
            raise TableFormatError(f"{path}:{lineno}: subset {m.subset} lies outside F_2^{pool.n}")

        r_comp = r_self_bits(pool.field.nonzero_bits ^ bits, pool.n) if not bits & 1 else 0
        entry = WitnessEntry(pool.n, m.size, m.r, bits, m.rule, m.parent_line, r_comp)
        if verify:
            got = r_self_bits(bits, pool.n)
            if got != m.r or bits & 1 or bits.bit_count() != m.size:
                raise RuleEmissionError(m.rule, m.r, got, m.subset, f"{path}:{lineno} fails re-verification")
        pool.buckets.setdefault(entry.key, entry)
    return pool


# ---------------------------------------------------------------------------
# Console rendering
# ---------------------------------------------------------------------------

def _cell(values: list[int]) -> str:
    return " ".join(str(v) for v in values) if values else "-"


def render_grid(table: SpectrumTable) -> str:
    """One row per size: zero-free values | zero-containing values; dashed rule after 2^{n-1}."""
    g, h = table.field.order, table.field.half
    lines = [f"F_2^{table.n} spectrum (size : zero-free | contains-zero)"]
    width = len(str(g))
    for size in range(g + 1):
        zf = table.values(size, ZERO_FREE)
        cz = table.values(size, CONTAINS_ZERO)
        if not zf and not cz and size > h:
            continue
        lines.append(f"{size:>{width}} : {_cell(zf)} | {_cell(cz)}")
        if size == h:
            lines.append("-" * 40)
    return "\n".join(lines) + "\n"


def render_max_blocks(table: SpectrumTable) -> str:
    """Largest zero-free value per size, as blocks of the largest partial triple system of that order."""
    lines = ["max blocks (size : max zero-free r / 6)"]
    for size in range(3, table.field.order):
        values = table.values(size, ZERO_FREE)
        if values:
            lines.append(f"{size} : {max(values) // 6}")
    return "\n".join(lines) + "\n"
