"""
FILE: spectrum.py
DESCRIPTION:
  SpectrumTable: per (size, class) the achieved r-values, one witness per value
  and optional counts. Shared by the enumerator, the constructive generator and
  the file codecs.
  - TableModel/EntryModel: pydantic schema of the JSON table file.
  - table_to_model()/table_from_model(): conversion; loading re-verifies witnesses.
  - check_invariants(): mod-6 / upper-bound / zero-added / full-field checks.
"""
from __future__ import annotations

from dataclasses import dataclass
from dataclasses import field as dataclass_field
from enum import Enum

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from errors import FieldError, TableFormatError
from gf2n import FieldSpec, format_mask
from rvalue import r_self_bits, zero_free_upper_bound

TABLE_FORMAT_VERSION = 1


class SpectrumClass(str, Enum):
    ZERO_FREE = "zero_free"
    CONTAINS_ZERO = "contains_zero"


ZERO_FREE = SpectrumClass.ZERO_FREE
CONTAINS_ZERO = SpectrumClass.CONTAINS_ZERO


@dataclass
class SpectrumEntry:
    values: set[int] = dataclass_field(default_factory=set)
    witnesses: dict[int, int] = dataclass_field(default_factory=dict)
    counts: dict[int, int] | None = None

    @property
    def r_values(self) -> list[int]:
        return sorted(self.values)

    def add(self, r: int, witness: int | None = None, count: int | None = None) -> None:
        self.values.add(r)
        if witness is not None and r not in self.witnesses:
            self.witnesses[r] = witness
        if count is not None:
            if self.counts is None:
                self.counts = {}
            self.counts[r] = self.counts.get(r, 0) + count


@dataclass
class SpectrumTable:
    field: FieldSpec
    entries: dict[tuple[int, SpectrumClass], SpectrumEntry] = dataclass_field(default_factory=dict)
    visited: int = 0
    shard_count: int = 1
    shards: set[int] = dataclass_field(default_factory=set)
    source: str = ""

    @property
    def n(self) -> int:
        return self.field.n

    def entry(self, size: int, cls: SpectrumClass) -> SpectrumEntry:
        key = (size, SpectrumClass(cls))
        if key not in self.entries:
            self.entries[key] = SpectrumEntry()
        return self.entries[key]

    def has(self, size: int, cls: SpectrumClass) -> bool:
        e = self.entries.get((size, SpectrumClass(cls)))
        return e is not None and bool(e.values)

    def values(self, size: int, cls: SpectrumClass) -> list[int]:
        e = self.entries.get((size, SpectrumClass(cls)))
        return e.r_values if e else []

    def full_values(self, size: int) -> list[int]:
        return sorted(set(self.values(size, ZERO_FREE)) | set(self.values(size, CONTAINS_ZERO)))

    def record(self, size: int, cls: SpectrumClass, r: int, witness: int | None = None,
               count: int | None = None) -> None:
        self.entry(size, cls).add(r, witness, count)

    def sorted_keys(self) -> list[tuple[int, SpectrumClass]]:
        order = {ZERO_FREE: 0, CONTAINS_ZERO: 1}
        return sorted(self.entries, key=lambda k: (k[0], order[k[1]]))

    @property
    def has_counts(self) -> bool:
        return bool(self.entries) and all(e.counts is not None for e in self.entries.values() if e.values)

    def total_count(self) -> int | None:
        if not self.has_counts:
            return None
        return sum(sum(e.counts.values()) for e in self.entries.values() if e.counts)

    def verify_witnesses(self) -> list[str]:
        """Problems with stored witnesses (size, class or r mismatch); empty when all verify."""
        problems = []
        n = self.field.n
        for (size, cls), e in self.entries.items():
            for r, w in e.witnesses.items():
                if w < 0 or w > self.field.full_bits:
                    problems.append(f"size {size} {cls.value} r={r}: witness {format_mask(w)} outside field")
                    continue
                if r not in e.values:
                    problems.append(f"size {size} {cls.value}: witness for unlisted value {r}")
                if w.bit_count() != size:
                    problems.append(f"size {size} {cls.value} r={r}: witness {format_mask(w)} has {w.bit_count()} elements")
                if bool(w & 1) != (cls is CONTAINS_ZERO):
                    problems.append(f"size {size} {cls.value} r={r}: witness {format_mask(w)} in wrong class")
                got = r_self_bits(w, n)
                if got != r:
                    problems.append(f"size {size} {cls.value}: witness {format_mask(w)} has r={got}, claimed {r}")
        return problems


def check_invariants(table: SpectrumTable) -> list[str]:
    """Structural checks that hold for any correct table (possibly partial)."""
    problems = []
    g = table.field.order
    for (size, cls), e in table.entries.items():
        if cls is ZERO_FREE and size >= 1:
            cap = zero_free_upper_bound(size)
            for r in e.values:
                if r % 6:
                    problems.append(f"zero-free size {size}: value {r} is not divisible by 6")
                if r > cap:
                    problems.append(f"zero-free size {size}: value {r} exceeds bound {cap}")
        if cls is CONTAINS_ZERO and table.has(size - 1, ZERO_FREE):
            expected = {r + 3 * (size - 1) + 1 for r in table.values(size - 1, ZERO_FREE)}
            if set(e.values) != expected:
                problems.append(
                    f"contains-zero size {size}: {sorted(e.values)} != zero-added image {sorted(expected)}"
                )
    if table.has(g, CONTAINS_ZERO) and table.values(g, CONTAINS_ZERO) != [g * g]:
        problems.append(f"full field: {table.values(g, CONTAINS_ZERO)} != [{g * g}]")
    return problems


# ---------------------------------------------------------------------------
# JSON schema
# ---------------------------------------------------------------------------

class EntryModel(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    size: int = Field(ge=0)
    cls: SpectrumClass = Field(alias="class")
    r_values: list[int]
    counts: dict[int, int] | None = None
    witnesses: dict[int, str] = Field(default_factory=dict)


class TableModel(BaseModel):
    version: int = TABLE_FORMAT_VERSION
    n: int = Field(ge=1)
    poly: str
    source: str = ""
    visited: int = 0
    shard_count: int = 1
    shards: list[int] = Field(default_factory=list)
    entries: list[EntryModel] = Field(default_factory=list)


def table_to_model(table: SpectrumTable) -> TableModel:
    entries = []
    for size, cls in table.sorted_keys():
        e = table.entries[(size, cls)]
        if not e.values:
            continue
        entries.append(EntryModel(
            size=size,
            cls=cls,
            r_values=e.r_values,
            counts=dict(sorted(e.counts.items())) if e.counts is not None else None,
            witnesses={r: format_mask(w) for r, w in sorted(e.witnesses.items())},
        ))
    return TableModel(
        n=table.field.n,
        poly=f"0x{table.field.poly:X}",
        source=table.source,
        visited=table.visited,
        shard_count=table.shard_count,
        shards=sorted(table.shards),
        entries=entries,
    )


def _parse_hex(text: str, what: str) -> int:
    try:
        return int(str(text), 16)
    except ValueError:
        raise TableFormatError(f"{what} '{text}' is not a hex value") from None


def table_from_model(model: TableModel, verify: bool = True) -> SpectrumTable:
    if model.version != TABLE_FORMAT_VERSION:
        raise TableFormatError(f"unsupported table version {model.version}")
    try:
        spec = FieldSpec(model.n, _parse_hex(model.poly, "poly"))
    except FieldError as e:
        raise TableFormatError(f"bad field in table: {e}") from None
    table = SpectrumTable(
        spec,
        visited=model.visited,
        shard_count=model.shard_count,
        shards=set(model.shards),
        source=model.source,
    )
    for em in model.entries:
        if em.size > spec.order:
            raise TableFormatError(f"entry size {em.size} exceeds field order {spec.order}")
        e = table.entry(em.size, em.cls)
        e.values.update(em.r_values)
        e.witnesses.update({int(r): _parse_hex(w, "witness") for r, w in em.witnesses.items()})
        if em.counts is not None:
            e.counts = {int(r): c for r, c in em.counts.items()}
    if verify:
        problems = table.verify_witnesses()
        if problems:
            raise TableFormatError(f"witness verification failed: {problems[0]} ({len(problems)} problem(s))")
    return table


def model_from_json(text: str) -> TableModel:
    try:
        return TableModel.model_validate_json(text)
    except ValidationError as e:
        raise TableFormatError(f"table file does not match schema: {e.errors()[0].get('msg')}") from None
