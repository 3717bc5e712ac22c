"""
FILE: reference_tables.py
DESCRIPTION:
  Published anchor data and the checks run against it.
  - TABLE1: zero-free r-values of m-subsets of F_16 minus {0} (m = 5, 6, 7),
    split as k elements of F_8 minus {0} plus l elements of the upper coset,
    and the printed "Spectrum" column for each m.
  - TABLE2_PATH: size,r CSV of published zero-free values for F_64.
  - split_values(): per (k, l) split, the values actually achieved at n=4.
  - table1_report(): row-by-row and column diff against a computed n=4 table,
    flagging printed values that break the zero-free bound or the zero-added shift.
"""
from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field as dataclass_field

from errors import FieldError
from gf2n import FieldSpec
from rvalue import r_self_bits, zero_free_upper_bound
from spectrum import CONTAINS_ZERO, ZERO_FREE, SpectrumTable

TABLE1_N = 4

# m -> {(k, l): printed r(S) values}
TABLE1_ROWS: dict[int, dict[tuple[int, int], frozenset[int]]] = {
    5: {
        (0, 5): frozenset({0}),
        (1, 4): frozenset({0, 6, 12}),
        (2, 3): frozenset({0, 6, 12}),
        (3, 2): frozenset({0, 6, 12}),
        (4, 1): frozenset({0, 6}),
        (5, 0): frozenset({12}),
    },
    6: {
        (0, 6): frozenset({0}),
        (1, 5): frozenset({6, 12}),
        (2, 4): frozenset({0, 12, 24}),
        (3, 3): frozenset({6, 12, 24}),
        (4, 2): frozenset({0, 6, 12}),
        (5, 1): frozenset({12}),
        (6, 0): frozenset({24}),
    },
    7: {
        (0, 7): frozenset({0}),
        (1, 6): frozenset({12, 18}),
        (2, 5): frozenset({0, 12, 18, 24}),
        (3, 4): frozenset({18, 24, 42}),
        (4, 3): frozenset({12, 18, 24}),
        (5, 2): frozenset({12, 18}),
        (6, 1): frozenset({24}),
        (7, 0): frozenset({42}),
    },
}

# m -> printed "Spectrum" column, as transcribed
TABLE1_SPECTRUM: dict[int, frozenset[int]] = {
    5: frozenset({0, 6, 12, 13, 19}),
    6: frozenset({0, 12, 18, 24, 42, 19, 25, 31, 43}),
    7: frozenset({0, 18, 24, 30, 42, 22, 34, 40, 46, 64}),
}

TABLE2_N = 6
TABLE2_PATH = os.path.join(os.path.dirname(os.path.abspath(__file__)), "data", "table2_f64.csv")


def table1_row_union(m: int) -> set[int]:
    return set().union(*TABLE1_ROWS[m].values())


def split_values(field: FieldSpec, m: int) -> dict[tuple[int, int], set[int]]:
    """Achieved r per (k, l) over all zero-free m-subsets of F_2^n."""
    h = field.half
    lower = range(1, h)
    upper = range(h, field.order)
    out: dict[tuple[int, int], set[int]] = {}
    for k in range(0, min(m, h - 1) + 1):
        l = m - k
        if l > h:
            continue
        values = out.setdefault((k, l), set())
        uppers = [sum(1 << x for x in c) for c in itertools.combinations(upper, l)]
        for a in itertools.combinations(lower, k):
            abits = sum(1 << x for x in a)
            for bbits in uppers:
                values.add(r_self_bits(abits | bbits, field.n))
    return out


@dataclass
class RowCheck:
    m: int
    k: int
    l: int
    printed: list[int]
    computed: list[int]

    @property
    def matches(self) -> bool:
        return self.printed == self.computed


@dataclass
class ColumnCheck:
    m: int
    printed: list[int]
    computed: list[int]
    over_bound: list[int] = dataclass_field(default_factory=list)
    not_zero_added: list[int] = dataclass_field(default_factory=list)

    @property
    def only_printed(self) -> list[int]:
        return sorted(set(self.printed) - set(self.computed))

    @property
    def only_computed(self) -> list[int]:
        return sorted(set(self.computed) - set(self.printed))

    @property
    def flagged(self) -> bool:
        return bool(self.over_bound or self.not_zero_added or self.only_printed or self.only_computed)


@dataclass
class Table1Report:
    rows: list[RowCheck]
    columns: list[ColumnCheck]
    union_mismatch: dict[int, tuple[list[int], list[int]]]

    @property
    def row_mismatches(self) -> list[RowCheck]:
        return [r for r in self.rows if not r.matches]

    @property
    def flagged_columns(self) -> list[ColumnCheck]:
        return [c for c in self.columns if c.flagged]

    def lines(self) -> list[str]:
        out = []
        for m, (printed, computed) in sorted(self.union_mismatch.items()):
            out.append(f"m={m}: row union {printed} != computed zero-free {computed}")
        for r in self.row_mismatches:
            out.append(f"m={r.m} (k={r.k}, l={r.l}): printed {r.printed}, computed {r.computed}")
        for c in self.columns:
            if not c.flagged:
                out.append(f"m={c.m}: spectrum column matches")
                continue
            if c.over_bound:
                out.append(
                    f"m={c.m}: spectrum column lists {c.over_bound} above the zero-free bound "
                    f"{zero_free_upper_bound(c.m)}"
                )
            if c.not_zero_added:
                out.append(f"m={c.m}: spectrum column lists {c.not_zero_added}, not zero-added images of size {c.m - 1}")
            if c.only_printed:
                out.append(f"m={c.m}: printed only {c.only_printed}")
            if c.only_computed:
                out.append(f"m={c.m}: computed only {c.only_computed}")
        return out


def table1_report(table: SpectrumTable) -> Table1Report:
    """Diff a computed F_16 table (zero-free sizes 4..7 and contains-zero 5..7 needed) against Table 1."""
    if table.n != TABLE1_N:
        raise FieldError(f"Table 1 describes F_2^{TABLE1_N}, got a table for n={table.n}")
    rows: list[RowCheck] = []
    columns: list[ColumnCheck] = []
    union_mismatch: dict[int, tuple[list[int], list[int]]] = {}

    for m in sorted(TABLE1_ROWS):
        achieved = split_values(table.field, m)
        for (k, l), printed in sorted(TABLE1_ROWS[m].items()):
            rows.append(RowCheck(m, k, l, sorted(printed), sorted(achieved.get((k, l), set()))))

        union = sorted(table1_row_union(m))
        zero_free = table.values(m, ZERO_FREE)
        if union != zero_free:
            union_mismatch[m] = (union, zero_free)

        printed_col = TABLE1_SPECTRUM[m]
        bound = zero_free_upper_bound(m)
        zero_added = {r + 3 * (m - 1) + 1 for r in table.values(m - 1, ZERO_FREE)}
        col = ColumnCheck(
            m,
            sorted(printed_col),
            sorted(set(table.values(m, ZERO_FREE)) | set(table.values(m, CONTAINS_ZERO))),
            over_bound=sorted(v for v in printed_col if v % 6 == 0 and v > bound),
            not_zero_added=sorted(v for v in printed_col if v % 6 and v not in zero_added),
        )
        columns.append(col)

    report = Table1Report(rows, columns, union_mismatch)
    for line in report.lines():
        tag = "WARNING: " if "matches" not in line else ""
        print(f"[TABLE1] {tag}{line}")
    return report
