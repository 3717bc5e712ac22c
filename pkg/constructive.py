"""
FILE: constructive.py
DESCRIPTION:
  Lifts a witnessed zero-free spectrum of F_{2^{n-1}} to F_{2^n} (sizes <= 2^{n-1}).
  - Every level-(n-1) witness A is embedded unchanged (first coordinate 0) and
    combined with a set B inside the upper coset {x >= e}, e = 2^{n-1}.
    For such A and B, r(A ∪ B) = r(A) + 3 r(A,B,B), so each rule knows its value.
  - Every emission is re-computed before it enters the pool; a mismatch raises
    RuleEmissionError naming the rule.
  - Rules apply in a fixed order with fixed element choices (b = e, smallest
    eligible elements, lexicographically first triples), so output is reproducible.
  - Claimed values a bounded search cannot realise become pool.findings.
  - Last, close_under_moves() adds every value one element drop, add or swap
    away from a witness (n <= config.CLOSURE_MAX_N). Sizes near 2^{n-1} depend
    on it.
"""
from __future__ import annotations

import itertools
import os
from collections import deque
from dataclasses import dataclass
from dataclasses import field as dataclass_field

import config
from enumerator import complement_nonzero_value, enumerate_zero_free, extend_full
from errors import EnumerationError, FieldError, RuleEmissionError
from gf2n import FieldSpec, format_mask, iter_bits, translate_bits
from rvalue import r_self_bits, zero_free_upper_bound
from spectrum import ZERO_FREE, SpectrumClass, SpectrumTable

BRUTE_BASE_N = 3

RULE_ORDER = (
    "R_SUMFREE",
    "R_L0",
    "R_L1",
    "R_L2_PLUS6",
    "R_L2_PLUS0",
    "R_K1",
    "R_L3_18",
    "R_L3_12",
    "R_L3_6",
    "R_L3_0",
    "R_L4_36",
    "R_L4_24",
    "R_L4_12",
    "R_L4_0",
    "R_2_5",
    "R_2K",
    "R_2K1",
    "R_MOVES",
)


@dataclass(frozen=True)
class WitnessEntry:
    n: int
    size: int
    r: int
    subset: int
    rule: str
    parent_line: int | None = None
    r_comp: int = 0  # r of the complement inside F_{2^n} minus {0}

    @property
    def key(self) -> tuple[int, int, int]:
        return self.size, self.r, self.r_comp


@dataclass
class WitnessPool:
    field: FieldSpec
    buckets: dict[tuple[int, int, int], WitnessEntry] = dataclass_field(default_factory=dict)
    findings: list[str] = dataclass_field(default_factory=list)

    @property
    def n(self) -> int:
        return self.field.n

    def emit(self, rule: str, size: int, claimed: int, subset: int,
             parent_line: int | None = None) -> WitnessEntry:
        """Verify one rule emission and store it unless its bucket is taken."""
        f = self.field
        hex_mask = format_mask(subset)
        if subset & 1 or subset & ~f.full_bits:
            raise RuleEmissionError(rule, claimed, None, hex_mask, "witness contains 0 or lies outside the field")
        if subset.bit_count() != size:
            raise RuleEmissionError(rule, claimed, None, hex_mask, f"witness has {subset.bit_count()} elements, rule claims {size}")
        computed = r_self_bits(subset, f.n)
        if computed != claimed:
            raise RuleEmissionError(rule, claimed, computed, hex_mask)
        if claimed % 6 or claimed > zero_free_upper_bound(size):
            raise RuleEmissionError(rule, claimed, computed, hex_mask, "value breaks the zero-free mod-6/upper bound")
        entry = WitnessEntry(
            n=f.n,
            size=size,
            r=claimed,
            subset=subset,
            rule=rule,
            parent_line=parent_line,
            r_comp=r_self_bits(f.nonzero_bits ^ subset, f.n),
        )
        self.buckets.setdefault(entry.key, entry)
        return entry

    def entries(self) -> list[WitnessEntry]:
        """Canonical order: (size, r, subset)."""
        return sorted(self.buckets.values(), key=lambda e: (e.size, e.r, e.subset))

    def sizes(self) -> list[int]:
        return sorted({e.size for e in self.buckets.values()})

    def values(self, size: int) -> list[int]:
        return sorted({e.r for e in self.buckets.values() if e.size == size})

    def verify(self) -> list[str]:
        problems = []
        for e in self.entries():
            got = r_self_bits(e.subset, self.field.n)
            if got != e.r or e.subset & 1 or e.subset.bit_count() != e.size:
                problems.append(f"{e.rule} size {e.size}: witness {format_mask(e.subset)} has r={got}, claimed {e.r}")
        return problems

    def to_table(self) -> SpectrumTable:
        table = SpectrumTable(self.field, source="construct")
        for e in self.entries():
            table.record(e.size, ZERO_FREE, e.r, e.subset)
        return table

    @classmethod
    def from_table(cls, table: SpectrumTable, rule: str = "BRUTE") -> "WitnessPool":
        pool = cls(table.field)
        for (size, klass), entry in sorted(table.entries.items(), key=lambda kv: kv[0][0]):
            if klass is not ZERO_FREE:
                continue
            for r in entry.r_values:
                w = entry.witnesses.get(r)
                if w is None:
                    raise EnumerationError(f"size {size} value {r} has no witness; cannot seed a pool from it")
                pool.emit(rule, size, r, w)
        return pool


# ---------------------------------------------------------------------------
# Element choices
# ---------------------------------------------------------------------------

def first_block(bits: int) -> tuple[int, int, int] | None:
    """Lexicographically first (a < b < c) in bits with a ^ b = c."""
    elems = list(iter_bits(bits))
    for i, a in enumerate(elems):
        for b in elems[i + 1:]:
            c = a ^ b
            if c > b and (bits >> c) & 1:
                return a, b, c
    return None


def first_open_pair(bits: int) -> tuple[int, int] | None:
    """First (a1 < a2) in bits whose sum is outside bits."""
    elems = list(iter_bits(bits))
    for i, a in enumerate(elems):
        for b in elems[i + 1:]:
            if not (bits >> (a ^ b)) & 1:
                return a, b
    return None


def first_pair_summing_into(pair_bits: int, target_bits: int) -> tuple[int, int] | None:
    """First (x < y) in pair_bits with x ^ y in target_bits."""
    elems = list(iter_bits(pair_bits))
    for i, x in enumerate(elems):
        for y in elems[i + 1:]:
            if (target_bits >> (x ^ y)) & 1:
                return x, y
    return None


def _shifted(elements, e: int) -> int:
    bits = 0
    for x in elements:
        bits |= 1 << (x ^ e)
    return bits


def k1_witness(field: FieldSpec, m: int, i: int) -> int:
    """{1} plus i pairs {e+2t, e+2t+1} (t < i) plus single elements e+2t (t >= i); r = 6i."""
    e = field.half
    bits = 1 << 1
    for t in range(i):
        bits |= 0b11 << (e + 2 * t)
    for t in range(i, i + m - 1 - 2 * i):
        bits |= 1 << (e + 2 * t)
    return bits


def k1_range(n: int, m: int) -> range:
    """Values i (r = 6i) claimed for one subfield element plus m-1 upper-coset elements."""
    quarter = 1 << (n - 2)
    lo = max(0, (m - 1) - quarter)
    return range(lo, (m - 1) // 2 + 1)


def size7_targets(n: int) -> set[int]:
    if n < 4:
        return set()
    return {0, 12, 18, 24} if n == 4 else {0, 6, 12, 18, 24}


# ---------------------------------------------------------------------------
# Lift
# ---------------------------------------------------------------------------

def extend_pool(pool: WitnessPool) -> WitnessPool:
    """Add sizes 2^{n-1}+1 .. 2^n-1 through complements inside F_{2^n} minus {0}."""
    f = pool.field
    g, h = f.order, f.half
    out = WitnessPool(f, dict(pool.buckets), list(pool.findings))
    for e in pool.entries():
        k = g - 1 - e.size
        if h < k <= g - 1:
            out.emit("COMPLEMENT_NONZERO", k, complement_nonzero_value(g, e.size, e.r), f.nonzero_bits ^ e.subset)
    return out


def lift(prev: WitnessPool, field: FieldSpec | None = None) -> WitnessPool:
    """Level-n pool (sizes 0..2^{n-1}) from a level-(n-1) pool covering sizes 0..2^{n-2}."""
    lower = prev.field
    field = field or FieldSpec.of(lower.n + 1)
    if field.n != lower.n + 1:
        raise FieldError(f"cannot lift F_2^{lower.n} to F_2^{field.n}")
    n, e = field.n, field.half
    missing = [k for k in range(lower.half + 1) if not prev.values(k)]
    if missing:
        raise EnumerationError(f"level {lower.n} pool lacks sizes {missing}")

    source = extend_pool(prev).entries()
    sub_nonzero = lower.nonzero_bits
    out = WitnessPool(field)
    print(f"[LIFT] n={lower.n} -> n={n}: {len(source)} source witness(es)")

    def fits(size):
        return size <= e

    for rule in RULE_ORDER:
        before = len(out.buckets)

        if rule == "R_SUMFREE":
            for m in range(e + 1):
                out.emit(rule, m, 0, ((1 << m) - 1) << e)

        elif rule == "R_K1":
            for m in range(1, e + 1):
                for i in k1_range(n, m):
                    out.emit(rule, m, 6 * i, k1_witness(field, m, i))

        elif rule == "R_2_5":
            _size7_search(out, source)

        elif rule == "R_MOVES":
            if n <= int(config.CLOSURE_MAX_N):
                close_under_moves(out, rule)
            else:
                print(f"[LIFT] DEBUG: {rule}: skipped above n={config.CLOSURE_MAX_N}")

        else:
            for line, w in enumerate(source):
                _apply(rule, out, w, line, e, sub_nonzero, fits)

        print(f"[LIFT] DEBUG: {rule}: {len(out.buckets) - before} new bucket(s)")

    for msg in out.findings:
        print(f"[LIFT] WARNING: {msg}")
    print(f"[LIFT] n={n}: {len(out.buckets)} witness(es) over sizes 0..{e}")
    return out


def _apply(rule, out, w, line, e, sub_nonzero, fits):
    A, k, ra = w.subset, w.size, w.r
    comp = sub_nonzero ^ A
    m = comp.bit_count()
    rc = w.r_comp

    def emit(size, value, bits):
        if fits(size):
            out.emit(rule, size, value, A | bits, line)

    # preconditions shared by the triple rules
    has_block = ra > 0 and k >= 3
    has_open_pair = k >= 2 and ra != k * (k - 1)
    comp_pair_ok = 0 < k < e - 3 and rc != m * (m - 1)
    comp_block_ok = k < e - 4 and rc > 0

    if rule == "R_L0":
        emit(k, ra, 0)
    elif rule == "R_L1":
        emit(k + 1, ra, 1 << e)
    elif rule == "R_L2_PLUS6":
        if k >= 2:
            a = min(iter_bits(A))
            emit(k + 2, ra + 6, (1 << e) | (1 << (e ^ a)))
    elif rule == "R_L2_PLUS0":
        if 2 <= k <= e - 2:
            a = min(iter_bits(comp))
            emit(k + 2, ra, (1 << e) | (1 << (e ^ a)))
    elif rule in ("R_L3_18", "R_L4_36"):
        if has_block:
            blk = first_block(A)
            extra = 3 if rule == "R_L3_18" else 4
            gain = 18 if rule == "R_L3_18" else 36
            emit(k + extra, ra + gain, _shifted(blk, e) | (0 if extra == 3 else 1 << e))
    elif rule in ("R_L3_12", "R_L4_24"):
        if has_open_pair:
            a1, a2 = first_open_pair(A)
            extra = 3 if rule == "R_L3_12" else 4
            gain = 12 if rule == "R_L3_12" else 24
            emit(k + extra, ra + gain, _shifted((a1, a2, a1 ^ a2), e) | (0 if extra == 3 else 1 << e))
    elif rule in ("R_L3_6", "R_L4_12"):
        if comp_pair_ok:
            pair = first_pair_summing_into(comp, A)
            if pair is None:
                out.findings.append(f"{rule}: no pair of the complement sums into {format_mask(A)}")
                return
            x, y = pair
            extra = 3 if rule == "R_L3_6" else 4
            gain = 6 if rule == "R_L3_6" else 12
            emit(k + extra, ra + gain, _shifted((x, y, x ^ y), e) | (0 if extra == 3 else 1 << e))
    elif rule in ("R_L3_0", "R_L4_0"):
        if comp_block_ok:
            blk = first_block(comp)
            extra = 3 if rule == "R_L3_0" else 4
            emit(k + extra, ra, _shifted(blk, e) | (0 if extra == 3 else 1 << e))
    elif rule == "R_2K":
        if k >= 3:
            emit(2 * k, 4 * ra, translate_bits(A, e, out.field.n))
    elif rule == "R_2K1":
        if k >= 1:
            emit(2 * k + 1, 4 * ra + 6 * k, (1 << e) | translate_bits(A, e, out.field.n))


def _size7_search(out: WitnessPool, source: list[WitnessEntry]) -> None:
    """Two subfield elements plus five upper-coset elements containing e.

    With c(x) = number of pairs in B summing to x, r = 6 (c(a1) + c(a2)).
    """
    field = out.field
    targets = size7_targets(field.n)
    if not targets or field.half < 7:
        return
    pairs = [(line, w) for line, w in enumerate(source) if w.size == 2]
    if not pairs:
        out.findings.append("R_2_5: no size-2 source witness")
        return
    line, w = pairs[0]
    a1, a2 = iter_bits(w.subset)
    e = field.half
    limit = int(config.PATTERN_SEARCH_LIMIT)
    found: set[int] = set()
    examined = 0
    for rest in itertools.combinations(range(e + 1, field.order), 4):
        if examined >= limit or found >= targets:
            break
        examined += 1
        b = (e,) + rest
        c1 = c2 = 0
        for x, y in itertools.combinations(b, 2):
            s = x ^ y
            c1 += s == a1
            c2 += s == a2
        value = 6 * (c1 + c2)
        if value in found:
            continue
        found.add(value)
        bits = w.subset
        for x in b:
            bits |= 1 << x
        out.emit("R_2_5", 7, value, bits, line)
        if value not in targets:
            out.findings.append(f"R_2_5: size-7 value {value} realised outside the claimed set {sorted(targets)}")
    for value in sorted(targets - found):
        out.findings.append(
            f"R_2_5: size-7 value {value} not realised within {examined} pattern(s) (limit {limit})"
        )


def _pair_sums(bits: int, order: int) -> list[int]:
    """c[y] = number of pairs {a, b} in bits with a ^ b = y."""
    elems = list(iter_bits(bits))
    c = [0] * order
    for i, a in enumerate(elems):
        for b in elems[i + 1:]:
            c[a ^ b] += 1
    return c


def _moves(w: WitnessEntry, field: FieldSpec):
    """(size, r, subset) one step from w: drop x, add y, swap x for y, or the complement.

    A zero-free set has r = 6 T (T closed triples). With c = _pair_sums(A),
    c[x] for x in A is the number of triples through x, and c[y] for y outside
    A the number of triples adding y closes.
    """
    g, h = field.order, field.half
    A, k, t = w.subset, w.size, w.r // 6
    c = _pair_sums(A, g)
    inside = list(iter_bits(A))
    outside = [y for y in range(1, g) if not (A >> y) & 1]
    if g - 1 - k <= h:
        yield g - 1 - k, complement_nonzero_value(g, k, w.r), field.nonzero_bits ^ A
    for x in inside:
        yield k - 1, 6 * (t - c[x]), A ^ (1 << x)
    for y in outside:
        yield k + 1, 6 * (t + c[y]), A | (1 << y)
    for x in inside:
        kept = t - c[x]
        for y in outside:
            # the pair {x, x ^ y} no longer closes a triple with y
            yield k, 6 * (kept + c[y] - ((A >> (x ^ y)) & 1)), A ^ (1 << x) ^ (1 << y)


def close_under_moves(pool: WitnessPool, rule: str = "R_MOVES") -> int:
    """Grow the pool to a fixed point under single-element moves.

    Every witness is expanded once; a move that lands above 2^{n-1} elements is
    folded back through the complement inside F_{2^n} minus {0}. Returns the
    number of new buckets.
    """
    field = pool.field
    g, h = field.order, field.half
    seen = {(e.size, e.r) for e in pool.buckets.values()}
    queue = deque(pool.entries())
    added = 0
    while queue:
        w = queue.popleft()
        for size, value, bits in _moves(w, field):
            if size > h:
                value = complement_nonzero_value(g, size, value)
                size, bits = g - 1 - size, field.nonzero_bits ^ bits
            if (size, value) in seen:
                continue
            seen.add((size, value))
            queue.append(pool.emit(rule, size, value, bits))
            added += 1
    return added


# ---------------------------------------------------------------------------
# Spectrum assembly and comparison
# ---------------------------------------------------------------------------

def assemble_full(pool: WitnessPool) -> SpectrumTable:
    """Full spectrum from a pool covering sizes 0..2^{n-1} (same extension as the sweep)."""
    gaps = [k for k in range(pool.field.half + 1) if not pool.values(k)]
    if gaps:
        raise EnumerationError(f"pool has no witnesses for sizes {gaps}")
    return extend_full(pool.to_table())


@dataclass
class CompareRow:
    size: int
    cls: SpectrumClass
    only_a: list[int]
    only_b: list[int]
    shared: list[int]

    @property
    def differs(self) -> bool:
        return bool(self.only_a or self.only_b)


@dataclass
class CompareReport:
    n: int
    rows: list[CompareRow]

    @property
    def identical(self) -> bool:
        return not any(r.differs for r in self.rows)

    @property
    def only_a_count(self) -> int:
        return sum(len(r.only_a) for r in self.rows)

    @property
    def only_b_count(self) -> int:
        return sum(len(r.only_b) for r in self.rows)

    def differences(self) -> list[CompareRow]:
        return [r for r in self.rows if r.differs]


def compare(a: SpectrumTable, b: SpectrumTable, classes: tuple[SpectrumClass, ...] | None = None) -> CompareReport:
    """Per (size, class): values only in a, only in b, in both."""
    if a.n != b.n:
        raise FieldError(f"cannot compare tables for n={a.n} and n={b.n}")
    keys = set(a.entries) | set(b.entries)
    if classes is not None:
        keys = {k for k in keys if k[1] in classes}
    order = {SpectrumClass.ZERO_FREE: 0, SpectrumClass.CONTAINS_ZERO: 1}
    rows = []
    for size, cls in sorted(keys, key=lambda k: (k[0], order[k[1]])):
        va, vb = set(a.values(size, cls)), set(b.values(size, cls))
        rows.append(CompareRow(size, cls, sorted(va - vb), sorted(vb - va), sorted(va & vb)))
    return CompareReport(a.n, rows)


# ---------------------------------------------------------------------------
# Bootstrap
# ---------------------------------------------------------------------------

def base_pool(n: int = BRUTE_BASE_N) -> WitnessPool:
    """Pool for a small field straight from the exhaustive sweep."""
    if n > BRUTE_BASE_N:
        raise EnumerationError(f"base pools come from n <= {BRUTE_BASE_N} sweeps")
    table = enumerate_zero_free(n)
    return WitnessPool.from_table(table)


def bootstrap(n: int, cache_dir: str | None = None) -> WitnessPool:
    """Level-n pool, lifted level by level from the n=3 sweep (cached as JSON lines when cache_dir is set)."""
    from spectrum_io import read_pool, write_pool

    if n <= BRUTE_BASE_N:
        return base_pool(n)

    path = os.path.join(cache_dir, f"pool-n{n}.jsonl") if cache_dir else None
    if path and os.path.exists(path):
        pool = read_pool(path)
        if pool.n == n:
            print(f"[POOL] Loaded cached level-{n} pool from {path}")
            return pool
    prev = bootstrap(n - 1, cache_dir)
    pool = lift(prev)
    if path:
        write_pool(pool, path)
        print(f"[POOL] Cached level-{n} pool at {path}")
    return pool
