"""
FILE: gf2n.py
DESCRIPTION:
  Elements and subsets of F_{2^n}.
  - Elements are plain ints in [0, 2^n). Bit n-1 is the first coordinate, so the
    embedded F_{2^{n-1}} is exactly {0, ..., 2^{n-1}-1} and e = 2^{n-1} is the
    distinguished element [1,0,...,0].
  - SubsetMask packs a subset into one Python int: element i present iff bit i set.
  - multiply()/trace() use the polynomial basis of FieldSpec.poly; everything
    else is additive and basis-free.
  - parse_subset()/format_mask(): the "1,2,3" / "0x0E" text syntax.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator

import config
from errors import FieldError, HypothesisError, SubsetSyntaxError

MAX_N = 16

# Element type: an int in [0, 2^n).
FieldElement = int

# bit i = coefficient of x^i
DEFAULT_POLYS = {
    1: 0b11,            # x + 1
    2: 0b111,           # x^2 + x + 1
    3: 0b1011,          # x^3 + x + 1
    4: 0b10011,         # x^4 + x + 1
    5: 0b100101,        # x^5 + x^2 + 1
    6: 0b1000011,       # x^6 + x + 1
    7: 0b10000011,      # x^7 + x + 1
    8: 0b100011011,     # x^8 + x^4 + x^3 + x + 1
}


# ---------------------------------------------------------------------------
# Polynomials over F_2
# ---------------------------------------------------------------------------

def poly_mod(a: int, mod: int) -> int:
    """Remainder of a modulo mod, both polynomials over F_2 packed as ints."""
    mod_bitlen = mod.bit_length()
    a_bitlen = a.bit_length()
    if a_bitlen < mod_bitlen:
        return a
    m = mod << (a_bitlen - mod_bitlen)
    bit = 1 << (a_bitlen - 1)
    while m >= mod:
        if a & bit:
            a ^= m
        bit >>= 1
        m >>= 1
    return a


@lru_cache(maxsize=None)
def is_irreducible(poly: int) -> bool:
    """Exhaustive factor check: no polynomial of degree 1..deg/2 divides poly."""
    deg = poly.bit_length() - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for f in range(1 << d, 1 << (d + 1)):
            if poly_mod(poly, f) == 0:
                return False
    return True


def smallest_irreducible(n: int) -> int:
    """Lexicographically smallest irreducible polynomial of degree n."""
    for p in range(1 << n, 1 << (n + 1)):
        if is_irreducible(p):
            return p
    raise FieldError(f"no irreducible polynomial of degree {n}")  # pragma: no cover


def default_poly(n: int) -> int:
    """Configured override, else the built-in table, else a searched polynomial."""
    overrides = getattr(config, "POLY_OVERRIDES", {}) or {}
    if n in overrides:
        return int(overrides[n])
    if n in DEFAULT_POLYS:
        return DEFAULT_POLYS[n]
    if not 1 <= n <= MAX_N:
        raise FieldError(f"n={n} is outside the supported range 1..{MAX_N}")
    poly = smallest_irreducible(n)
    print(f"[FIELD] WARNING: no default polynomial for n={n}; using smallest irreducible 0x{poly:X}")
    return poly


# ---------------------------------------------------------------------------
# Field
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FieldSpec:
    """The ambient field F_{2^n} with the polynomial used for trace."""

    n: int
    poly: int

    def __post_init__(self):
        if not isinstance(self.n, int) or not 1 <= self.n <= MAX_N:
            raise FieldError(f"n={self.n} is outside the supported range 1..{MAX_N}")
        if self.poly.bit_length() - 1 != self.n:
            raise FieldError(f"polynomial 0x{self.poly:X} does not have degree {self.n}")
        if not is_irreducible(self.poly):
            raise FieldError(f"polynomial 0x{self.poly:X} is reducible over F_2")

    @classmethod
    def of(cls, n: int, poly: int | None = None) -> "FieldSpec":
        return cls(n, default_poly(n) if poly is None else poly)

    @property
    def order(self) -> int:
        return 1 << self.n

    @property
    def half(self) -> int:
        """2^{n-1}: size of the embedded subfield, and the element e."""
        return 1 << (self.n - 1)

    @property
    def e(self) -> int:
        return self.half

    @property
    def full_bits(self) -> int:
        return (1 << self.order) - 1

    @property
    def nonzero_bits(self) -> int:
        return self.full_bits ^ 1

    @property
    def subfield_bits(self) -> int:
        """The embedded F_{2^{n-1}} (first coordinate 0)."""
        return (1 << self.half) - 1

    @property
    def upper_coset_bits(self) -> int:
        """F_{2^n} minus F_{2^{n-1}} (first coordinate 1)."""
        return self.full_bits ^ self.subfield_bits

    def check_element(self, x: int) -> int:
        if not 0 <= x < self.order:
            raise FieldError(f"element {x} is not in F_2^{self.n}")
        return x


def coordinates(x: int, n: int) -> list[int]:
    """[a_1, ..., a_n] with a_1 the most significant bit."""
    return [(x >> (n - 1 - i)) & 1 for i in range(n)]


def add(x: int, y: int) -> int:
    return x ^ y


def multiply(x: int, y: int, spec: FieldSpec) -> int:
    """Carry-less product reduced modulo spec.poly (shift-and-add)."""
    spec.check_element(x)
    spec.check_element(y)
    n, poly = spec.n, spec.poly
    acc = 0
    while y:
        if y & 1:
            acc ^= x
        y >>= 1
        x <<= 1
        if (x >> n) & 1:
            x ^= poly
    return acc


def trace(x: int, spec: FieldSpec) -> int:
    """x + x^2 + x^4 + ... + x^{2^{n-1}}; always 0 or 1."""
    t = spec.check_element(x)
    acc = t
    for _ in range(spec.n - 1):
        t = multiply(t, t, spec)
        acc ^= t
    if acc not in (0, 1):  # pragma: no cover
        raise FieldError(f"trace of {x} evaluated to {acc}; polynomial 0x{spec.poly:X} is not a field")
    return acc


# ---------------------------------------------------------------------------
# Raw bitset helpers (hot paths use these directly)
# ---------------------------------------------------------------------------

def iter_bits(bits: int) -> Iterator[int]:
    """Indices of set bits, ascending."""
    while bits:
        low = bits & -bits
        yield low.bit_length() - 1
        bits ^= low


@lru_cache(maxsize=None)
def _swap_masks(n: int) -> tuple[int, ...]:
    # masks[j] selects positions whose index has bit j clear
    masks = []
    for j in range(n):
        s = 1 << j
        block = (1 << s) - 1
        m = 0
        for start in range(0, 1 << n, 2 * s):
            m |= block << start
        masks.append(m)
    return tuple(masks)


def translate_bits(bits: int, x: int, n: int) -> int:
    """Bit permutation i -> i XOR x, as one masked swap per set bit of x."""
    masks = _swap_masks(n)
    j = 0
    while x:
        if x & 1:
            s = 1 << j
            m = masks[j]
            bits = ((bits & m) << s) | ((bits >> s) & m)
        x >>= 1
        j += 1
    return bits


def format_mask(bits: int) -> str:
    return f"0x{bits:02X}"


def format_elements(bits: int) -> str:
    return "{" + ",".join(str(i) for i in iter_bits(bits)) + "}"


# ---------------------------------------------------------------------------
# Subsets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SubsetMask:
    field: FieldSpec
    bits: int

    def __post_init__(self):
        if self.bits < 0 or self.bits > self.field.full_bits:
            raise FieldError(
                f"mask {format_mask(self.bits)} has bits outside F_2^{self.field.n}"
            )

    @classmethod
    def from_elements(cls, field: FieldSpec, elements: Iterable[int]) -> "SubsetMask":
        bits = 0
        for x in elements:
            bits |= 1 << field.check_element(x)
        return cls(field, bits)

    @classmethod
    def empty(cls, field: FieldSpec) -> "SubsetMask":
        return cls(field, 0)

    @classmethod
    def whole(cls, field: FieldSpec) -> "SubsetMask":
        return cls(field, field.full_bits)

    def elements(self) -> list[int]:
        return list(iter_bits(self.bits))

    @property
    def cardinality(self) -> int:
        return self.bits.bit_count()

    @property
    def has_zero(self) -> bool:
        return bool(self.bits & 1)

    def __len__(self) -> int:
        return self.cardinality

    def __iter__(self) -> Iterator[int]:
        return iter_bits(self.bits)

    def __contains__(self, x: int) -> bool:
        return 0 <= x < self.field.order and bool((self.bits >> x) & 1)

    def with_element(self, x: int) -> "SubsetMask":
        return SubsetMask(self.field, self.bits | (1 << self.field.check_element(x)))

    def without_element(self, x: int) -> "SubsetMask":
        return SubsetMask(self.field, self.bits & ~(1 << self.field.check_element(x)))

    def union(self, other: "SubsetMask") -> "SubsetMask":
        same_field(self, other)
        return SubsetMask(self.field, self.bits | other.bits)

    def hex(self) -> str:
        return format_mask(self.bits)

    def __str__(self) -> str:
        return format_elements(self.bits)


def same_field(*sets: SubsetMask) -> FieldSpec:
    """Common field of the given subsets; FieldError when they disagree on n."""
    field = sets[0].field
    for s in sets[1:]:
        if s.field.n != field.n:
            raise FieldError(
                f"subsets live in different fields (F_2^{field.n} vs F_2^{s.field.n})"
            )
    return field


def translate(A: SubsetMask, x: int) -> SubsetMask:
    """{a + x : a in A}."""
    A.field.check_element(x)
    return SubsetMask(A.field, translate_bits(A.bits, x, A.field.n))


def complement(A: SubsetMask) -> SubsetMask:
    return SubsetMask(A.field, A.field.full_bits ^ A.bits)


def complement_nonzero(A: SubsetMask) -> SubsetMask:
    """Complement inside F_{2^n} minus {0}; A must not contain 0."""
    if A.has_zero:
        raise HypothesisError("complement_nonzero needs a set without 0")
    return SubsetMask(A.field, A.field.nonzero_bits ^ A.bits)


def embed(A: SubsetMask, target: FieldSpec) -> SubsetMask:
    """Same elements viewed in a larger field (prefixing coordinates with 0)."""
    if target.n < A.field.n:
        raise FieldError(f"cannot embed F_2^{A.field.n} into F_2^{target.n}")
    return SubsetMask(target, A.bits)


def upper_coset(field: FieldSpec) -> SubsetMask:
    return SubsetMask(field, field.upper_coset_bits)


def trace_one_set(field: FieldSpec) -> SubsetMask:
    """{a : Tr(a) = 1}, the sum-free affine hyperplane."""
    return SubsetMask.from_elements(field, (a for a in range(field.order) if trace(a, field) == 1))


# ---------------------------------------------------------------------------
# Text syntax
# ---------------------------------------------------------------------------

def parse_subset(text: str, field: FieldSpec) -> SubsetMask:
    """Parse "1,2,3" (decimal elements) or "0x0E" (hex mask) into a SubsetMask."""
    s = str(text or "").strip()
    if s.lower().startswith("0x"):
        try:
            bits = int(s, 16)
        except ValueError:
            raise SubsetSyntaxError(f"'{s}' is not a hex mask") from None
        if bits > field.full_bits:
            raise SubsetSyntaxError(
                f"mask {s} has bits beyond position {field.order - 1} (F_2^{field.n})"
            )
        return SubsetMask(field, bits)

    s = s.strip("{}").strip()
    bits = 0
    for tok in s.split(","):
        tok = tok.strip()
        if not tok:
            continue
        if not tok.isdigit():
            raise SubsetSyntaxError(f"'{tok}' is not a decimal element")
        v = int(tok)
        if v >= field.order:
            raise SubsetSyntaxError(f"element {v} is not in F_2^{field.n} (must be < {field.order})")
        bits |= 1 << v
    return SubsetMask(field, bits)
