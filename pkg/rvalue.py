"""
FILE: rvalue.py
DESCRIPTION:
  r-values, R-sets, single-element deltas and Steiner blocks.
  - r_abc(A,B,C): ordered pairs (a,b) in A x B with a + b in C.
      Row sweep: sum over a in A of popcount(B & (C + a)).
  - r(A) = r_abc(A,A,A).
  - delta_add()/delta_remove(): change of r(A) when one element is toggled.
  - steiner_blocks(): the closed triples {a,b,a+b} of a zero-free set
    (6 * #blocks = r(A)).
  The *_bits functions take raw ints and are what the enumerator's inner loop calls.
"""
from __future__ import annotations

from typing import NamedTuple

from errors import HypothesisError
from gf2n import SubsetMask, iter_bits, same_field, translate_bits


class RTriple(NamedTuple):
    """One element of R(A,B,C): a + b = c."""

    a: int
    b: int
    c: int


class SteinerBlock(NamedTuple):
    """Unordered closed triple, stored ascending (a < b < c, a ^ b == c)."""

    a: int
    b: int
    c: int

    @property
    def elements(self) -> frozenset[int]:
        return frozenset((self.a, self.b, self.c))


# ---------------------------------------------------------------------------
# Raw bitset kernels
# ---------------------------------------------------------------------------

def r_bits(a_bits: int, b_bits: int, c_bits: int, n: int) -> int:
    total = 0
    for a in iter_bits(a_bits):
        total += (b_bits & translate_bits(c_bits, a, n)).bit_count()
    return total


def r_self_bits(bits: int, n: int) -> int:
    return r_bits(bits, bits, bits, n)


def overlap_bits(bits: int, x: int, n: int) -> int:
    """|A ∩ (A + x)|."""
    return (bits & translate_bits(bits, x, n)).bit_count()


def delta_add_bits(bits: int, x: int, n: int) -> int:
    if x == 0:
        return 3 * bits.bit_count() + 1
    return 3 * overlap_bits(bits, x, n) + (3 if bits & 1 else 0)


def delta_remove_bits(bits: int, x: int, n: int) -> int:
    return -delta_add_bits(bits & ~(1 << x), x, n)


# ---------------------------------------------------------------------------
# SubsetMask API
# ---------------------------------------------------------------------------

def r_abc(A: SubsetMask, B: SubsetMask, C: SubsetMask) -> int:
    field = same_field(A, B, C)
    # iterate over the smaller of A, B (r_abc is symmetric in them)
    if A.cardinality > B.cardinality:
        A, B = B, A
    return r_bits(A.bits, B.bits, C.bits, field.n)


def r(A: SubsetMask) -> int:
    return r_self_bits(A.bits, A.field.n)


def r_set(A: SubsetMask, B: SubsetMask, C: SubsetMask) -> list[RTriple]:
    """All (a, b, c) with a in A, b in B, c in C and a + b = c, sorted."""
    same_field(A, B, C)
    out = []
    for a in iter_bits(A.bits):
        for b in iter_bits(B.bits):
            c = a ^ b
            if (C.bits >> c) & 1:
                out.append(RTriple(a, b, c))
    return out


def delta_add(A: SubsetMask, x: int) -> int:
    """r(A ∪ {x}) - r(A) for x not in A."""
    A.field.check_element(x)
    if x in A:
        raise HypothesisError(f"delta_add: {x} is already in {A}")
    return delta_add_bits(A.bits, x, A.field.n)


def delta_remove(A: SubsetMask, x: int) -> int:
    """r(A \\ {x}) - r(A) for x in A."""
    A.field.check_element(x)
    if x not in A:
        raise HypothesisError(f"delta_remove: {x} is not in {A}")
    return delta_remove_bits(A.bits, x, A.field.n)


def steiner_blocks(A: SubsetMask) -> list[SteinerBlock]:
    if A.has_zero:
        raise HypothesisError("steiner_blocks needs a set without 0")
    bits = A.bits
    blocks = []
    elems = A.elements()
    for i, a in enumerate(elems):
        for b in elems[i + 1:]:
            c = a ^ b
            if c > b and (bits >> c) & 1:
                blocks.append(SteinerBlock(a, b, c))
    return blocks


def is_partial_steiner_system(blocks: list[SteinerBlock]) -> bool:
    """Every pair of points lies in at most one block."""
    seen: set[tuple[int, int]] = set()
    for blk in blocks:
        for pair in ((blk.a, blk.b), (blk.a, blk.c), (blk.b, blk.c)):
            if pair in seen:
                return False
            seen.add(pair)
    return True


def zero_free_upper_bound(k: int) -> int:
    """Largest possible r-value of a zero-free k-set: floor(k(k-1)/6) * 6."""
    return (k * (k - 1) // 6) * 6 if k > 0 else 0
