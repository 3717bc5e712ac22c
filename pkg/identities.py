"""
FILE: identities.py
DESCRIPTION:
  Closed-form r-value identities and bounds as checkable evaluators.
  - check_identity(id, *subsets) -> IdentityReport(expected, computed).
    Inputs that break an identity's hypotheses raise HypothesisError;
    a report with expected != computed is a genuine failure.
  - Bounds are reported as an excess (or shortfall) whose expected value is 0.
  - run_sweep(): seeded random (or exhaustive, n <= 2) sweep over every
    identity. Shared by the `verify` subcommand and the test suite.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Iterable

from errors import HypothesisError
from gf2n import FieldSpec, SubsetMask, format_mask, same_field, trace_one_set, translate_bits
from rvalue import r_bits, r_self_bits, zero_free_upper_bound


class IdentityId(str, Enum):
    COMPLEMENT = "COMPLEMENT"
    THREE_SET_C = "THREE_SET_C"
    THREE_SET_A = "THREE_SET_A"
    COR_1 = "COR_1"
    COR_2 = "COR_2"
    COR_3 = "COR_3"
    COR_4 = "COR_4"
    COR_REDUCED = "COR_REDUCED"
    DISJOINT_UNION = "DISJOINT_UNION"
    CHAR2_UNION = "CHAR2_UNION"
    CHAR2_SYM = "CHAR2_SYM"
    COMP_NONZERO = "COMP_NONZERO"
    SUBGROUP = "SUBGROUP"
    SINGLETON = "SINGLETON"
    ZERO_ADDED = "ZERO_ADDED"
    BOUND = "BOUND"
    ZERO_LOWER_BOUND = "ZERO_LOWER_BOUND"
    MOD6 = "MOD6"
    UPPER_BOUND = "UPPER_BOUND"
    SUMFREE_TRACE = "SUMFREE_TRACE"
    COSET_SUMFREE = "COSET_SUMFREE"
    ABB_ZERO = "ABB_ZERO"


@dataclass(frozen=True)
class IdentityReport:
    identity_id: IdentityId
    inputs: tuple[str, ...]
    expected: int
    computed: int

    @property
    def passed(self) -> bool:
        return self.expected == self.computed

    def describe(self) -> str:
        status = "ok" if self.passed else "FAIL"
        args = ", ".join(self.inputs) if self.inputs else "-"
        return f"{self.identity_id.value}({args}): expected={self.expected} computed={self.computed} {status}"


@dataclass
class SweepResult:
    identity_id: IdentityId
    checked: int = 0
    failed: int = 0
    skipped: int = 0
    first_failure: IdentityReport | None = None

    @property
    def passed(self) -> bool:
        return self.failed == 0


Sampler = Callable[[random.Random, FieldSpec], tuple[int, ...]]


@dataclass(frozen=True)
class _Identity:
    arity: int
    hypothesis: str
    evaluate: Callable[..., tuple[int, int]]
    admissible: Callable[..., bool]
    sample: Sampler | None


_REGISTRY: dict[IdentityId, _Identity] = {}


# ---------------------------------------------------------------------------
# Random inputs
# ---------------------------------------------------------------------------

def _random_bits(rng: random.Random, width: int) -> int:
    # density 1/4, 1/2 or 3/4
    mode = rng.randrange(3)
    x = rng.getrandbits(width)
    if mode == 0:
        return x & rng.getrandbits(width)
    if mode == 2:
        return x | rng.getrandbits(width)
    return x


def _any_sets(arity: int) -> Sampler:
    def sample(rng, field):
        return tuple(_random_bits(rng, field.order) for _ in range(arity))

    return sample


def _zero_free(rng, field):
    return (_random_bits(rng, field.order) & field.nonzero_bits,)


def _with_zero(rng, field):
    return (_random_bits(rng, field.order) | 1,)


def _disjoint_pair(rng, field):
    a = _random_bits(rng, field.order)
    return a, _random_bits(rng, field.order) & ~a


def _subfield_coset_pair(rng, field):
    a = _random_bits(rng, field.order) & field.subfield_bits & ~1
    b = _random_bits(rng, field.order) & field.upper_coset_bits
    return a, b


def _singleton(rng, field):
    return (1 << rng.randrange(field.order),)


def _upper_coset_subset(rng, field):
    return (_random_bits(rng, field.order) & field.upper_coset_bits,)


def span_bits(generators: Iterable[int], n: int) -> int:
    """Additive subgroup generated by the given elements, as a bitset."""
    bits = 1
    for g in generators:
        if not (bits >> g) & 1:
            bits |= translate_bits(bits, g, n)
    return bits


def _maybe_subgroup(rng, field):
    if rng.random() < 0.5:
        gens = [rng.randrange(field.order) for _ in range(rng.randrange(field.n + 1))]
        return (span_bits(gens, field.n),)
    return (_random_bits(rng, field.order) or 1 << rng.randrange(field.order),)


# ---------------------------------------------------------------------------
# Hypotheses
# ---------------------------------------------------------------------------

def _always(field, *bits):
    return True


def _is_zero_free(field, a):
    return not a & 1


def _contains_zero(field, a):
    return bool(a & 1)


def _is_disjoint(field, a, b):
    return not a & b


def _is_subfield_coset_pair(field, a, b):
    return not a & ~(field.subfield_bits & ~1) and not b & ~field.upper_coset_bits


def _is_singleton(field, a):
    return a.bit_count() == 1


def _in_upper_coset(field, a):
    return not a & ~field.upper_coset_bits


def _is_nonempty(field, a):
    return a != 0


def _identity(identity_id: IdentityId, arity: int, hypothesis: str = "",
              admissible=None, sample: Sampler | None = None):
    def deco(fn):
        _REGISTRY[identity_id] = _Identity(
            arity=arity,
            hypothesis=hypothesis or "none",
            evaluate=fn,
            admissible=admissible or _always,
            sample=sample if sample is not None or arity == 0 else _any_sets(arity),
        )
        return fn

    return deco


# ---------------------------------------------------------------------------
# Two-sided identities
# ---------------------------------------------------------------------------

@_identity(IdentityId.COMPLEMENT, 1)
def _complement(field, a):
    g, k = field.order, a.bit_count()
    comp = field.full_bits ^ a
    return g * g - 3 * g * k + 3 * k * k, r_self_bits(a, field.n) + r_self_bits(comp, field.n)


@_identity(IdentityId.THREE_SET_C, 3)
def _three_set_c(field, a, b, c):
    n = field.n
    return a.bit_count() * b.bit_count(), r_bits(a, b, c, n) + r_bits(a, b, field.full_bits ^ c, n)


@_identity(IdentityId.THREE_SET_A, 3)
def _three_set_a(field, a, b, c):
    n = field.n
    return b.bit_count() * c.bit_count(), r_bits(a, b, c, n) + r_bits(field.full_bits ^ a, b, c, n)


@_identity(IdentityId.COR_1, 3)
def _cor_1(field, a, b, c):
    n = field.n
    return a.bit_count() * c.bit_count(), r_bits(a, b, c, n) + r_bits(a, field.full_bits ^ b, c, n)


@_identity(IdentityId.COR_2, 3)
def _cor_2(field, a, b, c):
    n, full = field.n, field.full_bits
    expected = (a.bit_count() - (full ^ c).bit_count()) * b.bit_count()
    return expected, r_bits(a, b, c, n) - r_bits(full ^ a, b, full ^ c, n)


@_identity(IdentityId.COR_3, 3)
def _cor_3(field, a, b, c):
    n, full = field.n, field.full_bits
    expected = (b.bit_count() - (full ^ a).bit_count()) * c.bit_count()
    return expected, r_bits(a, b, c, n) - r_bits(full ^ a, full ^ b, c, n)


@_identity(IdentityId.COR_4, 3)
def _cor_4(field, a, b, c):
    n, full = field.n, field.full_bits
    ka_bar, kb_bar = (full ^ a).bit_count(), (full ^ b).bit_count()
    kb, kc = b.bit_count(), c.bit_count()
    expected = kb * kc - ka_bar * kc + ka_bar * kb_bar
    return expected, r_bits(a, b, c, n) + r_bits(full ^ a, full ^ b, full ^ c, n)


@_identity(IdentityId.COR_REDUCED, 3)
def _cor_reduced(field, a, b, c):
    n, full, g = field.n, field.full_bits, field.order
    ka, kb, kc = a.bit_count(), b.bit_count(), c.bit_count()
    expected = g * g - (ka + kb + kc) * g + ka * kb + ka * kc + kb * kc
    return expected, r_bits(a, b, c, n) + r_bits(full ^ a, full ^ b, full ^ c, n)


@_identity(IdentityId.DISJOINT_UNION, 2, "A and B disjoint", _is_disjoint, _disjoint_pair)
def _disjoint_union(field, a, b):
    n = field.n
    expected = (
        r_self_bits(a, n)
        + r_bits(a, a, b, n)
        + 2 * r_bits(a, b, a, n)
        + 2 * r_bits(a, b, b, n)
        + r_bits(b, b, a, n)
        + r_self_bits(b, n)
    )
    return expected, r_self_bits(a | b, n)


@_identity(IdentityId.CHAR2_UNION, 2, "A in subfield without 0, B in upper coset",
           _is_subfield_coset_pair, _subfield_coset_pair)
def _char2_union(field, a, b):
    n = field.n
    return r_self_bits(a, n) + 3 * r_bits(a, b, b, n), r_self_bits(a | b, n)


@_identity(IdentityId.CHAR2_SYM, 2, "A in subfield without 0, B in upper coset",
           _is_subfield_coset_pair, _subfield_coset_pair)
def _char2_sym(field, a, b):
    n = field.n
    abb, bab, bba = r_bits(a, b, b, n), r_bits(b, a, b, n), r_bits(b, b, a, n)
    # computed is the first of r(B,A,B), r(B,B,A) that disagrees with r(A,B,B)
    return abb, bab if bab != abb else bba


@_identity(IdentityId.COMP_NONZERO, 1, "S without 0", _is_zero_free, _zero_free)
def _comp_nonzero(field, s):
    n, k = field.n, s.bit_count()
    g = field.order
    expected = g * g - 3 * (g - k - 1) * (k + 1) - (3 * k + 1) - r_self_bits(s, n)
    return expected, r_self_bits(field.nonzero_bits ^ s, n)


def is_subgroup_bits(bits: int, n: int) -> bool:
    """0 in A and A closed under addition, checked without r."""
    if not bits & 1:
        return False
    x = bits
    while x:
        low = x & -x
        a = low.bit_length() - 1
        if translate_bits(bits, a, n) != bits:
            return False
        x ^= low
    return True


@_identity(IdentityId.SUBGROUP, 1, "A nonempty", _is_nonempty, _maybe_subgroup)
def _subgroup(field, a):
    # 1/0 on both sides: pass iff (r = k^2) <=> subgroup; r(empty) = 0 = 0^2 is excluded
    k = a.bit_count()
    return int(is_subgroup_bits(a, field.n)), int(r_self_bits(a, field.n) == k * k)


@_identity(IdentityId.SINGLETON, 1, "|A| = 1", _is_singleton, _singleton)
def _singleton_value(field, a):
    return (1 if a == 1 else 0), r_self_bits(a, field.n)


@_identity(IdentityId.ZERO_ADDED, 1, "A without 0", _is_zero_free, _zero_free)
def _zero_added(field, a):
    n = field.n
    return r_self_bits(a, n) + 3 * a.bit_count() + 1, r_self_bits(a | 1, n)


# ---------------------------------------------------------------------------
# Bounds (expected excess 0)
# ---------------------------------------------------------------------------

@_identity(IdentityId.BOUND, 3)
def _bound(field, a, b, c):
    cap = a.bit_count() * min(b.bit_count(), c.bit_count())
    return 0, max(0, r_bits(a, b, c, field.n) - cap)


@_identity(IdentityId.ZERO_LOWER_BOUND, 1, "0 in A", _contains_zero, _with_zero)
def _zero_lower_bound(field, a):
    return 0, max(0, (3 * a.bit_count() - 2) - r_self_bits(a, field.n))


@_identity(IdentityId.MOD6, 1, "A without 0", _is_zero_free, _zero_free)
def _mod6(field, a):
    return 0, r_self_bits(a, field.n) % 6


@_identity(IdentityId.UPPER_BOUND, 1, "A without 0", _is_zero_free, _zero_free)
def _upper_bound(field, a):
    return 0, max(0, r_self_bits(a, field.n) - zero_free_upper_bound(a.bit_count()))


# ---------------------------------------------------------------------------
# Sum-free constructions
# ---------------------------------------------------------------------------

def abb_pair(field: FieldSpec) -> tuple[SubsetMask, SubsetMask]:
    """A = subfield elements with last coordinate 1, B = upper coset elements with last coordinate 0."""
    if field.n < 2:
        raise HypothesisError("the odd/even coset pair needs n >= 2")
    half = field.half
    a = SubsetMask.from_elements(field, (x for x in range(half) if x & 1))
    b = SubsetMask.from_elements(field, (x for x in range(half, field.order) if not x & 1))
    return a, b


@_identity(IdentityId.SUMFREE_TRACE, 0)
def _sumfree_trace(field):
    return 0, r_self_bits(trace_one_set(field).bits, field.n)


@_identity(IdentityId.COSET_SUMFREE, 1, "B in upper coset", _in_upper_coset, _upper_coset_subset)
def _coset_sumfree(field, b):
    return 0, r_self_bits(b, field.n)


@_identity(IdentityId.ABB_ZERO, 0)
def _abb_zero(field):
    if field.n < 2:
        raise HypothesisError("the odd/even coset pair needs n >= 2")
    a, b = abb_pair(field)
    return 0, r_bits(a.bits, b.bits, b.bits, field.n)


# ---------------------------------------------------------------------------
# Public API
# ---------------------------------------------------------------------------

def identity_ids() -> list[IdentityId]:
    return list(_REGISTRY)


def _evaluate(identity_id: IdentityId, field: FieldSpec, bits: tuple[int, ...]) -> IdentityReport:
    ident = _REGISTRY[identity_id]
    expected, computed = ident.evaluate(field, *bits)
    return IdentityReport(identity_id, tuple(format_mask(b) for b in bits), expected, computed)


def check_identity(identity_id, *inputs: SubsetMask, field: FieldSpec | None = None) -> IdentityReport:
    """Evaluate one identity on concrete subsets (field-only identities take field=)."""
    try:
        iid = IdentityId(identity_id)
    except ValueError:
        raise HypothesisError(f"unknown identity '{identity_id}'") from None
    ident = _REGISTRY[iid]
    if len(inputs) != ident.arity:
        raise HypothesisError(f"{iid.value} takes {ident.arity} subset(s), got {len(inputs)}")
    if inputs:
        field = same_field(*inputs)
    elif field is None:
        raise HypothesisError(f"{iid.value} needs field=")
    bits = tuple(s.bits for s in inputs)
    if not ident.admissible(field, *bits):
        raise HypothesisError(f"{iid.value}: inputs violate hypothesis ({ident.hypothesis})")
    return _evaluate(iid, field, bits)


def _record(result: SweepResult, report: IdentityReport) -> None:
    result.checked += 1
    if not report.passed:
        result.failed += 1
        if result.first_failure is None:
            result.first_failure = report


def run_sweep(field: FieldSpec, trials: int, seed: int, exhaustive: bool = False,
              ids: Iterable[IdentityId] | None = None) -> list[SweepResult]:
    """Check every identity on `trials` seeded random inputs, or on all inputs when exhaustive."""
    if exhaustive and field.n > 2:
        raise HypothesisError("exhaustive identity sweeps are limited to n <= 2")
    results = []
    for iid in (ids or identity_ids()):
        iid = IdentityId(iid)
        ident = _REGISTRY[iid]
        res = SweepResult(iid)
        if ident.arity == 0:
            if field.n >= 2 or iid is not IdentityId.ABB_ZERO:
                _record(res, _evaluate(iid, field, ()))
            else:
                res.skipped += 1
        elif exhaustive:
            for bits in itertools.product(range(1 << field.order), repeat=ident.arity):
                if ident.admissible(field, *bits):
                    _record(res, _evaluate(iid, field, bits))
                else:
                    res.skipped += 1
        else:
            # one stream per identity so adding identities never shifts the others
            rng = random.Random(f"{seed}:{iid.value}")
            for _ in range(trials):
                bits = ident.sample(rng, field)
                if ident.admissible(field, *bits):
                    _record(res, _evaluate(iid, field, bits))
                else:
                    res.skipped += 1
        level = "ERROR" if res.failed else "DEBUG"
        print(f"[VERIFY] {level}: {iid.value} n={field.n}: {res.checked - res.failed}/{res.checked} passed")
        if res.first_failure is not None:
            print(f"[VERIFY] ERROR: first failure {res.first_failure.describe()}")
        results.append(res)
    return results
