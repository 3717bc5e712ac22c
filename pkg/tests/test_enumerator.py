import itertools
import math

import pytest

import enumerator
from enumerator import (
    ShardSpec,
    complement_nonzero_value,
    complement_value,
    default_shard_count,
    enumerate_direct,
    enumerate_zero_free,
    enumerate_zero_free_combinations,
    extend_full,
    gray,
    merge_shards,
    revolving_door,
    run_sharded,
    symmetry_violations,
    zero_added_value,
)
from errors import EnumerationError, ShardMergeError
from spectrum import CONTAINS_ZERO, ZERO_FREE, check_invariants

N3_ZERO_FREE = [{0}, {0}, {0}, {0, 6}, {0, 6}, {12}, {24}, {42}]
N3_CONTAINS_ZERO = {1: {1}, 2: {4}, 3: {7}, 4: {10, 16}, 5: {13, 19}, 6: {28}, 7: {43}, 8: {64}}


def _values_and_counts(table, cls=ZERO_FREE):
    return {
        k: (tuple(e.r_values), tuple(sorted((e.counts or {}).items())))
        for (k, c), e in table.entries.items()
        if c is cls
    }


def test_gray_steps_differ_in_one_bit():
    for i in range(1, 1 << 10):
        diff = gray(i) ^ gray(i - 1)
        assert diff & (diff - 1) == 0
        assert diff == 1 << ((i & -i).bit_length() - 1)


def test_n2_zero_free_spectrum():
    table = enumerate_zero_free(2, max_size=3)
    assert [set(table.values(k, ZERO_FREE)) for k in range(4)] == [{0}, {0}, {0}, {6}]


def test_n3_spectrum_exact():
    table = enumerate_zero_free(3, max_size=7, count_mode=True)
    assert [set(table.values(k, ZERO_FREE)) for k in range(8)] == N3_ZERO_FREE
    assert table.visited == 1 << 7
    assert table.total_count() == 1 << 7

    full = extend_full(enumerate_zero_free(3, count_mode=True))
    for s, values in N3_CONTAINS_ZERO.items():
        assert set(full.values(s, CONTAINS_ZERO)) == values
    assert [set(full.values(k, ZERO_FREE)) for k in range(8)] == N3_ZERO_FREE
    assert full.total_count() == 1 << 8
    assert full.verify_witnesses() == []
    assert check_invariants(full) == []


def test_n4_full_spectrum_anchors():
    full = extend_full(enumerate_zero_free(4, count_mode=True))
    assert full.full_values(5) == [0, 6, 12, 13, 19]
    assert full.values(5, ZERO_FREE) == [0, 6, 12]
    assert full.values(6, ZERO_FREE) == [0, 6, 12, 24]
    assert full.values(7, ZERO_FREE) == [0, 12, 18, 24, 42]
    assert full.values(8, ZERO_FREE) == [0, 18, 24, 30, 42]
    assert full.values(16, CONTAINS_ZERO) == [256]
    assert full.values(0, ZERO_FREE) == [0]
    assert full.total_count() == 1 << 16
    assert symmetry_violations(full) == []
    assert check_invariants(full) == []
    assert full.verify_witnesses() == []


def test_n4_gray_matches_direct_recomputation():
    gray_table = enumerate_zero_free(4, max_size=15, count_mode=True)
    direct = enumerate_direct(4, max_size=15, count_mode=True)
    assert _values_and_counts(gray_table) == _values_and_counts(direct)
    assert gray_table.visited == direct.visited == 1 << 15


@pytest.mark.parametrize("shards", [2, 8, 64])
def test_sharded_n4_merges_to_unsharded(shards):
    straight = enumerate_zero_free(4, count_mode=True)
    merged = run_sharded(4, shard_count=shards, workers=1, count_mode=True)
    assert _values_and_counts(merged) == _values_and_counts(straight)
    assert merged.shards == set(range(shards))
    assert merged.visited == straight.visited


def test_sharded_on_process_pool():
    straight = enumerate_zero_free(3, max_size=7, count_mode=True)
    merged = run_sharded(3, max_size=7, shard_count=4, workers=2, count_mode=True)
    assert _values_and_counts(merged) == _values_and_counts(straight)


def test_combinations_mode_matches_gray():
    gray_table = enumerate_zero_free(4, max_size=6, count_mode=True)
    combos = enumerate_zero_free_combinations(4, max_size=6, count_mode=True, workers=1)
    assert _values_and_counts(combos) == _values_and_counts(gray_table)
    assert combos.verify_witnesses() == []


@pytest.mark.parametrize("m, k", [(5, 0), (5, 2), (7, 3), (8, 8), (9, 4)])
def test_revolving_door_is_a_swap_sequence(m, k):
    seq = list(revolving_door(m, k))
    assert len(seq) == math.comb(m, k)
    assert len(set(seq)) == len(seq)
    assert all(c.bit_count() == k for c in seq)
    for a, b in zip(seq, seq[1:]):
        assert (a ^ b).bit_count() == 2


def test_shard_spec():
    s = ShardSpec(5, 8)
    assert s.fixed_bits == 3
    assert s.fixed_elements(4) == [15, 14, 13]
    assert s.base_bits(4) == (1 << 15) | (1 << 13)
    with pytest.raises(EnumerationError):
        ShardSpec(0, 3).validate(4)
    with pytest.raises(EnumerationError):
        ShardSpec(8, 8).validate(4)
    with pytest.raises(EnumerationError):
        ShardSpec(0, 16).validate(2)


def test_default_shard_count(monkeypatch):
    monkeypatch.setattr("config.SHARDS", 0)
    assert default_shard_count(5, 8) == 512
    # small fields keep at least 4 free elements
    assert default_shard_count(3, 8) == 8
    assert default_shard_count(2, 8) == 1
    monkeypatch.setattr("config.SHARDS", 16)
    assert default_shard_count(5, 8) == 16


def test_merge_shards_rejects_overlap_and_mixed_n():
    a = enumerate_zero_free(3, shard=ShardSpec(0, 2))
    again = enumerate_zero_free(3, shard=ShardSpec(0, 2))
    with pytest.raises(ShardMergeError):
        merge_shards([a, again])
    with pytest.raises(ShardMergeError):
        merge_shards([a, enumerate_zero_free(2)])
    with pytest.raises(ShardMergeError):
        merge_shards([])
    with pytest.raises(ShardMergeError):
        merge_shards([a], expected_count=1 << 7)


def test_sweep_argument_limits():
    with pytest.raises(EnumerationError):
        enumerate_zero_free(7)
    with pytest.raises(EnumerationError):
        enumerate_zero_free(3, max_size=8)
    with pytest.raises(EnumerationError):
        enumerate_direct(5)


def test_extend_full_needs_half_sizes():
    with pytest.raises(EnumerationError):
        extend_full(enumerate_zero_free(4, max_size=5))


def test_value_maps():
    # {1,2,3} in F_8: complement {0,4,5,6,7}, complement without zero {4,5,6,7}
    assert zero_added_value(3, 6) == 16
    assert complement_value(8, 3, 6) == 64 - 72 + 27 - 6
    assert complement_nonzero_value(8, 3, 6) == 0
    assert complement_value(16, 0, 0) == 256


@pytest.mark.parametrize("n", [3, 4])
def test_small_closed_forms_in_enumerated_table(n):
    full = extend_full(enumerate_zero_free(n))
    assert set(full.full_values(1)) == {0, 1}
    assert set(full.full_values(2)) == {0, 4}
    assert set(full.full_values(3)) == {0, 6, 7}
    assert set(full.values(4, ZERO_FREE)) == {0, 6}
