"""
Multi-minute sweeps, skipped unless explicitly enabled.

  RUN_LONG_TESTS=1 pytest -m long

The n=5 exhaustive sweep walks 2^31 zero-free subsets; give it every core.
"""
from __future__ import annotations

import os
import random

import pytest

from constructive import assemble_full, bootstrap, compare
from enumerator import extend_full, run_sharded
from gf2n import FieldSpec
from identities import run_sweep
from reference_tables import TABLE2_PATH
from rvalue import r_self_bits
from spectrum import CONTAINS_ZERO, ZERO_FREE, check_invariants
from spectrum_io import import_table2


def _require_env(name: str) -> None:
    if os.getenv(name) != "1":
        pytest.skip(f"Set {name}=1 to enable this test")


@pytest.mark.long
def test_n5_sweep_matches_construction(monkeypatch, tmp_path) -> None:
    _require_env("RUN_LONG_TESTS")
    monkeypatch.setattr("config.WORKERS", 0)

    brute = extend_full(run_sharded(5, count_mode=True, workers=None, checkpoint_dir=str(tmp_path / "ckpt")))
    assert brute.total_count() == 1 << 32
    assert check_invariants(brute) == []
    assert brute.values(32, CONTAINS_ZERO) == [1024]

    built = assemble_full(bootstrap(5, str(tmp_path / "pools")))
    report = compare(built, brute)
    assert report.identical, [(r.size, r.cls, r.only_a, r.only_b) for r in report.differences()]


@pytest.mark.long
def test_n6_construction_covers_published_values(tmp_path) -> None:
    _require_env("RUN_LONG_TESTS")
    built = assemble_full(bootstrap(6, str(tmp_path / "pools")))
    published = import_table2(TABLE2_PATH, 6)

    report = compare(built, published, classes=(ZERO_FREE,))
    missing = {r.size: r.only_b for r in report.differences() if r.only_b}
    assert missing == {}, missing
    assert set(built.values(7, ZERO_FREE)) >= {0, 6, 12, 18, 24, 42}
    assert check_invariants(built) == []


@pytest.mark.long
@pytest.mark.parametrize("n", [3, 4, 5, 6, 7, 8])
def test_identity_sweep_ten_thousand_trials(n) -> None:
    _require_env("RUN_LONG_TESTS")
    results = run_sweep(FieldSpec.of(n), trials=10_000, seed=7)
    failures = [r.first_failure.describe() for r in results if not r.passed]
    assert not failures, failures


@pytest.mark.long
@pytest.mark.parametrize("n", [5, 6])
def test_small_size_closed_forms_million_samples(n) -> None:
    _require_env("RUN_LONG_TESTS")
    f = FieldSpec.of(n)
    rng = random.Random(n)
    allowed = {1: {0, 1}, 2: {0, 4}, 3: {0, 6, 7}}
    for _ in range(1_000_000):
        k = rng.randint(1, 4)
        if k == 4:
            bits = sum(1 << x for x in rng.sample(range(1, f.order), 4))
            assert r_self_bits(bits, n) in {0, 6}, hex(bits)
        else:
            bits = sum(1 << x for x in rng.sample(range(f.order), k))
            assert r_self_bits(bits, n) in allowed[k], hex(bits)
