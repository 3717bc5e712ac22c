import pytest

from errors import FieldError
from spectrum import CONTAINS_ZERO, ZERO_FREE
from utils import parse_classes, parse_int, validate_run_config


@pytest.mark.parametrize("text, expected", [("41", 41), ("0x29", 41), ("0b101001", 41), (" 0X13 ", 19), (7, 7)])
def test_parse_int(text, expected):
    assert parse_int(text) == expected


def test_parse_int_rejects_garbage():
    with pytest.raises(FieldError):
        parse_int("0xG")


def test_parse_classes():
    assert parse_classes(None) is None
    assert parse_classes("") is None
    assert parse_classes("zf") == (ZERO_FREE,)
    assert parse_classes("zero-free, CZ") == (ZERO_FREE, CONTAINS_ZERO)
    with pytest.raises(FieldError):
        parse_classes("odd")


def _spectrum(**kw):
    conf = {"command": "spectrum", "mode": "brute", "n": 4, "format": "json"}
    conf.update(kw)
    return validate_run_config(conf)


def test_valid_runs_have_no_findings():
    assert _spectrum() == ([], [])
    assert _spectrum(mode="construct", n=6) == ([], [])
    assert validate_run_config({"command": "verify", "n": 2, "exhaustive": True, "trials": None}) == ([], [])


def test_n_out_of_range():
    errors, _ = _spectrum(n=0)
    assert errors and "1..16" in errors[0]
    errors, _ = _spectrum(n=17)
    assert errors


def test_brute_limits():
    errors, _ = _spectrum(n=6)
    assert "spectrum construct" in errors[0]
    errors, _ = _spectrum(n=5)
    assert "--confirm-long" in errors[0]
    assert _spectrum(n=5, confirm_long=True) == ([], [])


@pytest.mark.parametrize("shards, ok", [(0, True), (8, True), (3, False), (-2, False), (1 << 16, False)])
def test_shards_must_be_a_power_of_two(shards, ok):
    errors, _ = _spectrum(shards=shards)
    assert (not errors) == ok


def test_shards_ignored_in_combinations_mode():
    errors, warnings = _spectrum(shards=4, sweep="combinations")
    assert not errors
    assert "ignored" in warnings[0]


def test_resume_needs_checkpoint_dir():
    errors, _ = _spectrum(resume=True)
    assert "--checkpoint-dir" in errors[0]
    assert _spectrum(resume=True, checkpoint_dir="/tmp/ck") == ([], [])


def test_max_size_checks():
    errors, _ = _spectrum(max_size=16)
    assert errors
    errors, warnings = _spectrum(max_size=5)
    assert not errors
    assert "only the zero-free rows" in warnings[0]


def test_construct_checks(tmp_path):
    errors, _ = _spectrum(mode="construct", counts=True)
    assert "--counts" in errors[0]
    _, warnings = _spectrum(mode="construct", n=8)
    assert "long time" in warnings[0]
    errors, _ = _spectrum(mode="construct", pool=str(tmp_path / "missing.jsonl"))
    assert "does not exist" in errors[0]
    pool = tmp_path / "pool.jsonl"
    pool.write_text("{}\n", encoding="utf-8")
    assert _spectrum(mode="construct", pool=str(pool)) == ([], [])


def test_format_extension_mismatch_warns():
    errors, warnings = _spectrum(out="table.csv", format="json")
    assert not errors
    assert ".csv" in warnings[0]
    errors, _ = _spectrum(format="xml")
    assert errors


def test_verify_checks():
    errors, _ = validate_run_config({"command": "verify", "n": 3, "exhaustive": True})
    assert "--exhaustive" in errors[0]
    errors, _ = validate_run_config({"command": "verify", "n": 3, "trials": 0})
    assert "--trials" in errors[0]


def test_validate_never_raises_on_junk():
    errors, warnings = validate_run_config({"command": "spectrum", "mode": "brute", "n": "abc", "shards": "x"})
    assert isinstance(errors, list) and isinstance(warnings, list)
