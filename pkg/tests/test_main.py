# tests/test_main.py
import builtins
import json

import pytest

import config
import main
from errors import SweepInterrupted
from gf2n import FieldSpec
from reference_tables import TABLE2_PATH
from spectrum import SpectrumTable

N2_GRID = (
    "F_2^2 spectrum (size : zero-free | contains-zero)\n"
    "0 : 0 | -\n"
    "1 : 0 | 1\n"
    "2 : 0 | 4\n"
    + "-" * 40 + "\n"
    "3 : 6 | 7\n"
    "4 : - | 16\n"
    "max blocks (size : max zero-free r / 6)\n"
    "3 : 1\n"
)


def run(capsys, *argv):
    code = main.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_spectrum_brute_n2_golden(capsys):
    code, out, _ = run(capsys, "spectrum", "brute", "--n", "2")
    assert code == 0
    assert out == N2_GRID


def test_spectrum_brute_n3_with_counts(capsys):
    code, out, _ = run(capsys, "spectrum", "brute", "--n", "3", "--counts")
    assert code == 0
    lines = out.splitlines()
    assert "4 : 0 6 | 10 16" in lines
    assert "5 : 12 | 13 19" in lines
    assert "8 : - | 64" in lines
    assert lines[-1] == "classified 256 subsets"


def test_construct_matches_brute_at_n4(capsys):
    code, brute, _ = run(capsys, "spectrum", "brute", "--n", "4")
    assert code == 0
    code, built, err = run(capsys, "spectrum", "construct", "--n", "4")
    assert code == 0
    assert built == brute
    # sizes are right-aligned to the width of 2^n
    assert " 5 : 0 6 12 | 13 19" in built.splitlines()
    assert "16 : - | 256" in built.splitlines()
    assert "[LIFT]" in err


def test_construct_rejects_counts(capsys):
    code, out, err = run(capsys, "spectrum", "construct", "--n", "4", "--counts")
    assert code == 2
    assert out == ""
    assert "--counts is only available" in err


def test_brute_n5_needs_confirmation(capsys):
    code, out, err = run(capsys, "spectrum", "brute", "--n", "5")
    assert code == 2
    assert out == ""
    assert "--confirm-long" in err


def test_interrupted_sweep_exits_1(capsys, mocker):
    mocker.patch("main.run_sharded", side_effect=SweepInterrupted("stop requested", None, ["/tmp/s0.json"]))
    code, out, err = run(capsys, "spectrum", "brute", "--n", "3")
    assert code == 1
    assert "Resume from /tmp/s0.json" in err


def test_reference_check_n4(capsys):
    code, out, err = run(capsys, "spectrum", "construct", "--n", "4", "--reference")
    assert code == 0
    assert "table 1 check" in out
    assert "m=5: spectrum column matches" in out
    assert "[TABLE1]" in err


def test_reference_check_n6_logs_missing_published_values(capsys):
    lines, code = main._reference_check(SpectrumTable(FieldSpec.of(6)))
    assert code == main.EXIT_FAILED
    assert lines[0].startswith("table 2 check: 831 table-only value(s)")
    assert "  size 7: table-only [0, 6, 12, 18, 24, 42]" in lines
    out = capsys.readouterr().out
    assert "[CONSTRUCT] WARNING: size 32: published value(s)" in out


def test_spectrum_writes_json_and_csv(capsys, tmp_path):
    json_path = tmp_path / "n3.json"
    csv_path = tmp_path / "n3.csv"
    assert main.main(["spectrum", "brute", "--n", "3", "--out", str(json_path)]) == 0
    assert main.main(["spectrum", "brute", "--n", "3", "--out", str(csv_path), "--format", "csv"]) == 0
    data = json.loads(json_path.read_text(encoding="utf-8"))
    assert data["n"] == 3
    assert csv_path.read_text(encoding="utf-8").startswith("size,class,r,count,witness")


def test_rvalue(capsys):
    assert run(capsys, "rvalue", "--n", "3", "--set", "1,2,3")[:2] == (0, "6\n")
    assert run(capsys, "rvalue", "--n", "3", "--set", "0")[:2] == (0, "1\n")
    assert run(capsys, "rvalue", "--n", "4", "--set", "0x0E")[:2] == (0, "6\n")

    code, out, _ = run(capsys, "rvalue", "--n", "3", "--set", "1,2,3", "--triples")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "6"
    assert "1 + 2 = 3" in lines
    assert len(lines) == 7


def test_rvalue_three_sets(capsys):
    code, out, _ = run(capsys, "rvalue", "--n", "3", "--set", "1", "--b", "2,4", "--c", "3")
    assert (code, out) == (0, "1\n")


@pytest.mark.parametrize("bad", ["9", "1,x", "0xZZ"])
def test_rvalue_bad_subset_exits_2(capsys, bad):
    code, out, err = run(capsys, "rvalue", "--n", "3", "--set", bad)
    assert code == 2
    assert out == ""
    assert "ERROR" in err


def test_steiner(capsys):
    code, out, _ = run(capsys, "steiner", "--n", "3", "--set", "1,2,3,4,5,6,7")
    assert code == 0
    lines = out.splitlines()
    assert "blocks: 7" in lines
    assert "r = 42, r/6 = 7 (consistent)" in lines
    assert lines[-1] == "partial steiner triple system of order 7: yes"

    code, out, _ = run(capsys, "steiner", "--n", "4", "--set", "1,2,4,8")
    assert code == 0
    assert "blocks: 0" in out.splitlines()

    code, out, _ = run(capsys, "steiner", "--n", "3", "--set", "1,2,3")
    assert out.splitlines()[:2] == ["{1, 2, 3}", "blocks: 1"]


def test_steiner_rejects_zero(capsys):
    code, _, err = run(capsys, "steiner", "--n", "3", "--set", "0,1,2")
    assert code == 2
    assert "ERROR" in err


def test_verify_exhaustive_n2(capsys):
    code, out, _ = run(capsys, "verify", "--n", "2", "--exhaustive")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "identity sweep n=2 exhaustive"
    total = len(lines) - 2
    assert lines[-1] == f"{total}/{total} identities passed"


def test_verify_random(capsys):
    code, out, _ = run(capsys, "verify", "--n", "4", "--trials", "50", "--seed", "3", "--identity", "MOD6,COMPLEMENT")
    assert code == 0
    assert out.splitlines()[-1] == "2/2 identities passed"


def test_verify_usage_errors(capsys):
    assert run(capsys, "verify", "--n", "3", "--exhaustive")[0] == 2
    assert run(capsys, "verify", "--n", "3", "--trials", "0")[0] == 2
    assert run(capsys, "verify", "--n", "3", "--identity", "NOPE")[0] == 2


def test_compare(capsys, tmp_path):
    table = tmp_path / "n3.json"
    assert main.main(["spectrum", "brute", "--n", "3", "--out", str(table)]) == 0
    capsys.readouterr()

    assert run(capsys, "compare", str(table), str(table))[:2] == (0, "identical\n")

    partial = tmp_path / "partial.csv"
    partial.write_text("size,r\n3,6\n5,12\n", encoding="utf-8")
    code, out, _ = run(capsys, "compare", str(table), str(partial), "--n", "3", "--classes", "zf")
    assert code == 1
    assert out.splitlines()[-1].endswith("0 value(s) only in B")
    assert run(capsys, "compare", str(table), str(partial), "--n", "3", "--classes", "zf", "--b-partial")[0] == 0

    partial.write_text("size,r\n3,12\n", encoding="utf-8")
    code, out, _ = run(capsys, "compare", str(table), str(partial), "--n", "3", "--b-partial")
    assert code == 1
    assert "size 3 zero_free: only in A [0, 6], only in B [12]" in out


def test_compare_mismatched_fields(capsys, tmp_path):
    a = tmp_path / "n2.json"
    b = tmp_path / "n3.json"
    assert main.main(["spectrum", "brute", "--n", "2", "--out", str(a)]) == 0
    assert main.main(["spectrum", "brute", "--n", "3", "--out", str(b)]) == 0
    assert run(capsys, "compare", str(a), str(b))[0] == 2


def test_import_table2(capsys, tmp_path):
    out_path = tmp_path / "t2.json"
    code, out, _ = run(capsys, "import-table2", "--out", str(out_path))
    assert code == 0
    assert out == "imported 831 value(s) over 33 size(s) for n=6\n"
    assert json.loads(out_path.read_text(encoding="utf-8"))["source"] == "table2"

    code, out, _ = run(capsys, "compare", str(out_path), TABLE2_PATH, "--n", "6")
    assert (code, out) == (0, "identical\n")


def test_witness_check(capsys, tmp_path):
    pool = tmp_path / "pool-n4.jsonl"
    assert main.main(["spectrum", "construct", "--n", "4", "--no-cache", "--pool-out", str(pool)]) == 0
    capsys.readouterr()

    code, out, _ = run(capsys, "witness-check", str(pool))
    assert code == 0
    assert out.startswith("ok: ") and out.endswith("verified for n=4\n")

    lines = pool.read_text(encoding="utf-8").splitlines()
    bad = json.loads(lines[-1])
    bad["r"] += 6
    lines[-1] = json.dumps(bad)
    pool.write_text("\n".join(lines) + "\n", encoding="utf-8")
    code, out, err = run(capsys, "witness-check", str(pool))
    assert code == 1
    assert out == ""
    assert "ERROR" in err


def test_construct_from_pool_file(capsys, tmp_path):
    pool = tmp_path / "pool-n3.jsonl"
    assert main.main(["spectrum", "construct", "--n", "4", "--no-cache"]) == 0
    expected = capsys.readouterr().out

    from constructive import base_pool
    from spectrum_io import write_pool

    write_pool(base_pool(3), str(pool))
    assert "[POOL] Wrote" in capsys.readouterr().out
    code, out, err = run(capsys, "spectrum", "construct", "--n", "4", "--pool", str(pool))
    assert code == 0
    assert out == expected
    assert "Base pool n=3" in err

    assert run(capsys, "spectrum", "construct", "--n", "4", "--pool", str(tmp_path / "none.jsonl"))[0] == 2


def test_argparse_errors_exit_2(capsys):
    assert main.main(["spectrum"]) == 2
    assert main.main(["rvalue", "--n", "3"]) == 2
    assert main.main(["bogus"]) == 2


def test_version_flag(capsys):
    assert main.main(["--version"]) == 0
    assert capsys.readouterr().out.strip() == "v0.4.0"


def test_format_log_line():
    assert main.format_log_line("[SWEEP] WARNING: slow", now="12:00:00") == "[12:00:00] WARN: [SWEEP]: slow"
    assert main.format_log_line("[CLI] ERROR: bad input", now="12:00:00") == "[12:00:00] ERROR: [CLI]: bad input"
    assert main.format_log_line("[POOL] Wrote 3", now="12:00:00") == "[12:00:00] INFO: [POOL]: Wrote 3"
    assert main.format_log_line("plain message", now="12:00:00") == "[12:00:00] INFO: plain message"


def test_debug_lines_need_verbose(monkeypatch):
    assert main.format_log_line("[LIFT] DEBUG: R_L0", now="t") is None
    monkeypatch.setattr(config, "VERBOSE", True)
    assert main.format_log_line("[LIFT] DEBUG: R_L0", now="t") == "[t] DEBUG: [LIFT]: R_L0"


def test_color_only_on_a_tty(monkeypatch):
    monkeypatch.setattr(config, "LOG_COLOR", True)
    line = main.format_log_line("[SWEEP] started", now="t", color=True)
    assert main.c_magenta in line and main.c_reset in line
    # capsys stderr is not a terminal
    assert main._use_color() is False


def test_timestamped_print_goes_to_stderr(capsys):
    previous = main.install_log_hook()
    try:
        print("[SWEEP] hello")
        print("[SWEEP] DEBUG: hidden")
    finally:
        builtins.print = previous
    out, err = capsys.readouterr()
    assert out == ""
    assert "INFO: [SWEEP]: hello" in err
    assert "hidden" not in err


def test_verbose_flag_shows_debug_and_is_restored(capsys):
    code, _, err = run(capsys, "--verbose", "rvalue", "--n", "3", "--set", "1,2,3")
    assert code == 0
    assert "DEBUG: [CLI]: rvalue" in err
    assert config.VERBOSE is False
    assert builtins.print is not main.timestamped_print
