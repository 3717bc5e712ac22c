import json
import os

import pytest

import enumerator
from enumerator import (
    GrayWalker,
    ShardSpec,
    enumerate_zero_free,
    read_shard_done,
    run_sharded,
    shard_checkpoint_path,
    shard_done_path,
    write_shard_done,
)
from errors import CheckpointError, SweepInterrupted
from gf2n import FieldSpec
from spectrum_io import dump_table_json


def test_resume_reproduces_straight_run(tmp_path):
    straight = enumerate_zero_free(4, count_mode=True)
    ckpt = str(tmp_path / "sweep.json")

    with pytest.raises(SweepInterrupted) as exc:
        enumerate_zero_free(4, count_mode=True, checkpoint_path=ckpt, max_steps=5000)
    assert exc.value.checkpoints == [ckpt]
    assert exc.value.partial.visited == 5001
    assert os.path.exists(ckpt)

    resumed = enumerate_zero_free(4, count_mode=True, checkpoint_path=ckpt, resume=True)
    assert dump_table_json(resumed) == dump_table_json(straight)
    # completed runs clean up after themselves
    assert not os.path.exists(ckpt)


def test_resume_in_several_hops(tmp_path):
    straight = enumerate_zero_free(3, max_size=7)
    ckpt = str(tmp_path / "hops.json")
    for _ in range(3):
        with pytest.raises(SweepInterrupted):
            enumerate_zero_free(3, max_size=7, checkpoint_path=ckpt, resume=True, max_steps=20)
    resumed = enumerate_zero_free(3, max_size=7, checkpoint_path=ckpt, resume=True)
    assert dump_table_json(resumed) == dump_table_json(straight)


def test_checkpoint_file_contents(tmp_path):
    ckpt = str(tmp_path / "c.json")
    with pytest.raises(SweepInterrupted):
        enumerate_zero_free(4, max_size=8, checkpoint_path=ckpt, max_steps=77)
    with open(ckpt, encoding="utf-8") as f:
        data = json.load(f)
    assert data["version"] == enumerator.CHECKPOINT_VERSION
    assert data["n"] == 4 and data["poly"] == "0x13"
    assert data["step"] == 77
    assert int(data["bits"], 16) == enumerator.gray(77) << 1
    assert data["counts"] is None
    assert not os.path.exists(ckpt + ".tmp")


def test_periodic_checkpoints(tmp_path, monkeypatch):
    monkeypatch.setattr("config.CHECKPOINT_EVERY", 4096)
    calls = []
    original = GrayWalker.save_checkpoint

    def counting(self, path=None):
        calls.append(self.step)
        return original(self, path)

    monkeypatch.setattr(GrayWalker, "save_checkpoint", counting)
    enumerate_zero_free(4, checkpoint_path=str(tmp_path / "p.json"))
    assert calls == [4096 * i for i in range(1, 8)]


def test_checkpoint_for_a_different_run_is_rejected(tmp_path):
    ckpt = str(tmp_path / "c.json")
    with pytest.raises(SweepInterrupted):
        enumerate_zero_free(4, checkpoint_path=ckpt, max_steps=100)

    with pytest.raises(CheckpointError, match="different run"):
        enumerate_zero_free(4, max_size=6, checkpoint_path=ckpt, resume=True)
    with pytest.raises(CheckpointError, match="different run"):
        enumerate_zero_free(4, count_mode=True, checkpoint_path=ckpt, resume=True)


def test_tampered_checkpoint_is_rejected(tmp_path):
    ckpt = tmp_path / "c.json"
    with pytest.raises(SweepInterrupted):
        enumerate_zero_free(4, checkpoint_path=str(ckpt), max_steps=100)
    data = json.loads(ckpt.read_text(encoding="utf-8"))

    bad_bits = dict(data, bits="0x02")
    ckpt.write_text(json.dumps(bad_bits), encoding="utf-8")
    with pytest.raises(CheckpointError, match="Gray position"):
        enumerate_zero_free(4, checkpoint_path=str(ckpt), resume=True)

    bad_r = dict(data, r=data["r"] + 6)
    ckpt.write_text(json.dumps(bad_r), encoding="utf-8")
    with pytest.raises(CheckpointError):
        enumerate_zero_free(4, checkpoint_path=str(ckpt), resume=True)

    ckpt.write_text("{not json", encoding="utf-8")
    with pytest.raises(CheckpointError):
        enumerate_zero_free(4, checkpoint_path=str(ckpt), resume=True)


def test_resume_without_checkpoint_starts_fresh(tmp_path, capsys):
    table = enumerate_zero_free(3, checkpoint_path=str(tmp_path / "none.json"), resume=True)
    assert table.visited == 1 << 7
    assert "no checkpoint" in capsys.readouterr().out


def test_stop_request_interrupts_at_poll_boundary(tmp_path):
    enumerator.request_stop()
    ckpt = str(tmp_path / "stop.json")
    with pytest.raises(SweepInterrupted) as exc:
        enumerate_zero_free(4, checkpoint_path=ckpt)
    assert exc.value.partial.visited == enumerator.STOP_POLL + 2
    assert os.path.exists(ckpt)


def test_sharded_resume_matches_straight_run(tmp_path):
    straight = run_sharded(4, shard_count=8, workers=1, count_mode=True)
    directory = str(tmp_path / "ckpt")

    enumerator.request_stop()
    with pytest.raises(SweepInterrupted) as exc:
        run_sharded(4, shard_count=8, workers=1, count_mode=True, checkpoint_dir=directory)
    first = shard_checkpoint_path(directory, 4, ShardSpec(0, 8))
    assert exc.value.checkpoints == [first]

    enumerator.clear_stop()
    resumed = run_sharded(4, shard_count=8, workers=1, count_mode=True, checkpoint_dir=directory, resume=True)
    assert dump_table_json(resumed) == dump_table_json(straight)
    assert os.listdir(directory) == []


def test_walker_round_trip_through_checkpoint(tmp_path):
    field = FieldSpec.of(4)
    w = GrayWalker(field, 8, ShardSpec(3, 4), count_mode=True, checkpoint_path=str(tmp_path / "w.json"))
    assert not w.run(max_steps=300)
    restored = GrayWalker.from_checkpoint(str(tmp_path / "w.json"), field, 8, ShardSpec(3, 4), True)
    assert (restored.step, restored.bits, restored.r, restored.card) == (w.step, w.bits, w.r, w.card)
    assert restored.first == w.first
    assert restored.counts == w.counts


def test_sharded_resume_skips_finished_shards(tmp_path, monkeypatch, mocker):
    straight = run_sharded(4, shard_count=8, workers=1, count_mode=True)
    directory = str(tmp_path / "ckpt")
    original = enumerator._run_shard
    walked = []

    def run_then_stop(*args):
        walked.append(args[3].index)
        out = original(*args)
        if len(walked) == 3:
            enumerator.request_stop()
        return out

    monkeypatch.setattr(enumerator, "_run_shard", run_then_stop)
    with pytest.raises(SweepInterrupted) as exc:
        run_sharded(4, shard_count=8, workers=1, count_mode=True, checkpoint_dir=directory)
    assert exc.value.checkpoints == []
    assert sorted(os.listdir(directory)) == sorted(
        os.path.basename(shard_done_path(directory, 4, ShardSpec(i, 8))) for i in range(3)
    )

    enumerator.clear_stop()
    sweeps = mocker.spy(enumerator, "enumerate_zero_free")
    resumed = run_sharded(4, shard_count=8, workers=1, count_mode=True, checkpoint_dir=directory, resume=True)
    assert walked == list(range(8))
    assert sweeps.call_count == 5
    assert dump_table_json(resumed) == dump_table_json(straight)
    assert os.listdir(directory) == []


def test_finished_shard_marker_for_a_different_run_is_rejected(tmp_path):
    field = FieldSpec.of(3)
    shard = ShardSpec(1, 4)
    table = enumerate_zero_free(3, max_size=7, shard=shard, count_mode=True)
    path = write_shard_done(str(tmp_path / "done.json"), table, 7, True)

    assert dump_table_json(read_shard_done(path, field, 7, shard, True)) == dump_table_json(table)
    with pytest.raises(CheckpointError, match="different run"):
        read_shard_done(path, field, 7, shard, False)
    with pytest.raises(CheckpointError, match="different run"):
        read_shard_done(path, field, 7, ShardSpec(2, 4), True)
    with pytest.raises(CheckpointError, match="different run"):
        read_shard_done(path, FieldSpec.of(4), 7, shard, True)

    (tmp_path / "done.json").write_text("{}", encoding="utf-8")
    with pytest.raises(CheckpointError):
        read_shard_done(path, field, 7, shard, True)
