import numpy as np
import pytest

from ioi_fusion.cli import main
from ioi_fusion.core import FusionConfig
from ioi_fusion.doa import write_wav
from ioi_fusion.scenario import SPEECH_BAND, synthesize_plane_waves


def test_run_writes_event_log_and_trace(suite_dir, tmp_path, capsys):
    trace = tmp_path / "trace.csv"
    assert main(["run", str(suite_dir / "s1_speak_facing_a.scn"), "--trace", str(trace)]) == 0
    out = capsys.readouterr().out
    assert out == "1.200,AudioVision,1,Monitoring;VocalAttention;VisualAttention;IoI\n"
    lines = trace.read_text().splitlines()
    assert len(lines) == 60 and lines[0] == "0.000,Monitoring,"
    assert "1.200,IoI,1" in lines


def test_run_is_byte_identical(suite_dir, tmp_path):
    paths = [tmp_path / "a.log", tmp_path / "b.log"]
    for p in paths:
        assert main(["run", str(suite_dir / "gaze_two_people.scn"), "--seed", "9", "--events", str(p)]) == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()
    assert paths[0].read_bytes()


def test_run_with_config_file(suite_dir, tmp_path, capsys):
    cfg = tmp_path / "fusion.cfg"
    cfg.write_text("enable_vision_path = false\n")
    assert main(["run", str(suite_dir / "s2_gaze_a.scn"), "--config", str(cfg)]) == 0
    assert capsys.readouterr().out == ""


def test_run_bad_path_is_data_error(tmp_path, capsys):
    assert main(["run", str(tmp_path / "missing.scn")]) == 2
    assert "error" in capsys.readouterr().err


def test_run_malformed_scenario(tmp_path):
    bad = tmp_path / "bad.scn"
    bad.write_text("[meta]\nduration = 3\n[person 1]\nwaypoint 1 1 0 0\nwaypoint 0 1 0 0\n")
    assert main(["run", str(bad)]) == 2


def test_bad_config_is_data_error(suite_dir, tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("delta_l = 400\n")
    assert main(["run", str(suite_dir / "s1_speak_facing_a.scn"), "--config", str(cfg)]) == 2


@pytest.mark.parametrize("argv", [[], ["frobnicate"], ["run"], ["eval", "only-one"]])
def test_usage_errors(argv, capsys):
    assert main(argv) == 1


def test_eval_perfect_log(suite_dir, tmp_path, capsys):
    log = tmp_path / "ev.log"
    log.write_text("1.200,AudioVision,1,Monitoring;VocalAttention;VisualAttention;IoI\n")
    assert main(["eval", str(log), str(suite_dir / "s1_speak_facing_a.scn"), "--csv"]) == 0
    row = capsys.readouterr().out.splitlines()[1]
    assert row.endswith(",1,0,0,100.00,100.00,100.00")


def test_eval_bad_log(suite_dir, tmp_path):
    log = tmp_path / "ev.log"
    log.write_text("not,a,log\n")
    assert main(["eval", str(log), str(suite_dir / "s1_speak_facing_a.scn")]) == 2


def test_doa_dump(tmp_path, capsys):
    cfg = FusionConfig()
    x = synthesize_plane_waves([(-35.0, SPEECH_BAND, 1.0)], cfg.array, 8000, 16000, np.random.default_rng(0), 25)
    wav = tmp_path / "x.wav"
    write_wav(wav, x, 16000)
    assert main(["doa-dump", str(wav)]) == 0
    rows = [line.split(",") for line in capsys.readouterr().out.splitlines()]
    assert len(rows) == 360
    az = np.array([float(a) for a, _ in rows])
    val = np.array([float(v) for _, v in rows])
    assert az[np.argmax(val)] == pytest.approx(-35.0, abs=2)


def test_doa_dump_wrong_channels(tmp_path):
    wav = tmp_path / "stereo.wav"
    write_wav(wav, np.random.default_rng(0).standard_normal((4000, 2)), 16000)
    assert main(["doa-dump", str(wav)]) == 2


def test_suite_table(suite_dir, capsys):
    assert main(["suite", str(suite_dir), "--csv"]) == 0
    rows = {line.split(",")[0]: line.split(",") for line in capsys.readouterr().out.splitlines()[1:]}
    assert float(rows["Full-IoI"][5]) > float(rows["AV-IoI"][5])


def test_suite_empty_dir(tmp_path):
    assert main(["suite", str(tmp_path)]) == 2
