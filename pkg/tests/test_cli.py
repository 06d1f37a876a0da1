import csv
import json
import logging

import pytest

from pqwf.cli import main
from pqwf.config import DEFAULT_CONFIG

SMALL = {
    "dataset": {"signals_per_class": 8},
    "split": {"train_per_class": 6, "test_per_class": 2},
    "classifiers": {"svm": {"tune": "never"}, "rf": {"n_trees": 10}},
}


@pytest.fixture
def small_config(tmp_path):
    path = tmp_path / "small.json"
    path.write_text(json.dumps(SMALL))
    return str(path)


def run(*argv):
    return main([str(a) for a in argv])


def test_print_default_config(capsys):
    assert run("--print-default-config") == 0
    printed = json.loads(capsys.readouterr().out)
    assert printed == json.loads(json.dumps(DEFAULT_CONFIG))
    assert printed["dataset"]["signals_per_class"] == 700


def test_generate_is_byte_identical(tmp_path, small_config):
    assert run("generate", "--config", small_config, "--out", tmp_path / "a") == 0
    assert run("generate", "--config", small_config, "--out", tmp_path / "b") == 0
    a = (tmp_path / "a" / "dataset.csv").read_bytes()
    assert a == (tmp_path / "b" / "dataset.csv").read_bytes()
    header = a.split(b"\n", 1)[0].decode().split(",")
    assert header[:5] == ["id", "class_code", "class_name", "seed", "param_json"]
    assert header[5] == "s0" and header[-1] == "s639"


def test_one_signal_per_class(tmp_path):
    cfg = tmp_path / "one.json"
    cfg.write_text(json.dumps({"dataset": {"signals_per_class": 1}}))
    assert run("generate", "--config", cfg, "--out", tmp_path) == 0
    with open(tmp_path / "dataset.csv") as fh:
        assert len(list(csv.reader(fh))) == 12


def test_extract_rows_and_determinism(tmp_path, small_config):
    out = tmp_path / "o"
    run("generate", "--config", small_config, "--out", out)
    assert run("extract", "--config", small_config, "--out", out) == 0
    first = (out / "features.csv").read_bytes()
    assert run("extract", "--config", small_config, "--out", out) == 0
    assert first == (out / "features.csv").read_bytes()
    lines = first.decode().strip().split("\n")
    assert lines[0] == "id,class_code,entropy,std_dev,mean,skewness,kurtosis"
    assert len(lines) == 1 + 88


def test_degenerate_row_skipped_with_warning(tmp_path, small_config, caplog, capsys):
    out = tmp_path / "o"
    run("generate", "--config", small_config, "--out", out)
    path = out / "dataset.csv"
    with open(path) as fh:
        rows = list(csv.reader(fh))
    rows[4][5:] = ["0"] * (len(rows[4]) - 5)
    with open(path, "w", newline="") as fh:
        csv.writer(fh, lineterminator="\n").writerows(rows)
    with caplog.at_level(logging.WARNING):
        assert run("extract", "--config", small_config, "--out", out) == 0
    assert f"signal {rows[4][0]} skipped" in caplog.text
    assert "warnings: 1" in capsys.readouterr().out
    assert len((out / "features.csv").read_text().strip().split("\n")) == 1 + 87


def test_malformed_csv_names_line(tmp_path, small_config, caplog):
    out = tmp_path / "o"
    run("generate", "--config", small_config, "--out", out)
    path = out / "dataset.csv"
    lines = path.read_text().split("\n")
    lines[3] = lines[3].rsplit(",", 1)[0] + ",not-a-number"
    path.write_text("\n".join(lines))
    assert run("extract", "--config", small_config, "--out", out) == 3
    assert "dataset.csv:4:" in caplog.text


def test_unwritable_output(tmp_path, small_config):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    assert run("generate", "--config", small_config, "--out", blocker / "sub") == 2


def test_missing_input_file(tmp_path, small_config):
    assert run("extract", "--config", small_config, "--out", tmp_path) == 2


def test_bad_config_is_a_parse_error(tmp_path):
    cfg = tmp_path / "bad.json"
    cfg.write_text(json.dumps({"dataset": {"no_such_key": 1}}))
    assert run("generate", "--config", cfg, "--out", tmp_path) == 3


def test_train_eval_subset_and_exit_code(tmp_path, small_config):
    out = tmp_path / "o"
    run("generate", "--config", small_config, "--out", out)
    run("extract", "--config", small_config, "--out", out)
    code = run("train-eval", "--config", small_config, "--out", out, "--classifiers", "knn")
    report = json.loads((out / "report.json").read_text())
    assert list(report["classifiers"]) == ["knn"]
    assert code == (0 if report["comparison"]["passed"] else 1)
    assert (out / "models" / "knn.json").exists()
    assert not (out / "models" / "rf.json").exists()


def test_infeasible_split(tmp_path, small_config):
    out = tmp_path / "o"
    run("generate", "--config", small_config, "--out", out)
    run("extract", "--config", small_config, "--out", out)
    cfg = tmp_path / "split.json"
    cfg.write_text(json.dumps({**SMALL, "split": {"train_per_class": 8, "test_per_class": 2}}))
    assert run("train-eval", "--config", cfg, "--out", out) == 4


def test_plot_series(tmp_path, small_config):
    out = tmp_path / "o"
    run("generate", "--config", small_config, "--out", out)
    swell_id = 8  # first C2 row: ids run class by class
    assert run("plot", "--config", small_config, "--out", out, "--id", swell_id) == 0
    with open(out / f"signal_{swell_id}_waveform.csv") as fh:
        assert len(list(csv.DictReader(fh))) == 640
    with open(out / f"signal_{swell_id}_details.csv") as fh:
        levels = [int(r["level"]) for r in csv.DictReader(fh)]
    assert [levels.count(j) for j in (1, 2, 3)] == [320, 160, 80]
    svg = (out / f"signal_{swell_id}.svg").read_text()
    assert svg.startswith("<svg") and "C2 Swell" in svg
    first = (out / f"signal_{swell_id}_details.csv").read_bytes()
    run("plot", "--config", small_config, "--out", out, "--id", swell_id)
    assert first == (out / f"signal_{swell_id}_details.csv").read_bytes()


def test_plot_unknown_id(tmp_path, small_config):
    run("generate", "--config", small_config, "--out", tmp_path)
    assert run("plot", "--config", small_config, "--out", tmp_path, "--id", 10_000) == 5


def test_run_equals_stepwise(tmp_path, small_config):
    a, b = tmp_path / "a", tmp_path / "b"
    code_run = run("run", "--config", small_config, "--out", a)
    run("generate", "--config", small_config, "--out", b)
    run("extract", "--config", small_config, "--out", b)
    code_steps = run("train-eval", "--config", small_config, "--out", b)
    assert code_run == code_steps
    for name in ("dataset.csv", "features.csv", "report.json", "models/knn.json",
                 "models/svm.json", "models/rf.json"):
        assert (a / name).read_bytes() == (b / name).read_bytes(), name
