import csv
import json

import numpy as np
import pytest

from grfg.cli import main
from grfg.data import write_csv
from grfg.expr import parse_name, evaluate
from grfg.data import load_csv
from conftest import make_product_table

FAST = {"epochs": 1, "steps_per_epoch": 2}


@pytest.fixture
def data_csv(tmp_path):
    path = tmp_path / "data.csv"
    write_csv(make_product_table(1, n=60), path, "y")
    return path


@pytest.fixture
def config(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(FAST))
    return path


def run_cli(data_csv, out, config, policy="grfg", seed=0):
    return main(["run", "--data", str(data_csv), "--target", "y", "--task", "regression",
                 "--config", str(config), "--seed", str(seed), "--out", str(out), "--policy", policy])


def test_run_writes_all_outputs(data_csv, config, tmp_path, capsys):
    out = tmp_path / "out"
    assert run_cli(data_csv, out, config) == 0
    for name in ("report.json", "features.csv", "provenance.tsv", "checkpoint.bin"):
        assert (out / name).is_file()
    report = json.loads((out / "report.json").read_text())
    assert len(report["records"]) == 2

    table = load_csv(data_csv, "y", "regression")
    lines = [l.split("\t") for l in (out / "provenance.tsv").read_text().splitlines()]
    with open(out / "features.csv") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], np.array(rows[1:], dtype=float)
    assert header[:-1] == [name for name, _ in lines] == [f["name"] for f in report["best_features"]]
    for i, (_, expr) in enumerate(lines):
        assert evaluate(parse_name(expr, table.names), table).tobytes() == body[:, i].tobytes()

    capsys.readouterr()
    assert main(["eval", "--data", str(data_csv), "--target", "y", "--task", "regression",
                 "--config", str(config), "--seed", "0", "--provenance", str(out / "provenance.tsv")]) == 0
    printed = json.loads(capsys.readouterr().out)
    assert printed["score"] == report["best_score"]


def test_rdg_has_no_checkpoint(data_csv, config, tmp_path):
    out = tmp_path / "rdg"
    assert run_cli(data_csv, out, config, policy="rdg") == 0
    assert (out / "report.json").is_file() and not (out / "checkpoint.bin").exists()


def test_unknown_config_key(data_csv, tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"epochs": 1, "agent": {"gama": 0.5}}))
    assert run_cli(data_csv, tmp_path / "o", bad) == 1
    assert "agent.gama" in capsys.readouterr().err


def test_eval_missing_column(data_csv, tmp_path, capsys):
    prov = tmp_path / "p.tsv"
    prov.write_text("(x1*zz)\t(x1*zz)\n")
    code = main(["eval", "--data", str(data_csv), "--target", "y", "--task", "regression",
                 "--seed", "0", "--provenance", str(prov)])
    assert code == 1 and "zz" in capsys.readouterr().err


def test_eval_empty_provenance_uses_original(data_csv, tmp_path, capsys):
    from grfg.engine import RunConfig, evaluate_features
    prov = tmp_path / "p.tsv"
    prov.write_text("")
    assert main(["eval", "--data", str(data_csv), "--target", "y", "--task", "regression",
                 "--seed", "4", "--provenance", str(prov)]) == 0
    score = json.loads(capsys.readouterr().out)["score"]
    table = load_csv(data_csv, "y", "regression")
    assert score == evaluate_features(table, list(table.names), RunConfig(seed=4))


def test_usage_error_exit_code(capsys):
    with pytest.raises(SystemExit) as info:
        main(["run", "--data", "x.csv"])
    assert info.value.code == 1


def test_missing_data_file(tmp_path, capsys):
    assert main(["eval", "--data", str(tmp_path / "no.csv"), "--target", "y", "--task", "regression",
                 "--provenance", str(tmp_path / "p.tsv")]) == 1
