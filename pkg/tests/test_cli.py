from __future__ import annotations

import csv
import hashlib
import json

import numpy as np
import pytest
from conftest import DEMO_MANIFEST, ROOT

from cgems import schema
from cgems.cli import main

CORPUS = ROOT / "demo" / "corpus"


def sha(path):
    return hashlib.sha256(path.read_bytes()).hexdigest()


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture(scope="module")
def demo_csv(tmp_path_factory):
    out = tmp_path_factory.mktemp("collect") / "demo.csv"
    assert main(["collect", str(DEMO_MANIFEST), "-o", str(out)]) == 0
    return out


@pytest.fixture(scope="module")
def trained(demo_csv, tmp_path_factory):
    out = tmp_path_factory.mktemp("train")
    assert main(["train", str(demo_csv), "--out-dir", str(out), "--features", "8", "--seed", "0"]) == 0
    return out


# -- analyze / compare -----------------------------------------------------


def test_analyze_empty_file(tmp_path, capsys):
    src = tmp_path / "empty.py"
    src.write_text("")
    code, out, _ = run(capsys, "analyze", src)
    data = json.loads(out)
    assert code == 0
    assert (data["LOC"], data["SLOC"], data["Comments"]) == (0, 0, 0)
    assert data["CC Number"] == 1 and data["CC Module Level"] is True
    assert data["run_info"]["command"] == "analyze"


def test_analyze_writes_output_and_run_info(tmp_path, capsys):
    out = tmp_path / "r" / "report.json"
    code, _, _ = run(capsys, "analyze", CORPUS / "factorial" / "generated.py", "-o", out)
    assert code == 0
    assert json.loads(out.read_text())["LOC"] > 0
    info = json.loads((tmp_path / "r" / "report.json.run-info.json").read_text())
    assert set(info) >= {"schema_version", "command", "seed", "config", "config_hash", "versions"}


def test_analyze_missing_file(tmp_path, capsys):
    code, _, err = run(capsys, "analyze", tmp_path / "nope.py")
    assert code == 2 and "cannot read" in err


def test_compare_identical(capsys):
    f = CORPUS / "gcd" / "reference.py"
    code, out, err = run(capsys, "compare", f, f, "--corrected", f)
    data = json.loads(out)
    assert code == 0 and err == ""
    assert data["Sequence Ratio"] == 1.0 and data["Edits"] == 0
    assert data["Cosine similarity"] == 0.0 and data["BLEU"] == pytest.approx(100.0)


def test_compare_without_corrected_prints_notice(capsys):
    f = CORPUS / "gcd"
    code, _, err = run(capsys, "compare", f / "generated.py", f / "reference.py")
    assert code == 0 and "notice" in err


def test_compare_missing_reference(tmp_path, capsys):
    code, _, _ = run(capsys, "compare", CORPUS / "gcd" / "generated.py", tmp_path / "missing.py")
    assert code == 2


# -- collect ---------------------------------------------------------------


def test_collect_header_and_rows(demo_csv):
    with demo_csv.open(newline="") as fh:
        rows = list(csv.reader(fh))
    assert tuple(rows[0]) == schema.CSV_HEADER
    assert len(rows) == 1 + len(json.loads(DEMO_MANIFEST.read_text()))
    assert (demo_csv.parent / "demo.csv.run-info.json").exists()


def test_collect_bad_manifest(tmp_path, capsys):
    bad = tmp_path / "m.json"
    bad.write_text("{not json")
    code, _, err = run(capsys, "collect", bad, "-o", tmp_path / "x.csv")
    assert code == 2 and "manifest" in err


def test_collect_rejects_zero_jobs(tmp_path, capsys):
    with pytest.raises(SystemExit) as info:
        main(["collect", str(DEMO_MANIFEST), "-o", str(tmp_path / "x.csv"), "--jobs", "0"])
    assert info.value.code == 2


# -- select-features / train -----------------------------------------------


def test_select_features_all_and_count(demo_csv, tmp_path, capsys):
    code, out, _ = run(capsys, "select-features", demo_csv, "--out-dir", tmp_path / "all")
    kept = out.split()
    assert code == 0 and kept
    code, out, _ = run(capsys, "select-features", demo_csv, "--out-dir", tmp_path / "three",
                       "--features", "3")
    assert code == 0 and len(out.splitlines()) == 3
    sel = json.loads((tmp_path / "three" / "selection.json").read_text())
    assert sel["schema_version"] == schema.SCHEMA_VERSION


def test_features_argument_validation(demo_csv, tmp_path):
    with pytest.raises(SystemExit) as info:
        main(["select-features", str(demo_csv), "--out-dir", str(tmp_path), "--features", "zero"])
    assert info.value.code == 2


def test_train_outputs(trained):
    for name in ("model.json", "selection.json", "selection.csv", "evaluation.json",
                 "history.json", "run-info.json"):
        assert (trained / name).exists(), name
    model = json.loads((trained / "model.json").read_text())
    assert model["layer_sizes"] == [8, 14, 12, 2]
    ev = json.loads((trained / "evaluation.json").read_text())
    assert len(ev["features"]) == 8
    assert ev["rows"]["train"] + ev["rows"]["test"] == ev["rows"]["original"] + ev["rows"]["synthetic"]


def test_train_all_features_and_repeatability(demo_csv, trained, tmp_path, capsys):
    code, _, _ = run(capsys, "train", demo_csv, "--out-dir", tmp_path / "again", "--features", "8")
    assert code == 0
    assert sha(tmp_path / "again" / "model.json") == sha(trained / "model.json")
    code, _, _ = run(capsys, "train", demo_csv, "--out-dir", tmp_path / "all", "--epochs", "50")
    assert code == 0
    kept = json.loads((tmp_path / "all" / "selection.json").read_text())["kept"]
    assert json.loads((tmp_path / "all" / "model.json").read_text())["layer_sizes"][0] == len(kept)


def test_train_bad_csv(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("Program,LOC\nx,1\n")
    code, _, _ = run(capsys, "train", bad, "--out-dir", tmp_path / "o")
    assert code == 2


# -- predict / explain -----------------------------------------------------


def test_predict_csv(demo_csv, trained, capsys):
    code, out, _ = run(capsys, "predict", trained / "model.json", demo_csv)
    preds = json.loads(out)["predictions"]
    assert code == 0 and len(preds) == 16
    for p in preds:
        assert sum(p["probabilities"]) == pytest.approx(1.0, abs=1e-9)
        assert p["class"] == int(np.argmax(p["probabilities"]))


def test_predict_row_width_mismatch(trained, capsys):
    code, _, err = run(capsys, "predict", trained / "model.json", "--row", "1,2,3")
    assert code == 2 and "expects 8" in err


def test_predict_unknown_program(demo_csv, trained, capsys):
    code, _, _ = run(capsys, "predict", trained / "model.json", demo_csv, "--program", "nope")
    assert code == 2


def test_explain_deterministic_with_artifacts(demo_csv, trained, tmp_path, capsys):
    args = ["explain", trained / "model.json", demo_csv, "--program", "gcd", "--n-samples", "800"]
    code, first, _ = run(capsys, *args, "-o", tmp_path / "a.json", "--bar-chart", tmp_path / "a.svg")
    assert code == 0
    code, second, _ = run(capsys, *args, "-o", tmp_path / "b.json")
    assert first == second
    assert (tmp_path / "a.json").read_text() == (tmp_path / "b.json").read_text()
    assert (tmp_path / "a.json.run-info.json").exists()
    assert (tmp_path / "a.svg").read_text().startswith("<svg")
    assert len(json.loads((tmp_path / "a.json").read_text())["weights"]) == 8


def test_explain_needs_single_instance(demo_csv, trained, capsys):
    code, _, err = run(capsys, "explain", trained / "model.json", demo_csv)
    assert code == 2 and "exactly one" in err


def test_missing_model(tmp_path, capsys):
    code, _, _ = run(capsys, "predict", tmp_path / "m.json", "--row", "1")
    assert code == 2
