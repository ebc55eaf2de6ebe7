import json
from pathlib import Path

import pytest

from vizrec.cli import main


@pytest.fixture(scope="module")
def synth_dir(tmp_path_factory):
    root = tmp_path_factory.mktemp("cli")
    assert main(["synth", "--n", "60", "--seed", "4", "--out", str(root / "synth")]) == 0
    return root


def test_synth_writes_records(synth_dir):
    records = list((synth_dir / "synth" / "records").glob("*.json"))
    assert len(records) == 60
    assert (synth_dir / "synth" / "resolved_config.json").exists()


def test_features_outputs_and_thread_invariance(synth_dir):
    corpus = str(synth_dir / "synth" / "records")
    assert main(["features", "--corpus", corpus, "--out", str(synth_dir / "f1"), "--threads", "1"]) == 0
    assert main(["features", "--corpus", corpus, "--out", str(synth_dir / "f2"), "--threads", "4"]) == 0
    a = (synth_dir / "f1" / "dataset_features.csv").read_bytes()
    b = (synth_dir / "f2" / "dataset_features.csv").read_bytes()
    assert a == b
    header = a.decode().splitlines()[0]
    assert len(header.split(",")) == 842  # id + 841 features
    manifest = json.loads((synth_dir / "f1" / "manifest.json").read_text())
    assert manifest["masks"]["dataset"]["All"] == 841


def test_choices_extraction(synth_dir):
    corpus = str(synth_dir / "synth" / "records")
    assert main(["choices", "--corpus", corpus, "--out", str(synth_dir / "ch")]) == 0
    lines = (synth_dir / "ch" / "visualization_choices.csv").read_text().splitlines()
    assert len(lines) == 61
    assert lines[0] == "fid,visualization_type,has_shared_axis,is_homogeneous"


def test_cv_command_deterministic(synth_dir):
    corpus = str(synth_dir / "synth" / "records")
    for out in ("cv1", "cv2"):
        code = main([
            "cv", "--corpus", corpus, "--task", "VT2", "--model", "lr",
            "--seed", "7", "--out", str(synth_dir / out),
        ])
        assert code == 0
    a = (synth_dir / "cv1" / "cv_report.json").read_bytes()
    b = (synth_dir / "cv2" / "cv_report.json").read_bytes()
    assert a == b
    report = json.loads(a)
    assert report["mean"] >= 0.9


def test_train_recommend_importances(synth_dir, tmp_path):
    corpus = str(synth_dir / "synth" / "records")
    model_dir = synth_dir / "rf"
    code = main([
        "train", "--corpus", corpus, "--task", "VT2", "--model", "rf",
        "--hyperparameters", '{"n_estimators": 10}', "--skip-cv",
        "--seed", "3", "--out", str(model_dir),
    ])
    assert code == 0
    document = json.loads((model_dir / "model.json").read_text())
    assert document["family"] == "random_forest"
    assert (model_dir / "preprocessor.json").exists()
    manifest_lines = (model_dir / "split_manifest.csv").read_text().splitlines()
    assert manifest_lines[0] == "id,split,fold"
    assert len(manifest_lines) > 1

    assert main(["importances", "--model-dir", str(model_dir), "--out", str(tmp_path / "imp")]) == 0
    top = json.loads((tmp_path / "imp" / "importances.json").read_text())[0]
    # The planted has-string-column rule surfaces through the type block
    # (has_string_type, all_quantitative_type, percent_categorical_type, ...).
    assert "_type" in top["feature"]

    data = tmp_path / "data.csv"
    data.write_text("a,b\n1,5.5\n2,3.25\n3,4.75\n")
    assert main([
        "recommend", "--data", str(data), "--model-dir", str(model_dir),
        "--top-k", "2", "--out", str(tmp_path / "rec"),
    ]) == 0
    rec = json.loads((tmp_path / "rec" / "recommendations.json").read_text())
    assert rec["recommendations"][0]["visualization_type"] == "line"  # no string column
    probs = list(rec["class_probabilities"].values())
    assert sum(probs) == pytest.approx(1.0, abs=1e-9)
    spec_doc = rec["recommendations"][0]["chart_spec"]
    assert spec_doc["traces"][0]["type"] == "line"


def test_recommend_rejects_empty_dataset(synth_dir, tmp_path):
    corpus = str(synth_dir / "synth" / "records")
    model_dir = synth_dir / "rf"
    empty = tmp_path / "empty.csv"
    empty.write_text("a,b\n")
    code = main(["recommend", "--data", str(empty), "--model-dir", str(model_dir), "--out", str(tmp_path / "r2")])
    assert code == 2


def test_benchmark_command(synth_dir, tmp_path):
    votes = tmp_path / "votes.csv"
    rows = ["dataset_id,worker_id,choice"]
    for d in range(4):
        for w in range(10):
            rows.append(f"d{d},w{w},{'bar' if (d + w) % 3 else 'line'}")
    votes.write_text("\n".join(rows) + "\n")
    preds = tmp_path / "preds.csv"
    preds.write_text("dataset_id,choice\n" + "\n".join(f"d{d},bar" for d in range(4)) + "\n")
    code = main([
        "benchmark", "--votes", str(votes), "--predictions", f"mine={preds}",
        "--replicates", "500", "--seed", "2", "--out", str(tmp_path / "bench"),
    ])
    assert code == 0
    payload = json.loads((tmp_path / "bench" / "benchmark.json").read_text())
    assert payload["reports"]["modal_oracle"]["cars"] == pytest.approx(100.0)
    assert 0 < payload["reports"]["mine"]["cars"] <= 100
    assert 0 <= payload["gini"]["mean"] <= 0.5


def test_ingest_load_and_dedup(synth_dir, tmp_path):
    corpus = str(synth_dir / "synth" / "records")
    out = tmp_path / "ingested"
    assert main(["ingest", "--corpus", corpus, "--dedup", "per_user", "--seed", "2", "--out", str(out)]) == 0
    summary = json.loads((out / "summary.json").read_text())
    assert summary["records"] == 60  # synthetic users are unique, nothing removed
    assert (out / "records").is_dir()


def test_ingest_fetch_url(tmp_path):
    import threading
    from http.server import HTTPServer

    from test_client import FixtureHandler, _record

    server = HTTPServer(("127.0.0.1", 0), FixtureHandler)
    threading.Thread(target=server.serve_forever, daemon=True).start()
    FixtureHandler.pages = {0: [_record("a"), _record("b")], 1: []}
    FixtureHandler.fail_first = 0
    FixtureHandler.requests_seen = []
    try:
        out = tmp_path / "fetched"
        code = main(["ingest", "--fetch-url", f"http://127.0.0.1:{server.server_port}",
                     "--max-pages", "3", "--out", str(out)])
        assert code == 0
        assert sorted(p.name for p in (out / "records").glob("*.json")) == ["a.json", "b.json"]
    finally:
        server.shutdown()


def test_exit_codes(tmp_path):
    assert main(["cv", "--corpus", str(tmp_path / "none"), "--task", "VT2", "--model", "lr", "--out", str(tmp_path / "o")]) == 2
    assert main(["cv", "--task", "VT2", "--model", "lr", "--out", "x"]) == 1  # missing --corpus
    assert main(["synth", "--rule", "nope", "--out", str(tmp_path / "s")]) == 1


def test_config_file_precedence(synth_dir, tmp_path):
    corpus = str(synth_dir / "synth" / "records")
    config = tmp_path / "config.json"
    config.write_text(json.dumps({"seed": 9, "cv": {"task": "VT2", "model": "nb", "corpus_dir": corpus}}))
    out = tmp_path / "from_config"
    code = main(["--config", str(config), "cv", "--task", "VT2", "--model", "nb",
                 "--corpus", corpus, "--out", str(out)])
    assert code == 0
    resolved = json.loads((out / "resolved_config.json").read_text())
    assert resolved["seed"] == 9  # picked up from the config file
    # explicit flag beats the config
    out2 = tmp_path / "flag_wins"
    code = main(["--config", str(config), "cv", "--task", "VT2", "--model", "nb",
                 "--corpus", corpus, "--seed", "4", "--out", str(out2)])
    assert code == 0
    assert json.loads((out2 / "resolved_config.json").read_text())["seed"] == 4
