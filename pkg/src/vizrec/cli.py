"""Command-line interface.

Subcommands: ingest, features, choices, train, cv, importances, recommend,
benchmark, synth. Flag values win over config-file values, which win over
defaults; every run writes a resolved-config snapshot next to its outputs.
Outputs contain no timestamps, so a rerun with the same inputs and seed is
byte-identical at any thread count.

Exit codes: 0 success, 1 usage error, 2 data error, 3 internal error.
"""

from __future__ import annotations

import json
import logging
import sys
from pathlib import Path

import click
import numpy as np

from . import __version__
from .choices import (
    ChoiceSet,
    VisualizationChoices,
    choices_of_traces,
    emit_chart_spec,
    get_task,
    parse_chart_spec,
)
from .errors import DataError, UsageError, VizrecError
from .evaluation import (
    cars_report,
    cross_validate,
    generate_synthetic_corpus,
    get_rule,
    load_predictions,
    load_votes,
    modal_predictions,
    random_predictions,
    vote_gini,
)
from .features import (
    column_feature_matrix,
    dataset_feature_matrix,
    manifest,
    manifest_hash,
)
from .ingest import CorpusClient, load_corpus, parse_table, save_corpus
from .models import ModelSpec, load_model, mdi_importances, save_model, train_model
from .pipeline import (
    FeaturePreprocessor,
    SplitPlan,
    build_task_dataset,
    deduplicate,
    make_folds,
    split_and_balance,
    split_indices,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_INTERNAL = 3


def _load_config(path: str | None) -> dict:
    if not path:
        return {}
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise UsageError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"config file is not valid JSON: {exc.msg}") from None


def _resolve(ctx: click.Context, command: str, **flags) -> dict:
    """Flags > config[command] > config top level > defaults (already in flags)."""
    config = ctx.obj.get("config", {})
    section = config.get(command, {})
    resolved = {}
    for key, value in flags.items():
        source = ctx.get_parameter_source(key)
        if source is not None and source.name != "DEFAULT":
            resolved[key] = value
        elif key in section:
            resolved[key] = section[key]
        elif key in config and not isinstance(config[key], dict):
            resolved[key] = config[key]
        else:
            resolved[key] = value
    return resolved


def _write_json(path: Path, payload) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n", encoding="utf-8")


def _snapshot(out_dir: Path, command: str, resolved: dict) -> None:
    _write_json(out_dir / "resolved_config.json", {"command": command, "version": __version__, **resolved})


@click.group(name="vizrec")
@click.version_option(__version__)
@click.option("--config", "config_path", type=click.Path(), default=None, help="JSON config file.")
@click.option("--verbose", "-v", is_flag=True, help="Log progress to stderr.")
@click.pass_context
def cli(ctx, config_path, verbose):
    """Visualization recommendation: profile, train, recommend, benchmark."""
    ctx.ensure_object(dict)
    ctx.obj["config"] = _load_config(config_path)
    logging.basicConfig(
        level=logging.INFO if verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )


@cli.command()
@click.option("--corpus", "corpus_dir", type=click.Path(), default=None, help="Directory of record files.")
@click.option("--fetch-url", default=None, help="Fetch records from <url>/plots?page=N instead.")
@click.option("--start-page", default=0, show_default=True)
@click.option("--max-pages", default=None, type=int, help="Page cap for fetching.")
@click.option("--rate-limit", default=0.0, show_default=True, help="Max requests per second (0 = unthrottled).")
@click.option("--dedup", "dedup_mode", type=click.Choice(["none", "exact", "per_user"]), default="none", show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--out", "out_dir", required=True, type=click.Path())
@click.pass_context
def ingest(ctx, corpus_dir, fetch_url, start_page, max_pages, rate_limit, dedup_mode, seed, out_dir):
    """Load (or fetch) a corpus, optionally deduplicate, and summarize it."""
    r = _resolve(ctx, "ingest", corpus_dir=corpus_dir, fetch_url=fetch_url, start_page=start_page,
                 max_pages=max_pages, rate_limit=rate_limit, dedup_mode=dedup_mode, seed=seed, out_dir=out_dir)
    out = Path(r["out_dir"])
    if not r["corpus_dir"] and not r["fetch_url"]:
        raise UsageError("ingest needs --corpus or --fetch-url")
    if r["fetch_url"]:
        client = CorpusClient(r["fetch_url"], rate_limit=r["rate_limit"])
        records = client.fetch_all(start_page=r["start_page"], max_pages=r["max_pages"])
        from .ingest import Corpus

        corpus = Corpus(records=records, provenance={"source": r["fetch_url"], "skipped": client.skipped})
        save_corpus(corpus, out / "records")
    else:
        corpus = load_corpus(r["corpus_dir"])
    if r["dedup_mode"] != "none":
        corpus = deduplicate(corpus, mode=r["dedup_mode"], seed=r["seed"])
        save_corpus(corpus, out / "records")
    summary = {
        "records": len(corpus),
        "users": len({rec.user_id for rec in corpus}),
        "columns": sum(rec.data.num_columns for rec in corpus),
        "provenance": corpus.provenance,
    }
    _write_json(out / "summary.json", summary)
    _snapshot(out, "ingest", r)
    click.echo(f"ingested {len(corpus)} records -> {out}")


@cli.command()
@click.option("--corpus", "corpus_dir", required=True, type=click.Path())
@click.option("--mask", default="All", show_default=True)
@click.option("--threads", default=1, show_default=True)
@click.option("--out", "out_dir", required=True, type=click.Path())
@click.pass_context
def features(ctx, corpus_dir, mask, threads, out_dir):
    """Write dataset-level and column-level feature matrices plus the manifest."""
    r = _resolve(ctx, "features", corpus_dir=corpus_dir, mask=mask, threads=threads, out_dir=out_dir)
    corpus = load_corpus(r["corpus_dir"])
    if len(corpus) == 0:
        raise DataError(f"corpus {r['corpus_dir']} has no records")
    out = Path(r["out_dir"])
    out.mkdir(parents=True, exist_ok=True)
    datasets = [rec.data for rec in corpus]
    dmat = dataset_feature_matrix(datasets, mask=r["mask"], threads=r["threads"])
    cmat = column_feature_matrix(datasets, mask=r["mask"], threads=r["threads"])
    (out / "dataset_features.csv").write_text(dmat.to_csv(), encoding="utf-8")
    (out / "dataset_features.jsonl").write_text(dmat.to_jsonl(), encoding="utf-8")
    (out / "column_features.csv").write_text(cmat.to_csv(), encoding="utf-8")
    (out / "column_features.jsonl").write_text(cmat.to_jsonl(), encoding="utf-8")
    _write_json(out / "manifest.json", manifest())
    _write_json(out / "summary.json", {
        "datasets": dmat.n_rows,
        "columns": cmat.n_rows,
        "dataset_feature_count": len(dmat.names),
        "column_feature_count": len(cmat.names),
        "mask": r["mask"],
    })
    _snapshot(out, "features", r)
    click.echo(f"wrote {dmat.n_rows} dataset rows and {cmat.n_rows} column rows -> {out}")


@cli.command()
@click.option("--corpus", "corpus_dir", required=True, type=click.Path())
@click.option("--out", "out_dir", required=True, type=click.Path())
@click.pass_context
def choices(ctx, corpus_dir, out_dir):
    """Extract visualization- and encoding-level design choices per record."""
    r = _resolve(ctx, "choices", corpus_dir=corpus_dir, out_dir=out_dir)
    corpus = load_corpus(r["corpus_dir"])
    out = Path(r["out_dir"])
    out.mkdir(parents=True, exist_ok=True)
    viz_lines = ["fid,visualization_type,has_shared_axis,is_homogeneous"]
    enc_lines = ["fid,column,column_name,mark_type,axis,is_shared_axis"]
    skipped = []
    for record in corpus:
        try:
            traces = parse_chart_spec(list(record.specification), record.data)
            cs = choices_of_traces(traces, record.data)
        except VizrecError as exc:
            skipped.append({"fid": record.fid, "reason": str(exc)})
            continue
        viz = cs.visualization
        viz_lines.append(
            f"{record.fid},{viz.visualization_type or ''},{str(viz.has_shared_axis).lower()},{str(viz.is_homogeneous).lower()}"
        )
        for enc in cs.encodings:
            enc_lines.append(
                f"{record.fid},{enc.column},{record.data.columns[enc.column].name},"
                f"{enc.mark_type},{enc.axis},{str(enc.is_shared_axis).lower()}"
            )
    (out / "visualization_choices.csv").write_text("\n".join(viz_lines) + "\n", encoding="utf-8")
    (out / "encoding_choices.csv").write_text("\n".join(enc_lines) + "\n", encoding="utf-8")
    _write_json(out / "skipped.json", skipped)
    _snapshot(out, "choices", r)
    click.echo(f"extracted choices for {len(viz_lines) - 1} records ({len(skipped)} skipped) -> {out}")


def _prepare_task(r) -> tuple:
    corpus = load_corpus(r["corpus_dir"])
    if r.get("dedup_mode", "none") != "none":
        corpus = deduplicate(corpus, mode=r["dedup_mode"], seed=r["seed"])
    task_dataset = build_task_dataset(corpus, r["task"], mask=r["mask"], threads=r.get("threads", 1))
    return corpus, task_dataset


def _model_spec(r) -> ModelSpec:
    hyper = r.get("hyperparameters") or {}
    if isinstance(hyper, str):
        hyper = json.loads(hyper)
    return ModelSpec(r["model"], hyper, seed=r["seed"])


_SHARED_TRAIN_OPTIONS = [
    click.option("--corpus", "corpus_dir", required=True, type=click.Path()),
    click.option("--task", required=True, help="VT2/VT3/VT6/HSA/MT2/MT3/MT6/ISA/XY."),
    click.option("--model", required=True, help="nb, knn, lr, rf or nn (or full family names)."),
    click.option("--mask", default="All", show_default=True),
    click.option("--hyperparameters", default=None, help="JSON object of model overrides."),
    click.option("--dedup", "dedup_mode", type=click.Choice(["none", "exact", "per_user"]), default="none", show_default=True),
    click.option("--folds", default=5, show_default=True),
    click.option("--seed", default=0, show_default=True),
    click.option("--threads", default=1, show_default=True),
    click.option("--out", "out_dir", required=True, type=click.Path()),
]


def _with_options(options):
    def wrap(fn):
        for option in reversed(options):
            fn = option(fn)
        return fn

    return wrap


@cli.command()
@_with_options(_SHARED_TRAIN_OPTIONS)
@click.option("--skip-cv", is_flag=True, help="Skip cross-validation, just fit the final model.")
@click.pass_context
def train(ctx, corpus_dir, task, model, mask, hyperparameters, dedup_mode, folds, seed, threads, out_dir, skip_cv):
    """Cross-validate, then fit and save a final model on a 60/20/20 split."""
    r = _resolve(ctx, "train", corpus_dir=corpus_dir, task=task, model=model, mask=mask,
                 hyperparameters=hyperparameters, dedup_mode=dedup_mode, folds=folds, seed=seed,
                 threads=threads, out_dir=out_dir, skip_cv=skip_cv)
    _, task_dataset = _prepare_task(r)
    spec = _model_spec(r)
    out = Path(r["out_dir"])
    out.mkdir(parents=True, exist_ok=True)

    if not r["skip_cv"]:
        report = cross_validate(spec, task_dataset, seed=r["seed"], folds=r["folds"])
        _write_json(out / "cv_report.json", report.to_dict())

    plan = SplitPlan(seed=r["seed"], fold_count=r["folds"])
    parts = split_and_balance(task_dataset, plan)
    raw_splits = split_indices(task_dataset, plan)
    folds_of_rows = make_folds(task_dataset.n_rows, r["folds"], r["seed"])
    fold_of = {}
    for fold_idx, rows in enumerate(folds_of_rows):
        for row in rows:
            fold_of[int(row)] = fold_idx
    manifest_lines = ["id,split,fold"]
    for split_name, rows in raw_splits.items():
        for row in rows:
            manifest_lines.append(f"{task_dataset.features.row_ids[row]},{split_name},{fold_of[int(row)]}")
    (out / "split_manifest.csv").write_text("\n".join(manifest_lines) + "\n", encoding="utf-8")

    preprocessor = FeaturePreprocessor().fit(parts["train"].features)
    X_train = preprocessor.transform(parts["train"].features)
    X_val = preprocessor.transform(parts["validation"].features)
    X_test = preprocessor.transform(parts["test"].features)
    classes = list(task_dataset.task.classes)
    fitted = train_model(spec, X_train, parts["train"].labels, classes=classes,
                         validation=(X_val, parts["validation"].labels))
    from .evaluation import accuracy

    test_accuracy = accuracy(fitted.predict(X_test), parts["test"].labels)
    fingerprint = task_dataset.features.manifest_fingerprint()
    save_model(fitted, out / "model.json", manifest_fingerprint=fingerprint,
               metadata={"task": task_dataset.task.task_id, "mask": r["mask"], "seed": r["seed"],
                         "test_accuracy": test_accuracy})
    (out / "preprocessor.json").write_text(preprocessor.to_json(), encoding="utf-8")
    _snapshot(out, "train", r)
    click.echo(f"trained {spec.family} on {task_dataset.task.task_id}: test accuracy {test_accuracy:.4f} -> {out}")


@cli.command()
@_with_options(_SHARED_TRAIN_OPTIONS)
@click.pass_context
def cv(ctx, corpus_dir, task, model, mask, hyperparameters, dedup_mode, folds, seed, threads, out_dir):
    """5-fold cross-validation report for one task/model/mask configuration."""
    r = _resolve(ctx, "cv", corpus_dir=corpus_dir, task=task, model=model, mask=mask,
                 hyperparameters=hyperparameters, dedup_mode=dedup_mode, folds=folds, seed=seed,
                 threads=threads, out_dir=out_dir)
    _, task_dataset = _prepare_task(r)
    report = cross_validate(_model_spec(r), task_dataset, seed=r["seed"], folds=r["folds"])
    out = Path(r["out_dir"])
    _write_json(out / "cv_report.json", report.to_dict())
    _snapshot(out, "cv", r)
    click.echo(
        f"{report.task_id} {report.family} [{report.mask}] mean accuracy "
        f"{report.mean:.4f} +/- {report.standard_error:.4f} (SE, {len(report.fold_accuracies)} folds)"
    )


@cli.command()
@click.option("--model-dir", required=True, type=click.Path(), help="Output directory of a train run.")
@click.option("--out", "out_dir", required=True, type=click.Path())
@click.pass_context
def importances(ctx, model_dir, out_dir):
    """Ranked MDI feature importances of a trained random forest."""
    r = _resolve(ctx, "importances", model_dir=model_dir, out_dir=out_dir)
    model = load_model(Path(r["model_dir"]) / "model.json")
    preprocessor = FeaturePreprocessor.from_json(
        (Path(r["model_dir"]) / "preprocessor.json").read_text(encoding="utf-8")
    )
    ranked = mdi_importances(model, feature_names=preprocessor.output_names_)
    out = Path(r["out_dir"])
    out.mkdir(parents=True, exist_ok=True)
    lines = ["rank,feature,importance"]
    lines += [f"{i + 1},{name},{imp!r}" for i, (name, imp) in enumerate(ranked)]
    (out / "importances.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")
    _write_json(out / "importances.json", [{"feature": n, "importance": v} for n, v in ranked])
    _snapshot(out, "importances", r)
    click.echo(f"top feature: {ranked[0][0]} ({ranked[0][1]:.4f}) -> {out}")


@cli.command()
@click.option("--data", "data_path", required=True, type=click.Path(), help="CSV dataset to visualize.")
@click.option("--model-dir", required=True, type=click.Path(), help="Trained visualization-type model bundle.")
@click.option("--top-k", default=3, show_default=True)
@click.option("--out", "out_dir", required=True, type=click.Path())
@click.pass_context
def recommend(ctx, data_path, model_dir, top_k, out_dir):
    """Rank visualization types for a dataset and emit chart specs."""
    r = _resolve(ctx, "recommend", data_path=data_path, model_dir=model_dir, top_k=top_k, out_dir=out_dir)
    data_file = Path(r["data_path"])
    dataset = parse_table(data_file.read_bytes(), format="csv", dataset_id=data_file.stem)
    if dataset.row_count == 0:
        raise DataError(f"dataset {data_file} has no rows")
    model_path = Path(r["model_dir"])
    document = json.loads((model_path / "model.json").read_text(encoding="utf-8"))
    metadata = document.get("metadata", {})
    task = get_task(metadata.get("task", "VT3"))
    if task.level != "visualization":
        raise UsageError(f"recommend needs a visualization-type model, got task {task.task_id}")
    mask = metadata.get("mask", "All")
    model = load_model(model_path / "model.json")
    preprocessor = FeaturePreprocessor.from_json((model_path / "preprocessor.json").read_text(encoding="utf-8"))

    matrix = dataset_feature_matrix([dataset], mask=mask)
    X = preprocessor.transform(matrix)
    proba = model.predict_proba(X)[0]
    order = np.argsort(-proba, kind="stable")[: r["top_k"]]
    recommendations = []
    for rank, idx in enumerate(order, start=1):
        viz_type = str(model.classes_[idx])
        spec_doc = emit_chart_spec(
            dataset,
            ChoiceSet(VisualizationChoices(visualization_type=viz_type, has_shared_axis=False, is_homogeneous=True)),
        )
        extracted = choices_of_traces(parse_chart_spec(spec_doc, dataset), dataset)
        if extracted.visualization.visualization_type != viz_type:
            raise VizrecError("emitted chart spec failed to round-trip")  # defensive; should not happen
        recommendations.append(
            {
                "rank": rank,
                "visualization_type": viz_type,
                "probability": float(proba[idx]),
                "chart_spec": spec_doc,
            }
        )
    out = Path(r["out_dir"])
    _write_json(out / "recommendations.json", {
        "dataset": dataset.id,
        "task": task.task_id,
        "class_probabilities": {str(c): float(p) for c, p in zip(model.classes_, proba)},
        "recommendations": recommendations,
    })
    _snapshot(out, "recommend", r)
    click.echo(f"top recommendation: {recommendations[0]['visualization_type']} -> {out}")


@cli.command()
@click.option("--votes", "votes_path", required=True, type=click.Path())
@click.option("--predictions", "prediction_files", multiple=True, help="name=path, repeatable.")
@click.option("--vocabulary", default=None, help="Comma-separated choice vocabulary.")
@click.option("--replicates", default=100_000, show_default=True)
@click.option("--level", default=0.95, show_default=True)
@click.option("--include-modal/--no-include-modal", default=True, show_default=True)
@click.option("--include-random/--no-include-random", default=True, show_default=True)
@click.option("--exclude-worker", default=None, help="Leave this worker's votes out of the consensus.")
@click.option("--seed", default=0, show_default=True)
@click.option("--out", "out_dir", required=True, type=click.Path())
@click.pass_context
def benchmark(ctx, votes_path, prediction_files, vocabulary, replicates, level,
              include_modal, include_random, exclude_worker, seed, out_dir):
    """Score predictors against crowdsourced votes (CARS with bootstrap CIs)."""
    r = _resolve(ctx, "benchmark", votes_path=votes_path, prediction_files=list(prediction_files),
                 vocabulary=vocabulary, replicates=replicates, level=level, include_modal=include_modal,
                 include_random=include_random, exclude_worker=exclude_worker, seed=seed, out_dir=out_dir)
    vocab = tuple(r["vocabulary"].split(",")) if r["vocabulary"] else None
    votes = load_votes(Path(r["votes_path"]).read_text(encoding="utf-8"), vocabulary=vocab,
                       exclude_worker=r["exclude_worker"])
    if not votes:
        raise DataError("votes file contains no votes")
    predictors: dict[str, dict[str, str]] = {}
    for item in r["prediction_files"]:
        if "=" not in item:
            raise UsageError(f"--predictions expects name=path, got {item!r}")
        name, path = item.split("=", 1)
        predictors[name] = load_predictions(Path(path).read_text(encoding="utf-8"))
    sample_vocab = next(iter(votes.values())).vocabulary
    if r["include_modal"]:
        predictors["modal_oracle"] = modal_predictions(votes)
    if r["include_random"]:
        predictors["random"] = random_predictions(votes.keys(), sample_vocab, seed=r["seed"])

    reports = {}
    for name, preds in predictors.items():
        report = cars_report(preds, votes, predictor=name, replicates=r["replicates"],
                             level=r["level"], seed=r["seed"])
        reports[name] = report.to_dict()
    ginis = {d: vote_gini(v) for d, v in sorted(votes.items())}
    payload = {
        "vocabulary": list(sample_vocab),
        "datasets": len(votes),
        "reports": reports,
        "gini": {
            "per_dataset": ginis,
            "mean": float(np.mean(list(ginis.values()))),
            "min": float(np.min(list(ginis.values()))),
            "max": float(np.max(list(ginis.values()))),
        },
    }
    out = Path(r["out_dir"])
    _write_json(out / "benchmark.json", payload)
    _snapshot(out, "benchmark", r)
    for name in sorted(reports):
        rep = reports[name]
        click.echo(f"{name}: CARS {rep['cars']:.2f} [{rep['ci_low']:.2f}, {rep['ci_high']:.2f}]")


@cli.command()
@click.option("--rule", default="string_bar_else_line", show_default=True)
@click.option("--n", "count", default=1000, show_default=True)
@click.option("--noise", default=0.0, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--out", "out_dir", required=True, type=click.Path())
@click.pass_context
def synth(ctx, rule, count, noise, seed, out_dir):
    """Generate a synthetic corpus with a planted visualization-type rule."""
    r = _resolve(ctx, "synth", rule=rule, count=count, noise=noise, seed=seed, out_dir=out_dir)
    corpus = generate_synthetic_corpus(get_rule(r["rule"]), r["count"], noise=r["noise"], seed=r["seed"])
    out = Path(r["out_dir"])
    save_corpus(corpus, out / "records")
    _write_json(out / "summary.json", corpus.provenance)
    _snapshot(out, "synth", r)
    click.echo(f"wrote {len(corpus)} synthetic records -> {out / 'records'}")


def main(argv=None) -> int:
    """Entrypoint with the stable exit-code contract."""
    try:
        cli.main(args=argv, standalone_mode=False)
        return EXIT_OK
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        return EXIT_USAGE
    except (click.UsageError, UsageError) as exc:
        click.echo(f"usage error: {exc}", err=True)
        return EXIT_USAGE
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except DataError as exc:
        click.echo(f"data error: {exc}", err=True)
        return EXIT_DATA
    except VizrecError as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_INTERNAL
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        logger.exception("internal error")
        click.echo(f"internal error: {type(exc).__name__}: {exc}", err=True)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
