"""Command-line interface.

Exit codes: 0 on success, 1 when the pipeline itself fails, 2 for usage and
input errors (missing files, malformed manifests or CSVs, width mismatches).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import os
import platform
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

import cgems
from cgems import schema

log = logging.getLogger("cgems")

RUNNER_ENV = "CGEMS_RUNNER"


class InputError(Exception):
    """Bad user input; maps to exit code 2."""


class PipelineFailure(Exception):
    """The computation could not complete; maps to exit code 1."""


# -- helpers ---------------------------------------------------------------


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from None


def _profile(args):
    from cgems.source_model import PYTHON_PROFILE, LanguageProfile

    if not getattr(args, "profile", None):
        return PYTHON_PROFILE
    try:
        return LanguageProfile.load(args.profile)
    except (OSError, ValueError, TypeError) as exc:
        raise InputError(f"bad language profile {args.profile}: {exc}") from None


def _config_hash(data: dict) -> str:
    return hashlib.sha256(json.dumps(data, sort_keys=True, default=str).encode()).hexdigest()


def run_info(command: str, seed: int | None, config: dict) -> dict:
    return {
        "schema_version": schema.SCHEMA_VERSION,
        "command": command,
        "seed": seed,
        "config": config,
        "config_hash": _config_hash(config),
        "versions": {
            "cgems": cgems.__version__,
            "python": platform.python_version(),
            "numpy": np.__version__,
        },
    }


def _dump(data: dict) -> str:
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def _emit(args, command: str, payload: dict, config: dict) -> None:
    """Print ``payload``; with ``--output`` also write it plus a run-info
    file next to it. Printed payloads carry the run info inline."""
    info = run_info(command, getattr(args, "seed", None), config)
    output = getattr(args, "output", None)
    if output:
        out = Path(output)
        _write(out, _dump(payload))
        _write(out.with_name(out.name + ".run-info.json"), _dump(info))
    payload = dict(payload, run_info=info)
    sys.stdout.write(_dump(payload))


def _runner_config(args):
    from cgems.dynamic_runner import RunnerConfig

    if getattr(args, "no_dynamic", False):
        return None
    path = getattr(args, "runner", None) or os.environ.get(RUNNER_ENV)
    cfg_args = {}
    if getattr(args, "timeout_ms", None):
        cfg_args["timeout_ms"] = args.timeout_ms
    if not path:
        return RunnerConfig.default(**cfg_args)
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        data.update(cfg_args)
        return RunnerConfig.from_dict(data)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise InputError(f"bad runner config {path}: {exc}") from None


def _load_records(path: str):
    from cgems.dataset import CsvParseError, read_csv

    try:
        return read_csv(path)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    except CsvParseError as exc:
        raise InputError(f"{path}: {exc}") from None


def _matrix(records):
    from cgems.learn import FeatureMatrix

    try:
        return FeatureMatrix.from_records(records)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _load_model(path: str):
    from cgems.learn import MlpModel

    try:
        return MlpModel.load(path)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    except (ValueError, KeyError, TypeError) as exc:
        raise InputError(f"bad model file {path}: {exc}") from None


def _rows_for_model(args, model) -> tuple[list[str], np.ndarray]:
    """Raw feature rows (and their ids) selected for the model's inputs."""
    if args.row is not None:
        try:
            values = [float(v) for v in args.row.split(",") if v.strip()]
        except ValueError:
            raise InputError(f"--row must be comma-separated numbers: {args.row!r}") from None
        if len(values) != model.input_width:
            raise InputError(f"model expects {model.input_width} features, --row has {len(values)}")
        return ["row"], np.array([values])
    if not args.csv:
        raise InputError("give a CSV file or --row")
    records = _load_records(args.csv)
    if getattr(args, "program", None):
        records = [r for r in records if r.program == args.program]
        if not records:
            raise InputError(f"no program {args.program!r} in {args.csv}")
    missing = [f for f in model.feature_names if f not in schema.FEATURE_COLUMNS]
    if missing:
        raise InputError(f"model uses unknown features: {missing}")
    rows = np.array([[r.features[f] for f in model.feature_names] for r in records], dtype=float)
    return [r.program for r in records], rows.reshape(len(records), model.input_width)


# -- commands --------------------------------------------------------------


def cmd_analyze(args) -> int:
    from cgems.static_metrics import analyze_source

    report = analyze_source(_read_text(args.file), _profile(args))
    for err in report.errors:
        print(f"warning: {err}", file=sys.stderr)
    payload = {"file": args.file, **report.to_json()}
    _emit(args, "analyze", payload, {"profile": args.profile})
    return 0


def cmd_compare(args) -> int:
    from cgems.similarity import compare

    generated = _read_text(args.generated)
    reference = _read_text(args.reference)
    corrected = _read_text(args.corrected) if args.corrected else None
    if corrected is None:
        print("notice: no corrected version given; edits and sequence ratio omitted", file=sys.stderr)
    report = compare(generated, reference, corrected)
    payload = {"schema_version": schema.SCHEMA_VERSION, **report.features()}
    _emit(args, "compare", payload, {})
    return 0


def cmd_collect(args) -> int:
    from cgems.dataset import ManifestError, collect, load_manifest, write_csv

    try:
        manifest = load_manifest(args.manifest)
    except OSError as exc:
        raise InputError(f"cannot read {args.manifest}: {exc}") from None
    except ManifestError as exc:
        raise InputError(f"bad manifest: {exc}") from None
    result = collect(manifest, _profile(args), _runner_config(args), jobs=args.jobs)
    for err in result.errors:
        print(f"error: {err}", file=sys.stderr)
    out = Path(args.output)
    out.parent.mkdir(parents=True, exist_ok=True)
    write_csv(result.records, out)
    config = {"manifest": str(args.manifest), "dynamic": not args.no_dynamic, "profile": args.profile}
    _write(out.with_name(out.name + ".run-info.json"), _dump(run_info("collect", None, config)))
    print(f"wrote {len(result.records)} record(s) to {out}", file=sys.stderr)
    return 1 if result.errors else 0


def _n_features(value: str) -> int | None:
    if value == "all":
        return None
    try:
        k = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError("expected a positive integer or 'all'") from None
    if k < 1:
        raise argparse.ArgumentTypeError("expected a positive integer or 'all'")
    return k


def _pipeline_config(args):
    from cgems.learn import MlpConfig, PipelineConfig

    return PipelineConfig(
        correlation_threshold=args.threshold,
        n_features=args.features,
        smote_neighbors=args.smote_neighbors,
        smote_after_split=args.smote_after_split,
        train_n=args.train_n,
        seed=args.seed,
        mlp=MlpConfig(learning_rate=args.learning_rate, epochs=args.epochs),
    )


def cmd_select_features(args) -> int:
    from cgems.learn import add_anova, correlation_prune, standardize
    from cgems.learn.pipeline import choose_features

    data = _matrix(_load_records(args.csv))
    try:
        scaled = standardize(data)
        report = add_anova(correlation_prune(scaled, args.threshold), scaled)
        choose_features(report, args.features)
    except (ValueError, ArithmeticError) as exc:
        raise PipelineFailure(str(exc)) from exc
    out = Path(args.out_dir)
    config = {"csv": args.csv, "threshold": args.threshold, "features": args.features}
    _write(out / "selection.json", _dump({"schema_version": schema.SCHEMA_VERSION, **report.to_json()}))
    _write(out / "selection.csv", report.to_csv())
    _write(out / "run-info.json", _dump(run_info("select-features", None, config)))
    print("\n".join(report.selected))
    return 0


def cmd_train(args) -> int:
    from cgems.learn import TrainingError, run_pipeline

    data = _matrix(_load_records(args.csv))
    config = _pipeline_config(args)
    try:
        result = run_pipeline(data, config)
    except TrainingError as exc:
        raise PipelineFailure(str(exc)) from exc
    except (ValueError, ArithmeticError) as exc:
        raise PipelineFailure(str(exc)) from exc
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    result.model.save(out / "model.json")
    _write(out / "selection.json", _dump({"schema_version": schema.SCHEMA_VERSION, **result.selection.to_json()}))
    _write(out / "selection.csv", result.selection.to_csv())
    _write(out / "evaluation.json", _dump({"schema_version": schema.SCHEMA_VERSION, **result.summary()}))
    _write(out / "history.json", _dump(result.model.history.to_json()))
    info = run_info("train", args.seed, config.to_json())
    info["config_hash"] = config.digest()
    _write(out / "run-info.json", _dump(info))
    test = result.test_report
    print(f"features ({len(result.features)}): {', '.join(result.features)}")
    print(f"rows: {result.n_original} original + {result.n_synthetic} synthetic; "
          f"train {result.train_n}, test {len(test.actual)}")
    print(f"test accuracy {100 * test.accuracy:.2f}%  precision {test.precision:.4f}  "
          f"recall {test.recall:.4f}  f1 {test.f1:.4f}")
    print(f"confusion TP={test.tp} FP={test.fp} FN={test.fn} TN={test.tn}")
    return 0


def cmd_predict(args) -> int:
    model = _load_model(args.model)
    ids, raw = _rows_for_model(args, model)
    try:
        classes, proba = model.predict(model.standardize(raw))
    except ValueError as exc:
        raise InputError(str(exc)) from None
    payload = {
        "schema_version": schema.SCHEMA_VERSION,
        "features": list(model.feature_names),
        "predictions": [
            {"program": pid, "class": int(c), "probabilities": p.tolist()}
            for pid, c, p in zip(ids, classes, proba)
        ],
    }
    _emit(args, "predict", payload, {"model": args.model})
    return 0


def cmd_explain(args) -> int:
    from cgems.explain import lime_explain

    model = _load_model(args.model)
    ids, raw = _rows_for_model(args, model)
    if len(ids) != 1:
        raise InputError(f"explain needs exactly one instance, got {len(ids)}; use --program")
    try:
        x = model.standardize(raw)[0]
        explanation = lime_explain(
            model,
            x,
            n_samples=args.n_samples,
            kernel_width=args.kernel_width,
            seed=args.seed,
            instance_id=ids[0],
        )
    except ValueError as exc:
        raise InputError(str(exc)) from None
    print(explanation.table())
    config = {"model": args.model, "n_samples": args.n_samples, "kernel_width": explanation.kernel_width}
    if args.output:
        out = Path(args.output)
        _write(out, explanation.dumps())
        _write(out.with_name(out.name + ".run-info.json"), _dump(run_info("explain", args.seed, config)))
    if args.bar_chart:
        _write(Path(args.bar_chart), explanation.to_svg())
    return 0


# -- parser ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cgems", description="Quality metrics for generated code and a classifier over them."
    )
    parser.add_argument("--version", action="version", version=f"cgems {cgems.__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_profile(p):
        p.add_argument("--profile", help="language profile JSON (default: built-in Python profile)")

    p = sub.add_parser("analyze", help="static metrics of one source file")
    p.add_argument("file")
    p.add_argument("-o", "--output", help="also write the JSON report here")
    add_profile(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("compare", help="similarity of a generated file to a reference")
    p.add_argument("generated")
    p.add_argument("reference")
    p.add_argument("--corrected", help="corrected version, for edits and sequence ratio")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("collect", help="metric CSV for a corpus manifest")
    p.add_argument("manifest")
    p.add_argument("-o", "--output", required=True, help="CSV path")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--runner", help=f"runner config JSON (default: ${RUNNER_ENV} or the bundled runner)")
    p.add_argument("--timeout-ms", type=int)
    p.add_argument("--no-dynamic", action="store_true", help="skip compile/run/coverage")
    add_profile(p)
    p.set_defaults(func=cmd_collect)

    def add_selection(p):
        p.add_argument("csv")
        p.add_argument("--out-dir", required=True)
        p.add_argument("--threshold", type=float, default=0.8, help="|r| pruning threshold")
        p.add_argument(
            "--features",
            type=_n_features,
            default=None,
            help="number of features to keep after pruning; 'all' or a count at least as large "
            "as the pruned set keeps every surviving feature (default: all)",
        )

    p = sub.add_parser("select-features", help="correlation pruning and ANOVA ranking")
    add_selection(p)
    p.set_defaults(func=cmd_select_features)

    p = sub.add_parser("train", help="train and evaluate the classifier")
    add_selection(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--train-n", type=int, help="training rows (default: 71 of 84, scaled)")
    p.add_argument("--smote-neighbors", type=int, default=5)
    p.add_argument("--smote-after-split", action="store_true",
                   help="oversample the training part only, after splitting")
    p.add_argument("--epochs", type=int, default=1000)
    p.add_argument("--learning-rate", type=float, default=1e-3)
    p.set_defaults(func=cmd_train)

    def add_instance(p):
        p.add_argument("model")
        p.add_argument("csv", nargs="?")
        p.add_argument("--row", help="comma-separated raw values of the model's features")
        p.add_argument("--program", help="only this program from the CSV")
        p.add_argument("-o", "--output")

    p = sub.add_parser("predict", help="classify rows with a trained model")
    add_instance(p)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("explain", help="local explanation of one prediction")
    add_instance(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n-samples", type=int, default=5000)
    p.add_argument("--kernel-width", type=float, help="default 0.75 * sqrt(features)")
    p.add_argument("--bar-chart", help="write an SVG bar chart of the weights here")
    p.set_defaults(func=cmd_explain)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    if getattr(args, "jobs", 1) < 1:
        parser.error("--jobs must be at least 1")
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except PipelineFailure as exc:
        print(f"pipeline failed: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
