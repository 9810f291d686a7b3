"""End-to-end training: standardize, prune correlated features, rank by
ANOVA F, oversample, split, train and evaluate."""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field

import numpy as np

from cgems.learn.evaluation import EvalReport, evaluate, stratified_split
from cgems.learn.matrix import FeatureMatrix, standardize
from cgems.learn.mlp import MlpConfig, MlpModel, train_mlp
from cgems.learn.selection import SelectionReport, add_anova, correlation_prune, select_k_best
from cgems.learn.smote import smote

REFERENCE_ROWS, REFERENCE_TRAIN = 84, 71


def default_train_size(n: int) -> int:
    """71 of 84 rows, scaled to other dataset sizes."""
    if n == REFERENCE_ROWS:
        return REFERENCE_TRAIN
    return min(n - 1, max(1, round(n * REFERENCE_TRAIN / REFERENCE_ROWS)))


@dataclass(frozen=True)
class PipelineConfig:
    correlation_threshold: float = 0.8
    # None keeps every feature that survives pruning
    n_features: int | None = None
    smote_neighbors: int = 5
    smote_after_split: bool = False
    train_n: int | None = None
    seed: int = 0
    mlp: MlpConfig = field(default_factory=MlpConfig)

    def to_json(self) -> dict:
        data = asdict(self)
        data["mlp"] = self.mlp.to_json()
        return data

    def digest(self) -> str:
        return hashlib.sha256(json.dumps(self.to_json(), sort_keys=True).encode()).hexdigest()


@dataclass
class PipelineResult:
    config: PipelineConfig
    selection: SelectionReport
    features: list[str]
    model: MlpModel
    train_report: EvalReport
    test_report: EvalReport
    n_original: int
    n_synthetic: int
    train_n: int

    def summary(self) -> dict:
        return {
            "config": self.config.to_json(),
            "config_hash": self.config.digest(),
            "features": self.features,
            "rows": {"original": self.n_original, "synthetic": self.n_synthetic, "train": self.train_n,
                     "test": len(self.test_report.actual)},
            "train": self.train_report.to_json(),
            "test": self.test_report.to_json(),
            "final_loss": self.model.history.loss[-1] if self.model.history.loss else None,
        }


def choose_features(report: SelectionReport, n_features: int | None) -> list[str]:
    if n_features is None or n_features >= len(report.kept):
        report.selected = list(report.kept)
        return report.selected
    return select_k_best(report, n_features)


def run_pipeline(data: FeatureMatrix, config: PipelineConfig = PipelineConfig()) -> PipelineResult:
    scaled = standardize(data)
    report = add_anova(correlation_prune(scaled, config.correlation_threshold), scaled)
    features = choose_features(report, config.n_features)
    chosen = scaled.select(features)

    if config.smote_after_split:
        train_n = config.train_n or default_train_size(chosen.n)
        train_idx, test_idx = stratified_split(chosen, train_n, config.seed)
        train = smote(chosen.take(train_idx), config.smote_neighbors, config.seed)
        test = chosen.take(test_idx)
    else:
        balanced = smote(chosen, config.smote_neighbors, config.seed)
        train_n = config.train_n or default_train_size(balanced.n)
        train_idx, test_idx = stratified_split(balanced, train_n, config.seed)
        train, test = balanced.take(train_idx), balanced.take(test_idx)

    pipeline_hash = hashlib.sha256(
        json.dumps({"config": config.digest(), "features": features}, sort_keys=True).encode()
    ).hexdigest()
    model = train_mlp(
        train.rows,
        train.labels,
        config.mlp,
        config.seed,
        feature_names=tuple(features),
        mean=chosen.mean,
        std=chosen.std,
        pipeline_hash=pipeline_hash,
    )
    train_pred, _ = model.predict(train.rows)
    test_pred, _ = model.predict(test.rows)
    n_synth = (train.n + test.n) - data.n
    return PipelineResult(
        config=config,
        selection=report,
        features=features,
        model=model,
        train_report=evaluate(train_pred, train.labels),
        test_report=evaluate(test_pred, test.labels),
        n_original=data.n,
        n_synthetic=n_synth,
        train_n=train.n,
    )


def predict_raw(model: MlpModel, rows: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Predict from unstandardized rows already restricted to the model's features."""
    return model.predict(model.standardize(rows))
