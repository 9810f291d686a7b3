from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from cgems.learn.matrix import FeatureMatrix


@dataclass(frozen=True)
class EvalReport:
    tp: int
    fp: int
    fn: int
    tn: int
    predicted: tuple[int, ...]
    actual: tuple[int, ...]

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn

    @property
    def accuracy(self) -> float:
        return (self.tp + self.tn) / self.total if self.total else 0.0

    @property
    def precision(self) -> float:
        den = self.tp + self.fp
        return self.tp / den if den else 0.0

    @property
    def recall(self) -> float:
        den = self.tp + self.fn
        return self.tp / den if den else 0.0

    @property
    def f1(self) -> float:
        p, r = self.precision, self.recall
        return 2 * p * r / (p + r) if p + r else 0.0

    @property
    def misclassified(self) -> int:
        return self.fp + self.fn

    def to_json(self) -> dict:
        return {
            "confusion": {"TP": self.tp, "FP": self.fp, "FN": self.fn, "TN": self.tn},
            "accuracy": self.accuracy,
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
            "misclassified": self.misclassified,
            "predicted": list(self.predicted),
            "actual": list(self.actual),
        }


def evaluate(predicted: Sequence[int], actual: Sequence[int]) -> EvalReport:
    """Confusion counts with class 1 as the positive class."""
    if len(predicted) != len(actual):
        raise ValueError("predicted and actual differ in length")
    pred = [int(p) for p in predicted]
    act = [int(a) for a in actual]
    if any(v not in (0, 1) for v in pred + act):
        raise ValueError("labels must be 0 or 1")
    tp = sum(p == 1 and a == 1 for p, a in zip(pred, act))
    fp = sum(p == 1 and a == 0 for p, a in zip(pred, act))
    fn = sum(p == 0 and a == 1 for p, a in zip(pred, act))
    tn = sum(p == 0 and a == 0 for p, a in zip(pred, act))
    return EvalReport(tp, fp, fn, tn, tuple(pred), tuple(act))


def stratified_split(m: FeatureMatrix, train_n: int, seed: int = 0) -> tuple[np.ndarray, np.ndarray]:
    """Index arrays (train, test) keeping the class ratio as close as integer
    counts allow; every class with two or more rows lands on both sides."""
    n = m.n
    if not 0 < train_n < n:
        raise ValueError(f"train_n must be between 1 and {n - 1}, got {train_n}")
    rng = np.random.default_rng(seed)
    classes = [np.flatnonzero(m.labels == c) for c in (0, 1)]
    quotas = [train_n * len(idx) / n for idx in classes]
    take = [int(np.floor(q)) for q in quotas]
    # largest remainder, ties to class 0
    for c in sorted((0, 1), key=lambda c: -(quotas[c] - take[c]))[: train_n - sum(take)]:
        take[c] += 1
    for c in (0, 1):
        size = len(classes[c])
        if size >= 2:
            low, high = 1, size - 1
            shift = min(max(take[c], low), high) - take[c]
            if shift:
                take[c] += shift
                take[1 - c] -= shift
    train_parts, test_parts = [], []
    for c in (0, 1):
        idx = rng.permutation(classes[c])
        train_parts.append(idx[: take[c]])
        test_parts.append(idx[take[c]:])
    train = rng.permutation(np.concatenate(train_parts))
    test = np.sort(np.concatenate(test_parts))
    return train, test


def split(m: FeatureMatrix, train_n: int = 71, seed: int = 0) -> tuple[FeatureMatrix, FeatureMatrix]:
    train, test = stratified_split(m, train_n, seed)
    return m.take(train), m.take(test)
