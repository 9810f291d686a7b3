from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from cgems import schema


@dataclass(frozen=True)
class FeatureMatrix:
    """Dense numeric dataset with its column names and binary labels."""

    columns: tuple[str, ...]
    rows: np.ndarray
    labels: np.ndarray
    mean: np.ndarray | None = None
    std: np.ndarray | None = None
    active: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self) -> None:
        rows = np.asarray(self.rows, dtype=float)
        if rows.ndim != 2 or rows.shape[1] != len(self.columns):
            raise ValueError(f"rows must be n x {len(self.columns)}, got {rows.shape}")
        if not np.all(np.isfinite(rows)):
            raise ValueError("feature matrix contains NaN or Inf")
        labels = np.asarray(self.labels, dtype=int)
        if labels.shape != (rows.shape[0],):
            raise ValueError("one label per row required")
        if not np.isin(labels, (0, 1)).all():
            raise ValueError("labels must be 0 or 1")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "labels", labels)
        if self.active is None:
            object.__setattr__(self, "active", np.ones(len(self.columns), dtype=bool))

    @property
    def n(self) -> int:
        return self.rows.shape[0]

    @property
    def d(self) -> int:
        return self.rows.shape[1]

    @property
    def constant_columns(self) -> list[str]:
        if self.std is None:
            return []
        return [c for c, s in zip(self.columns, self.std) if s == 0]

    def select(self, names: Sequence[str]) -> FeatureMatrix:
        idx = [self.columns.index(n) for n in names]
        return replace(
            self,
            columns=tuple(names),
            rows=self.rows[:, idx],
            mean=None if self.mean is None else self.mean[idx],
            std=None if self.std is None else self.std[idx],
            active=self.active[idx],
        )

    def take(self, index: np.ndarray) -> FeatureMatrix:
        return replace(self, rows=self.rows[index], labels=self.labels[index])

    @classmethod
    def from_records(cls, records, columns: Sequence[str] = schema.FEATURE_COLUMNS) -> FeatureMatrix:
        unlabeled = [r.program for r in records if r.label is None]
        if unlabeled:
            raise ValueError(f"records without a label: {unlabeled[:5]}")
        rows = np.array([[float(r.features[c]) for c in columns] for r in records], dtype=float)
        return cls(tuple(columns), rows.reshape(len(records), len(columns)), np.array([r.label for r in records]))


def apply_standardization(rows: np.ndarray, mean: np.ndarray, std: np.ndarray) -> np.ndarray:
    rows = np.asarray(rows, dtype=float)
    safe = np.where(std == 0, 1.0, std)
    return np.where(std == 0, 0.0, (rows - mean) / safe)


def standardize(m: FeatureMatrix) -> FeatureMatrix:
    """Zero mean, unit population std per column; constant columns become
    zeros and are reported by ``constant_columns``."""
    if m.n < 2:
        raise ValueError("standardization needs at least two rows")
    mean = m.rows.mean(axis=0)
    std = m.rows.std(axis=0)
    # float noise on constant columns must not turn into a huge scale factor
    std = np.where(std <= 1e-12 * np.maximum(1.0, np.abs(mean)), 0.0, std)
    return replace(m, rows=apply_standardization(m.rows, mean, std), mean=mean, std=std)
