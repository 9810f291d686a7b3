"""Synthetic minority oversampling."""

from __future__ import annotations

import numpy as np

from cgems.learn.matrix import FeatureMatrix


def nearest_neighbors(points: np.ndarray, k: int) -> np.ndarray:
    """Indices of the ``k`` nearest other points (Euclidean), closest first;
    ties go to the lower index."""
    diff = points[:, None, :] - points[None, :, :]
    dist = np.sqrt((diff ** 2).sum(axis=-1))
    np.fill_diagonal(dist, np.inf)
    return np.argsort(dist, axis=1, kind="stable")[:, :k]


def smote(m: FeatureMatrix, k_neighbors: int = 5, seed: int = 0) -> FeatureMatrix:
    """Append synthetic minority rows until both classes have equal counts.

    Each synthetic row is ``x + u * (x' - x)`` for a random minority row
    ``x``, one of its nearest minority neighbours ``x'`` and ``u ~ U(0, 1)``.
    Original rows keep their positions; synthetic rows follow them.
    """
    counts = np.bincount(m.labels, minlength=2)
    if counts[0] == counts[1]:
        return m
    minority = int(np.argmin(counts))
    needed = int(counts.max() - counts.min())
    points = m.rows[m.labels == minority]
    if len(points) < 2:
        raise ValueError("SMOTE needs at least two minority samples")
    k = min(k_neighbors, len(points) - 1)
    neighbors = nearest_neighbors(points, k)
    rng = np.random.default_rng(seed)
    base = rng.integers(0, len(points), size=needed)
    pick = rng.integers(0, k, size=needed)
    gap = rng.random(size=needed)
    x = points[base]
    partner = points[neighbors[base, pick]]
    synthetic = x + gap[:, None] * (partner - x)
    return FeatureMatrix(
        m.columns,
        np.vstack([m.rows, synthetic]),
        np.concatenate([m.labels, np.full(needed, minority)]),
        m.mean,
        m.std,
        m.active,
    )
