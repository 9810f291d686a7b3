"""Local explanations for single predictions.

Perturb the (standardized) instance with unit Gaussian noise, weight each
perturbation by its proximity to the instance and fit a weighted linear
model to the class-1 probability. The surrogate's coefficients are the
per-feature contributions.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from html import escape
from typing import Callable, Sequence

import numpy as np

from cgems.learn.mlp import MlpModel

RIDGE = 1e-6
EXPLANATION_VERSION = 1

ProbabilityFn = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class Explanation:
    instance_id: str
    features: tuple[tuple[str, float], ...]
    intercept: float
    r2: float
    n_samples: int
    kernel_width: float
    seed: int
    ridge: bool = False

    @property
    def weights(self) -> np.ndarray:
        return np.array([w for _, w in self.features])

    def ranked(self) -> list[tuple[str, float]]:
        return sorted(self.features, key=lambda item: -abs(item[1]))

    def table(self) -> str:
        width = max([len(n) for n, _ in self.features] + [7])
        lines = [f"{'feature':<{width}}  {'weight':>12}"]
        lines += [f"{name:<{width}}  {weight:>+12.6f}" for name, weight in self.ranked()]
        lines.append(f"intercept {self.intercept:.6f}, local R2 {self.r2:.4f}"
                     + (" (ridge fallback)" if self.ridge else ""))
        return "\n".join(lines)

    def to_json(self) -> dict:
        return {
            "version": EXPLANATION_VERSION,
            "instance_id": self.instance_id,
            "weights": [{"feature": n, "weight": w} for n, w in self.features],
            "intercept": self.intercept,
            "r2": self.r2,
            "n_samples": self.n_samples,
            "kernel_width": self.kernel_width,
            "seed": self.seed,
            "ridge_fallback": self.ridge,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True) + "\n"

    def to_svg(self, bar_width: int = 240) -> str:
        """Horizontal bar chart of the weights, largest magnitude on top."""
        rows = self.ranked()
        label_w = 8 * max([len(n) for n, _ in rows] + [4]) + 10
        row_h = 22
        height = row_h * len(rows) + 40
        width = label_w + 2 * bar_width + 90
        scale = max([abs(w) for _, w in rows] + [1e-12])
        mid = label_w + bar_width
        parts = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
            f'font-family="sans-serif" font-size="12">',
            f'<text x="8" y="16">Local explanation {escape(self.instance_id)}</text>',
            f'<line x1="{mid}" y1="24" x2="{mid}" y2="{height - 8}" stroke="#444"/>',
        ]
        for i, (name, weight) in enumerate(rows):
            y = 30 + i * row_h
            length = bar_width * abs(weight) / scale
            x = mid if weight >= 0 else mid - length
            colour = "#2a7ab9" if weight >= 0 else "#d9822b"
            parts.append(f'<text x="8" y="{y + 13}">{escape(name)}</text>')
            parts.append(
                f'<rect x="{x:.2f}" y="{y}" width="{length:.2f}" height="{row_h - 6}" fill="{colour}"/>'
            )
            parts.append(f'<text x="{mid + bar_width + 8}" y="{y + 13}">{weight:+.4f}</text>')
        parts.append("</svg>")
        return "\n".join(parts) + "\n"


def _class1(model: MlpModel | ProbabilityFn) -> ProbabilityFn:
    if isinstance(model, MlpModel):
        return lambda z: model.predict_proba(z)[:, 1]
    return model


def weighted_least_squares(
    design: np.ndarray, target: np.ndarray, weights: np.ndarray
) -> tuple[np.ndarray, bool]:
    """Solve the weighted normal equations, falling back to a small ridge
    term when they are singular."""
    a = design.T @ (design * weights[:, None])
    rhs = design.T @ (weights * target)
    if np.linalg.matrix_rank(a) == a.shape[0] and np.linalg.cond(a) < 1e12:
        return np.linalg.solve(a, rhs), False
    return np.linalg.solve(a + RIDGE * np.eye(a.shape[0]), rhs), True


def lime_explain(
    model: MlpModel | ProbabilityFn,
    x: Sequence[float],
    n_samples: int = 5000,
    kernel_width: float | None = None,
    seed: int = 0,
    feature_names: Sequence[str] | None = None,
    instance_id: str = "",
) -> Explanation:
    """Explain the class-1 probability of ``model`` around the standardized
    row ``x``. ``model`` may also be any callable mapping an n x d array to
    n probabilities."""
    x = np.asarray(x, dtype=float).reshape(-1)
    d = x.size
    if n_samples < 1:
        raise ValueError("n_samples must be positive")
    if kernel_width is None:
        kernel_width = 0.75 * math.sqrt(d)
    if kernel_width <= 0:
        raise ValueError("kernel width must be positive")
    if feature_names is None:
        feature_names = getattr(model, "feature_names", ()) or [f"x{i}" for i in range(d)]
    if len(feature_names) != d:
        raise ValueError(f"{len(feature_names)} names for {d} features")

    rng = np.random.default_rng(seed)
    offsets = rng.standard_normal((n_samples, d))
    z = x + offsets
    target = np.asarray(_class1(model)(z), dtype=float).reshape(-1)
    weights = np.exp(-(offsets ** 2).sum(axis=1) / kernel_width ** 2)

    design = np.hstack([np.ones((n_samples, 1)), offsets])
    coef, ridge = weighted_least_squares(design, target, weights)
    fitted = design @ coef
    mean = np.average(target, weights=weights)
    ss_tot = float(np.sum(weights * (target - mean) ** 2))
    ss_res = float(np.sum(weights * (target - fitted) ** 2))
    # a flat target leaves nothing to explain; treat the fit as exact
    flat = ss_tot <= 1e-24 * float(weights.sum()) * max(1.0, mean ** 2)
    r2 = 1.0 if flat else 1.0 - ss_res / ss_tot

    return Explanation(
        instance_id=instance_id,
        features=tuple((str(n), float(w)) for n, w in zip(feature_names, coef[1:])),
        intercept=float(coef[0]),
        r2=r2,
        n_samples=n_samples,
        kernel_width=float(kernel_width),
        seed=seed,
        ridge=ridge,
    )
