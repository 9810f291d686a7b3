"""Feature selection: Pearson correlation pruning and one-way ANOVA F
scores with p-values from the F distribution."""

from __future__ import annotations

import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from cgems.learn.matrix import FeatureMatrix

F_SENTINEL = sys.float_info.max


# -- incomplete beta -------------------------------------------------------


def _beta_cf(a: float, b: float, x: float, eps: float = 1e-15, max_iter: int = 10_000) -> float:
    """Continued fraction for the incomplete beta function (modified Lentz)."""
    tiny = 1e-300
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    d = tiny if abs(d) < tiny else d
    d = 1.0 / d
    h = d
    for m in range(1, max_iter + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        d = tiny if abs(d) < tiny else d
        c = 1.0 + aa / c
        c = tiny if abs(c) < tiny else c
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        d = tiny if abs(d) < tiny else d
        c = 1.0 + aa / c
        c = tiny if abs(c) < tiny else c
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < eps:
            return h
    raise ArithmeticError(f"incomplete beta did not converge (a={a}, b={b}, x={x})")


def betainc(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta I_x(a, b)."""
    if a <= 0 or b <= 0:
        raise ValueError("shape parameters must be positive")
    if x <= 0:
        return 0.0
    if x >= 1:
        return 1.0
    log_front = (
        math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b) + a * math.log(x) + b * math.log1p(-x)
    )
    front = math.exp(log_front)
    if x < (a + 1) / (a + b + 2):
        return front * _beta_cf(a, b, x) / a
    return 1.0 - front * _beta_cf(b, a, 1 - x) / b


def f_sf(f: float, dfn: float, dfd: float) -> float:
    """Survival function P(F > f) of the F distribution."""
    if f <= 0:
        return 1.0
    if math.isinf(f) or f >= F_SENTINEL:
        return 0.0
    return betainc(dfd / 2, dfn / 2, dfd / (dfd + dfn * f))


# -- ANOVA -----------------------------------------------------------------


def anova_f(rows: np.ndarray, labels: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Per-column one-way ANOVA F and p-value across the label groups."""
    rows = np.asarray(rows, dtype=float)
    labels = np.asarray(labels)
    classes = np.unique(labels)
    if len(classes) < 2:
        raise ValueError("ANOVA needs both classes present")
    n, d = rows.shape
    k = len(classes)
    grand = rows.mean(axis=0)
    ssb = np.zeros(d)
    ssw = np.zeros(d)
    for cls in classes:
        group = rows[labels == cls]
        gmean = group.mean(axis=0)
        ssb += len(group) * (gmean - grand) ** 2
        ssw += ((group - gmean) ** 2).sum(axis=0)
    dfb, dfw = k - 1, n - k
    msb = ssb / dfb
    msw = ssw / dfw
    f_values = np.zeros(d)
    p_values = np.ones(d)
    # relative to the total spread, so float noise on tied groups (or on a
    # shifted copy of a column) does not read as signal
    total = ssb + ssw
    for j in range(d):
        if ssb[j] <= 1e-12 * total[j] or total[j] == 0:
            f_values[j], p_values[j] = 0.0, 1.0
        elif ssw[j] <= 1e-12 * total[j]:
            f_values[j], p_values[j] = F_SENTINEL, 0.0
        else:
            f_values[j] = msb[j] / msw[j]
            p_values[j] = f_sf(f_values[j], dfb, dfw)
    return f_values, p_values


# -- reports ---------------------------------------------------------------


@dataclass
class SelectionReport:
    columns: tuple[str, ...]
    correlations: np.ndarray
    kept: list[str]
    pruned: dict[str, str] = field(default_factory=dict)
    f_values: dict[str, float] = field(default_factory=dict)
    p_values: dict[str, float] = field(default_factory=dict)
    selected: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "columns": list(self.columns),
            "correlations": self.correlations.tolist(),
            "kept": self.kept,
            "pruned": self.pruned,
            "anova": {c: {"F": self.f_values[c], "p": self.p_values[c]} for c in self.f_values},
            "selected": self.selected,
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["feature", "kept", "pruned_reason", "F", "p", "selected"])
        for c in self.columns:
            writer.writerow([
                c,
                int(c in self.kept),
                self.pruned.get(c, ""),
                repr(self.f_values[c]) if c in self.f_values else "",
                repr(self.p_values[c]) if c in self.p_values else "",
                int(c in self.selected),
            ])
        return buf.getvalue()

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)


def pearson_matrix(rows: np.ndarray) -> np.ndarray:
    """Pearson r between columns; any pair involving a constant column is 0
    off the diagonal."""
    rows = np.asarray(rows, dtype=float)
    centered = rows - rows.mean(axis=0)
    norms = np.sqrt((centered ** 2).sum(axis=0))
    constant = norms <= 1e-12 * np.maximum(1.0, np.abs(rows).max(axis=0))
    safe = np.where(constant, 1.0, norms)
    unit = centered / safe
    r = unit.T @ unit
    r[constant, :] = 0.0
    r[:, constant] = 0.0
    np.fill_diagonal(r, 1.0)
    return np.clip(r, -1.0, 1.0)


def correlation_prune(m: FeatureMatrix, threshold: float = 0.8) -> SelectionReport:
    """Walk columns in order, dropping any column correlated at |r| >= threshold
    with a column already kept. Constant columns are dropped up front."""
    r = pearson_matrix(m.rows)
    constant = set(m.constant_columns) if m.std is not None else set()
    if m.std is None:
        spread = m.rows.max(axis=0) - m.rows.min(axis=0)
        constant = {c for c, s in zip(m.columns, spread) if s == 0}
    kept: list[int] = []
    pruned: dict[str, str] = {}
    for j, name in enumerate(m.columns):
        if not m.active[j]:
            pruned[name] = "inactive"
            continue
        if name in constant:
            pruned[name] = "zero variance"
            continue
        partner = next((i for i in kept if abs(r[i, j]) >= threshold), None)
        if partner is None:
            kept.append(j)
        else:
            pruned[name] = f"|r|={abs(r[partner, j]):.4f} with {m.columns[partner]}"
    return SelectionReport(m.columns, r, [m.columns[j] for j in kept], pruned)


def add_anova(report: SelectionReport, m: FeatureMatrix) -> SelectionReport:
    sub = m.select(report.kept)
    f_values, p_values = anova_f(sub.rows, sub.labels)
    report.f_values = {c: float(f) for c, f in zip(report.kept, f_values)}
    report.p_values = {c: float(p) for c, p in zip(report.kept, p_values)}
    return report


def select_k_best(report: SelectionReport, k: int) -> list[str]:
    """Top ``k`` kept features by F, ties broken by column order."""
    candidates = [c for c in report.kept if c in report.f_values]
    if k > len(candidates):
        raise ValueError(f"k={k} exceeds the {len(candidates)} active features")
    if k < 1:
        raise ValueError("k must be positive")
    order = {c: i for i, c in enumerate(report.columns)}
    ranked = sorted(candidates, key=lambda c: (-report.f_values[c], order[c]))
    chosen = set(ranked[:k])
    report.selected = [c for c in report.columns if c in chosen]
    return report.selected
