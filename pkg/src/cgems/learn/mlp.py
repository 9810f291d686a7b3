"""A small fully connected classifier trained with full-batch Adam.

Hidden layers use ReLU, the output layer is a softmax over two classes and
the loss is sparse categorical cross-entropy (mean over the batch).
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

MODEL_FORMAT_VERSION = 1


class TrainingError(RuntimeError):
    def __init__(self, message: str, epoch: int) -> None:
        super().__init__(f"epoch {epoch}: {message}")
        self.epoch = epoch


@dataclass(frozen=True)
class MlpConfig:
    hidden: tuple[int, ...] = (14, 12)
    n_classes: int = 2
    learning_rate: float = 1e-3
    epochs: int = 1000
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8

    def __post_init__(self) -> None:
        if any(h < 1 for h in self.hidden) or self.n_classes < 2:
            raise ValueError("layer widths must be positive and n_classes >= 2")
        if self.learning_rate <= 0 or self.epochs < 0:
            raise ValueError("learning rate must be positive and epochs non-negative")

    def to_json(self) -> dict:
        data = asdict(self)
        data["hidden"] = list(self.hidden)
        return data

    @classmethod
    def from_json(cls, data: dict) -> MlpConfig:
        data = dict(data)
        data["hidden"] = tuple(data.get("hidden", (14, 12)))
        return cls(**data)

    def digest(self) -> str:
        blob = json.dumps(self.to_json(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()


Params = list[tuple[np.ndarray, np.ndarray]]


def init_params(sizes: Sequence[int], rng: np.random.Generator) -> Params:
    """He-uniform weights for the ReLU layers, Glorot-uniform for the output
    layer, zero biases."""
    params = []
    last = len(sizes) - 2
    for i, (fan_in, fan_out) in enumerate(zip(sizes[:-1], sizes[1:])):
        if i == last:
            limit = np.sqrt(6.0 / (fan_in + fan_out))
        else:
            limit = np.sqrt(6.0 / fan_in)
        w = rng.uniform(-limit, limit, size=(fan_in, fan_out))
        params.append((w, np.zeros(fan_out)))
    return params


def _log_softmax(z: np.ndarray) -> np.ndarray:
    shifted = z - z.max(axis=1, keepdims=True)
    return shifted - np.log(np.exp(shifted).sum(axis=1, keepdims=True))


def forward(params: Params, x: np.ndarray) -> tuple[np.ndarray, list[np.ndarray]]:
    """Return the output logits and the per-layer inputs (for backprop)."""
    acts = [x]
    h = x
    for i, (w, b) in enumerate(params):
        z = h @ w + b
        if i < len(params) - 1:
            h = np.maximum(z, 0.0)
            acts.append(h)
        else:
            h = z
    return h, acts


def probabilities(params: Params, x: np.ndarray) -> np.ndarray:
    logits, _ = forward(params, np.atleast_2d(np.asarray(x, dtype=float)))
    return np.exp(_log_softmax(logits))


def loss_and_gradients(params: Params, x: np.ndarray, y: np.ndarray) -> tuple[float, Params]:
    """Mean sparse cross-entropy and its gradient for every weight and bias."""
    n = x.shape[0]
    logits, acts = forward(params, x)
    logp = _log_softmax(logits)
    loss = float(-logp[np.arange(n), y].mean())
    delta = np.exp(logp)
    delta[np.arange(n), y] -= 1.0
    delta /= n
    grads: Params = [None] * len(params)  # type: ignore[list-item]
    for i in range(len(params) - 1, -1, -1):
        w, _ = params[i]
        grads[i] = (acts[i].T @ delta, delta.sum(axis=0))
        if i:
            delta = (delta @ w.T) * (acts[i] > 0)
    return loss, grads


def accuracy(params: Params, x: np.ndarray, y: np.ndarray) -> float:
    return float((probabilities(params, x).argmax(axis=1) == y).mean())


@dataclass
class TrainingHistory:
    loss: list[float] = field(default_factory=list)
    accuracy: list[float] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"loss": self.loss, "accuracy": self.accuracy}


@dataclass
class MlpModel:
    params: Params
    config: MlpConfig
    seed: int
    feature_names: tuple[str, ...] = ()
    mean: np.ndarray | None = None
    std: np.ndarray | None = None
    pipeline_hash: str = ""
    history: TrainingHistory = field(default_factory=TrainingHistory)

    def __post_init__(self) -> None:
        for (w, b), (w_next, _) in zip(self.params, self.params[1:]):
            if w.shape[1] != b.shape[0] or w.shape[1] != w_next.shape[0]:
                raise ValueError("inconsistent layer shapes")
        if self.params[-1][0].shape[1] != self.params[-1][1].shape[0]:
            raise ValueError("inconsistent layer shapes")
        if self.feature_names and len(self.feature_names) != self.input_width:
            raise ValueError("feature names do not match the input width")

    @property
    def layer_sizes(self) -> list[int]:
        return [self.params[0][0].shape[0]] + [w.shape[1] for w, _ in self.params]

    @property
    def input_width(self) -> int:
        return self.params[0][0].shape[0]

    def predict_proba(self, x: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(np.asarray(x, dtype=float))
        if x.shape[1] != self.input_width:
            raise ValueError(f"expected {self.input_width} features, got {x.shape[1]}")
        return probabilities(self.params, x)

    def predict(self, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Classes and softmax probabilities for standardized rows."""
        proba = self.predict_proba(x)
        return proba.argmax(axis=1), proba

    def standardize(self, raw: np.ndarray) -> np.ndarray:
        from cgems.learn.matrix import apply_standardization

        raw = np.atleast_2d(np.asarray(raw, dtype=float))
        if self.mean is None or self.std is None:
            return raw
        if raw.shape[1] != len(self.mean):
            raise ValueError(f"expected {len(self.mean)} features, got {raw.shape[1]}")
        return apply_standardization(raw, self.mean, self.std)

    def to_json(self) -> dict:
        return {
            "format_version": MODEL_FORMAT_VERSION,
            "layer_sizes": self.layer_sizes,
            "activations": {"hidden": "relu", "output": "softmax"},
            "weights": [w.tolist() for w, _ in self.params],
            "biases": [b.tolist() for _, b in self.params],
            "config": self.config.to_json(),
            "seed": self.seed,
            "feature_names": list(self.feature_names),
            "standardization": None
            if self.mean is None
            else {"mean": self.mean.tolist(), "std": self.std.tolist()},
            "pipeline_hash": self.pipeline_hash,
        }

    def dumps(self) -> str:
        # json writes floats with repr, which round-trips doubles exactly
        return json.dumps(self.to_json(), sort_keys=True, indent=1) + "\n"

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.dumps(), encoding="utf-8")

    @classmethod
    def from_json(cls, data: dict) -> MlpModel:
        if data.get("format_version") != MODEL_FORMAT_VERSION:
            raise ValueError(f"unsupported model format {data.get('format_version')!r}")
        params = [
            (np.array(w, dtype=float), np.array(b, dtype=float))
            for w, b in zip(data["weights"], data["biases"])
        ]
        std = data.get("standardization")
        return cls(
            params=params,
            config=MlpConfig.from_json(data["config"]),
            seed=int(data["seed"]),
            feature_names=tuple(data.get("feature_names", ())),
            mean=None if std is None else np.array(std["mean"], dtype=float),
            std=None if std is None else np.array(std["std"], dtype=float),
            pipeline_hash=data.get("pipeline_hash", ""),
        )

    @classmethod
    def load(cls, path: str | Path) -> MlpModel:
        return cls.from_json(json.loads(Path(path).read_text(encoding="utf-8")))


def train_mlp(
    x: np.ndarray,
    y: np.ndarray,
    config: MlpConfig = MlpConfig(),
    seed: int = 0,
    **model_fields,
) -> MlpModel:
    """Full-batch Adam on (x, y); deterministic for a given seed."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=int)
    if x.ndim != 2 or len(y) != x.shape[0]:
        raise ValueError("x must be n x d with one label per row")
    if len(y) == 0 or y.min() < 0 or y.max() >= config.n_classes:
        raise ValueError(f"labels must lie in [0, {config.n_classes})")
    rng = np.random.default_rng(seed)
    sizes = [x.shape[1], *config.hidden, config.n_classes]
    params = init_params(sizes, rng)
    m = [(np.zeros_like(w), np.zeros_like(b)) for w, b in params]
    v = [(np.zeros_like(w), np.zeros_like(b)) for w, b in params]
    b1, b2, lr, eps = config.beta1, config.beta2, config.learning_rate, config.epsilon
    history = TrainingHistory()
    for epoch in range(1, config.epochs + 1):
        loss, grads = loss_and_gradients(params, x, y)
        if not np.isfinite(loss):
            raise TrainingError("loss is not finite", epoch)
        history.loss.append(loss)
        history.accuracy.append(accuracy(params, x, y))
        corr1 = 1 - b1 ** epoch
        corr2 = 1 - b2 ** epoch
        updated = []
        for i, ((w, b), (gw, gb)) in enumerate(zip(params, grads)):
            mw, mb = m[i]
            vw, vb = v[i]
            mw = b1 * mw + (1 - b1) * gw
            mb = b1 * mb + (1 - b1) * gb
            vw = b2 * vw + (1 - b2) * gw * gw
            vb = b2 * vb + (1 - b2) * gb * gb
            m[i], v[i] = (mw, mb), (vw, vb)
            w = w - lr * (mw / corr1) / (np.sqrt(vw / corr2) + eps)
            b = b - lr * (mb / corr1) / (np.sqrt(vb / corr2) + eps)
            updated.append((w, b))
        params = updated
    if config.epochs:
        final_loss, _ = loss_and_gradients(params, x, y)
        if not np.isfinite(final_loss):
            raise TrainingError("loss is not finite", config.epochs)
    return MlpModel(params=params, config=config, seed=seed, history=history, **model_fields)


def gradient_check(params: Params, x: np.ndarray, y: np.ndarray, h: float = 1e-5) -> float:
    """Largest relative gap between analytic and central-difference gradients
    over every weight and bias. Gradients below 1e-6 are compared in
    absolute terms, where the difference quotient carries no useful digits."""
    _, grads = loss_and_gradients(params, x, y)
    worst = 0.0
    for (w, b), (gw, gb) in zip(params, grads):
        for array, grad in ((w, gw), (b, gb)):
            flat, gflat = array.reshape(-1), grad.reshape(-1)
            for k in range(flat.size):
                old = flat[k]
                flat[k] = old + h
                up, _ = loss_and_gradients(params, x, y)
                flat[k] = old - h
                down, _ = loss_and_gradients(params, x, y)
                flat[k] = old
                numeric = (up - down) / (2 * h)
                scale = max(abs(numeric), abs(gflat[k]), 1e-6)
                worst = max(worst, abs(numeric - gflat[k]) / scale)
    return worst
