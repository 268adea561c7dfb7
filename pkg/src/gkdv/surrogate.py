"""G-KdVNet: fully connected tanh network (x, tau, w) -> eta, trained with Adam.

Everything is plain numpy: forward pass, reverse-mode gradients, Adam and a
seeded splitmix64 generator for initialization, so a (seed, config, dataset)
triple determines the trained model bit for bit.
"""

from __future__ import annotations

import json
import logging
import math
import os
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Sequence

import numpy as np

log = logging.getLogger(__name__)

DEFAULT_LAYERS = (3, 32, 32, 32, 1)
ACTIVATION = "tanh"

_MASK64 = (1 << 64) - 1


class SplitMix64:
    """64-bit splitmix generator; tiny, portable and fully specified."""

    def __init__(self, seed: int):
        self.state = seed & _MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def uniform(self, low: float = 0.0, high: float = 1.0) -> float:
        # top 53 bits -> [0, 1)
        return low + (high - low) * ((self.next_u64() >> 11) * 2.0**-53)

    def uniform_array(self, n: int, low: float = 0.0, high: float = 1.0) -> np.ndarray:
        return np.array([self.uniform(low, high) for _ in range(n)])


class ModelFormatError(ValueError):
    """Malformed model file; ``field`` names the offending entry."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


class TrainingDiverged(FloatingPointError):
    pass


@dataclass(frozen=True)
class ModelParams:
    """Network weights plus the affine input scaling ``(x - offset) * factor``.

    ``weights[i]`` has shape ``(layer_sizes[i], layer_sizes[i + 1])``.
    """

    layer_sizes: tuple[int, ...]
    weights: tuple[np.ndarray, ...]
    biases: tuple[np.ndarray, ...]
    input_offset: np.ndarray
    input_factor: np.ndarray
    activation: str = ACTIVATION

    def __post_init__(self):
        sizes = self.layer_sizes
        if len(self.weights) != len(sizes) - 1 or len(self.biases) != len(sizes) - 1:
            raise ValueError("layer count does not match layer_sizes")
        for i, (W, b) in enumerate(zip(self.weights, self.biases)):
            if W.shape != (sizes[i], sizes[i + 1]):
                raise ValueError(f"weights[{i}] has shape {W.shape}, expected {(sizes[i], sizes[i + 1])}")
            if b.shape != (sizes[i + 1],):
                raise ValueError(f"biases[{i}] has shape {b.shape}, expected {(sizes[i + 1],)}")
        if self.input_offset.shape != (sizes[0],) or self.input_factor.shape != (sizes[0],):
            raise ValueError("input scaling must have one entry per input")

    @property
    def n_params(self) -> int:
        return sum(W.size + b.size for W, b in zip(self.weights, self.biases))

    def flat(self) -> np.ndarray:
        return np.concatenate([a.ravel() for pair in zip(self.weights, self.biases) for a in pair])

    def with_input_scale(self, offset, factor) -> "ModelParams":
        return replace(self, input_offset=np.asarray(offset, float), input_factor=np.asarray(factor, float))

    def weight_norm_sq(self) -> float:
        return float(sum(np.sum(W * W) for W in self.weights))


@dataclass(frozen=True)
class Gradients:
    weights: tuple[np.ndarray, ...]
    biases: tuple[np.ndarray, ...]

    def flat(self) -> np.ndarray:
        return np.concatenate([a.ravel() for pair in zip(self.weights, self.biases) for a in pair])


@dataclass(frozen=True)
class AdamState:
    m_w: tuple[np.ndarray, ...]
    m_b: tuple[np.ndarray, ...]
    v_w: tuple[np.ndarray, ...]
    v_b: tuple[np.ndarray, ...]
    t: int = 0
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8

    @classmethod
    def fresh(cls, model: ModelParams) -> "AdamState":
        zw = tuple(np.zeros_like(W) for W in model.weights)
        zb = tuple(np.zeros_like(b) for b in model.biases)
        return cls(zw, zb, zw, zb, 0)


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 0.005
    epochs: int = 1990
    l2_lambda: float = 1e-4
    seed: int = 42
    layer_sizes: tuple[int, ...] = DEFAULT_LAYERS
    batch_mode: str = "full"

    def __post_init__(self):
        if not self.learning_rate > 0:
            raise ValueError("learning_rate must be positive")
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if self.l2_lambda < 0:
            raise ValueError("l2_lambda must be non-negative")
        if self.batch_mode != "full":
            raise ValueError("only full-batch training is supported")


@dataclass(frozen=True)
class Dataset:
    inputs: np.ndarray  # (M, 3) rows of (x, tau, w)
    targets: np.ndarray  # (M,)
    provenance: str = "adm"

    def __post_init__(self):
        inputs = np.asarray(self.inputs, dtype=float)
        targets = np.asarray(self.targets, dtype=float)
        if inputs.ndim != 2 or targets.ndim != 1 or len(inputs) != len(targets):
            raise ValueError("inputs must be (M, d) and targets (M,) with equal M")
        if not (np.all(np.isfinite(inputs)) and np.all(np.isfinite(targets))):
            raise ValueError("dataset contains non-finite values")
        if self.provenance not in ("adm", "exact"):
            raise ValueError(f"unknown provenance {self.provenance!r}")
        object.__setattr__(self, "inputs", inputs)
        object.__setattr__(self, "targets", targets)

    def __len__(self) -> int:
        return len(self.targets)


def init_model(layer_sizes: Sequence[int] = DEFAULT_LAYERS, seed: int = 42) -> ModelParams:
    """Glorot-uniform weights from a seeded splitmix64 stream, zero biases."""
    sizes = tuple(int(n) for n in layer_sizes)
    if len(sizes) < 2 or any(n < 1 for n in sizes):
        raise ValueError(f"invalid layer sizes {layer_sizes!r}")
    rng = SplitMix64(seed)
    weights, biases = [], []
    for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
        s = math.sqrt(6.0 / (fan_in + fan_out))
        weights.append(rng.uniform_array(fan_in * fan_out, -s, s).reshape(fan_in, fan_out))
        biases.append(np.zeros(fan_out))
    return ModelParams(sizes, tuple(weights), tuple(biases),
                       np.zeros(sizes[0]), np.ones(sizes[0]))


def fit_input_scale(inputs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Offset/factor mapping each column's [min, max] onto [-1, 1]."""
    lo = inputs.min(axis=0)
    hi = inputs.max(axis=0)
    offset = 0.5 * (lo + hi)
    span = hi - lo
    factor = np.where(span > 0, 2.0 / np.where(span > 0, span, 1.0), 1.0)
    return offset, factor


def _forward_all(model: ModelParams, inputs: np.ndarray) -> list[np.ndarray]:
    h = (inputs - model.input_offset) * model.input_factor
    acts = [h]
    last = len(model.weights) - 1
    for i, (W, b) in enumerate(zip(model.weights, model.biases)):
        z = h @ W + b
        h = z if i == last else np.tanh(z)
        acts.append(h)
    return acts


def forward(model: ModelParams, inputs) -> np.ndarray | float:
    """Network output for one input triple or a batch of shape (M, 3)."""
    arr = np.asarray(inputs, dtype=float)
    single = arr.ndim == 1
    out = _forward_all(model, np.atleast_2d(arr))[-1][:, 0]
    return float(out[0]) if single else out


def loss_and_gradients(model: ModelParams, data: Dataset, l2_lambda: float) -> tuple[float, Gradients]:
    """Mean squared error plus ``l2_lambda * sum(W**2)`` and its exact gradient."""
    if len(data) == 0:
        raise ValueError("empty dataset")
    acts = _forward_all(model, data.inputs)
    resid = acts[-1][:, 0] - data.targets
    M = len(resid)
    loss = float(np.sum(resid * resid) / M) + l2_lambda * model.weight_norm_sq()

    delta = (2.0 / M) * resid[:, None]
    gW = [None] * len(model.weights)
    gb = [None] * len(model.weights)
    for i in range(len(model.weights) - 1, -1, -1):
        gW[i] = acts[i].T @ delta + 2.0 * l2_lambda * model.weights[i]
        gb[i] = delta.sum(axis=0)
        if i:
            delta = (delta @ model.weights[i].T) * (1.0 - acts[i] ** 2)
    return loss, Gradients(tuple(gW), tuple(gb))


def adam_step(model: ModelParams, state: AdamState, grads: Gradients,
              learning_rate: float) -> tuple[ModelParams, AdamState]:
    for p, g in zip(model.weights + model.biases, grads.weights + grads.biases):
        if p.shape != g.shape:
            raise ValueError(f"gradient shape {g.shape} does not match parameter shape {p.shape}")
    b1, b2, eps = state.beta1, state.beta2, state.eps
    t = state.t + 1
    c1 = 1.0 - b1**t
    c2 = 1.0 - b2**t

    def update(params, ms, vs, gs):
        new_p, new_m, new_v = [], [], []
        for p, m, v, g in zip(params, ms, vs, gs):
            m = b1 * m + (1.0 - b1) * g
            v = b2 * v + (1.0 - b2) * (g * g)
            new_p.append(p - learning_rate * (m / c1) / (np.sqrt(v / c2) + eps))
            new_m.append(m)
            new_v.append(v)
        return tuple(new_p), tuple(new_m), tuple(new_v)

    W, m_w, v_w = update(model.weights, state.m_w, state.v_w, grads.weights)
    b, m_b, v_b = update(model.biases, state.m_b, state.v_b, grads.biases)
    return replace(model, weights=W, biases=b), replace(state, m_w=m_w, m_b=m_b, v_w=v_w, v_b=v_b, t=t)


def train(config: TrainConfig, data: Dataset) -> tuple[ModelParams, list[float]]:
    """Full-batch Adam; returns the final model and the per-epoch loss."""
    model = init_model(config.layer_sizes, config.seed)
    model = model.with_input_scale(*fit_input_scale(data.inputs))
    state = AdamState.fresh(model)
    history = []
    for epoch in range(1, config.epochs + 1):
        with np.errstate(over="ignore", invalid="ignore"):
            loss, grads = loss_and_gradients(model, data, config.l2_lambda)
        if not math.isfinite(loss):
            raise TrainingDiverged(f"loss became {loss} at epoch {epoch}")
        history.append(loss)
        model, state = adam_step(model, state, grads, config.learning_rate)
        if epoch % 200 == 0:
            log.debug("epoch %d loss %.6e", epoch, loss)
    return model, history


def mse(model: ModelParams, data: Dataset) -> float:
    r = forward(model, data.inputs) - data.targets
    return float(np.mean(r * r))


def predict_grid(model: ModelParams, xs, taus, w: float) -> np.ndarray:
    """Predictions on a tensor grid; rows follow ``xs``, columns ``taus``."""
    xs = np.asarray(xs, dtype=float)
    taus = np.asarray(taus, dtype=float)
    X, T = np.meshgrid(xs, taus, indexing="ij")
    pts = np.column_stack([X.ravel(), T.ravel(), np.full(X.size, float(w))])
    return forward(model, pts).reshape(len(xs), len(taus))


# -- persistence ------------------------------------------------------------

def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def _dump_array(a) -> str:
    return "[" + ", ".join(_fmt(v) for v in np.ravel(a)) + "]"


def model_to_text(model: ModelParams) -> str:
    scale = ", ".join(f"[{_fmt(o)}, {_fmt(f)}]" for o, f in zip(model.input_offset, model.input_factor))
    lines = [
        "{",
        f'  "layer_sizes": [{", ".join(str(n) for n in model.layer_sizes)}],',
        f'  "activation": {json.dumps(model.activation)},',
        f'  "input_scale": [{scale}],',
        '  "weights": [',
        ",\n".join("    " + _dump_array(W) for W in model.weights),
        "  ],",
        '  "biases": [',
        ",\n".join("    " + _dump_array(b) for b in model.biases),
        "  ]",
        "}",
    ]
    return "\n".join(lines) + "\n"


def save_model(model: ModelParams, destination) -> None:
    """Write the model atomically (temp file, then rename)."""
    path = Path(destination)
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(model_to_text(model))
    os.replace(tmp, path)


def _float_list(obj, name: str, n: int | None = None) -> np.ndarray:
    if not isinstance(obj, list) or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in obj):
        raise ModelFormatError(name, "expected a list of numbers")
    arr = np.array(obj, dtype=float)
    if n is not None and arr.size != n:
        raise ModelFormatError(name, f"expected {n} values, got {arr.size}")
    if not np.all(np.isfinite(arr)):
        raise ModelFormatError(name, "non-finite value")
    return arr


def model_from_text(text: str) -> ModelParams:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelFormatError("<document>", f"not valid JSON ({exc})") from None
    if not isinstance(doc, dict):
        raise ModelFormatError("<document>", "top level must be an object")
    for key in ("layer_sizes", "activation", "input_scale", "weights", "biases"):
        if key not in doc:
            raise ModelFormatError(key, "missing")
    sizes = doc["layer_sizes"]
    if (not isinstance(sizes, list) or len(sizes) < 2
            or not all(isinstance(n, int) and not isinstance(n, bool) and n >= 1 for n in sizes)):
        raise ModelFormatError("layer_sizes", "expected a list of at least two positive integers")
    if doc["activation"] != ACTIVATION:
        raise ModelFormatError("activation", f"unsupported activation {doc['activation']!r}")
    scale = doc["input_scale"]
    if not isinstance(scale, list) or len(scale) != sizes[0]:
        raise ModelFormatError("input_scale", f"expected {sizes[0]} offset/factor pairs")
    pairs = [_float_list(p, f"input_scale[{i}]", 2) for i, p in enumerate(scale)]
    n_layers = len(sizes) - 1
    for key in ("weights", "biases"):
        if not isinstance(doc[key], list) or len(doc[key]) != n_layers:
            raise ModelFormatError(key, f"expected {n_layers} layers")
    weights = tuple(
        _float_list(W, f"weights[{i}]", sizes[i] * sizes[i + 1]).reshape(sizes[i], sizes[i + 1])
        for i, W in enumerate(doc["weights"])
    )
    biases = tuple(_float_list(b, f"biases[{i}]", sizes[i + 1]) for i, b in enumerate(doc["biases"]))
    return ModelParams(tuple(sizes), weights, biases,
                       np.array([p[0] for p in pairs]), np.array([p[1] for p in pairs]), ACTIVATION)


def load_model(source) -> ModelParams:
    return model_from_text(Path(source).read_text(encoding="utf-8"))
