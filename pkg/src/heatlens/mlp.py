"""Dense feed-forward classifier: inference, backprop, ADAM, weight files.

Everything here is plain numpy so that results are reproducible to the
bit from a seed. Models are immutable; training builds a new one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from .datasets import LabeledDataset
from .rng import substream
from .serialization import atomic_write_text, dumps_stable, parse_json_file

WEIGHT_FORMAT_VERSION = 1

_ACTIVATIONS = ("relu", "tanh")


def _frozen_array(values, dtype=float) -> np.ndarray:
    arr = np.array(values, dtype=dtype)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class MlpModel:
    """Affine layers with relu or tanh between them (never after the last).

    layers holds (weight, bias) pairs; weight i has shape (h_i, h_{i-1})
    and maps activations forward as W @ h + b.
    """

    layers: Tuple[Tuple[np.ndarray, np.ndarray], ...]
    activation: str

    def __post_init__(self) -> None:
        if self.activation not in _ACTIVATIONS:
            raise ValueError(
                f"activation must be one of {_ACTIVATIONS}, got {self.activation!r}"
            )
        if len(self.layers) == 0:
            raise ValueError("a model needs at least one layer")
        frozen = []
        previous = None
        for i, (w, b) in enumerate(self.layers):
            w = _frozen_array(w)
            b = _frozen_array(b)
            if w.ndim != 2 or b.ndim != 1 or w.shape[0] != b.shape[0]:
                raise ValueError(
                    f"layer {i} is not a matrix-vector pair: {w.shape}, {b.shape}"
                )
            if previous is not None and w.shape[1] != previous:
                raise ValueError(
                    f"layer {i} expects {w.shape[1]} inputs, previous layer emits {previous}"
                )
            if not (np.isfinite(w).all() and np.isfinite(b).all()):
                raise ValueError(f"layer {i} has non-finite parameters")
            previous = w.shape[0]
            frozen.append((w, b))
        if previous < 2:
            raise ValueError(f"need at least 2 output classes, got {previous}")
        object.__setattr__(self, "layers", tuple(frozen))

    @property
    def input_dim(self) -> int:
        return self.layers[0][0].shape[1]

    @property
    def num_classes(self) -> int:
        return self.layers[-1][0].shape[0]

    @property
    def dims(self) -> Tuple[int, ...]:
        return (self.input_dim,) + tuple(w.shape[0] for w, _ in self.layers)


def initialize_mlp(dims: Sequence[int], activation: str, seed: int = 0) -> MlpModel:
    """He-scaled Gaussian weights, zero biases."""
    dims = tuple(int(d) for d in dims)
    if len(dims) < 2 or any(d < 1 for d in dims):
        raise ValueError(f"dims must chain at least input->output, got {dims!r}")
    layers = []
    for i in range(len(dims) - 1):
        gen = substream(seed, "mlp-init", i)
        scale = math.sqrt(2.0 / dims[i])
        layers.append((gen.standard_normal((dims[i + 1], dims[i])) * scale, np.zeros(dims[i + 1])))
    return MlpModel(tuple(layers), activation)


def _activate(z: np.ndarray, activation: str) -> np.ndarray:
    if activation == "relu":
        return np.maximum(z, 0.0)
    return np.tanh(z)


def _activation_slope(z: np.ndarray, activation: str) -> np.ndarray:
    if activation == "relu":
        return (z > 0.0).astype(float)
    t = np.tanh(z)
    return 1.0 - t * t


def forward_batch(model: MlpModel, points: np.ndarray) -> np.ndarray:
    """Logits for a whole (m, input_dim) batch at once."""
    h = np.asarray(points, dtype=float)
    if h.ndim != 2 or h.shape[1] != model.input_dim:
        raise ValueError(
            f"expected points of shape (m, {model.input_dim}), got {h.shape}"
        )
    last = len(model.layers) - 1
    for i, (w, b) in enumerate(model.layers):
        h = h @ w.T + b
        if i != last:
            h = _activate(h, model.activation)
    return h


def forward(model: MlpModel, x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape != (model.input_dim,):
        raise ValueError(f"expected input of shape ({model.input_dim},), got {x.shape}")
    return forward_batch(model, x[None, :])[0]


def predict(model: MlpModel, x: np.ndarray) -> int:
    # np.argmax breaks ties toward the lowest index
    return int(np.argmax(forward(model, x)))


def predict_batch(model: MlpModel, points: np.ndarray) -> np.ndarray:
    return np.argmax(forward_batch(model, points), axis=1)


def in_error_set(model: MlpModel, x: np.ndarray, y: int) -> bool:
    """True when the model misclassifies x against label y, ties included."""
    logits = forward(model, x)
    top = logits.max()
    if (logits == top).sum() > 1:
        return True
    return int(np.argmax(logits)) != y


def error_region(model: MlpModel, y: int) -> Callable[[np.ndarray], np.ndarray]:
    """Vectorized membership oracle for the error set of label y."""

    def oracle(points: np.ndarray) -> np.ndarray:
        logits = forward_batch(model, points)
        top = logits.max(axis=1, keepdims=True)
        ties = (logits == top).sum(axis=1) > 1
        return ties | (np.argmax(logits, axis=1) != y)

    return oracle


def _softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=1, keepdims=True)


def _forward_trace(model: MlpModel, points: np.ndarray):
    # returns (logits, pre-activations per layer, inputs per layer)
    h = points
    pres: List[np.ndarray] = []
    inputs: List[np.ndarray] = []
    last = len(model.layers) - 1
    for i, (w, b) in enumerate(model.layers):
        inputs.append(h)
        z = h @ w.T + b
        pres.append(z)
        h = _activate(z, model.activation) if i != last else z
    return h, pres, inputs


def _loss_logit_gradient(logits: np.ndarray, labels: np.ndarray, loss: str) -> np.ndarray:
    if loss == "cross_entropy":
        grad = _softmax(logits)
        grad[np.arange(len(labels)), labels] -= 1.0
        return grad
    if loss == "margin":
        # loss = best rival logit - true logit
        masked = logits.copy()
        masked[np.arange(len(labels)), labels] = -np.inf
        rival = np.argmax(masked, axis=1)
        grad = np.zeros_like(logits)
        grad[np.arange(len(labels)), rival] = 1.0
        grad[np.arange(len(labels)), labels] -= 1.0
        return grad
    raise ValueError(f"loss must be 'cross_entropy' or 'margin', got {loss!r}")


def input_gradient(
    model: MlpModel, x: np.ndarray, y: int, loss: str = "cross_entropy"
) -> np.ndarray:
    """Gradient of the loss at (x, y) with respect to the input."""
    x = np.asarray(x, dtype=float)
    if x.shape != (model.input_dim,):
        raise ValueError(f"expected input of shape ({model.input_dim},), got {x.shape}")
    logits, pres, _ = _forward_trace(model, x[None, :])
    delta = _loss_logit_gradient(logits, np.array([int(y)]), loss)
    for i in range(len(model.layers) - 1, -1, -1):
        w, _ = model.layers[i]
        delta = delta @ w
        if i > 0:
            delta = delta * _activation_slope(pres[i - 1], model.activation)
    return delta[0]


def _parameter_gradients(model: MlpModel, points, labels, loss: str):
    logits, pres, inputs = _forward_trace(model, points)
    batch = len(labels)
    delta = _loss_logit_gradient(logits, labels, loss) / batch
    grads = [None] * len(model.layers)
    for i in range(len(model.layers) - 1, -1, -1):
        w, _ = model.layers[i]
        grads[i] = (delta.T @ inputs[i], delta.sum(axis=0))
        if i > 0:
            delta = (delta @ w) * _activation_slope(pres[i - 1], model.activation)
    if loss == "cross_entropy":
        p = _softmax(logits)
        rows = np.arange(batch)
        value = float(-np.log(np.maximum(p[rows, labels], 1e-300)).mean())
    else:
        masked = logits.copy()
        masked[np.arange(batch), labels] = -np.inf
        value = float((masked.max(axis=1) - logits[np.arange(batch), labels]).mean())
    return value, grads


@dataclass(frozen=True)
class TrainConfig:
    """ADAM protocol knobs; the defaults mirror the planar experiments."""

    epochs: int
    lr: float = 1e-5
    batch_size: int = 128
    weight_decay: float = 0.0
    noise_sigma2: Optional[float] = None
    seed: int = 0

    def __post_init__(self) -> None:
        if self.epochs < 0:
            raise ValueError(f"epochs must be nonnegative, got {self.epochs!r}")
        if self.lr <= 0.0:
            raise ValueError(f"learning rate must be positive, got {self.lr!r}")
        if self.batch_size < 1:
            raise ValueError(f"batch size must be positive, got {self.batch_size!r}")
        if self.weight_decay < 0.0:
            raise ValueError(f"weight decay must be nonnegative, got {self.weight_decay!r}")
        if self.noise_sigma2 is not None and self.noise_sigma2 <= 0.0:
            raise ValueError(f"noise variance must be positive, got {self.noise_sigma2!r}")


AugmentHook = Callable[[MlpModel, np.ndarray, np.ndarray, int], Tuple[np.ndarray, np.ndarray]]


def train_adam(
    model: MlpModel,
    dataset: LabeledDataset,
    config: TrainConfig,
    augment: Optional[AugmentHook] = None,
) -> Tuple[MlpModel, List[float]]:
    """Run plain ADAM on the cross-entropy loss; returns (model, loss trace).

    Fully deterministic for a given seed: batch order, noise copies, and
    the optional augmentation hook all draw from derived substreams. The
    hook receives (current model, points, labels, epoch) and returns
    extra samples for that epoch; noise_sigma2 adds one N(0, sigma^2 I)
    jittered copy of every clean sample per epoch.
    """
    if len(dataset) == 0:
        raise ValueError("dataset is empty")
    if dataset.labels.max() >= model.num_classes:
        raise ValueError(
            f"dataset has label {dataset.labels.max()} but the model emits "
            f"{model.num_classes} classes"
        )
    params = [[w.copy(), b.copy()] for w, b in model.layers]
    first_moment = [[np.zeros_like(w), np.zeros_like(b)] for w, b in model.layers]
    second_moment = [[np.zeros_like(w), np.zeros_like(b)] for w, b in model.layers]
    beta1, beta2, eps = 0.9, 0.999, 1e-8
    step = 0
    trace: List[float] = []
    for epoch in range(config.epochs):
        current = MlpModel(tuple((w, b) for w, b in params), model.activation)
        points, labels = dataset.points, dataset.labels
        if config.noise_sigma2 is not None:
            gen = substream(config.seed, "train-noise", epoch)
            jitter = gen.standard_normal(points.shape) * math.sqrt(config.noise_sigma2)
            points = np.concatenate([points, points + jitter])
            labels = np.concatenate([labels, labels])
        if augment is not None:
            extra_points, extra_labels = augment(current, dataset.points, dataset.labels, epoch)
            if len(extra_labels):
                points = np.concatenate([points, extra_points])
                labels = np.concatenate([labels, extra_labels])
        order = substream(config.seed, "train-shuffle", epoch).permutation(len(labels))
        points, labels = points[order], labels[order]
        total_loss, seen = 0.0, 0
        for lo in range(0, len(labels), config.batch_size):
            batch_points = points[lo : lo + config.batch_size]
            batch_labels = labels[lo : lo + config.batch_size]
            loss_value, grads = _parameter_gradients(
                current, batch_points, batch_labels, "cross_entropy"
            )
            total_loss += loss_value * len(batch_labels)
            seen += len(batch_labels)
            step += 1
            correction = math.sqrt(1.0 - beta2**step) / (1.0 - beta1**step)
            for layer, (gw, gb) in enumerate(grads):
                if config.weight_decay:
                    gw = gw + config.weight_decay * params[layer][0]
                for slot, grad in ((0, gw), (1, gb)):
                    m = first_moment[layer][slot]
                    v = second_moment[layer][slot]
                    m *= beta1
                    m += (1.0 - beta1) * grad
                    v *= beta2
                    v += (1.0 - beta2) * grad * grad
                    params[layer][slot] = params[layer][slot] - config.lr * correction * m / (
                        np.sqrt(v) + eps
                    )
            current = MlpModel(tuple((w, b) for w, b in params), model.activation)
        trace.append(total_loss / seen)
    return MlpModel(tuple((w, b) for w, b in params), model.activation), trace


def accuracy(model: MlpModel, dataset: LabeledDataset) -> float:
    """Fraction of samples with a strict correct argmax."""
    if len(dataset) == 0:
        raise ValueError("dataset is empty")
    errors = error_region_labels(model, dataset.points, dataset.labels)
    return 1.0 - float(errors.mean())


def error_region_labels(
    model: MlpModel, points: np.ndarray, labels: np.ndarray
) -> np.ndarray:
    """Vectorized in_error_set over matched (points, labels) rows."""
    logits = forward_batch(model, points)
    top = logits.max(axis=1, keepdims=True)
    ties = (logits == top).sum(axis=1) > 1
    return ties | (np.argmax(logits, axis=1) != np.asarray(labels, dtype=int))


def model_to_document(model: MlpModel) -> dict:
    return {
        "format_version": WEIGHT_FORMAT_VERSION,
        "activation": model.activation,
        "dims": list(model.dims),
        "layers": [
            {"w": [[float(v) for v in row] for row in w], "b": [float(v) for v in b]}
            for w, b in model.layers
        ],
    }


def save_model(model: MlpModel, path: str) -> None:
    """Write the versioned weight document; exact float round-trip."""
    atomic_write_text(path, dumps_stable(model_to_document(model)))


def model_from_document(doc, source: str = "weight document") -> MlpModel:
    def fail(reason: str):
        raise ValueError(f"{source}: {reason}")

    if not isinstance(doc, dict):
        fail(f"expected a JSON object at the top level, got {type(doc).__name__}")
    version = doc.get("format_version")
    if version != WEIGHT_FORMAT_VERSION:
        fail(f"unsupported format_version {version!r} (expected {WEIGHT_FORMAT_VERSION})")
    activation = doc.get("activation")
    if activation not in _ACTIVATIONS:
        fail(f"unknown activation {activation!r}")
    dims = doc.get("dims")
    layers_doc = doc.get("layers")
    if not isinstance(dims, list) or not all(isinstance(d, int) for d in dims):
        fail("dims must be a list of integers")
    if not isinstance(layers_doc, list) or len(layers_doc) != len(dims) - 1:
        fail(f"expected {len(dims) - 1} layers for dims {dims}, got "
             f"{len(layers_doc) if isinstance(layers_doc, list) else layers_doc!r}")
    layers = []
    for i, entry in enumerate(layers_doc):
        if not isinstance(entry, dict) or "w" not in entry or "b" not in entry:
            fail(f"layer {i} must be an object with 'w' and 'b'")
        try:
            w = np.array(entry["w"], dtype=float)
            b = np.array(entry["b"], dtype=float)
        except (TypeError, ValueError):
            fail(f"layer {i} has non-numeric entries")
        if w.shape != (dims[i + 1], dims[i]) or b.shape != (dims[i + 1],):
            fail(
                f"layer {i} has shape {w.shape}/{b.shape}, expected "
                f"({dims[i + 1]}, {dims[i]})/({dims[i + 1]},)"
            )
        layers.append((w, b))
    try:
        return MlpModel(tuple(layers), activation)
    except ValueError as err:
        fail(str(err))


def load_model(path: str) -> MlpModel:
    """Read a weight file back; malformed input raises with a location."""
    return model_from_document(parse_json_file(path), source=path)
