"""Small MLP classifiers: layers, loss, momentum SGD, training loop.

Stand-ins for full-scale networks: the hysteresis mechanism under study is
architecture-independent, so everything here is sized for a desk. Weights
use Xavier-uniform init drawn from numpy's PCG64 generator (seeded, so one
seed gives one bitwise-reproducible run); biases start at zero.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field

import numpy as np

from . import activations, autograd, diagnostics, tensor
from .errors import ParseError

CHECKPOINT_MAGIC = b"HELU1"


@dataclass
class LinearLayer:
    weight: np.ndarray  # [out x in]
    bias: np.ndarray  # [out]
    weight_vel: np.ndarray = field(default=None, repr=False)
    bias_vel: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        if self.weight_vel is None:
            self.weight_vel = np.zeros_like(self.weight)
        if self.bias_vel is None:
            self.bias_vel = np.zeros_like(self.bias)


@dataclass
class MlpModel:
    layers: list[LinearLayer]
    activation: activations.ActivationSpec

    def __post_init__(self):
        if len(self.layers) < 2:
            raise ValueError("model needs at least one hidden layer")
        for prev, nxt in zip(self.layers, self.layers[1:]):
            if nxt.weight.shape[1] != prev.weight.shape[0]:
                raise ValueError(
                    f"layer dims do not chain: {prev.weight.shape} -> {nxt.weight.shape}"
                )

    @property
    def shape(self) -> list[int]:
        return [self.layers[0].weight.shape[1]] + [l.weight.shape[0] for l in self.layers]


@dataclass
class TrainConfig:
    learning_rate: float = 0.01
    momentum: float = 0.9
    weight_decay: float = 0.0
    epochs: int = 30
    batch_size: int = 32
    seed: int = 0

    def __post_init__(self):
        if not self.learning_rate > 0:
            raise ValueError(f"learning_rate must be positive, got {self.learning_rate}")
        if not 0.0 <= self.momentum < 1.0:
            raise ValueError(f"momentum must be in [0, 1), got {self.momentum}")
        if self.weight_decay < 0:
            raise ValueError(f"weight_decay must be >= 0, got {self.weight_decay}")
        if self.epochs < 1 or self.batch_size < 1:
            raise ValueError("epochs and batch_size must be positive integers")


@dataclass
class TraceRow:
    epoch: int
    loss: float
    train_acc: float
    test_acc: float
    dead_fraction: float
    band_fraction: float


@dataclass
class TrainingTrace:
    rows: list[TraceRow]

    FIELDS = ("epoch", "loss", "train_acc", "test_acc", "dead_fraction", "band_fraction")


def init(model_shape, seed: int, activation: activations.ActivationSpec) -> MlpModel:
    """Build an MLP with Xavier-uniform weights and zero biases.

    model_shape lists all dims, input through output, e.g. [2, 32, 32, 3].
    """
    dims = list(model_shape)
    if len(dims) < 3:
        raise ValueError(f"model_shape needs [in, hidden..., out], got {dims}")
    rng = np.random.default_rng(seed)
    layers = []
    for fan_in, fan_out in zip(dims, dims[1:]):
        limit = np.sqrt(6.0 / (fan_in + fan_out))
        weight = rng.uniform(-limit, limit, size=(fan_out, fan_in))
        layers.append(LinearLayer(weight, np.zeros(fan_out)))
    return MlpModel(layers, activation)


def model_forward(model: MlpModel, x: np.ndarray) -> tuple[np.ndarray, list[np.ndarray]]:
    """Forward pass without a tape; returns (logits, pre-activations per hidden layer).

    Uses the same primitives as the taped pass, so values are bitwise equal.
    """
    h = x
    pre_acts = []
    for layer in model.layers[:-1]:
        z = tensor.bias_add(tensor.matmul(h, layer.weight.T), layer.bias)
        pre_acts.append(z)
        h = activations.forward(model.activation, z)
    last = model.layers[-1]
    logits = tensor.bias_add(tensor.matmul(h, last.weight.T), last.bias)
    return logits, pre_acts


def build_graph(model: MlpModel, tape: autograd.Tape, x: np.ndarray, labels: np.ndarray):
    """Record the full forward graph; returns (loss_id, logits_id, pre_ids, param_ids)."""
    param_ids = [(tape.leaf(l.weight), tape.leaf(l.bias)) for l in model.layers]
    h = tape.leaf(x)
    pre_ids = []
    for (w_id, b_id), layer in zip(param_ids[:-1], model.layers[:-1]):
        z = autograd.linear(tape, h, w_id, b_id)
        pre_ids.append(z)
        h = autograd.apply_activation(tape, model.activation, z)
    w_id, b_id = param_ids[-1]
    logits_id = autograd.linear(tape, h, w_id, b_id)
    loss_id = autograd.softmax_cross_entropy(tape, logits_id, labels)
    return loss_id, logits_id, pre_ids, param_ids


def forward_loss(model: MlpModel, x: np.ndarray, labels: np.ndarray):
    """Loss, logits and per-layer pre-activations for one batch."""
    tape = autograd.Tape()
    loss_id, logits_id, pre_ids, _ = build_graph(model, tape, x, labels)
    return (
        float(tape.value(loss_id)),
        tape.value(logits_id),
        [tape.value(i) for i in pre_ids],
    )


def sgd_step(model: MlpModel, grads, config: TrainConfig) -> None:
    """Momentum SGD, in place: v <- m*v + g + wd*w ; w <- w - lr*v."""
    for layer, (dw, db) in zip(model.layers, grads):
        for param, vel, g in ((layer.weight, layer.weight_vel, dw), (layer.bias, layer.bias_vel, db)):
            vel *= config.momentum
            vel += g
            if config.weight_decay != 0.0:
                vel += config.weight_decay * param
            param -= config.learning_rate * vel


def train_step(model: MlpModel, x: np.ndarray, labels: np.ndarray, config: TrainConfig) -> float:
    """One forward/backward/update cycle; returns the batch loss."""
    tape = autograd.Tape()
    loss_id, _, _, param_ids = build_graph(model, tape, x, labels)
    grads_map = tape.backprop(loss_id)
    grads = [(grads_map[w_id], grads_map[b_id]) for w_id, b_id in param_ids]
    sgd_step(model, grads, config)
    return float(tape.value(loss_id))


def evaluate(model: MlpModel, dataset) -> float:
    """Argmax-of-logits accuracy; ties break toward the lower class index."""
    logits, _ = model_forward(model, dataset.features)
    pred = np.argmax(logits, axis=1)  # np.argmax returns the first maximum
    return float(np.mean(pred == dataset.labels))


def hysteresis_alpha(spec: activations.ActivationSpec) -> float:
    """Band half-width used for diagnostics: alpha for HELU, else 0."""
    return spec.alpha if spec.kind is activations.Kind.HELU else 0.0


def train(model: MlpModel, dataset, config: TrainConfig, eval_dataset=None) -> TrainingTrace:
    """Epoch loop with seeded shuffling.

    The shuffle order derives only from config.seed, so runs differing just
    in activation see identical batch sequences. Diagnostics (dead units,
    band occupancy) are computed per epoch on eval_dataset, falling back to
    the training set.
    """
    probe = eval_dataset if eval_dataset is not None else dataset
    rng = np.random.default_rng(config.seed)
    n = dataset.features.shape[0]
    alpha = hysteresis_alpha(model.activation)
    rows = []
    for epoch in range(config.epochs):
        order = rng.permutation(n)
        losses = []
        for start in range(0, n, config.batch_size):
            idx = order[start : start + config.batch_size]
            losses.append(train_step(model, dataset.features[idx], dataset.labels[idx], config))
        _, pre_acts = model_forward(model, probe.features)
        report = diagnostics.dead_fraction(pre_acts, model.activation, epoch=epoch)
        band = diagnostics.grad_mask_occupancy(np.concatenate([z.ravel() for z in pre_acts]), alpha)[1]
        rows.append(
            TraceRow(
                epoch=epoch,
                loss=float(np.mean(losses)),
                train_acc=evaluate(model, dataset),
                test_acc=evaluate(model, probe),
                dead_fraction=report.total_dead_fraction,
                band_fraction=band,
            )
        )
    return TrainingTrace(rows)


# ---------------------------------------------------------------------------
# Checkpoints: magic "HELU1", then per tensor a little-endian u32 rank,
# u32 dims, and the raw little-endian float64 payload. Tensors appear as
# layer0.weight, layer0.bias, layer1.weight, ...
# ---------------------------------------------------------------------------


def checkpoint_bytes(model: MlpModel) -> bytes:
    parts = [CHECKPOINT_MAGIC]
    for layer in model.layers:
        for t in (layer.weight, layer.bias):
            parts.append(struct.pack("<I", t.ndim))
            parts.append(struct.pack(f"<{t.ndim}I", *t.shape))
            parts.append(np.ascontiguousarray(t, dtype="<f8").tobytes())
    return b"".join(parts)


def save_checkpoint(path, model: MlpModel) -> None:
    with open(path, "wb") as fh:
        fh.write(checkpoint_bytes(model))


def load_checkpoint(path, activation: activations.ActivationSpec) -> MlpModel:
    """Rebuild a model from a checkpoint; layer dims come from tensor shapes."""
    with open(path, "rb") as fh:
        blob = fh.read()
    if blob[: len(CHECKPOINT_MAGIC)] != CHECKPOINT_MAGIC:
        raise ParseError(
            f"bad checkpoint magic at byte 0: {blob[:len(CHECKPOINT_MAGIC)]!r}"
        )
    offset = len(CHECKPOINT_MAGIC)
    tensors = []
    while offset < len(blob):
        try:
            (rank,) = struct.unpack_from("<I", blob, offset)
            offset += 4
            dims = struct.unpack_from(f"<{rank}I", blob, offset)
            offset += 4 * rank
        except struct.error as exc:
            raise ParseError(f"truncated checkpoint at byte {offset}: {exc}") from None
        count = int(np.prod(dims, dtype=np.int64)) if rank else 1
        if len(blob) - offset < 8 * count:
            raise ParseError(
                f"truncated checkpoint at byte {offset}: tensor needs {8 * count} bytes, "
                f"{len(blob) - offset} remain"
            )
        data = np.frombuffer(blob, dtype="<f8", count=count, offset=offset)
        offset += 8 * count
        tensors.append(data.reshape(dims).astype(np.float64))
    if len(tensors) % 2 != 0 or not tensors:
        raise ParseError(f"checkpoint holds {len(tensors)} tensors, expected weight/bias pairs")
    layers = [LinearLayer(w.copy(), b.copy()) for w, b in zip(tensors[::2], tensors[1::2])]
    return MlpModel(layers, activation)
