"""From-scratch multilayer perceptron: tanh hidden layers, sigmoid output,
binary crossentropy, annealed SGD, and binary model persistence."""

from __future__ import annotations

import struct
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterator

import numpy as np

from .noise import NoiseStats, flip_rate

OUTPUT_CLAMP = 1e-7

_MAGIC = b"NNDEC1\x00"
_VERSION = 1
_MODES = {"joint": 0, "z_only": 1}
_MODE_NAMES = {v: k for k, v in _MODES.items()}


class ModelFormatError(ValueError):
    """Raised on bad magic, version, or truncated model files."""


class ModelValidationError(ValueError):
    """Raised when a parsed model is internally inconsistent."""


@dataclass
class MlpConfig:
    """Network and optimizer hyperparameters.

    hidden_width defaults to four times the input width. The learning rate is
    annealed stepwise: lr(step) = lr0 * lr_decay ** (step // lr_period).
    """

    input_width: int
    output_width: int
    hidden_layers: int = 4
    hidden_width: int | None = None
    lr0: float = 2e-3
    lr_decay: float = 0.5
    lr_period: int = 100_000
    batch_size: int = 512
    momentum: float = 0.0
    seed: int = 0

    def __post_init__(self) -> None:
        if self.input_width < 1 or self.output_width < 1:
            raise ValueError("layer widths must be at least 1")
        if self.hidden_layers < 0:
            raise ValueError("hidden_layers must be non-negative")
        if self.hidden_width is not None and self.hidden_width < 1:
            raise ValueError("hidden_width must be at least 1")
        if self.batch_size < 1:
            raise ValueError("batch_size must be at least 1")
        if self.lr_period < 1:
            raise ValueError("lr_period must be at least 1")
        if not 0.0 <= self.momentum < 1.0:
            raise ValueError("momentum must be in [0, 1)")

    @property
    def resolved_hidden_width(self) -> int:
        return self.hidden_width if self.hidden_width is not None else 4 * self.input_width

    def layer_dims(self) -> list[tuple[int, int]]:
        widths = (
            [self.input_width]
            + [self.resolved_hidden_width] * self.hidden_layers
            + [self.output_width]
        )
        return list(zip(widths[:-1], widths[1:]))


@dataclass(eq=False)
class MlpDecoderNet:
    """Dense net with (out, in) weight matrices; tanh hidden, sigmoid output.

    Carries the normalization statistics and training metadata it was built
    with so decoding needs nothing beyond the net and the code.
    """

    weights: list[np.ndarray]
    biases: list[np.ndarray]
    stats: NoiseStats
    fidelity: float
    mode: str = "joint"
    lattice_size: int = 0
    samples_seen: int = 0
    velocity: list[np.ndarray] | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        if len(self.weights) != len(self.biases) or not self.weights:
            raise ValueError("need one bias vector per weight matrix")
        for i, (w, b) in enumerate(zip(self.weights, self.biases)):
            if w.ndim != 2 or b.shape != (w.shape[0],):
                raise ValueError(f"layer {i}: weight/bias shape mismatch")
            if i > 0 and w.shape[1] != self.weights[i - 1].shape[0]:
                raise ValueError(f"layer {i}: input width breaks the dimension chain")
        if self.mode not in _MODES:
            raise ValueError(f"unknown mode {self.mode!r}")

    @property
    def input_width(self) -> int:
        return self.weights[0].shape[1]

    @property
    def output_width(self) -> int:
        return self.weights[-1].shape[0]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MlpDecoderNet):
            return NotImplemented
        return (
            len(self.weights) == len(other.weights)
            and all(np.array_equal(a, b) for a, b in zip(self.weights, other.weights))
            and all(np.array_equal(a, b) for a, b in zip(self.biases, other.biases))
            and self.stats == other.stats
            and self.fidelity == other.fidelity
            and self.mode == other.mode
            and self.lattice_size == other.lattice_size
            and self.samples_seen == other.samples_seen
        )

    __hash__ = object.__hash__


def init_net(
    config: MlpConfig,
    stats: NoiseStats,
    fidelity: float,
    mode: str = "joint",
    lattice_size: int = 0,
    dtype: np.dtype | type = np.float32,
) -> MlpDecoderNet:
    """Seeded initialization: uniform weights with variance 1/fan_in, zero biases."""
    rng = np.random.default_rng(config.seed)
    weights, biases = [], []
    for fan_in, fan_out in config.layer_dims():
        bound = np.sqrt(3.0 / fan_in)
        weights.append(rng.uniform(-bound, bound, size=(fan_out, fan_in)).astype(dtype))
        biases.append(np.zeros(fan_out, dtype=dtype))
    return MlpDecoderNet(
        weights=weights,
        biases=biases,
        stats=stats,
        fidelity=fidelity,
        mode=mode,
        lattice_size=lattice_size,
    )


def _sigmoid(z: np.ndarray) -> np.ndarray:
    # Split by sign to avoid overflow in exp.
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def _forward_activations(net: MlpDecoderNet, x: np.ndarray) -> list[np.ndarray]:
    """Activations per layer for a 2-D batch, input first, clamped output last."""
    acts = [x]
    a = x
    last = len(net.weights) - 1
    for i, (w, b) in enumerate(zip(net.weights, net.biases)):
        z = a @ w.T + b
        a = _sigmoid(z) if i == last else np.tanh(z)
        acts.append(a)
    acts[-1] = np.clip(acts[-1], OUTPUT_CLAMP, 1.0 - OUTPUT_CLAMP)
    return acts


def forward(net: MlpDecoderNet, x: np.ndarray) -> np.ndarray:
    """Per-bit error marginals for one input vector or a batch of rows."""
    arr = np.asarray(x, dtype=net.weights[0].dtype)
    single = arr.ndim == 1
    if single:
        arr = arr[None, :]
    if arr.shape[1] != net.input_width:
        raise ValueError(f"input width {arr.shape[1]} != network input {net.input_width}")
    out = _forward_activations(net, arr)[-1]
    return out[0] if single else out


def bce_loss(outputs: np.ndarray, targets: np.ndarray) -> float:
    """Mean binary crossentropy; outputs are clamped away from 0 and 1."""
    e = np.asarray(outputs, dtype=np.float64)
    t = np.asarray(targets, dtype=np.float64)
    if e.shape != t.shape:
        raise ValueError("outputs and targets must have the same shape")
    e = np.clip(e, OUTPUT_CLAMP, 1.0 - OUTPUT_CLAMP)
    return float(-(t * np.log(e) + (1.0 - t) * np.log1p(-e)).mean())


def gradients(
    net: MlpDecoderNet, x: np.ndarray, t: np.ndarray
) -> tuple[list[np.ndarray], list[np.ndarray], float]:
    """Backprop gradients of the mean BCE over a batch; returns (dW, db, loss)."""
    dtype = net.weights[0].dtype
    x2 = np.atleast_2d(np.asarray(x, dtype=dtype))
    t2 = np.atleast_2d(np.asarray(t, dtype=dtype))
    acts = _forward_activations(net, x2)
    loss = bce_loss(acts[-1], t2)
    # BCE + sigmoid cancel to (E - t); divide by element count to match the mean loss.
    delta = (acts[-1] - t2) * (1.0 / t2.size)
    grad_w: list[np.ndarray] = [None] * len(net.weights)  # type: ignore[list-item]
    grad_b: list[np.ndarray] = [None] * len(net.biases)  # type: ignore[list-item]
    for i in range(len(net.weights) - 1, -1, -1):
        grad_w[i] = delta.T @ acts[i]
        grad_b[i] = delta.sum(axis=0)
        if i > 0:
            delta = (delta @ net.weights[i]) * (1.0 - acts[i] ** 2)
    return grad_w, grad_b, loss


def train_step(
    net: MlpDecoderNet,
    x: np.ndarray,
    t: np.ndarray,
    lr: float,
    momentum: float = 0.0,
) -> float:
    """One SGD update in place; returns the batch loss before the update."""
    grad_w, grad_b, loss = gradients(net, x, t)
    if not np.isfinite(loss):
        raise RuntimeError(f"non-finite training loss ({loss}); aborting")
    if momentum > 0.0:
        if net.velocity is None:
            net.velocity = [np.zeros_like(g) for g in grad_w + grad_b]
        n = len(net.weights)
        for i in range(n):
            net.velocity[i] = momentum * net.velocity[i] - lr * grad_w[i]
            net.velocity[n + i] = momentum * net.velocity[n + i] - lr * grad_b[i]
            net.weights[i] += net.velocity[i]
            net.biases[i] += net.velocity[n + i]
    else:
        for i in range(len(net.weights)):
            net.weights[i] -= lr * grad_w[i]
            net.biases[i] -= lr * grad_b[i]
    return loss


def lr_schedule(step: int, lr0: float, decay: float, period: int) -> float:
    """Stepwise exponential annealing, monotone non-increasing in step."""
    if step < 0:
        raise ValueError("step must be non-negative")
    return lr0 * decay ** (step // period)


def train(
    net: MlpDecoderNet,
    stream: Iterator[tuple[np.ndarray, np.ndarray]],
    n_batches: int,
    config: MlpConfig,
    validation: tuple[np.ndarray, np.ndarray] | None = None,
    log_every: int = 0,
    log: Callable[[str], None] = print,
) -> list[tuple[int, float, float, float]]:
    """Run the annealed-SGD loop; mutates net, returns (step, lr, train, val) log rows."""
    history: list[tuple[int, float, float, float]] = []
    for step in range(n_batches):
        lr = lr_schedule(step, config.lr0, config.lr_decay, config.lr_period)
        x, t = next(stream)
        loss = train_step(net, x, t, lr, momentum=config.momentum)
        net.samples_seen += x.shape[0]
        if log_every and (step % log_every == 0 or step == n_batches - 1):
            val = float("nan")
            line = f"step={step} lr={lr:.6g} train_bce={loss:.6f}"
            if validation is not None:
                val = bce_loss(forward(net, validation[0]), validation[1])
                line += f" val_bce={val:.6f}"
            history.append((step, lr, loss, val))
            log(line)
    return history


def save_model(net: MlpDecoderNet, path: str | Path) -> None:
    """Binary little-endian model file; see load_model for the layout."""
    parts = [_MAGIC, struct.pack("<II", _VERSION, len(net.weights))]
    for w in net.weights:
        parts.append(struct.pack("<II", w.shape[1], w.shape[0]))
    for w, b in zip(net.weights, net.biases):
        parts.append(np.ascontiguousarray(w, dtype="<f4").tobytes())
        parts.append(np.ascontiguousarray(b, dtype="<f4").tobytes())
    parts.append(
        struct.pack(
            "<dddIQQ",
            net.stats.mean,
            net.stats.variance,
            net.fidelity,
            _MODES[net.mode],
            net.lattice_size,
            net.samples_seen,
        )
    )
    Path(path).write_bytes(b"".join(parts))


def load_model(path: str | Path) -> MlpDecoderNet:
    """Read a model file written by save_model.

    Layout: magic NNDEC1\\0, u32 version, u32 layer_count, per-layer u32
    (in, out), per-layer f32 row-major weights then f32 biases, f64 syndrome
    mean, f64 syndrome variance, f64 fidelity, u32 mode, u64 lattice size,
    u64 samples seen.
    """
    data = Path(path).read_bytes()
    off = 0

    def take(n: int) -> bytes:
        nonlocal off
        if off + n > len(data):
            raise ModelFormatError(f"truncated model file (needed {n} bytes at offset {off})")
        chunk = data[off : off + n]
        off += n
        return chunk

    if take(len(_MAGIC)) != _MAGIC:
        raise ModelFormatError("bad magic; not a decoder model file")
    version, layer_count = struct.unpack("<II", take(8))
    if version != _VERSION:
        raise ModelFormatError(f"unsupported model version {version}")
    if layer_count < 1:
        raise ModelValidationError("model must have at least one layer")
    dims = [struct.unpack("<II", take(8)) for _ in range(layer_count)]
    for i in range(1, layer_count):
        if dims[i][0] != dims[i - 1][1]:
            raise ModelValidationError(
                f"dimension chain broken at layer {i}: {dims[i - 1]} -> {dims[i]}"
            )
    weights, biases = [], []
    for n_in, n_out in dims:
        if n_in < 1 or n_out < 1:
            raise ModelValidationError("layer dimensions must be positive")
        w = np.frombuffer(take(4 * n_in * n_out), dtype="<f4").reshape(n_out, n_in).copy()
        b = np.frombuffer(take(4 * n_out), dtype="<f4").copy()
        weights.append(w)
        biases.append(b)
    mean, variance, fidelity, mode_id, lattice, seen = struct.unpack(
        "<dddIQQ", take(struct.calcsize("<dddIQQ"))
    )
    if off != len(data):
        raise ModelFormatError(f"{len(data) - off} trailing bytes after model payload")
    if mode_id not in _MODE_NAMES:
        raise ModelValidationError(f"unknown mode id {mode_id}")
    if not 0.0 <= fidelity <= 1.0:
        raise ModelValidationError(f"fidelity {fidelity} outside [0, 1]")
    return MlpDecoderNet(
        weights=weights,
        biases=biases,
        stats=NoiseStats(q=flip_rate(fidelity), mean=mean, variance=variance),
        fidelity=fidelity,
        mode=_MODE_NAMES[mode_id],
        lattice_size=int(lattice),
        samples_seen=int(seen),
    )
