"""Depolarization noise, training-pair streams, and input-normalization statistics."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .codes import StabilizerCode, syndrome_batch
from .gf2 import BitVec


@dataclass(frozen=True)
class DepolarizationModel:
    """Single-qubit depolarization: no error with probability `fidelity`,
    otherwise X, Y, or Z each with probability (1 - fidelity)/3."""

    fidelity: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.fidelity <= 1.0:
            raise ValueError(f"fidelity must be in [0, 1], got {self.fidelity}")

    @property
    def depolarization_rate(self) -> float:
        return 1.0 - self.fidelity

    @property
    def pauli_probs(self) -> tuple[float, float, float, float]:
        t = (1.0 - self.fidelity) / 3.0
        return (self.fidelity, t, t, t)


@dataclass(frozen=True)
class NoiseStats:
    """Per-bit syndrome statistics used to normalize network inputs.

    q is the independent flip rate of a single eigenvalue, mean/variance the
    resulting Bernoulli statistics of one syndrome bit.
    """

    q: float
    mean: float
    variance: float


def flip_rate(fidelity: float) -> float:
    """Rate at which one eigenvalue flips under depolarization: (2/3)(1 - p)."""
    if not 0.0 <= fidelity <= 1.0:
        raise ValueError(f"fidelity must be in [0, 1], got {fidelity}")
    return (2.0 / 3.0) * (1.0 - fidelity)


def syndrome_stats(q: float) -> NoiseStats:
    """Analytic odd-parity statistics of a weight-4 generator at flip rate q."""
    if not 0.0 <= q <= 1.0:
        raise ValueError(f"flip rate must be in [0, 1], got {q}")
    mean = 4.0 * q**3 * (1.0 - q) + 4.0 * q * (1.0 - q) ** 3
    return NoiseStats(q=q, mean=mean, variance=mean - mean**2)


def sample_error_bits(
    model: DepolarizationModel, n_qubits: int, n_samples: int, rng: np.random.Generator
) -> np.ndarray:
    """Dense batch of error vectors, shape (n_samples, 2N), x-part then z-part."""
    if n_qubits < 1:
        raise ValueError("n_qubits must be at least 1")
    p = model.fidelity
    t = (1.0 - p) / 3.0
    r = rng.random((n_samples, n_qubits))
    out = np.zeros((n_samples, 2 * n_qubits), dtype=np.uint8)
    out[:, :n_qubits] = (r >= p) & (r < p + 2.0 * t)  # X or Y
    out[:, n_qubits:] = r >= p + t  # Y or Z
    return out


def sample_error(model: DepolarizationModel, n_qubits: int, rng: np.random.Generator) -> BitVec:
    """One depolarization error as a 2N-bit vector."""
    return BitVec.from_bits(sample_error_bits(model, n_qubits, 1, rng)[0])


def empirical_syndrome_stats(
    code: StabilizerCode,
    model: DepolarizationModel,
    rng: np.random.Generator,
    n_samples: int = 100_000,
) -> NoiseStats:
    """Estimate per-bit syndrome statistics from a warm-up sample stream."""
    total = 0.0
    count = 0
    chunk = 8192
    remaining = n_samples
    while remaining > 0:
        b = min(chunk, remaining)
        errors = sample_error_bits(model, code.n_qubits, b, rng)
        s = syndrome_batch(code, errors)
        total += float(s.sum())
        count += s.size
        remaining -= b
    mean = total / count
    return NoiseStats(q=flip_rate(model.fidelity), mean=mean, variance=mean - mean**2)


def stats_for_code(
    code: StabilizerCode,
    model: DepolarizationModel,
    rng: np.random.Generator | None = None,
) -> NoiseStats:
    """Normalization statistics for a code under depolarization.

    The closed form holds only for weight-4 pure-CSS generators (each syndrome
    bit is the parity of 4 independent flips); anything else is estimated
    empirically, which requires an rng.
    """
    weights = code.check_matrix.bits.sum(axis=1)
    if code.css_split is not None and np.all(weights == 4):
        return syndrome_stats(flip_rate(model.fidelity))
    if rng is None:
        raise ValueError("non weight-4 CSS generators need empirical statistics; pass an rng")
    return empirical_syndrome_stats(code, model, rng)


def normalize_syndrome(s: BitVec | np.ndarray, stats: NoiseStats) -> np.ndarray:
    """Map syndrome bits to zero-mean, unit-variance inputs: (s - mean)/sqrt(var)."""
    if stats.variance <= 0.0:
        raise ValueError("degenerate syndrome rate: variance must be positive")
    bits = s.bits if isinstance(s, BitVec) else np.asarray(s)
    scale = 1.0 / math.sqrt(stats.variance)
    return ((bits.astype(np.float32) - np.float32(stats.mean)) * np.float32(scale)).astype(
        np.float32
    )


def training_stream(
    code: StabilizerCode,
    model: DepolarizationModel,
    batch_size: int,
    rng: np.random.Generator,
    mode: str = "joint",
    stats: NoiseStats | None = None,
) -> Iterator[tuple[np.ndarray, np.ndarray]]:
    """Unbounded stream of (normalized syndrome, error-bit target) batches.

    Joint mode pairs the full syndrome with all 2N error bits; z_only mode
    pairs the plaquette block with the N x-part bits. Deterministic given the
    rng seed.
    """
    if batch_size < 1:
        raise ValueError("batch_size must be at least 1")
    if mode not in ("joint", "z_only"):
        raise ValueError(f"unknown stream mode {mode!r}")
    if stats is None:
        stats = stats_for_code(code, model, rng)
    if stats.variance <= 0.0:
        raise ValueError("degenerate syndrome rate: cannot stream at variance 0")
    n = code.n_qubits
    z_rows: np.ndarray | None = None
    if mode == "z_only":
        if code.css_split is None:
            raise ValueError("z_only mode requires a CSS code")
        z_rows = np.asarray(code.css_split.z_rows, dtype=np.intp)
    while True:
        errors = sample_error_bits(model, n, batch_size, rng)
        syn = syndrome_batch(code, errors)
        if mode == "joint":
            yield normalize_syndrome(syn, stats), errors.astype(np.float32)
        else:
            assert z_rows is not None
            yield (
                normalize_syndrome(syn[:, z_rows], stats),
                errors[:, :n].astype(np.float32),
            )
