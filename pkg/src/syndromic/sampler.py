"""Decoding by sampling network marginals with hard-decision resampling.

The network output is read as independent per-bit error probabilities. A
candidate error is drawn, its syndrome compared to the measured one, and on
mismatch either the whole vector is redrawn (naive mode) or only the bits read
by the violated generators (message-passing mode), always from the original
marginals, until the syndromes agree or the iteration budget runs out.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .codes import StabilizerCode
from .gf2 import BitVec
from .mlp import MlpDecoderNet, forward
from .noise import normalize_syndrome

SUCCESS = "success"
GIVE_UP = "give_up"
NAIVE = "naive"
MESSAGE_PASSING = "message_passing"
_MODES = (NAIVE, MESSAGE_PASSING)


@dataclass(frozen=True)
class DecodeOutcome:
    """Result of one decode: on success the predicted error reproduces the
    input syndrome exactly; on give-up the iteration budget was exhausted."""

    status: str
    predicted_error: BitVec | None
    iterations_used: int
    sampling_mode: str

    @property
    def succeeded(self) -> bool:
        return self.status == SUCCESS


def sample_candidate(marginals: np.ndarray, rng: np.random.Generator) -> BitVec:
    """Draw each bit independently as Bernoulli(marginals[i])."""
    m = np.asarray(marginals, dtype=np.float64)
    return BitVec.from_bits((rng.random(m.size) < m).astype(np.uint8))


def _resample_loop(
    marginals: np.ndarray,
    syndrome_map_int: np.ndarray,
    masks: np.ndarray,
    target: np.ndarray,
    max_iter: int,
    sampling_mode: str,
    rng: np.random.Generator,
) -> tuple[np.ndarray | None, int]:
    n_bits = marginals.size
    e = rng.random(n_bits) < marginals
    for it in range(1, max_iter + 1):
        syn = (syndrome_map_int @ e) & 1
        mismatch = np.nonzero(syn != target)[0]
        if mismatch.size == 0:
            return e, it
        if it == max_iter:
            break
        if sampling_mode == NAIVE:
            e = rng.random(n_bits) < marginals
        else:
            coords = np.nonzero(masks[mismatch].any(axis=0))[0]
            e = e.copy()
            e[coords] = rng.random(coords.size) < marginals[coords]
    return None, max_iter


def decode(
    net: MlpDecoderNet,
    code: StabilizerCode,
    s: BitVec,
    max_iter: int = 1000,
    sampling_mode: str = MESSAGE_PASSING,
    rng: np.random.Generator | None = None,
) -> DecodeOutcome:
    """Decode a full syndrome with a joint-mode network."""
    if rng is None:
        rng = np.random.default_rng()
    if sampling_mode not in _MODES:
        raise ValueError(f"unknown sampling mode {sampling_mode!r}")
    if max_iter < 1:
        raise ValueError("max_iter must be at least 1")
    if net.mode != "joint":
        raise ValueError("decode requires a joint-mode network")
    if net.input_width != code.n_checks or net.output_width != 2 * code.n_qubits:
        raise ValueError(
            f"network {net.input_width}->{net.output_width} does not fit a code with "
            f"{code.n_checks} checks on {code.n_qubits} qubits"
        )
    if s.length != code.n_checks:
        raise ValueError(f"syndrome length {s.length} != generator count {code.n_checks}")
    marginals = np.asarray(forward(net, normalize_syndrome(s, net.stats)), dtype=np.float64)
    e, iters = _resample_loop(
        marginals,
        code.syndrome_map_int,
        code.resample_masks,
        s.bits.astype(np.int32),
        max_iter,
        sampling_mode,
        rng,
    )
    if e is None:
        return DecodeOutcome(GIVE_UP, None, iters, sampling_mode)
    return DecodeOutcome(SUCCESS, BitVec.from_bits(e.astype(np.uint8)), iters, sampling_mode)


def decode_z_only(
    net: MlpDecoderNet,
    code: StabilizerCode,
    plaquette_syndrome: BitVec,
    max_iter: int = 1000,
    sampling_mode: str = MESSAGE_PASSING,
    rng: np.random.Generator | None = None,
) -> DecodeOutcome:
    """Decode only the plaquette block, predicting x-part bits.

    The returned error has an all-zero z-part. Requires a CSS code and a
    network trained in z_only mode.
    """
    if rng is None:
        rng = np.random.default_rng()
    if sampling_mode not in _MODES:
        raise ValueError(f"unknown sampling mode {sampling_mode!r}")
    if max_iter < 1:
        raise ValueError("max_iter must be at least 1")
    if code.css_split is None:
        raise ValueError("z_only decoding requires a CSS code")
    if net.mode != "z_only":
        raise ValueError("decode_z_only requires a z_only-mode network")
    n = code.n_qubits
    n_plaq = len(code.css_split.z_rows)
    if net.input_width != n_plaq or net.output_width != n:
        raise ValueError(
            f"network {net.input_width}->{net.output_width} does not fit the plaquette "
            f"block ({n_plaq} checks, {n} x-bits)"
        )
    if plaquette_syndrome.length != n_plaq:
        raise ValueError(
            f"syndrome length {plaquette_syndrome.length} != plaquette count {n_plaq}"
        )
    marginals = np.asarray(
        forward(net, normalize_syndrome(plaquette_syndrome, net.stats)), dtype=np.float64
    )
    z_rows = np.asarray(code.css_split.z_rows, dtype=np.intp)
    sub_map = code.syndrome_map_int[z_rows][:, :n]
    sub_masks = code.resample_masks[z_rows][:, :n]
    e_x, iters = _resample_loop(
        marginals,
        sub_map,
        sub_masks,
        plaquette_syndrome.bits.astype(np.int32),
        max_iter,
        sampling_mode,
        rng,
    )
    if e_x is None:
        return DecodeOutcome(GIVE_UP, None, iters, sampling_mode)
    full = np.zeros(2 * n, dtype=np.uint8)
    full[:n] = e_x
    return DecodeOutcome(SUCCESS, BitVec.from_bits(full), iters, sampling_mode)
