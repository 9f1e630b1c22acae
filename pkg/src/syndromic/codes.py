"""Stabilizer codes: toric construction, syndromes, logical classes, file I/O.

Convention used throughout: a Pauli on N qubits is a 2N bit vector laid out as
(x-part || z-part). Check matrix rows are stabilizer generators in the same
layout. A syndrome bit is the symplectic product of a generator with the error,
so a pure-Z generator reads the x-part of the error and vice versa.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Sequence

import numpy as np

from .gf2 import BitMatrix, BitVec, gf2_matvec, gf2_matvec_bits, gf2_rank, symplectic_product


class CodeParseError(ValueError):
    """Raised when a code file cannot be parsed."""


class CodeValidationError(ValueError):
    """Raised when parsed code data violates a stabilizer-code invariant."""


@dataclass(frozen=True)
class CssSplit:
    """Row indices of pure-Z generators (plaquettes) and pure-X generators (stars)."""

    z_rows: tuple[int, ...]
    x_rows: tuple[int, ...]


@dataclass(frozen=True)
class LogicalClass:
    """Symplectic products of a residual error with the ordered logical operators."""

    class_bits: tuple[int, ...]

    @property
    def is_trivial(self) -> bool:
        return not any(self.class_bits)


@dataclass(frozen=True, eq=False)
class StabilizerCode:
    """A stabilizer code given by its generators and logical representatives.

    `logicals` holds 2k vectors in the order X1, Z1, X2, Z2, ...; the pair
    (Xi, Zi) anticommutes while everything else commutes. `lattice_size` is
    populated by build_toric and is None for codes loaded from files.
    """

    n_qubits: int
    k: int
    check_matrix: BitMatrix
    logicals: tuple[BitVec, ...]
    lattice_size: int | None = None

    def __post_init__(self) -> None:
        if self.check_matrix.cols != 2 * self.n_qubits:
            raise ValueError("check matrix width must be 2 * n_qubits")
        if len(self.logicals) != 2 * self.k:
            raise ValueError("expected 2k logical operators")
        if any(l.length != 2 * self.n_qubits for l in self.logicals):
            raise ValueError("logical operator width must be 2 * n_qubits")

    @property
    def n_checks(self) -> int:
        return self.check_matrix.rows

    @cached_property
    def css_split(self) -> CssSplit | None:
        """Derived partition into pure-Z and pure-X generators; None if mixed rows exist."""
        n = self.n_qubits
        bits = self.check_matrix.bits
        x_support = bits[:, :n].any(axis=1)
        z_support = bits[:, n:].any(axis=1)
        z_rows = tuple(int(i) for i in np.nonzero(z_support & ~x_support)[0])
        x_rows = tuple(int(i) for i in np.nonzero(x_support & ~z_support)[0])
        if len(z_rows) + len(x_rows) != self.n_checks:
            return None
        return CssSplit(z_rows=z_rows, x_rows=x_rows)

    @cached_property
    def syndrome_map(self) -> BitMatrix:
        """Check matrix with halves swapped, so a plain GF(2) matvec yields the syndrome."""
        n = self.n_qubits
        bits = self.check_matrix.bits
        return BitMatrix.from_bits(np.concatenate([bits[:, n:], bits[:, :n]], axis=1))

    @cached_property
    def syndrome_map_int(self) -> np.ndarray:
        """Dense int32 copy of syndrome_map for small per-iteration products."""
        return np.ascontiguousarray(self.syndrome_map.bits, dtype=np.int32)

    @cached_property
    def resample_masks(self) -> np.ndarray:
        """Per-generator bool masks over error-bit coordinates the generator reads.

        Pure-Z rows touch the x-bits of their support, pure-X rows the z-bits;
        mixed rows touch both bits of every support qubit.
        """
        n = self.n_qubits
        bits = self.check_matrix.bits
        masks = np.zeros((self.n_checks, 2 * n), dtype=bool)
        for i in range(self.n_checks):
            x_sup = bits[i, :n].astype(bool)
            z_sup = bits[i, n:].astype(bool)
            if z_sup.any() and not x_sup.any():
                masks[i, :n] = z_sup
            elif x_sup.any() and not z_sup.any():
                masks[i, n:] = x_sup
            else:
                qubits = x_sup | z_sup
                masks[i, :n] = qubits
                masks[i, n:] = qubits
        masks.setflags(write=False)
        return masks

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, StabilizerCode):
            return NotImplemented
        return (
            self.n_qubits == other.n_qubits
            and self.k == other.k
            and self.check_matrix == other.check_matrix
            and self.logicals == tuple(other.logicals)
        )

    __hash__ = object.__hash__

    def __repr__(self) -> str:
        return f"StabilizerCode(n={self.n_qubits}, k={self.k}, checks={self.n_checks})"


def _toric_h_edge(L: int, row: int, col: int) -> int:
    return 2 * (L * (row % L) + (col % L))


def _toric_v_edge(L: int, row: int, col: int) -> int:
    return 2 * (L * (row % L) + (col % L)) + 1


def build_toric(L: int) -> StabilizerCode:
    """Toric code on the edges of an L x L torus.

    Qubit ids: 2*(L*row + col) + d with d=0 the horizontal (eastward) and d=1
    the vertical (southward) edge of vertex (row, col). Plaquette generators
    are Z on the 4 boundary edges of each face, star generators X on the 4
    edges incident to each vertex; plaquette rows come first. k = 2, with
    logicals the four winding loops.
    """
    if L < 2:
        raise ValueError("toric lattice size must be at least 2")
    n = 2 * L * L
    n_faces = L * L
    check_bits = np.zeros((2 * n_faces, 2 * n), dtype=np.uint8)
    for row in range(L):
        for col in range(L):
            face = L * row + col
            # Plaquette (top-left vertex (row, col)): Z on top/bottom/left/right edges.
            for edge in (
                _toric_h_edge(L, row, col),
                _toric_h_edge(L, row + 1, col),
                _toric_v_edge(L, row, col),
                _toric_v_edge(L, row, col + 1),
            ):
                check_bits[face, n + edge] = 1
            # Star at vertex (row, col): X on the 4 incident edges.
            for edge in (
                _toric_h_edge(L, row, col),
                _toric_h_edge(L, row, col - 1),
                _toric_v_edge(L, row, col),
                _toric_v_edge(L, row - 1, col),
            ):
                check_bits[n_faces + face, edge] = 1

    def loop(edges: Sequence[int], z_type: bool) -> BitVec:
        bits = np.zeros(2 * n, dtype=np.uint8)
        for e in edges:
            bits[n + e if z_type else e] = 1
        return BitVec.from_bits(bits)

    logical_x1 = loop([_toric_h_edge(L, r, 0) for r in range(L)], z_type=False)
    logical_z1 = loop([_toric_h_edge(L, 0, c) for c in range(L)], z_type=True)
    logical_x2 = loop([_toric_v_edge(L, 0, c) for c in range(L)], z_type=False)
    logical_z2 = loop([_toric_v_edge(L, r, 0) for r in range(L)], z_type=True)

    return StabilizerCode(
        n_qubits=n,
        k=2,
        check_matrix=BitMatrix.from_bits(check_bits),
        logicals=(logical_x1, logical_z1, logical_x2, logical_z2),
        lattice_size=L,
    )


def syndrome(code: StabilizerCode, error: BitVec) -> BitVec:
    """Syndrome bits: symplectic product of each generator with the error."""
    if error.length != 2 * code.n_qubits:
        raise ValueError(
            f"error vector length {error.length} does not match 2*N = {2 * code.n_qubits}"
        )
    return gf2_matvec(code.syndrome_map, error)


def syndrome_batch(code: StabilizerCode, error_bits: np.ndarray) -> np.ndarray:
    """Syndromes for a dense batch of error rows, shape (..., 2N) -> (..., checks)."""
    return gf2_matvec_bits(code.syndrome_map, error_bits)


def logical_class(code: StabilizerCode, residual: BitVec) -> LogicalClass:
    """Class of a residual error relative to the logical operators.

    Requires a residual with zero syndrome; an all-zero class means the
    residual is a product of stabilizers, i.e. decoding succeeded.
    """
    if not syndrome(code, residual).is_zero():
        raise ValueError("logical_class requires a residual with zero syndrome")
    return LogicalClass(tuple(symplectic_product(l, residual) for l in code.logicals))


def validate_code(code: StabilizerCode) -> None:
    """Check all stabilizer-code invariants, raising CodeValidationError on failure."""
    n = code.n_qubits
    bits = code.check_matrix.bits.astype(np.int32)
    hx, hz = bits[:, :n], bits[:, n:]
    comm = (hx @ hz.T + hz @ hx.T) & 1
    if comm.any():
        bad = np.argwhere(comm)[0]
        raise CodeValidationError(f"generators {bad[0]} and {bad[1]} anticommute")
    if code.k:
        lbits = np.stack([l.bits for l in code.logicals]).astype(np.int32)
        lx, lz = lbits[:, :n], lbits[:, n:]
        with_checks = (hx @ lz.T + hz @ lx.T) & 1
        if with_checks.any():
            bad = np.argwhere(with_checks)[0]
            raise CodeValidationError(f"logical {bad[1]} anticommutes with generator {bad[0]}")
        pairing = (lx @ lz.T + lz @ lx.T) & 1
        expected = np.zeros_like(pairing)
        for i in range(code.k):
            expected[2 * i, 2 * i + 1] = expected[2 * i + 1, 2 * i] = 1
        if not np.array_equal(pairing, expected):
            raise CodeValidationError("logical operators do not form anticommuting X/Z pairs")
    rank = gf2_rank(code.check_matrix)
    if rank != n - code.k:
        raise CodeValidationError(f"check matrix rank {rank} != N - k = {n - code.k}")


_HEADER = "stabilizer-code v1"
_DIMS_RE = re.compile(r"^n=(\d+)\s+k=(\d+)$")


def save_code(code: StabilizerCode, path: str | Path) -> None:
    """Write the portable text format (see load_code)."""
    lines = [_HEADER, f"n={code.n_qubits} k={code.k}"]
    for i in range(code.n_checks):
        lines.append("".join(map(str, code.check_matrix.bits[i])))
    lines.append("")
    for l in code.logicals:
        lines.append("".join(map(str, l.bits)))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_code(path: str | Path) -> StabilizerCode:
    """Load and validate a code file.

    Format: line 1 `stabilizer-code v1`; line 2 `n=<N> k=<k>`; one generator
    per line as a 2N-character 0/1 string (x-part then z-part); a blank line;
    then 2k logical lines ordered X1, Z1, ... Lines starting with `#` are
    ignored. Parse problems raise CodeParseError, invariant violations
    CodeValidationError.
    """
    raw = Path(path).read_text(encoding="utf-8").splitlines()
    lines = [ln.rstrip() for ln in raw if not ln.lstrip().startswith("#")]
    if not lines or lines[0].strip() != _HEADER:
        raise CodeParseError(f"missing '{_HEADER}' header line")
    if len(lines) < 2:
        raise CodeParseError("missing dimension line 'n=<N> k=<k>'")
    m = _DIMS_RE.match(lines[1].strip())
    if not m:
        raise CodeParseError(f"malformed dimension line: {lines[1]!r}")
    n, k = int(m.group(1)), int(m.group(2))
    if n < 1:
        raise CodeParseError("n must be positive")

    def parse_row(line: str, what: str) -> np.ndarray:
        if len(line) != 2 * n or set(line) - {"0", "1"}:
            raise CodeParseError(f"{what} must be a {2 * n}-character 0/1 string, got {line!r}")
        return np.frombuffer(line.encode("ascii"), dtype=np.uint8) - ord("0")

    idx = 2
    generators: list[np.ndarray] = []
    while idx < len(lines) and lines[idx].strip() != "":
        generators.append(parse_row(lines[idx].strip(), f"generator line {idx + 1}"))
        idx += 1
    if not generators:
        raise CodeParseError("no generator rows found")
    if idx == len(lines) and k > 0:
        raise CodeParseError("missing blank separator line before logicals")
    idx += 1  # skip the blank separator
    logicals: list[np.ndarray] = []
    while idx < len(lines) and lines[idx].strip() != "":
        logicals.append(parse_row(lines[idx].strip(), f"logical line {idx + 1}"))
        idx += 1
    if any(ln.strip() for ln in lines[idx:]):
        raise CodeParseError("unexpected trailing content after logical lines")
    if len(logicals) != 2 * k:
        raise CodeParseError(f"expected {2 * k} logical lines, found {len(logicals)}")

    code = StabilizerCode(
        n_qubits=n,
        k=k,
        check_matrix=BitMatrix.from_bits(np.stack(generators)),
        logicals=tuple(BitVec.from_bits(l) for l in logicals),
    )
    validate_code(code)
    return code
