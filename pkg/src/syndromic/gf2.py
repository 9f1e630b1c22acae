"""Bit-packed linear algebra over GF(2)."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

WORD_BITS = 64


def _word_count(length: int) -> int:
    return (length + WORD_BITS - 1) // WORD_BITS


def _pack_bits(bits: np.ndarray) -> np.ndarray:
    """Pack a 0/1 array into little-endian uint64 words along the last axis."""
    bits = np.ascontiguousarray(bits, dtype=np.uint8) & 1
    n = bits.shape[-1]
    n_words = _word_count(n)
    packed = np.packbits(bits, axis=-1, bitorder="little")
    out = np.zeros(bits.shape[:-1] + (n_words * 8,), dtype=np.uint8)
    out[..., : packed.shape[-1]] = packed
    return out.view(np.uint64)


def _unpack_words(words: np.ndarray, length: int) -> np.ndarray:
    raw = np.unpackbits(np.ascontiguousarray(words).view(np.uint8), axis=-1, bitorder="little")
    return raw[..., :length]


def _masked_tail(words: np.ndarray, length: int) -> np.ndarray:
    """Return words with bits beyond `length` cleared in the final word."""
    tail = length % WORD_BITS
    if tail == 0 or words.shape[-1] == 0:
        return words
    mask = np.uint64((1 << tail) - 1)
    if np.all(words[..., -1] & ~mask == 0):
        return words
    fixed = words.copy()
    fixed[..., -1] &= mask
    return fixed


@dataclass(frozen=True, eq=False)
class BitVec:
    """Immutable bit vector packed into 64-bit words (LSB-first within a word)."""

    length: int
    words: np.ndarray

    def __post_init__(self) -> None:
        if self.length < 0:
            raise ValueError("length must be non-negative")
        words = np.ascontiguousarray(self.words, dtype=np.uint64)
        if words.shape != (_word_count(self.length),):
            raise ValueError(
                f"expected {_word_count(self.length)} words for {self.length} bits, "
                f"got shape {words.shape}"
            )
        words = _masked_tail(words, self.length)
        if words is self.words or words.base is not None:
            words = words.copy()
        words.setflags(write=False)
        object.__setattr__(self, "words", words)

    @classmethod
    def zeros(cls, length: int) -> "BitVec":
        return cls(length, np.zeros(_word_count(length), dtype=np.uint64))

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> "BitVec":
        arr = np.asarray(list(bits) if not isinstance(bits, np.ndarray) else bits, dtype=np.uint8)
        if arr.ndim != 1:
            raise ValueError("expected a 1-D bit array")
        return cls(arr.size, _pack_bits(arr))

    @cached_property
    def bits(self) -> np.ndarray:
        out = _unpack_words(self.words, self.length)
        out.setflags(write=False)
        return out

    def weight(self) -> int:
        return int(np.bitwise_count(self.words).sum(dtype=np.int64))

    def bit(self, i: int) -> int:
        if not 0 <= i < self.length:
            raise IndexError(f"bit index {i} out of range for length {self.length}")
        return int((self.words[i // WORD_BITS] >> np.uint64(i % WORD_BITS)) & np.uint64(1))

    def support(self) -> np.ndarray:
        return np.nonzero(self.bits)[0]

    def is_zero(self) -> bool:
        return not self.words.any()

    def dot(self, other: "BitVec") -> int:
        """Parity of the AND of two vectors (the GF(2) inner product)."""
        if self.length != other.length:
            raise ValueError("length mismatch in GF(2) dot product")
        return int(np.bitwise_count(self.words & other.words).sum(dtype=np.int64)) & 1

    def __xor__(self, other: "BitVec") -> "BitVec":
        if self.length != other.length:
            raise ValueError("length mismatch in XOR")
        return BitVec(self.length, self.words ^ other.words)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitVec):
            return NotImplemented
        return self.length == other.length and np.array_equal(self.words, other.words)

    __hash__ = None  # type: ignore[assignment]

    def __len__(self) -> int:
        return self.length

    def __repr__(self) -> str:
        if self.length <= 64:
            return f"BitVec({''.join(map(str, self.bits))})"
        return f"BitVec(length={self.length}, weight={self.weight()})"


@dataclass(frozen=True, eq=False)
class BitMatrix:
    """Row-major matrix of packed bit rows; every row has `cols` bits."""

    rows: int
    cols: int
    words: np.ndarray

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise ValueError("rows and cols must be non-negative")
        words = np.ascontiguousarray(self.words, dtype=np.uint64)
        if words.shape != (self.rows, _word_count(self.cols)):
            raise ValueError(
                f"expected word shape {(self.rows, _word_count(self.cols))}, got {words.shape}"
            )
        words = _masked_tail(words, self.cols)
        if words is self.words or words.base is not None:
            words = words.copy()
        words.setflags(write=False)
        object.__setattr__(self, "words", words)

    @classmethod
    def from_bits(cls, bits: np.ndarray) -> "BitMatrix":
        arr = np.asarray(bits, dtype=np.uint8)
        if arr.ndim != 2:
            raise ValueError("expected a 2-D bit array")
        return cls(arr.shape[0], arr.shape[1], _pack_bits(arr))

    @classmethod
    def from_rows(cls, rows: Sequence[BitVec]) -> "BitMatrix":
        if not rows:
            raise ValueError("cannot build a matrix from zero rows")
        cols = rows[0].length
        if any(r.length != cols for r in rows):
            raise ValueError("all rows must share the same length")
        return cls(len(rows), cols, np.stack([r.words for r in rows]))

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls.from_bits(np.eye(n, dtype=np.uint8))

    def row(self, i: int) -> BitVec:
        if not 0 <= i < self.rows:
            raise IndexError(f"row {i} out of range")
        return BitVec(self.cols, self.words[i])

    @cached_property
    def bits(self) -> np.ndarray:
        out = _unpack_words(self.words, self.cols)
        out.setflags(write=False)
        return out

    @cached_property
    def bits_int_t(self) -> np.ndarray:
        """Transposed int32 copy of `bits`, for dense batch products."""
        return np.ascontiguousarray(self.bits.T, dtype=np.int32)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return (
            self.rows == other.rows
            and self.cols == other.cols
            and np.array_equal(self.words, other.words)
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"BitMatrix({self.rows}x{self.cols})"


def gf2_matvec(m: BitMatrix, v: BitVec) -> BitVec:
    """Product M·v over GF(2): result[i] is the parity of AND(row_i, v)."""
    if v.length != m.cols:
        raise ValueError(f"matvec dimension mismatch: matrix cols {m.cols}, vector {v.length}")
    if m.rows == 0:
        return BitVec.zeros(0)
    acc = np.bitwise_count(m.words & v.words).sum(axis=1, dtype=np.int64)
    return BitVec.from_bits((acc & 1).astype(np.uint8))


def gf2_matvec_bits(m: BitMatrix, bits: np.ndarray) -> np.ndarray:
    """Batch form of gf2_matvec on dense 0/1 arrays of shape (..., cols)."""
    arr = np.asarray(bits)
    if arr.shape[-1] != m.cols:
        raise ValueError(f"matvec dimension mismatch: matrix cols {m.cols}, batch {arr.shape}")
    prod = arr.astype(np.int32) @ m.bits_int_t
    return (prod & 1).astype(np.uint8)


def symplectic_product(a: BitVec, b: BitVec) -> int:
    """Symplectic form on (x-part || z-part) vectors; 0 means the Paulis commute."""
    if a.length != b.length:
        raise ValueError("symplectic product requires equal lengths")
    if a.length % 2 != 0:
        raise ValueError("symplectic product requires even length (x-part || z-part)")
    n = a.length // 2
    ab, bb = a.bits, b.bits
    cross = int(np.count_nonzero(ab[:n] & bb[n:])) + int(np.count_nonzero(ab[n:] & bb[:n]))
    return cross & 1


def gf2_rank(m: BitMatrix) -> int:
    """Rank over GF(2) via row elimination on the packed words."""
    if m.rows == 0 or m.cols == 0:
        return 0
    work = m.words.copy()
    rank = 0
    for col in range(m.cols):
        w, b = divmod(col, WORD_BITS)
        col_bits = (work[rank:, w] >> np.uint64(b)) & np.uint64(1)
        hits = np.nonzero(col_bits)[0]
        if hits.size == 0:
            continue
        pivot = rank + int(hits[0])
        if pivot != rank:
            work[[rank, pivot]] = work[[pivot, rank]]
        below = (work[rank + 1 :, w] >> np.uint64(b)) & np.uint64(1)
        sel = np.nonzero(below)[0]
        if sel.size:
            work[rank + 1 + sel] ^= work[rank]
        rank += 1
        if rank == m.rows:
            break
    return rank


def gf2_solve(matrix_bits: np.ndarray, rhs_bits: np.ndarray) -> np.ndarray | None:
    """One solution x of A·x = b over GF(2) on dense arrays, or None if inconsistent."""
    a = np.asarray(matrix_bits, dtype=np.uint8) & 1
    b = np.asarray(rhs_bits, dtype=np.uint8) & 1
    if a.ndim != 2 or b.shape != (a.shape[0],):
        raise ValueError("expected A of shape (m, n) and b of shape (m,)")
    m, n = a.shape
    aug = np.concatenate([a, b[:, None]], axis=1)
    pivots: list[int] = []
    row = 0
    for col in range(n):
        hits = np.nonzero(aug[row:, col])[0]
        if hits.size == 0:
            continue
        pivot = row + int(hits[0])
        if pivot != row:
            aug[[row, pivot]] = aug[[pivot, row]]
        others = np.nonzero(aug[:, col])[0]
        others = others[others != row]
        if others.size:
            aug[others] ^= aug[row]
        pivots.append(col)
        row += 1
        if row == m:
            break
    if np.any(aug[row:, n]):
        return None
    x = np.zeros(n, dtype=np.uint8)
    for r, col in enumerate(pivots):
        x[col] = aug[r, n]
    return x
