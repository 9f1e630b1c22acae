"""Reference decoders: torus MWPM, brute-force minimum weight, and exact
maximum-likelihood decoding by coset enumeration (small codes only)."""

from __future__ import annotations

import logging
import weakref
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, islice

import numpy as np

from .codes import StabilizerCode, syndrome
from .gf2 import BitVec, gf2_solve, _pack_bits
from .noise import DepolarizationModel

logger = logging.getLogger(__name__)

EXACT_MATCHING_LIMIT = 16  # defects per sector; beyond this the pairing is greedy
ML_COSET_LIMIT = 20  # max N - k for exact coset enumeration


class SizeGuardExceeded(RuntimeError):
    """Raised when an oracle is asked for a problem beyond its feasible size."""


class MinWeightNotFound(LookupError):
    """Raised when no error within the weight cap reproduces the syndrome."""


@dataclass(frozen=True)
class DefectSet:
    """Violated-check coordinates of one sector on the L x L torus."""

    sector: str  # "plaquette" or "star"
    lattice_size: int
    coords: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        if self.sector not in ("plaquette", "star"):
            raise ValueError(f"unknown sector {self.sector!r}")
        if len(self.coords) % 2 != 0:
            raise ValueError(
                f"odd defect count {len(self.coords)} in {self.sector} sector: invalid syndrome"
            )


def torus_distance(a: tuple[int, int], b: tuple[int, int], L: int) -> int:
    """Manhattan distance with wraparound on the L x L torus."""
    dr = abs(a[0] - b[0])
    dc = abs(a[1] - b[1])
    return min(dr, L - dr) + min(dc, L - dc)


def defect_sets(code: StabilizerCode, s: BitVec) -> tuple[DefectSet, DefectSet]:
    """Split a toric syndrome into plaquette and star defect coordinates."""
    L = _require_toric(code)
    if s.length != code.n_checks:
        raise ValueError(f"syndrome length {s.length} != generator count {code.n_checks}")
    n_faces = L * L
    bits = s.bits
    plaq = tuple((int(i) // L, int(i) % L) for i in np.nonzero(bits[:n_faces])[0])
    star = tuple((int(i) // L, int(i) % L) for i in np.nonzero(bits[n_faces:])[0])
    return (
        DefectSet("plaquette", L, plaq),
        DefectSet("star", L, star),
    )


def _require_toric(code: StabilizerCode) -> int:
    if code.lattice_size is None:
        raise ValueError("this decoder requires a code produced by build_toric")
    return code.lattice_size


def _min_cost_pairing(coords: tuple[tuple[int, int], ...], L: int) -> list[tuple[int, int]]:
    """Min-total-distance perfect matching of defects.

    Exact bitmask search up to EXACT_MATCHING_LIMIT defects; greedy
    closest-pair above that, logged as inexact.
    """
    m = len(coords)
    if m == 0:
        return []
    dist = [[torus_distance(a, b, L) for b in coords] for a in coords]
    if m > EXACT_MATCHING_LIMIT:
        logger.warning("inexact matching: %d defects exceeds exact bound %d", m, EXACT_MATCHING_LIMIT)
        left = set(range(m))
        pairs = []
        while left:
            i, j = min(
                ((a, b) for a in left for b in left if a < b),
                key=lambda ab: dist[ab[0]][ab[1]],
            )
            pairs.append((i, j))
            left -= {i, j}
        return pairs

    @lru_cache(maxsize=None)
    def best(mask: int) -> tuple[int, tuple[tuple[int, int], ...]]:
        if mask == 0:
            return 0, ()
        i = (mask & -mask).bit_length() - 1
        rest = mask & ~(1 << i)
        best_cost, best_pairs = -1, ()
        j_mask = rest
        while j_mask:
            j = (j_mask & -j_mask).bit_length() - 1
            j_mask &= j_mask - 1
            sub_cost, sub_pairs = best(rest & ~(1 << j))
            cost = dist[i][j] + sub_cost
            if best_cost < 0 or cost < best_cost:
                best_cost, best_pairs = cost, ((i, j),) + sub_pairs
        return best_cost, best_pairs

    result = list(best((1 << m) - 1)[1])
    best.cache_clear()
    return result


def _wrap_step(delta: int, L: int) -> int:
    """Signed unit step for the shorter way around the torus (ties go positive)."""
    forward = delta % L
    backward = L - forward
    return 1 if forward <= backward else -1


def _geodesic_edges(a: tuple[int, int], b: tuple[int, int], L: int, sector: str) -> list[int]:
    """Edge ids crossed walking a -> b, rows first then columns.

    Plaquette moves cross the shared boundary edge (an x-error coordinate);
    star moves cross the shared incident edge (a z-error coordinate).
    """
    edges: list[int] = []
    r, c = a
    step = _wrap_step(b[0] - r, L)
    while r != b[0]:
        if sector == "plaquette":
            edges.append(_h_edge(L, r + 1, c) if step == 1 else _h_edge(L, r, c))
        else:
            edges.append(_v_edge(L, r, c) if step == 1 else _v_edge(L, r - 1, c))
        r = (r + step) % L
    step = _wrap_step(b[1] - c, L)
    while c != b[1]:
        if sector == "plaquette":
            edges.append(_v_edge(L, r, c + 1) if step == 1 else _v_edge(L, r, c))
        else:
            edges.append(_h_edge(L, r, c) if step == 1 else _h_edge(L, r, c - 1))
        c = (c + step) % L
    return edges


def _h_edge(L: int, row: int, col: int) -> int:
    return 2 * (L * (row % L) + (col % L))


def _v_edge(L: int, row: int, col: int) -> int:
    return 2 * (L * (row % L) + (col % L)) + 1


def _match_sector(defects: DefectSet) -> np.ndarray:
    """XOR of geodesic chains for the min-cost pairing; one bit per edge."""
    L = defects.lattice_size
    bits = np.zeros(2 * L * L, dtype=np.uint8)
    for i, j in _min_cost_pairing(defects.coords, L):
        for edge in _geodesic_edges(defects.coords[i], defects.coords[j], L, defects.sector):
            bits[edge] ^= 1
    return bits


def mwpm_decode(code: StabilizerCode, s: BitVec) -> BitVec:
    """Matching decoder on the torus: plaquette defects are paired and joined
    by x-error chains, star defects by z-error chains."""
    plaq, star = defect_sets(code, s)
    n = code.n_qubits
    out = np.zeros(2 * n, dtype=np.uint8)
    out[:n] = _match_sector(plaq)
    out[n:] = _match_sector(star)
    return BitVec.from_bits(out)


def mwpm_decode_zonly(code: StabilizerCode, plaquette_syndrome: BitVec) -> BitVec:
    """Plaquette-sector matching only; returns an error with zero z-part."""
    L = _require_toric(code)
    n_faces = L * L
    if plaquette_syndrome.length != n_faces:
        raise ValueError(
            f"syndrome length {plaquette_syndrome.length} != plaquette count {n_faces}"
        )
    coords = tuple(
        (int(i) // L, int(i) % L) for i in np.nonzero(plaquette_syndrome.bits)[0]
    )
    defects = DefectSet("plaquette", L, coords)
    n = code.n_qubits
    out = np.zeros(2 * n, dtype=np.uint8)
    out[:n] = _match_sector(defects)
    return BitVec.from_bits(out)


def _enumerate_min_weight(
    columns: np.ndarray, target: np.ndarray, n_bits: int, weight_cap: int
) -> np.ndarray | None:
    """Lowest-weight 0/1 vector whose selected columns XOR to target.

    Ties at the winning weight are broken toward the lexicographically
    smallest bit vector. Returns None if nothing within the cap matches.
    """
    if not target.any():
        return np.zeros(n_bits, dtype=np.uint8)
    cols = columns.astype(np.int32)
    chunk_size = 1 << 16
    for w in range(1, weight_cap + 1):
        hits: list[tuple[int, ...]] = []
        combo_iter = combinations(range(n_bits), w)
        while True:
            block = list(islice(combo_iter, chunk_size))
            if not block:
                break
            idx = np.array(block, dtype=np.intp)
            syn = cols[idx].sum(axis=1) & 1
            match = np.nonzero((syn == target).all(axis=1))[0]
            hits.extend(block[int(i)] for i in match)
        if hits:
            best = min(_combo_bits(h, n_bits) for h in hits)
            return np.array(best, dtype=np.uint8)
    return None


def _combo_bits(combo: tuple[int, ...], n_bits: int) -> tuple[int, ...]:
    bits = [0] * n_bits
    for i in combo:
        bits[i] = 1
    return tuple(bits)


def min_weight_decode(
    code: StabilizerCode, s: BitVec, weight_cap: int | None = None
) -> BitVec:
    """Minimum-Hamming-weight error consistent with the syndrome, by
    enumeration in increasing weight (intended for N <= 20).

    For CSS codes the two sectors are searched independently, which preserves
    both the weight optimum and the lexicographic tie-break on the full
    vector. Raises MinWeightNotFound when the cap is exhausted.
    """
    n = code.n_qubits
    if s.length != code.n_checks:
        raise ValueError(f"syndrome length {s.length} != generator count {code.n_checks}")
    cap = 2 * n if weight_cap is None else weight_cap
    if cap < 0:
        raise ValueError("weight_cap must be non-negative")
    map_bits = code.syndrome_map.bits
    split = code.css_split
    if split is not None:
        z_rows = np.asarray(split.z_rows, dtype=np.intp)
        x_rows = np.asarray(split.x_rows, dtype=np.intp)
        # Plaquette rows constrain only x-bits, star rows only z-bits.
        x_cols = map_bits[z_rows][:, :n].T
        z_cols = map_bits[x_rows][:, n:].T
        ex = _enumerate_min_weight(x_cols, s.bits[z_rows], n, min(cap, n))
        ez = _enumerate_min_weight(z_cols, s.bits[x_rows], n, min(cap, n))
        if ex is None or ez is None or int(ex.sum() + ez.sum()) > cap:
            raise MinWeightNotFound(f"no solution within weight cap {cap}")
        return BitVec.from_bits(np.concatenate([ex, ez]))
    result = _enumerate_min_weight(map_bits.T, s.bits, 2 * n, min(cap, 2 * n))
    if result is None:
        raise MinWeightNotFound(f"no solution within weight cap {cap}")
    return BitVec.from_bits(result)


_GROUP_CACHE: "weakref.WeakKeyDictionary[StabilizerCode, tuple[np.ndarray, np.ndarray]]" = (
    weakref.WeakKeyDictionary()
)


def _stabilizer_group_words(code: StabilizerCode) -> tuple[np.ndarray, np.ndarray]:
    """All 2^(N-k) stabilizer elements as packed (x-words, z-words) arrays."""
    cached = _GROUP_CACHE.get(code)
    if cached is not None:
        return cached
    n = code.n_qubits
    bits = code.check_matrix.bits.copy()
    # Reduce to an independent basis (toric generators carry two dependencies).
    basis: list[np.ndarray] = []
    work = bits.copy()
    row = 0
    for col in range(2 * n):
        hits = np.nonzero(work[row:, col])[0]
        if hits.size == 0:
            continue
        pivot = row + int(hits[0])
        work[[row, pivot]] = work[[pivot, row]]
        sel = np.nonzero(work[:, col])[0]
        sel = sel[sel != row]
        if sel.size:
            work[sel] ^= work[row]
        basis.append(work[row].copy())
        row += 1
        if row == work.shape[0]:
            break
    gx = _pack_bits(np.zeros((1, n), dtype=np.uint8))
    gz = gx.copy()
    for vec in basis:
        bx = _pack_bits(vec[None, :n])
        bz = _pack_bits(vec[None, n:])
        gx = np.concatenate([gx, gx ^ bx])
        gz = np.concatenate([gz, gz ^ bz])
    _GROUP_CACHE[code] = (gx, gz)
    return gx, gz


def ml_class_probabilities(
    code: StabilizerCode,
    s: BitVec,
    model: DepolarizationModel,
    e0: BitVec | None = None,
) -> tuple[np.ndarray, BitVec]:
    """Unnormalized probability of each of the 4^k logical classes.

    Class index bits select which logical representatives (in stored order)
    are multiplied into the base solution; index 0 is the trivial class. The
    probabilities sum to the total probability of the syndrome's coset.
    """
    n, k = code.n_qubits, code.k
    if n - k > ML_COSET_LIMIT:
        raise SizeGuardExceeded(
            f"coset enumeration needs 2^(N-k) terms; N-k = {n - k} exceeds {ML_COSET_LIMIT}"
        )
    if s.length != code.n_checks:
        raise ValueError(f"syndrome length {s.length} != generator count {code.n_checks}")
    if e0 is None:
        solved = gf2_solve(code.syndrome_map.bits, s.bits)
        if solved is None:
            raise ValueError("syndrome is not attainable by any error (inconsistent)")
        e0 = BitVec.from_bits(solved)
    elif syndrome(code, e0) != s:
        raise ValueError("supplied e0 does not reproduce the syndrome")
    gx, gz = _stabilizer_group_words(code)
    p = model.fidelity
    third = (1.0 - p) / 3.0
    # P(error) depends only on how many qubits are hit: p^(N-w) * ((1-p)/3)^w.
    weight_probs = np.power(p, n - np.arange(n + 1)) * np.power(third, np.arange(n + 1))
    rep_bits = np.empty((4**k, 2 * n), dtype=np.uint8)
    for idx in range(4**k):
        rep = e0
        for j in range(2 * k):
            if (idx >> j) & 1:
                rep = rep ^ code.logicals[j]
        rep_bits[idx] = rep.bits
    bx = _pack_bits(rep_bits[:, :n])[:, None, :]
    bz = _pack_bits(rep_bits[:, n:])[:, None, :]
    per_word = np.bitwise_count((gx[None, :, :] ^ bx) | (gz[None, :, :] ^ bz))
    hit = per_word[:, :, 0] if per_word.shape[2] == 1 else per_word.sum(axis=2, dtype=np.int64)
    probs = np.array(
        [float(np.bincount(hit[idx], minlength=n + 1) @ weight_probs) for idx in range(4**k)]
    )
    return probs, e0


def exact_ml_decode(
    code: StabilizerCode, s: BitVec, model: DepolarizationModel, e0: BitVec | None = None
) -> BitVec:
    """Representative of the most probable logical class for the syndrome.

    Ties break toward the trivial class, then the lowest class index.
    """
    probs, base = ml_class_probabilities(code, s, model, e0=e0)
    idx = int(np.argmax(probs))
    rep = base
    for j in range(2 * code.k):
        if (idx >> j) & 1:
            rep = rep ^ code.logicals[j]
    return rep
