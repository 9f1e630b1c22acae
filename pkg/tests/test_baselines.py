import logging

import numpy as np
import pytest

from syndromic import (
    BitVec,
    DepolarizationModel,
    MinWeightNotFound,
    SizeGuardExceeded,
    build_toric,
    exact_ml_decode,
    logical_class,
    min_weight_decode,
    ml_class_probabilities,
    mwpm_decode,
    mwpm_decode_zonly,
    sample_error_bits,
    syndrome,
    torus_distance,
)
from syndromic.baselines import DefectSet, defect_sets


@pytest.fixture(scope="module")
def l3():
    return build_toric(3)


class TestTorusDistance:
    def test_coincident(self):
        assert torus_distance((0, 0), (0, 0), 5) == 0

    def test_wraparound(self):
        assert torus_distance((0, 0), (0, 4), 5) == 1
        assert torus_distance((4, 0), (0, 0), 5) == 1

    def test_manhattan(self):
        assert torus_distance((0, 0), (2, 2), 5) == 4


class TestDefectSets:
    def test_even_parity_enforced(self):
        with pytest.raises(ValueError):
            DefectSet("plaquette", 3, ((0, 0),))

    def test_split(self, l3):
        e = np.zeros(36, dtype=np.uint8)
        e[0] = 1  # single x error -> two plaquette defects
        plaq, star = defect_sets(l3, syndrome(l3, BitVec.from_bits(e)))
        assert len(plaq.coords) == 2
        assert len(star.coords) == 0


class TestMwpm:
    def test_empty_syndrome(self, l3):
        assert mwpm_decode(l3, BitVec.zeros(18)).is_zero()

    def test_adjacent_defects_get_single_edge(self, l3):
        # a single x error creates two plaquette defects at distance 1
        for edge in range(18):
            e = np.zeros(36, dtype=np.uint8)
            e[edge] = 1
            s = syndrome(l3, BitVec.from_bits(e))
            pred = mwpm_decode(l3, s)
            assert pred.weight() == 1
            assert syndrome(l3, pred) == s

    def test_soundness_and_sector_weights(self, l3):
        model = DepolarizationModel(0.9)
        for i in range(400):
            e = sample_error_bits(model, 18, 1, np.random.default_rng(2000 + i))[0]
            s = syndrome(l3, BitVec.from_bits(e))
            pred = mwpm_decode(l3, s)
            assert syndrome(l3, pred) == s
            ref = min_weight_decode(l3, s)
            assert int(pred.bits[:18].sum()) == int(ref.bits[:18].sum())
            assert int(pred.bits[18:].sum()) == int(ref.bits[18:].sum())

    def test_odd_defects_rejected(self, l3):
        bad = np.zeros(18, dtype=np.uint8)
        bad[0] = 1
        with pytest.raises(ValueError):
            mwpm_decode(l3, BitVec.from_bits(bad))

    def test_requires_toric_metadata(self, l3, tmp_path):
        from syndromic import load_code, save_code

        save_code(l3, tmp_path / "c.code")
        loaded = load_code(tmp_path / "c.code")  # file format carries no lattice size
        with pytest.raises(ValueError):
            mwpm_decode(loaded, BitVec.zeros(18))

    def test_greedy_fallback_logs_and_stays_sound(self, caplog):
        code = build_toric(7)
        model = DepolarizationModel(0.55)  # dense syndrome, > 16 defects per sector
        for i in range(20):
            e = sample_error_bits(model, code.n_qubits, 1, np.random.default_rng(i))[0]
            s = syndrome(code, BitVec.from_bits(e))
            plaq, star = defect_sets(code, s)
            if max(len(plaq.coords), len(star.coords)) <= 16:
                continue
            with caplog.at_level(logging.WARNING, logger="syndromic.baselines"):
                pred = mwpm_decode(code, s)
            assert syndrome(code, pred) == s
            assert any("inexact" in rec.message for rec in caplog.records)
            return
        pytest.fail("never sampled a dense enough syndrome")

    def test_zonly_variant(self, l3):
        model = DepolarizationModel(0.9)
        for i in range(100):
            e = sample_error_bits(model, 18, 1, np.random.default_rng(3000 + i))[0]
            s = syndrome(l3, BitVec.from_bits(e))
            s_plaq = BitVec.from_bits(s.bits[:9])
            pred = mwpm_decode_zonly(l3, s_plaq)
            assert not pred.bits[18:].any()
            assert np.array_equal(syndrome(l3, pred).bits[:9], s_plaq.bits)


class TestMinWeight:
    def test_zero_syndrome(self, l3):
        out = min_weight_decode(l3, BitVec.zeros(18))
        assert out.is_zero()

    def test_single_error_syndrome(self, l3):
        e = np.zeros(36, dtype=np.uint8)
        e[23] = 1  # z error
        s = syndrome(l3, BitVec.from_bits(e))
        out = min_weight_decode(l3, s)
        assert out.weight() == 1
        assert syndrome(l3, out) == s

    def test_zero_cap_unsatisfiable(self, l3):
        e = np.zeros(36, dtype=np.uint8)
        e[0] = 1
        s = syndrome(l3, BitVec.from_bits(e))
        with pytest.raises(MinWeightNotFound):
            min_weight_decode(l3, s, weight_cap=0)

    def test_lexicographic_tie_break(self, l3):
        from itertools import combinations

        # plaquette defects at faces (0,0) and (1,1) admit two weight-2 chains
        s_bits = np.zeros(18, dtype=np.uint8)
        s_bits[0] = s_bits[4] = 1
        s = BitVec.from_bits(s_bits)
        out = min_weight_decode(l3, s)
        w = out.weight()
        alts = []
        for combo in combinations(range(36), w):
            cand = np.zeros(36, dtype=np.uint8)
            cand[list(combo)] = 1
            if syndrome(l3, BitVec.from_bits(cand)) == s:
                alts.append(tuple(cand))
        assert len(alts) >= 2  # a genuine tie
        assert tuple(out.bits) == min(alts)


class TestExactMl:
    def test_zero_syndrome_high_fidelity(self, l3):
        out = exact_ml_decode(l3, BitVec.zeros(18), DepolarizationModel(0.99))
        assert syndrome(l3, out).is_zero()
        assert logical_class(l3, out).is_trivial

    def test_class_count_and_positive(self, l3):
        model = DepolarizationModel(0.9)
        e = sample_error_bits(model, 18, 1, np.random.default_rng(4))[0]
        s = syndrome(l3, BitVec.from_bits(e))
        probs, e0 = ml_class_probabilities(l3, s, model)
        assert probs.shape == (16,)
        assert np.all(probs > 0)
        assert syndrome(l3, e0) == s

    def test_probabilities_sum_to_coset_total(self):
        code = build_toric(2)
        model = DepolarizationModel(0.8)
        e = sample_error_bits(model, 8, 1, np.random.default_rng(5))[0]
        s = syndrome(code, BitVec.from_bits(e))
        probs, _ = ml_class_probabilities(code, s, model)
        p, third = 0.8, 0.2 / 3
        total = 0.0
        for v in range(1 << 16):
            bits = np.array([(v >> i) & 1 for i in range(16)], dtype=np.uint8)
            if syndrome(code, BitVec.from_bits(bits)) == s:
                w = int(np.count_nonzero(bits[:8] | bits[8:]))
                total += p ** (8 - w) * third**w
        assert probs.sum() == pytest.approx(total, rel=1e-12)
        assert (probs / probs.sum()).sum() == pytest.approx(1.0)

    def test_invariant_to_base_solution(self, l3):
        model = DepolarizationModel(0.87)
        for i in range(10):
            e = sample_error_bits(model, 18, 1, np.random.default_rng(6 + i))[0]
            s = syndrome(l3, BitVec.from_bits(e))
            probs, e0 = ml_class_probabilities(l3, s, model)
            alt = e0 ^ l3.check_matrix.row(i % 18)
            probs_alt, _ = ml_class_probabilities(l3, s, model, e0=alt)
            assert np.allclose(probs, probs_alt, rtol=1e-12)
            d1 = exact_ml_decode(l3, s, model)
            d2 = exact_ml_decode(l3, s, model, e0=alt)
            residual = d1 ^ d2
            assert syndrome(l3, residual).is_zero()
            assert logical_class(l3, residual).is_trivial

    def test_wrong_base_solution_rejected(self, l3):
        model = DepolarizationModel(0.9)
        e = sample_error_bits(model, 18, 1, np.random.default_rng(30))[0]
        s = syndrome(l3, BitVec.from_bits(e))
        with pytest.raises(ValueError):
            ml_class_probabilities(l3, s, model, e0=BitVec.zeros(36))

    def test_size_guard(self):
        code = build_toric(4)  # N - k = 30
        with pytest.raises(SizeGuardExceeded):
            exact_ml_decode(code, BitVec.zeros(32), DepolarizationModel(0.9))

    def test_tie_break_toward_trivial_class(self, l3):
        # at fidelity 0.25 every error is equiprobable, so all classes tie
        out = exact_ml_decode(l3, BitVec.zeros(18), DepolarizationModel(0.25))
        assert logical_class(l3, out).is_trivial

    def test_beats_mwpm_quick(self, l3):
        model = DepolarizationModel(0.9)
        ml_wins = mwpm_wins = 0
        trials = 300
        for i in range(trials):
            e = sample_error_bits(model, 18, 1, np.random.default_rng(7000 + i))[0]
            ev = BitVec.from_bits(e)
            s = syndrome(l3, ev)
            if logical_class(l3, ev ^ exact_ml_decode(l3, s, model)).is_trivial:
                ml_wins += 1
            if logical_class(l3, ev ^ mwpm_decode(l3, s)).is_trivial:
                mwpm_wins += 1
        sigma = (0.25 / trials) ** 0.5 * trials
        assert ml_wins >= mwpm_wins - 3 * sigma
