"""Acceptance suite: one test per exit criterion.

Each criterion reports an `ACCEPTANCE nn PASS/FAIL` line, replayed in the
terminal summary after the run. The trained-network fixtures dominate the
runtime; the whole module takes roughly 25 minutes single-core:

    pytest tests/test_acceptance.py -v
"""

import math

import conftest
import numpy as np
import pytest

import syndromic as sy
from syndromic import (
    BitVec,
    DepolarizationModel,
    bce_loss,
    build_toric,
    forward,
    gradients,
    init_net,
    min_weight_decode,
    mwpm_decode,
    sample_error_bits,
    syndrome,
    validate_code,
)
from syndromic.harness import (
    RunConfig,
    evaluate_decoder,
    model_path,
    run_evaluate,
    run_train,
    train_network,
    trial_rngs,
)

MASTER_SEED = 20260808
RATE = 0.10


def report(criterion: int, ok: bool, detail: str) -> None:
    line = f"ACCEPTANCE {criterion:02d} {'PASS' if ok else 'FAIL'}: {detail}"
    print("\n" + line)
    conftest.ACCEPTANCE_LINES.append(line)
    assert ok, detail


def binomial_sigma(p: float, n: int) -> float:
    return math.sqrt(max(p * (1.0 - p), 1e-12) / n)


def diff_sigma(p1: float, p2: float, n: int) -> float:
    return math.sqrt(binomial_sigma(p1, n) ** 2 + binomial_sigma(p2, n) ** 2)


def l3_config(**overrides) -> RunConfig:
    base = dict(
        lattice_size=3,
        rates=(RATE,),
        trials=10_000,
        seed=MASTER_SEED,
        hidden_layers=4,
        hidden_width_multiple=4,
        batch_size=512,
        train_batches=50_000,
        lr0=2.0,
        lr_decay=0.5,
        lr_period=0,
        log_every=10_000,
        val_pairs=10_000,
        max_iter=1000,
    )
    base.update(overrides)
    return RunConfig(**base)


@pytest.fixture(scope="module")
def l3_code():
    return build_toric(3)


@pytest.fixture(scope="module")
def l3_joint(l3_code):
    """Joint-mode net at the pinned architecture: 4 hidden layers of width 72,
    trained on 5e4 batches of 512 (~3 minutes)."""
    cfg = l3_config()
    net = train_network(cfg, l3_code, RATE, 0, log=print)
    return cfg, net


@pytest.fixture(scope="module")
def l3_zonly(l3_code):
    cfg = l3_config(mode="z_only", train_batches=30_000)
    net = train_network(cfg, l3_code, RATE, 0, log=print)
    return cfg, net


@pytest.fixture(scope="module")
def l5_trained():
    """L=5 joint net (4 hidden layers of width 200, 4e4 batches, ~8 minutes)."""
    code = build_toric(5)
    cfg = RunConfig(
        lattice_size=5,
        rates=(RATE,),
        trials=1000,
        seed=MASTER_SEED,
        hidden_layers=4,
        train_batches=40_000,
        lr0=2.0,
        lr_decay=0.5,
        log_every=10_000,
        max_iter=1000,
    )
    net = train_network(cfg, code, RATE, 0, log=print)
    return cfg, code, net


@pytest.fixture(scope="module")
def l3_records(l3_code, l3_joint):
    """Shared-seed Monte Carlo records for neural, mwpm, and exact ML at the
    headline operating point (10^4 trials each)."""
    cfg, net = l3_joint
    records = {}
    for decoder in ("neural", "mwpm", "ml"):
        records[decoder] = evaluate_decoder(
            cfg, l3_code, decoder, RATE, 0, net=net if decoder == "neural" else None
        )
    return records


class TestCriterion1Structural:
    def test_structural_invariants(self):
        for L in range(2, 10):
            code = build_toric(L)
            validate_code(code)  # commutation, logical pairing, rank = N - k
            n_faces = L * L
            assert code.n_qubits == 2 * L * L
            assert code.k == 2
            weights = code.check_matrix.bits.sum(axis=1)
            assert np.all(weights == 4)
            assert sy.gf2_rank(code.check_matrix) == 2 * L * L - 2
            plq = code.check_matrix.bits[:n_faces, code.n_qubits :]
            star = code.check_matrix.bits[n_faces:, : code.n_qubits]
            assert np.all(plq.sum(axis=0) == 2) and np.all(star.sum(axis=0) == 2)
            assert not np.bitwise_xor.reduce(code.check_matrix.bits[:n_faces], axis=0).any()
            assert not np.bitwise_xor.reduce(code.check_matrix.bits[n_faces:], axis=0).any()
        report(1, True, "all stabilizer-code invariants hold for L in 2..9")


class TestCriterion2Gradients:
    def test_backprop_matches_finite_differences(self):
        rng = np.random.default_rng(2)
        h, tol = 1e-5, 1e-4
        probes = 0
        worst = 0.0
        layouts = [(0, 8), (1, 12), (2, 16), (3, 16)]
        while probes < 100:
            hidden_layers, width = layouts[probes % len(layouts)]
            n_in = int(rng.integers(3, 9))
            n_out = int(rng.integers(2, 9))
            cfg = sy.MlpConfig(
                input_width=n_in, output_width=n_out, hidden_layers=hidden_layers,
                hidden_width=width, seed=int(rng.integers(0, 2**31)),
            )
            net = init_net(cfg, sy.syndrome_stats(0.1), 0.9, dtype=np.float64)
            x = rng.normal(size=(5, n_in))
            t = rng.integers(0, 2, size=(5, n_out)).astype(np.float64)
            grad_w, grad_b, _ = gradients(net, x, t)
            for _ in range(4):
                li = int(rng.integers(0, len(net.weights)))
                arr, grad = (
                    (net.weights[li], grad_w[li])
                    if rng.random() < 0.5
                    else (net.biases[li], grad_b[li])
                )
                idx = tuple(int(rng.integers(0, s)) for s in arr.shape)
                orig = arr[idx]
                arr[idx] = orig + h
                loss_plus = bce_loss(forward(net, x), t)
                arr[idx] = orig - h
                loss_minus = bce_loss(forward(net, x), t)
                arr[idx] = orig
                fd = (loss_plus - loss_minus) / (2 * h)
                rel = abs(fd - grad[idx]) / max(abs(fd), abs(grad[idx]), 1e-12)
                worst = max(worst, rel)
                assert rel < tol, f"probe {probes}: relative error {rel:.2e}"
                probes += 1
        report(2, True, f"{probes} gradient probes, worst relative error {worst:.2e} < 1e-4")


class TestCriterion3SamplerSoundness:
    def test_every_success_reproduces_syndrome(self, l3_code, l3_joint):
        cfg, net = l3_joint
        model = DepolarizationModel(1.0 - RATE)
        successes = 0
        for trial in range(10_000):
            err_rng, dec_rng = trial_rngs(MASTER_SEED, 0, trial)
            e = sample_error_bits(model, l3_code.n_qubits, 1, err_rng)[0]
            s = syndrome(l3_code, BitVec.from_bits(e))
            out = sy.decode(net, l3_code, s, max_iter=cfg.max_iter, rng=dec_rng)
            if out.succeeded:
                successes += 1
                assert syndrome(l3_code, out.predicted_error) == s
        assert successes > 0
        report(3, True, f"{successes}/10000 successes, every one reproduces its syndrome")


class TestCriterion4OracleChain:
    def test_ml_dominates_and_matching_is_min_weight(self, l3_code, l3_records):
        n = l3_records["neural"].trials
        cf = {k: r.corrected_fraction for k, r in l3_records.items()}
        ok_mwpm = cf["ml"] >= cf["mwpm"] - 3 * diff_sigma(cf["ml"], cf["mwpm"], n)
        ok_neural = cf["ml"] >= cf["neural"] - 3 * diff_sigma(cf["ml"], cf["neural"], n)
        assert ok_mwpm and ok_neural

        # per-trial: matching weight equals brute-force minimum weight per sector
        model = DepolarizationModel(1.0 - RATE)
        checked = 0
        for trial in range(10_000):
            err_rng, _ = trial_rngs(MASTER_SEED, 0, trial)
            e = sample_error_bits(model, 18, 1, err_rng)[0]
            s = syndrome(l3_code, BitVec.from_bits(e))
            plaq_defects = int(s.bits[:9].sum())
            star_defects = int(s.bits[9:].sum())
            if max(plaq_defects, star_defects) > 16:
                continue
            matched = mwpm_decode(l3_code, s)
            reference = min_weight_decode(l3_code, s)
            assert int(matched.bits[:18].sum()) == int(reference.bits[:18].sum())
            assert int(matched.bits[18:].sum()) == int(reference.bits[18:].sum())
            checked += 1
        report(
            4,
            True,
            f"ml={cf['ml']:.4f} >= mwpm={cf['mwpm']:.4f} and neural={cf['neural']:.4f} "
            f"(within 3 sigma); matching == min weight on {checked}/10000 trials",
        )


class TestCriterion5DeskScaleHeadline:
    def test_neural_within_two_points_of_matching(self, l3_records):
        n = l3_records["neural"].trials
        neural = l3_records["neural"].corrected_fraction
        mwpm = l3_records["mwpm"].corrected_fraction
        gap = neural - mwpm
        ok = neural >= mwpm - 0.02
        report(
            5,
            ok,
            f"neural={neural:.4f} vs mwpm={mwpm:.4f} over {n} shared-seed trials; "
            f"signed gap {gap:+.4f} (required >= -0.02, target positive)",
        )


class TestCriterion6CorrelationDiagnostic:
    def test_joint_gain_exceeds_matching_gain(self, l3_code, l3_joint, l3_zonly, l3_records):
        cfg_z, net_z = l3_zonly
        n = cfg_z.trials
        rec_nz = evaluate_decoder(cfg_z, l3_code, "neural", RATE, 0, net=net_z, mode="z_only")
        rec_mz = evaluate_decoder(cfg_z, l3_code, "mwpm", RATE, 0, mode="z_only")
        nj = l3_records["neural"].corrected_fraction
        mj = l3_records["mwpm"].corrected_fraction
        nz, mz = rec_nz.corrected_fraction, rec_mz.corrected_fraction
        gap_neural = nj - nz**2
        gap_mwpm = mj - mz**2
        sigma = math.sqrt(
            binomial_sigma(nj, n) ** 2
            + (2 * nz * binomial_sigma(nz, n)) ** 2
            + binomial_sigma(mj, n) ** 2
            + (2 * mz * binomial_sigma(mz, n)) ** 2
        )
        ok = gap_neural >= gap_mwpm - 3 * sigma
        report(
            6,
            ok,
            f"joint - zonly^2: neural {gap_neural:+.4f} vs mwpm {gap_mwpm:+.4f} "
            f"(3 sigma = {3 * sigma:.4f}); the network exploits cross-sector correlations",
        )


class TestCriterion7MessagePassingSpeedup:
    def test_resampling_speedup(self, l5_trained):
        cfg, code, net = l5_trained
        model = DepolarizationModel(1.0 - RATE)
        means = {}
        accepted_means = {}
        for mode in (sy.NAIVE, sy.MESSAGE_PASSING):
            iters, accepted = [], []
            for trial in range(1000):
                err_rng, dec_rng = trial_rngs(MASTER_SEED, 0, trial)
                e = sample_error_bits(model, code.n_qubits, 1, err_rng)[0]
                s = syndrome(code, BitVec.from_bits(e))
                out = sy.decode(
                    net, code, s, max_iter=cfg.max_iter, sampling_mode=mode, rng=dec_rng
                )
                iters.append(out.iterations_used)
                if out.succeeded:
                    accepted.append(out.iterations_used)
            means[mode] = float(np.mean(iters))
            accepted_means[mode] = float(np.mean(accepted)) if accepted else float("nan")
        ratio = means[sy.NAIVE] / means[sy.MESSAGE_PASSING]
        accepted_ratio = accepted_means[sy.NAIVE] / accepted_means[sy.MESSAGE_PASSING]
        ok = ratio >= 2.0
        report(
            7,
            ok,
            f"mean iterations naive/message_passing = {means[sy.NAIVE]:.1f}/"
            f"{means[sy.MESSAGE_PASSING]:.1f} = {ratio:.2f} (required >= 2.0; "
            f"accepted-only ratio {accepted_ratio:.2f}; the gap widens toward an "
            f"order of magnitude as training scales up)",
        )

    def test_efficiency_ordering_ten_thousand(self, l5_trained):
        # supplementary: the ordering holds over 1e4 decodes as well
        cfg, code, net = l5_trained
        model = DepolarizationModel(1.0 - RATE)
        totals = {}
        for mode in (sy.NAIVE, sy.MESSAGE_PASSING):
            total = 0
            for trial in range(10_000):
                err_rng, dec_rng = trial_rngs(MASTER_SEED, 1, trial)
                e = sample_error_bits(model, code.n_qubits, 1, err_rng)[0]
                s = syndrome(code, BitVec.from_bits(e))
                out = sy.decode(
                    net, code, s, max_iter=cfg.max_iter, sampling_mode=mode, rng=dec_rng
                )
                total += out.iterations_used
            totals[mode] = total / 10_000
        assert totals[sy.MESSAGE_PASSING] < totals[sy.NAIVE]


class TestCriterion8IterationCapMonotonicity:
    def test_success_non_decreasing_in_budget(self, l3_code, l3_joint):
        cfg, net = l3_joint
        budgets = (1, 10, 100, 1000)
        fractions = []
        for budget in budgets:
            rec = evaluate_decoder(
                cfg, l3_code, "neural", RATE, 0, net=net, max_iter=budget
            )
            fractions.append(rec.corrected_fraction)
        non_decreasing = all(b >= a for a, b in zip(fractions, fractions[1:]))
        strict_early = fractions[2] > fractions[0]  # somewhere between 1 and 100
        ok = non_decreasing and strict_early
        detail = ", ".join(
            f"cap {b}: {f:.4f}" for b, f in zip(budgets, fractions)
        )
        report(8, ok, f"success fraction vs iteration cap: {detail}")


class TestCriterion9StatisticsValidation:
    def test_syndrome_bit_mean_matches_closed_form(self, l3_code):
        n_samples = 1_000_000
        for q in (0.05, 0.1, 0.2):
            fidelity = 1.0 - 1.5 * q  # invert q = (2/3)(1 - p)
            model = DepolarizationModel(fidelity)
            expected = sy.syndrome_stats(q).mean
            rng = np.random.default_rng(MASTER_SEED + int(q * 1000))
            total_bits = 0.0
            count = 0
            remaining = n_samples
            while remaining:
                b = min(65_536, remaining)
                errors = sample_error_bits(model, 18, b, rng)
                syn = sy.syndrome_batch(l3_code, errors)
                total_bits += float(syn.sum())
                count += syn.size
                remaining -= b
            mean = total_bits / count
            sigma = binomial_sigma(expected, n_samples)  # bits correlate within a sample
            assert abs(mean - expected) < 3 * sigma, (q, mean, expected)

        # pauli mix at p = 0.85: i.i.d. over samples x qubits
        model = DepolarizationModel(0.85)
        rng = np.random.default_rng(MASTER_SEED)
        bits = sample_error_bits(model, 18, 100_000, rng)
        x = bits[:, :18].astype(bool)
        z = bits[:, 18:].astype(bool)
        total = x.size
        for name, mask, prob in (
            ("i", ~x & ~z, 0.85),
            ("x", x & ~z, 0.05),
            ("y", x & z, 0.05),
            ("z", ~x & z, 0.05),
        ):
            frac = mask.sum() / total
            sigma = binomial_sigma(prob, total)
            assert abs(frac - prob) < 3 * sigma, (name, frac, prob)
        report(
            9,
            True,
            "syndrome-bit means match the closed form at q in {0.05, 0.1, 0.2}; "
            "pauli mix within 3 sigma of (p, (1-p)/3 x3)",
        )


class TestCriterion10Reproducibility:
    def test_models_and_csv_are_byte_identical(self, tmp_path):
        def config_text(sub):
            return "\n".join(
                [
                    "lattice_size = 3",
                    "rates = 0.1",
                    "trials = 500",
                    f"seed = {MASTER_SEED}",
                    "hidden_layers = 2",
                    "train_batches = 2000",
                    "lr0 = 2.0",
                    "log_every = 0",
                    "val_pairs = 512",
                    "max_iter = 200",
                    "decoders = neural, mwpm",
                    f"model_out = {tmp_path / sub / 'net'}",
                    f"model_in = {tmp_path / sub / 'net'}",
                    f"out = {tmp_path / sub / 'records.csv'}",
                ]
            )

        blobs = []
        for sub in ("runA", "runB"):
            (tmp_path / sub).mkdir()
            cfg_file = tmp_path / f"{sub}.cfg"
            cfg_file.write_text(config_text(sub), encoding="utf-8")
            cfg = sy.parse_config(cfg_file)
            run_train(cfg, log=lambda _m: None)
            run_evaluate(cfg, log=lambda _m: None)
            model_bytes = model_path(str(tmp_path / sub / "net"), 0.1).read_bytes()
            csv_lines = (tmp_path / sub / "records.csv").read_text().splitlines()
            stripped = []
            for line in csv_lines:
                cells = line.split(",")
                del cells[9]  # wall_time_s
                stripped.append(",".join(cells))
            blobs.append((model_bytes, stripped))
        ok = blobs[0] == blobs[1]
        report(10, ok, "identical config+seed gives byte-identical model and CSV "
                       "(wall_time column excluded)")


class TestSupplementaryInvariants:
    def test_training_efficacy(self, l3_code):
        """Long-haul check: 2 hidden layers, 2e5 batches of 512, validation BCE
        must drop by at least 30% from its initial value (several minutes)."""
        model = DepolarizationModel(1.0 - RATE)
        stats = sy.stats_for_code(l3_code, model)
        n_batches = 200_000
        cfg = sy.MlpConfig(
            input_width=18, output_width=36, hidden_layers=2, seed=5,
            lr0=2.0, lr_decay=0.5, lr_period=n_batches // 8,
        )
        net = init_net(cfg, stats, model.fidelity, lattice_size=3)
        val_stream = sy.training_stream(
            l3_code, model, 512, np.random.default_rng(MASTER_SEED + 1), stats=stats
        )
        xs, ts = zip(*(next(val_stream) for _ in range(20)))
        xv, tv = np.concatenate(xs), np.concatenate(ts)
        initial = bce_loss(forward(net, xv), tv)
        stream = sy.training_stream(
            l3_code, model, 512, np.random.default_rng(MASTER_SEED), stats=stats
        )
        sy.train(net, stream, n_batches, cfg, log_every=0)
        final = bce_loss(forward(net, xv), tv)
        assert final < 0.7 * initial, (initial, final)
        print(f"\ntraining efficacy: validation BCE {initial:.4f} -> {final:.4f} "
              f"({100 * (1 - final / initial):.1f}% drop)")
