"""Run driver: training, Monte Carlo evaluation, decoder comparison, sweeps.

All randomness derives from one master seed: per trial, the error draw and the
decoder's sampling use separate child seeds, so every decoder at a given rate
sees the same error stream and reruns are bit-reproducible.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from . import baselines, mlp, noise, sampler
from .baselines import MinWeightNotFound, SizeGuardExceeded
from .codes import StabilizerCode, build_toric, load_code, logical_class, syndrome
from .gf2 import BitVec
from .mlp import MlpConfig, MlpDecoderNet
from .noise import DepolarizationModel

DECODER_IDS = ("neural", "mwpm", "ml", "minweight")
SWEEP_AXES = ("max_iter", "hidden_layers", "sampler_mode")

CSV_HEADER = (
    "rate,decoder,mode,trials,successes,giveups,logical_errors,"
    "corrected_fraction,mean_iterations,wall_time_s,seed"
)

# spawn-key tags for deriving child seeds from the master seed
_SK_ERROR, _SK_DECODE = 0, 1
_SK_TRAIN, _SK_VALIDATION, _SK_NET, _SK_STATS = 10, 11, 12, 13
_MODE_TAG = {"joint": 0, "z_only": 1}


class ConfigError(ValueError):
    """Raised for malformed config files or invalid option combinations."""


@dataclass
class RunConfig:
    """Parsed `key = value` run configuration; unknown keys are rejected."""

    lattice_size: int | None = None
    code_file: str | None = None
    rates: tuple[float, ...] = ()
    trials: int = 10_000
    decoders: tuple[str, ...] = ("neural", "mwpm")
    mode: str = "joint"
    sampler_mode: str = sampler.MESSAGE_PASSING
    max_iter: int = 1000
    seed: int = 0
    hidden_layers: int = 4
    hidden_width_multiple: int = 4
    batch_size: int = 512
    train_batches: int = 50_000
    lr0: float = 2e-3
    lr_decay: float = 0.5
    lr_period: int = 0  # 0 -> train_batches // 8
    momentum: float = 0.0
    log_every: int = 1000
    val_pairs: int = 10_000
    model_out: str | None = None
    model_in: str | None = None
    model_zonly: str | None = None
    reuse_model: str | None = None
    out: str | None = None
    sweep_axis: str | None = None
    sweep_values: tuple[str, ...] = ()
    min_weight_cap: int | None = None

    def resolved_lr_period(self) -> int:
        return self.lr_period if self.lr_period > 0 else max(1, self.train_batches // 8)


def _parse_int(v: str) -> int:
    return int(v)


def _parse_float(v: str) -> float:
    return float(v)


def _parse_str(v: str) -> str:
    return v


def _parse_float_list(v: str) -> tuple[float, ...]:
    return tuple(float(x) for x in v.split(",") if x.strip())


def _parse_str_list(v: str) -> tuple[str, ...]:
    return tuple(x.strip() for x in v.split(",") if x.strip())


_PARSERS: dict[str, Callable[[str], object]] = {
    "lattice_size": _parse_int,
    "code_file": _parse_str,
    "rates": _parse_float_list,
    "trials": _parse_int,
    "decoders": _parse_str_list,
    "mode": _parse_str,
    "sampler_mode": _parse_str,
    "max_iter": _parse_int,
    "seed": _parse_int,
    "hidden_layers": _parse_int,
    "hidden_width_multiple": _parse_int,
    "batch_size": _parse_int,
    "train_batches": _parse_int,
    "lr0": _parse_float,
    "lr_decay": _parse_float,
    "lr_period": _parse_int,
    "momentum": _parse_float,
    "log_every": _parse_int,
    "val_pairs": _parse_int,
    "model_out": _parse_str,
    "model_in": _parse_str,
    "model_zonly": _parse_str,
    "reuse_model": _parse_str,
    "out": _parse_str,
    "sweep_axis": _parse_str,
    "sweep_values": _parse_str_list,
    "min_weight_cap": _parse_int,
}


def parse_config(path: str | Path) -> RunConfig:
    """Read a UTF-8 `key = value` config file; `#` lines and blanks are skipped."""
    cfg = RunConfig()
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key not in _PARSERS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            setattr(cfg, key, _PARSERS[key](value))
        except (ValueError, TypeError) as exc:
            raise ConfigError(f"{path}:{lineno}: bad value for {key}: {exc}") from exc
    validate_config(cfg)
    return cfg


def validate_config(cfg: RunConfig) -> None:
    if cfg.trials < 1:
        raise ConfigError("trials must be at least 1")
    if any(not 0.0 <= r <= 1.0 for r in cfg.rates):
        raise ConfigError("rates must lie in [0, 1]")
    for d in cfg.decoders:
        if d not in DECODER_IDS:
            raise ConfigError(f"unknown decoder {d!r}; expected one of {DECODER_IDS}")
    if cfg.mode not in ("joint", "z_only"):
        raise ConfigError(f"mode must be joint or z_only, got {cfg.mode!r}")
    if cfg.sampler_mode not in (sampler.NAIVE, sampler.MESSAGE_PASSING):
        raise ConfigError(f"unknown sampler_mode {cfg.sampler_mode!r}")
    if cfg.max_iter < 1:
        raise ConfigError("max_iter must be at least 1")
    if cfg.sweep_axis is not None and cfg.sweep_axis not in SWEEP_AXES:
        raise ConfigError(f"sweep_axis must be one of {SWEEP_AXES}")
    if cfg.lattice_size is not None and cfg.code_file is not None:
        raise ConfigError("give either lattice_size or code_file, not both")
    if cfg.batch_size < 1 or cfg.train_batches < 1:
        raise ConfigError("batch_size and train_batches must be at least 1")
    if cfg.hidden_layers < 0 or cfg.hidden_width_multiple < 1:
        raise ConfigError("invalid network size parameters")


@dataclass
class EvalRecord:
    """Monte Carlo tallies for one (rate, decoder) cell."""

    rate: float
    decoder: str
    mode: str
    trials: int
    successes: int
    giveups: int
    logical_errors: int
    corrected_fraction: float
    mean_iterations: float
    wall_time_s: float
    seed: int

    def csv_row(self) -> str:
        return ",".join(
            [
                f"{self.rate:.6g}",
                self.decoder,
                self.mode,
                str(self.trials),
                str(self.successes),
                str(self.giveups),
                str(self.logical_errors),
                f"{self.corrected_fraction:.6g}",
                f"{self.mean_iterations:.6g}",
                f"{self.wall_time_s:.6g}",
                str(self.seed),
            ]
        )


def write_csv(records: Sequence[EvalRecord], path: str | Path) -> None:
    lines = [CSV_HEADER] + [r.csv_row() for r in records]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_run_code(cfg: RunConfig) -> StabilizerCode:
    if cfg.lattice_size is not None:
        return build_toric(cfg.lattice_size)
    if cfg.code_file is not None:
        return load_code(cfg.code_file)
    raise ConfigError("config must set lattice_size or code_file")


def model_path(stem: str, rate: float) -> Path:
    return Path(f"{stem}_rate{rate:.6g}.nndec")


def _child_rng(master_seed: int, *spawn_key: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(master_seed, spawn_key=spawn_key))


def _child_seed(master_seed: int, *spawn_key: int) -> int:
    return int(np.random.SeedSequence(master_seed, spawn_key=spawn_key).generate_state(1)[0])


def trial_rngs(
    master_seed: int, rate_index: int, trial: int
) -> tuple[np.random.Generator, np.random.Generator]:
    """(error rng, decode rng) for one trial; error draws are decoder-independent."""
    return (
        _child_rng(master_seed, rate_index, trial, _SK_ERROR),
        _child_rng(master_seed, rate_index, trial, _SK_DECODE),
    )


# ---------------------------------------------------------------------------
# training


def build_mlp_config(cfg: RunConfig, code: StabilizerCode, mode: str, net_seed: int) -> MlpConfig:
    if mode == "z_only":
        if code.css_split is None:
            raise ConfigError("z_only mode requires a CSS code")
        input_width = len(code.css_split.z_rows)
        output_width = code.n_qubits
    else:
        input_width = code.n_checks
        output_width = 2 * code.n_qubits
    try:
        return MlpConfig(
            input_width=input_width,
            output_width=output_width,
            hidden_layers=cfg.hidden_layers,
            hidden_width=cfg.hidden_width_multiple * input_width,
            lr0=cfg.lr0,
            lr_decay=cfg.lr_decay,
            lr_period=cfg.resolved_lr_period(),
            batch_size=cfg.batch_size,
            momentum=cfg.momentum,
            seed=net_seed,
        )
    except ValueError as exc:
        raise ConfigError(f"invalid network hyperparameters: {exc}") from exc


def _validation_set(
    code: StabilizerCode,
    model: DepolarizationModel,
    cfg: RunConfig,
    mode: str,
    rate_index: int,
    stats: noise.NoiseStats,
) -> tuple[np.ndarray, np.ndarray]:
    rng = _child_rng(cfg.seed, rate_index, _MODE_TAG[mode], _SK_VALIDATION)
    stream = noise.training_stream(code, model, cfg.batch_size, rng, mode=mode, stats=stats)
    xs, ts = [], []
    rows = 0
    while rows < cfg.val_pairs:
        x, t = next(stream)
        xs.append(x)
        ts.append(t)
        rows += x.shape[0]
    return np.concatenate(xs)[: cfg.val_pairs], np.concatenate(ts)[: cfg.val_pairs]


def train_network(
    cfg: RunConfig,
    code: StabilizerCode,
    rate: float,
    rate_index: int,
    mode: str | None = None,
    hidden_layers: int | None = None,
    log: Callable[[str], None] = print,
) -> MlpDecoderNet:
    """Train one network for one depolarization rate; deterministic in cfg.seed."""
    mode = cfg.mode if mode is None else mode
    model = DepolarizationModel(1.0 - rate)
    stats_rng = _child_rng(cfg.seed, rate_index, _MODE_TAG[mode], _SK_STATS)
    stats = noise.stats_for_code(code, model, stats_rng)
    net_seed = _child_seed(cfg.seed, rate_index, _MODE_TAG[mode], _SK_NET)
    mlp_cfg = build_mlp_config(cfg, code, mode, net_seed)
    if hidden_layers is not None:
        mlp_cfg = replace(mlp_cfg, hidden_layers=hidden_layers)
    net = mlp.init_net(
        mlp_cfg,
        stats,
        model.fidelity,
        mode=mode,
        lattice_size=cfg.lattice_size or 0,
    )
    train_rng = _child_rng(cfg.seed, rate_index, _MODE_TAG[mode], _SK_TRAIN)
    stream = noise.training_stream(code, model, cfg.batch_size, train_rng, mode=mode, stats=stats)
    validation = _validation_set(code, model, cfg, mode, rate_index, stats)
    log(f"training {mode} net at rate {rate:.6g}: dims "
        f"{mlp_cfg.input_width}->{mlp_cfg.resolved_hidden_width}x{mlp_cfg.hidden_layers}"
        f"->{mlp_cfg.output_width}, {cfg.train_batches} batches of {cfg.batch_size}")
    mlp.train(
        net,
        stream,
        cfg.train_batches,
        mlp_cfg,
        validation=validation,
        log_every=cfg.log_every,
        log=log,
    )
    return net


def run_train(cfg: RunConfig, log: Callable[[str], None] = print) -> list[Path]:
    """Train one network per rate and write model files."""
    if not cfg.rates:
        raise ConfigError("train needs a non-empty rates list")
    if cfg.model_out is None:
        raise ConfigError("train needs model_out")
    code = load_run_code(cfg)
    log(f"master seed: {cfg.seed}")
    paths = []
    for rate_index, rate in enumerate(cfg.rates):
        net = train_network(cfg, code, rate, rate_index, log=log)
        path = model_path(cfg.model_out, rate)
        path.parent.mkdir(parents=True, exist_ok=True)
        mlp.save_model(net, path)
        log(f"wrote {path}")
        paths.append(path)
    return paths


# ---------------------------------------------------------------------------
# evaluation


def _load_net_for_rate(cfg: RunConfig, rate: float) -> MlpDecoderNet:
    if cfg.reuse_model is not None:
        path = Path(cfg.reuse_model)
    elif cfg.model_in is not None:
        path = model_path(cfg.model_in, rate)
    else:
        raise ConfigError("neural evaluation needs model_in or reuse_model")
    if not path.exists():
        raise ConfigError(f"model file not found: {path}")
    return mlp.load_model(path)


def _adjudicate(code: StabilizerCode, residual: BitVec) -> bool:
    return logical_class(code, residual).is_trivial


def _audit(code: StabilizerCode, e_true: BitVec, predicted: BitVec, s: BitVec) -> None:
    if syndrome(code, predicted) != s:
        raise RuntimeError("audit failure: counted success does not reproduce the syndrome")
    residual = e_true ^ predicted
    if not syndrome(code, residual).is_zero() or not _adjudicate(code, residual):
        raise RuntimeError("audit failure: counted success has a non-trivial residual")


def evaluate_decoder(
    cfg: RunConfig,
    code: StabilizerCode,
    decoder: str,
    rate: float,
    rate_index: int,
    net: MlpDecoderNet | None = None,
    max_iter: int | None = None,
    sampling_mode: str | None = None,
    label: str | None = None,
    mode: str | None = None,
) -> EvalRecord:
    """Monte Carlo evaluation of one decoder at one rate.

    Every counted success is re-verified on a 1% audit sample. GiveUp counts
    against the corrected fraction but is tallied separately.
    """
    mode = cfg.mode if mode is None else mode
    model = DepolarizationModel(1.0 - rate)
    n = code.n_qubits
    max_iter = cfg.max_iter if max_iter is None else max_iter
    sampling_mode = cfg.sampler_mode if sampling_mode is None else sampling_mode
    if decoder == "neural" and net is None:
        raise ConfigError("internal: neural evaluation without a network")
    if mode == "z_only":
        if decoder not in ("neural", "mwpm"):
            raise ConfigError(f"z_only evaluation supports neural and mwpm, not {decoder}")
        if code.css_split is None:
            raise ConfigError("z_only evaluation requires a CSS code")
        z_rows = np.asarray(code.css_split.z_rows, dtype=np.intp)
    successes = giveups = logical_errors = 0
    iter_sum = 0.0
    started = time.perf_counter()
    for trial in range(cfg.trials):
        err_rng, dec_rng = trial_rngs(cfg.seed, rate_index, trial)
        e_bits = noise.sample_error_bits(model, n, 1, err_rng)[0]
        e_true = BitVec.from_bits(e_bits)
        s = syndrome(code, e_true)
        predicted: BitVec | None
        iterations = 1
        if decoder == "neural":
            if mode == "z_only":
                s_in = BitVec.from_bits(s.bits[z_rows])
                outcome = sampler.decode_z_only(
                    net, code, s_in, max_iter=max_iter, sampling_mode=sampling_mode, rng=dec_rng
                )
            else:
                outcome = sampler.decode(
                    net, code, s, max_iter=max_iter, sampling_mode=sampling_mode, rng=dec_rng
                )
            predicted = outcome.predicted_error
            iterations = outcome.iterations_used
        elif decoder == "mwpm":
            if mode == "z_only":
                predicted = baselines.mwpm_decode_zonly(code, BitVec.from_bits(s.bits[z_rows]))
            else:
                predicted = baselines.mwpm_decode(code, s)
        elif decoder == "ml":
            predicted = baselines.exact_ml_decode(code, s, model)
        elif decoder == "minweight":
            try:
                predicted = baselines.min_weight_decode(code, s, cfg.min_weight_cap)
            except MinWeightNotFound:
                predicted = None
        else:
            raise ConfigError(f"unknown decoder {decoder!r}")
        iter_sum += iterations
        if predicted is None:
            giveups += 1
            continue
        if mode == "z_only":
            residual_bits = np.zeros(2 * n, dtype=np.uint8)
            residual_bits[:n] = e_bits[:n] ^ predicted.bits[:n]
            residual = BitVec.from_bits(residual_bits)
        else:
            residual = e_true ^ predicted
        if _adjudicate(code, residual):
            successes += 1
            if successes % 100 == 0 and mode == "joint":
                _audit(code, e_true, predicted, s)
        else:
            logical_errors += 1
    wall = time.perf_counter() - started
    return EvalRecord(
        rate=rate,
        decoder=label or decoder,
        mode=mode,
        trials=cfg.trials,
        successes=successes,
        giveups=giveups,
        logical_errors=logical_errors,
        corrected_fraction=successes / cfg.trials,
        mean_iterations=iter_sum / cfg.trials,
        wall_time_s=wall,
        seed=cfg.seed,
    )


def run_evaluate(cfg: RunConfig, log: Callable[[str], None] = print) -> list[EvalRecord]:
    if not cfg.rates:
        raise ConfigError("evaluate needs a non-empty rates list")
    if not cfg.decoders:
        raise ConfigError("evaluate needs a non-empty decoders list")
    code = load_run_code(cfg)
    _check_size_guards(cfg, code)
    log(f"master seed: {cfg.seed}")
    records = []
    for rate_index, rate in enumerate(cfg.rates):
        net = _load_net_for_rate(cfg, rate) if "neural" in cfg.decoders else None
        for decoder in cfg.decoders:
            rec = evaluate_decoder(
                cfg, code, decoder, rate, rate_index, net=net if decoder == "neural" else None
            )
            log(f"rate={rate:.6g} decoder={rec.decoder} corrected_fraction="
                f"{rec.corrected_fraction:.6g} giveups={rec.giveups}")
            records.append(rec)
    if cfg.out:
        write_csv(records, cfg.out)
        log(f"wrote {cfg.out}")
    return records


def _check_size_guards(cfg: RunConfig, code: StabilizerCode) -> None:
    if "ml" in cfg.decoders and code.n_qubits - code.k > baselines.ML_COSET_LIMIT:
        raise SizeGuardExceeded(
            f"exact ML decoding is limited to N - k <= {baselines.ML_COSET_LIMIT}"
        )
    if "minweight" in cfg.decoders and code.n_qubits > 20:
        raise SizeGuardExceeded("brute-force minimum-weight decoding is limited to N <= 20")
    if "mwpm" in cfg.decoders and code.lattice_size is None:
        raise ConfigError("mwpm decoding requires a toric code built from lattice_size")


# ---------------------------------------------------------------------------
# compare (correlation diagnostic)


def run_compare(cfg: RunConfig, log: Callable[[str], None] = print) -> list[EvalRecord]:
    """Joint vs squared-Z-only corrected fractions for the neural and MWPM decoders.

    Emits four rows per rate; the z_only rows carry raw tallies but their
    corrected_fraction column is the squared sector fraction, which is what the
    joint value would be if the two sectors were independent.
    """
    if cfg.rates and (cfg.model_in is None or cfg.model_zonly is None):
        raise ConfigError("compare needs model_in (joint) and model_zonly (z_only) stems")
    code = load_run_code(cfg)
    if code.lattice_size is None:
        raise ConfigError("compare requires a toric code")
    log(f"master seed: {cfg.seed}")
    records = []
    for rate_index, rate in enumerate(cfg.rates):
        joint_path = model_path(cfg.model_in, rate)
        z_path = model_path(cfg.model_zonly, rate)
        for p in (joint_path, z_path):
            if not p.exists():
                raise ConfigError(f"model file not found: {p}")
        net_joint = mlp.load_model(joint_path)
        net_z = mlp.load_model(z_path)
        if net_joint.mode != "joint":
            raise ConfigError(f"{joint_path} is a {net_joint.mode} model, expected joint")
        if net_z.mode != "z_only":
            raise ConfigError(f"{z_path} is a {net_z.mode} model, expected z_only")
        rec_nj = evaluate_decoder(cfg, code, "neural", rate, rate_index, net=net_joint,
                                  mode="joint")
        rec_mj = evaluate_decoder(cfg, code, "mwpm", rate, rate_index, mode="joint")
        rec_nz = evaluate_decoder(cfg, code, "neural", rate, rate_index, net=net_z,
                                  mode="z_only", label="neural[z2]")
        rec_mz = evaluate_decoder(cfg, code, "mwpm", rate, rate_index, mode="z_only",
                                  label="mwpm[z2]")
        for rec in (rec_nz, rec_mz):
            rec.corrected_fraction = rec.corrected_fraction**2
        records.extend([rec_nj, rec_mj, rec_nz, rec_mz])
        gap_neural = rec_nj.corrected_fraction - rec_nz.corrected_fraction
        gap_mwpm = rec_mj.corrected_fraction - rec_mz.corrected_fraction
        log(
            f"rate={rate:.6g} correlation gain (joint - z_only^2): "
            f"neural={gap_neural:+.6g} mwpm={gap_mwpm:+.6g}"
        )
    if cfg.out:
        write_csv(records, cfg.out)
        log(f"wrote {cfg.out}")
    return records


# ---------------------------------------------------------------------------
# sweeps


def run_sweep(cfg: RunConfig, log: Callable[[str], None] = print) -> list[EvalRecord]:
    if cfg.sweep_axis is None:
        raise ConfigError("sweep needs sweep_axis")
    if not cfg.sweep_values:
        raise ConfigError("sweep needs sweep_values")
    if not cfg.rates:
        raise ConfigError("sweep needs a non-empty rates list")
    code = load_run_code(cfg)
    log(f"master seed: {cfg.seed}")
    records: list[EvalRecord] = []
    if cfg.sweep_axis == "max_iter":
        values = [int(v) for v in cfg.sweep_values]
        for rate_index, rate in enumerate(cfg.rates):
            net = _load_net_for_rate(cfg, rate)
            for v in values:
                records.append(
                    evaluate_decoder(
                        cfg, code, "neural", rate, rate_index, net=net,
                        max_iter=v, label=f"neural[max_iter={v}]",
                    )
                )
    elif cfg.sweep_axis == "hidden_layers":
        values = [int(v) for v in cfg.sweep_values]
        for rate_index, rate in enumerate(cfg.rates):
            for v in values:
                net = train_network(cfg, code, rate, rate_index, hidden_layers=v, log=log)
                records.append(
                    evaluate_decoder(
                        cfg, code, "neural", rate, rate_index, net=net,
                        label=f"neural[hidden_layers={v}]",
                    )
                )
    else:  # sampler_mode
        modes = [str(v) for v in cfg.sweep_values]
        for m in modes:
            if m not in (sampler.NAIVE, sampler.MESSAGE_PASSING):
                raise ConfigError(f"unknown sampler mode {m!r} in sweep_values")
        for rate_index, rate in enumerate(cfg.rates):
            net = _load_net_for_rate(cfg, rate)
            for m in modes:
                records.append(
                    evaluate_decoder(
                        cfg, code, "neural", rate, rate_index, net=net,
                        sampling_mode=m, label=f"neural[{m}]",
                    )
                )
            untrained = _untrained_like(cfg, code, rate, rate_index)
            records.append(
                evaluate_decoder(
                    cfg, code, "neural", rate, rate_index, net=untrained,
                    sampling_mode=sampler.MESSAGE_PASSING,
                    label=f"neural[{sampler.MESSAGE_PASSING},untrained]",
                )
            )
    for rec in records:
        log(f"rate={rec.rate:.6g} {rec.decoder}: corrected_fraction="
            f"{rec.corrected_fraction:.6g} mean_iterations={rec.mean_iterations:.6g}")
    if cfg.out:
        write_csv(records, cfg.out)
        log(f"wrote {cfg.out}")
    return records


def _untrained_like(
    cfg: RunConfig, code: StabilizerCode, rate: float, rate_index: int
) -> MlpDecoderNet:
    model = DepolarizationModel(1.0 - rate)
    stats_rng = _child_rng(cfg.seed, rate_index, _MODE_TAG[cfg.mode], _SK_STATS)
    stats = noise.stats_for_code(code, model, stats_rng)
    net_seed = _child_seed(cfg.seed, rate_index, _MODE_TAG[cfg.mode], _SK_NET)
    mlp_cfg = build_mlp_config(cfg, code, cfg.mode, net_seed)
    return mlp.init_net(
        mlp_cfg, stats, model.fidelity, mode=cfg.mode, lattice_size=cfg.lattice_size or 0
    )
