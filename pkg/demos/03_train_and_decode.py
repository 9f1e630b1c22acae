"""Train a small decoder network and watch it decode.

A short run (6000 batches, ~20 s) is enough for the L=3 toric code to see the
loss fall and the sampling decoder come alive. The evaluation harness defaults
are larger; this is a taste.

Run:  python demos/03_train_and_decode.py
"""

import numpy as np

import syndromic as sy

L, rate = 3, 0.1
code = sy.build_toric(L)
model = sy.DepolarizationModel(1.0 - rate)
stats = sy.stats_for_code(code, model)

cfg = sy.MlpConfig(
    input_width=code.n_checks,
    output_width=2 * code.n_qubits,
    hidden_layers=4,          # hidden width defaults to 4x input
    seed=1,
    lr0=2.0,
    lr_decay=0.5,
    lr_period=750,
)
net = sy.init_net(cfg, stats, model.fidelity, lattice_size=L)
stream = sy.training_stream(code, model, 512, np.random.default_rng(0), stats=stats)

print(f"training {cfg.input_width}->{cfg.resolved_hidden_width}x{cfg.hidden_layers}"
      f"->{cfg.output_width} on on-the-fly pairs:")
sy.train(net, stream, 6000, cfg, log_every=1000)

print("\ndecoding a fresh error:")
rng = np.random.default_rng(42)
e_true = sy.sample_error(model, code.n_qubits, rng)
s = sy.syndrome(code, e_true)
print(f"  true error supports: {[int(i) for i in e_true.support()]}")
print(f"  syndrome defects:    {[int(i) for i in s.support()]}")

marginals = sy.forward(net, sy.normalize_syndrome(s, stats))
top = np.argsort(marginals)[::-1][:4]
print(f"  top network marginals: {[(int(i), round(float(marginals[i]), 3)) for i in top]}")

outcome = sy.decode(net, code, s, max_iter=1000, rng=rng)
print(f"  decode: {outcome.status} after {outcome.iterations_used} iteration(s)")
residual = e_true ^ outcome.predicted_error
cls = sy.logical_class(code, residual)
print(f"  residual class bits {cls.class_bits} -> "
      f"{'properly decoded' if cls.is_trivial else 'logical error'}")

print("\nsmall Monte Carlo (500 trials) against the matching baseline:")
wins = {"neural": 0, "mwpm": 0}
for i in range(500):
    r = np.random.default_rng(10_000 + i)
    e = sy.sample_error(model, code.n_qubits, r)
    s = sy.syndrome(code, e)
    o = sy.decode(net, code, s, max_iter=1000, rng=np.random.default_rng(20_000 + i))
    if o.succeeded and sy.logical_class(code, e ^ o.predicted_error).is_trivial:
        wins["neural"] += 1
    if sy.logical_class(code, e ^ sy.mwpm_decode(code, s)).is_trivial:
        wins["mwpm"] += 1
for name, w in wins.items():
    print(f"  {name:7s} corrected fraction: {w / 500:.3f}")
print("(longer training, as in the acceptance suite, pushes the network ahead)")
