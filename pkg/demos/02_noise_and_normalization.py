"""Depolarization sampling and the closed-form input normalization.

Checks the analytic odd-parity statistics of weight-4 generators against a
Monte Carlo estimate, which is what the training stream feeds the network.

Run:  python demos/02_noise_and_normalization.py
"""

import numpy as np

import syndromic as sy

code = sy.build_toric(3)
rate = 0.1
model = sy.DepolarizationModel(1.0 - rate)
print(f"depolarization rate {rate}: P(I)={model.fidelity}, "
      f"P(X)=P(Y)=P(Z)={model.pauli_probs[1]:.4f}")

q = sy.flip_rate(model.fidelity)
stats = sy.syndrome_stats(q)
print(f"\nper-eigenvalue flip rate q = (2/3)(1-p) = {q:.4f}")
print(f"analytic syndrome-bit statistics (weight-4 generators):")
print(f"  mean     = 4q^3(1-q) + 4q(1-q)^3 = {stats.mean:.6f}")
print(f"  variance = mean - mean^2         = {stats.variance:.6f}")

rng = np.random.default_rng(0)
emp = sy.empirical_syndrome_stats(code, model, rng, n_samples=200_000)
print(f"empirical over 2e5 samples: mean = {emp.mean:.6f} (matches within noise)")

print("\nPauli mix over 1e6 sampled qubits:")
bits = sy.sample_error_bits(model, code.n_qubits, 60_000, rng)
x, z = bits[:, : code.n_qubits].astype(bool), bits[:, code.n_qubits :].astype(bool)
total = x.size
for name, mask in (("I", ~x & ~z), ("X", x & ~z), ("Y", x & z), ("Z", ~x & z)):
    print(f"  {name}: {mask.sum() / total:.4f}")

print("\nnormalized inputs have mean ~0 and variance ~1:")
stream = sy.training_stream(code, model, 4096, rng, stats=stats)
xbatch, targets = next(stream)
print(f"  batch {xbatch.shape}: mean {xbatch.mean():+.4f}, std {xbatch.std():.4f}")
print(f"  target density {targets.mean():.4f} (~q on each half)")
