"""Estimating the noise and signal powers needed for tuning.

Tuning (eps, C) in practice requires sigma^2 and beta^2.  With more
samples than features (delta > 1), the normalized residual of the
least-squares fit estimates the effective noise variance sigma^2 E N^2,
and y'y/n - sigma2_hat estimates beta^2.  Both concentrate as p grows.
"""

import numpy as np

from svrisk import (
    estimate_noise_signal,
    generate_dataset,
    noise_second_moment,
    scale_mixture,
    standard_gaussian,
)

print("Gaussian noise, sigma = 1, beta = 1, delta = 2:")
print(f"{'p':>5} {'sigma2_hat':>11} {'beta2_hat':>10}")
for p in (50, 200, 800):
    s2s, b2s = [], []
    for seed in range(10):
        data = generate_dataset(p, 2.0, 1.0, 1.0, standard_gaussian(), seed=seed)
        s2, b2 = estimate_noise_signal(data.features, data.responses)
        s2s.append(s2)
        b2s.append(b2)
    print(f"{p:5d} {np.mean(s2s):11.4f} {np.mean(b2s):10.4f}")

noise = scale_mixture(10.0)
print(f"\nheavy-tailed noise (d = 10): the residual sees the effective variance"
      f" sigma^2 E N^2 = {noise_second_moment(noise):.4f}:")
s2s = []
for seed in range(10):
    data = generate_dataset(400, 2.0, 1.0, 1.0, noise, seed=seed)
    s2, _ = estimate_noise_signal(data.features, data.responses)
    s2s.append(s2)
print(f"  sigma2_hat (p=400, mean of 10 seeds) = {np.mean(s2s):.4f}")

print("\nunderdetermined data (delta < 1) is rejected:")
data = generate_dataset(60, 0.5, 1.0, 1.0, standard_gaussian(), seed=0)
try:
    estimate_noise_signal(data.features, data.responses)
except ValueError as exc:
    print(f"  {type(exc).__name__}: {exc}")
