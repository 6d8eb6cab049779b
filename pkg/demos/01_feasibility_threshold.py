"""Where does the hard tube stop being satisfiable?

The hard estimator requires every residual inside a tube of half-width
eps.  As the sample ratio delta = n/p grows, that eventually becomes
impossible; the threshold delta_star depends only on eps and the noise
scale -- not on the signal strength.  This script tabulates the
threshold curve, shows the (eps, sigma) scale invariance, and inverts
the map to find the smallest workable eps at a given delta.
"""

import numpy as np

from svrisk import delta_star, epsilon_star, scale_mixture, standard_gaussian

gauss = standard_gaussian()

print("threshold vs tube half-width (Gaussian noise)")
print(f"{'eps':>6} " + " ".join(f"sigma={s:<4}" for s in (0.1, 0.2, 0.5, 1.0)))
for eps in np.arange(0.0, 1.01, 0.1):
    row = [delta_star(eps, s, gauss) for s in (0.1, 0.2, 0.5, 1.0)]
    print(f"{eps:6.2f} " + " ".join(f"{v:9.4f}" for v in row))

print("\nonly eps/sigma matters:")
print("  delta_star(0.1, 0.1) =", delta_star(0.1, 0.1, gauss))
print("  delta_star(0.2, 0.2) =", delta_star(0.2, 0.2, gauss))

print("\nzero tube width reduces to plain interpolation: threshold = 1")
print("  delta_star(0, 1) =", delta_star(0.0, 1.0, gauss))

print("\nsmallest eps making delta = 3 feasible (sigma = 1):")
eps3 = epsilon_star(3.0, 1.0, gauss)
print(f"  eps* = {eps3:.6f}, check delta_star(eps*) = {delta_star(eps3, 1.0, gauss):.6f}")

print("\nheavy-tailed noise shrinks the feasible region at the same variance scale:")
for d in (3.0, 10.0):
    print(f"  d={d:4}: delta_star(1, 1) = {delta_star(1.0, 1.0, scale_mixture(d)):.4f}"
          f"   (Gaussian: {delta_star(1.0, 1.0, gauss):.4f})")
