"""Slack weight and tube width both matter for the soft estimator.

The soft estimator trades tube violations against weight norm through
the penalty C/p per unit of slack.  Its limiting risk comes from a
two-variable convex problem with an inner concave maximization; this
script scans C at a fixed tube width (showing the cusp that builds up
near the hard threshold as C grows), shows the soft-to-hard limit, and
jointly tunes (eps, C).
"""

from svrisk import (
    HsvrProblem,
    SsvrProblem,
    delta_star,
    hsvr_risk,
    ssvr_risk,
    standard_gaussian,
    tune_ssvr,
)

gauss = standard_gaussian()

print("risk limit vs C at delta = 2, eps = 0.6 (sigma = beta = 1):")
print(f"{'C':>8} {'risk':>9} {'g1':>8} {'g2':>8} {'chi':>9}")
for cost in (0.1, 0.5, 2.4, 10.0, 100.0):
    sol = ssvr_risk(SsvrProblem(2.0, 1.0, 1.0, 0.6, gauss, cost=cost))
    print(f"{cost:8.2f} {sol.risk:9.5f} {sol.g1:8.4f} {sol.g2:8.4f} {sol.chi:9.4f}")

print("\nsoft -> hard as C grows (delta = 1.5, eps = 1 is hard-feasible:")
print(f"  delta_star(1,1) = {delta_star(1.0, 1.0, gauss):.4f})")
hard = hsvr_risk(HsvrProblem(1.5, 1.0, 1.0, 1.0, gauss))
print(f"  hard risk          = {hard.risk:.8f}")
for cost in (10.0, 1e3, 1e6):
    soft = ssvr_risk(SsvrProblem(1.5, 1.0, 1.0, 1.0, gauss, cost=cost))
    print(f"  soft risk C={cost:<7.0e}= {soft.risk:.8f}")

print("\njoint tuning of (eps, C) at delta = 2:")
eps_o, cost_o, risk_o = tune_ssvr(2.0, 1.0, 1.0, gauss)
print(f"  eps_opt = {eps_o:.4f}, C_opt = {cost_o:.4f}, risk_opt = {risk_o:.5f}")
print(f"  (compare the fixed-parameter point above at C = 2.4)")
