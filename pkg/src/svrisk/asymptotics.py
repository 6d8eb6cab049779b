"""Deterministic scalar problems for the high-dimensional SVR limits.

Solves, for a given sample ratio delta = n/p, noise scale sigma, signal
norm beta and tube half-width eps:

- the hard-margin feasibility threshold delta_star (1-D convex
  minimization) and its inverse epsilon_star;
- the hard-SVR limiting risk: minimize (g2 - beta/sigma)^2/2 + g1^2/2
  subject to D(g1, g2) <= 0 where
  D(g1, g2) = sqrt(delta) * sqrt(E (|sqrt(g1^2+g2^2) G + N| - eps/sigma)_+^2) - g1;
- the soft-SVR limiting risk: min over (g1, g2) of sup over chi > 0 of
  the saddle function Dbar (concave in chi, convex in (g1, g2));
- hyperparameter tuning (optimal eps, and jointly optimal (eps, C)).

(g1, g2) are the error-vector norms orthogonal to / along the ground
truth, scaled by 1/sigma, so the limiting risk is sigma^2 (g1^2 + g2^2).
All routines are pure and deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .expectations import (
    DEFAULT_QUAD,
    e_hinge_abs,
    e_hinge_sq,
    hinge_sq_mean,
    soft_expectation,
)
from .noise import NoiseModel, standard_gaussian
from .scalar_opt import bisect_root, golden_section_min

_COSINE_FLOOR = 1e-6  # below this error norm the cosine limit is 0/0
_T_CAP = 1e12
_G1_CAP = 1e6


@dataclass(frozen=True)
class HsvrProblem:
    """Asymptotic hard-SVR instance: delta = n/p, noise scale, signal norm,
    tube half-width, noise law."""

    delta: float
    sigma: float
    beta: float
    eps: float
    noise: NoiseModel = field(default_factory=standard_gaussian)

    def __post_init__(self):
        if self.delta <= 0 or self.sigma <= 0 or self.beta <= 0:
            raise ValueError("delta, sigma, beta must be strictly positive")
        if self.eps < 0:
            raise ValueError("eps must be nonnegative")


@dataclass(frozen=True)
class SsvrProblem(HsvrProblem):
    """Soft-SVR instance: hard-SVR fields plus the slack weight C."""

    cost: float = 1.0

    def __post_init__(self):
        super().__post_init__()
        if self.cost <= 0:
            raise ValueError("cost must be strictly positive")


@dataclass(frozen=True)
class AsymptoticSolution:
    """Solution of a scalar risk problem.

    risk = sigma^2 (g1^2 + g2^2) when feasible; cosine is None when the
    limit is 0/0 (error norm below ~1e-6).  chi is the saddle variable of
    the soft problem (None for hard).  diagnostics carries solver residuals.
    """

    g1: float | None
    g2: float | None
    risk: float | None
    cosine: float | None
    feasible: bool
    chi: float | None = None
    diagnostics: dict = field(default_factory=dict)


def _cosine_limit(g1, g2, b_over_sigma):
    den = math.hypot(g1, g2 - b_over_sigma)
    if den < _COSINE_FLOOR:
        return None
    return (b_over_sigma - g2) / den


# ---------------------------------------------------------------------------
# Feasibility threshold.
# ---------------------------------------------------------------------------

def delta_star(eps, sigma, noise=None, quad=DEFAULT_QUAD):
    """Hard-margin feasibility threshold 1 / inf_t E (|G + t*sigma*N| - t*eps)_+^2.

    The objective is convex in t and even under t -> -t for symmetric
    noise, so the search runs over t >= 0 on a geometrically expanded
    bracket.  Returns math.inf when the infimum is numerically zero
    (noiseless limit with eps > 0: every delta is feasible).
    """
    if sigma <= 0:
        raise ValueError("sigma must be strictly positive")
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    noise = noise or standard_gaussian()

    def objective(t):
        return hinge_sq_mean(1.0, t * sigma, t * eps, noise, quad)

    if eps == 0.0:
        # E(G + t sigma N)^2 = 1 + (t sigma)^2 E N^2, minimized at t = 0
        return 1.0
    hi = 1.0
    f_half = objective(0.5)
    f_hi = objective(hi)
    while f_hi <= f_half and hi < _T_CAP:
        hi *= 2.0
        f_half = f_hi
        f_hi = objective(hi)
    _, fmin = golden_section_min(objective, 0.0, hi, tol=1e-11 * max(1.0, hi))
    if fmin < 1e-13:
        return math.inf
    return 1.0 / fmin


def epsilon_star(delta, sigma, noise=None, quad=DEFAULT_QUAD):
    """Smallest tube half-width making sample ratio ``delta`` feasible.

    Inverts the strictly increasing map eps -> delta_star(eps, sigma).
    For delta <= 1 every eps >= 0 is feasible, so the threshold is 0.
    """
    if delta <= 1.0:
        return 0.0
    noise = noise or standard_gaussian()

    def gap(eps):
        return delta_star(eps, sigma, noise, quad) - delta

    lo, hi = 0.0, max(sigma, 1e-3)
    g_hi = gap(hi)
    while g_hi <= 0.0:
        hi *= 2.0
        if hi > 1e9 * sigma:
            raise RuntimeError("epsilon_star bracket expansion failed")
        g_hi = gap(hi)
    return bisect_root(gap, lo, hi, f_lo=-delta + 1.0, f_hi=g_hi,
                       tol=1e-9 * max(1.0, hi))


# ---------------------------------------------------------------------------
# Hard-SVR risk.
# ---------------------------------------------------------------------------

def d_value(g1, g2, prob: HsvrProblem, quad=DEFAULT_QUAD):
    """Constraint function D(g1, g2); the feasible region is {D <= 0}.

    Jointly convex, even in g2, and D(0, g2) >= 0 for every g2.
    """
    s = math.hypot(g1, g2)
    c = prob.eps / prob.sigma
    return math.sqrt(prob.delta) * math.sqrt(
        max(e_hinge_sq(s, c, prob.noise, quad), 0.0)
    ) - g1


def _g1_lower_edge(prob, g2, quad):
    """Smallest feasible g1 at fixed g2, or None if the g2-slice is infeasible.

    D(., g2) is convex with D(0, g2) >= 0: minimize it (expanding the
    bracket geometrically), then bisect for the left root.
    """

    def f(g1):
        return d_value(g1, g2, prob, quad)

    f0 = f(0.0)
    if f0 <= 0.0:
        return 0.0
    hi = 1.0
    f_half = f(0.5)
    f_hi = f(hi)
    while f_hi <= f_half and f_hi > 0.0 and hi < _G1_CAP:
        hi *= 2.0
        f_half = f_hi
        f_hi = f(hi)
    if f_hi > 0.0:
        g1m, fm = golden_section_min(f, 0.0, hi, tol=1e-12 * max(1.0, hi))
        if fm > 0.0:
            return None
        hi = g1m
        f_hi = fm
    return bisect_root(f, 0.0, hi, f_lo=f0, f_hi=f_hi, tol=1e-13 * max(1.0, hi))


def hsvr_risk(prob: HsvrProblem, quad=DEFAULT_QUAD):
    """Limiting hard-SVR prediction risk and cosine similarity.

    Feasible only for delta < delta_star(eps, sigma).  The inner search
    finds the smallest feasible g1 at each g2 (the g1-objective is
    g1^2/2, so the lower edge of the feasible interval is optimal); the
    outer golden-section runs over g2 in [0, beta/sigma], restricted to
    the sub-interval where a feasible g1 exists.  At the optimum the
    constraint is active: |D(g1*, g2*)| <= 1e-7.
    """
    dstar = delta_star(prob.eps, prob.sigma, prob.noise, quad)
    if not prob.delta < dstar:
        return AsymptoticSolution(None, None, None, None, False,
                                  diagnostics={"delta_star": dstar})
    b = prob.beta / prob.sigma

    def lower_edge(g2):
        return _g1_lower_edge(prob, g2, quad)

    g2_hi = b
    if lower_edge(b) is None:
        # feasible g2 range shrinks near the threshold; bisect its edge
        g2_hi = bisect_root(
            lambda g2: -1.0 if lower_edge(g2) is not None else 1.0,
            0.0, b, f_lo=-1.0, f_hi=1.0, tol=1e-12 * max(1.0, b))
        g2_hi = max(g2_hi * (1.0 - 1e-9) - 1e-15, 0.0)
        while lower_edge(g2_hi) is None and g2_hi > 0.0:
            g2_hi *= 0.999

    def objective(g2):
        g1 = lower_edge(g2)
        if g1 is None:
            return math.inf
        return 0.5 * g1 * g1 + 0.5 * (g2 - b) ** 2

    g2_opt, _ = golden_section_min(objective, 0.0, g2_hi, tol=1e-10 * max(1.0, b))
    g1_opt = lower_edge(g2_opt)
    if g1_opt is None:  # numerical edge: fall back to the certified endpoint
        g2_opt = 0.0
        g1_opt = lower_edge(0.0)
    risk = prob.sigma ** 2 * (g1_opt ** 2 + g2_opt ** 2)
    return AsymptoticSolution(
        g1=g1_opt, g2=g2_opt, risk=risk,
        cosine=_cosine_limit(g1_opt, g2_opt, b),
        feasible=True,
        diagnostics={
            "delta_star": dstar,
            "d_residual": d_value(g1_opt, g2_opt, prob, quad),
        },
    )


# ---------------------------------------------------------------------------
# Soft-SVR risk.
# ---------------------------------------------------------------------------

def dbar_value(g1, g2, chi, prob: SsvrProblem, quad=DEFAULT_QUAD):
    """Saddle function of the soft problem at (g1 > 0, g2, chi > 0).

    Concave in chi for fixed (g1, g2); its sup over chi is jointly convex
    in (g1, g2).  The g1 = 0 slice is handled by ``_dbar_g1_zero``.
    """
    if chi <= 0.0:
        raise ValueError("chi must be positive")
    if g1 <= 0.0:
        raise ValueError("g1 must be positive; use the g1 = 0 branch")
    sigma = prob.sigma
    thr = prob.eps / sigma
    b = prob.beta / sigma
    expect = soft_expectation(g1, g2, chi, prob.cost, thr, prob.noise, quad)
    return (prob.delta / sigma) * expect - g1 * chi / (2.0 * sigma) \
        + 0.5 * g1 * g1 + 0.5 * (g2 - b) ** 2


def _dbar_g1_zero(g2, prob, quad):
    """sup over chi of Dbar on the g1 = 0 boundary (chi drops out)."""
    sigma = prob.sigma
    thr = prob.eps / sigma
    b = prob.beta / sigma
    return (prob.cost * prob.delta / sigma) * e_hinge_abs(abs(g2), thr, prob.noise, quad) \
        + 0.5 * (g2 - b) ** 2


def _sup_chi(g1, g2, prob, quad, chi_hint=1.0, log_tol=1e-6):
    """Inner concave maximization over chi on an adaptively located bracket."""

    def f(chi):
        return dbar_value(g1, g2, chi, prob, quad)

    lo = max(chi_hint / 64.0, 1e-9)
    hi = chi_hint * 64.0
    f_lo, f_mid, f_hi = f(lo), f(chi_hint), f(hi)
    while f_hi >= f_mid and hi < 1e15:
        lo, f_lo = chi_hint, f_mid
        chi_hint, f_mid = hi, f_hi
        hi *= 64.0
        f_hi = f(hi)
    while f_lo >= f_mid and lo > 1e-15:
        hi, f_hi = chi_hint, f_mid
        chi_hint, f_mid = lo, f_lo
        lo /= 64.0
        f_lo = f(lo)
    # golden search in log-chi (concavity in chi implies unimodality here)
    llo, lhi = math.log(lo), math.log(hi)
    lx, val = golden_section_min(lambda t: -f(math.exp(t)), llo, lhi, tol=log_tol)
    return math.exp(lx), -val


def ssvr_risk(prob: SsvrProblem, quad=DEFAULT_QUAD, tol=1e-8):
    """Limiting soft-SVR risk via the min-sup scalar saddle problem.

    Minimizes the convex value function V(g1, g2) = sup_chi Dbar by
    nesting golden-section searches: the inner search fully minimizes
    the convex g1-slice (bracket expanded geometrically, g1 = 0 handled
    by its exact branch), the outer search runs over g2 in [0, beta/sigma].
    Nesting, rather than alternating coordinate steps, is required
    because for large C the value function develops a steep oblique
    band along which alternating updates stall.  Always feasible.
    """
    b = prob.beta / prob.sigma
    chi_memo = {"chi": 1.0}
    sup_tol = min(max(0.1 * math.sqrt(tol), 1e-6), 1e-3)

    def value(g1, g2):
        if g1 <= 0.0:
            return _dbar_g1_zero(g2, prob, quad)
        chi, val = _sup_chi(g1, g2, prob, quad, chi_hint=chi_memo["chi"],
                            log_tol=sup_tol)
        chi_memo["chi"] = chi
        return val

    g1_memo = {"g1": 1.0}
    evals = {"n": 0}

    def inner_min(g2):
        def f(g1):
            evals["n"] += 1
            return value(g1, g2)

        hi = max(2.0 * g1_memo["g1"], 0.5)
        f_half, f_hi = f(hi / 2.0), f(hi)
        while f_hi <= f_half and hi < _G1_CAP:
            hi *= 2.0
            f_half, f_hi = f_hi, f(hi)
        g1, v = golden_section_min(f, 0.0, hi, tol=tol * max(1.0, hi / 4.0))
        v0 = value(0.0, g2)
        if v0 < v:
            g1, v = 0.0, v0
        else:
            g1_memo["g1"] = max(g1, 1e-3)
        return g1, v

    def outer(g2):
        return inner_min(g2)[1]

    g2o, v_opt = golden_section_min(outer, 0.0, b, tol=tol * max(1.0, b))
    g1o, v_opt = inner_min(g2o)
    chi_opt = None
    if g1o > 0.0:
        chi_opt, _ = _sup_chi(g1o, g2o, prob, quad, chi_hint=chi_memo["chi"])
    risk = prob.sigma ** 2 * (g1o ** 2 + g2o ** 2)
    return AsymptoticSolution(
        g1=g1o, g2=g2o, risk=risk,
        cosine=_cosine_limit(g1o, g2o, b),
        feasible=True, chi=chi_opt,
        diagnostics={"value": v_opt, "value_evals": evals["n"]},
    )


# ---------------------------------------------------------------------------
# Hyperparameter tuning.
# ---------------------------------------------------------------------------

def tune_hsvr(delta, sigma, beta, noise=None, quad=DEFAULT_QUAD, eps_cap=None):
    """Tube half-width minimizing the limiting hard-SVR risk.

    Searches eps on (epsilon_star(delta) + margin, eps_max), expanding
    eps_max geometrically until the risk curve has turned upward (the
    risk tends to the null value beta^2 as eps -> inf, so a cap guards
    heavy-tailed cases whose optimum is effectively at infinity).
    Returns (eps_opt, risk_opt).
    """
    noise = noise or standard_gaussian()
    eps_lo = 0.0
    if delta > 1.0:
        e_star = epsilon_star(delta, sigma, noise, quad)
        eps_lo = e_star + max(1e-3 * sigma, 1e-2 * e_star)

    def risk_at(eps):
        sol = hsvr_risk(HsvrProblem(delta, sigma, beta, eps, noise), quad)
        return sol.risk if sol.feasible else math.inf

    cap = eps_cap if eps_cap is not None else 400.0 * sigma
    hi = max(2.0 * eps_lo, sigma)
    f_prev, f_hi = risk_at(max(eps_lo, hi / 2.0)), risk_at(hi)
    while f_hi <= f_prev and hi < cap:
        hi *= 2.0
        f_prev = f_hi
        f_hi = risk_at(hi)
    eps_opt, risk_opt = golden_section_min(risk_at, eps_lo, min(hi, cap),
                                           tol=1e-7 * max(1.0, hi))
    return eps_opt, risk_opt


def tune_ssvr(delta, sigma, beta, noise=None, quad=DEFAULT_QUAD,
              eps_grid=None, cost_grid=None, refine_iters=2):
    """Jointly tune (eps, C) for the soft problem.

    Coarse log-spaced grid scan (run at a relaxed inner tolerance — the
    risk surface is flat near its minimum) followed by coordinate
    golden-section refinement around the best cell.  The returned risk
    never exceeds any coarse-grid risk.  Returns (eps_opt, cost_opt,
    risk_opt).
    """
    noise = noise or standard_gaussian()
    if eps_grid is None:
        eps_grid = [0.05 * sigma * 4.0 ** j for j in range(6)]  # 0.05..51.2 sigma
    if cost_grid is None:
        cost_grid = [0.05 * 4.0 ** j for j in range(6)]

    scan_tol = 1e-3  # the risk surface is quadratically flat near its min

    def risk_at(eps, cost, tol=scan_tol):
        prob = SsvrProblem(delta, sigma, beta, max(eps, 0.0), noise, cost=max(cost, 1e-8))
        return ssvr_risk(prob, quad, tol=tol).risk

    best = None
    for e in eps_grid:
        for c in cost_grid:
            r = risk_at(e, c)
            if best is None or r < best[2]:
                best = (e, c, r)

    # log-space coordinate refinement with a diagonal pattern step each round
    le, lc = math.log(best[0]), math.log(best[1])
    v = best[2]
    span = math.log(4.0)
    for it in range(refine_iters):
        le_prev, lc_prev = le, lc
        le, v = golden_section_min(lambda t: risk_at(math.exp(t), math.exp(lc)),
                                   le - span, le + span, tol=1e-2)
        lc, v = golden_section_min(lambda t: risk_at(math.exp(le), math.exp(t)),
                                   lc - span, lc + span, tol=1e-2)
        d_e, d_c = le - le_prev, lc - lc_prev
        if abs(d_e) + abs(d_c) > 1e-9:
            t_best, v_t = golden_section_min(
                lambda t: risk_at(math.exp(le + t * d_e), math.exp(lc + t * d_c)),
                0.0, 6.0, tol=5e-2)
            if v_t < v:
                le, lc, v = le + t_best * d_e, lc + t_best * d_c, v_t
        span /= 3.0

    eps_o, cost_o = math.exp(le), math.exp(lc)
    risk_o = risk_at(eps_o, cost_o, 1e-7)
    best_final = risk_at(best[0], best[1], 1e-7)
    if best_final < risk_o:
        return best[0], best[1], best_final
    return eps_o, cost_o, risk_o
