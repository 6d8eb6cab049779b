"""Scalar minimization/maximization and root bracketing helpers.

Small, deterministic routines used throughout the asymptotic calculators:
golden-section search on unimodal functions, geometric bracket expansion,
and bisection root finding.  No randomness, no global state.
"""

from __future__ import annotations

import math

INVPHI = (math.sqrt(5.0) - 1.0) / 2.0  # 1/phi
INVPHI2 = (3.0 - math.sqrt(5.0)) / 2.0  # 1/phi^2


def golden_section_min(f, lo, hi, tol=1e-10, max_iter=400):
    """Minimize a unimodal ``f`` on [lo, hi].

    Returns (x, f(x)).  ``tol`` is an absolute tolerance on the final
    interval width (a relative floor of ~1e-14*|x| guards huge brackets).
    """
    a, b = float(lo), float(hi)
    if b < a:
        a, b = b, a
    h = b - a
    if h <= tol:
        x = 0.5 * (a + b)
        return x, f(x)
    c = a + INVPHI2 * h
    d = a + INVPHI * h
    fc = f(c)
    fd = f(d)
    for _ in range(max_iter):
        if h <= tol + 1e-14 * (abs(a) + abs(b)):
            break
        if fc < fd:
            b, d, fd = d, c, fc
            h = b - a
            c = a + INVPHI2 * h
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            h = b - a
            d = a + INVPHI * h
            fd = f(d)
    if fc < fd:
        return c, fc
    return d, fd


def golden_section_max(f, lo, hi, tol=1e-10, max_iter=400):
    """Maximize a unimodal ``f`` on [lo, hi]; returns (x, f(x))."""
    x, fneg = golden_section_min(lambda t: -f(t), lo, hi, tol=tol, max_iter=max_iter)
    return x, -fneg


def expand_bracket_min(f, x0=1.0, grow=2.0, cap=1e12):
    """Expand the right endpoint until ``f`` has started to increase.

    For a convex ``f`` on [0, inf) this certifies the minimizer lies in
    [0, hi].  Returns (hi, f(hi), exhausted) where ``exhausted`` means the
    cap was hit while f was still decreasing (minimum possibly at +inf).
    """
    hi = float(x0)
    f_prev = f(hi / grow)
    f_hi = f(hi)
    while f_hi <= f_prev and hi < cap:
        hi *= grow
        f_prev = f_hi
        f_hi = f(hi)
    return hi, f_hi, f_hi <= f_prev


def bisect_root(f, lo, hi, f_lo=None, f_hi=None, tol=1e-13, max_iter=200):
    """Root of ``f`` on [lo, hi] by bisection; f(lo), f(hi) must differ in sign.

    Tolerance is absolute on the interval width with a small relative floor.
    """
    a, b = float(lo), float(hi)
    fa = f(a) if f_lo is None else f_lo
    fb = f(b) if f_hi is None else f_hi
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if fa * fb > 0.0:
        raise ValueError("bisect_root: no sign change on the bracket")
    for _ in range(max_iter):
        m = 0.5 * (a + b)
        if (b - a) <= tol + 1e-15 * (abs(a) + abs(b)):
            return m
        fm = f(m)
        if fm == 0.0:
            return m
        if fa * fm < 0.0:
            b, fb = m, fm
        else:
            a, fa = m, fm
    return 0.5 * (a + b)
