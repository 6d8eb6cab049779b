"""Deterministic evaluation of the Gaussian/noise expectation functionals.

Everything here reduces to expectations of piecewise-polynomial functions of
V = s*G + a*N with G standard normal and N from a ``NoiseModel``:

- hinge-square   E (|V| - c)_+^2
- hinge          E (|V| - c)_+
- huberized hinge E rho_k((|V| - c)_+), rho_k(t) = t^2/2 for t <= k,
  k*t - k^2/2 beyond (the two-branch integrand of the soft-margin saddle
  function collapses to this form)

For Gaussian noise V is normal and every value has a closed form through
the normal cdf.  For the scale mixture we condition on N = x (the inner
Gaussian integral stays closed-form), integrate x over the Student-t
density with panelled Gauss-Legendre on a kink-aware grid, and add the
polynomial tail analytically via Student-t partial moments.  Monte Carlo
is never used; results are deterministic to ~abs_tol.

Also included: exact values of two small deterministic maximizations used
as numeric oracles elsewhere (sphere-constrained and box-constrained
soft-thresholded linear forms).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import gammaln, ndtr, stdtr

from .noise import noise_pdf
from .scalar_opt import golden_section_max

_SQRT2PI = math.sqrt(2.0 * math.pi)
_ZMAX = 39.0  # beyond this phi underflows to exactly 0.0 in float64
_ZTAIL = 16.0  # conditional == asymptote to ~exp(-128) past this many sigmas


@dataclass(frozen=True)
class QuadratureSpec:
    """Node counts and accuracy target for the expectation integrals.

    gauss_nodes_G: Gauss-Legendre nodes per panel in the G direction
        (only exercised by the all-numeric cross-check path; the
        production path integrates G in closed form).
    mixture_nodes: nodes per panel for the noise-direction integral.
    abs_tol: target absolute accuracy; doubling node counts must move
        results by less than this.
    split_points: extra user split locations merged into the noise-axis
        panel grid (kinks are located automatically).
    """

    gauss_nodes_G: int = 64
    mixture_nodes: int = 20
    abs_tol: float = 1e-9
    split_points: tuple = ()

    def __post_init__(self):
        if self.gauss_nodes_G < 32:
            raise ValueError("gauss_nodes_G must be >= 32")
        if not (0 < self.abs_tol <= 1e-8):
            raise ValueError("abs_tol must be in (0, 1e-8]")
        if self.mixture_nodes < 8:
            raise ValueError("mixture_nodes must be >= 8")


DEFAULT_QUAD = QuadratureSpec()


def _phi(z):
    return np.exp(-0.5 * z * z) / _SQRT2PI


def _clip(z):
    return np.clip(z, -_ZMAX, _ZMAX)


# ---------------------------------------------------------------------------
# Closed forms for V ~ N(mu, s^2); mu may be an array, s, c, k scalars.
# ---------------------------------------------------------------------------

def gauss_hinge_sq(mu, s, c):
    """E (|V| - c)_+^2 for V ~ N(mu, s^2)."""
    mu = np.asarray(mu, dtype=float)
    if s == 0.0:
        return np.maximum(np.abs(mu) - c, 0.0) ** 2
    za = _clip((c - mu) / s)
    i0 = ndtr(-za)
    e1 = _phi(za)
    e2 = i0 + za * e1
    m = mu - c
    p1 = m * m * i0 + 2.0 * m * s * e1 + s * s * e2

    zb = _clip((-c - mu) / s)
    i0 = ndtr(zb)
    pb = _phi(zb)
    e2 = i0 - zb * pb
    m = mu + c
    p2 = m * m * i0 - 2.0 * m * s * pb + s * s * e2
    return p1 + p2


def gauss_hinge_abs(mu, s, c):
    """E (|V| - c)_+ for V ~ N(mu, s^2)."""
    mu = np.asarray(mu, dtype=float)
    if s == 0.0:
        return np.maximum(np.abs(mu) - c, 0.0)
    za = _clip((c - mu) / s)
    p1 = (mu - c) * ndtr(-za) + s * _phi(za)
    zb = _clip((-c - mu) / s)
    p2 = -(mu + c) * ndtr(zb) + s * _phi(zb)
    return p1 + p2


def gauss_hinge_huber(mu, s, c, k):
    """E rho_k((|V| - c)_+) for V ~ N(mu, s^2), rho_k the Huber function."""
    mu = np.asarray(mu, dtype=float)
    if s == 0.0:
        h = np.maximum(np.abs(mu) - c, 0.0)
        return np.where(h <= k, 0.5 * h * h, k * h - 0.5 * k * k)
    za = _clip((c - mu) / s)
    zb = _clip((c + k - mu) / s)
    pa, pb = _phi(za), _phi(zb)
    i0 = ndtr(zb) - ndtr(za)
    e1 = pa - pb
    e2 = i0 + za * pa - zb * pb
    m = mu - c
    quad_pos = 0.5 * (m * m * i0 + 2.0 * m * s * e1 + s * s * e2)
    i0t = ndtr(-zb)
    lin_pos = k * (m * i0t + s * pb) - 0.5 * k * k * i0t

    za2 = _clip((-c - k - mu) / s)
    zb2 = _clip((-c - mu) / s)
    pa2, pb2 = _phi(za2), _phi(zb2)
    i0 = ndtr(zb2) - ndtr(za2)
    e1 = pa2 - pb2
    e2 = i0 + za2 * pa2 - zb2 * pb2
    m2 = mu + c
    quad_neg = 0.5 * (m2 * m2 * i0 + 2.0 * m2 * s * e1 + s * s * e2)
    i0t = ndtr(za2)
    lin_neg = -k * (m2 * i0t - s * pa2) - 0.5 * k * k * i0t
    return quad_pos + lin_pos + quad_neg + lin_neg


# ---------------------------------------------------------------------------
# Student-t partial moments and the half-line panel quadrature.
# ---------------------------------------------------------------------------

def _student_norm_const(d):
    return math.exp(gammaln((d + 1.0) / 2.0) - gammaln(d / 2.0)) / math.sqrt(d * math.pi)


def student_tail_moments(dof, x):
    """(m0, m1, m2) = integrals of (1, t, t^2) * pdf_t over [x, inf), x >= 0.

    Requires dof > 2; m2 uses the reduction to a Student-t with dof-2.
    """
    d = float(dof)
    m0 = float(stdtr(d, -x))
    a_d = _student_norm_const(d)
    m1 = a_d * d / (d - 1.0) * (1.0 + x * x / d) ** (-(d - 1.0) / 2.0)
    dp = d - 2.0
    a_dp = _student_norm_const(dp)
    m2 = d * ((a_d / a_dp) * math.sqrt(d / dp) * float(stdtr(dp, -x * math.sqrt(dp / d))) - m0)
    return m0, m1, m2


@lru_cache(maxsize=32)
def _leggauss(n):
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


def _half_line_breaks(x_cut, landmarks, width, scale, extra=()):
    """Panel endpoints on [0, x_cut]: kink fans plus a geometric ladder."""
    if x_cut <= 0.0:
        return np.empty(0)
    pts = {0.0, x_cut}
    for p in extra:
        p = abs(float(p))
        if 0.0 < p < x_cut:
            pts.add(p)
    for lm in landmarks:
        if 0.0 < lm < x_cut:
            pts.add(lm)
        if width > 0.0:
            off = width
            for _ in range(48):
                if off >= x_cut:
                    break
                for q in (lm - off, lm + off):
                    if 0.0 < q < x_cut:
                        pts.add(q)
                off *= 4.0
    g = 0.5 * scale
    while g < x_cut:
        pts.add(g)
        g *= 2.0
    raw = np.array(sorted(pts))
    keep = [raw[0]]
    for v in raw[1:]:
        if v - keep[-1] > 1e-13 * max(1.0, x_cut):
            keep.append(v)
    keep[-1] = x_cut
    # cap panel width: absolute floor ~scale/2, relative growth ~60% of position
    out = [keep[0]]
    for hi in keep[1:]:
        lo = out[-1]
        hmax = max(0.5 * scale, 0.6 * max(lo, 0.25 * scale))
        nsub = min(int(math.ceil((hi - lo) / hmax)), 24)
        for j in range(1, nsub):
            out.append(lo + (hi - lo) * j / nsub)
        out.append(hi)
    return np.array(out)


def _panel_grid(breaks, n):
    xi, wi = _leggauss(n)
    lo = breaks[:-1]
    hi = breaks[1:]
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    x = (mid[:, None] + half[:, None] * xi[None, :]).ravel()
    w = (half[:, None] * wi[None, :]).ravel()
    return x, w


def _mixture_expect(cond, noise, x_cut, landmarks, width, tail_coeffs, quad):
    """2 * (int_0^x_cut pdf_t(x) cond(x) dx + polynomial tail), cond even in x."""
    d = noise.dof
    scale = math.sqrt(d / (d - 2.0))
    total = 0.0
    if x_cut > 0.0:
        breaks = _half_line_breaks(x_cut, landmarks, width, scale, quad.split_points)
        x, w = _panel_grid(breaks, quad.mixture_nodes)
        total += float(np.dot(w * noise_pdf(noise, x), cond(x)))
    q0, q1, q2 = tail_coeffs
    m0, m1, m2 = student_tail_moments(d, max(x_cut, 0.0))
    total += q0 * m0 + q1 * m1 + q2 * m2
    return 2.0 * total


# ---------------------------------------------------------------------------
# Public expectation operations.
# ---------------------------------------------------------------------------

def hinge_sq_mean(s, a, c, noise, quad=DEFAULT_QUAD):
    """E (|s*G + a*N| - c)_+^2 with G ~ N(0,1) independent of N ~ noise."""
    s, a, c = float(s), float(a), float(c)
    if s < 0 or a < 0 or c < 0:
        raise ValueError("s, a, c must be nonnegative")
    if noise.is_gaussian:
        return float(gauss_hinge_sq(0.0, math.hypot(s, a), c))
    if a == 0.0:
        return float(gauss_hinge_sq(0.0, s, c))
    x_cut = (c + _ZTAIL * s) / a
    tail = (s * s + c * c, -2.0 * a * c, a * a)
    return _mixture_expect(
        lambda x: gauss_hinge_sq(a * x, s, c), noise, x_cut,
        landmarks=(c / a,), width=s / a, tail_coeffs=tail, quad=quad,
    )


def e_hinge_sq(s, c, noise, quad=DEFAULT_QUAD):
    """E (|s*G + N| - c)_+^2, the core functional of the deterministic risk
    problems (noise coefficient fixed to 1)."""
    return hinge_sq_mean(s, 1.0, c, noise, quad)


def e_hinge_abs(s, c, noise, quad=DEFAULT_QUAD):
    """E (|s*G + N| - c)_+."""
    s, c = float(s), float(c)
    if s < 0 or c < 0:
        raise ValueError("s, c must be nonnegative")
    if noise.is_gaussian:
        return float(gauss_hinge_abs(0.0, math.hypot(s, 1.0), c))
    x_cut = c + _ZTAIL * s
    tail = (-c, 1.0, 0.0)
    return _mixture_expect(
        lambda x: gauss_hinge_abs(x, s, c), noise, x_cut,
        landmarks=(c,), width=s, tail_coeffs=tail, quad=quad,
    )


def e_hinge_huber(s, c, k, noise, quad=DEFAULT_QUAD):
    """E rho_k((|s*G + N| - c)_+) with rho_k the Huber function."""
    s, c, k = float(s), float(c), float(k)
    if s < 0 or c < 0 or k < 0:
        raise ValueError("s, c, k must be nonnegative")
    if noise.is_gaussian:
        return float(gauss_hinge_huber(0.0, math.hypot(s, 1.0), c, k))
    x_cut = c + k + _ZTAIL * s
    tail = (-k * c - 0.5 * k * k, k, 0.0)
    return _mixture_expect(
        lambda x: gauss_hinge_huber(x, s, c, k), noise, x_cut,
        landmarks=(c, c + k), width=s, tail_coeffs=tail, quad=quad,
    )


def soft_expectation(g1, g2, chi, cost, thr, noise, quad=DEFAULT_QUAD):
    """Expectation block of the soft-margin saddle function.

    Equals E{ C[(h - C*g1/(2 chi)] 1{h chi > g1 C} + chi/(2 g1) h^2
    1{h chi <= g1 C} } with h = (|sqrt(g1^2+g2^2) G + N| - thr)_+, which
    collapses to (chi/g1) * E rho_k(h) for the Huber threshold
    k = g1*C/chi.  The branch switch sits at |V| = thr + g1*C/chi, which
    the noise-axis quadrature treats as a split point.
    """
    if chi <= 0.0 or cost <= 0.0:
        raise ValueError("chi and cost must be positive")
    if g1 <= 0.0:
        raise ValueError("g1 must be positive (the g1 = 0 branch is separate)")
    k = g1 * cost / chi
    s = math.hypot(g1, g2)
    return (chi / g1) * e_hinge_huber(s, thr, k, noise, quad)


# ---------------------------------------------------------------------------
# All-numeric cross-check path (both directions integrated numerically).
# ---------------------------------------------------------------------------

def _cond_hinge_sq_numeric(mu, s, c, nodes):
    """Inner integral over G by kink-split Gauss-Legendre panels."""
    zr = 10.0
    kinks = sorted({(-c - mu) / s, (c - mu) / s})
    breaks = [-zr]
    for kz in kinks:
        if -zr < kz < zr:
            breaks.append(kz)
    breaks.append(zr)
    total = 0.0
    xi, wi = _leggauss(nodes)
    for lo, hi in zip(breaks[:-1], breaks[1:]):
        half, mid = 0.5 * (hi - lo), 0.5 * (hi + lo)
        z = mid + half * xi
        v = mu + s * z
        total += half * float(np.dot(wi, np.maximum(np.abs(v) - c, 0.0) ** 2 * _phi(z)))
    return total


def e_hinge_sq_quad2d(s, c, noise, quad=DEFAULT_QUAD):
    """E (|s*G + N| - c)_+^2 with both integrals done numerically.

    Cross-check for the closed-form/semi-analytic production path; the
    tensor quadrature splits the inner G panels at the hinge kinks.
    """
    s, c = float(s), float(c)
    if s == 0.0:
        return e_hinge_sq(s, c, noise, quad)
    ng = quad.gauss_nodes_G

    def cond(xs):
        return np.array([_cond_hinge_sq_numeric(x, s, c, ng) for x in np.atleast_1d(xs)])

    if noise.is_gaussian:
        x_cut = c + 12.0 * s + 12.0
        breaks = _half_line_breaks(x_cut, (c,), s, 1.0, quad.split_points)
        x, w = _panel_grid(breaks, quad.mixture_nodes)
        central = float(np.dot(w * _phi(x), cond(x)))
        m0 = float(ndtr(-x_cut))
        m1 = float(_phi(x_cut))
        m2 = m0 + x_cut * m1
        q0, q1, q2 = s * s + c * c, -2.0 * c, 1.0
        return 2.0 * (central + q0 * m0 + q1 * m1 + q2 * m2)
    x_cut = c + _ZTAIL * s
    tail = (s * s + c * c, -2.0 * c, 1.0)
    return _mixture_expect(cond, noise, x_cut, (c,), s, tail, quad)


# ---------------------------------------------------------------------------
# Deterministic maximization values used as dual-side oracles.
# ---------------------------------------------------------------------------

def lemma_max_value(a, m, eps):
    """max over {||u||_2 = m} of u.a - eps*||u||_1  =  m * sqrt(sum (|a_i|-eps)_+^2)."""
    if m <= 0.0:
        raise ValueError("m must be strictly positive")
    a = np.asarray(a, dtype=float)
    return float(m * np.sqrt(np.sum(np.maximum(np.abs(a) - eps, 0.0) ** 2)))


def boxed_max_chi_objective(b, beta, tau, chi):
    """The concave chi-parameterization of the box-constrained maximum.

    psi(chi) = sum_i [ b_i^2 chi / (2 beta)            if b_i chi / beta <= tau
                       b_i tau - beta tau^2 / (2 chi)  otherwise ] - beta chi / 2
    """
    if chi <= 0.0:
        raise ValueError("chi must be positive")
    if beta <= 0.0:
        raise ValueError("chi-form requires beta > 0")
    b = np.asarray(b, dtype=float)
    small = b * chi / beta <= tau
    terms = np.where(small, b * b * chi / (2.0 * beta), b * tau - beta * tau * tau / (2.0 * chi))
    return float(np.sum(terms) - 0.5 * beta * chi)


def boxed_max_value(b, beta, tau):
    """max over {|u_i| <= tau} of sum b_i |u_i| - beta * ||u||_2.

    For beta = 0 the maximum is tau * sum b_i; for beta > 0 it equals the
    supremum over chi > 0 of ``boxed_max_chi_objective`` (concave in chi),
    located here by expanding golden-section search.
    """
    if tau <= 0.0:
        raise ValueError("tau must be strictly positive")
    if beta < 0.0:
        raise ValueError("beta must be nonnegative")
    b = np.asarray(b, dtype=float)
    if np.any(b < 0.0):
        raise ValueError("b entries must be nonnegative")
    if beta == 0.0:
        return float(tau * np.sum(b))
    if not np.any(b > 0.0):
        return 0.0

    def psi(chi):
        return boxed_max_chi_objective(b, beta, tau, chi)

    lo, hi = 1e-8, 1.0
    while psi(hi) >= psi(hi / 2.0) and hi < 1e14:
        hi *= 4.0
    _, val = golden_section_max(psi, lo, hi, tol=1e-12 * hi)
    return float(max(val, 0.0))
