"""Regularized Heun functions, smooth in gamma across its integer values.

HeunL has simple poles in gamma at 0, -1, -2, ...; HeunS has poles at
2, 3, ... and degenerates into HeunL at gamma = 1. Inside the discs of
radius 1/2 around those integers the functions are redefined:

* ``heunl_reg`` -- HeunL - K/(gamma+n) rho(|gamma+n|) HeunS near -n, where
  K is the residue of HeunL at gamma = -n;
* ``heuns_ring`` -- z^(1-gamma) heunl_reg(transformed parameters);
* ``heuns_reg`` -- rho(|gamma-1|) (heuns_ring - HeunL)/(1-gamma)
  + (1 - rho(|gamma-1|)) heuns_ring near gamma = 1.

``rho`` is a C-infinity cutoff equal to 1 at r <= 0 and 0 at r >= 1/2, so
the redefinitions join the original functions smoothly. Very close to the
integer the explicit formulas cancel catastrophically; there the analytic
part (rho replaced by 1) is evaluated by a trapezoidal Cauchy integral on
a circle in the gamma-plane, and the exponentially small (1 - rho) part
is added back directly.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import QuadratureUnresolved
from .frobenius import DEFAULT_TOL, residue_K
from .heun import (EvalFlags, EvalResult, apply_index_prefactor,
                   check_domain, heunl, heuns, prefactor_needs_cut_zero)
from .params import HeunParams, VICINITY_RADIUS, nearest_nonpositive


@dataclass(frozen=True)
class RegConfig:
    """Tuning of the regularization layer.

    near_threshold : below this distance to the integer, use the contour.
    contour_radius : radius of the quadrature circle in the gamma-plane.
    quadrature_nodes : initial number of uniform trapezoidal nodes.
    """

    near_threshold: float = 0.05
    contour_radius: float = 0.25
    quadrature_nodes: int = 64
    max_nodes: int = 1024
    quad_tol: float = 1e-11
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        if not 0 < self.near_threshold < self.contour_radius < VICINITY_RADIUS:
            raise ValueError("need 0 < near_threshold < contour_radius < 1/2")
        if self.quadrature_nodes < 4:
            raise ValueError("quadrature_nodes must be at least 4")


DEFAULT_CONFIG = RegConfig()


def _cutoff_exponent(r: float) -> float:
    return 1.0 / (2.0 * r) + 1.0 / (2.0 * r - 1.0)


def rho(r: float) -> float:
    """Cutoff: 1 for r <= 0, 0 for r >= 1/2, logistic of
    1/(2r) + 1/(2r-1) in between."""
    r = float(r)
    if r <= 0.0:
        return 1.0
    if r >= 0.5:
        return 0.0
    x = _cutoff_exponent(r)
    if x >= 0.0:
        return 1.0 / (1.0 + math.exp(-x))
    e = math.exp(x)
    return e / (1.0 + e)


def rho_complement(r: float) -> float:
    """1 - rho(r) without cancellation near r = 0."""
    r = float(r)
    if r <= 0.0:
        return 0.0
    if r >= 0.5:
        return 1.0
    return rho(0.5 - r)


def _combine(terms, flags=None):
    """Linear combination sum w_k * result_k of EvalResults."""
    value = sum(w * res.value for w, res in terms)
    deriv = sum(w * res.derivative for w, res in terms)
    err = sum(abs(w) * res.err_est for w, res in terms)
    merged = EvalFlags()
    for _, res in terms:
        merged = merged.merge(res.flags)
    if flags:
        merged = replace(merged, **flags)
    return EvalResult(complex(value), complex(deriv), float(err), merged)


def contour_integral(core, center: complex, gamma: complex, cfg: RegConfig):
    """Cauchy integral (1/2 pi i) of core(g)/(g - gamma) over |g - center| = r.

    ``core(g)`` returns an :class:`EvalResult`; value and derivative are
    integrated together. The node count is doubled until two successive
    trapezoidal sums agree to ``quad_tol`` relative to the largest sample.

    Returns ``(value, derivative, err_est, flags, n_nodes)``.
    """
    r = cfg.contour_radius
    N = cfg.quadrature_nodes
    flags = EvalFlags()

    def sample(thetas):
        nonlocal flags
        vals = np.empty(len(thetas), dtype=complex)
        ders = np.empty(len(thetas), dtype=complex)
        errs = np.empty(len(thetas))
        for i, th in enumerate(thetas):
            w = r * cmath.exp(1j * th)
            res = core(center + w)
            flags = flags.merge(res.flags)
            k = w / (center + w - gamma)
            vals[i] = k * res.value
            ders[i] = k * res.derivative
            errs[i] = abs(k) * res.err_est
        return vals, ders, errs

    thetas = 2 * np.pi * np.arange(N) / N
    vals, ders, errs = sample(thetas)
    I = vals.mean()
    dI = ders.mean()
    peak = float(np.max(np.abs(vals)))
    sample_err = float(errs.mean())
    while True:
        odd = thetas + np.pi / N
        v2, d2, e2 = sample(odd)
        I2 = 0.5 * (I + v2.mean())
        dI2 = 0.5 * (dI + d2.mean())
        peak = max(peak, float(np.max(np.abs(v2))))
        sample_err = 0.5 * (sample_err + float(e2.mean()))
        change = abs(I2 - I)
        thetas = np.sort(np.concatenate([thetas, odd]))
        N *= 2
        I, dI = I2, dI2
        if change <= cfg.quad_tol * peak:
            return complex(I), complex(dI), change + sample_err, flags, N
        if N >= cfg.max_nodes:
            raise QuadratureUnresolved(
                f"trapezoidal sums still differ by {change:.3g} at {N} nodes")


# ---------------------------------------------------------------------------
# HeunL regularized at gamma = 0, -1, -2, ...


def _heunl_core(params: HeunParams, z: complex, n_star: int, K: complex, tol: float):
    """HeunL - K/(gamma+n*) HeunS: the analytic part with rho set to 1."""
    def core(g):
        p = params.with_gamma(g)
        return _combine([(1.0, heunl(p, z, tol)), (-K / (g + n_star), heuns(p, z, tol))])
    return core


def heunl_reg_direct(params: HeunParams, z, n_star: int | None = None,
                     tol: float = DEFAULT_TOL) -> EvalResult:
    """The explicit vicinity formula without the contour.

    Loses about log10(1/|gamma+n*|) digits to cancellation; kept for
    cross-checks of the contour path.
    """
    z = complex(z)
    gamma = params.gamma
    n = nearest_nonpositive(gamma) if n_star is None else n_star
    d = abs(gamma + n)
    K = residue_K(params, n)
    w = -K / (gamma + n) * rho(d)
    return _combine([(1.0, heunl(params, z, tol)), (w, heuns(params, z, tol))])


def heunl_reg(params: HeunParams, z, cfg: RegConfig = DEFAULT_CONFIG) -> EvalResult:
    """Regularized local Heun function HeunL-sun.

    Identical to :func:`heunl` when dist(gamma, {0,-1,...}) >= 1/2. In the
    discs of radius 1/2 the cut (-inf, 0) is active because HeunS enters.
    At gamma = -n* exactly the value is the limit of the vicinity formula,
    i.e. the logarithmic solution with the constant A selected by
    continuity rather than A = 0.
    """
    z = complex(z)
    gamma = params.gamma
    n = nearest_nonpositive(gamma)
    d = abs(gamma + n)
    if d >= VICINITY_RADIUS:
        return heunl(params, z, cfg.tol)
    check_domain(params, z, True)
    K = residue_K(params, n)
    if d >= cfg.near_threshold:
        return heunl_reg_direct(params, z, n, cfg.tol)
    core = _heunl_core(params, z, n, K, cfg.tol)
    I, dI, err, flags, _ = contour_integral(core, complex(-n), gamma, cfg)
    result = EvalResult(I, dI, err, replace(flags, used_contour=True, used_log_case=False))
    tail = rho_complement(d)
    if tail > 0.0:
        # add back K/(gamma+n) (1 - rho) HeunS, which the analytic core omits
        s = heuns(params, z, cfg.tol)
        result = _combine([(1.0, result), (K / (gamma + n) * tail, s)],
                          {"used_contour": True, "used_log_case": False})
    return result


# ---------------------------------------------------------------------------
# HeunS


def heuns_ring(params: HeunParams, z, cfg: RegConfig = DEFAULT_CONFIG) -> EvalResult:
    """z^(1-gamma) HeunL-sun(a, q', alpha', beta', 2-gamma, delta; z).

    Finite at gamma = 2, 3, ... where :func:`heuns` has poles; equal to
    :func:`heuns` wherever 2-gamma is at least 1/2 away from {0,-1,...}.
    """
    z = complex(z)
    check_domain(params, z, prefactor_needs_cut_zero(params))
    inner = heunl_reg(params.index_transformed(), z, cfg)
    return apply_index_prefactor(params, z, inner)


def _heuns_core(params: HeunParams, z: complex, cfg: RegConfig):
    """(HeunS - HeunL)/(1 - gamma), analytic at gamma = 1."""
    def core(g):
        p = params.with_gamma(g)
        w = 1.0 / (1.0 - g)
        return _combine([(w, heuns_ring(p, z, cfg)), (-w, heunl(p, z, cfg.tol))])
    return core


def heuns_reg_direct(params: HeunParams, z, cfg: RegConfig = DEFAULT_CONFIG) -> EvalResult:
    """Explicit vicinity formula near gamma = 1, without the contour."""
    z = complex(z)
    gamma = params.gamma
    r = rho(abs(gamma - 1))
    S = heuns_ring(params, z, cfg)
    L = heunl(params, z, cfg.tol)
    w = r / (1.0 - gamma)
    return _combine([(w + (1.0 - r), S), (-w, L)])


def heuns_reg(params: HeunParams, z, cfg: RegConfig = DEFAULT_CONFIG) -> EvalResult:
    """Regularized second Heun function HeunS-sun.

    Equals :func:`heuns_ring` for |gamma - 1| >= 1/2. At gamma = 1 it is
    the logarithmic solution sum d_n z^n + (log z + B) HeunL with the B
    selected by continuity in gamma.
    """
    z = complex(z)
    gamma = params.gamma
    d = abs(gamma - 1)
    if d >= VICINITY_RADIUS:
        return heuns_ring(params, z, cfg)
    check_domain(params, z, True)
    if d >= cfg.near_threshold:
        return heuns_reg_direct(params, z, cfg)
    I, dI, err, flags, _ = contour_integral(_heuns_core(params, z, cfg), 1 + 0j, gamma, cfg)
    result = EvalResult(I, dI, err, replace(flags, used_contour=True))
    tail = rho_complement(d)
    if tail > 0.0:
        # rho G + (1 - rho) S = G + (1 - rho)(S - G)
        S = heuns_ring(params, z, cfg)
        result = _combine([(1.0 - tail, result), (tail, S)], {"used_contour": True})
    return result


# ---------------------------------------------------------------------------
# Free constants selected by continuity


def recover_A(params: HeunParams, zs, cfg: RegConfig = DEFAULT_CONFIG) -> np.ndarray:
    """A such that heunl_reg = heunl(A = 0) + A HeunS at gamma = -n*.

    One estimate per point of ``zs``; their spread measures how well the
    limit is a solution of the same equation.
    """
    n = nearest_nonpositive(params.gamma)
    p = params.with_gamma(-n)
    out = []
    for z in zs:
        out.append((heunl_reg(p, z, cfg).value - heunl(p, z, cfg.tol).value)
                   / heuns(p, z, cfg.tol).value)
    return np.array(out)


def recover_B(params: HeunParams, zs, cfg: RegConfig = DEFAULT_CONFIG) -> np.ndarray:
    """B such that heuns_reg = heuns(B = 0) + B HeunL at gamma = 1."""
    p = params.with_gamma(1)
    out = []
    for z in zs:
        out.append((heuns_reg(p, z, cfg).value - heuns(p, z, cfg.tol).value)
                   / heunl(p, z, cfg.tol).value)
    return np.array(out)
