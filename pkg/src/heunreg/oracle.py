"""Independent Taylor-step integrator for Heun's equation.

This is the ground truth used by the test-suite and by ``--verify``. It
deliberately shares no code with the production path: the equation is
written as H'' = -p(z) H' - r(z) H with p and r split into partial
fractions over the poles {0, 1, a}, each expanded as a geometric series
about the current point, and the Taylor coefficients of H follow from
Cauchy products. Steps are adaptive on the last two Taylor terms; the
global error estimate compares against a run with every step halved.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SegmentNearSingularity, ToleranceUnreachable
from .params import HeunParams, branch_cuts, segment_point_distance

ORDER = 20
STEP_FRACTION = 0.4
MIN_CLEARANCE = 1e-3
MAX_STEPS = 200000


@dataclass(frozen=True)
class IntegratorState:
    position: complex
    H: complex
    dH: complex
    step: float
    order: int = ORDER


def _partial_fractions(params: HeunParams):
    """Poles and residues of p(z) and r(z)."""
    a, q, alpha, beta, gamma, delta, eps = params.as_tuple()
    ab = alpha * beta
    poles = np.array([0.0, 1.0, a], dtype=complex)
    p_res = np.array([gamma, delta, eps], dtype=complex)
    r_res = np.array([
        -q / a,
        (ab - q) / (1 - a),
        (ab * a - q) / (a * (a - 1)),
    ], dtype=complex)
    return poles, p_res, r_res


def _taylor(poles, p_res, r_res, z0, H, dH, order):
    j = np.arange(order + 1)
    w = 1.0 / (z0 - poles)                       # 1/(z0 - s)
    powers = w[:, None] ** (j[None, :] + 1)       # w^(j+1)
    signs = (-1.0) ** j
    pj = signs * (p_res @ powers)
    rj = signs * (r_res @ powers)
    c = np.zeros(order + 1, dtype=complex)
    c[0] = H
    c[1] = dH
    for k in range(order - 1):
        # (k+2)(k+1) c_{k+2} = -sum_i [p_i (k-i+1) c_{k-i+1} + r_i c_{k-i}]
        idx = np.arange(k + 1)
        acc = np.dot(pj[: k + 1], (k - idx + 1) * c[k - idx + 1]) + np.dot(rj[: k + 1], c[k - idx])
        c[k + 2] = -acc / ((k + 2) * (k + 1))
    return c


def _eval(c, u):
    m = np.arange(len(c))
    powers = u ** m
    val = np.dot(c, powers)
    der = np.dot(c[1:] * m[1:], powers[:-1])
    return complex(val), complex(der)


def _step_size(c, dist, tol, H, dH):
    h = STEP_FRACTION * dist
    scale = abs(H) + abs(dH) * h
    last = abs(c[-1]) * h ** (len(c) - 1) + abs(c[-2]) * h ** (len(c) - 2)
    if last > tol * scale and last > 0:
        h *= 0.9 * (tol * scale / last) ** (1.0 / (len(c) - 1))
    return h


def _check_segment(params: HeunParams, z_from, z_to, cut_zero: bool):
    for s in (0j, 1 + 0j, params.a):
        if segment_point_distance(z_from, z_to, s) < MIN_CLEARANCE:
            raise SegmentNearSingularity(
                f"segment [{z_from}, {z_to}] passes within {MIN_CLEARANCE} of {s}")
    cuts = branch_cuts(params)
    for name, ray in cuts.active(cut_zero):
        if ray.segment_distance(z_from, z_to) < cuts.on_cut_tolerance:
            raise SegmentNearSingularity(f"segment [{z_from}, {z_to}] crosses {name}")


def _run(params, z_from, z_to, H, dH, tol, order, subdivide):
    poles, p_res, r_res = _partial_fractions(params)
    pos = complex(z_from)
    total = abs(z_to - z_from)
    if total == 0:
        return H, dH, 0
    direction = (z_to - z_from) / total
    travelled = 0.0
    steps = 0
    while travelled < total:
        dist = float(np.min(np.abs(pos - poles)))
        c = _taylor(poles, p_res, r_res, pos, H, dH, order)
        h = _step_size(c, dist, tol, H, dH) / subdivide
        last = travelled + h >= total
        if last:
            h = total - travelled
        H, dH = _eval(c, h * direction)
        travelled = total if last else travelled + h
        pos = z_to if last else z_from + travelled * direction
        steps += 1
        if steps > MAX_STEPS or not (np.isfinite(H) and np.isfinite(dH)):
            raise ToleranceUnreachable("oracle integration failed to progress")
    return H, dH, steps


def integrate(params: HeunParams, z_from, seed, z_to, tol: float = 1e-14,
              order: int = ORDER, cut_zero: bool = False):
    """Integrate Heun's equation along the straight segment z_from -> z_to.

    Parameters
    ----------
    seed : (H, H') at ``z_from``.
    tol : local error per step, relative to |H| + |H'| h.
    cut_zero : also refuse segments crossing (-inf, 0).

    Returns
    -------
    (H, H', err_est) at ``z_to``; ``err_est`` is the discrepancy with a
    second run using half-size steps.
    """
    z_from, z_to = complex(z_from), complex(z_to)
    if order < 10:
        raise ValueError("order must be at least 10")
    _check_segment(params, z_from, z_to, cut_zero)
    H0, dH0 = complex(seed[0]), complex(seed[1])
    H1, dH1, _ = _run(params, z_from, z_to, H0, dH0, tol, order, 1)
    H2, dH2, _ = _run(params, z_from, z_to, H0, dH0, tol, order, 2)
    return H2, dH2, abs(H2 - H1)


def integrate_path(params: HeunParams, vertices, seed, tol: float = 1e-14,
                   order: int = ORDER, cut_zero: bool = False):
    """Chain :func:`integrate` over the legs of a polyline."""
    H, dH = seed
    err = 0.0
    for p0, p1 in zip(vertices[:-1], vertices[1:]):
        H, dH, e = integrate(params, p0, (H, dH), p1, tol, order, cut_zero)
        err += e
    return H, dH, err
