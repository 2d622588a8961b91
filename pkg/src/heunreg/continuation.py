"""Analytic continuation by overlapping Taylor elements.

Multiplying Heun's equation by z(z-1)(z-a) and expanding about an ordinary
point z0 in u = z - z0 gives a four-term recurrence

    p30 (n+2)(n+1) h_{n+2} = -[A_n h_{n+1} + B_n h_n + C_n h_{n-1}]

with p30 = z0(z0-1)(z0-a) != 0. A chain of such elements along a path from
a point near the origin carries (H, H') to any point of the cut plane.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import (NonConvergence, SingularCenter, TargetOnCut,
                     TargetOutsideSheet)
from .params import (BranchCuts, HeunParams, Verdict, branch_cuts,
                     in_star_domain, segment_point_distance)

ELEMENT_SAFETY = 0.6
OVERLAP_STRIDE = 0.8
START_FRACTION = 0.3
DIRECT_FRACTION = 0.5
DETOUR_CLEARANCE = 0.05
DETOUR_OFFSET = 0.2
MAX_AMPLIFICATION = 1e4
UNIT_ROUNDOFF = 2.2e-16
ELEMENT_ORDER_CAP = 2000
MAX_ELEMENTS = 100000
CENTER_TOL = 1e-10


def singular_distance(params: HeunParams, z: complex) -> float:
    return min(abs(z), abs(z - 1), abs(z - params.a))


def element_radius(params: HeunParams, z0: complex, safety: float = ELEMENT_SAFETY) -> float:
    return safety * singular_distance(params, z0)


@dataclass(frozen=True)
class CircularElement:
    center: complex
    coeffs: np.ndarray
    radius: float
    seed: tuple

    def __call__(self, z, tol: float = 1e-15):
        """Value and derivative at ``z`` (must lie inside ``radius``)."""
        H, dH, _, _, _ = kernels.series_sum(self.coeffs, complex(z) - self.center, tol)
        return complex(H), complex(dH)


def taylor_element(params: HeunParams, z0, H0, dH0, N: int,
                   safety: float = ELEMENT_SAFETY) -> CircularElement:
    """Taylor coefficients h_0..h_N about the ordinary point ``z0``."""
    z0 = complex(z0)
    if N < 2:
        raise ValueError("N must be >= 2")
    if singular_distance(params, z0) <= CENTER_TOL:
        raise SingularCenter(f"z0 = {z0} is a singular point of the equation")
    h = kernels.taylor_coeffs(*params.as_tuple(), z0, complex(H0), complex(dH0), N)
    h.flags.writeable = False
    return CircularElement(z0, h, element_radius(params, z0, safety),
                           (complex(H0), complex(dH0)))


@dataclass(frozen=True)
class PathPlan:
    """Centers of a chain of elements, ``waypoints[0] == start``,
    ``waypoints[-1] == target``."""

    start: complex
    waypoints: tuple
    target: complex
    radii: tuple
    cuts_respected: frozenset

    @property
    def n_elements(self) -> int:
        return len(self.waypoints) - 1


def _check_target(params, z, cuts, active_cut_zero):
    verdict = in_star_domain(z, cuts, active_cut_zero)
    if verdict is Verdict.ON_CUT:
        raise TargetOnCut(f"z = {z} lies on a branch cut")
    if verdict is Verdict.OUTSIDE_SHEET:
        raise TargetOutsideSheet(f"z = {z} is not on the principal sheet")
    if singular_distance(params, z) <= CENTER_TOL and z != 0:
        raise TargetOnCut(f"z = {z} is a singular point")


def _tile_segment(params, p, q, safety, stride):
    """Centers from p (exclusive) to q (inclusive), each hop <= stride*radius."""
    centers = []
    radii = []
    cur = p
    length = abs(q - p)
    if length == 0:
        return centers, radii
    direction = (q - p) / length
    for _ in range(MAX_ELEMENTS):
        r = element_radius(params, cur, safety)
        radii.append(r)
        hop = stride * r
        if hop <= 0:
            raise NonConvergence(f"path touches a singular point near {cur}")
        if abs(q - cur) <= hop:
            centers.append(q)
            return centers, radii
        cur = cur + direction * hop
        centers.append(cur)
    raise NonConvergence("continuation path needs too many elements")


def _polyline_ok(params, vertices, cuts, active_cut_zero):
    active = cuts.active(active_cut_zero)
    for p0, p1 in zip(vertices[:-1], vertices[1:]):
        for _, ray in active:
            if ray.segment_distance(p0, p1) < cuts.on_cut_tolerance:
                return False
        for s in (0j, 1 + 0j, params.a):
            if segment_point_distance(p0, p1, s) <= CENTER_TOL:
                return False
    return True


def plan_polyline(params: HeunParams, vertices, cuts: BranchCuts | None = None,
                  active_cut_zero: bool = False, safety: float = ELEMENT_SAFETY,
                  stride: float = OVERLAP_STRIDE) -> PathPlan:
    """Tile an explicit polyline with overlapping elements.

    Used for detours and for path-independence checks. Every leg must stay
    off the active cuts.
    """
    vertices = [complex(v) for v in vertices]
    cuts = cuts or branch_cuts(params)
    _check_target(params, vertices[-1], cuts, active_cut_zero)
    if not _polyline_ok(params, vertices, cuts, active_cut_zero):
        raise TargetOnCut("polyline crosses a branch cut or a singular point")
    centers = [vertices[0]]
    radii = []
    for p, q in zip(vertices[:-1], vertices[1:]):
        c, r = _tile_segment(params, p, q, safety, stride)
        centers.extend(c)
        radii.extend(r)
    radii.append(element_radius(params, centers[-1], safety))
    names = frozenset(name for name, _ in cuts.active(active_cut_zero))
    return PathPlan(vertices[0], tuple(centers), vertices[-1], tuple(radii), names)


def _second_exponents(params: HeunParams):
    """Singular points 1 and a with the nonzero local exponent there."""
    return ((1 + 0j, 1 - params.delta), (params.a, 1 - params.epsilon))


def _clearance(params, s, rho_s, z):
    """Distance to keep from ``s`` so that the solution (z-s)^rho_s grows by
    at most ``MAX_AMPLIFICATION`` relative to the others on the way to ``z``."""
    need = DETOUR_CLEARANCE
    if rho_s.real > 0:
        need = max(need, abs(z - s) * MAX_AMPLIFICATION ** (-1.0 / rho_s.real))
    return need


def _detour_vertex(params, start, z, cuts, active_cut_zero):
    """A corner steering the ray around a singular point it passes too
    closely, or None.

    Close passes lose digits when the second local solution at that point
    has an exponent with large positive real part: rounding noise injected
    near the point is amplified by (|z-s|/gap)^Re(rho) on the way out.
    """
    d = z - start
    L2 = abs(d) ** 2
    for s, rho_s in _second_exponents(params):
        t = ((s - start) * d.conjugate()).real / L2
        if not 0.0 < t < 1.0:
            continue
        closest = start + t * d
        gap = abs(closest - s)
        need = _clearance(params, s, rho_s, z)
        if gap >= need or abs(z - s) < DETOUR_CLEARANCE or gap == 0:
            continue
        normal = (closest - s) / gap
        # shrink the detour until it respects the cuts; the last try is the
        # minimal one that only keeps the elements off the singular point
        minimal = DETOUR_CLEARANCE - gap + DETOUR_OFFSET * ELEMENT_SAFETY * DETOUR_CLEARANCE
        shift = need - gap + DETOUR_OFFSET * ELEMENT_SAFETY * need
        while True:
            corner = closest + normal * shift
            if _polyline_ok(params, [start, corner, z], cuts, active_cut_zero):
                return corner
            if shift <= minimal:
                break
            shift = max(minimal, 0.5 * shift)
    return None


def path_amplification(params: HeunParams, vertices) -> float:
    """Worst growth (|z-s|/gap)^Re(rho) of a second local solution along
    the polyline; multiplies the rounding error of the continued pair."""
    z = complex(vertices[-1])
    worst = 1.0
    for s, rho_s in _second_exponents(params):
        if rho_s.real <= 0:
            continue
        gap = min(segment_point_distance(p0, p1, s)
                  for p0, p1 in zip(vertices[:-1], vertices[1:]))
        if gap > 0:
            worst = max(worst, (abs(z - s) / gap) ** rho_s.real)
    return worst


def plan_path(params: HeunParams, z, cuts: BranchCuts | None = None,
              active_cut_zero: bool = False) -> PathPlan:
    """Plan the chain of elements from z* = rho e^{i arg z} to ``z``.

    rho is 0.3 min(1, |a|). Points with |z| < 0.5 min(1, |a|) need no
    continuation and get a single-element plan starting at ``z`` itself.
    """
    z = complex(z)
    cuts = cuts or branch_cuts(params)
    _check_target(params, z, cuts, active_cut_zero)
    R = params.disk_radius
    if abs(z) < DIRECT_FRACTION * R:
        names = frozenset(name for name, _ in cuts.active(active_cut_zero))
        return PathPlan(z, (z,), z, (element_radius(params, z) if z != 0 else R,), names)
    start = START_FRACTION * R * cmath.exp(1j * cmath.phase(z))
    corner = _detour_vertex(params, start, z, cuts, active_cut_zero)
    vertices = [start, z] if corner is None else [start, corner, z]
    return plan_polyline(params, vertices, cuts, active_cut_zero)


def continue_along(params: HeunParams, plan: PathPlan, seed, tol: float = 1e-15):
    """Propagate ``seed = (H, H')`` at ``plan.start`` to ``plan.target``.

    Returns ``(H, H', err_est)``; ``err_est`` is the sum of the per-element
    relative truncation bounds plus rounding amplified by
    :func:`path_amplification`, scaled by the final value.
    """
    H0, dH0 = complex(seed[0]), complex(seed[1])
    if plan.n_elements == 0:
        return H0, dH0, 0.0
    centers = np.asarray(plan.waypoints, dtype=complex)
    H, dH, rel, n, ok = kernels.continue_path(
        *params.as_tuple(), centers, H0, dH0, tol, ELEMENT_ORDER_CAP)
    if not ok:
        raise NonConvergence(
            f"Taylor element {n} did not converge within {ELEMENT_ORDER_CAP} terms")
    H, dH = complex(H), complex(dH)
    if not (np.isfinite(H) and np.isfinite(dH)):
        raise NonConvergence("continuation produced a non-finite value")
    rel = float(rel) + UNIT_ROUNDOFF * path_amplification(params, plan.waypoints)
    return H, dH, rel * max(abs(H), 1e-300)
