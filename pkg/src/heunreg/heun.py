"""Single-valued HeunL and HeunS on the principal sheet.

HeunL is the Frobenius solution at z = 0 with exponent 0 and HeunL(0) = 1.
HeunS is the second local solution: z^(1-gamma) HeunL(a, q', alpha',
beta', 2-gamma, delta; z) for gamma != 1, and the logarithmic solution
sum d_n z^n + log(z) HeunL(z) at gamma = 1.

Both functions fix the free multiple of the second solution to zero
(A = 0 in the logarithmic HeunL at gamma = -n*, B = 0 in HeunS at
gamma = 1). Any other choice is an equally valid solution; the
regularized functions in :mod:`heunreg.regular` pick the constants
selected by continuity in gamma instead.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .continuation import (DIRECT_FRACTION, START_FRACTION, continue_along,
                           plan_path)
from .errors import OnCut, OutsideSheet, PoleAtGamma
from .frobenius import (DEFAULT_TOL, coeffs_log_gamma_one,
                        coeffs_log_nonpositive, coeffs_plain, suggested_order,
                        sum_series)
from .params import (AT_INTEGER_TOL, GammaKind, HeunParams, Verdict,
                     branch_cuts, classify_gamma, in_star_domain,
                     principal_power)

NEAR_POLE = 0.05


@dataclass(frozen=True)
class EvalFlags:
    """Which routes an evaluation took.

    ``path_elements`` counts the Taylor elements of the longest
    continuation chain involved.
    """

    used_log_case: bool = False
    used_index_transform: bool = False
    used_contour: bool = False
    path_elements: int = 0

    def merge(self, other: "EvalFlags") -> "EvalFlags":
        return EvalFlags(
            self.used_log_case or other.used_log_case,
            self.used_index_transform or other.used_index_transform,
            self.used_contour or other.used_contour,
            max(self.path_elements, other.path_elements),
        )

    def describe(self) -> str:
        parts = [name for name in ("used_log_case", "used_index_transform", "used_contour")
                 if getattr(self, name)]
        parts.append(f"path_elements={self.path_elements}")
        return ";".join(parts)


@dataclass(frozen=True)
class EvalResult:
    """Value and z-derivative of one evaluation.

    ``err_est`` is an absolute error estimate on ``value``.
    """

    value: complex
    derivative: complex
    err_est: float
    flags: EvalFlags = EvalFlags()


def check_domain(params: HeunParams, z: complex, needs_cut_zero: bool):
    verdict = in_star_domain(z, branch_cuts(params), needs_cut_zero)
    if verdict is Verdict.ON_CUT:
        raise OnCut(f"z = {z} lies on a branch cut")
    if verdict is Verdict.OUTSIDE_SHEET:
        raise OutsideSheet(f"z = {z} is not a finite point of the principal sheet")


def _evaluate(series, z: complex, needs_cut_zero: bool, tol: float):
    """Sum ``series`` near 0 and continue the solution out to ``z``."""
    params = series.params
    plan = plan_path(params, z, branch_cuts(params), needs_cut_zero)
    H0, dH0, e0 = sum_series(series, plan.start, tol)
    H, dH, e1 = continue_along(params, plan, (H0, dH0), tol)
    scale = abs(H0) if abs(H0) > 0 else 1.0
    err = e1 + e0 * abs(H) / scale
    return H, dH, err, plan.n_elements


def _start_order(params: HeunParams, z: complex, tol: float, minimum: int = 0) -> int:
    R = params.disk_radius
    r = abs(z) if abs(z) < DIRECT_FRACTION * R else START_FRACTION * R
    return max(suggested_order(r, R, tol), minimum)


def heunl(params: HeunParams, z, tol: float = DEFAULT_TOL) -> EvalResult:
    """HeunL(a, q, alpha, beta, gamma, delta; z) and its z-derivative.

    For gamma within 1e-14 of a non-positive integer the logarithmic
    representation with A = 0 is used, and the cut (-inf, 0) becomes
    active whenever its log coefficient is non-zero. Close to such gamma
    the plain series still answers, with ``err_est`` inflated by the
    1/dist cancellation factor.
    """
    z = complex(z)
    cls = classify_gamma(params.gamma)
    if cls.kind is GammaKind.AT_NONPOSITIVE:
        order = _start_order(params, z, tol, cls.n_star + 24)
        series = coeffs_log_nonpositive(params, cls.n_star, order)
        needs_cut_zero = series.has_log
        flags = EvalFlags(used_log_case=True)
    else:
        series = coeffs_plain(params, _start_order(params, z, tol))
        needs_cut_zero = False
        flags = EvalFlags()
    check_domain(params, z, needs_cut_zero)
    H, dH, err, n = _evaluate(series, z, needs_cut_zero, tol)
    if cls.kind is GammaKind.NEAR_NONPOSITIVE and cls.distance < NEAR_POLE:
        err /= cls.distance
    return EvalResult(H, dH, err, replace(flags, path_elements=n))


def _positive_pole(gamma: complex):
    m = int(round(gamma.real))
    if m >= 2 and abs(gamma - m) < AT_INTEGER_TOL:
        return m
    return None


def _integer_exponent(gamma: complex):
    """1 - gamma when gamma is (within 1e-14) a non-positive integer."""
    m = int(round(gamma.real))
    if m <= 0 and abs(gamma - m) < AT_INTEGER_TOL:
        return 1 - m
    return None


def prefactor_needs_cut_zero(params: HeunParams) -> bool:
    return _integer_exponent(params.gamma) is None


def apply_index_prefactor(params: HeunParams, z: complex, inner: EvalResult) -> EvalResult:
    """Turn HeunL(transformed; z) into z^(1-gamma) HeunL(transformed; z)."""
    gamma = params.gamma
    k = _integer_exponent(gamma)
    if z == 0:
        if k is None:
            raise OnCut("z = 0 is the branch point of z^(1-gamma)")
        deriv = inner.value if k == 1 else 0j
        return EvalResult(0j, deriv, 0.0,
                          replace(inner.flags, used_index_transform=True))
    if k is not None:
        pw = z ** k
        dpw = k * z ** (k - 1)
    else:
        pw = principal_power(z, 1 - gamma)
        dpw = (1 - gamma) * pw / z
    value = pw * inner.value
    deriv = dpw * inner.value + pw * inner.derivative
    return EvalResult(value, deriv, abs(pw) * inner.err_est,
                      replace(inner.flags, used_index_transform=True))


def heuns(params: HeunParams, z, tol: float = DEFAULT_TOL) -> EvalResult:
    """The second local solution HeunS and its z-derivative.

    Uses z^(1-gamma) HeunL(transformed) for gamma != 1 and the logarithmic
    series with B = 0 at gamma = 1. Raises :class:`PoleAtGamma` for
    gamma in {2, 3, ...}; the regularized :func:`heunreg.regular.heuns_reg`
    is finite there.
    """
    z = complex(z)
    gamma = params.gamma
    cls = classify_gamma(gamma)
    if cls.kind is GammaKind.AT_ONE:
        check_domain(params, z, True)
        if z == 0:
            raise OnCut("z = 0 is the branch point of log(z)")
        series = coeffs_log_gamma_one(params, _start_order(params, z, tol))
        H, dH, err, n = _evaluate(series, z, True, tol)
        return EvalResult(H, dH, err, EvalFlags(used_log_case=True, path_elements=n))
    m = _positive_pole(gamma)
    if m is not None:
        raise PoleAtGamma(m, f"HeunS has a pole at gamma = {m}")
    check_domain(params, z, prefactor_needs_cut_zero(params))
    inner = heunl(params.index_transformed(), z, tol)
    return apply_index_prefactor(params, z, inner)

