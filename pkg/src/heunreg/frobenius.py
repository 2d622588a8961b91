"""Frobenius series at z = 0.

Three local representations are produced:

* ``PLAIN`` -- HeunL(z) = sum b_n z^n for gamma not in {0, -1, -2, ...};
* ``LOG_NONPOSITIVE`` -- at gamma = -n*, HeunL = sum c_n z^n
  + C log(z) sum_{n > n*} s_n z^n, where the s-series is HeunS;
* ``LOG_GAMMA_ONE`` -- at gamma = 1, HeunS = sum d_n z^n + log(z) HeunL.

The free constants multiplying the second solution (A and B) are fixed to
zero here; :mod:`heunreg.regular` recovers the values selected by limits.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import kernels
from .errors import NonConvergence, OnCut, OutOfDisk, PoleAtGamma
from .params import (AT_INTEGER_TOL, HeunParams, dist_to_nonpositive,
                     nearest_nonpositive)

MAX_ORDER = 10000
DISK_SAFETY = 0.95
DEFAULT_TOL = 1e-15
MIN_TERMS = 20


class SeriesKind(Enum):
    PLAIN = "Plain"
    LOG_NONPOSITIVE = "LogNonPositive"
    LOG_GAMMA_ONE = "LogGammaOne"


@dataclass(frozen=True)
class RecurrenceCoeffs:
    n: int
    P: complex
    Q: complex
    R: complex
    S: complex
    T: complex
    U: complex


def recurrence_coeffs(params: HeunParams, n: int) -> RecurrenceCoeffs:
    a, q, alpha, beta, gamma, delta, eps = params.as_tuple()
    return RecurrenceCoeffs(
        n=n,
        P=a * n * (gamma + (n - 1)),
        Q=q + (n - 1) * ((a + 1) * (gamma + (n - 2)) + eps + a * delta),
        R=-(n - 2 + alpha) * (n - 2 + beta),
        S=a * ((1 - 2 * n) - gamma),
        T=eps + a * delta + (a + 1) * (gamma + (2 * n - 3)),
        U=4 - 2 * n - alpha - beta,
    )


@dataclass(frozen=True)
class SeriesLocal:
    """A local solution at z = 0 truncated at ``order``.

    ``coeff_main`` holds b_n, c_n or d_n; ``coeff_aux`` holds s_n (log case
    at gamma = -n*) or the HeunL coefficients (gamma = 1). Arrays are
    read-only.
    """

    kind: SeriesKind
    params: HeunParams
    coeff_main: np.ndarray
    coeff_aux: np.ndarray | None = field(default=None, repr=False)
    log_constant: complex = 0j
    free_constant_convention: complex = 0j
    n_star: int | None = None

    @property
    def order(self) -> int:
        return len(self.coeff_main) - 1

    @property
    def radius(self) -> float:
        return self.params.disk_radius

    @property
    def has_log(self) -> bool:
        return self.kind is not SeriesKind.PLAIN and self.log_constant != 0


def _frozen(arr):
    arr.flags.writeable = False
    return arr


def _check_finite(arr, what):
    if not np.all(np.isfinite(arr)):
        raise NonConvergence(f"{what} coefficients overflowed")


def coeffs_plain(params: HeunParams, N: int) -> SeriesLocal:
    """b_0..b_N of HeunL from the three-term recurrence, b_0 = 1."""
    if N < 1:
        raise ValueError("N must be >= 1")
    if dist_to_nonpositive(params.gamma) < AT_INTEGER_TOL:
        n = nearest_nonpositive(params.gamma)
        raise PoleAtGamma(-n, f"b_{n + 1} has a pole at gamma = {-n}")
    b = np.zeros(N + 1, dtype=complex)
    b[0] = 1.0
    kernels.recurrence_fill(*params.as_tuple(), b, 1)
    _check_finite(b, "HeunL")
    return SeriesLocal(SeriesKind.PLAIN, params, _frozen(b))


def _snap_gamma(params: HeunParams, target: int) -> HeunParams:
    if abs(params.gamma - target) >= AT_INTEGER_TOL:
        raise ValueError(f"gamma = {params.gamma} is not the integer {target}")
    return params if params.gamma == target else params.with_gamma(target)


def _head_coeffs(p: HeunParams, n_star: int) -> np.ndarray:
    """c_0..c_{n*} at gamma = -n*; ordinary recurrence, P_n != 0 there."""
    c = np.zeros(n_star + 1, dtype=complex)
    c[0] = 1.0
    kernels.recurrence_fill(*p.as_tuple(), c, 1)
    return c


def log_constant(params: HeunParams, n_star: int) -> complex:
    """C_{n*} via the closed form in terms of c_{n*}, c_{n*-1}."""
    p = params.with_gamma(-n_star)
    a, q, alpha, beta, gamma, delta, eps = p.as_tuple()
    c = _head_coeffs(p, n_star)
    cn = c[n_star]
    cn1 = c[n_star - 1] if n_star >= 1 else 0j
    return (cn * (q - gamma * (eps + a * delta - a - 1))
            - cn1 * ((1 + gamma) * (2 - delta - eps) + alpha * beta)) / (a * (n_star + 1))


def residue_K(params: HeunParams, n_star: int) -> complex:
    """Residue of HeunL(gamma; z) in gamma at -n*, times 1/HeunS.

    Evaluated with gamma fixed at -n* (epsilon follows through the
    Fuchsian relation); the gamma stored in ``params`` is ignored.
    """
    p = params.with_gamma(-n_star)
    c = _head_coeffs(p, n_star)
    rc = recurrence_coeffs(p, n_star + 1)
    cm1 = c[n_star - 1] if n_star >= 1 else 0j
    return (rc.Q * c[n_star] + rc.R * cm1) / (p.a * (n_star + 1))


def coeffs_log_nonpositive(params: HeunParams, n_star: int, N: int) -> SeriesLocal:
    """Log-case coefficients at gamma = -n* with c_{n*+1} = 0 and A = 0."""
    if n_star < 0:
        raise ValueError("n_star must be non-negative")
    if N < n_star + 2:
        raise ValueError("N must be >= n_star + 2")
    p = _snap_gamma(params, -n_star)
    args = p.as_tuple()
    s = np.zeros(N + 1, dtype=complex)
    s[n_star + 1] = 1.0
    kernels.recurrence_fill(*args, s, n_star + 2)
    C = log_constant(p, n_star)
    c = np.zeros(N + 1, dtype=complex)
    c[: n_star + 1] = _head_coeffs(p, n_star)
    kernels.recurrence_fill(*args, c, n_star + 2, C, s)
    _check_finite(s, "HeunS")
    _check_finite(c, "log-case")
    return SeriesLocal(SeriesKind.LOG_NONPOSITIVE, p, _frozen(c), _frozen(s),
                       log_constant=C, n_star=n_star)


def coeffs_log_gamma_one(params: HeunParams, N: int) -> SeriesLocal:
    """d_n of HeunS at gamma = 1 (B = 0); the auxiliary series is HeunL."""
    if N < 1:
        raise ValueError("N must be >= 1")
    p = _snap_gamma(params, 1)
    t = coeffs_plain(p, N).coeff_main
    d = np.zeros(N + 1, dtype=complex)
    kernels.recurrence_fill(*p.as_tuple(), d, 1, 1.0 + 0j, t)
    _check_finite(d, "gamma=1")
    return SeriesLocal(SeriesKind.LOG_GAMMA_ONE, p, _frozen(d), t,
                       log_constant=1.0 + 0j)


def regrow(series: SeriesLocal, N: int) -> SeriesLocal:
    """The same local solution with order ``N``."""
    if series.kind is SeriesKind.PLAIN:
        return coeffs_plain(series.params, N)
    if series.kind is SeriesKind.LOG_NONPOSITIVE:
        return coeffs_log_nonpositive(series.params, series.n_star, N)
    return coeffs_log_gamma_one(series.params, N)


def suggested_order(z, radius: float, tol: float = DEFAULT_TOL) -> int:
    """Initial truncation order for summing at ``z``; grown on demand."""
    ratio = abs(z) / radius
    if ratio < 1e-3:
        return 32
    n = math.log(max(tol, 1e-300)) / math.log(min(ratio, DISK_SAFETY)) * 1.1 + 24
    return int(min(MAX_ORDER, n))


def _sum_with_regrow(series: SeriesLocal, z: complex, tol: float):
    """Sum main and auxiliary parts, growing the order until both converge."""
    min_aux = (series.n_star or 0) + MIN_TERMS
    while True:
        main = kernels.series_sum(series.coeff_main, z, tol)
        aux = None
        ok = main[4]
        if series.has_log:
            aux = kernels.series_sum(series.coeff_aux, z, tol, min_aux)
            ok = ok and aux[4]
        if ok:
            return series, main, aux
        if series.order >= MAX_ORDER:
            raise NonConvergence(
                f"series at |z| = {abs(z):.3g} did not converge within {MAX_ORDER} terms")
        series = regrow(series, min(MAX_ORDER, 2 * series.order))


def sum_series(series: SeriesLocal, z, tol: float = DEFAULT_TOL):
    """Evaluate a local series and its derivative at ``z``.

    Returns
    -------
    (H, H', err_est)
        ``err_est`` bounds the truncation tail of H (geometric extrapolation
        of the last two terms) plus a rounding allowance.

    Raises
    ------
    OutOfDisk
        If ``|z| > 0.95 min(1, |a|)``.
    OnCut
        For log kinds, if ``z`` lies on (-inf, 0].
    """
    z = complex(z)
    if abs(z) > DISK_SAFETY * series.radius:
        raise OutOfDisk(f"|z| = {abs(z):.6g} exceeds {DISK_SAFETY} * {series.radius:.6g}")
    if series.has_log and z.imag == 0 and z.real <= 0:
        raise OnCut(f"z = {z} lies on (-inf, 0] where log(z) is cut")
    if z == 0:
        c = series.coeff_main
        return complex(c[0]), complex(c[1]), 0.0
    series, main, aux = _sum_with_regrow(series, z, tol)
    H, dH, err = main[0], main[1], main[2]
    if aux is None:
        return H, dH, err
    S, dS, serr = aux[0], aux[1], aux[2]
    C = series.log_constant
    logz = cmath.log(z)
    H += C * logz * S
    dH += C * (S / z + logz * dS)
    err += abs(C) * (abs(logz) * serr + 1e-16 * abs(S))
    return complex(H), complex(dH), float(err)
