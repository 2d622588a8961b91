"""Heun equation parameters, branch-cut geometry and gamma classification.

Heun's equation in standard form reads

    H'' + (gamma/z + delta/(z-1) + epsilon/(z-a)) H'
        + (alpha*beta*z - q) / (z (z-1) (z-a)) H = 0

with the Fuchsian constraint ``alpha + beta + 1 = gamma + delta + epsilon``.
``epsilon`` is therefore never an input; :func:`make_params` derives it.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

from .errors import InvalidSingularPoint

SINGULAR_POINT_TOL = 1e-12
ON_CUT_TOL = 1e-12
AT_INTEGER_TOL = 1e-14
VICINITY_RADIUS = 0.5


@dataclass(frozen=True)
class HeunParams:
    """The six parameters of Heun's equation plus the derived epsilon."""

    a: complex
    q: complex
    alpha: complex
    beta: complex
    gamma: complex
    delta: complex
    epsilon: complex

    @property
    def disk_radius(self) -> float:
        """Convergence radius of the Frobenius series at z = 0."""
        return min(1.0, abs(self.a))

    def as_tuple(self):
        return (self.a, self.q, self.alpha, self.beta, self.gamma,
                self.delta, self.epsilon)

    def with_gamma(self, gamma) -> "HeunParams":
        """Same a, q, alpha, beta, delta; epsilon follows the new gamma."""
        return make_params(self.a, self.q, self.alpha, self.beta, gamma,
                           self.delta)

    def index_transformed(self) -> "HeunParams":
        """Parameters of the HeunL factor in HeunS = z^(1-gamma) HeunL(...).

        q' = q - (gamma-1)(epsilon + a delta), alpha' = alpha - gamma + 1,
        beta' = beta - gamma + 1, gamma' = 2 - gamma; delta and epsilon
        are unchanged.
        """
        g = self.gamma
        return make_params(
            self.a,
            self.q - (g - 1) * (self.epsilon + self.a * self.delta),
            self.alpha - g + 1,
            self.beta - g + 1,
            2 - g,
            self.delta,
        )


def _as_finite_complex(name, value):
    z = complex(value)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"{name} must be finite, got {value!r}")
    return z


def make_params(a, q, alpha, beta, gamma, delta) -> HeunParams:
    """Validate the equation parameters and derive epsilon.

    Raises
    ------
    InvalidSingularPoint
        If ``a`` lies within 1e-12 of 0 or 1.
    """
    a = _as_finite_complex("a", a)
    q = _as_finite_complex("q", q)
    alpha = _as_finite_complex("alpha", alpha)
    beta = _as_finite_complex("beta", beta)
    gamma = _as_finite_complex("gamma", gamma)
    delta = _as_finite_complex("delta", delta)
    if abs(a) < SINGULAR_POINT_TOL or abs(a - 1) < SINGULAR_POINT_TOL:
        raise InvalidSingularPoint(
            f"a = {a} coincides with the singular point 0 or 1")
    epsilon = alpha + beta + 1 - gamma - delta
    return HeunParams(a, q, alpha, beta, gamma, delta, epsilon)


# ---------------------------------------------------------------------------
# Branch cuts


def _cross(u: complex, v: complex) -> float:
    return u.real * v.imag - u.imag * v.real


def segment_point_distance(p0: complex, p1: complex, z: complex) -> float:
    d = p1 - p0
    L2 = d.real * d.real + d.imag * d.imag
    if L2 == 0.0:
        return abs(z - p0)
    t = ((z - p0) * d.conjugate()).real / L2
    t = min(1.0, max(0.0, t))
    return abs(z - (p0 + t * d))


@dataclass(frozen=True)
class Ray:
    """Closed half-line ``origin + t*direction``, t >= 0 (|direction| = 1)."""

    origin: complex
    direction: complex

    def distance(self, z: complex) -> float:
        w = z - self.origin
        t = (w * self.direction.conjugate()).real
        if t <= 0.0:
            return abs(w)
        return abs((w * self.direction.conjugate()).imag)

    def segment_distance(self, p0: complex, p1: complex) -> float:
        """Distance between this ray and the segment [p0, p1]."""
        d = p1 - p0
        denom = _cross(d, self.direction)
        if denom != 0.0:
            w = self.origin - p0
            s = _cross(w, self.direction) / denom
            t = _cross(w, d) / denom
            if 0.0 <= s <= 1.0 and t >= 0.0:
                return 0.0
        return min(self.distance(p0), self.distance(p1),
                   segment_point_distance(p0, p1, self.origin))


@dataclass(frozen=True)
class BranchCuts:
    """The three cuts fixing the principal sheet.

    ``cut_one`` is (1, +inf), ``cut_a_inf`` runs from ``a`` to infinity
    along arg(a), and ``cut_zero`` is (-inf, 0). The last one is only
    consulted when the evaluation involves log(z) or a non-integer power
    of z.
    """

    a: complex
    cut_one: Ray
    cut_a_inf: Ray
    cut_zero: Ray
    on_cut_tolerance: float = ON_CUT_TOL

    def active(self, needs_cut_zero: bool):
        cuts = [("cut_one", self.cut_one), ("cut_a_inf", self.cut_a_inf)]
        if needs_cut_zero:
            cuts.append(("cut_zero", self.cut_zero))
        return cuts


def branch_cuts(params_or_a, on_cut_tolerance: float = ON_CUT_TOL) -> BranchCuts:
    a = params_or_a.a if isinstance(params_or_a, HeunParams) else complex(params_or_a)
    return BranchCuts(
        a=a,
        cut_one=Ray(1.0 + 0j, 1.0 + 0j),
        cut_a_inf=Ray(a, a / abs(a)),
        cut_zero=Ray(0j, -1.0 + 0j),
        on_cut_tolerance=on_cut_tolerance,
    )


class Verdict(Enum):
    INSIDE = "inside"
    ON_CUT = "on-cut"
    OUTSIDE_SHEET = "outside-sheet"


def nearest_cut(z: complex, cuts: BranchCuts, needs_cut_zero: bool):
    """Return ``(name, distance)`` of the closest active cut."""
    return min(((name, ray.distance(z)) for name, ray in cuts.active(needs_cut_zero)),
               key=lambda item: item[1])


def in_star_domain(z, cuts: BranchCuts, needs_cut_zero: bool = False) -> Verdict:
    """Classify ``z`` against the star-like domain cut out by ``cuts``.

    Every cut is a ray pointing away from the origin, so a point that is off
    all active cuts is reachable from 0 along a straight line.
    """
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        return Verdict.OUTSIDE_SHEET
    _, dist = nearest_cut(z, cuts, needs_cut_zero)
    if dist < cuts.on_cut_tolerance:
        return Verdict.ON_CUT
    return Verdict.INSIDE


# ---------------------------------------------------------------------------
# gamma classification


class GammaKind(Enum):
    REGULAR = "Regular"
    AT_NONPOSITIVE = "AtNonPositive"
    NEAR_NONPOSITIVE = "NearNonPositive"
    AT_ONE = "AtOne"
    NEAR_ONE = "NearOne"


@dataclass(frozen=True)
class GammaClass:
    kind: GammaKind
    distance: float
    n_star: int | None = None
    offset: complex = 0j


def nearest_nonpositive(gamma) -> int:
    """The n >= 0 minimising |gamma + n|."""
    return max(0, int(round(-complex(gamma).real)))


def dist_to_nonpositive(gamma) -> float:
    gamma = complex(gamma)
    return abs(gamma + nearest_nonpositive(gamma))


def classify_gamma(gamma) -> GammaClass:
    """Route gamma to the regime that governs its evaluation.

    The vicinities are the open discs of radius 1/2 around 0, -1, -2, ...
    and around 1; inside them a distance below 1e-14 counts as the integer
    itself.
    """
    gamma = complex(gamma)
    n = nearest_nonpositive(gamma)
    d0 = abs(gamma + n)
    d1 = abs(gamma - 1)
    if d0 < VICINITY_RADIUS:
        kind = GammaKind.AT_NONPOSITIVE if d0 < AT_INTEGER_TOL else GammaKind.NEAR_NONPOSITIVE
        return GammaClass(kind, d0, n, gamma + n)
    if d1 < VICINITY_RADIUS:
        kind = GammaKind.AT_ONE if d1 < AT_INTEGER_TOL else GammaKind.NEAR_ONE
        return GammaClass(kind, d1, None, gamma - 1)
    return GammaClass(GammaKind.REGULAR, min(d0, d1))


def principal_power(z: complex, exponent: complex) -> complex:
    """z**exponent on the principal branch, arg z in (-pi, pi]."""
    if z == 0:
        return 0j
    return cmath.exp(exponent * cmath.log(z))
