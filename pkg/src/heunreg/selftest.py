"""Invariant suite behind ``heunreg selftest``.

Each invariant draws a small seeded corpus, checks one law and reports a
single pass/fail line. The helpers that generate parameters and measure
the laws are public so the test-suite can reuse them on larger corpora.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .cli import evaluate, verify
from .continuation import continue_along, plan_polyline
from .errors import HeunError
from .frobenius import coeffs_plain, log_constant, residue_K, sum_series
from .heun import heunl, heuns
from .params import (HeunParams, Verdict, branch_cuts, dist_to_nonpositive,
                     in_star_domain, make_params)
from .regular import (heunl_reg, heuns_reg, heuns_ring, recover_A, recover_B,
                      rho)

FUNCTIONS = ("heunl", "heuns", "heunl-reg", "heuns-reg")


# ---------------------------------------------------------------------------
# Corpus


def _disk(rng, radius):
    r = radius * math.sqrt(rng.uniform())
    return r * cmath.exp(1j * rng.uniform(-math.pi, math.pi))


def random_gamma(rng) -> complex:
    """A mixture that visits the generic region and every kind of vicinity."""
    u = rng.uniform()
    if u < 0.4:
        return complex(rng.uniform(-4.0, 3.0), rng.uniform(-1.0, 1.0))
    if u < 0.7:
        n = int(rng.integers(0, 4))
        return -n + _disk(rng, 0.5)
    if u < 0.9:
        return 1 + _disk(rng, 0.5)
    return complex(rng.integers(2, 4)) + _disk(rng, 0.5)


def random_params(rng, gamma=None, coeff_bound: float = 5.0) -> HeunParams:
    """|a| in [0.5, 3] at any angle, |q|, |alpha|, |beta|, |delta| <= bound."""
    while True:
        a = rng.uniform(0.5, 3.0) * cmath.exp(1j * rng.uniform(-math.pi, math.pi))
        if abs(a - 1) > 0.1:
            break
    g = random_gamma(rng) if gamma is None else gamma
    return make_params(a, _disk(rng, coeff_bound), _disk(rng, coeff_bound),
                       _disk(rng, coeff_bound), g, _disk(rng, coeff_bound))


def _clear_of(params: HeunParams, z: complex, clearance: float) -> bool:
    sing = (0j, 1 + 0j, params.a)
    if min(abs(z - s) for s in sing[1:]) < clearance or abs(z) < 1e-3:
        return False
    cuts = branch_cuts(params)
    for _, ray in cuts.active(True):
        if ray.distance(z) < clearance:
            return False
    # keep the straight ray from the origin clear of 1 and a as well
    for s in sing[1:]:
        t = (s * z.conjugate()).real / abs(z) ** 2
        if 0 < t < 1 and abs(t * z - s) < clearance:
            return False
    return True


def random_points(rng, params: HeunParams, count: int, radius: float = 3.0,
                  clearance: float = 0.1) -> list:
    """Points of the star domain (all cuts active) away from the cuts."""
    out = []
    cuts = branch_cuts(params)
    while len(out) < count:
        z = _disk(rng, radius)
        if in_star_domain(z, cuts, True) is Verdict.INSIDE and _clear_of(params, z, clearance):
            out.append(z)
    return out


# ---------------------------------------------------------------------------
# Laws


def relative_pair_error(H, dH, H_ref, dH_ref) -> float:
    """(|dH| + |dH'|) / (|H| + |H'|) against the reference pair."""
    return (abs(H - H_ref) + abs(dH - dH_ref)) / (abs(H_ref) + abs(dH_ref))


def abel_products(params: HeunParams, z_end, f1="heunl", f2="heuns", n: int = 40,
                  tol: float = 1e-14) -> np.ndarray:
    """W(z) z^gamma (z-1)^delta (z-a)^epsilon along the ray from near 0 to z_end.

    W = f1 f2' - f1' f2. The three powers use logarithms unwrapped along
    the ray, so the product is constant for any pair of solutions.
    """
    z_end = complex(z_end)
    R = params.disk_radius
    z_start = 0.1 * R * z_end / abs(z_end)
    zs = z_start + (z_end - z_start) * np.linspace(0.0, 1.0, n)
    W = np.empty(n, dtype=complex)
    for k, z in enumerate(zs):
        r1 = evaluate(f1, params, z, tol)
        r2 = evaluate(f2, params, z, tol)
        W[k] = r1.value * r2.derivative - r1.derivative * r2.value
    logs = []
    for s in (0j, 1 + 0j, params.a):
        lg = np.log(zs - s)
        logs.append(lg.real + 1j * np.unwrap(lg.imag))
    expo = params.gamma * logs[0] + params.delta * logs[1] + params.epsilon * logs[2]
    return W * np.exp(expo)


def abel_spread(products: np.ndarray) -> float:
    ref = products[0]
    return float(np.max(np.abs(products - ref)) / abs(ref))


def path_values(params: HeunParams, vertices, fn_seed, tol: float = 1e-15):
    """Continue a series seed at ``vertices[0]`` along an explicit polyline."""
    plan = plan_polyline(params, vertices, branch_cuts(params), True)
    return continue_along(params, plan, fn_seed, tol)[:2]


def residue_extrapolation(params: HeunParams, n_star: int, h: float = 1e-3) -> complex:
    """(gamma+n*) b_{n*+1}(gamma) averaged over gamma = -n* + h i^k.

    The average cancels the O(h), O(h^2), O(h^3) terms of the Laurent tail.
    """
    acc = 0j
    for k in range(4):
        off = h * 1j ** k
        b = coeffs_plain(params.with_gamma(-n_star + off), n_star + 1).coeff_main
        acc += off * b[n_star + 1]
    return acc / 4


# ---------------------------------------------------------------------------
# Suite


@dataclass
class Report:
    results: list = field(default_factory=list)

    def add(self, name, passed, detail):
        self.results.append((name, bool(passed), detail))

    @property
    def passed(self) -> bool:
        return all(ok for _, ok, _ in self.results)

    def lines(self):
        for name, ok, detail in self.results:
            yield f"{'PASS' if ok else 'FAIL'} {name}: {detail}"
        n_ok = sum(ok for _, ok, _ in self.results)
        yield f"{n_ok}/{len(self.results)} invariants passed"


def check_cutoff(rng):
    grid = np.linspace(0.0, 0.5, 1001)
    worst = max(abs(rho(r) + rho(0.5 - r) - 1.0) for r in grid)
    ok = (rho(-1.0) == 1.0 and rho(0.0) == 1.0 and rho(0.5) == 0.0 and rho(2.0) == 0.0
          and abs(rho(0.25) - 0.5) <= 1e-15 and worst <= 1e-14)
    return ok, f"max |rho(r) + rho(1/2-r) - 1| = {worst:.1e}"


def check_residue(rng):
    worst_ext, worst_c = 0.0, 0.0
    for _ in range(5):
        p = random_params(rng, gamma=0.3)
        for n in range(4):
            K = residue_K(p, n)
            worst_ext = max(worst_ext, abs(residue_extrapolation(p, n) - K) / max(abs(K), 1e-300))
            worst_c = max(worst_c, abs(log_constant(p, n) - K) / max(abs(K), 1e-300))
    return worst_ext <= 1e-9 and worst_c <= 1e-12, \
        f"extrapolation {worst_ext:.1e}, closed form {worst_c:.1e}"


def check_oracle(rng):
    worst = 0.0
    count = 0
    for _ in range(4):
        p = random_params(rng, coeff_bound=3.0)
        for z in random_points(rng, p, 2):
            for fn in FUNCTIONS:
                try:
                    r = evaluate(fn, p, z, 1e-14)
                except HeunError:
                    continue
                worst = max(worst, verify(fn, p, z, r))
                count += 1
    return worst <= 1e-8, f"{count} evaluations, worst relative discrepancy {worst:.1e}"


def check_wronskian(rng):
    worst = 0.0
    pairs = (("heunl", "heuns"), ("heunl-reg", "heuns-reg"))
    for _ in range(3):
        p = random_params(rng, coeff_bound=3.0)
        z = random_points(rng, p, 1)[0]
        for f1, f2 in pairs:
            worst = max(worst, abel_spread(abel_products(p, z, f1, f2, n=16)))
    return worst <= 1e-8, f"worst relative drift of W z^g (z-1)^d (z-a)^e: {worst:.1e}"


def check_identity_region(rng):
    bad = 0
    for _ in range(40):
        g = complex(rng.uniform(-5, 3), rng.uniform(-1.5, 1.5))
        p = random_params(rng, gamma=g, coeff_bound=3.0)
        z = random_points(rng, p, 1)[0]
        if dist_to_nonpositive(g) >= 0.5:
            bad += heunl_reg(p, z) != heunl(p, z)
        if abs(g - 1) >= 0.5:
            bad += heuns_reg(p, z) != heuns_ring(p, z)
    return bad == 0, f"{bad} mismatches"


def check_seams(rng):
    worst = 0.0
    h = 1e-7
    for _ in range(3):
        p = random_params(rng, gamma=0.3, coeff_bound=3.0)
        z = random_points(rng, p, 1, radius=1.5)[0]
        for fn, center in (("heunl-reg", -1), ("heuns-reg", 1)):
            for r in (0.05, 0.5):
                u = cmath.exp(1j * rng.uniform(-math.pi, math.pi))
                v1 = evaluate(fn, p.with_gamma(center + (r - h) * u), z, 1e-14).value
                v2 = evaluate(fn, p.with_gamma(center + (r + h) * u), z, 1e-14).value
                worst = max(worst, abs(v1 - v2) / (2 * h * max(abs(v1), 1.0)))
    return worst <= 1e3, f"largest finite-difference slope across seams {worst:.1e}"


def check_path_independence(rng):
    worst = 0.0
    for _ in range(4):
        p = random_params(rng, coeff_bound=3.0)
        R = p.disk_radius
        z = random_points(rng, p, 1, radius=2.0)[0]
        z0 = 0.3 * R * z / abs(z)
        series = coeffs_plain(p, 200)
        seed = sum_series(series, z0)[:2]
        ref = path_values(p, [z0, z], seed)
        # bend the path through a point off the ray, on the same side of every cut
        mid = 0.5 * (z0 + z) + 0.15 * abs(z - z0) * 1j * (z - z0) / abs(z - z0)
        try:
            alt = path_values(p, [z0, mid, z], seed)
        except HeunError:
            continue
        if not _homotopic(p, z0, mid, z):
            continue
        worst = max(worst, relative_pair_error(*alt, *ref))
    return worst <= 1e-10, f"worst relative difference between paths {worst:.1e}"


def _homotopic(p, z0, mid, z):
    """The triangle z0, mid, z contains none of the singular points."""
    def side(a, b, c):
        return ((b - a) * (c - a).conjugate()).imag
    for s in (0j, 1 + 0j, p.a):
        d1, d2, d3 = side(z0, mid, s), side(mid, z, s), side(z, z0, s)
        if (d1 > 0) == (d2 > 0) == (d3 > 0):
            return False
    return True


def check_limit_constants(rng):
    worst = 0.0
    for _ in range(2):
        p = random_params(rng, gamma=0.3, coeff_bound=3.0)
        zs = random_points(rng, p, 5, radius=1.5)
        for n in (0, 1):
            A = recover_A(p.with_gamma(-n), zs)
            worst = max(worst, float(np.ptp(np.abs(A - A[0]))) / max(1.0, abs(A[0])))
        B = recover_B(p, zs)
        worst = max(worst, float(np.ptp(np.abs(B - B[0]))) / max(1.0, abs(B[0])))
    return worst <= 1e-7, f"worst spread of A, B over 5 points {worst:.1e}"


def check_backends(rng):
    if kernels.BACKEND != "cython":
        return True, "compiled backend not built; nothing to compare"
    from . import _pykernels
    worst = 0.0
    for _ in range(3):
        p = random_params(rng, coeff_bound=3.0)
        b1 = np.zeros(200, dtype=complex)
        b1[0] = 1
        b2 = b1.copy()
        kernels.recurrence_fill(*p.as_tuple(), b1, 1)
        _pykernels.recurrence_fill(*p.as_tuple(), b2, 1)
        scale = np.maximum(np.abs(b2), 1e-300)
        worst = max(worst, float(np.max(np.abs(b1 - b2) / scale)))
    return worst <= 1e-12, f"worst relative coefficient difference {worst:.1e}"


INVARIANTS = {
    "cutoff": check_cutoff,
    "residue": check_residue,
    "oracle": check_oracle,
    "wronskian": check_wronskian,
    "identity-region": check_identity_region,
    "seams": check_seams,
    "path-independence": check_path_independence,
    "limit-constants": check_limit_constants,
    "backends": check_backends,
}


def run_selftest(seed: int = 0, name_filter: str | None = None) -> Report:
    """Run every invariant whose name contains ``name_filter``."""
    report = Report()
    for name, check in INVARIANTS.items():
        if name_filter and name_filter not in name:
            continue
        rng = np.random.default_rng([seed, len(name)] + [ord(c) for c in name])
        try:
            ok, detail = check(rng)
        except HeunError as exc:
            ok, detail = False, f"raised {exc.category}: {exc.message}"
        report.add(name, ok, detail)
    return report
