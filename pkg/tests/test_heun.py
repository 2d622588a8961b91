import cmath

import numpy as np
import pytest

from heunreg.cli import verify
from heunreg.errors import OnCut, PoleAtGamma
from heunreg.heun import heunl, heuns
from heunreg.params import make_params
from heunreg.selftest import random_params, random_points

from conftest import fig


def ode_residual(fn, params, z, h=1e-3):
    """|H'' + p H' + r H| with H'' from a five-point stencil, and its scale."""
    a, q, al, be, g, de, ep = params.as_tuple()
    vals = [fn(params, z + k * h).value for k in (-2, -1, 0, 1, 2)]
    d2 = (-vals[0] + 16 * vals[1] - 30 * vals[2] + 16 * vals[3] - vals[4]) / (12 * h * h)
    r = fn(params, z)
    p_ = g / z + de / (z - 1) + ep / (z - a)
    r_ = (al * be * z - q) / (z * (z - 1) * (z - a))
    terms = [d2, p_ * r.derivative, r_ * r.value]
    return abs(sum(terms)), max(abs(t) for t in terms)


def test_normalization_at_origin(rng):
    for _ in range(5):
        p = random_params(rng, gamma=0.4 - 0.3j)
        r = heunl(p, 0)
        assert r.value == 1
        assert r.derivative == pytest.approx(p.q / (p.a * p.gamma), rel=1e-14)


def test_constant_solution():
    p = make_params(2 - 1j, 0, 0, 1.3, 0.4, 2.2)
    r = heunl(p, 0.7j)
    assert r.value == pytest.approx(1, abs=1e-14)
    assert r.derivative == pytest.approx(0, abs=1e-14)


@pytest.mark.parametrize("fn", [heunl, heuns])
@pytest.mark.parametrize("gamma", [0.5, 0.5 + 0.3j, -1.3 + 0.2j, 2.6, 1])
def test_agrees_with_oracle(fn, gamma):
    p = fig(gamma)
    name = fn.__name__
    for z in (1j, -1.2 + 0.4j, 0.3, 1.5 - 2j, 0.4 + 1.8j):
        r = fn(p, z)
        assert verify(name, p, z, r) <= 1e-9


def test_agrees_with_oracle_random(rng):
    for _ in range(10):
        p = random_params(rng, coeff_bound=3.0)
        for z in random_points(rng, p, 2):
            for fn in (heunl, heuns):
                try:
                    r = fn(p, z)
                except PoleAtGamma:
                    continue
                assert verify(fn.__name__, p, z, r) <= 1e-9


def test_heuns_leading_term_at_gamma_zero():
    p = fig(0)
    for z in (1e-4j, 1e-6 + 1e-6j):
        assert heuns(p, z).value / z == pytest.approx(1, abs=1e-3)
    assert abs(heuns(p, 1e-8j).value / 1e-8j - 1) < 1e-6


def test_heuns_is_index_transform():
    p = fig(0.5)
    t = make_params(p.a, p.q - (p.gamma - 1) * (p.epsilon + p.a * p.delta),
                    p.alpha - p.gamma + 1, p.beta - p.gamma + 1, 2 - p.gamma, p.delta)
    z = 0.25
    expect = np.sqrt(z) * heunl(t, z).value
    assert heuns(p, z).value == pytest.approx(expect, rel=1e-12)
    assert heuns(p, z).flags.used_index_transform


def test_gamma_one_log_solution():
    p = fig(1)
    r = heuns(p, 0.3)
    assert np.isfinite(r.value) and r.flags.used_log_case
    assert verify("heuns", p, 0.3, r) <= 1e-9
    L = heunl(p, 0.3)
    W = L.value * r.derivative - L.derivative * r.value
    assert abs(W) > 1e-3


def test_gamma_one_degeneration_of_transform():
    p = fig(1 + 1e-12)
    for z in (0.3, 1j, -1 + 0.5j):
        assert heuns(p, z).value == pytest.approx(heunl(p, z).value, rel=1e-9)


@pytest.mark.parametrize("fn", [heunl, heuns])
def test_finite_difference_ode_residual(fn, rng):
    for _ in range(4):
        p = random_params(rng, gamma=0.3 + 0.4j, coeff_bound=2.0)
        for z in random_points(rng, p, 2, radius=2.0, clearance=0.3):
            res, scale = ode_residual(fn, p, z)
            assert res <= 1e-5 * scale


def test_no_cut_on_unit_interval():
    p = fig(0.5 + 0.2j)
    for x in (0.2, 0.55, 0.9):
        up = heunl(p, complex(x, 1e-9)).value
        down = heunl(p, complex(x, -1e-9)).value
        mid = heunl(p, x)
        # a cut would show up as an O(1) jump; smooth variation is O(h H')
        assert abs(up - down) <= 3e-9 * abs(mid.derivative) + 1e-12 * abs(mid.value)


def test_heuns_pole():
    with pytest.raises(PoleAtGamma) as exc:
        heuns(fig(2), 1j)
    assert exc.value.integer == 2


def test_cut_zero_for_heuns():
    with pytest.raises(OnCut):
        heuns(fig(0.5), -2)
    # integer exponent 1 - gamma: no branch point at the origin
    assert np.isfinite(heuns(fig(-1 + 0j), 0.0).value)


def test_log_case_uses_cut_zero():
    p = fig(-1)
    r = heunl(p, 1j)
    assert r.flags.used_log_case
    with pytest.raises(OnCut):
        heunl(p, -0.5)
    assert np.isfinite(heunl(fig(0.5), -2).value)


def test_log_case_without_log_term_has_no_cut():
    p = make_params(1 + 1j, 0, 1.4, 1.1, 0, 6.7)
    assert np.isfinite(heunl(p, -0.5).value)


def test_near_pole_error_inflation():
    near = heunl(fig(-2 + 1e-3), 1j)
    far = heunl(fig(-2 + 0.2), 1j)
    assert near.err_est > 0 and far.err_est >= 0
    assert near.err_est / abs(near.value) > 10 * far.err_est / abs(far.value)


def test_log_solutions_agree_with_oracle():
    for g in (0, -1, -2, -3):
        p = fig(g)
        for z in (1j, -1 + 1j, 2 - 1j):
            assert verify("heunl", p, z, heunl(p, z)) <= 1e-9
            assert verify("heuns", p, z, heuns(p, z)) <= 1e-9


def test_principal_branch_of_prefactor():
    p = fig(0.5)
    t = p.index_transformed()
    z = -1 + 1e-3j
    r = heuns(p, z)
    expect = cmath.exp(0.5 * cmath.log(z)) * heunl(t, z).value
    assert r.value == pytest.approx(expect, rel=1e-12)
