import cmath

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from heunreg.errors import InvalidSingularPoint
from heunreg.params import (GammaKind, Verdict, branch_cuts, classify_gamma,
                            in_star_domain, make_params, principal_power)

from conftest import fig

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)
cplx = st.builds(complex, finite, finite)


def test_epsilon_from_fuchsian_relation():
    p = fig(1)
    assert p.epsilon == pytest.approx(-4.2 + 0.9j, abs=1e-14)


def test_epsilon_is_one_for_zero_exponents():
    p = make_params(2.5, 0.7, 0, 0, 0, 0)
    assert p.epsilon == 1


@pytest.mark.parametrize("a", [1, 1 + 1e-13, 0, 1e-13j])
def test_forbidden_a_rejected(a):
    with pytest.raises(InvalidSingularPoint):
        make_params(a, 0.3, 1, 1, 0.5, 1)


def test_nonfinite_rejected():
    with pytest.raises(ValueError):
        make_params(2, float("nan"), 1, 1, 0.5, 1)


def test_params_are_immutable():
    p = fig(0.5)
    with pytest.raises(AttributeError):
        p.gamma = 2


@given(cplx, cplx, cplx, cplx, cplx, cplx)
def test_fuchsian_closure(a, q, al, be, ga, de):
    if abs(a) < 1e-3 or abs(a - 1) < 1e-3:
        return
    p = make_params(a, q, al, be, ga, de)
    lhs = p.alpha + p.beta + 1
    rhs = p.gamma + p.delta + p.epsilon
    assert abs(lhs - rhs) <= 1e-14 * max(1.0, abs(lhs), abs(p.gamma), abs(p.delta))


def test_index_transform_keeps_epsilon_and_delta():
    p = fig(0.37 + 0.2j)
    t = p.index_transformed()
    assert t.gamma == 2 - p.gamma
    assert t.delta == p.delta
    assert abs(t.epsilon - p.epsilon) < 1e-14
    assert abs(t.q - (p.q - (p.gamma - 1) * (p.epsilon + p.a * p.delta))) < 1e-14


@pytest.mark.parametrize("gamma, kind, n_star", [
    (0.7 + 0.7j, GammaKind.REGULAR, None),
    (-2, GammaKind.AT_NONPOSITIVE, 2),
    (-2 + 1e-15, GammaKind.AT_NONPOSITIVE, 2),
    (-2 + 1e-13, GammaKind.NEAR_NONPOSITIVE, 2),
    (1.3, GammaKind.NEAR_ONE, None),
    (1, GammaKind.AT_ONE, None),
    (0.5, GammaKind.REGULAR, None),
    (-3.4j, GammaKind.REGULAR, None),
])
def test_classify_examples(gamma, kind, n_star):
    c = classify_gamma(gamma)
    assert c.kind is kind
    if n_star is not None:
        assert c.n_star == n_star


def test_classify_near_one_offset():
    c = classify_gamma(1.3)
    assert c.offset == pytest.approx(0.3)
    assert c.distance == pytest.approx(0.3)


def test_classify_partition_on_dense_grid():
    for x in np.linspace(-5.6, 2.6, 165):
        for y in np.linspace(-1.1, 1.1, 45):
            g = complex(x, y)
            c = classify_gamma(g)
            n = max(0, round(-x))
            near_np = abs(g + n) < 0.5
            near_one = abs(g - 1) < 0.5
            assert not (near_np and near_one)
            if near_np:
                assert c.kind in (GammaKind.NEAR_NONPOSITIVE, GammaKind.AT_NONPOSITIVE)
                assert c.n_star == n
            elif near_one:
                assert c.kind in (GammaKind.NEAR_ONE, GammaKind.AT_ONE)
            else:
                assert c.kind is GammaKind.REGULAR


def test_classify_boundary_is_the_half_circle():
    for phi in np.linspace(0, 2 * np.pi, 13):
        u = cmath.exp(1j * phi)
        assert classify_gamma(-1 + 0.4999999 * u).kind is GammaKind.NEAR_NONPOSITIVE
        outside = classify_gamma(-1 + 0.5000001 * u)
        assert outside.kind is GammaKind.REGULAR or outside.n_star != 1
        assert classify_gamma(1 + 0.4999999 * u).kind is GammaKind.NEAR_ONE


def test_star_domain_examples():
    cuts = branch_cuts(1 + 1j)
    assert in_star_domain(0.5, cuts) is Verdict.INSIDE
    assert in_star_domain(2.0, cuts) is Verdict.ON_CUT
    assert in_star_domain(-1, cuts, True) is Verdict.ON_CUT
    assert in_star_domain(-1, cuts, False) is Verdict.INSIDE
    assert in_star_domain(2 + 2j, cuts) is Verdict.ON_CUT
    assert in_star_domain(complex("inf"), cuts) is Verdict.OUTSIDE_SHEET


def test_cut_a_inf_never_contains_origin():
    for a in [1 + 1j, -2, 0.5j, 3 - 0.1j]:
        cuts = branch_cuts(a)
        assert cuts.cut_a_inf.distance(0) == pytest.approx(abs(a))
        assert cuts.cut_a_inf.distance(a) == 0
        assert cuts.cut_a_inf.distance(a * 7) == pytest.approx(0, abs=1e-12)


@settings(max_examples=200)
@given(cplx, st.floats(0.01, 1.0))
def test_star_property(z, t):
    cuts = branch_cuts(1.5 - 2j)
    if in_star_domain(z, cuts, True) is Verdict.INSIDE:
        assert in_star_domain(t * z, cuts, True) is Verdict.INSIDE


def test_principal_power_branch():
    assert principal_power(-4 + 0j, 0.5) == pytest.approx(2j)
    assert principal_power(-4 - 1e-300j, 0.5).imag < 0
    assert principal_power(0j, 0.5) == 0
