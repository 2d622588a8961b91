import numpy as np

from heunreg.params import dist_to_nonpositive
from heunreg.selftest import (INVARIANTS, random_gamma, random_params, random_points,
                              relative_pair_error, run_selftest)


def test_full_selftest_passes():
    report = run_selftest(seed=0)
    assert [name for name, _, _ in report.results] == list(INVARIANTS)
    assert report.passed, "\n".join(report.lines())


def test_filter_and_determinism():
    a = run_selftest(seed=3, name_filter="residue")
    b = run_selftest(seed=3, name_filter="residue")
    assert len(a.results) == 1 and a.results == b.results


def test_report_lines():
    report = run_selftest(seed=1, name_filter="cutoff")
    lines = list(report.lines())
    assert lines[0].startswith("PASS cutoff") and lines[-1] == "1/1 invariants passed"


def test_random_parameter_ranges(rng):
    for _ in range(200):
        p = random_params(rng)
        assert 0.5 <= abs(p.a) <= 3
        assert max(abs(p.q), abs(p.alpha), abs(p.beta), abs(p.delta)) <= 5


def test_gamma_mixture_hits_vicinities(rng):
    gs = [random_gamma(rng) for _ in range(400)]
    near = sum(dist_to_nonpositive(g) < 0.5 or abs(g - 1) < 0.5 for g in gs)
    assert 0 < near < len(gs)


def test_random_points_clear_of_singularities(rng):
    p = random_params(rng)
    for z in random_points(rng, p, 20, clearance=0.1):
        assert min(abs(z), abs(z - 1), abs(z - p.a)) >= 0.1


def test_relative_pair_error():
    assert relative_pair_error(1, 1, 1, 1) == 0
    assert np.isclose(relative_pair_error(1.1, 1, 1, 1), 0.05)
