import os
import subprocess
import sys

import numpy as np
import pytest

from heunreg import _pykernels, kernels
from heunreg.params import make_params

from conftest import fig

try:
    from heunreg import _ckernels
except ImportError:
    _ckernels = None

needs_c = pytest.mark.skipif(_ckernels is None, reason="compiled backend not built")


@needs_c
def test_recurrence_backends_agree():
    p = fig(0.3 + 0.2j)
    b1 = np.zeros(500, dtype=complex)
    b1[0] = 1
    b2 = b1.copy()
    _ckernels.recurrence_fill(*p.as_tuple(), b1, 1)
    _pykernels.recurrence_fill(*p.as_tuple(), b2, 1)
    np.testing.assert_allclose(b1, b2, rtol=1e-13)


@needs_c
def test_forced_recurrence_backends_agree():
    p = fig(-1)
    s = np.zeros(100, dtype=complex)
    s[2] = 1
    _pykernels.recurrence_fill(*p.as_tuple(), s, 3)
    c1 = np.zeros(100, dtype=complex)
    c1[0] = 1
    c1[1] = 0.7
    c2 = c1.copy()
    _ckernels.recurrence_fill(*p.as_tuple(), c1, 3, 0.4 - 0.1j, s)
    _pykernels.recurrence_fill(*p.as_tuple(), c2, 3, 0.4 - 0.1j, s)
    np.testing.assert_allclose(c1, c2, rtol=1e-13)


@needs_c
def test_series_sum_backends_agree():
    c = np.array([1 / (k + 1) for k in range(200)], dtype=complex)
    a = _ckernels.series_sum(c, 0.5 + 0.3j, 1e-15)
    b = _pykernels.series_sum(c, 0.5 + 0.3j, 1e-15)
    assert a[4] and b[4]
    assert abs(a[0] - b[0]) <= 1e-14 * abs(b[0])
    assert abs(a[1] - b[1]) <= 1e-14 * abs(b[1])


@needs_c
def test_taylor_backends_agree():
    p = make_params(1 + 1j, 0.3, 1.4 + 0.9j, 1.1, 0.5, 6.7)
    a = _ckernels.taylor_coeffs(*p.as_tuple(), 0.4 + 0.3j, 1.0, 0.5j, 60)
    b = _pykernels.taylor_coeffs(*p.as_tuple(), 0.4 + 0.3j, 1.0, 0.5j, 60)
    np.testing.assert_allclose(a, b, rtol=1e-12, atol=1e-300)


def test_backend_name():
    assert kernels.BACKEND in ("cython", "python")


def test_pure_python_switch():
    code = ("from heunreg import kernels, heunl, make_params; "
            "p = make_params(1+1j, 0.3, 1.4+0.9j, 1.1, 0.5, 6.7); "
            "print(kernels.BACKEND, repr(heunl(p, 1j).value))")
    env = dict(os.environ, HEUNREG_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True,
                         text=True, check=True).stdout.split(" ", 1)
    assert out[0] == "python"
    from heunreg import heunl
    v = complex(out[1])
    ref = heunl(fig(0.5), 1j).value
    assert abs(v - ref) <= 1e-12 * abs(ref)
