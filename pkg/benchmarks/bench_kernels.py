"""Compare the compiled and pure-Python kernels.

Run with ``python benchmarks/bench_kernels.py``. Each kernel is timed on
identical inputs for both backends and the results are checked to agree.
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from heunreg import _pykernels
from heunreg.params import make_params

try:
    from heunreg import _ckernels
except ImportError:  # extension not built
    _ckernels = None

PARAMS = make_params(1 + 1j, 0.3, 1.4 + 0.9j, 1.1, 0.5, 6.7)


def _cases(mod):
    args = PARAMS.as_tuple()
    centers = np.linspace(0.3j, 2.5j, 12)

    def fill():
        b = np.zeros(2000, dtype=complex)
        b[0] = 1
        mod.recurrence_fill(*args, b, 1)
        return b

    coeffs = fill()
    coeffs[:] = np.where(np.isfinite(coeffs), coeffs, 0)
    return {
        "recurrence_fill(2000)": fill,
        "series_sum(z=0.6i)": lambda: mod.series_sum(coeffs, 0.6j, 1e-15),
        "taylor_coeffs(200)": lambda: mod.taylor_coeffs(*args, 0.5j, 1.0, 0.5, 200),
        "continue_path(12 centers)": lambda: mod.continue_path(
            *args, centers, 1.0 + 0j, 0.5 + 0j, 1e-15, 2000),
    }


def _result_vector(res):
    if isinstance(res, np.ndarray):
        return res
    return np.array([x for x in res if isinstance(x, complex)], dtype=complex)


def run(repeat: int = 5, number: int = 200):
    backends = [("python", _pykernels)]
    if _ckernels is not None:
        backends.append(("cython", _ckernels))
    timings = {}
    outputs = {}
    for name, mod in backends:
        for case, fn in _cases(mod).items():
            t = min(timeit.repeat(fn, repeat=repeat, number=number)) / number
            timings[(case, name)] = t
            outputs[(case, name)] = _result_vector(fn())
    print(f"{'kernel':28s} {'python [us]':>12s} {'cython [us]':>12s} {'speed-up':>9s} {'max rel diff':>13s}")
    for case in _cases(_pykernels):
        tp = timings[(case, "python")] * 1e6
        if _ckernels is None:
            print(f"{case:28s} {tp:12.1f} {'-':>12s} {'-':>9s} {'-':>13s}")
            continue
        tc = timings[(case, "cython")] * 1e6
        a, b = outputs[(case, "python")], outputs[(case, "cython")]
        diff = np.max(np.abs(a - b) / np.maximum(np.abs(a), 1e-300)) if len(a) else 0.0
        print(f"{case:28s} {tp:12.1f} {tc:12.1f} {tp / tc:8.1f}x {diff:13.1e}")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--number", type=int, default=200)
    args = parser.parse_args()
    run(args.repeat, args.number)


if __name__ == "__main__":
    main()
