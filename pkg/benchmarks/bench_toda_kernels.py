"""Compare the compiled and numpy Toda kernels.

Times residual evaluation, banded Jacobian assembly and a full
``solve_connection`` with each backend.  Run with

    python benchmarks/bench_toda_kernels.py [--repeat 20]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from coxtk import _toda_py, kernels
from coxtk.connection import AsymptoticData, m_from_k, minimal_model_k
from coxtk.toda import TodaProblem, solve_connection

try:
    from coxtk import _toda_c
except ImportError:  # pragma: no cover
    _toda_c = None


def _best(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def _solve_with(mod, problem):
    saved = kernels.residual, kernels.jacobian_banded
    kernels.residual, kernels.jacobian_banded = mod.residual, mod.jacobian_banded
    try:
        return solve_connection(problem)
    finally:
        kernels.residual, kernels.jacobian_banded = saved


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=20)
    args = ap.parse_args()
    if _toda_c is None:
        print("compiled kernels not built; only the numpy backend is available")
    cases = [
        ("n=1 m0=-0.25", TodaProblem(AsymptoticData((-0.25, 0.25)))),
        ("n=1 m0=-0.40", TodaProblem(AsymptoticData((-0.4, 0.4)))),
        ("n=3 minimal", TodaProblem(m_from_k(minimal_model_k(3)))),
    ]
    backends = [("python", _toda_py)] + ([("cython", _toda_c)] if _toda_c is not None else [])
    print(f"{'case':<14} {'nodes':>6} {'backend':<7} {'residual ms':>12} {'jacobian ms':>12} {'solve ms':>9}")
    for name, prob in cases:
        x = prob.x()
        m = np.asarray(prob.m.m)
        rng = np.random.default_rng(0)
        w = rng.normal(scale=0.1, size=(x.size, prob.n + 1))
        w -= w.mean(axis=1, keepdims=True)
        args_k = (w, x * x, prob.step(), m, prob.inv_p())
        for label, mod in backends:
            tr = _best(lambda: mod.residual(*args_k), args.repeat)
            tj = _best(lambda: mod.jacobian_banded(*args_k), args.repeat)
            ts = _best(lambda: _solve_with(mod, prob), max(1, args.repeat // 5))
            print(f"{name:<14} {x.size:>6} {label:<7} {1e3 * tr:>12.3f} {1e3 * tj:>12.3f} {1e3 * ts:>9.1f}")


if __name__ == "__main__":
    main()
