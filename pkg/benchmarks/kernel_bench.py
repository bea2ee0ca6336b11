"""Benchmark the numba kernels against the pure-numpy fallback.

Usage: python benchmarks/kernel_bench.py [--trials N] [--repeat K]
"""

import argparse
import time

import numpy as np

from mixcomm import default_system
from mixcomm.gaussian import gauss_score_params
from mixcomm.likelihoods import build_symbol_likelihoods
from mixcomm.rng import RngStream
from mixcomm.system import _chain_args
from mixcomm import _kernels_numpy

try:
    from mixcomm import _kernels_numba
except ImportError:
    _kernels_numba = None


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--trials", type=int, default=200_000)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    sysd = default_system("SIN")
    chain_args = _chain_args(sysd)
    rng = RngStream(1234, 0)
    keys = rng.substream_keys(args.trials)
    syms = np.ascontiguousarray(np.tile([5e4, 3e4], (args.trials, 1)))

    alphabet = np.array(
        [[2e4, 1.5e4], [1e5, 5e4], [6e4, 3e4], [3e4, 4e4],
         [8e4, 2e4], [4e4, 4.5e4], [9e4, 3.5e4], [2.5e4, 2.5e4]]
    )
    table = build_symbol_likelihoods(alphabet, sysd)
    means, linvs, logks = gauss_score_params(table.beliefs)
    _, _, z = _kernels_numpy.simulate_chain(keys, syms, *chain_args)

    mu_i = np.array([0.0, 0.0])
    mu_j = np.array([1.5, 0.5])
    linv = np.linalg.inv(np.linalg.cholesky(np.eye(2)))
    nc = 1.0 / (2 * np.pi)
    lo = np.array([-6.0, -6.0])
    hi = np.array([7.5, 6.5])

    cases = {
        "simulate_chain": lambda mod: mod.simulate_chain(keys, syms, *chain_args),
        "gauss_argmax": lambda mod: mod.gauss_argmax(z, means, linvs, logks),
        "pep_overlap": lambda mod: [
            mod.pep_overlap(mu_i, linv, nc, mu_j, linv, nc, lo, hi, 201)
            for _ in range(50)
        ],
    }

    backends = [("numpy", _kernels_numpy)]
    if _kernels_numba is not None:
        for fn in cases.values():
            fn(_kernels_numba)  # warm the JIT outside the timing loop
        backends.append(("numba", _kernels_numba))

    print(f"{args.trials} trials, best of {args.repeat}")
    print(f"{'kernel':<16} " + " ".join(f"{name:>12}" for name, _ in backends) + "  speedup")
    for case, fn in cases.items():
        times = [best_of(lambda m=mod: fn(m), args.repeat) for _, mod in backends]
        speed = f"{times[0] / times[-1]:.1f}x" if len(times) > 1 else "-"
        cols = " ".join(f"{t * 1e3:10.1f}ms" for t in times)
        print(f"{case:<16} {cols}  {speed}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
