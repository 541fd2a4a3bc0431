"""Compare the numba and pure-numpy kernels.

    python benchmarks/bench_kernels.py [--repeat N]

Each kernel is run once untimed (numba compiles on first call), then timed
as the best of N runs. Results are also checked for equality.
"""

import argparse
import time

import numpy as np

from hyperpencil import kernels
from hyperpencil.pencil import fiber_params, paper_example
from hyperpencil.search import residue_filter


def best_of(fn, repeat):
    fn()
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases():
    spec = paper_example()
    filt = residue_filter(spec, fiber_params(spec, 7))
    H = 1000
    s_vals = np.arange(21, 200_001, dtype=np.int64)
    roots = np.array([0, 2, 6, 8, 12, 20], dtype=np.int64)
    return {
        "survivor_mask H=1000": lambda k: k.survivor_mask(
            -H, H + 1, H, filt.moduli, filt.offsets, filt.tables),
        "omega_sieve n=2e6": lambda k: k.omega_sieve(2_000_000),
        "spf_sieve n=2e6": lambda k: k.spf_sieve(2_000_000),
        "product_omega s<=2e5": lambda k: k.product_omega(s_vals, roots, 200_000),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if kernels.numba_impl is None:
        raise SystemExit("numba is not available (or disabled); nothing to compare")
    print(f"{'kernel':<24}{'numpy s':>10}{'numba s':>10}{'speedup':>9}  equal")
    for name, run in cases().items():
        a = run(kernels.numpy_impl)
        b = run(kernels.numba_impl)
        tn = best_of(lambda: run(kernels.numpy_impl), args.repeat)
        tb = best_of(lambda: run(kernels.numba_impl), args.repeat)
        print(f"{name:<24}{tn:>10.4f}{tb:>10.4f}{tn / tb:>9.1f}  {np.array_equal(a, b)}")


if __name__ == "__main__":
    main()
