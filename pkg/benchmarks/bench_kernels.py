"""Time the simulation kernels under both backends.

Usage: python benchmarks/bench_kernels.py [--length L] [--alphabet N] [--repeat R]

The numba kernels are compiled once before timing. Results go to stdout as
a small table; both backends must agree on every output.
"""
import argparse
import time

import numpy as np

from lrumiss.model import PowerLaw
from lrumiss.sim import generate_irm_trace, kernels
from lrumiss.sim._accel import HAVE_NUMBA


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--length", type=int, default=2 * 10 ** 6)
    parser.add_argument("--alphabet", type=int, default=2 ** 15)
    parser.add_argument("--exponent", type=float, default=1.0)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    trace = generate_irm_trace(PowerLaw(args.exponent, args.alphabet), args.length, seed=1)
    ids, n = trace.accesses, trace.alphabet
    D = args.alphabet // 4
    prev = kernels.previous_occurrence_np(ids, n)

    cases = {
        "previous_occurrence": (lambda: kernels.previous_occurrence_nb(ids, n),
                                lambda: kernels.previous_occurrence_np(ids, n)),
        "stack_distances": (lambda: kernels.stack_distances_nb(prev),
                            lambda: kernels.stack_distances_np(prev)),
        f"lru_misses(D={D})": (lambda: kernels.lru_misses_nb(ids, n, D, 0),
                               lambda: kernels.lru_misses_np(ids, n, D, 0)),
    }

    print(f"L={args.length} N={args.alphabet} a={args.exponent} best of {args.repeat}")
    print(f"{'kernel':<24}{'numba [s]':>12}{'numpy [s]':>12}{'speedup':>10}")
    for name, (nb, np_) in cases.items():
        t_np, out_np = best_of(np_, args.repeat)
        if HAVE_NUMBA:
            nb()  # compile
            t_nb, out_nb = best_of(nb, args.repeat)
            assert np.array_equal(np.asarray(out_nb), np.asarray(out_np)), name
            print(f"{name:<24}{t_nb:>12.4f}{t_np:>12.4f}{t_np / t_nb:>10.1f}")
        else:
            print(f"{name:<24}{'n/a':>12}{t_np:>12.4f}{'':>10}")


if __name__ == "__main__":
    main()
