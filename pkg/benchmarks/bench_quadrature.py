"""Time the oracle's quadrature kernel with the numba and numpy backends.

    python3 benchmarks/bench_quadrature.py --repeat 5

The compiled backend is warmed up first so compile time is reported
separately from steady-state cost.
"""

import argparse
import math
import time

from dtmrisk import EllipticalDistribution, Laplace, Logistic, Normal, PearsonVII, StudentT, make_window
from dtmrisk import kernels
from dtmrisk.oracle import oracle_report

FAMILIES = [Normal(), StudentT(6.0), Logistic(), Laplace(), PearsonVII(4.0)]
WINDOWS = [(0.05, 0.95), (0.0, 0.4), (0.7, 1.0), (0.0, 1.0)]


def kernel_workload(backend):
    for fam in FAMILIES:
        c1 = fam.normalizer("c1")
        for a, b in ((-1.5, 0.7), (-math.inf, 1.0), (0.5, math.inf), (-math.inf, math.inf)):
            for n in range(5):
                kernels.integrate_polynomial_weight(fam, 0.3, 1.2, n, c1, a, b, backend=backend)


def oracle_workload(backend):
    for fam in FAMILIES:
        d = EllipticalDistribution(0.2, 1.3, fam)
        for p, q in WINDOWS:
            oracle_report(d, make_window(d, p, q), rule="gauss-legendre", backend=backend)


def best_of(fn, backend, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn(backend)
        times.append(time.perf_counter() - start)
    return min(times)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)

    start = time.perf_counter()
    kernel_workload("numba")
    print(f"numba first call (includes compilation): {time.perf_counter() - start:.2f} s")

    print(f"{'workload':<10}{'numba [ms]':>12}{'numpy [ms]':>12}{'speed-up':>10}")
    for label, fn in (("kernel", kernel_workload), ("oracle", oracle_workload)):
        t_nb = best_of(fn, "numba", args.repeat)
        t_np = best_of(fn, "numpy", args.repeat)
        print(f"{label:<10}{1e3 * t_nb:>12.1f}{1e3 * t_np:>12.1f}{t_np / t_nb:>9.1f}x")


if __name__ == "__main__":
    main()
