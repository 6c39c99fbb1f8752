"""Compiled vs pure-Python series kernels.

    python3 benchmarks/bench_kernels.py [--orders 8 16 24] [--repeat 5]

Times the three bivariate kernels (product, quotient, square root) on random
square jets, plus one end-to-end isomer solve, under each available backend.
"""
import argparse
import timeit

import numpy as np

from cuspforge import isomer
from cuspforge.samples import example_f
from cuspforge.series import AVAILABLE_BACKENDS, Jet2, set_backend


def best_of(fn, repeat, number):
    return min(timeit.repeat(fn, repeat=repeat, number=number)) / number


def kernel_cases(order, rng):
    a = Jet2(rng.uniform(-1, 1, (order + 1, order + 1)))
    c = rng.uniform(-1, 1, (order + 1, order + 1))
    c[0, 0] = 2.0  # a unit, so division and sqrt are defined
    b = Jet2(c)
    return {
        "mul2": lambda: a * b,
        "div2": lambda: a / b,
        "sqrt2": lambda: b.sqrt(),
    }


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--orders", type=int, nargs="+", default=[8, 16, 24])
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--solve-order", type=int, default=12)
    args = p.parse_args(argv)

    rng = np.random.default_rng(0)
    rows = []
    for order in args.orders:
        for name, fn in kernel_cases(order, rng).items():
            rows.append((f"{name} N={order}", fn, 20))
    f = example_f(args.solve_order)
    rows.append((f"isomer N={args.solve_order}", lambda: isomer(f, order=args.solve_order), 1))

    print(f"{'case':<18}" + "".join(f"{b:>14}" for b in AVAILABLE_BACKENDS) + ("     speedup" if len(AVAILABLE_BACKENDS) > 1 else ""))
    for label, fn, number in rows:
        times = {}
        for backend in AVAILABLE_BACKENDS:
            prev = set_backend(backend)
            try:
                fn()  # warm up
                times[backend] = best_of(fn, args.repeat, number)
            finally:
                set_backend(prev)
        line = f"{label:<18}" + "".join(f"{times[b] * 1e3:>11.3f} ms" for b in AVAILABLE_BACKENDS)
        if len(times) > 1:
            line += f"{times['python'] / times['compiled']:>11.1f}x"
        print(line)
    if len(AVAILABLE_BACKENDS) == 1:
        print("compiled backend not built; only the pure-Python fallback was timed")


if __name__ == "__main__":
    main()
