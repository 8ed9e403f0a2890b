"""Time the compiled and pure-Python kernels on the same random inputs.

    python3 benchmarks/bench_kernels.py [--sizes 8 32 128] [--repeat 5]

Prints one row per (kernel, size) with the best-of-``repeat`` time for each
backend and the speedup of the compiled one.
"""
import argparse
import timeit

import numpy as np

from frechet_jl.kernels import available_backends


def _inputs(m, seed=0):
    rng = np.random.default_rng(seed)
    a = np.cumsum(rng.normal(size=(m, 3)), axis=0)
    b = np.cumsum(rng.normal(size=(m, 3)), axis=0)
    return a, b


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[8, 32, 128])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)

    backends = available_backends()
    names = sorted(backends)
    if "cython" not in backends:
        print("compiled extension not built; timing the pure-Python backend only")
    print(f"{'kernel':<20}{'m':>6}" + "".join(f"{n + ' (ms)':>16}" for n in names) + f"{'speedup':>10}")
    for m in args.sizes:
        a, b = _inputs(m)
        r = float(np.linalg.norm(a[0] - b[0]) + np.linalg.norm(a[-1] - b[-1]))
        jobs = {
            "free_space": lambda k: k.free_space(a, b, r),
            "decide_frechet": lambda k: k.decide_frechet(a, b, r),
            "decide_weak_frechet": lambda k: k.decide_weak_frechet(a, b, r),
            "discrete_frechet": lambda k: k.discrete_frechet(a, b),
        }
        for kernel, job in jobs.items():
            times = {}
            for n in names:
                mod = backends[n]
                number = 1 if n == "python" and m >= 128 else 3
                t = min(timeit.repeat(lambda: job(mod), number=number, repeat=args.repeat)) / number
                times[n] = t
            row = f"{kernel:<20}{m:>6}" + "".join(f"{times[n] * 1e3:>16.3f}" for n in names)
            speed = times["python"] / times["cython"] if "cython" in times else float("nan")
            print(row + f"{speed:>9.1f}x")


if __name__ == "__main__":
    main()
