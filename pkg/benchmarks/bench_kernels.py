"""Time the compiled and pure-Python kernels on the same inputs.

    python3 benchmarks/bench_kernels.py --n 1000000 --repeat 3
"""
import argparse
import timeit

import numpy as np

from maxtail._backend import load


def _cases(n, rng):
    x = rng.pareto(1.5, n) + 1.0
    z = rng.standard_normal(n)
    chunk = x[: min(n, 65536)]
    return {
        "block_log_sums": lambda k: k.block_log_sums(x),
        "stream_extend": lambda k: k.stream_extend(
            np.zeros(64), np.zeros(64), np.zeros(64, dtype=np.int64), chunk, 0
        ),
        "max_ar1": lambda k: k.max_ar1(np.abs(z), 0.9, 1.0),
        "ar1": lambda k: k.ar1(z, 0.9, 0.0),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=1_000_000)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    backends = {"python": load("python")}
    try:
        backends["compiled"] = load("compiled")
    except ImportError:
        print("compiled core not available; timing the python kernels only")

    cases = _cases(args.n, np.random.default_rng(args.seed))
    print(f"{'kernel':<16}" + "".join(f"{b:>12}" for b in backends) + f"{'speedup':>10}")
    for name, fn in cases.items():
        times = {b: min(timeit.repeat(lambda: fn(k), number=1, repeat=args.repeat)) for b, k in backends.items()}
        speed = times["python"] / times["compiled"] if "compiled" in times else float("nan")
        print(f"{name:<16}" + "".join(f"{t:>11.4f}s" for t in times.values()) + f"{speed:>9.1f}x")


if __name__ == "__main__":
    main()
