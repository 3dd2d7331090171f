"""Compare the compiled trial loop with the numpy fallback.

    python benchmarks/bench_ensemble.py --trials 2000000 --repeat 3
"""
import argparse
import time

import numpy as np

from tsvf.ensemble import kernel, rng
from tsvf.ensemble.engine import _cumulative


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=1_000_000)
    ap.add_argument("--branches", type=int, default=4)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args(argv)

    gen = np.random.default_rng(args.seed)
    cum = _cumulative(gen.random(args.branches))
    accept = gen.random(args.branches)
    key = rng.seed_key(args.seed)

    backends = {"python": kernel.python_tally}
    if kernel.compiled_tally is not None:
        backends["cython"] = kernel.compiled_tally
    else:
        print("compiled extension not built; timing the fallback only")

    results = {}
    for name, tally in backends.items():
        secs, out = best_of(lambda: tally(key, 0, args.trials, cum, accept), args.repeat)
        results[name] = out
        print(f"{name:>7}: {secs:8.4f} s  ({args.trials / secs / 1e6:7.1f} M trials/s)")
    if len(results) == 2:
        same = all(np.array_equal(a, b) for a, b in zip(results["python"], results["cython"]))
        print(f"identical counts: {same}")


if __name__ == "__main__":
    main()
