"""Compare the compiled and pure-Python hill-climbing kernels.

    python benchmarks/bench_kernel.py --pairs 200 --sizes 6 12 24 40

Each size scores the same seeded graph pairs with every available kernel
and checks that both return identical matches.
"""

import argparse
import random
import time

from amrtriples import _backend
from amrtriples.random_graphs import perturb, random_graph
from amrtriples.smatch import smatch_hillclimb


def make_pairs(count: int, size: int, seed: int):
    rng = random.Random(seed)
    pairs = []
    for _ in range(count):
        ref = random_graph(rng, max_nodes=size, min_nodes=size)
        pairs.append((ref, perturb(ref, rng, edits=max(1, size // 4))))
    return pairs


def time_kernel(kernel, pairs, restarts, repeat):
    best = float("inf")
    scores = None
    for _ in range(repeat):
        start = time.perf_counter()
        scores = [smatch_hillclimb(r, h, restarts=restarts, seed=0, kernel=kernel).matched for r, h in pairs]
        best = min(best, time.perf_counter() - start)
    return best, scores


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--pairs", type=int, default=200)
    ap.add_argument("--sizes", type=int, nargs="+", default=[6, 12, 24, 40])
    ap.add_argument("--restarts", type=int, default=4)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    names = _backend.available()
    kernels = {name: _backend.load_kernel(name) for name in names}
    print(f"kernels: {', '.join(names)}; {args.pairs} pairs per size, {args.restarts} restarts, best of {args.repeat}")
    header = f"{'vars':>5}" + "".join(f"{n + ' ms/pair':>18}" for n in names)
    if len(names) > 1:
        header += f"{'speedup':>10}"
    print(header)
    for size in args.sizes:
        pairs = make_pairs(args.pairs, size, args.seed + size)
        timings, results = {}, {}
        for name, kernel in kernels.items():
            timings[name], results[name] = time_kernel(kernel, pairs, args.restarts, args.repeat)
        if len({tuple(r) for r in results.values()}) != 1:
            raise SystemExit(f"kernels disagree at size {size}")
        row = f"{size:>5}" + "".join(f"{1000 * timings[n] / len(pairs):>18.3f}" for n in names)
        if len(names) > 1:
            row += f"{timings['python'] / timings['cython']:>9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
