"""Compare the compiled and pure-Python kernels on generated graphs.

    python3 benchmarks/bench_kernels.py --nodes 5000 --repeat 3
"""

import argparse
import time

from provapt import _backend
from provapt.aggregate import apt
from provapt.conformance import greatest_simulation
from provapt.generators import generate_random
from provapt.metrics import compute_mfd
from provapt.ptype import compute_signatures


def best_of(repeat, fn):
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--nodes", type=int, default=5000)
    parser.add_argument("--density", type=float, default=2.0)
    parser.add_argument("--k", type=int, default=3)
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args(argv)

    doc = generate_random(args.nodes, args.density, args.seed)
    small = generate_random(min(args.nodes, 1000), args.density, args.seed)
    summary = apt(small, 1)
    print(f"graph: {len(doc.nodes)} nodes, {len(doc.edges)} edges, k={args.k}")
    print(f"{'kernel':<22}" + "".join(f"{name:>12}" for name in _backend.BACKENDS))
    rows = {
        "signatures": lambda b: compute_signatures(doc, args.k, backend=b),
        "greatest simulation": lambda b: greatest_simulation(small, summary, backend=b),
        "mfd": lambda b: compute_mfd(doc, backend=b),
    }
    for label, fn in rows.items():
        times = [best_of(args.repeat, lambda b=name: fn(b)) for name in _backend.BACKENDS]
        print(f"{label:<22}" + "".join(f"{t:>11.3f}s" for t in times))


if __name__ == "__main__":
    main()
