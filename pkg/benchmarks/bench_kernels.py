"""Time the compiled Steiner kernels against the pure-Python fallback.

Run with ``python3 benchmarks/bench_kernels.py [--repeat N]``.
"""

from __future__ import annotations

import argparse
import random
import timeit

from treespile import _kernels_py
from treespile.hardware import heavy_hex

try:
    from treespile import _kernels as _kernels_c
except ImportError:  # extension not built
    _kernels_c = None


def _workload(seed: int = 0, count: int = 200):
    g = heavy_hex(127)
    rng = random.Random(seed)
    terminal_sets = [sorted(rng.sample(range(g.n), rng.randint(2, 8))) for _ in range(count)]
    return g, terminal_sets


def bench(module, g, terminal_sets, repeat: int) -> dict[str, float]:
    n, indptr, indices, dist, nexthop = g.kernel_args()
    out = {}
    out["bfs_all_pairs"] = min(timeit.repeat(lambda: module.bfs_all_pairs(n, indptr, indices), number=1, repeat=repeat))
    for name in ("pptt_steiner", "kou_steiner"):
        fn = getattr(module, name)

        def run():
            for t in terminal_sets:
                fn(t, n, indptr, indices, dist, nexthop)

        out[name] = min(timeit.repeat(run, number=1, repeat=repeat))
    return out


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    g, sets = _workload()
    py = bench(_kernels_py, g, sets, args.repeat)
    cy = bench(_kernels_c, g, sets, args.repeat) if _kernels_c is not None else None
    print(f"heavy_hex(127), {len(sets)} terminal sets, best of {args.repeat}")
    print(f"{'kernel':<15}{'python [ms]':>13}{'cython [ms]':>13}{'speedup':>10}")
    for name, t in py.items():
        if cy is None:
            print(f"{name:<15}{t * 1e3:>13.2f}{'n/a':>13}{'n/a':>10}")
        else:
            print(f"{name:<15}{t * 1e3:>13.2f}{cy[name] * 1e3:>13.2f}{t / cy[name]:>9.1f}x")


if __name__ == "__main__":
    main()
