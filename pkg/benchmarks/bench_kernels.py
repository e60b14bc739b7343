"""Compare subset-rank backends on the full 2^M rank table and on a CP scan.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--seed 0]

Backends: ``compiled`` (int64 Bareiss, small entries), ``modular`` (the
compiled kernel mod 2^31 - 1 with exact rechecks, large entries), ``python``
(arbitrary-precision Bareiss) and ``svd`` (batched float ranks, for scale).
"""

import argparse
import time

import numpy as np

from framelab import numerics as nm
from framelab.kernels import IntKernel, compiled_available
from framelab.subsets import float_ranks, subset_order

CASES = [
    # (M, N, entry bound)
    (8, 3, 10),
    (12, 4, 10),
    (14, 5, 10),
    (12, 4, 10**6),
    (14, 6, 1000),
]


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def bench_case(m, n, bound, rng, repeat):
    rows = rng.integers(-bound, bound + 1, size=(m, n)).tolist()
    masks = np.arange(1 << m, dtype=np.int64)
    order = subset_order(m, representatives=True)
    results = {}
    backends = ["python"] + (["compiled"] if compiled_available() else [])
    for backend in backends:
        k = IntKernel(rows, n, backend)
        t_tab, table = best_of(lambda: k.ranks(masks), repeat)
        t_cp, found = best_of(lambda: k.cp_search(order), repeat)
        results[k.backend] = (t_tab, t_cp, table, found)
    a = nm.as_float(nm.exact_array(rows))
    t_svd, svd_table = best_of(lambda: float_ranks(a, masks), repeat)
    tables = [r[2] for r in results.values()]
    agree = all(np.array_equal(tables[0], t) for t in tables[1:]) and len({r[3] for r in results.values()}) == 1
    return results, t_svd, agree, np.array_equal(tables[0], svd_table)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    rng = np.random.default_rng(args.seed)
    print(f"compiled kernel available: {compiled_available()}")
    header = f"{'M':>3} {'N':>2} {'bound':>8} {'backend':>9} {'table [s]':>10} {'cp scan [s]':>12} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for m, n, bound in CASES:
        results, t_svd, agree, svd_agree = bench_case(m, n, bound, rng, args.repeat)
        base = results["python"][0]
        for name, (t_tab, t_cp, _, _) in results.items():
            print(f"{m:>3} {n:>2} {bound:>8} {name:>9} {t_tab:>10.4f} {t_cp:>12.5f} {base / t_tab:>7.1f}x")
        print(f"{m:>3} {n:>2} {bound:>8} {'svd':>9} {t_svd:>10.4f} {'':>12} {base / t_svd:>7.1f}x")
        note = "exact backends agree" if agree else "EXACT BACKENDS DISAGREE"
        print(f"    {note}; float ranks {'match' if svd_agree else 'differ'}")


if __name__ == "__main__":
    main()
