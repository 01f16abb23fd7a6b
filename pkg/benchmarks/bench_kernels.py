"""Compare the compiled and NumPy sieve kernels.

    python3 benchmarks/bench_kernels.py [--size N] [--repeat R]

Both backends run the same inputs; their outputs are checked for equality
before any timing is reported.
"""

import argparse
import time

import numpy as np

from gronwall import _fallback, kernels, scan

try:
    from gronwall import _kernels
except ImportError:  # extension not built
    _kernels = None


def best_of(repeat, fn, *args):
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def bench_full_scan(backend, hi, repeat):
    saved = kernels.sigma_segment, kernels.robin_filter
    kernels.sigma_segment, kernels.robin_filter = backend.sigma_segment, backend.robin_filter
    try:
        return best_of(repeat, lambda: scan.scan_robin(5041, hi))[0]
    finally:
        kernels.sigma_segment, kernels.robin_filter = saved


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--size", type=int, default=10**7, help="sieve segment length")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    backends = [("numpy", _fallback)]
    if _kernels is not None:
        backends.insert(0, ("cython", _kernels))
    lo, hi = 1, args.size + 1
    bounds = np.asarray(scan._block_bounds(lo, hi - lo), dtype=np.int64)

    rows, outputs = [], {}
    for name, mod in backends:
        t_sigma, sigma = best_of(args.repeat, mod.sigma_segment, lo, hi)
        t_filter, flagged = best_of(args.repeat, mod.robin_filter, sigma, lo, bounds,
                                    scan.FILTER_BLOCK, scan.FILTER_SHIFT)
        t_sa, (offs, _, _) = best_of(args.repeat, mod.sa_records, sigma, lo, 0, 1)
        t_scan = bench_full_scan(mod, min(args.size, scan.DEFAULT_SCAN_CAP), 1)
        outputs[name] = (sigma, flagged, offs)
        rows.append((name, t_sigma, t_filter, t_sa, t_scan))

    if len(outputs) == 2:
        a, b = outputs.values()
        same = all(np.array_equal(x, y) for x, y in zip(a, b))
        print(f"outputs identical across backends: {same}")
        if not same:
            raise SystemExit(1)

    print(f"n in [1, {args.size}], best of {args.repeat} (seconds)")
    print(f"{'backend':<8} {'sigma':>8} {'filter':>8} {'sa':>8} {'scan':>8}")
    for name, *times in rows:
        print(f"{name:<8} " + " ".join(f"{t:8.3f}" for t in times))
    if len(rows) == 2:
        speed = [n / c for c, n in zip(rows[0][1:], rows[1][1:])]
        print(f"{'speedup':<8} " + " ".join(f"{s:7.1f}x" for s in speed))


if __name__ == "__main__":
    main()
