"""Time the pure and compiled mod-p kernels on the same workloads.

Usage: python3 benchmarks/bench_backends.py [--sizes 8,16,32,64] [--reps 5]

Both backends are imported directly, so the QUADLIE_FORCE_PURE switch is
irrelevant here; what the package actually selected is printed for context.
"""

import argparse
import random
import time

from quadlie import _fast
from quadlie._fast import pure

try:
    from quadlie._fast import _fpcore as comp
except ImportError:
    comp = None


def bench(fn, reps):
    best = None
    for _ in range(reps):
        t0 = time.perf_counter()
        fn()
        dt = time.perf_counter() - t0
        best = dt if best is None else min(best, dt)
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="8,16,32,64")
    ap.add_argument("--reps", type=int, default=5)
    ap.add_argument("--prime", type=int, default=1009)
    args = ap.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]
    p = args.prime
    rng = random.Random(0)

    print(f"selected backend: {_fast.BACKEND}")
    if comp is None:
        print("compiled kernel not built; showing pure timings only")
    header = f"{'op':<10}{'n':>6}{'pure':>12}{'compiled':>12}{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for n in sizes:
        a = [rng.randrange(p) for _ in range(n * n)]
        b = [rng.randrange(p) for _ in range(n * n)]
        for op, pure_fn, comp_fn in (
            (
                "rref",
                lambda: pure.fp_rref(a, n, n, p),
                (lambda: comp.fp_rref(a, n, n, p)) if comp else None,
            ),
            (
                "matmul",
                lambda: pure.fp_matmul(a, n, n, b, n, n, p),
                (lambda: comp.fp_matmul(a, n, n, b, n, n, p)) if comp else None,
            ),
        ):
            tp = bench(pure_fn, args.reps)
            if comp_fn is None:
                print(f"{op:<10}{n:>6}{tp * 1e3:>10.3f}ms{'-':>12}{'-':>10}")
                continue
            tc = bench(comp_fn, args.reps)
            if pure.fp_rref(a, n, n, p) != comp.fp_rref(a, n, n, p):
                raise SystemExit("backend outputs diverged; do not trust timings")
            print(
                f"{op:<10}{n:>6}{tp * 1e3:>10.3f}ms{tc * 1e3:>10.3f}ms"
                f"{tp / tc:>9.1f}x"
            )


if __name__ == "__main__":
    main()
