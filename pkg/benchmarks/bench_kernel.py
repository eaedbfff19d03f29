"""Compare the compiled and pure-Python interaction kernels.

Plans are recorded from real workloads (Y unrolling, case composition,
test application), then replayed on each backend.  Results must be equal.

    python benchmarks/bench_kernel.py [--repeat N]
"""
from __future__ import annotations

import argparse
import statistics
import sys
import time

from pcfgames import _kernel_py, kernel
from pcfgames.denotation import denote
from pcfgames.strategy import DEFAULT_BUDGET
from pcfgames.syntax import parse_term

WORKLOADS = {
    "countdown-y8": ("Y[nat->nat] (\\f:nat->nat. \\n:nat. case[4] n 0 (f 0) (f 1) (f 2))", 8, 4),
    "higher-order-y6": ("Y[(nat->nat)->nat] (\\F:(nat->nat)->nat. \\g:nat->nat. "
                        "case[2] (g 0) 1 (F (\\x:nat. 0)))", 6, 3),
    "swap-y16": ("Y[nat->nat->nat] (\\f:nat->nat->nat. \\a:nat. \\b:nat. "
                 "case[4] a b (f b 0) (f 0 b) (f b a))", 16, 4),
    "twice-case": ("\\f:nat->nat. \\x:nat. case[3] (f (f x)) (f 0) (f 1) (f 2)", 0, 3),
}


def record(src: str, unroll: int, window: int) -> list:
    plans = []
    real = kernel.compose_views

    def spy(plan, budget):
        plans.append(plan)
        return real(plan, budget)

    kernel.compose_views = spy
    try:
        denote(parse_term(src), (), unroll, window)
    finally:
        kernel.compose_views = real
    return plans


def timed(fn, plans, repeat: int) -> tuple[float, list]:
    runs, out = [], None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = [fn(p, DEFAULT_BUDGET) for p in plans]
        runs.append(time.perf_counter() - t0)
    return statistics.median(runs), out


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    try:
        from pcfgames import _kernel_c
    except ImportError:
        print("compiled kernel not built; run `pip install -e . --no-build-isolation`")
        return 1
    print(f"{'workload':<18}{'plans':>6}{'python s':>11}{'cython s':>11}{'speedup':>9}")
    ok = True
    for name, (src, unroll, window) in WORKLOADS.items():
        plans = record(src, unroll, window)
        tp, outp = timed(_kernel_py.compose_views, plans, args.repeat)
        tc, outc = timed(_kernel_c.compose_views, plans, args.repeat)
        same = outp == outc
        ok &= same
        print(f"{name:<18}{len(plans):>6}{tp:>11.4f}{tc:>11.4f}{tp / tc:>8.1f}x"
              + ("" if same else "  MISMATCH"))
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
