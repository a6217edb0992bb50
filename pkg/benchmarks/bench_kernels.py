"""Time the compiled and pure-Python counting kernels on the same inputs.

    python3 benchmarks/bench_kernels.py [--repeat N] [--threads K]
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from k3verify import kernels
from k3verify.delsarte import COVERS, fiber_rows
from k3verify.exactnum import Fq


def best_of(fn, repeat: int) -> tuple[float, object]:
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def cases(threads: int):
    F = Fq(193)
    rows = fiber_rows(COVERS[(16, "0", 32)].weierstrass(), F)
    yield "fiber_counts q=193", lambda b: kernels.fiber_counts(
        rows, F.add_table, F.mul_table, F.sqrt_counts(), F.from_int(4), threads=threads, backend=b)

    n = 48
    yield "jacobi_histogram n=48 q=193", lambda b: kernels.jacobi_histogram(
        n, F.add_table, F.neg_table, F.log_table % n, F.neg(1), threads=threads, backend=b)

    G = Fq(257)
    pown = np.array([G.pow(x, 16) for x in range(257)], dtype=np.int32)
    yield "fermat_projective_count n=16 q=257", lambda b: kernels.fermat_projective_count(
        G.add_table, pown, threads=threads, backend=b)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()

    backends = sorted(kernels.BACKENDS)
    if "cython" not in backends:
        print("compiled kernels not built; timing the Python fallback only")
    print(f"{'kernel':36s}" + "".join(f"{b:>12s}" for b in backends) + ("     speedup" if len(backends) > 1 else ""))
    for label, run in cases(args.threads):
        times, results = {}, {}
        for b in backends:
            times[b], results[b] = best_of(lambda: run(b), args.repeat)
        ref = results[backends[0]]
        same = all(np.array_equal(np.asarray(r), np.asarray(ref)) for r in results.values())
        line = f"{label:36s}" + "".join(f"{times[b]:11.4f}s" for b in backends)
        if len(backends) > 1:
            line += f"{times['python'] / times['cython']:11.1f}x"
        print(line + ("" if same else "   RESULTS DIFFER"))


if __name__ == "__main__":
    main()
