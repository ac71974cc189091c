"""Compare the compiled GF(p) elimination kernel with the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]

Part 1 times ``rank_modp`` / ``rref_modp`` directly on random dense matrices
and on coboundary matrices of order complexes.  Part 2 times an end-to-end
Ext sweep in two subprocesses, one per kernel, because the kernel is chosen
once at import time.
"""

from __future__ import annotations

import argparse
import os
import subprocess
import sys
import time

import numpy as np

from sposet import _kernels_py, corpus
from sposet.cochains import coboundary
from sposet.poset import order_complex

try:
    from sposet import _kernels as compiled
except ImportError:
    compiled = None

SWEEP = r"""
import itertools, time
from sposet import corpus
from sposet.koszul import ext_dims_bruteforce
from sposet.formulas import ext_formula
from sposet.linalg import GF2, KERNEL
t = time.perf_counter()
for name in corpus.small():
    P = corpus.get(name)
    for ell in (1, 2, 3):
        for a in itertools.product(range(-ell, ell + 1), repeat=P.n_vertices):
            ext_formula(P, ell, a, GF2); ext_dims_bruteforce(P, ell, a, GF2)
print(KERNEL, time.perf_counter() - t)
"""


def best(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def matrices() -> list[tuple[str, np.ndarray, int]]:
    rng = np.random.default_rng(0)
    out = []
    for n in (50, 100, 200):
        out.append((f"dense {n}x{n} mod 101", rng.integers(0, 101, (n, n)), 101))
    for name in ("rp2", "simplex_boundary_3", "pinched_strip"):
        D = order_complex(corpus.get(name))
        M = coboundary(D, None, 1) % 2
        out.append((f"coboundary of order complex ({name}) {M.shape[0]}x{M.shape[1]} mod 2", M, 2))
    return out


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if compiled is None:
        print("compiled kernels are not built; only the fallback is available")
    print(f"{'matrix':60s} {'python':>10s} {'compiled':>10s} {'speedup':>8s}")
    for label, M, p in matrices():
        a = np.ascontiguousarray(M, dtype=np.int64)
        tp = best(lambda: _kernels_py.rref_modp(a.copy(), p), args.repeat)
        if compiled is not None:
            tc = best(lambda: compiled.rref_modp(a.copy(), p), args.repeat)
            print(f"{label:60s} {tp:10.4f} {tc:10.4f} {tp / tc:8.1f}")
        else:
            print(f"{label:60s} {tp:10.4f} {'-':>10s}")
    print()
    print("end-to-end Ext sweep over GF(2) (small corpus, l <= 3):")
    for env in ({}, {"SPOSET_PURE_PYTHON": "1"}):
        res = subprocess.run([sys.executable, "-c", SWEEP], capture_output=True, text=True, env={**os.environ, **env})
        kernel, seconds = res.stdout.split()
        print(f"  {kernel:9s} {float(seconds):.2f}s")


if __name__ == "__main__":
    main()
