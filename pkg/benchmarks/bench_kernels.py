"""Time the numba kernels against their numpy fallbacks.

    python3 benchmarks/bench_kernels.py [--repeat N]

The first numba call includes compilation (or cache load) and is reported
separately from the steady-state timings.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from hyperfield import _kernels as K
from hyperfield.constructions import build_FG, build_quotient
from hyperfield.linsolve import parse_system
from hyperfield.linsolve.brute import pack


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if not K.HAVE_NUMBA:
        print("numba unavailable; only the numpy path can be timed")

    cases = []
    for F in (build_FG((7,)).field, build_quotient(61, 3), build_quotient(61, 1)):
        add, mul = F.add_table, np.ascontiguousarray(F.mul_table)
        neg = np.array(F.neg_table, dtype=np.int64)
        cases.append((f"assoc {F.name} (n={F.size})", lambda a=add: K.assoc_witness_nb(a), lambda a=add: K.assoc_witness_np(a)))
        cases.append((f"distrib {F.name}", lambda a=add, m=mul: K.distrib_witness_nb(a, m), lambda a=add, m=mul: K.distrib_witness_np(a, m)))
        cases.append((f"revers {F.name}", lambda a=add, g=neg: K.reversibility_witness_nb(a, g), lambda a=add, g=neg: K.reversibility_witness_np(a, g)))

    M = build_FG((3,))
    F = M.field
    S = parse_system("1*x + g*y + 1*z\ng^2*x + 1*w + g*v\n1*y + 1*t + 1*v", F)
    order = sorted(S.active)
    eq_ptr, coefs, vars_ = pack(S, order)
    bargs = (F.add_table, np.ascontiguousarray(F.mul_table), F.size, len(order), eq_ptr, coefs, vars_, True, np.uint64(F.full_mask))
    cases.append(("brute covers FG(3), 6 vars", lambda: K.brute_first_nb(*bargs), lambda: K.brute_first_np(*bargs)))

    print(f"{'kernel':40s} {'first nb':>10s} {'numba':>10s} {'numpy':>10s} {'speedup':>8s}")
    for name, nb, npf in cases:
        first = best_of(nb, 1)
        t_nb = best_of(nb, args.repeat)
        t_np = best_of(npf, args.repeat)
        print(f"{name:40s} {first:10.4f} {t_nb:10.4f} {t_np:10.4f} {t_np / max(t_nb, 1e-9):8.1f}x")


if __name__ == "__main__":
    main()
