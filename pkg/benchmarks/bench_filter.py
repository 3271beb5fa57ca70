"""Benchmark the support-filter kernels: numba JIT vs pure numpy.

The filtering fixpoint is the hot loop of the whole package: each round
compares every surviving row against every other at every closure position.
This script enumerates rows for a few closures of growing size and times one
filtering fixpoint per kernel.

    python benchmarks/bench_filter.py [--logic K] [--repeat 3]

The pure-numpy path is the one selected at import time by
MODALCUBE_NO_NUMBA=1; here both are called directly so a single process can
compare them.
"""

import argparse
import time

import numpy as np

from modalcube import _accel
from modalcube._accel import HAVE_NUMBA, support_filter_round_np
from modalcube.decision import _kernel_inputs, enumerate_rows
from modalcube.formula import closure, parse
from modalcube.logics import lookup

CLOSURES = [
    "[]p -> p",
    "[](p -> q) -> ([]p -> []q)",
    "[]p -> ([]q -> [](p & q))",
    "<>(p | q) -> (<>p | <>q)",
    "([]p & []q) -> [](p | r)",
]


def run_fixpoint(kernel, logic, rows):
    arow, bits, preq, pnreq = _kernel_inputs(logic, rows)
    alive = np.ones(rows.shape[0], dtype=bool)
    rounds = 0
    while True:
        keep = kernel(arow, bits, alive, preq, pnreq)
        if keep.sum() == alive.sum():
            return alive.sum(), rounds
        alive = keep
        rounds += 1


def bench(kernel, logic, rows, repeat):
    run_fixpoint(kernel, logic, rows)  # warm-up (JIT compile, caches)
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        survivors, rounds = run_fixpoint(kernel, logic, rows)
        best = min(best, time.perf_counter() - start)
    return best, survivors, rounds


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--logic", default="K")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    logic = lookup(args.logic)
    kernels = [("numpy", support_filter_round_np)]
    if HAVE_NUMBA:
        kernels.append(("numba", _accel.support_filter_round_nb))
    else:
        print("numba unavailable; benchmarking the numpy path only")

    print(f"logic {logic.name}, best of {args.repeat}")
    header = f"{'closure':44s} {'rows':>7s}" + "".join(f" {n:>10s}" for n, _ in kernels)
    print(header)
    for text in CLOSURES:
        rows = enumerate_rows(logic, closure([parse(text)]))
        line = f"{text:44s} {rows.shape[0]:7d}"
        results = []
        for _, kernel in kernels:
            dt, survivors, rounds = bench(kernel, logic, rows, args.repeat)
            results.append((dt, survivors, rounds))
            line += f" {dt * 1000:9.1f}ms"
        line += f"   ({results[0][1]} survive, {results[0][2]} rounds)"
        print(line)
    if len(kernels) == 2:
        print("\nnumbers are one full filtering fixpoint over the enumerated rows")


if __name__ == "__main__":
    main()
