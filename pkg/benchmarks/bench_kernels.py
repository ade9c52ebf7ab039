"""Time the numba kernels against the pure-numpy fallbacks.

Run from the repo root:

    python benchmarks/bench_kernels.py

Each kernel is timed on one realistic batch (the same call shapes the
oracles issue while building levels).  Numba timings exclude the first
call so JIT compilation is not counted.
"""

import time

import numpy as np

from shiftspace import (context_free_shift, disjoint_union, even_shift,
                        full_shift, random_sofic_presentation, selector_shift)
from shiftspace.core import levels_of
from shiftspace.kernels import _numpy
from shiftspace.transforms import MarkerCollapsedOracle

try:
    from shiftspace.kernels import _numba
except ImportError:
    _numba = None
    print("numba not installed -- timing the numpy fallback only")

REPEATS = 3


def best_of(fn, args):
    fn(*args)  # warmup (and JIT compile on the numba side)
    times = []
    for _ in range(REPEATS):
        t0 = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - t0)
    return min(times)


def dfa_case():
    ev = even_shift()
    trans, start, accept = ev.scanner()
    codes = np.arange(2 ** 20, dtype=np.int64)
    return "dfa_filter      even scanner, 2^20 words of length 20", \
        (codes, 20, 2, trans, start, accept)


def subset_case():
    pres = random_sofic_presentation(6, ["0", "1"], 0)
    masks = pres.step_masks()
    full = np.uint64((1 << pres.n_states) - 1)
    codes = np.arange(2 ** 20, dtype=np.int64)
    return "subset_filter   6-state sofic, 2^20 words of length 20", \
        (codes, 20, 2, masks, full, full)


def marker_case():
    cf = context_free_shift()
    oracle = MarkerCollapsedOracle(cf)
    length = 10
    trans, start, accept = cf.scanner(length // 4 + 2)
    codes = np.arange(4 ** length, dtype=np.int64)
    return "marker_filter   collapsed markers, 4^10 words of length 10", \
        (codes, length, 4, oracle.sel_class, oracle.data_class,
         trans, start, accept)


def selector_case():
    child = disjoint_union(full_shift(["0", "1"]), full_shift(["0", "1"]))
    sel = selector_shift(child)
    length = 10
    store = levels_of(child)
    offsets = [0]
    tables = []
    for m in range((length + 1) // 2 + 1):
        lv = store.level(m, 5_000_000)
        tables.append(lv)
        offsets.append(offsets[-1] + lv.size)
    child_codes = np.concatenate(tables)
    child_offsets = np.array(offsets, dtype=np.int64)
    nc = len(child.alphabet)
    data_digit = np.array(list(range(nc)) + [0, 0, 0], dtype=np.int64)
    rng = np.random.default_rng(0)
    codes = rng.integers(0, len(sel.alphabet) ** length, 200_000,
                         dtype=np.int64)
    return "selector_filter 4+3 letters, 2e5 sampled words of length 10", \
        (codes, length, len(sel.alphabet), sel.marker_class, data_digit,
         nc, child_codes, child_offsets)


def main():
    print("%-62s %10s %10s %8s" % ("case", "numpy", "numba", "speedup"))
    for case in (dfa_case, subset_case, marker_case, selector_case):
        label, args = case()
        name = label.split()[0]
        t_np = best_of(getattr(_numpy, name), args)
        if _numba is None:
            print("%-62s %9.3fs %10s %8s" % (label, t_np, "-", "-"))
            continue
        t_nb = best_of(getattr(_numba, name), args)
        assert (getattr(_numpy, name)(*args)
                == getattr(_numba, name)(*args)).all()
        print("%-62s %9.3fs %9.3fs %7.1fx"
              % (label, t_np, t_nb, t_np / t_nb))


if __name__ == "__main__":
    main()
