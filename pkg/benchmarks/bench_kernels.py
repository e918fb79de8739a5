"""Compare the numba and numpy kernel backends.

    python3 benchmarks/bench_kernels.py [--repeat N] [--word-len L]

Kernel timings reuse one batch from a word enumeration; the end-to-end row
runs the oracle in a fresh interpreter per backend, since the backend is
chosen at import time from ``TRISPECTRUM_DISABLE_NUMBA``.
"""

from __future__ import annotations

import argparse
import os
import subprocess
import sys
import time

import numpy as np

from trispectrum.kernels import get_backend, numba_available
from trispectrum.oracle import enumerate_elements


def best_of(fn, repeat):
    fn()  # warm-up, includes JIT compilation
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def kernel_rows(repeat: int):
    es = enumerate_elements((4, 7), 12)
    gens = enumerate_elements((4, 7), 1)
    hi, lo = np.ascontiguousarray(es.hi), np.ascontiguousarray(es.lo)
    ghi, glo = np.ascontiguousarray(gens.hi[1:]), np.ascontiguousarray(gens.lo[1:])
    ehi, elo = get_backend("numpy").expand(hi, lo, ghi, glo, 1e-12)
    rhi, rlo = np.ascontiguousarray(ehi[::-1]), np.ascontiguousarray(elo[::-1])
    cases = {
        "expand": lambda k: k.expand(hi, lo, ghi, glo, 1e-12),
        "quantize": lambda k: k.quantize(ehi, elo, 1e9, 1e-6),
        "abs_trace": lambda k: k.abs_trace(ehi, elo),
        "pair_distance": lambda k: k.pair_distance(ehi, elo, rhi, rlo),
    }
    backends = ["numpy"] + (["numba"] if numba_available() else [])
    rows = []
    for name, fn in cases.items():
        timing = {b: best_of(lambda: fn(get_backend(b)), repeat) for b in backends}
        rows.append((f"{name} ({len(ehi) if name != 'expand' else len(hi)} rows)", timing))
    return rows


def oracle_row(word_len: int):
    code = f"import time; from trispectrum import oracle_spectrum; t=time.perf_counter(); oracle_spectrum((5, 6), {word_len}); print(time.perf_counter()-t)"
    timing = {}
    for backend, flag in (("numpy", "1"), ("numba", "")):
        if backend == "numba" and not numba_available():
            continue
        env = dict(os.environ, TRISPECTRUM_DISABLE_NUMBA=flag)
        # run twice so the numba cache is warm for the timed call
        out = subprocess.run([sys.executable, "-c", code + "; " + code.split("; ", 1)[1]], env=env,
                             capture_output=True, text=True, check=True).stdout.split()
        timing[backend] = float(out[-1])
    return (f"oracle (5,6) word length {word_len}", timing)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--word-len", type=int, default=12)
    args = ap.parse_args(argv)
    rows = kernel_rows(args.repeat) + [oracle_row(args.word_len)]
    print(f"{'case':40s} {'numpy [ms]':>12s} {'numba [ms]':>12s} {'speed-up':>9s}")
    for name, t in rows:
        nb = t.get("numba")
        ratio = f"{t['numpy'] / nb:8.1f}x" if nb else "      n/a"
        nb_txt = f"{nb * 1e3:12.2f}" if nb else f"{'n/a':>12s}"
        print(f"{name:40s} {t['numpy'] * 1e3:12.2f} {nb_txt} {ratio}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
