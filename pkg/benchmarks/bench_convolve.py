"""Compare the compiled convolution kernel with the pure-Python fallback.

    python3 benchmarks/bench_convolve.py [--repeat N]

Also times a full Series product and an L* evaluation, once with each backend.
"""

import argparse
import os
import subprocess
import sys
import timeit

from halfint4 import _backend, _kernels_py


def operands(n, bits):
    import random
    rng = random.Random(n * 7919 + bits)
    lim = 2 ** bits
    return [rng.randrange(-lim, lim) for _ in range(n)], [rng.randrange(-lim, lim) for _ in range(n)]


def bench_kernels(repeat):
    rows = []
    for n, bits in ((100, 20), (500, 20), (2000, 20), (500, 50), (2000, 50), (500, 200)):
        a, b = operands(n, bits)
        ref = _kernels_py.convolve(a, b, n)
        assert _backend.convolve(a, b, n) == ref
        t_py = min(timeit.repeat(lambda: _kernels_py.convolve(a, b, n), number=1, repeat=repeat))
        t_sb = min(timeit.repeat(lambda: _kernels_py.schoolbook(a, b, n), number=1, repeat=repeat)) if n <= 500 else float("nan")
        t_bk = min(timeit.repeat(lambda: _backend.convolve(a, b, n), number=1, repeat=repeat))
        rows.append((n, bits, t_sb, t_py, t_bk))
    return rows


WORKLOAD = """
import time
from halfint4 import forms, lfunction, _backend
t0 = time.perf_counter()
for tw in range(9, 26, 2):
    forms.monomial_space(tw, 2000)
t1 = time.perf_counter()
f = (forms.THETA * forms.DELTA4).series(400)
lfunction.lstar_eigen(f, forms.Weight(9), 1, '2.25', 128)
t2 = time.perf_counter()
print(_backend.BACKEND, f'{t1 - t0:.3f}', f'{t2 - t1:.3f}')
"""


def bench_workload():
    out = []
    for pure in ("0", "1"):
        env = dict(os.environ, HALFINT4_PURE_PYTHON=pure)
        res = subprocess.run([sys.executable, "-c", WORKLOAD], env=env, capture_output=True, text=True, check=True)
        out.append(res.stdout.split())
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    print(f"active backend: {_backend.BACKEND}")
    print(f"{'n':>6} {'bits':>5} {'schoolbook':>11} {'kronecker':>10} {'active':>10} {'speedup':>8}")
    for n, bits, sb, py, bk in bench_kernels(args.repeat):
        print(f"{n:6d} {bits:5d} {sb:11.5f} {py:10.5f} {bk:10.5f} {py / bk:7.1f}x")
    print("\nend-to-end (fresh process, seconds): backend, weight-space bases at prec 2000, one L* value")
    for backend, t_spaces, t_lstar in bench_workload():
        print(f"  {backend:7s} {t_spaces:>8s} {t_lstar:>8s}")


if __name__ == "__main__":
    main()
