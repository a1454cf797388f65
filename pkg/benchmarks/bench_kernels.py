"""Compare the numba and numpy kernels.

Kernel timings call both implementations in one process. The end-to-end
timing runs a short Burgers simulation in a subprocess per backend, because
``GENFUNC_BACKEND`` is read once at import.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--no-end-to-end]
"""
import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from genfunc import _backend, _kernels

E2E = """
import time
from genfunc import models as md
from genfunc.generator import default_zgrid
m = md.burgers_model()
md.simulate(m, md.sine(8), 8, 0.01, 1e-3, default_zgrid(1.0, 33))  # warm-up
t0 = time.perf_counter()
md.simulate(m, md.sine({N}), {N}, 0.1, 1e-3, default_zgrid(1.0, 65), 10)
print(time.perf_counter() - t0)
"""


def best_of(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def bench_conv(repeat):
    rng = np.random.default_rng(0)
    rows = []
    for n, two_d, P in ((32, False, 1), (64, False, 129), (16, True, 1), (24, True, 2)):
        shape = (2 * n + 1, 2 * n + 1 if two_d else 1, P)
        a = rng.normal(size=shape) + 1j * rng.normal(size=shape)
        b = rng.normal(size=shape) + 1j * rng.normal(size=shape)
        _kernels._conv_direct_loops(a, b)  # compile
        t_jit = best_of(lambda: _kernels._conv_direct_loops(a, b), repeat)
        t_np = best_of(lambda: _kernels._conv_direct_numpy(a, b), repeat)
        label = f"conv {'2d' if two_d else '1d'} N={n} P={P}"
        rows.append((label, t_jit, t_np))
    return rows


def bench_hopf(repeat):
    rows = []
    coef = np.array([0.0, 1.0])
    for nz in (65, 257):
        z = np.linspace(0.0, 1.0, nz)
        args = (z, z[1] - z[0], 0.0, 0.1, 1.0, coef, -3.0, 0.4, np.inf, True,
                10_000_000)

        def go(fn):
            phi = 1.0 + z ** 2
            fn(phi, *args)

        go(_kernels._hopf_advance_loops)
        t_jit = best_of(lambda: go(_kernels._hopf_advance_loops), repeat)
        t_np = best_of(lambda: go(_kernels._hopf_advance_numpy), repeat)
        rows.append((f"hopf advance nz={nz}", t_jit, t_np))
    return rows


def bench_end_to_end(N=32):
    out = {}
    for backend in ("numba", "numpy"):
        env = dict(os.environ, GENFUNC_BACKEND=backend)
        res = subprocess.run([sys.executable, "-c", E2E.format(N=N)], env=env,
                             capture_output=True, text=True, check=True)
        out[backend] = float(res.stdout.strip().splitlines()[-1])
    return [(f"burgers N={N} 100 steps", out["numba"], out["numpy"])]


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--no-end-to-end", action="store_true")
    args = p.parse_args(argv)
    if not _backend.HAVE_NUMBA:
        sys.exit("numba is not importable; nothing to compare")
    rows = bench_conv(args.repeat) + bench_hopf(args.repeat)
    if not args.no_end_to_end:
        rows += bench_end_to_end()
    print(f"{'case':32s} {'numba [s]':>12s} {'numpy [s]':>12s} {'ratio':>8s}")
    for label, t_jit, t_np in rows:
        print(f"{label:32s} {t_jit:12.3e} {t_np:12.3e} {t_np / t_jit:8.2f}")


if __name__ == "__main__":
    main()
