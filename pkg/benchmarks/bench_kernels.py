"""Compare the compiled and pure-numpy kernel backends.

Run ``python3 benchmarks/bench_kernels.py``. Prints the best-of-N wall time
per call for each backend and the speedup.
"""
import argparse
import timeit

import numpy as np

from spinmech.kernels import available_backends


def cases(n):
    rng = np.random.default_rng(0)
    x0 = rng.rayleigh(1.86e-9, n)
    phi0 = rng.uniform(0.0, 2.0 * np.pi, n)
    xs = rng.uniform(-30.0, 30.0, n)
    pts = np.column_stack([rng.uniform(-3e-6, 3e-6, (n, 2)), np.full(n, 1e-6)])
    m, pos, ax = np.array([2e-15, -1e-15, 1e-14]), np.array([2e-7, -1e-7, -5e-7]), np.array([0.0, 0.0, 1.0])
    return {
        "echo_cos_stats": lambda k: k.echo_cos_stats(x0, phi0, 4.84e8, 2 * np.pi * 1.4e6, 3.1e-7),
        "j0": lambda k: k.j0(xs),
        "axial_dipole_field": lambda k: k.axial_dipole_field(pts, m, pos, ax),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("-n", type=int, default=100_000, help="array length")
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    backends = available_backends()
    print(f"backends: {', '.join(backends)}; n = {args.n}")
    for name, fn in cases(args.n).items():
        times = {}
        for bname, mod in backends.items():
            fn(mod)  # warm up
            times[bname] = min(timeit.repeat(lambda: fn(mod), number=1, repeat=args.repeat))
        line = "  ".join(f"{b} {t * 1e3:8.3f} ms" for b, t in times.items())
        if len(times) == 2:
            line += f"  speedup {times['python'] / times['cython']:.1f}x"
        print(f"{name:20s} {line}")


if __name__ == "__main__":
    main()
