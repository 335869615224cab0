"""Time the numba kernels against their pure-numpy counterparts.

    python3 benchmarks/bench_kernels.py [--repeat N]

Each kernel is called once before timing so JIT compilation is excluded.
"""

import argparse
import timeit

import numpy as np

from berrymoments import kernels
from berrymoments._accel import HAVE_NUMBA
from berrymoments.cef import fibonacci_sphere
from berrymoments.hamiltonian import build_hamiltonian


def hamiltonians():
    return [build_hamiltonian(c, two_j / 2, 1.0, direction=(0.3, -0.2, 0.9), h=0.05)
            for c in (6, 8) for two_j in range(41)]


def cases():
    mats = hamiltonians()
    points = fibonacci_sphere(20000)
    yield ("jacobi x82", lambda f: [f(m) for m in mats],
           kernels.jacobi_eigh_numpy, kernels.jacobi_eigh_numba)
    yield ("cef_energy 20k", lambda f: f(points, 0.3, 0.8),
           kernels.cef_energy_numpy, kernels.cef_energy_numba)
    yield ("cef_descend 20k x50", lambda f: f(points, 0.3, 0.8, 50, 0.01),
           kernels.cef_descend_numpy, kernels.cef_descend_numba)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    if not HAVE_NUMBA:
        print("numba is not installed; only the numpy column is timed")
    print(f"{'kernel':<22}{'numpy [ms]':>12}{'numba [ms]':>12}{'speedup':>10}")
    for name, call, numpy_impl, numba_impl in cases():
        t_np = min(timeit.repeat(lambda: call(numpy_impl), number=1, repeat=args.repeat))
        if HAVE_NUMBA:
            call(numba_impl)
            t_nb = min(timeit.repeat(lambda: call(numba_impl), number=1, repeat=args.repeat))
            print(f"{name:<22}{1e3 * t_np:>12.2f}{1e3 * t_nb:>12.2f}{t_np / t_nb:>9.1f}x")
        else:
            print(f"{name:<22}{1e3 * t_np:>12.2f}{'n/a':>12}{'':>10}")
    # sanity: both backends agree on a sample
    m = hamiltonians()[7]
    w1 = kernels.jacobi_eigh_numpy(m)[0]
    assert np.allclose(w1, np.linalg.eigvalsh(m), atol=1e-12)


if __name__ == "__main__":
    main()
