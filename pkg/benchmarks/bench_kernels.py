"""Timing comparison of the numba and numpy kernel flavors.

Runs the two inner loops that dominate tracing and plotting work:
path continuation of a fiber along a circular loop, and sign-grid
evaluation of a real bivariate polynomial.  Both flavors are invoked
directly, so the LEMKIT_NO_NUMBA flag is irrelevant here; the point is
the side-by-side on identical inputs.

Usage: python benchmarks/bench_kernels.py [--waypoints N] [--grid N] [--seed K]
"""

import argparse
import time

import numpy

from lemkit import _kernels as K


def build_track_case(seed, waypoints):
    rng = numpy.random.default_rng(seed)
    deg = 8
    cmat = numpy.zeros((deg + 1, 2), dtype=numpy.complex128)
    cmat[: deg + 1, 0] = rng.normal(size=deg + 1) + 1j * rng.normal(size=deg + 1)
    cmat[0, 1] = -1.0  # p(z) - w
    radius = 3.0 + abs(cmat).max()
    th = numpy.linspace(0, 2 * numpy.pi, waypoints)
    ws = radius * numpy.exp(1j * th)
    # fiber over ws[0] from the companion matrix
    coeffs = cmat[:, 0].copy()
    coeffs[0] -= ws[0]
    fiber = numpy.roots(coeffs[::-1]).astype(numpy.complex128)
    return cmat, fiber, ws


def time_call(fn, repeats=5):
    best = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn()
        dt = time.perf_counter() - t0
        best = dt if best is None else min(best, dt)
    return best, out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--waypoints", type=int, default=20000)
    ap.add_argument("--grid", type=int, default=800)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    cmat, fiber, ws = build_track_case(args.seed, args.waypoints)
    rng = numpy.random.default_rng(args.seed + 1)
    gmat = rng.normal(size=(12, 12))
    xs = numpy.linspace(-2, 2, args.grid)
    ys = numpy.linspace(-2, 2, args.grid)

    rows = []
    np_t, (np_status, np_end) = time_call(
        lambda: K._track_path_numpy(cmat, fiber, ws, 0.4, 1e-12, 40)
    )
    rows.append(("track_path", "numpy", np_t, f"status {int(np_status)}"))
    if K._HAVE_NUMBA:
        K._track_path_numba(cmat, fiber, ws, 0.4, 1e-12, 40)  # compile once
        nb_t, (nb_status, nb_end) = time_call(
            lambda: K._track_path_numba(cmat, fiber, ws, 0.4, 1e-12, 40)
        )
        agree = int(np_status) == int(nb_status) and numpy.allclose(np_end, nb_end)
        rows.append(("track_path", "numba", nb_t, f"agree {agree}"))

    gp_t, gp = time_call(lambda: K._grid_eval_numpy(gmat, xs, ys))
    rows.append(("grid_eval", "numpy", gp_t, f"{gp.shape}"))
    if K._HAVE_NUMBA:
        K._grid_eval_numba(gmat, xs, ys)
        gn_t, gn = time_call(lambda: K._grid_eval_numba(gmat, xs, ys))
        rows.append(("grid_eval", "numba", gn_t, f"agree {numpy.allclose(gp, gn)}"))

    print(f"{'kernel':<12} {'flavor':<8} {'best of 5':>12}  note")
    for name, flavor, t, note in rows:
        print(f"{name:<12} {flavor:<8} {t * 1e3:>10.2f}ms  {note}")
    by = {}
    for name, flavor, t, _ in rows:
        by.setdefault(name, {})[flavor] = t
    for name, d in by.items():
        if "numba" in d and "numpy" in d:
            print(f"{name}: numba is {d['numpy'] / d['numba']:.1f}x faster")


if __name__ == "__main__":
    main()
