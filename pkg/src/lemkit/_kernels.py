"""Float64 inner loops with a numba fast path and a numpy fallback.

The active flavor is chosen once at import time: set LEMKIT_NO_NUMBA to any
non-empty value to force the pure-numpy implementations.  Both flavors
implement identical semantics; benchmarks/bench_kernels.py compares them.
"""

import os

import numpy

__all__ = [
    "runtime_flavor",
    "track_path",
    "grid_eval",
]

_FORCED_NUMPY = bool(os.environ.get("LEMKIT_NO_NUMBA", ""))
_HAVE_NUMBA = False
if not _FORCED_NUMPY:
    try:
        import numba

        _HAVE_NUMBA = True
    except ImportError:
        _HAVE_NUMBA = False


def runtime_flavor():
    """Name of the kernel implementation selected at import time."""
    return "numba" if _HAVE_NUMBA else "numpy"


# Track statuses: 0 ok, 1 newton failure, 2 step jumped a fiber gap,
# 3 vanishing derivative.  Callers refine the path and retry on nonzero.
TRACK_OK = 0
TRACK_NEWTON_FAIL = 1
TRACK_JUMP = 2
TRACK_SINGULAR = 3


def _track_path_numpy(cmat, fiber, ws, jump_frac, newton_tol, max_newton):
    z = fiber.copy()
    nf = z.shape[0]
    mz = cmat.shape[0] - 1
    for t in range(1, ws.shape[0]):
        w = ws[t]
        cz = cmat[:, -1].copy()
        for k in range(cmat.shape[1] - 2, -1, -1):
            cz = cz * w + cmat[:, k]
        znew = z.copy()
        done = numpy.zeros(nf, dtype=bool)
        for _ in range(max_newton):
            p = numpy.full(nf, cz[mz], dtype=numpy.complex128)
            dp = numpy.zeros(nf, dtype=numpy.complex128)
            for j in range(mz - 1, -1, -1):
                dp = dp * znew + p
                p = p * znew + cz[j]
            if (dp == 0).any():
                return TRACK_SINGULAR, z
            step = p / dp
            znew = znew - step
            done = numpy.abs(step) <= newton_tol * (1 + numpy.abs(znew))
            if done.all():
                break
        if not done.all():
            return TRACK_NEWTON_FAIL, z
        if nf > 1:
            diff = numpy.abs(z[:, None] - z[None, :])
            numpy.fill_diagonal(diff, numpy.inf)
            dmin = diff.min(axis=1)
            if (numpy.abs(znew - z) > jump_frac * dmin).any():
                return TRACK_JUMP, z
        z = znew
    return TRACK_OK, z


def _grid_eval_numpy(cmat, xs, ys):
    ny = ys.shape[0]
    nx = xs.shape[0]
    mx = cmat.shape[0] - 1
    out = numpy.empty((ny, nx), dtype=numpy.float64)
    for iy in range(ny):
        y = ys[iy]
        rows = cmat[:, -1].copy()
        for k in range(cmat.shape[1] - 2, -1, -1):
            rows = rows * y + cmat[:, k]
        vals = numpy.full(nx, rows[mx], dtype=numpy.float64)
        for j in range(mx - 1, -1, -1):
            vals = vals * xs + rows[j]
        out[iy] = vals
    return out


if _HAVE_NUMBA:

    @numba.njit(cache=True)
    def _track_path_numba(cmat, fiber, ws, jump_frac, newton_tol, max_newton):
        nf = fiber.shape[0]
        mz = cmat.shape[0] - 1
        nw = cmat.shape[1]
        z = fiber.copy()
        znew = fiber.copy()
        cz = numpy.empty(mz + 1, dtype=numpy.complex128)
        for t in range(1, ws.shape[0]):
            w = ws[t]
            for j in range(mz + 1):
                acc = cmat[j, nw - 1]
                for k in range(nw - 2, -1, -1):
                    acc = acc * w + cmat[j, k]
                cz[j] = acc
            for i in range(nf):
                x = z[i]
                ok = False
                for _ in range(max_newton):
                    p = cz[mz]
                    dp = 0.0 + 0.0j
                    for j in range(mz - 1, -1, -1):
                        dp = dp * x + p
                        p = p * x + cz[j]
                    if dp == 0:
                        return TRACK_SINGULAR, z
                    step = p / dp
                    x = x - step
                    if abs(step) <= newton_tol * (1 + abs(x)):
                        ok = True
                        break
                if not ok:
                    return TRACK_NEWTON_FAIL, z
                znew[i] = x
            if nf > 1:
                for i in range(nf):
                    dmin = 1e308
                    for j in range(nf):
                        if j != i:
                            d = abs(z[i] - z[j])
                            if d < dmin:
                                dmin = d
                    if abs(znew[i] - z[i]) > jump_frac * dmin:
                        return TRACK_JUMP, z
            for i in range(nf):
                z[i] = znew[i]
        return TRACK_OK, z

    @numba.njit(cache=True)
    def _grid_eval_numba(cmat, xs, ys):
        ny = ys.shape[0]
        nx = xs.shape[0]
        mx = cmat.shape[0] - 1
        nyc = cmat.shape[1]
        out = numpy.empty((ny, nx), dtype=numpy.float64)
        rows = numpy.empty(mx + 1, dtype=numpy.float64)
        for iy in range(ny):
            y = ys[iy]
            for j in range(mx + 1):
                acc = cmat[j, nyc - 1]
                for k in range(nyc - 2, -1, -1):
                    acc = acc * y + cmat[j, k]
                rows[j] = acc
            for ix in range(nx):
                x = xs[ix]
                v = rows[mx]
                for j in range(mx - 1, -1, -1):
                    v = v * x + rows[j]
                out[iy, ix] = v
        return out


def track_path(cmat, fiber, ws, jump_frac=0.4, newton_tol=1e-12, max_newton=40):
    """Continue the fiber {z : F(z, w)=0} along the waypoint list ws.

    cmat[j][k] is the coefficient of z^j w^k as complex128.  Returns
    (status, fiber_at_end); on any nonzero status the fiber value is the
    last trusted state and the caller should refine the path.
    """
    cmat = numpy.ascontiguousarray(cmat, dtype=numpy.complex128)
    fiber = numpy.ascontiguousarray(fiber, dtype=numpy.complex128)
    ws = numpy.ascontiguousarray(ws, dtype=numpy.complex128)
    if _HAVE_NUMBA:
        return _track_path_numba(cmat, fiber, ws, jump_frac, newton_tol, max_newton)
    return _track_path_numpy(cmat, fiber, ws, jump_frac, newton_tol, max_newton)


def grid_eval(cmat, xs, ys):
    """Sample the real bivariate polynomial on the grid xs x ys.

    cmat[j][k] is the coefficient of x^j y^k as float64; the result has
    shape (len(ys), len(xs)) with rows indexed by y.
    """
    cmat = numpy.ascontiguousarray(cmat, dtype=numpy.float64)
    xs = numpy.ascontiguousarray(xs, dtype=numpy.float64)
    ys = numpy.ascontiguousarray(ys, dtype=numpy.float64)
    if _HAVE_NUMBA:
        return _grid_eval_numba(cmat, xs, ys)
    return _grid_eval_numpy(cmat, xs, ys)
