import os
import subprocess
import sys

import mpmath
import numpy
import pytest

from lemkit._kernels import (
    TRACK_JUMP,
    TRACK_NEWTON_FAIL,
    TRACK_OK,
    TRACK_SINGULAR,
    _grid_eval_numpy,
    _track_path_numpy,
    grid_eval,
    runtime_flavor,
    track_path,
)


def sqrt_curve():
    # z^2 - w as a coefficient matrix indexed [z power][w power]
    cmat = numpy.zeros((3, 2), dtype=numpy.complex128)
    cmat[2, 0] = 1.0
    cmat[0, 1] = -1.0
    return cmat


def test_track_straight_segment():
    ws = numpy.linspace(1, 4, 40).astype(numpy.complex128)
    status, end = track_path(sqrt_curve(), numpy.array([1.0 + 0j, -1.0 + 0j]), ws)
    assert status == TRACK_OK
    assert numpy.allclose(sorted(end.real), [-2, 2])
    assert numpy.allclose(end.imag, 0)


def test_track_loop_swaps_sheets():
    th = numpy.linspace(0, 2 * numpy.pi, 200)
    ws = numpy.exp(1j * th)
    status, end = track_path(sqrt_curve(), numpy.array([1.0 + 0j, -1.0 + 0j]), ws)
    assert status == TRACK_OK
    assert numpy.allclose(end, [-1, 1], atol=1e-9)


def test_track_flavors_agree():
    th = numpy.linspace(0, 2 * numpy.pi, 150)
    ws = 2.0 * numpy.exp(1j * th) + 0.3
    fiber = numpy.sqrt(ws[0]) * numpy.array([1, -1])
    s1, e1 = track_path(sqrt_curve(), fiber, ws)
    s2, e2 = _track_path_numpy(sqrt_curve(), fiber, ws, 0.4, 1e-12, 40)
    assert s1 == s2 == TRACK_OK
    assert numpy.allclose(e1, e2)


def test_track_singular_at_critical_fiber():
    # starting a sheet exactly on the double root makes Newton singular
    cmat = numpy.zeros((3, 1), dtype=numpy.complex128)
    cmat[2, 0] = 1.0  # z^2, no w dependence
    ws = numpy.array([0.0, 1.0], dtype=numpy.complex128)
    status, _ = track_path(cmat, numpy.array([0.0 + 0j]), ws)
    assert status == TRACK_SINGULAR


def test_track_jump_guard_fires():
    # one giant step from w = 0.0001 to w = 1: the sheets of sqrt move
    # much farther than their mutual distance and the guard must notice
    ws = numpy.array([0.0001, 1.0], dtype=numpy.complex128)
    fiber = numpy.array([0.01 + 0j, -0.01 + 0j])
    status, _ = track_path(sqrt_curve(), fiber, ws)
    assert status == TRACK_JUMP


def test_track_newton_budget():
    ws = numpy.array([1.0, 2.5], dtype=numpy.complex128)
    fiber = numpy.array([1.0 + 0j, -1.0 + 0j])
    status, _ = track_path(sqrt_curve(), fiber, ws, newton_tol=1e-14, max_newton=1)
    assert status == TRACK_NEWTON_FAIL


def test_grid_matches_direct_evaluation():
    rng = numpy.random.default_rng(12)
    cmat = rng.normal(size=(4, 3))
    xs = numpy.linspace(-2, 2, 9)
    ys = numpy.linspace(-1.5, 1.5, 7)
    grid = grid_eval(cmat, xs, ys)
    assert grid.shape == (7, 9)
    for iy, y in enumerate(ys):
        for ix, x in enumerate(xs):
            direct = sum(
                cmat[j, k] * x**j * y**k
                for j in range(cmat.shape[0])
                for k in range(cmat.shape[1])
            )
            assert grid[iy, ix] == pytest.approx(direct)


def test_grid_flavors_agree():
    rng = numpy.random.default_rng(3)
    cmat = rng.normal(size=(6, 5))
    xs = numpy.linspace(-3, 1, 33)
    ys = numpy.linspace(0, 2, 17)
    assert numpy.allclose(grid_eval(cmat, xs, ys), _grid_eval_numpy(cmat, xs, ys))


def test_env_flag_forces_numpy_flavor():
    env = dict(os.environ, LEMKIT_NO_NUMBA="1")
    out = subprocess.run(
        [sys.executable, "-c", "from lemkit._kernels import runtime_flavor; print(runtime_flavor())"],
        capture_output=True,
        text=True,
        env=env,
        check=True,
    )
    assert out.stdout.strip() == "numpy"


def test_default_flavor_uses_numba_when_present():
    try:
        import numba  # noqa: F401
    except ImportError:
        pytest.skip("numba not installed")
    if os.environ.get("LEMKIT_NO_NUMBA", ""):
        assert runtime_flavor() == "numpy"
    else:
        assert runtime_flavor() == "numba"


def test_mp_tracker_matches_kernel():
    from lemkit.factor import _track_path_mp

    th = numpy.linspace(0, 2 * numpy.pi, 200)
    ws = numpy.exp(1j * th)
    fiber = numpy.array([1.0 + 0j, -1.0 + 0j])
    s_kernel, e_kernel = track_path(sqrt_curve(), fiber, ws)
    mat = [
        [mpmath.mpc(0), mpmath.mpc(-1)],
        [mpmath.mpc(0), mpmath.mpc(0)],
        [mpmath.mpc(1), mpmath.mpc(0)],
    ]
    s_mp, e_mp = _track_path_mp(
        mat,
        [mpmath.mpc(1), mpmath.mpc(-1)],
        [mpmath.mpc(w) for w in ws],
        0.4,
        mpmath.mpf(1e-12),
    )
    assert s_mp == 0 and s_kernel == TRACK_OK
    assert abs(complex(e_mp[0]) - e_kernel[0]) < 1e-9
    assert abs(complex(e_mp[1]) - e_kernel[1]) < 1e-9
