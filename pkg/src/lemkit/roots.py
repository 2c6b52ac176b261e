"""Simultaneous root refinement for complex univariate polynomials.

Ehrlich-Aberth iteration with Gauss-Seidel updates on mpmath complex
numbers.  Callers own exact coefficients and precision escalation; this
module only refines at a fixed working precision and reports failure by
returning None.
"""

from __future__ import annotations

import math

import mpmath
import numpy

__all__ = ["aberth", "cauchy_radius"]

_GOLDEN = 0.6180339887498949


def cauchy_radius(coeffs):
    """1 + max |c_i / c_n|: all roots lie inside this radius."""
    lead = abs(coeffs[-1])
    if lead == 0:
        raise ValueError("leading coefficient is zero")
    m = max(abs(c) for c in coeffs[:-1]) if len(coeffs) > 1 else mpmath.mpf(0)
    return 1 + m / lead


def _horner_pair(coeffs, x):
    # value and derivative in one sweep
    p = coeffs[-1]
    dp = mpmath.mpc(0)
    for c in reversed(coeffs[:-1]):
        dp = dp * x + p
        p = p * x + c
    return p, dp


def _horner_triple(coeffs, x):
    p = coeffs[-1]
    dp = mpmath.mpc(0)
    ddp = mpmath.mpc(0)
    for c in reversed(coeffs[:-1]):
        ddp = ddp * x + dp
        dp = dp * x + p
        p = p * x + c
    return p, dp, 2 * ddp


def _float64_seeds(coeffs):
    """Companion-matrix roots at float64 as refinement seeds.

    Returns None whenever the conversion loses the polynomial (overflow,
    vanished leading coefficient), leaving the caller on the circle start.
    """
    try:
        cs = [complex(c) for c in coeffs]
    except (OverflowError, ValueError):
        return None
    scale = max(abs(c) for c in cs)
    if not (scale > 0) or not math.isfinite(scale):
        return None
    cs = [c / scale for c in cs]
    if abs(cs[-1]) < 1e-13:
        return None
    arr = numpy.array(list(reversed(cs)), dtype=numpy.complex128)
    if not numpy.all(numpy.isfinite(arr)):
        return None
    try:
        found = numpy.roots(arr)
    except numpy.linalg.LinAlgError:
        return None
    if len(found) != len(coeffs) - 1 or not numpy.all(numpy.isfinite(found)):
        return None
    seeds = []
    for k, r in enumerate(found):
        x = mpmath.mpc(complex(r))
        # Aberth needs pairwise-distinct iterates
        while any(abs(x - y) < 1e-9 * (1 + abs(x)) for y in seeds):
            x += 1e-7 * (1 + abs(x)) * mpmath.exp(2j * mpmath.pi * _GOLDEN * (k + 1))
        seeds.append(x)
    return seeds


def aberth(coeffs, workprec_bits, seed=0, max_iters=600):
    """All roots of the polynomial with the given mpc coefficients.

    coeffs is ascending with nonzero leading coefficient.  Returns a list
    of degree-many mpc roots, or None when the iteration fails to reach
    the target step size.
    """
    deg = len(coeffs) - 1
    if deg < 1:
        return []
    with mpmath.workprec(workprec_bits):
        coeffs = [mpmath.mpc(c) for c in coeffs]
        # strip exact roots at the origin so the start circle is sane
        zeros_at_origin = 0
        while coeffs[zeros_at_origin] == 0:
            zeros_at_origin += 1
        if zeros_at_origin:
            coeffs = coeffs[zeros_at_origin:]
            deg -= zeros_at_origin
        roots = [mpmath.mpc(0)] * zeros_at_origin
        if deg == 0:
            return roots
        if deg == 1:
            return roots + [-coeffs[0] / coeffs[1]]
        target = mpmath.mpf(2) ** (8 - workprec_bits)
        tiny = mpmath.mpf(2) ** (16 - 2 * workprec_bits)
        # |p(x)| cannot be evaluated below the Horner rounding floor, and
        # near an ill-conditioned root the Newton correction stalls at
        # noise level above `target`; accept the root at the floor instead.
        floor_scale = (
            mpmath.mpf(2) ** (16 - workprec_bits)
            * (deg + 1)
            * max(abs(c) for c in coeffs)
        )

        def duplicate_groups(xs):
            groups = []
            claimed = set()
            for i in range(deg):
                if i in claimed:
                    continue
                group = [i]
                for j in range(i + 1, deg):
                    if j in claimed:
                        continue
                    if abs(xs[i] - xs[j]) < target * (1 + abs(xs[i])):
                        group.append(j)
                        claimed.add(j)
                if len(group) > 1:
                    groups.append(group)
            return groups

        def iterate(xs):
            # A root is settled only when its Newton correction is tiny too:
            # a pair of iterates trapped in one basin shows tiny steps (the
            # repulsion term dominates) while the Newton term stays large.
            settled = [False] * deg
            restarts = 0
            for _ in range(max_iters):
                progress = False
                for i in range(deg):
                    if settled[i]:
                        continue
                    progress = True
                    p, dp = _horner_pair(coeffs, xs[i])
                    if abs(p) <= floor_scale * max(1, abs(xs[i])) ** deg:
                        settled[i] = True
                        continue
                    if dp == 0:
                        xs[i] += target * (1 + abs(xs[i]))
                        continue
                    newton = p / dp
                    s = mpmath.mpc(0)
                    for j in range(deg):
                        if j == i:
                            continue
                        diff = xs[i] - xs[j]
                        if abs(diff) < tiny:
                            diff = tiny * (1 + 1j)
                        s += 1 / diff
                    denom = 1 - newton * s
                    if denom == 0:
                        step = newton
                    else:
                        step = newton / denom
                    xs[i] -= step
                    scale = max(1, abs(xs[i]))
                    if abs(step) < target * scale and abs(newton) < target * scale:
                        settled[i] = True
                if not progress:
                    groups = duplicate_groups(xs)
                    if not groups:
                        return xs
                    # Several iterates captured by one root: aim the extras
                    # at the nearest missed root, r2 = x0 - 2 p'/p'' when a
                    # close pair dominates the local factorization.
                    if restarts >= 3:
                        return None
                    restarts += 1
                    for group in groups:
                        x0 = xs[group[0]]
                        _, dp, ddp = _horner_triple(coeffs, x0)
                        for k, idx in enumerate(group[1:]):
                            if ddp != 0:
                                guess = x0 - 2 * dp / ddp * (1 + k * mpmath.mpf("0.05"))
                            else:
                                guess = x0 + (0.1 + 0.05 * k) * (1 + abs(x0)) * 1j
                            xs[idx] = guess
                            settled[idx] = False
            return None

        seeds = _float64_seeds(coeffs)
        if seeds is not None:
            refined = iterate(seeds)
            if refined is not None:
                return roots + refined
        r = cauchy_radius(coeffs)
        xs = []
        phase = 2 * mpmath.pi * ((seed * _GOLDEN) % 1.0)
        for k in range(deg):
            ang = phase + 2 * mpmath.pi * (k + 0.25) / deg + 0.3 * ((k * _GOLDEN) % 1.0)
            rad = r * (0.6 + 0.4 * ((k * 3 * _GOLDEN + 0.17) % 1.0))
            xs.append(rad * mpmath.exp(1j * ang))
        refined = iterate(xs)
        if refined is None:
            return None
        return roots + refined
