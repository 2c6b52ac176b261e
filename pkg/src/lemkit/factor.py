"""Counting absolute irreducible factors of bivariate curves.

The generic tool is numerical monodromy: the fiber of (z, w) -> w is
continued around every branch point, and the orbits of the resulting
permutation group are in bijection with the factors over the complex
numbers.  Everything that decides *where* to trace is exact (w-only
content, squarefree reduction, the discriminant and the leading
coefficient in z); only the path following itself is numeric, float64
kernels first with arbitrary-precision retries.

Two certificate producers avoid numerics entirely: a gcd condition on
pole multiplicities certifies irreducibility of separated curves, and
composing a Blaschke quotient with any inner function yields an exact
divisor of the composed curve.
"""

import math
import random
from dataclasses import dataclass
from typing import Optional

import mpmath
import numpy

from . import roots as _roots
from ._kernels import TRACK_OK, track_path
from .curves import BivarPoly, bivariate_gcd, divide_exact, hermitian_numerator, resultant_z
from .ratfunc import (
    Poly,
    RatFunc,
    compose,
    is_blaschke_quotient,
    pole_multiplicities_exact,
    poly_gcd,
)
from .solve import MAX_PRECISION_BITS

__all__ = [
    "FactorCountCertificate",
    "MonodromyIndeterminate",
    "MonodromyTrace",
    "absolute_factor_count",
    "certify_irreducible_tp",
    "composition_reducibility_witness",
    "monodromy_permutations",
]

_GOLDEN = 0.6180339887498949


class MonodromyIndeterminate(RuntimeError):
    """Path tracking kept failing at the precision cap."""

    def __init__(self, message, precision_bits_used):
        super().__init__(message)
        self.precision_bits_used = precision_bits_used


@dataclass
class FactorCountCertificate:
    """Verdict on the number of absolute irreducible factors."""

    count: int
    method: str  # "monodromy" | "tp-criterion" | "composition-witness"
    branch_points: list
    loops_traced: int
    min_fiber_separation: Optional[object]
    precision_bits_used: int

    def to_json_dict(self):
        return {
            "count": self.count,
            "method": self.method,
            "branch_points": [
                [mpmath.nstr(b.real, 32), mpmath.nstr(b.imag, 32)]
                for b in self.branch_points
            ],
            "loops_traced": self.loops_traced,
            "min_fiber_separation": (
                None
                if self.min_fiber_separation is None
                else mpmath.nstr(self.min_fiber_separation, 17)
            ),
            "precision_bits_used": self.precision_bits_used,
        }


@dataclass
class MonodromyTrace:
    """Fiber permutations generated by loops around the branch points.

    permutations[i] maps starting sheet index to ending sheet index for
    the loop around branch_points[i]; the loops are based at a common
    exterior point and ordered by the direction of their stems, so their
    left-to-right composition is a full counterclockwise boundary circle.
    infinity_permutation is the loop around w = infinity, the inverse of
    that boundary circle.
    """

    fiber: list
    permutations: list
    infinity_permutation: tuple
    branch_points: list
    min_fiber_separation: Optional[object]
    precision_bits_used: int


# ----------------------------------------------------------------------
# exact certificates
# ----------------------------------------------------------------------
def certify_irreducible_tp(p, q):
    """Irreducibility certificate for the separated curve of (p, q).

    When the pole multiplicities of q (infinity included) are jointly
    coprime with deg p, the curve p(z) - q(w) = 0 cleared of denominators
    is irreducible.  Returns None when the gcd exceeds 1; that is not a
    reducibility claim, the criterion is one-directional.
    """
    if not isinstance(p, Poly):
        raise ValueError("criterion requires a polynomial first argument")
    if p.is_zero or p.degree < 1:
        raise ValueError("criterion requires a non-constant polynomial")
    if isinstance(q, Poly):
        q = RatFunc(q)
    if not isinstance(q, RatFunc):
        raise ValueError("criterion requires a rational second argument")
    if q.is_constant:
        raise ValueError("criterion requires a non-constant rational function")
    g = p.degree
    for mult in pole_multiplicities_exact(q):
        g = math.gcd(g, mult)
    if g != 1:
        return None
    return FactorCountCertificate(
        count=1,
        method="tp-criterion",
        branch_points=[],
        loops_traced=0,
        min_fiber_separation=None,
        precision_bits_used=0,
    )


def composition_reducibility_witness(b, w):
    """P = b o w together with the exact divisor its inner part induces.

    For a Blaschke quotient b of degree at least two, the curve of w is a
    component of the curve of the composition; the division is performed
    exactly and returned as a constructive certificate.
    """
    if isinstance(b, Poly):
        b = RatFunc(b)
    if isinstance(w, Poly):
        w = RatFunc(w)
    if not isinstance(b, RatFunc) or not isinstance(w, RatFunc):
        raise ValueError("witness requires rational function arguments")
    if b.is_constant or b.degree < 2:
        raise ValueError("witness requires an outer function of degree at least two")
    if not is_blaschke_quotient(b):
        raise ValueError("witness requires a Blaschke quotient outer function")
    if w.is_constant:
        raise ValueError("witness requires a non-constant inner function")
    p = compose(b, w)
    factor = hermitian_numerator(w)
    quotient = divide_exact(hermitian_numerator(p), factor)
    if quotient is None:
        raise RuntimeError("exact division by the inner curve failed")
    return p, factor


# ----------------------------------------------------------------------
# exact preprocessing
# ----------------------------------------------------------------------
def _w_content(f):
    """Monic gcd in w of the z-coefficients; zero polynomial for f = 0."""
    g = Poly()
    for row in f.rows_as_w_polys():
        g = poly_gcd(g, row)
        if not g.is_zero and g.degree == 0:
            break
    return g


def _squarefree_part(p):
    """p with every repeated univariate factor collapsed to one copy."""
    if p.degree < 1:
        return p.monic()
    g = poly_gcd(p, p.derivative())
    if g.degree == 0:
        return p.monic()
    return p.exact_div(g).monic()


def _split_lines(f):
    """(w-only line count, primitive part of f in the z-direction)."""
    content = _w_content(f)
    if content.degree == 0:
        return 0, f
    g = divide_exact(f, BivarPoly.from_poly_in_w(content))
    lines = sum(fac.degree for fac, _ in content.squarefree_decomposition())
    return lines, g


def _squarefree_bivar(g):
    """Distinct-factor part of g; assumes trivial w-content."""
    gz = g.derivative_z()
    if gz.is_zero:
        return g
    rep = bivariate_gcd(g, gz)
    if rep.is_constant:
        return g
    return divide_exact(g, rep)


# ----------------------------------------------------------------------
# loop geometry
# ----------------------------------------------------------------------
def _detour_intervals(start, end, obstacles):
    """Crossings of the segment [start, end] with the obstacle disks.

    Each obstacle is (center, radius); the returned entries are
    (t_enter, t_exit, center, radius) with disjoint parameter ranges
    because the disks themselves are disjoint by construction.
    """
    d = end - start
    den = abs(d) ** 2
    out = []
    for center, radius in obstacles:
        f = start - center
        b = 2 * (f.real * d.real + f.imag * d.imag)
        c = abs(f) ** 2 - radius * radius
        disc = b * b - 4 * den * c
        if disc <= 0:
            continue
        root = math.sqrt(disc)
        t1 = (-b - root) / (2 * den)
        t2 = (-b + root) / (2 * den)
        if t2 <= 0 or t1 >= 1:
            continue
        t1 = max(t1, 0.0)
        t2 = min(t2, 1.0)
        out.append((t1, t2, center, radius))
    out.sort(key=lambda item: item[0])
    return out


def _arc_points(center, radius, ang_from, ang_to, ccw, steps):
    span = (ang_to - ang_from) % (2 * math.pi)
    if span == 0:
        return []  # grazing contact, nothing to bypass
    if not ccw:
        span -= 2 * math.pi
    return [
        center + radius * complex(math.cos(ang_from + span * s / steps),
                                  math.sin(ang_from + span * s / steps))
        for s in range(1, steps + 1)
    ]


def _segment_with_detours(start, end, obstacles, step_len):
    """Waypoints from start to end dodging the obstacle disks.

    Crossed disks are bypassed along the arc on the left of the travel
    direction, which keeps the loop composition order meaningful.
    """
    pts = []
    d = end - start
    length = abs(d)
    if length == 0:
        return pts
    crossings = _detour_intervals(start, end, obstacles)
    t_prev = 0.0
    p_prev = start
    for t1, t2, center, radius in crossings:
        if t1 <= t_prev:
            continue
        a = start + d * t1
        b = start + d * t2
        n = max(4, int(math.ceil(length * (t1 - t_prev) / step_len)))
        pts.extend(p_prev + (a - p_prev) * (s / n) for s in range(1, n + 1))
        ang_a = math.atan2((a - center).imag, (a - center).real)
        ang_b = math.atan2((b - center).imag, (b - center).real)
        mid_ccw = center + radius * complex(
            math.cos(ang_a + ((ang_b - ang_a) % (2 * math.pi)) / 2),
            math.sin(ang_a + ((ang_b - ang_a) % (2 * math.pi)) / 2),
        )
        normal = (d / length) * 1j  # left of the travel direction
        go_ccw = (
            (mid_ccw - a).real * normal.real + (mid_ccw - a).imag * normal.imag
        ) > 0
        pts.extend(_arc_points(center, radius, ang_a, ang_b, go_ccw, 16))
        t_prev = t2
        p_prev = b
    n = max(4, int(math.ceil(length * (1 - t_prev) / step_len)))
    pts.extend(p_prev + (end - p_prev) * (s / n) for s in range(1, n + 1))
    return pts


def _lollipop(w0, bp, radius, obstacles, circle_steps):
    """Closed loop from w0 around bp: stem, counterclockwise circle, stem back.

    The stem approaches the branch point on a geometric schedule, every
    leg halving the remaining distance.  Sheet motion per step scales
    like dw / sqrt(dist) near a simple branch point, so a uniform stem
    would need refinement inversely proportional to the loop radius;
    halving legs keep the per-step motion a fixed fraction of the sheet
    gap at every distance.
    """
    direction = (w0 - bp) / abs(w0 - bp)
    entry = bp + radius * direction
    legs = [w0]
    d = abs(w0 - bp)
    while d * 0.5 > radius:
        d *= 0.5
        legs.append(bp + d * direction)
    legs.append(entry)
    stem = []
    for a, b in zip(legs, legs[1:]):
        step_len = max(abs(b - a) / 8.0, radius / 8.0)
        stem.extend(_segment_with_detours(a, b, obstacles, step_len))
    ang0 = math.atan2(direction.imag, direction.real)
    circle = [
        bp
        + radius
        * complex(
            math.cos(ang0 + 2 * math.pi * s / circle_steps),
            math.sin(ang0 + 2 * math.pi * s / circle_steps),
        )
        for s in range(1, circle_steps + 1)
    ]
    back = list(reversed([w0] + stem[:-1]))
    return [w0] + stem + circle + back


def _refine(points, factor):
    """Insert factor-1 midpoints on every segment of the waypoint list."""
    out = [points[0]]
    for a, b in zip(points, points[1:]):
        for s in range(1, factor + 1):
            out.append(a + (b - a) * (s / factor))
    return out


# ----------------------------------------------------------------------
# tracking backends
# ----------------------------------------------------------------------
def _track_path_mp(mat, fiber, ws, jump_frac, newton_tol, max_newton=40):
    """mpmath mirror of the float64 kernel; same statuses and semantics."""
    z = list(fiber)
    nf = len(z)
    mz = len(mat) - 1
    for t in range(1, len(ws)):
        w = ws[t]
        cz = []
        for row in mat:
            acc = row[-1]
            for k in range(len(row) - 2, -1, -1):
                acc = acc * w + row[k]
            cz.append(acc)
        znew = list(z)
        for i in range(nf):
            x = znew[i]
            ok = False
            for _ in range(max_newton):
                p = cz[mz]
                dp = mpmath.mpc(0)
                for j in range(mz - 1, -1, -1):
                    dp = dp * x + p
                    p = p * x + cz[j]
                if dp == 0:
                    return 3, z
                step = p / dp
                x = x - step
                if abs(step) <= newton_tol * (1 + abs(x)):
                    ok = True
                    break
            if not ok:
                return 1, z
            znew[i] = x
        if nf > 1:
            for i in range(nf):
                dmin = min(abs(z[i] - z[j]) for j in range(nf) if j != i)
                if abs(znew[i] - z[i]) > jump_frac * dmin:
                    return 2, z
        z = znew
    return 0, z


def _match_permutation(base, end, tol):
    """Index map start->end against the base fiber; None if not a bijection."""
    perm = [None] * len(base)
    used = set()
    for i, x in enumerate(end):
        best = None
        best_d = None
        for j, y in enumerate(base):
            d = abs(x - y)
            if best_d is None or d < best_d:
                best, best_d = j, d
        if best_d > tol or best in used:
            return None
        used.add(best)
        perm[i] = best
    return tuple(perm)


def _trace_loop(mat64, mat_mp, fiber_mp, sep, waypoints, wp):
    """Permutation of one closed loop, float64 first, mpmath retries."""
    match_tol = sep / 3
    if mat64 is not None:
        fiber64 = numpy.array([complex(x) for x in fiber_mp], dtype=numpy.complex128)
        ws = waypoints
        for _ in range(7):
            status, end = track_path(
                mat64, fiber64, numpy.array(ws, dtype=numpy.complex128)
            )
            if status == TRACK_OK:
                perm = _match_permutation(
                    fiber_mp, [mpmath.mpc(x) for x in end], match_tol
                )
                if perm is not None:
                    return perm
            if len(ws) > 300000:
                break
            ws = _refine(ws, 2)
    newton_tol = mpmath.mpf(2) ** (24 - wp)
    ws = waypoints
    for _ in range(4):
        status, end = _track_path_mp(
            mat_mp, fiber_mp, [mpmath.mpc(x) for x in ws], 0.4, newton_tol
        )
        if status == 0:
            perm = _match_permutation(fiber_mp, end, match_tol)
            if perm is not None:
                return perm
        if len(ws) > 300000:
            break
        ws = _refine(ws, 2)
    return None


def _float64_matrix(g):
    """complex128 coefficient matrix, or None when float64 cannot hold it."""
    mat = g.numeric_matrix(53)
    out = numpy.zeros((len(mat), max(len(r) for r in mat)), dtype=numpy.complex128)
    biggest = 0.0
    for j, row in enumerate(mat):
        for k, c in enumerate(row):
            v = complex(c)
            if not (math.isfinite(v.real) and math.isfinite(v.imag)):
                return None
            out[j, k] = v
            biggest = max(biggest, abs(v))
    if not (0 < biggest < 1e250):
        return None
    return out


# ----------------------------------------------------------------------
# monodromy
# ----------------------------------------------------------------------
def _branch_poly(g):
    """Squarefree polynomial in w whose roots are all candidate branch points.

    Roots of the z-discriminant joined with roots of the leading z-row;
    the latter are where sheets escape to infinity, which the tracker
    must also avoid and loop around.
    """
    disc = resultant_z(g, g.derivative_z())
    if disc.is_zero:
        raise ValueError("discriminant vanished on a non-squarefree input")
    lead = g.rows_as_w_polys()[g.deg_z]
    sf_disc = _squarefree_part(disc)
    sf_lead = _squarefree_part(lead)
    if sf_lead.degree == 0:
        return sf_disc
    if sf_disc.degree == 0:
        return sf_lead
    overlap = poly_gcd(sf_disc, sf_lead)
    extra = sf_lead if overlap.degree == 0 else sf_lead.exact_div(overlap)
    return sf_disc * extra


def _locate_roots(poly, wp):
    coeffs = poly.numeric_coeffs(wp)
    with mpmath.workprec(wp):
        return _roots.aberth(coeffs, wp)


def _fiber_at(g, w0, wp):
    """Roots in z of g(z, w0) at the working precision; None on failure."""
    rows = g.rows_as_w_polys()
    with mpmath.workprec(wp):
        cz = []
        for row in rows:
            cs = row.numeric_coeffs(wp)
            cz.append(mpmath.polyval(list(reversed(cs)), w0))
        scale = max(abs(c) for c in cz)
        if scale == 0 or abs(cz[-1]) < mpmath.mpf(2) ** (-wp // 2) * scale:
            return None
        found = _roots.aberth(cz, wp)
    return found


def _monodromy(g, precision_bits, seed, max_precision_bits):
    """Trace for a squarefree g with trivial w-content and deg_z >= 1."""
    m = g.deg_z
    if m == 1:
        return MonodromyTrace(
            fiber=[],
            permutations=[],
            infinity_permutation=(0,),
            branch_points=[],
            min_fiber_separation=None,
            precision_bits_used=precision_bits,
        )
    bpoly = _branch_poly(g)
    rng = random.Random(seed)
    wp = max(precision_bits, 64)
    while True:
        trace = _monodromy_at(g, bpoly, wp, rng)
        if trace is not None:
            return trace
        if wp >= max_precision_bits:
            raise MonodromyIndeterminate(
                f"path tracking failed through {wp} bits", wp
            )
        wp = min(2 * wp, max_precision_bits)


def _monodromy_at(g, bpoly, wp, rng):
    m = g.deg_z
    with mpmath.workprec(wp + 32):
        if bpoly.degree > 0:
            located = _locate_roots(bpoly, wp + 32)
            if located is None:
                return None
            branch = [mpmath.mpc(b) for b in located]
        else:
            branch = []
        radius_base = max([mpmath.mpf(1)] + [abs(b) for b in branch])
        if len(branch) > 1:
            # loop geometry is laid out in float64; clusters tighter than
            # that cannot be encircled separately and escalation cannot fix it
            gap = min(
                abs(branch[i] - branch[j])
                for i in range(len(branch))
                for j in range(i + 1, len(branch))
            )
            if gap < 1e-9 * radius_base:
                raise MonodromyIndeterminate(
                    "branch points closer than the loop geometry can resolve",
                    wp,
                )
        big_r = (1 + _GOLDEN + 1) * radius_base
        mat_mp = g.numeric_matrix(wp + 32)
        mat64 = _float64_matrix(g)

        fiber = None
        for _ in range(12):
            # snapped to a float64-exact value so both tracking backends
            # start and end their loops at the same point as the fiber
            w0 = mpmath.mpc(
                complex(big_r * mpmath.exp(2j * mpmath.pi * rng.random()))
            )
            fiber = _fiber_at(g, w0, wp + 32)
            if fiber is None or len(fiber) != m:
                fiber = None
                continue
            sep = min(
                abs(fiber[i] - fiber[j])
                for i in range(m)
                for j in range(i + 1, m)
            )
            if sep > mpmath.mpf(2) ** (-(wp // 2)) * max(1, max(map(abs, fiber))):
                break
            fiber = None
        if fiber is None:
            return None
        if mat64 is not None and sep < 1e-7 * max(1, max(abs(x) for x in fiber)):
            mat64 = None  # float64 cannot separate the sheets

        # loop radii: a quarter of the gap to the nearest other branch point
        radii = []
        for i, b in enumerate(branch):
            others = [abs(b - c) for j, c in enumerate(branch) if j != i]
            if others:
                radii.append(float(min(others)) * 0.25)
            else:
                radii.append(0.25 * float(max(1, abs(b))))

        w0c = complex(w0)
        order = sorted(
            range(len(branch)),
            key=lambda i: math.atan2(
                (complex(branch[i]) - w0c).imag, (complex(branch[i]) - w0c).real
            ),
        )
        perms = []
        ordered_branch = []
        for i in order:
            b = complex(branch[i])
            obstacles = [
                (complex(branch[j]), 1.5 * radii[j])
                for j in range(len(branch))
                if j != i
            ]
            loop = _lollipop(w0c, b, radii[i], obstacles, 64)
            perm = _trace_loop(mat64, mat_mp, fiber, sep, loop, wp + 32)
            if perm is None:
                return None
            perms.append(perm)
            ordered_branch.append(branch[i])

        circle = [
            w0c
            * complex(
                math.cos(2 * math.pi * s / 256), math.sin(2 * math.pi * s / 256)
            )
            for s in range(257)
        ]
        big_perm = _trace_loop(mat64, mat_mp, fiber, sep, circle, wp + 32)
        if big_perm is None:
            return None
        inverse_big = [0] * m
        for i, j in enumerate(big_perm):
            inverse_big[j] = i
        return MonodromyTrace(
            fiber=fiber,
            permutations=perms,
            infinity_permutation=tuple(inverse_big),
            branch_points=ordered_branch,
            min_fiber_separation=sep,
            precision_bits_used=wp,
        )


def monodromy_permutations(
    f, precision_bits=256, seed=0, max_precision_bits=MAX_PRECISION_BITS
):
    """Loop permutations of the fiber of (z, w) -> w for a squarefree curve.

    The input must have trivial w-only content and no repeated factors;
    use absolute_factor_count for arbitrary inputs, which reduces to this
    after exact preprocessing.
    """
    if not isinstance(f, BivarPoly):
        raise ValueError("monodromy requires a bivariate polynomial")
    if f.is_zero or f.is_constant:
        raise ValueError("monodromy requires a non-constant polynomial")
    if _w_content(f).degree > 0:
        raise ValueError("monodromy requires trivial w-only content")
    gz = f.derivative_z()
    if not gz.is_zero and not bivariate_gcd(f, gz).is_constant:
        raise ValueError("monodromy requires a squarefree polynomial")
    return _monodromy(f, precision_bits, seed, max_precision_bits)


def _orbit_count(size, perms):
    parent = list(range(size))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for perm in perms:
        for i, j in enumerate(perm):
            ri, rj = find(i), find(j)
            if ri != rj:
                parent[ri] = rj
    return len({find(i) for i in range(size)})


def absolute_factor_count(f, precision_bits=256, seed=0, max_precision_bits=MAX_PRECISION_BITS):
    """Number of distinct absolute irreducible factors of f.

    Factors constant in z (w-only lines) are split off and counted
    exactly; repeated factors are collapsed to their squarefree part
    before counting.  The remaining count is the number of orbits of the
    monodromy action on a generic fiber.
    """
    if not isinstance(f, BivarPoly):
        raise ValueError("factor counting requires a bivariate polynomial")
    if f.is_zero or f.is_constant:
        raise ValueError("factor counting requires a non-constant polynomial")
    lines, g = _split_lines(f)
    if g.is_constant:
        return FactorCountCertificate(
            count=lines,
            method="monodromy",
            branch_points=[],
            loops_traced=0,
            min_fiber_separation=None,
            precision_bits_used=0,
        )
    g = _squarefree_bivar(g)
    trace = _monodromy(g, precision_bits, seed, max_precision_bits)
    if g.deg_z == 1:
        orbit_total = 1
        loops = 0
    else:
        perms = list(trace.permutations) + [trace.infinity_permutation]
        orbit_total = _orbit_count(g.deg_z, perms)
        loops = len(trace.permutations) + 1
    return FactorCountCertificate(
        count=lines + orbit_total,
        method="monodromy",
        branch_points=trace.branch_points,
        loops_traced=loops,
        min_fiber_separation=trace.min_fiber_separation,
        precision_bits_used=trace.precision_bits_used,
    )
