"""Root finding, lemniscate intersection counting, and the real Bezout check.

The exact layers produce eliminants and gcd certificates; everything
numeric funnels through univariate_roots, which validates residuals
against the exact coefficients and escalates precision on failure.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional

import mpmath

from . import roots as _roots
from .curves import BivarPoly, bivariate_gcd, hermitian_numerator, resultant_w
from .field import ExactComplex
from .ratfunc import Poly, compose, mobius

__all__ = [
    "univariate_roots",
    "on_lemniscate",
    "lemniscate_intersections",
    "real_bezout_check",
    "IntersectionReport",
    "BezoutReport",
    "PoleProximityError",
    "MAX_PRECISION_BITS",
]

MAX_PRECISION_BITS = 4096


class PoleProximityError(ValueError):
    """Raised when a membership query lands within tolerance of a pole."""


def _residual_bound(poly, precision_bits):
    norm = max(
        abs(c.to_float(53)) for c in poly.coeffs
    )
    return mpmath.mpf(2) ** (20 - precision_bits) * norm


def _roots_of_squarefree(poly, precision_bits, cap):
    """Residual-validated roots of an exact squarefree polynomial."""
    wp = precision_bits + 32
    attempts = []
    while True:
        with mpmath.workprec(wp):
            coeffs = poly.numeric_coeffs(wp)
            found = _roots.aberth(coeffs, wp)
            if found is not None:
                bound = _residual_bound(poly, precision_bits)
                ok = True
                for x in found:
                    val = mpmath.polyval(list(reversed(coeffs)), x)
                    if abs(val) > bound * max(1, abs(x)) ** poly.degree:
                        ok = False
                        break
                if ok:
                    return [mpmath.mpc(x) for x in found], wp
            attempts.append(wp)
        if wp >= cap + 32:
            raise RuntimeError(
                f"root finding failed for degree {poly.degree} at precisions {attempts}"
            )
        wp = min(2 * wp, cap + 32)


def univariate_roots(p, precision_bits=256, max_precision_bits=MAX_PRECISION_BITS):
    """All complex roots of p with exact multiplicities.

    Multiplicities come from the exact square-free decomposition; the
    numeric work only locates the distinct roots of each factor.
    """
    if not isinstance(p, Poly):
        raise ValueError("univariate_roots expects a Poly")
    if p.is_zero or p.degree < 1:
        raise ValueError("root finding requires a nonzero non-constant polynomial")
    out = []
    for factor, mult in p.squarefree_decomposition():
        located, _ = _roots_of_squarefree(factor, precision_bits, max_precision_bits)
        out.extend((root, mult) for root in located)
    return out


def on_lemniscate(p, z, tol=None, precision_bits=256):
    """True iff | |p(z)| - 1 | < tol; raises near poles of p."""
    if tol is None:
        tol = mpmath.mpf(2) ** (-(precision_bits // 2))
    with mpmath.workprec(precision_bits + 16):
        zz = mpmath.mpc(z)
        num_c = p.num.numeric_coeffs(precision_bits + 16)
        den_c = p.den.numeric_coeffs(precision_bits + 16)
        nv = mpmath.polyval(list(reversed(num_c)), zz)
        dv = mpmath.polyval(list(reversed(den_c)), zz)
        scale = max(abs(c) for c in den_c) * max(1, abs(zz)) ** p.den.degree
        if abs(dv) <= tol * scale:
            raise PoleProximityError(f"point {z} is within {tol} of a pole")
        return abs(abs(nv / dv) - 1) < tol


# ----------------------------------------------------------------------
# reports
# ----------------------------------------------------------------------
def _decimal_digits(precision_bits):
    return max(17, int(precision_bits * 0.30103) + 2)


def _point_json(z, precision_bits):
    digits = _decimal_digits(precision_bits)
    with mpmath.workprec(precision_bits + 16):
        zz = mpmath.mpc(z)
        return [
            mpmath.nstr(zz.real, digits, strip_zeros=False),
            mpmath.nstr(zz.imag, digits, strip_zeros=False),
        ]


@dataclass
class IntersectionReport:
    """Outcome of counting the common points of two lemniscates."""

    infinite: bool
    common_component: Optional[BivarPoly]
    points: list
    count: int
    bound: int
    min_separation: Optional[object]
    precision_bits_used: int
    status: str = "ok"
    falsification: bool = False

    def to_json_dict(self):
        return {
            "infinite": self.infinite,
            "common_component": (
                None
                if self.common_component is None
                else self.common_component.to_json_dict()
            ),
            "points": [_point_json(z, self.precision_bits_used) for z in self.points],
            "count": self.count,
            "bound": self.bound,
            "min_separation": (
                None
                if self.min_separation is None
                else mpmath.nstr(
                    self.min_separation, _decimal_digits(self.precision_bits_used)
                )
            ),
            "precision_bits_used": self.precision_bits_used,
            "status": self.status,
            "falsification": self.falsification,
        }


@dataclass
class BezoutReport:
    """Outcome of counting conjugate-locus solutions of two Hermitian curves."""

    verdict: str  # "finite" | "infinite" | "indeterminate"
    count: int
    bound: int
    points: list
    min_separation: Optional[object]
    precision_bits_used: int
    falsification: bool = False

    def to_json_dict(self):
        return {
            "verdict": self.verdict,
            "count": self.count,
            "bound": self.bound,
            "points": [_point_json(z, self.precision_bits_used) for z in self.points],
            "min_separation": (
                None
                if self.min_separation is None
                else mpmath.nstr(
                    self.min_separation, _decimal_digits(self.precision_bits_used)
                )
            ),
            "precision_bits_used": self.precision_bits_used,
            "falsification": self.falsification,
        }


# ----------------------------------------------------------------------
# numeric stage helpers
# ----------------------------------------------------------------------
def _default_tol(precision_bits):
    return mpmath.mpf(2) ** (-(precision_bits // 2))


def _cluster(points, tol):
    """Single-linkage clusters of radius tol.

    Returns (centroids, gap) where gap is the smallest distance between
    members of different clusters, or None with fewer than two clusters.
    """
    n = len(points)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    dists = {}
    for i in range(n):
        for j in range(i + 1, n):
            dists[i, j] = abs(points[i] - points[j])
            if dists[i, j] < tol:
                parent[find(i)] = find(j)
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    reps = []
    for members in groups.values():
        acc = mpmath.mpc(0)
        for i in members:
            acc += points[i]
        reps.append(acc / len(members))
    gap = None
    for (i, j), d in dists.items():
        if find(i) != find(j) and (gap is None or d < gap):
            gap = d
    return reps, gap


def _w_roots_at(e, z0, precision_bits):
    """Numeric roots in w of E(z0, w); None when they cannot be resolved."""
    mat = e.numeric_matrix(precision_bits)
    coeffs = []
    for k in range(len(mat[0])):
        acc = mpmath.mpc(0)
        for row in reversed(mat):
            acc = acc * z0 + row[k]
        coeffs.append(acc)
    top = max(abs(c) for c in coeffs)
    if top == 0:
        return None
    cutoff = mpmath.mpf(2) ** (-(precision_bits // 2)) * top
    while len(coeffs) > 1 and abs(coeffs[-1]) < cutoff:
        coeffs.pop()
    if len(coeffs) == 1:
        return []
    found = _roots.aberth(coeffs, precision_bits)
    return found


def _min_pairwise(points):
    best = None
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            d = abs(points[i] - points[j])
            if best is None or d < best:
                best = d
    return best


def _sorted_points(points):
    return sorted(points, key=lambda z: (z.real, z.imag))


def _conjugate_locus_solutions(
    eliminant, e_first, validate, precision_bits, max_precision_bits
):
    """Distinct z with (z, conj z) on both curves, with the gap gate applied.

    Returns (points, min_separation) or None when the configuration cannot
    be resolved at this precision.
    """
    tol = _default_tol(precision_bits)
    kept = []
    with mpmath.workprec(precision_bits + 16):
        if eliminant.degree >= 1:
            located = univariate_roots(eliminant, precision_bits, max_precision_bits)
            for z0, _ in located:
                wroots = _w_roots_at(e_first, z0, precision_bits)
                if wroots is None:
                    return None
                window = tol * max(1, abs(z0))
                target = mpmath.conj(z0)
                if not any(abs(w - target) < window for w in wroots):
                    continue
                if not validate(z0, tol):
                    continue
                kept.append(mpmath.mpc(z0))
        reps, gap = _cluster(kept, tol)
    if gap is not None and gap < 10 * tol:
        return None
    return reps, gap


# ----------------------------------------------------------------------
# lemniscate intersections
# ----------------------------------------------------------------------
def _passes_through_infinity(p):
    v = p.value_at_infinity()
    return v is not None and v.has_modulus_one()


def _normalizing_mobius(p1, p2, seed):
    """A Gaussian-integer Mobius map whose image of infinity avoids both
    lemniscates, so every common point stays affine after composition."""
    rng = random.Random(seed)
    for _ in range(500):
        a, b, c, d = (
            ExactComplex(rng.randint(-3, 3), rng.randint(-3, 3)) for _ in range(4)
        )
        if c.is_zero or (a * d - b * c).is_zero:
            continue
        hit = a * c.inverse()
        ok = True
        for p in (p1, p2):
            v = p.eval_exact(hit)
            if v is not None and v.has_modulus_one():
                ok = False
                break
        if ok:
            return mobius(a, b, c, d)
    raise RuntimeError("no admissible Mobius normalization found")


def lemniscate_intersections(
    p1,
    p2,
    precision_bits=256,
    seed=0,
    max_precision_bits=MAX_PRECISION_BITS,
):
    """Count the common points of the lemniscates of p1 and p2.

    Stage one is exact: a non-constant gcd of the two Hermitian numerators
    certifies a shared curve component and therefore an infinite answer.
    Stage two eliminates w, locates the eliminant roots, and keeps the
    z whose fiber root matches conj z and which both membership tests
    accept; clusters below the separation gate escalate the precision.
    """
    if p1.is_constant or p2.is_constant:
        raise ValueError("lemniscate intersection requires non-constant inputs")
    n1, n2 = p1.degree, p2.degree
    bound = 2 * n1 * n2
    e1 = hermitian_numerator(p1)
    e2 = hermitian_numerator(p2)
    g = bivariate_gcd(e1, e2)
    if not g.is_constant:
        return IntersectionReport(
            infinite=True,
            common_component=g,
            points=[],
            count=0,
            bound=bound,
            min_separation=None,
            precision_bits_used=precision_bits,
        )

    mu = None
    drop_sink = False
    if _passes_through_infinity(p1) or _passes_through_infinity(p2):
        mu = _normalizing_mobius(p1, p2, seed)
        q1, q2 = compose(p1, mu), compose(p2, mu)
        e1, e2 = hermitian_numerator(q1), hermitian_numerator(q2)
        # when both lemniscates pass through infinity its preimage becomes
        # a genuine common point of the composed pair and must be removed
        drop_sink = _passes_through_infinity(p1) and _passes_through_infinity(p2)
    else:
        q1, q2 = p1, p2

    eliminant = resultant_w(e1, e2)
    if eliminant.is_zero:
        raise RuntimeError("eliminant vanished although the gcd was constant")

    def validate(z0, tol, wp):
        try:
            return on_lemniscate(q1, z0, tol, wp) and on_lemniscate(q2, z0, tol, wp)
        except PoleProximityError:
            return False

    wp = precision_bits
    status = "ok"
    points = []
    min_sep = None
    while True:
        try:
            res = _conjugate_locus_solutions(
                eliminant,
                e1,
                lambda z0, tol: validate(z0, tol, wp),
                wp,
                max_precision_bits,
            )
        except RuntimeError:
            status = "indeterminate"
            break
        if res is not None:
            reps, _ = res
            tol = _default_tol(wp)
            with mpmath.workprec(wp + 16):
                if mu is not None:
                    av, bv, cv, dv = (
                        x.to_float(wp)
                        for x in (
                            mu.num.coeff_at(1),
                            mu.num.coeff_at(0),
                            mu.den.coeff_at(1),
                            mu.den.coeff_at(0),
                        )
                    )
                    sink = -dv / cv
                    final = []
                    for z in reps:
                        if drop_sink and abs(z - sink) < 10 * tol * max(1, abs(sink)):
                            continue
                        final.append((av * z + bv) / (cv * z + dv))
                else:
                    final = reps
                min_sep = _min_pairwise(final)
            if min_sep is not None and min_sep < 10 * tol:
                res = None
            else:
                points = _sorted_points(final)
                break
        if wp >= max_precision_bits:
            status = "indeterminate"
            break
        wp = min(2 * wp, max_precision_bits)

    if status != "ok":
        return IntersectionReport(
            infinite=False,
            common_component=None,
            points=[],
            count=0,
            bound=bound,
            min_separation=None,
            precision_bits_used=wp,
            status=status,
        )
    return IntersectionReport(
        infinite=False,
        common_component=None,
        points=points,
        count=len(points),
        bound=bound,
        min_separation=min_sep,
        precision_bits_used=wp,
        falsification=len(points) > bound,
    )


# ----------------------------------------------------------------------
# real Bezout check
# ----------------------------------------------------------------------
def _hermitian_normalize(f):
    """f rescaled by a unit so that coeff[j][k] = conj(coeff[k][j]).

    Returns None when no unit scalar achieves the symmetry; the zero set
    is unchanged, so counting may proceed on the rescaled curve.
    """
    if f.is_hermitian():
        return f
    size = max(f.deg_z, f.deg_w) + 1
    tau = None
    for j in range(size):
        for k in range(j, size):
            cjk, ckj = f.at(j, k), f.at(k, j)
            if cjk.is_zero != ckj.is_zero:
                return None
            if cjk.is_zero:
                continue
            t = cjk * ckj.conjugate().inverse()
            if tau is None:
                if not t.has_modulus_one():
                    return None
                tau = t
            elif t != tau:
                return None
    if tau is None:
        return None
    minus_one = -ExactComplex(1)
    lam = ExactComplex(0, 1) if tau == minus_one else ExactComplex(1) + tau.conjugate()
    h = f * lam
    if not h.is_hermitian():
        return None
    return h


def real_bezout_check(
    f,
    g,
    precision_bits=256,
    max_precision_bits=MAX_PRECISION_BITS,
):
    """Count solutions of F = G = 0 on the locus w = conj z.

    Requires both inputs Hermitian-symmetric, up to a unit scalar which is
    normalized away; the finite verdict carries the distinct solution
    count, checked against the 2mn bound.
    """
    if not isinstance(f, BivarPoly) or not isinstance(g, BivarPoly):
        raise ValueError("real_bezout_check expects bivariate polynomials")
    if f.is_zero or g.is_zero:
        raise ValueError("real_bezout_check requires nonzero inputs")
    f = _hermitian_normalize(f)
    g = _hermitian_normalize(g)
    if f is None or g is None:
        raise ValueError("real_bezout_check requires Hermitian-symmetric inputs")
    m, n = f.deg_z, g.deg_z
    bound = 2 * m * n
    common = bivariate_gcd(f, g)
    if not common.is_constant:
        return BezoutReport(
            verdict="infinite",
            count=0,
            bound=bound,
            points=[],
            min_separation=None,
            precision_bits_used=precision_bits,
        )
    if f.is_constant or g.is_constant:
        return BezoutReport(
            verdict="finite",
            count=0,
            bound=bound,
            points=[],
            min_separation=None,
            precision_bits_used=precision_bits,
        )

    eliminant = resultant_w(f, g)
    if eliminant.is_zero:
        raise RuntimeError("eliminant vanished although the gcd was constant")

    fm = max(abs(c.to_float(53)) for row in f.coeff for c in row)
    gm = max(abs(c.to_float(53)) for row in g.coeff for c in row)

    def validate(z0, tol, wp):
        w0 = mpmath.conj(z0)
        grow = max(1, abs(z0))
        sf = fm * grow ** (f.deg_z + f.deg_w)
        sg = gm * grow ** (g.deg_z + g.deg_w)
        return (
            abs(f.eval_numeric(z0, w0, wp)) <= tol * sf
            and abs(g.eval_numeric(z0, w0, wp)) <= tol * sg
        )

    wp = precision_bits
    while True:
        try:
            res = _conjugate_locus_solutions(
                eliminant,
                f,
                lambda z0, tol: validate(z0, tol, wp),
                wp,
                max_precision_bits,
            )
        except RuntimeError:
            res = None
            wp = max_precision_bits
        if res is not None:
            points, _ = res
            with mpmath.workprec(wp + 16):
                min_sep = _min_pairwise(points)
            return BezoutReport(
                verdict="finite",
                count=len(points),
                bound=bound,
                points=_sorted_points(points),
                min_separation=min_sep,
                precision_bits_used=wp,
                falsification=len(points) > bound,
            )
        if wp >= max_precision_bits:
            return BezoutReport(
                verdict="indeterminate",
                count=0,
                bound=bound,
                points=[],
                min_separation=None,
                precision_bits_used=wp,
            )
        wp = min(2 * wp, max_precision_bits)
