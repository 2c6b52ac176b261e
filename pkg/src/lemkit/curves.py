"""Bivariate curves attached to rational functions.

Constructs the separated-variable numerator E_{P,Q}, the Hermitian
numerator of P(z) * conj(P)(w) - 1, and the real lemniscate polynomial
obtained by the substitution z = x+iy, w = x-iy.  Also houses the exact
bivariate gcd (subresultant sequence over Q(i,a)[w]) and resultants by
evaluation-interpolation, which the solving and factor-counting layers
build on.

Normalization: the curve polynomials are defined by the source material
only up to constants.  E_{P,Q} is scaled so its first nonzero coefficient
in row-major order (rows by descending z-degree) is 1.  The Hermitian
numerator is scaled by a positive rational only (content cleared, no sign
flip), which preserves the orientation sign(E_P(z, conj z)) =
sign(|P(z)| - 1); the lemniscate polynomial is the exact substitution
image of that normal form.
"""

from __future__ import annotations

import math

from .field import ExactComplex, I, ONE, ZERO, rational
from .ratfunc import Poly, poly_gcd

__all__ = [
    "BivarPoly",
    "separated_numerator",
    "hermitian_numerator",
    "lemniscate_poly",
    "bivariate_gcd",
    "divide_exact",
    "resultant_univar",
    "resultant_w",
    "resultant_z",
]


def _fc(c):
    if isinstance(c, ExactComplex):
        return c
    return ExactComplex(c)


class BivarPoly:
    """Dense bivariate polynomial; coeff[j][k] multiplies z^j * w^k."""

    __slots__ = ("coeff",)

    def __init__(self, rows=()):
        mat = [[_fc(c) for c in row] for row in rows]
        width = max((len(r) for r in mat), default=0)
        for r in mat:
            r.extend([ZERO] * (width - len(r)))
        while mat and all(c.is_zero for c in mat[-1]):
            mat.pop()
        if mat:
            while width > 0 and all(r[width - 1].is_zero for r in mat):
                width -= 1
            mat = [r[:width] for r in mat]
        self.coeff = tuple(tuple(r) for r in mat)

    @classmethod
    def constant(cls, c):
        return cls([[c]])

    @classmethod
    def from_poly_in_z(cls, p):
        return cls([[c] for c in p.coeffs])

    @classmethod
    def from_poly_in_w(cls, p):
        return cls([list(p.coeffs)])

    @property
    def is_zero(self):
        return not self.coeff

    @property
    def bidegree(self):
        if not self.coeff:
            return (-1, -1)
        return (len(self.coeff) - 1, len(self.coeff[0]) - 1)

    @property
    def deg_z(self):
        return self.bidegree[0]

    @property
    def deg_w(self):
        return self.bidegree[1]

    @property
    def is_constant(self):
        return self.deg_z <= 0 and self.deg_w <= 0

    def constant_value(self):
        if not self.coeff:
            return ZERO
        if not self.is_constant:
            raise ValueError("not a constant bivariate polynomial")
        return self.coeff[0][0]

    def at(self, j, k):
        if 0 <= j < len(self.coeff) and 0 <= k < len(self.coeff[0]):
            return self.coeff[j][k]
        return ZERO

    # ------------------------------------------------------------------
    # ring operations
    # ------------------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, BivarPoly):
            return NotImplemented
        nr = max(len(self.coeff), len(other.coeff))
        nc = max(
            len(self.coeff[0]) if self.coeff else 0,
            len(other.coeff[0]) if other.coeff else 0,
        )
        return BivarPoly(
            [[self.at(j, k) + other.at(j, k) for k in range(nc)] for j in range(nr)]
        )

    def __sub__(self, other):
        if not isinstance(other, BivarPoly):
            return NotImplemented
        return self + (-other)

    def __neg__(self):
        return BivarPoly([[-c for c in row] for row in self.coeff])

    def __mul__(self, other):
        if isinstance(other, BivarPoly):
            if self.is_zero or other.is_zero:
                return BivarPoly()
            nr = len(self.coeff) + len(other.coeff) - 1
            nc = len(self.coeff[0]) + len(other.coeff[0]) - 1
            out = [[ZERO] * nc for _ in range(nr)]
            for j, row in enumerate(self.coeff):
                for k, c in enumerate(row):
                    if c.is_zero:
                        continue
                    for j2, row2 in enumerate(other.coeff):
                        for k2, c2 in enumerate(row2):
                            if c2.is_zero:
                                continue
                            out[j + j2][k + k2] = out[j + j2][k + k2] + c * c2
            return BivarPoly(out)
        try:
            c = _fc(other)
        except TypeError:
            return NotImplemented
        return BivarPoly([[x * c for x in row] for row in self.coeff])

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = BivarPoly.constant(ONE)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # ------------------------------------------------------------------
    # structure
    # ------------------------------------------------------------------
    def transpose(self):
        """Swap the two variables."""
        if not self.coeff:
            return self
        nr, nc = len(self.coeff), len(self.coeff[0])
        return BivarPoly([[self.coeff[j][k] for j in range(nr)] for k in range(nc)])

    def derivative_z(self):
        return BivarPoly(
            [[c * j for c in row] for j, row in enumerate(self.coeff)][1:]
        )

    def conjugate_entries(self):
        return BivarPoly([[c.conjugate() for c in row] for row in self.coeff])

    def is_hermitian(self):
        """coeff[j][k] == conj(coeff[k][j]) for all j, k."""
        if self.is_zero:
            return True
        n = max(len(self.coeff), len(self.coeff[0]))
        for j in range(n):
            for k in range(j, n):
                if self.at(j, k) != self.at(k, j).conjugate():
                    return False
        return True

    def leading_rowmajor(self):
        """First nonzero coefficient, rows scanned by descending z-degree."""
        for row in reversed(self.coeff):
            for c in row:
                if not c.is_zero:
                    return c
        raise ValueError("zero polynomial has no leading coefficient")

    def rows_as_w_polys(self):
        """The z^j coefficients as polynomials in w."""
        return [Poly(row) for row in self.coeff]

    # ------------------------------------------------------------------
    # evaluation
    # ------------------------------------------------------------------
    def eval_exact(self, z, w):
        z, w = _fc(z), _fc(w)
        acc = ZERO
        for row in reversed(self.coeff):
            racc = ZERO
            for c in reversed(row):
                racc = racc * w + c
            acc = acc * z + racc
        return acc

    def numeric_matrix(self, precision_bits=53):
        return [[c.to_float(precision_bits) for c in row] for row in self.coeff]

    def eval_numeric(self, z, w, precision_bits=53):
        import mpmath

        with mpmath.workprec(precision_bits + 16):
            acc = mpmath.mpc(0)
            for row in reversed(self.numeric_matrix(precision_bits)):
                racc = mpmath.mpc(0)
                for c in reversed(row):
                    racc = racc * w + c
                acc = acc * z + racc
            return acc

    def substitute_poly(self, zsub, wsub):
        """Exact substitution of bivariate values for the two variables."""
        acc = BivarPoly()
        for row in reversed(self.coeff):
            racc = BivarPoly()
            for c in reversed(row):
                racc = racc * wsub + BivarPoly.constant(c)
            acc = acc * zsub + racc
        return acc

    # ------------------------------------------------------------------
    # serialization
    # ------------------------------------------------------------------
    def to_json_dict(self):
        return {
            "bidegree": list(self.bidegree),
            "coeff": [[c.to_str() for c in row] for row in self.coeff],
        }

    @classmethod
    def from_json_dict(cls, data):
        rows = [[ExactComplex.from_str(c) for c in row] for row in data["coeff"]]
        out = cls(rows)
        if "bidegree" in data and list(out.bidegree) != list(data["bidegree"]):
            raise ValueError("bidegree field does not match coefficient matrix")
        return out

    def __eq__(self, other):
        if not isinstance(other, BivarPoly):
            return NotImplemented
        return self.coeff == other.coeff

    def __ne__(self, other):
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    def __hash__(self):
        return hash(self.coeff)

    def __repr__(self):
        return f"BivarPoly(bidegree={self.bidegree})"


# ----------------------------------------------------------------------
# curve constructions
# ----------------------------------------------------------------------
def separated_numerator(p, q):
    """E_{P,Q}: numerator of P(x) - Q(y), leading coefficient made 1."""
    if p.is_constant or q.is_constant:
        raise ValueError("separated numerator requires non-constant inputs")
    dp, dq = p.degree, q.degree
    rows = []
    for j in range(dp + 1):
        nj = p.num.coeff_at(j)
        dj = p.den.coeff_at(j)
        rows.append(
            [nj * q.den.coeff_at(k) - q.num.coeff_at(k) * dj for k in range(dq + 1)]
        )
    e = BivarPoly(rows)
    lead = e.leading_rowmajor()
    if not lead.is_one:
        e = e * lead.inverse()
    return e


def _rational_content(values):
    num_gcd = 0
    den_lcm = 1
    for q in values:
        n = abs(int(q.numerator))
        d = int(q.denominator)
        num_gcd = math.gcd(num_gcd, n)
        den_lcm = den_lcm * d // math.gcd(den_lcm, d)
    if num_gcd == 0:
        raise ValueError("content of the zero collection")
    return rational(num_gcd, den_lcm)


def _clear_content(e):
    comps = []
    for row in e.coeff:
        for c in row:
            for q in (c.u0, c.u1, c.v0, c.v1):
                if q != 0:
                    comps.append(q)
    content = _rational_content(comps)
    if content == 1:
        return e
    return e * ExactComplex(content).inverse()


def hermitian_numerator(p):
    """The Hermitian numerator of P(z) * conj(P)(w) - 1.

    Scaled by a positive rational only (content cleared), so that the sign
    of the value at (z, conj z) matches the sign of |P(z)| - 1.
    """
    if p.is_constant:
        raise ValueError("Hermitian numerator requires a non-constant input")
    n = p.degree
    nc = [p.num.coeff_at(j) for j in range(n + 1)]
    dc = [p.den.coeff_at(j) for j in range(n + 1)]
    ncc = [c.conjugate() for c in nc]
    dcc = [c.conjugate() for c in dc]
    rows = [
        [nc[j] * ncc[k] - dc[j] * dcc[k] for k in range(n + 1)] for j in range(n + 1)
    ]
    e = _clear_content(BivarPoly(rows))
    if e.bidegree != (n, n):
        raise RuntimeError("Hermitian numerator lost bidegree; input not reduced?")
    if not e.is_hermitian():
        raise RuntimeError("Hermitian symmetry failed; internal inconsistency")
    return e


_X_PLUS_IY = BivarPoly([[ZERO, I], [ONE, ZERO]])
_X_MINUS_IY = BivarPoly([[ZERO, -I], [ONE, ZERO]])


def lemniscate_poly(p):
    """L_P(x,y) = hermitian_numerator(P) at z = x+iy, w = x-iy, exactly."""
    e = hermitian_numerator(p)
    lp = e.substitute_poly(_X_PLUS_IY, _X_MINUS_IY)
    for row in lp.coeff:
        for c in row:
            if not c.is_conj_fixed:
                raise RuntimeError("lemniscate polynomial has a non-real coefficient")
    return lp


# ----------------------------------------------------------------------
# gcd machinery in (K[w])[z]
# ----------------------------------------------------------------------
def _zpolys_trim(fs):
    while fs and fs[-1].is_zero:
        fs.pop()
    return fs


def _zpolys_of(e):
    return _zpolys_trim(e.rows_as_w_polys())


def _bivar_of_zpolys(fs):
    width = max((f.degree + 1 for f in fs), default=0)
    return BivarPoly(
        [[f.coeff_at(k) for k in range(width)] for f in fs]
    )


def _zpolys_content(fs):
    g = Poly()
    for f in fs:
        g = poly_gcd(g, f)
        if g.degree == 0 and not g.is_zero:
            break
    return g.monic() if not g.is_zero else g


def _zpolys_scale(fs, c):
    return [f * c for f in fs]


def _zpolys_div_poly(fs, d):
    return [f.exact_div(d) for f in fs]


def _zpolys_prem(a, b):
    """Pseudo-remainder of a by b in (K[w])[z]: lc(b)^(da-db+1) * a mod b."""
    db = len(b) - 1
    lb = b[-1]
    r = list(a)
    e = (len(a) - 1) - db + 1
    while r and len(r) - 1 >= db:
        dr = len(r) - 1
        lr = r[-1]
        r = [x * lb for x in r]
        shift = dr - db
        for k in range(db + 1):
            r[shift + k] = r[shift + k] - lr * b[k]
        del r[dr:]
        _zpolys_trim(r)
        e -= 1
    if e > 0 and r:
        r = _zpolys_scale(r, lb**e)
    return r


def bivariate_gcd(f, g):
    """Exact gcd in Q(i,a)[z,w], scaled so its leading coefficient is 1."""
    if f.is_zero or g.is_zero:
        raise ValueError("gcd of a zero polynomial")
    fz = _zpolys_of(f)
    gz = _zpolys_of(g)
    cf = _zpolys_content(fz)
    cg = _zpolys_content(gz)
    fpp = _zpolys_div_poly(fz, cf)
    gpp = _zpolys_div_poly(gz, cg)
    ccontent = poly_gcd(cf, cg)
    pp = _zpolys_gcd_primitive(fpp, gpp)
    result = _bivar_of_zpolys(pp) * BivarPoly.from_poly_in_w(ccontent)
    lead = result.leading_rowmajor()
    if not lead.is_one:
        result = result * lead.inverse()
    return result


def _zpolys_gcd_primitive(a, b):
    """Subresultant gcd of primitive inputs; result is primitive in z."""
    if len(a) - 1 < len(b) - 1:
        a, b = b, a
    if len(b) == 0:
        return a
    if len(b) == 1:
        # nonzero constant in z: primitive, so the gcd is trivial
        return [Poly([1])]
    g = Poly([1])
    h = Poly([1])
    while True:
        delta = (len(a) - 1) - (len(b) - 1)
        r = _zpolys_prem(a, b)
        if not r:
            break
        if len(r) == 1:
            return [Poly([1])]
        a, b = b, _zpolys_div_poly(r, g * h**delta)
        g = a[-1]
        if delta == 0:
            pass
        elif delta == 1:
            h = g
        else:
            h = (g**delta).exact_div(h ** (delta - 1))
    content = _zpolys_content(b)
    return _zpolys_div_poly(b, content)


def divide_exact(f, g):
    """f / g in Q(i,a)[z,w] when g divides f exactly; None otherwise."""
    if g.is_zero:
        raise ZeroDivisionError("bivariate division by zero")
    if f.is_zero:
        return BivarPoly()
    gz = _zpolys_of(g)
    cg = _zpolys_content(gz)
    fz = _zpolys_of(f)
    try:
        if cg.degree > 0:
            gz = _zpolys_div_poly(gz, cg)
            fz = _zpolys_div_poly(fz, cg)
        quo = _zpolys_long_division(fz, gz)
    except ValueError:
        return None
    if quo is None:
        return None
    result = _bivar_of_zpolys(quo)
    if result * g != f:
        return None
    return result


def _zpolys_long_division(a, b):
    db = len(b) - 1
    lb = b[-1]
    rem = list(a)
    if len(rem) - 1 < db:
        return None
    quo = [Poly() for _ in range(len(rem) - db)]
    while _zpolys_trim(rem) and len(rem) - 1 >= db:
        dr = len(rem) - 1
        q = rem[-1].exact_div(lb)
        quo[dr - db] = q
        for k in range(db + 1):
            rem[dr - db + k] = rem[dr - db + k] - q * b[k]
        rem = rem[:dr]
    if _zpolys_trim(rem):
        return None
    return quo


# ----------------------------------------------------------------------
# resultants
# ----------------------------------------------------------------------
def resultant_univar(f, g):
    """Resultant of two univariate polynomials over the exact field."""
    if f.is_zero or g.is_zero:
        return ZERO
    sign = 1
    if f.degree < g.degree:
        if (f.degree * g.degree) % 2:
            sign = -sign
        f, g = g, f
    acc = ONE
    while g.degree > 0:
        r = f % g
        if r.is_zero:
            return ZERO
        if (f.degree * g.degree) % 2:
            sign = -sign
        acc = acc * g.lc ** (f.degree - r.degree)
        f, g = g, r
    acc = acc * g.coeffs[0] ** f.degree
    return acc if sign > 0 else -acc


def _w_slice(e, t):
    """E(t, w) as a polynomial in w at an exact point t."""
    tp = ONE
    out = [ZERO] * (e.deg_w + 1)
    for row in e.coeff:
        for k, c in enumerate(row):
            if not c.is_zero:
                out[k] = out[k] + c * tp
        tp = tp * t
    return Poly(out)


def _newton_interpolate(points):
    """Exact polynomial through (x_i, y_i) by divided differences."""
    xs = [p[0] for p in points]
    coefs = [p[1] for p in points]
    n = len(points)
    for level in range(1, n):
        for i in range(n - 1, level - 1, -1):
            num = coefs[i] - coefs[i - 1]
            den = xs[i] - xs[i - level]
            coefs[i] = num * den.inverse()
    poly = Poly()
    for i in range(n - 1, -1, -1):
        poly = poly * Poly([-xs[i], ONE]) + Poly([coefs[i]])
    return poly


def resultant_w(f, g):
    """Res_w(F, G) as an exact polynomial in z by sampling + interpolation."""
    if f.is_zero or g.is_zero:
        raise ValueError("resultant of a zero polynomial")
    if f.deg_w == 0 or g.deg_w == 0:
        # degenerate elimination: Res_w(F, G) with deg_w G = 0 is G^deg_w F
        if f.deg_w == 0 and g.deg_w == 0:
            return Poly([1])
        if g.deg_w == 0:
            return Poly([row[0] for row in g.coeff]) ** f.deg_w
        return Poly([row[0] for row in f.coeff]) ** g.deg_w
    bound = f.deg_w * g.deg_z + g.deg_w * f.deg_z
    lcf = Poly([row[f.deg_w] for row in f.coeff])
    lcg = Poly([row[g.deg_w] for row in g.coeff])
    points = []
    t_int = 0
    while len(points) < bound + 1:
        t = ExactComplex(t_int)
        t_int = -t_int + (1 if t_int <= 0 else 0)
        if lcf(t).is_zero or lcg(t).is_zero:
            continue
        val = resultant_univar(_w_slice(f, t), _w_slice(g, t))
        points.append((t, val))
    return _newton_interpolate(points)


def resultant_z(f, g):
    """Res_z(F, G) as an exact polynomial in w."""
    return resultant_w(f.transpose(), g.transpose())
