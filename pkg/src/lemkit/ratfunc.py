"""Univariate polynomials and rational functions over Q(i, a).

``Poly`` stores dense ascending coefficients; ``RatFunc`` keeps a reduced
numerator/denominator pair with monic denominator, so equality of rational
functions is plain structural equality.  The expression parser accepts the
grammar: variable z, integer and fraction literals, constants i and a,
operators + - * / ^ (nonnegative integer exponents), parentheses.  Implicit
multiplication is rejected.
"""

from __future__ import annotations

import math

import mpmath

from .field import ExactComplex, ONE, Rational, ZERO, rational

__all__ = [
    "Poly",
    "RatFunc",
    "ParseError",
    "parse",
    "parse_poly",
    "compose",
    "conjugate_function",
    "is_blaschke_quotient",
    "poles_with_multiplicity",
    "pole_multiplicities_exact",
    "proper_power_decomposition",
    "mobius",
    "evaluate",
    "poly_gcd",
    "INFINITY",
]

INFINITY = mpmath.inf


def _fc(c):
    if isinstance(c, ExactComplex):
        return c
    return ExactComplex(c)


class Poly:
    """Dense univariate polynomial; coefficient index = monomial degree."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [_fc(c) for c in coeffs]
        while cs and cs[-1].is_zero:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def constant(cls, c):
        return cls([c])

    @classmethod
    def variable(cls):
        return cls([0, 1])

    @classmethod
    def monomial(cls, c, k):
        return cls([0] * k + [c])

    @property
    def degree(self):
        return len(self.coeffs) - 1

    @property
    def is_zero(self):
        return not self.coeffs

    @property
    def is_constant(self):
        return len(self.coeffs) <= 1

    @property
    def lc(self):
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    @property
    def is_monic(self):
        return bool(self.coeffs) and self.coeffs[-1].is_one

    def coeff_at(self, k):
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else ZERO

    def constant_value(self):
        if not self.is_constant:
            raise ValueError(f"{self} is not constant")
        return self.coeffs[0] if self.coeffs else ZERO

    # ------------------------------------------------------------------
    # ring operations
    # ------------------------------------------------------------------
    def __add__(self, other):
        o = _to_poly(other)
        if o is None:
            return NotImplemented
        n = max(len(self.coeffs), len(o.coeffs))
        return Poly(
            [self.coeff_at(k) + o.coeff_at(k) for k in range(n)]
        )

    __radd__ = __add__

    def __sub__(self, other):
        o = _to_poly(other)
        if o is None:
            return NotImplemented
        n = max(len(self.coeffs), len(o.coeffs))
        return Poly(
            [self.coeff_at(k) - o.coeff_at(k) for k in range(n)]
        )

    def __rsub__(self, other):
        o = _to_poly(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self):
        return Poly([-c for c in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, Poly):
            if not self.coeffs or not other.coeffs:
                return Poly()
            out = [ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
            for j, cj in enumerate(self.coeffs):
                if cj.is_zero:
                    continue
                for k, ck in enumerate(other.coeffs):
                    out[j + k] = out[j + k] + cj * ck
            return Poly(out)
        try:
            c = _fc(other)
        except TypeError:
            return NotImplemented
        return Poly([x * c for x in self.coeffs])

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("polynomial exponent must be a nonnegative integer")
        result = Poly([1])
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __divmod__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return Poly(), self
        inv_lc = other.lc.inverse()
        quo = [ZERO] * (dq + 1)
        for j in range(dq, -1, -1):
            c = rem[j + other.degree] * inv_lc
            quo[j] = c
            if c.is_zero:
                continue
            for k, oc in enumerate(other.coeffs):
                rem[j + k] = rem[j + k] - c * oc
        return Poly(quo), Poly(rem[: other.degree])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other):
        q, r = divmod(self, other)
        if not r.is_zero:
            raise ValueError(f"{other} does not divide {self}")
        return q

    def monic(self):
        if self.is_zero:
            return self
        if self.is_monic:
            return self
        return self * self.lc.inverse()

    def derivative(self):
        return Poly([k * c for k, c in enumerate(self.coeffs)][1:])

    def conjugate_coeffs(self):
        return Poly([c.conjugate() for c in self.coeffs])

    def reversed_to(self, m):
        """z^m * P(1/z) as a polynomial; requires m >= degree."""
        if m < self.degree:
            raise ValueError("reversal order below degree")
        out = [ZERO] * (m + 1)
        for k, c in enumerate(self.coeffs):
            out[m - k] = c
        return Poly(out)

    def compose(self, other):
        """P(other) by Horner over Poly arithmetic."""
        result = Poly()
        for c in reversed(self.coeffs):
            result = result * other + Poly([c])
        return result

    def __call__(self, x):
        x = _fc(x)
        acc = ZERO
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def numeric_coeffs(self, precision_bits=53):
        return [c.to_float(precision_bits) for c in self.coeffs]

    # ------------------------------------------------------------------
    # structure
    # ------------------------------------------------------------------
    def squarefree_decomposition(self):
        """Yun's algorithm: returns [(f_i, i)] with monic squarefree f_i
        and self = lc * prod f_i^i."""
        if self.degree < 1:
            return []
        q = self.monic()
        d = q.derivative()
        a = poly_gcd(q, d)
        b = q.exact_div(a)
        c = d.exact_div(a)
        out = []
        i = 1
        while b.degree > 0:
            d2 = c - b.derivative()
            a2 = poly_gcd(b, d2)
            if a2.degree > 0:
                out.append((a2, i))
            b = b.exact_div(a2)
            c = d2.exact_div(a2)
            i += 1
        return out

    def to_expr_str(self, var="z"):
        if self.is_zero:
            return "0"
        parts = []
        for k in range(self.degree, -1, -1):
            c = self.coeff_at(k)
            if c.is_zero:
                continue
            if k == 0:
                parts.append(_coef_str(c))
            else:
                v = var if k == 1 else f"{var}^{k}"
                if c.is_one:
                    parts.append(v)
                elif (-c).is_one:
                    parts.append("-" + v)
                else:
                    parts.append(_coef_str(c) + "*" + v)
        out = parts[0]
        for p in parts[1:]:
            out += p if p.startswith("-") else "+" + p
        return out

    def __eq__(self, other):
        o = _to_poly(other)
        if o is None:
            return NotImplemented
        return self.coeffs == o.coeffs

    def __ne__(self, other):
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    def __hash__(self):
        return hash(self.coeffs)

    def __bool__(self):
        return bool(self.coeffs)

    def __repr__(self):
        return f"Poly({self.to_expr_str()!r})"


def _to_poly(x):
    if isinstance(x, Poly):
        return x
    if isinstance(x, (int, ExactComplex, Rational)):
        return Poly([x])
    return None


def _coef_str(c):
    # parenthesize anything the term grammar cannot absorb after '*'
    s = c.to_str()
    if c.is_rational:
        return s
    return "(" + s + ")"


def _primitive_part(p):
    """p scaled by a positive rational so the components are coprime
    integers; keeps the Euclid chain from compounding fraction sizes."""
    if p.is_zero:
        return p
    num_gcd = 0
    den_lcm = 1
    for c in p.coeffs:
        for q in (c.u0, c.u1, c.v0, c.v1):
            if q != 0:
                num_gcd = math.gcd(num_gcd, abs(int(q.numerator)))
                d = int(q.denominator)
                den_lcm = den_lcm * d // math.gcd(den_lcm, d)
    scale = rational(den_lcm, num_gcd)
    if scale == 1:
        return p
    return p * ExactComplex(scale)


def _pseudo_rem(a, b):
    """lc(b)^(deg a - deg b + 1) * a mod b, computed without division."""
    db = b.degree
    bc = b.coeffs
    lcb = bc[-1]
    r = list(a.coeffs)
    e = a.degree - db + 1
    while r and len(r) - 1 >= db:
        top = r[-1]
        if top.is_zero:
            r.pop()
            continue
        k = len(r) - 1 - db
        r = [lcb * c for c in r]
        for i, c in enumerate(bc):
            r[k + i] = r[k + i] - top * c
        r.pop()
        e -= 1
        while r and r[-1].is_zero:
            r.pop()
    if e > 0 and r:
        s = lcb**e
        r = [s * c for c in r]
    return Poly(r)


def poly_gcd(f, g):
    """Monic gcd over the coefficient field.

    Subresultant pseudo-remainder sequence: mere rational content removal
    cannot tame the growth over a number field, but dividing each
    pseudo-remainder by the predicted g*h^delta factor keeps every entry
    determinant-sized in the inputs.
    """
    a, b = _primitive_part(f), _primitive_part(g)
    if a.degree < b.degree:
        a, b = b, a
    if b.is_zero:
        return a if a.is_zero else a.monic()
    gc = ONE
    hc = ONE
    while True:
        delta = a.degree - b.degree
        r = _pseudo_rem(a, b)
        if r.is_zero:
            return b.monic()
        denom = (gc * hc**delta).inverse()
        a, b = b, Poly([c * denom for c in r.coeffs])
        gc = a.lc
        hc = hc ** (1 - delta) * gc**delta


class RatFunc:
    """Reduced rational function: gcd(num, den) = 1 and den monic."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        if not isinstance(num, Poly):
            num = Poly([num]) if not isinstance(num, (list, tuple)) else Poly(num)
        if den is None:
            den = Poly([1])
        elif not isinstance(den, Poly):
            den = Poly([den]) if not isinstance(den, (list, tuple)) else Poly(den)
        if den.is_zero:
            raise ZeroDivisionError("zero denominator")
        if num.is_zero:
            self.num = Poly()
            self.den = Poly([1])
            return
        if den.degree > 0:
            g = poly_gcd(num, den)
            if g.degree > 0:
                num = num.exact_div(g)
                den = den.exact_div(g)
        if not den.is_monic:
            c = den.lc.inverse()
            num = num * c
            den = den * c
        self.num = num
        self.den = den

    @property
    def degree(self):
        return max(self.num.degree, self.den.degree, 0)

    @property
    def is_constant(self):
        return self.num.degree <= 0 and self.den.degree <= 0

    @property
    def is_polynomial(self):
        return self.den.degree == 0

    def as_poly(self):
        if not self.is_polynomial:
            raise ValueError(f"{self} is not a polynomial")
        return self.num

    # ------------------------------------------------------------------
    # field operations (used by the parser and constructions)
    # ------------------------------------------------------------------
    def __add__(self, other):
        o = _to_ratfunc(other)
        if o is None:
            return NotImplemented
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __sub__(self, other):
        o = _to_ratfunc(other)
        if o is None:
            return NotImplemented
        return RatFunc(self.num * o.den - o.num * self.den, self.den * o.den)

    def __rsub__(self, other):
        o = _to_ratfunc(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __mul__(self, other):
        o = _to_ratfunc(other)
        if o is None:
            return NotImplemented
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _to_ratfunc(other)
        if o is None:
            return NotImplemented
        if o.num.is_zero:
            raise ZeroDivisionError("division by the zero rational function")
        return RatFunc(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        o = _to_ratfunc(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            if self.num.is_zero:
                raise ZeroDivisionError("inverse of the zero rational function")
            return RatFunc(self.den**-n, self.num**-n)
        return RatFunc(self.num**n, self.den**n)

    def reciprocal(self):
        if self.num.is_zero:
            raise ZeroDivisionError("reciprocal of zero")
        return RatFunc(self.den, self.num)

    # ------------------------------------------------------------------
    # evaluation
    # ------------------------------------------------------------------
    def eval_exact(self, x):
        """Value at an exact point; None when x is a pole."""
        d = self.den(x)
        if d.is_zero:
            return None
        return self.num(x) * d.inverse()

    def value_at_infinity(self):
        """Exact value at infinity; None encodes the point at infinity."""
        dn, dd = self.num.degree, self.den.degree
        if dn > dd:
            return None
        if dn < dd:
            return ZERO
        return self.num.lc

    def derivative(self):
        return RatFunc(
            self.num.derivative() * self.den - self.num * self.den.derivative(),
            self.den * self.den,
        )

    # ------------------------------------------------------------------
    # serialization
    # ------------------------------------------------------------------
    def to_str(self):
        return f"({self.num.to_expr_str()})/({self.den.to_expr_str()})"

    def __eq__(self, other):
        o = _to_ratfunc(other)
        if o is None:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __ne__(self, other):
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return f"RatFunc({self.to_str()!r})"


def _to_ratfunc(x):
    if isinstance(x, RatFunc):
        return x
    if isinstance(x, Poly):
        return RatFunc(x)
    if isinstance(x, (int, ExactComplex, Rational)):
        return RatFunc(Poly([x]))
    return None


# ----------------------------------------------------------------------
# module operations
# ----------------------------------------------------------------------
def compose(p, q):
    """Exact composition p(q(z)); degree is multiplicative."""
    if q.is_constant:
        raise ValueError("composition with a constant inner function")
    a, b = q.num, q.den
    m = max(p.num.degree, p.den.degree)
    bp = [Poly([1])]
    ap = [Poly([1])]
    for _ in range(m):
        bp.append(bp[-1] * b)
        ap.append(ap[-1] * a)
    num = Poly()
    den = Poly()
    for k in range(m + 1):
        ck = p.num.coeff_at(k)
        if not ck.is_zero:
            num = num + ap[k] * bp[m - k] * ck
        dk = p.den.coeff_at(k)
        if not dk.is_zero:
            den = den + ap[k] * bp[m - k] * dk
    return RatFunc(num, den)


def conjugate_function(p):
    """Coefficientwise complex conjugation; an involution."""
    return RatFunc(p.num.conjugate_coeffs(), p.den.conjugate_coeffs())


def is_blaschke_quotient(b):
    """True iff B(z) * conj(B)(1/z) = 1 as an exact identity."""
    if b.is_constant:
        raise ValueError("Blaschke test requires a non-constant function")
    bb = conjugate_function(b)
    m = b.degree
    lhs = b.num * bb.num.reversed_to(m)
    rhs = b.den * bb.den.reversed_to(m)
    return lhs == rhs


def pole_multiplicities_exact(q):
    """Multiset of pole multiplicities of q, including infinity."""
    out = []
    for factor, mult in q.den.squarefree_decomposition():
        out.extend([mult] * factor.degree)
    excess = q.num.degree - q.den.degree
    if excess > 0:
        out.append(excess)
    return sorted(out)


def poles_with_multiplicity(q, precision_bits=53):
    """Poles of q as (location, multiplicity); infinity reported as mpmath.inf.

    Multiplicities come from the exact square-free decomposition of the
    denominator; numerics only locate each simple root.
    """
    from .solve import univariate_roots

    out = []
    for factor, mult in q.den.squarefree_decomposition():
        for root, k in univariate_roots(factor, precision_bits):
            # factor is squarefree, so every numeric multiplicity is 1
            if k != 1:
                raise RuntimeError("square-free factor produced a multiple root")
            out.append((root, mult))
    excess = q.num.degree - q.den.degree
    if excess > 0:
        out.append((INFINITY, excess))
    return out


def proper_power_decomposition(p):
    """Maximal d with p = c * p1^d; (p, 1, 1) when p is not a proper power."""
    if not isinstance(p, Poly):
        raise ValueError("proper-power decomposition requires a polynomial")
    n = p.degree
    if n < 1:
        raise ValueError("proper-power decomposition requires a non-constant input")
    m = p.monic()
    for d in range(n, 1, -1):
        if n % d:
            continue
        root = _monic_dth_root(m, d)
        if root is not None:
            return root, d, p.lc
    return p, 1, ONE


def _monic_dth_root(m, d):
    n = m.degree
    k = n // d
    cand = Poly.monomial(ONE, k)
    for j in range(1, k + 1):
        cur = cand**d
        delta = m.coeff_at(n - j) - cur.coeff_at(n - j)
        b = delta * _fc(d).inverse() if not delta.is_zero else ZERO
        if not b.is_zero:
            cand = cand + Poly.monomial(b, k - j)
    return cand if cand**d == m else None


def mobius(a, b, c, d):
    """(a*z + b)/(c*z + d) with nonzero determinant."""
    a, b, c, d = _fc(a), _fc(b), _fc(c), _fc(d)
    if (a * d - b * c).is_zero:
        raise ValueError("degenerate Mobius transformation")
    return RatFunc(Poly([b, a]), Poly([d, c]))


def evaluate(p, z, precision_bits=53):
    """Numeric value of p at z; poles map to mpmath.inf."""
    with mpmath.workprec(precision_bits + 16):
        zz = mpmath.mpc(z)
        num = _horner_numeric(p.num, zz, precision_bits)
        den = _horner_numeric(p.den, zz, precision_bits)
        if den == 0:
            if num == 0:
                raise ZeroDivisionError("0/0 after reduction; not reachable")
            return INFINITY
        return num / den


def _horner_numeric(poly, z, precision_bits):
    acc = mpmath.mpc(0)
    for c in reversed(poly.coeffs):
        acc = acc * z + c.to_float(precision_bits)
    return acc


# ----------------------------------------------------------------------
# expression parser
# ----------------------------------------------------------------------
class ParseError(ValueError):
    def __init__(self, message, pos):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


_Z = RatFunc(Poly([0, 1]))
_I = RatFunc(Poly([ExactComplex(0, 1)]))
_A = RatFunc(Poly([ExactComplex(0, 0, 1)]))


class _Lexer:
    def __init__(self, text):
        self.text = text
        self.pos = 0

    def peek(self):
        t = self.text
        p = self.pos
        while p < len(t) and t[p].isspace():
            p += 1
        self.pos = p
        if p >= len(t):
            return ("end", "", p)
        ch = t[p]
        if ch.isdigit():
            q = p
            while q < len(t) and t[q].isdigit():
                q += 1
            return ("int", t[p:q], p)
        if ch in "zia":
            return ("sym", ch, p)
        if ch in "+-*/^()":
            return (ch, ch, p)
        raise ParseError(f"unexpected character {ch!r}", p)

    def take(self):
        kind, text, pos = self.peek()
        self.pos = pos + len(text)
        return kind, text, pos


class _Parser:
    def __init__(self, text):
        self.lex = _Lexer(text)

    def parse(self):
        value = self.expr()
        kind, text, pos = self.lex.peek()
        if kind != "end":
            raise ParseError(f"unexpected {text!r}", pos)
        return value

    def expr(self):
        value = self.term()
        while True:
            kind, _, _ = self.lex.peek()
            if kind == "+":
                self.lex.take()
                value = value + self.term()
            elif kind == "-":
                self.lex.take()
                value = value - self.term()
            else:
                return value

    def term(self):
        value = self.unary()
        while True:
            kind, _, pos = self.lex.peek()
            if kind == "*":
                self.lex.take()
                value = value * self.unary()
            elif kind == "/":
                self.lex.take()
                rhs = self.unary()
                if rhs.num.is_zero:
                    raise ParseError("division by zero", pos)
                value = value / rhs
            else:
                return value

    def unary(self):
        kind, _, _ = self.lex.peek()
        if kind == "-":
            self.lex.take()
            return -self.unary()
        if kind == "+":
            self.lex.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        kind, _, _ = self.lex.peek()
        if kind != "^":
            return base
        self.lex.take()
        ekind, etext, epos = self.lex.take()
        if ekind != "int":
            raise ParseError("exponent must be a nonnegative integer", epos)
        return base ** int(etext)

    def atom(self):
        kind, text, pos = self.lex.take()
        if kind == "int":
            return RatFunc(Poly([rational(text)]))
        if kind == "sym":
            return {"z": _Z, "i": _I, "a": _A}[text]
        if kind == "(":
            value = self.expr()
            ckind, _, cpos = self.lex.take()
            if ckind != ")":
                raise ParseError("expected ')'", cpos)
            return value
        raise ParseError(f"unexpected {text or 'end of input'!r}", pos)


def parse(text):
    """Parse an expression in z over Q(i, a) into a reduced RatFunc."""
    if not isinstance(text, str) or not text.strip():
        raise ParseError("empty expression", 0)
    return _Parser(text).parse()


def parse_poly(text):
    """Parse an expression that must reduce to a polynomial."""
    r = parse(text)
    if not r.is_polynomial:
        raise ValueError(f"{text!r} is not a polynomial")
    return r.num
