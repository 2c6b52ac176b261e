"""Exact arithmetic in the number field Q(i, a), where a^2 = -a - 3.

Every coefficient in the toolkit lives here.  An element is stored as

    (u0 + u1*i) + (v0 + v1*i)*a

with four exact rational components kept in lowest terms.  Complex
conjugation acts by i -> -i together with a -> -1 - a (the other root of
t^2 + t + 3), which is exactly what the complex embedding

    a = (-1 + i*sqrt(11)) / 2       (positive imaginary part)

induces.  All numeric output goes through ``to_float`` so the embedding is
pinned in one place.
"""

from __future__ import annotations

import re
from fractions import Fraction

import mpmath

try:
    from gmpy2 import mpq as Rational
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    from fractions import Fraction as Rational

__all__ = [
    "Rational",
    "rational",
    "ExactComplex",
    "sign_of_quadratic_real",
    "ZERO",
    "ONE",
    "I",
    "A",
]


def rational(x, y=None):
    """Coerce to an exact rational; accepts int, 'p/q' strings, Fraction."""
    if y is not None:
        return Rational(x) / Rational(y)
    if isinstance(x, Rational):
        return x
    if isinstance(x, (int, str, Fraction)):
        return Rational(x)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def sign_of_quadratic_real(alpha, beta):
    """Exact sign of alpha + beta*sqrt(11) for rational alpha, beta."""
    if beta == 0:
        return (alpha > 0) - (alpha < 0)
    if alpha == 0:
        return 1 if beta > 0 else -1
    if alpha > 0 and beta > 0:
        return 1
    if alpha < 0 and beta < 0:
        return -1
    # opposite signs: the term with larger square dominates
    dominant_is_alpha = alpha * alpha - 11 * beta * beta > 0
    if alpha > 0:
        return 1 if dominant_is_alpha else -1
    return -1 if dominant_is_alpha else 1


def _new(u0, u1, v0, v1):
    x = ExactComplex.__new__(ExactComplex)
    x.u0 = u0
    x.u1 = u1
    x.v0 = v0
    x.v1 = v1
    return x


def _coerce(x):
    if isinstance(x, ExactComplex):
        return x
    if isinstance(x, (int, Rational, Fraction)):
        return _new(rational(x), _Q0, _Q0, _Q0)
    return None


_TERM_RE = re.compile(r"([+-]?)(?:(\d+(?:/\d+)?)(?:\*(i\*a|i|a))?|(i\*a|i|a))\Z")


class ExactComplex:
    """An element of Q(i, a) with a^2 = -a - 3, stored exactly."""

    __slots__ = ("u0", "u1", "v0", "v1")

    def __init__(self, u0=0, u1=0, v0=0, v1=0):
        self.u0 = rational(u0)
        self.u1 = rational(u1)
        self.v0 = rational(v0)
        self.v1 = rational(v1)

    # ------------------------------------------------------------------
    # predicates
    # ------------------------------------------------------------------
    @property
    def is_zero(self):
        return self.u0 == 0 and self.u1 == 0 and self.v0 == 0 and self.v1 == 0

    @property
    def is_one(self):
        return self.u0 == 1 and self.u1 == 0 and self.v0 == 0 and self.v1 == 0

    @property
    def is_rational(self):
        return self.u1 == 0 and self.v0 == 0 and self.v1 == 0

    @property
    def is_gaussian(self):
        """True when the element lies in Q(i) (no a-component)."""
        return self.v0 == 0 and self.v1 == 0

    @property
    def is_conj_fixed(self):
        """True when the element equals its own conjugate (a real number)."""
        return self.v0 == 0 and self.v1 == 2 * self.u1

    def rational_value(self):
        if not self.is_rational:
            raise ValueError(f"{self} is not rational")
        return self.u0

    # ------------------------------------------------------------------
    # arithmetic
    # ------------------------------------------------------------------
    def __add__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return _new(self.u0 + o.u0, self.u1 + o.u1, self.v0 + o.v0, self.v1 + o.v1)

    __radd__ = __add__

    def __sub__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return _new(self.u0 - o.u0, self.u1 - o.u1, self.v0 - o.v0, self.v1 - o.v1)

    def __rsub__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self):
        return _new(-self.u0, -self.u1, -self.v0, -self.v1)

    def __mul__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        a0, a1, b0, b1 = self.u0, self.u1, self.v0, self.v1
        c0, c1, d0, d1 = o.u0, o.u1, o.v0, o.v1
        if b0 == 0 and b1 == 0 and d0 == 0 and d1 == 0:
            # both Gaussian: plain complex multiplication
            return _new(a0 * c0 - a1 * c1, a0 * c1 + a1 * c0, _Q0, _Q0)
        # (p1 + q1*a)(p2 + q2*a) = p1p2 - 3 q1q2 + (p1q2 + q1p2 - q1q2) a
        pp0 = a0 * c0 - a1 * c1
        pp1 = a0 * c1 + a1 * c0
        pq0 = a0 * d0 - a1 * d1
        pq1 = a0 * d1 + a1 * d0
        qp0 = b0 * c0 - b1 * c1
        qp1 = b0 * c1 + b1 * c0
        qq0 = b0 * d0 - b1 * d1
        qq1 = b0 * d1 + b1 * d0
        return _new(
            pp0 - 3 * qq0,
            pp1 - 3 * qq1,
            pq0 + qp0 - qq0,
            pq1 + qp1 - qq1,
        )

    __rmul__ = __mul__

    def inverse(self):
        """Multiplicative inverse; raises ZeroDivisionError on zero."""
        a0, a1, b0, b1 = self.u0, self.u1, self.v0, self.v1
        # with x = p + q*a (p, q in Q(i)):  x * (p + q*(-1-a)) = p^2 - pq + 3q^2
        pp0 = a0 * a0 - a1 * a1
        pp1 = 2 * a0 * a1
        pq0 = a0 * b0 - a1 * b1
        pq1 = a0 * b1 + a1 * b0
        qq0 = b0 * b0 - b1 * b1
        qq1 = 2 * b0 * b1
        n0 = pp0 - pq0 + 3 * qq0
        n1 = pp1 - pq1 + 3 * qq1
        d = n0 * n0 + n1 * n1
        if d == 0:
            raise ZeroDivisionError("division by zero in Q(i, a)")
        in0 = n0 / d
        in1 = -n1 / d
        t0, t1 = a0 - b0, a1 - b1
        return _new(
            t0 * in0 - t1 * in1,
            t0 * in1 + t1 * in0,
            (-b0) * in0 + b1 * in1,
            (-b0) * in1 + (-b1) * in0,
        )

    def __truediv__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # ------------------------------------------------------------------
    # conjugation and signs
    # ------------------------------------------------------------------
    def conjugate(self):
        """Complex conjugation: i -> -i, a -> -1 - a."""
        return _new(self.u0 - self.v0, self.v1 - self.u1, -self.v0, self.v1)

    def modulus_squared(self):
        """|x|^2 = x * conjugate(x), an exact conj-fixed element."""
        return self * self.conjugate()

    def has_modulus_one(self):
        return (self * self.conjugate()).is_one

    def real_sign(self):
        """Exact sign of the real part under the pinned embedding."""
        return sign_of_quadratic_real(self.u0 - self.v0 / 2, -self.v1 / 2)

    def imag_sign(self):
        """Exact sign of the imaginary part under the pinned embedding."""
        return sign_of_quadratic_real(self.u1 - self.v1 / 2, self.v0 / 2)

    # ------------------------------------------------------------------
    # numeric embedding
    # ------------------------------------------------------------------
    def to_float(self, precision_bits=53):
        """Complex value under a = (-1 + i*sqrt(11))/2 at the given precision."""
        if precision_bits < 53:
            raise ValueError("precision_bits must be at least 53")
        with mpmath.workprec(precision_bits + 16):
            s11 = mpmath.sqrt(11)
            re = _mpf_q(self.u0) - _mpf_q(self.v0) / 2 - _mpf_q(self.v1) * s11 / 2
            im = _mpf_q(self.u1) - _mpf_q(self.v1) / 2 + _mpf_q(self.v0) * s11 / 2
            return mpmath.mpc(re, im)

    def to_complex(self):
        val = self.to_float(53)
        return complex(float(val.real), float(val.imag))

    # ------------------------------------------------------------------
    # text form: terms ordered 1, i, a, i*a, no spaces
    # ------------------------------------------------------------------
    def to_str(self):
        parts = []
        for coef, sym in (
            (self.u0, ""),
            (self.u1, "i"),
            (self.v0, "a"),
            (self.v1, "i*a"),
        ):
            if coef == 0:
                continue
            if sym == "":
                parts.append(str(coef))
            elif coef == 1:
                parts.append(sym)
            elif coef == -1:
                parts.append("-" + sym)
            else:
                parts.append(str(coef) + "*" + sym)
        if not parts:
            return "0"
        out = parts[0]
        for p in parts[1:]:
            out += p if p.startswith("-") else "+" + p
        return out

    @classmethod
    def from_str(cls, text):
        s = text.strip().replace(" ", "")
        if not s:
            raise ValueError("empty field element")
        terms = re.findall(r"[+-]?[^+-]+", s)
        if "".join(terms) != s:
            raise ValueError(f"malformed field element {text!r}")
        u0 = u1 = v0 = v1 = _Q0
        for term in terms:
            m = _TERM_RE.match(term)
            if not m:
                raise ValueError(f"malformed term {term!r} in {text!r}")
            sign_s, num_s, sym_s, bare_s = m.groups()
            q = rational(num_s) if num_s is not None else _Q1
            if sign_s == "-":
                q = -q
            sym = sym_s or bare_s or ""
            if sym == "":
                u0 += q
            elif sym == "i":
                u1 += q
            elif sym == "a":
                v0 += q
            else:
                v1 += q
        return _new(u0, u1, v0, v1)

    # ------------------------------------------------------------------
    # comparison / hashing / repr
    # ------------------------------------------------------------------
    def __eq__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return (
            self.u0 == o.u0
            and self.u1 == o.u1
            and self.v0 == o.v0
            and self.v1 == o.v1
        )

    def __ne__(self, other):
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    def __hash__(self):
        return hash((self.u0, self.u1, self.v0, self.v1))

    def __bool__(self):
        return not self.is_zero

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"ExactComplex({self.to_str()!r})"


def _mpf_q(q):
    return mpmath.mpf(int(q.numerator)) / int(q.denominator)


_Q0 = rational(0)
_Q1 = rational(1)

ZERO = ExactComplex(0)
ONE = ExactComplex(1)
I = ExactComplex(0, 1)
A = ExactComplex(0, 0, 1)
