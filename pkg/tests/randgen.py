"""Seeded random generators shared by the test modules."""

from lemkit.field import ExactComplex, rational
from lemkit.ratfunc import Poly, RatFunc


def rand_rational(rng, span=10):
    return rational(rng.randint(-span, span), rng.randint(1, span))


def rand_gaussian(rng, span=10):
    return ExactComplex(rand_rational(rng, span), rand_rational(rng, span))


def rand_element(rng, span=10):
    return ExactComplex(
        rand_rational(rng, span),
        rand_rational(rng, span),
        rand_rational(rng, span),
        rand_rational(rng, span),
    )


def rand_poly(rng, degree, span=5, gaussian=True, field=False):
    while True:
        if field:
            cs = [rand_element(rng, span) for _ in range(degree + 1)]
        elif gaussian:
            cs = [rand_gaussian(rng, span) for _ in range(degree + 1)]
        else:
            cs = [ExactComplex(rand_rational(rng, span)) for _ in range(degree + 1)]
        p = Poly(cs)
        if p.degree == degree:
            return p


def rand_ratfunc(rng, num_degree, den_degree, span=5, gaussian=True):
    while True:
        num = rand_poly(rng, num_degree, span, gaussian)
        den = rand_poly(rng, den_degree, span, gaussian)
        r = RatFunc(num, den)
        if r.num.degree == num_degree and r.den.degree == den_degree:
            return r
