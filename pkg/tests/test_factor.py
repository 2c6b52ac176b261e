import random
from fractions import Fraction

import pytest

from lemkit.curves import BivarPoly, divide_exact, hermitian_numerator
from lemkit.factor import (
    FactorCountCertificate,
    absolute_factor_count,
    certify_irreducible_tp,
    composition_reducibility_witness,
    monodromy_permutations,
)
from lemkit.field import ExactComplex
from lemkit.ratfunc import Poly, RatFunc, parse, parse_poly, proper_power_decomposition
from randgen import rand_poly


def bp(rows):
    return BivarPoly(rows)


def conj_poly(p):
    return Poly([c.conjugate() for c in p.coeffs])


def fold(perms, size):
    acc = list(range(size))
    for perm in perms:
        acc = [perm[a] for a in acc]
    return tuple(acc)


# ----------------------------------------------------------------------
# counting on pinned curves
# ----------------------------------------------------------------------
def test_hyperbola_is_irreducible():
    cert = absolute_factor_count(bp([[-1], [0, 1]]))  # zw - 1
    assert cert.count == 1
    assert cert.method == "monodromy"


def test_squared_variables_split():
    # z^2 w^2 - 1 = (zw-1)(zw+1); one branch candidate at w = 0
    cert = absolute_factor_count(bp([[-1], [0], [0, 0, 1]]))
    assert cert.count == 2
    assert len(cert.branch_points) == 1
    assert cert.loops_traced == 2


def test_cubic_fold_is_irreducible():
    # z^3 - 3z - w: fold singularities over w = +-2, transitive group
    cert = absolute_factor_count(bp([[0, -1], [-3], [0], [1]]))
    assert cert.count == 1
    assert sorted(abs(complex(b)) for b in cert.branch_points) == pytest.approx([2, 2])


def test_z_only_factors_counted_without_tracing():
    cert = absolute_factor_count(bp([[-1], [0], [1]]))  # (z-1)(z+1)
    assert cert.count == 2
    assert cert.branch_points == []


def test_w_only_factors_counted_exactly():
    f = BivarPoly.from_poly_in_w(parse_poly("z^2 - 1"))  # (w-1)(w+1)
    cert = absolute_factor_count(f)
    assert cert.count == 2
    assert cert.loops_traced == 0


def test_mixed_line_and_curve():
    line = BivarPoly.from_poly_in_w(parse_poly("z - 1"))
    curve = bp([[-1], [0, 1]])
    cert = absolute_factor_count(line * curve)
    assert cert.count == 2


def test_repeated_factor_counted_once():
    """The count is of distinct factors: (zw-1)^2 collapses to one."""
    h = bp([[-1], [0, 1]])
    cert = absolute_factor_count(h * h)
    assert cert.count == 1


def test_unit_circle_square_curve():
    e = hermitian_numerator(parse("z^2"))
    assert absolute_factor_count(e).count == 2


def test_rejects_constant_and_wrong_type():
    with pytest.raises(ValueError):
        absolute_factor_count(BivarPoly.constant(3))
    with pytest.raises(ValueError):
        absolute_factor_count(parse_poly("z^2"))


# ----------------------------------------------------------------------
# power compositions
# ----------------------------------------------------------------------
def test_power_composition_counts_match_exponent():
    w = parse_poly("z^2 + z")
    for d in (2, 3):
        p = w
        for _ in range(d - 1):
            p = p * w
        cert = absolute_factor_count(hermitian_numerator(RatFunc(p)))
        assert cert.count == d


def test_power_curve_division_identities():
    # E_{W^d} = (W Wbar)^d - 1 and dividing out W Wbar - 1 leaves the
    # cyclotomic-like cofactor sum_{k<d} (W Wbar)^k
    w = parse_poly("z^2 + z")
    ww = BivarPoly.from_poly_in_z(w) * BivarPoly.from_poly_in_w(conj_poly(w))
    one = BivarPoly.constant(1)
    for d in (2, 3):
        p = w
        for _ in range(d - 1):
            p = p * w
        e = hermitian_numerator(RatFunc(p))
        power = one
        for _ in range(d):
            power = power * ww
        assert e == power - one
        cofactor = one
        acc = one
        for _ in range(1, d):
            acc = acc * ww
            cofactor = cofactor + acc
        assert divide_exact(e, ww - one) == cofactor


# ----------------------------------------------------------------------
# gcd criterion on pole multiplicities
# ----------------------------------------------------------------------
def test_tp_criterion_certifies_coprime_case():
    cert = certify_irreducible_tp(parse_poly("z^2"), parse("1/z"))
    assert cert is not None
    assert cert.count == 1
    assert cert.method == "tp-criterion"
    assert cert.loops_traced == 0


def test_tp_criterion_inapplicable_is_none():
    assert certify_irreducible_tp(parse_poly("z^2"), parse("1/z^2")) is None


def test_tp_criterion_mixed_multiplicities():
    q = parse("(z^2+1)/(z*(z-1)^2)")
    cert = certify_irreducible_tp(parse_poly("z^3 + 2*z + 1"), q)
    assert cert is not None and cert.count == 1


def test_tp_criterion_validates_inputs():
    with pytest.raises(ValueError):
        certify_irreducible_tp(parse("1/z"), parse("1/z"))
    with pytest.raises(ValueError):
        certify_irreducible_tp(Poly([ExactComplex(2)]), parse("1/z"))
    with pytest.raises(ValueError):
        certify_irreducible_tp(parse_poly("z^2"), parse("3/2"))


# ----------------------------------------------------------------------
# composition witness
# ----------------------------------------------------------------------
def test_witness_divides_composed_curve():
    p, factor = composition_reducibility_witness(parse("z^2"), parse_poly("z + 1"))
    assert factor == bp([[0, 1], [1, 1]])  # zw + z + w
    quotient = divide_exact(hermitian_numerator(p), factor)
    assert quotient == bp([[2, 1], [1, 1]])  # zw + z + w + 2


def test_witness_agrees_with_monodromy_count():
    p, _ = composition_reducibility_witness(parse("z^2"), parse_poly("z + 1"))
    assert absolute_factor_count(hermitian_numerator(p)).count == 2


def test_witness_rejects_bad_outer_and_inner():
    cayley = parse("(z-i)/(z+i)")
    with pytest.raises(ValueError):
        composition_reducibility_witness(cayley, parse_poly("z + 1"))  # degree 1
    with pytest.raises(ValueError):
        composition_reducibility_witness(parse("z^2 + 1"), parse_poly("z + 1"))
    with pytest.raises(ValueError):
        composition_reducibility_witness(parse("z^2"), parse("5"))


# ----------------------------------------------------------------------
# monodromy traces
# ----------------------------------------------------------------------
def test_trace_shape_and_separation():
    trace = monodromy_permutations(bp([[0, -1], [-3], [0], [1]]))
    assert len(trace.permutations) == len(trace.branch_points) == 2
    assert all(sorted(perm) == [0, 1, 2] for perm in trace.permutations)
    assert trace.min_fiber_separation > 0
    assert len(trace.fiber) == 3


def test_loop_product_inverts_infinity_loop():
    """Composing the finite loops in base order undoes the loop at infinity."""
    trace = monodromy_permutations(bp([[0, -1], [-3], [0], [1]]))
    product = fold(trace.permutations, 3)
    inverse = [0, 0, 0]
    for i, j in enumerate(trace.infinity_permutation):
        inverse[j] = i
    assert product == tuple(inverse)


def test_fold_loops_are_transpositions():
    trace = monodromy_permutations(bp([[0, -1], [-3], [0], [1]]))
    for perm in trace.permutations:
        moved = [i for i, j in enumerate(perm) if i != j]
        assert len(moved) == 2


def test_infinity_loop_of_degree_power():
    # z^2 w^2 - 1: both sheets are single valued in w, everything trivial
    trace = monodromy_permutations(bp([[-1], [0], [0, 0, 1]]))
    assert trace.infinity_permutation == (0, 1)
    assert all(perm == (0, 1) for perm in trace.permutations)


def test_monodromy_validates_input():
    with pytest.raises(ValueError):
        monodromy_permutations(BivarPoly.constant(2))
    h = bp([[-1], [0, 1]])
    with pytest.raises(ValueError):
        monodromy_permutations(h * h)  # repeated factor
    line = BivarPoly.from_poly_in_w(parse_poly("z - 1"))
    with pytest.raises(ValueError):
        monodromy_permutations(line * h)  # w-only content


def test_generic_random_curves_are_irreducible():
    rng = random.Random(417)
    seen = 0
    while seen < 3:
        p = rand_poly(rng, rng.randint(3, 4), span=4)
        if proper_power_decomposition(p)[1] != 1:
            continue
        seen += 1
        cert = absolute_factor_count(hermitian_numerator(RatFunc(p)))
        assert cert.count == 1, p.to_expr_str()


# ----------------------------------------------------------------------
# the degree-11 counterexample curve
# ----------------------------------------------------------------------
def counterexample_inner():
    def qa(c0, c1):
        return ExactComplex(Fraction(c0), 0, Fraction(c1), 0)

    return Poly(
        [
            qa(-18, -18),
            qa(-117, 24),
            qa(120, 100),
            qa(0, -63),
            qa(-90, 30),
            qa(36, 21),
            qa(-16, -16),
            qa(-9, 3),
            qa(2, 0),
            qa(-1, -1),
            qa(0, 0),
            ExactComplex(Fraction(1, 11)),
        ]
    )


def test_counterexample_curve_is_separated():
    # E_{T o S} must reduce exactly to a multiple of S(z) - conj(S)(w)
    s = counterexample_inner()
    cayley = parse("(z-i)/(z+i)")
    from lemkit.ratfunc import compose

    e = hermitian_numerator(compose(cayley, RatFunc(s)))
    sep = BivarPoly.from_poly_in_z(s) - BivarPoly.from_poly_in_w(conj_poly(s))
    ratio = e.at(11, 0) / sep.at(11, 0)
    assert e == sep * ratio


def test_counterexample_curve_splits_into_two():
    s = counterexample_inner()
    cayley = parse("(z-i)/(z+i)")
    from lemkit.ratfunc import compose

    e = hermitian_numerator(compose(cayley, RatFunc(s)))
    cert = absolute_factor_count(e)
    assert cert.count == 2
    assert len(cert.branch_points) == 12


# ----------------------------------------------------------------------
# serialization
# ----------------------------------------------------------------------
def test_certificate_serializes():
    cert = absolute_factor_count(bp([[0, -1], [-3], [0], [1]]))
    d = cert.to_json_dict()
    assert d["count"] == 1
    assert d["method"] == "monodromy"
    assert len(d["branch_points"]) == 2
    assert all(isinstance(b, list) and len(b) == 2 for b in d["branch_points"])
    assert isinstance(d["min_fiber_separation"], str)
    assert d["precision_bits_used"] >= 256


def test_tp_certificate_serializes_without_numerics():
    cert = certify_irreducible_tp(parse_poly("z^2"), parse("1/z"))
    d = cert.to_json_dict()
    assert d["min_fiber_separation"] is None
    assert d["branch_points"] == []
