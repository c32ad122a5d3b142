from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from knotapprox.algebra import (
    ComplexHP,
    HalfGridLaurent,
    PiPolynomial,
    TwoVarLaurent,
    laurent_eval,
    laurent_op,
    pi_poly_eval,
    root_of_unity,
    round_to_integer,
    substitute_two_var,
)

T = HalfGridLaurent.monomial


def poly(d):
    return HalfGridLaurent(d)


laurents = st.dictionaries(
    st.integers(-8, 8),
    st.fractions(min_value=-5, max_value=5, max_denominator=6),
    max_size=5,
).map(HalfGridLaurent)


def test_mirror_negates_exponents():
    p = poly({8: -1, 6: 1, 2: 1})
    assert laurent_op("mirror", p) == poly({-8: -1, -6: 1, -2: 1})


def test_difference_of_squares():
    a = poly({1: 1, -1: -1})
    b = poly({1: 1, -1: 1})
    assert laurent_op("mul", a, b) == poly({2: 1, -2: -1})


def test_add_neg_is_zero():
    p = poly({3: 2, -1: Fraction(1, 3)})
    assert not laurent_op("add", p, laurent_op("neg", p))
    assert laurent_op("add", p, laurent_op("neg", p)) == HalfGridLaurent()


def test_zero_coefficients_are_dropped():
    p = poly({2: 0, 4: 1})
    assert p.terms() == {4: Fraction(1)}
    assert p.is_knot_grade
    assert not poly({1: 1}).is_knot_grade


def test_string_form():
    assert str(poly({8: -1, 6: 1, 2: 1})) == "-t^4 + t^3 + t"
    assert str(HalfGridLaurent()) == "0"


def test_json_round_trip():
    p = poly({-3: Fraction(-2, 7), 4: 5})
    assert HalfGridLaurent.from_json(p.to_json()) == p
    assert p.to_json() == [[-3, -2, 7], [4, 5, 1]]


def test_eval_constant_and_trefoil():
    assert complex(laurent_eval(T(0), ComplexHP.of(3 + 4j))) == 1
    J = poly({8: -1, 6: 1, 2: 1})
    assert abs(laurent_eval(J, ComplexHP.of(1)) - 1) < 1e-30
    assert abs(abs(laurent_eval(J, ComplexHP.of(-1))) - 3) < 1e-30


def test_eval_principal_branch():
    # t^(1/2) at t = -1 is i on the principal branch
    v = laurent_eval(T(1), ComplexHP.of(-1))
    assert abs(v - ComplexHP.of(1j)) < 1e-30


def test_eval_at_zero_with_negative_exponent_raises():
    with pytest.raises(ZeroDivisionError):
        laurent_eval(T(-2), ComplexHP.of(0))


def test_pi_poly_eval_values():
    assert pi_poly_eval(PiPolynomial([1])).real == 1
    assert pi_poly_eval(PiPolynomial()).real == 0
    val = pi_poly_eval(PiPolynomial([0, Fraction(-1, 3)]), 128)
    with mpmath.workdps(50):
        ref = -mpmath.pi ** 2 / 3
        assert abs(mpmath.mpf(val.real) - ref) < mpmath.mpf(2) ** -120
    assert str(val.real).startswith("-3.28986813")
    with pytest.raises(ValueError):
        pi_poly_eval(PiPolynomial([1]), 32)


def test_pi_polynomial_trims_and_multiplies():
    assert PiPolynomial([1, 0, 0]) == PiPolynomial([1])
    p = PiPolynomial([1, 1]) * PiPolynomial([1, -1])
    assert p == PiPolynomial([1, 0, -1])


def test_substitution_examples():
    a = TwoVarLaurent.monomial(1, 0)
    z = TwoVarLaurent.monomial(0, 1)
    zsub = poly({1: 1, -1: -1})
    assert substitute_two_var(a, T(-2), zsub) == T(-2)  # a = t^(-1)
    assert substitute_two_var(z, T(-2), zsub) == zsub
    assert substitute_two_var(a, T(2), poly({2: 1, -2: -1})) == T(2)


def test_two_var_json_round_trip():
    F = TwoVarLaurent({(-5, 1): -1, (-4, 0): -1, (-2, 2): 1})
    assert TwoVarLaurent.from_json(F.to_json()) == F
    with pytest.raises((TypeError, ValueError)):
        TwoVarLaurent.from_json([[1, 2]])


def test_round_to_integer_refuses_residue():
    ctx_val = ComplexHP.of(Fraction(7, 2)).real
    with pytest.raises(ArithmeticError):
        round_to_integer(ctx_val, 2 ** -32)
    assert round_to_integer(ComplexHP.of(5).real, 2 ** -32) == 5


def test_root_of_unity():
    z = root_of_unity(1, 6)
    assert abs(z.real - 0.5) < 1e-35
    assert abs(z.imag ** 2 - 0.75) < 1e-35
    assert abs(root_of_unity(1, 2) + 1) < 1e-35


@settings(max_examples=60, deadline=None)
@given(laurents, laurents, laurents)
def test_ring_axioms(p, q, r):
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert p + q == q + p
    assert p * q == q * p


@settings(max_examples=40, deadline=None)
@given(laurents, laurents, st.floats(0.2, 3), st.floats(-3.1, 3.1))
def test_eval_is_homomorphism(p, q, radius, angle):
    z = ComplexHP.of(complex(radius * mpmath.cos(angle), radius * mpmath.sin(angle)))
    lhs = laurent_eval(p * q, z)
    rhs = laurent_eval(p, z) * laurent_eval(q, z)
    scale = 1 + abs(lhs) + abs(laurent_eval(p, z)) * abs(laurent_eval(q, z))
    assert abs(lhs - rhs) <= scale * mpmath.mpf(2) ** -(128 - 8)


@settings(max_examples=40, deadline=None)
@given(laurents.filter(lambda p: p.is_knot_grade), st.floats(-3.1, 3.1))
def test_conjugate_points_give_conjugate_values(p, angle):
    z = ComplexHP.of(complex(mpmath.cos(angle), mpmath.sin(angle)) * 1.3)
    a = laurent_eval(p, z)
    b = laurent_eval(p, z.conjugate())
    assert abs(a.conjugate() - b) <= (1 + abs(a)) * mpmath.mpf(2) ** -110


@settings(max_examples=40, deadline=None)
@given(laurents)
def test_json_round_trip_property(p):
    assert HalfGridLaurent.from_json(p.to_json()) == p
