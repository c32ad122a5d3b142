import math
from fractions import Fraction

import mpmath
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from knotapprox.algebra import ComplexHP, HalfGridLaurent, PiPolynomial, laurent_eval, pi_poly_eval
from knotapprox.approximation import (
    VassilievSequence,
    approx_eval,
    degree_estimate,
    finite_gen_fn,
    nodes,
    reconstruct_finite,
    reconstruct_infinite,
    sinc_at_grid_point,
    sinc_coeffs,
    vandermonde_pivot_product,
    vandermonde_solve,
    vassiliev_consistency,
    vassiliev_from_laurent,
)
from knotapprox.invariants import jones

L = HalfGridLaurent.from_integer_exponents
TREFOIL = L({4: -1, 3: 1, 1: 1})


def _pi_poly_from_sympy(expr):
    """Convert a polynomial in pi^2 with rational coefficients."""
    expr = sympy.expand(expr)
    if expr == 0:
        return PiPolynomial()
    p = sympy.Poly(expr, sympy.pi)
    coeffs = [Fraction(0)] * (p.degree() // 2 + 1)
    for (k,), c in p.terms():
        assert k % 2 == 0
        coeffs[k // 2] = Fraction(int(c.p), int(c.q))
    return PiPolynomial(coeffs)


def test_sequence_examples():
    assert vassiliev_from_laurent(L({0: 1}), 5).values == (1, 0, 0, 0, 0, 0)
    v = vassiliev_from_laurent(TREFOIL, 3)
    assert v.values == (1, 0, -3, -6)
    half = vassiliev_from_laurent(HalfGridLaurent.monomial(1), 6)
    assert half.grid == "half"
    assert half.values == tuple(Fraction(1, 2 ** i * math.factorial(i)) for i in range(7))


def test_grid_mismatch_rejected():
    with pytest.raises(ValueError):
        vassiliev_from_laurent(HalfGridLaurent.monomial(1), 3, "integer")
    with pytest.raises(ValueError):
        vassiliev_from_laurent(TREFOIL, -1)


def test_vandermonde_examples():
    v = vassiliev_from_laurent(TREFOIL, 11)
    assert vandermonde_solve(v, 4) == (0, 0, 0, 0, 0, 1, 0, 1, -1)
    assert vandermonde_solve(v, 5) == (0, 0, 0, 0, 0, 0, 1, 0, 1, -1, 0)
    const = VassilievSequence("integer", (Fraction(7),) + (Fraction(0),) * 8)
    for d in range(5):
        assert vandermonde_solve(const, d) == tuple(7 if k == 0 else 0 for k in range(-d, d + 1))
    with pytest.raises(ValueError):
        vandermonde_solve(v, 6)


def test_generating_polynomial_examples():
    assert finite_gen_fn(2, 0).coefficients == (1, 0, Fraction(-5, 4), 0, Fraction(1, 4))
    assert [c * 36 for c in finite_gen_fn(3, 0).coefficients] == [36, 0, -49, 0, 14, 0, -1]
    assert [c * 6 for c in finite_gen_fn(2, 1).coefficients] == [0, 4, 4, -1, -1]
    with pytest.raises(ValueError):
        finite_gen_fn(2, 3)


def test_generating_polynomial_leading_constant():
    for d in range(1, 6):
        for n in range(-d, d + 1):
            lead = finite_gen_fn(d, n).coefficients[-1]
            assert lead == Fraction((-1) ** (n + d), math.factorial(d + n) * math.factorial(d - n))


@pytest.mark.parametrize("grid", ["integer", "half"])
def test_kronecker(grid):
    step = Fraction(1) if grid == "integer" else Fraction(1, 2)
    for d in range(7):
        for n in range(-d, d + 1):
            f = finite_gen_fn(d, n, grid)
            for m in range(-d, d + 1):
                assert f(m * step) == (1 if m == n else 0)


def test_sinc_closed_form_kronecker_symbolic():
    v = sympy.Symbol("v")
    for grid, scale in (("integer", 1), ("half", 2)):
        for n in range(-12, 13):
            f = sympy.sin(sympy.pi * (scale * v - n)) / (sympy.pi * (scale * v - n))
            for m in range(-12, 13):
                x = sympy.Rational(m, scale)
                value = sympy.limit(f, v, x) if m == n else sympy.simplify(f.subs(v, x))
                assert value == (1 if m == n else 0)
                assert sinc_at_grid_point(n, m, grid) == value


def test_reconstruct_finite_examples():
    v = vassiliev_from_laurent(TREFOIL, 9)
    assert reconstruct_finite(v, 4, 4) == -1
    assert reconstruct_finite(v, 4, 0) == 0
    unknot = vassiliev_from_laurent(L({0: 1}), 13)
    for d in range(7):
        assert reconstruct_finite(unknot, d, 0) == 1


def test_dual_path_all_knots(corpus):
    for e in corpus:
        if not e.is_knot:
            continue
        J = jones(e.diagram()).poly
        v = vassiliev_from_laurent(J, 0)
        deg = v.degree()
        v = vassiliev_from_laurent(J, 2 * deg + 6)
        for d in (deg, deg + 3):
            sol = vandermonde_solve(v, d)
            assert sol == tuple(reconstruct_finite(v, d, n) for n in range(-d, d + 1))
            assert sol == tuple(J.coeff(2 * n) for n in range(-d, d + 1))


@pytest.mark.parametrize("grid", ["integer", "half"])
def test_vandermonde_determinant(grid):
    for d in range(6):
        xs = nodes(d, grid)
        expected = Fraction(1)
        for i in range(len(xs)):
            for j in range(i + 1, len(xs)):
                expected *= xs[j] - xs[i]
        assert vandermonde_pivot_product(d, grid) == expected


def test_sinc_known_values():
    pi2 = PiPolynomial([0, 1])
    s0 = sinc_coeffs(0, 6)
    assert list(s0.coeffs) == [
        PiPolynomial([1]), PiPolynomial(), PiPolynomial([0, Fraction(-1, 3)]), PiPolynomial(),
        PiPolynomial([0, 0, Fraction(1, 5)]), PiPolynomial(), PiPolynomial([0, 0, 0, Fraction(-1, 7)]),
    ]
    s1 = sinc_coeffs(1, 5)
    assert list(s1.coeffs) == [
        PiPolynomial(), PiPolynomial([1]), PiPolynomial([2]), PiPolynomial([6, -1]),
        PiPolynomial([24, -4]), PiPolynomial([120, -20, 1]),
    ]
    assert sinc_coeffs(0, 2, "half")[2] == PiPolynomial([0, Fraction(-4, 3)])
    assert pi2 * pi2 == PiPolynomial([0, 0, 1])


@pytest.mark.parametrize("n", [-3, -1, 0, 1, 2, 5])
@pytest.mark.parametrize("grid", ["integer", "half"])
def test_sinc_against_sympy_series(n, grid):
    v = sympy.Symbol("v")
    scale = 1 if grid == "integer" else 2
    expr = sympy.sin(sympy.pi * (scale * v - n)) / (sympy.pi * (scale * v - n))
    order = 9
    series = sympy.series(expr, v, 0, order).removeO()
    ours = sinc_coeffs(n, order - 1, grid)
    for i in range(order):
        expected = _pi_poly_from_sympy(series.coeff(v, i) * sympy.factorial(i))
        assert ours[i] == expected, (n, grid, i)


def test_sinc_is_limit_of_finite():
    # coefficient i of f_{d,n} approaches entry i / i! of the sinc coefficients
    for n, orders in ((0, (2, 4)), (1, (2, 3)), (-2, (1, 2))):
        for i in orders:
            target = pi_poly_eval(sinc_coeffs(n, i)[i], 128).real / math.factorial(i)
            errors = []
            for d in (50, 100, 200):
                c = finite_gen_fn(d, n).coefficients[i]
                errors.append(abs(mpmath.mpf(c.numerator) / c.denominator - target))
            assert errors[0] > errors[1] > errors[2]
            assert errors[2] < 0.05


def test_infinite_examples():
    unknot = vassiliev_from_laurent(L({0: 1}), 10)
    rep = reconstruct_infinite(unknot, 0, 10)
    assert all(abs(s - 1) < 2 ** -120 for s in rep.partial_sums)
    tre = vassiliev_from_laurent(TREFOIL, 120)
    rep = reconstruct_infinite(tre, 1, 120, 256)
    assert rep.first_order_within(Fraction(1, 10 ** 6)) is not None
    assert rep.final_error() < 1e-6
    rep0 = reconstruct_infinite(tre, 0, 120, 256)
    assert abs(rep0.partial_sums[-1]) < 1e-6
    csv_text = rep.to_csv()
    assert csv_text.splitlines()[0] == "order,partial_sum_re,partial_sum_im,abs_error"
    assert len(csv_text.splitlines()) == 122
    with pytest.raises(ValueError):
        reconstruct_infinite(tre, 1, 200)
    with pytest.raises(ValueError):
        reconstruct_infinite(tre, 1, 10, precision=32)


def test_half_grid_matches_integer_grid():
    for p in (TREFOIL, L({2: 1, 1: -1, 0: 1, -1: -1, -2: 1})):
        vi = vassiliev_from_laurent(p, 20, "integer")
        vh = vassiliev_from_laurent(p, 20, "half")
        assert vi.values == vh.values
        d = vi.degree()
        for n in range(-d, d + 1):
            assert reconstruct_finite(vh, 2 * d, 2 * n) == reconstruct_finite(vi, d, n)


def test_approx_eval():
    v = vassiliev_from_laurent(TREFOIL, 12)
    assert abs(approx_eval(v, ComplexHP.of(-1), 4) + 3) < 2 ** -100
    for d in range(7):
        w = vassiliev_from_laurent(TREFOIL, 2 * d)
        assert abs(approx_eval(w, ComplexHP.of(1), d) - 1) < 2 ** -100
    z = ComplexHP.of(0.3 + 1.1j)
    assert abs(approx_eval(v, z, 5) - laurent_eval(TREFOIL, z)) < 2 ** -100
    with pytest.raises(ZeroDivisionError):
        approx_eval(v, ComplexHP.of(0), 4)


def test_degree_estimate():
    v = vassiliev_from_laurent(TREFOIL, 20)
    assert abs(degree_estimate(v, 20).value.real - 4) < 0.04
    unknot = vassiliev_from_laurent(L({0: 1}), 5)
    assert all(degree_estimate(unknot, n).vanished for n in range(1, 6))
    for d in (1, 3, 7):
        w = vassiliev_from_laurent(L({d: 1}), 15)
        for n in range(1, 16):
            est = degree_estimate(w, n)
            assert est.exact == d and est.value.real == d


def test_consistency_examples():
    v = vassiliev_from_laurent(TREFOIL, 12)
    assert vassiliev_consistency(v, 4, 9) == v[9]
    unknot = vassiliev_from_laurent(L({0: 1}), 13)
    for i in range(1, 10):
        assert vassiliev_consistency(unknot, 3, i) == 0
    c = vassiliev_from_laurent(L({0: Fraction(5, 3)}), 5)
    assert vassiliev_consistency(c, 2, 0) == Fraction(5, 3)


small_polys = st.dictionaries(st.integers(-3, 3), st.integers(-4, 4), max_size=5).map(L)


@settings(max_examples=30, deadline=None)
@given(small_polys, st.integers(3, 5))
def test_stability_property(p, d):
    v = vassiliev_from_laurent(p, 2 * d + 2)
    narrow = vandermonde_solve(v, 3)
    wide = vandermonde_solve(v, d)
    assert wide[d - 3: d + 4] == narrow
    assert narrow == tuple(p.coeff(2 * k) for k in range(-3, 4))
