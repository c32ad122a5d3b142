"""Vassiliev sequences and the reconstruction of polynomial coefficients.

A polynomial P(t) = sum_k c_k t^(x_k) gives the sequence
v_i = (1/i!) sum_k x_k^i c_k, the Taylor coefficients of P(e^x). The
coefficients are recovered from v_0..v_2d by inverting a Vandermonde block
(finite case), or from the whole sequence through the sinc generating
function (infinite case).

Grids: on the ``"integer"`` grid, coefficient index n sits at exponent n;
on the ``"half"`` grid it sits at exponent n/2.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from functools import lru_cache
from fractions import Fraction
from typing import Sequence

from .algebra import (
    ComplexHP,
    DEFAULT_PRECISION,
    HalfGridLaurent,
    PiPolynomial,
    laurent_eval,
    mp_context,
    pi_poly_eval,
)

GRIDS = ("integer", "half")


def _grid_step(grid: str) -> Fraction:
    if grid == "integer":
        return Fraction(1)
    if grid == "half":
        return Fraction(1, 2)
    raise ValueError(f"unknown grid {grid!r}")


def _factorial(i: int) -> int:
    return math.factorial(i)


@dataclass(frozen=True)
class VassilievSequence:
    grid: str
    values: tuple[Fraction, ...]
    source: HalfGridLaurent | None = None

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, i):
        return self.values[i]

    def coefficient(self, n: int) -> Fraction:
        """Exact coefficient at index n of the source polynomial."""
        if self.source is None:
            raise ValueError("sequence carries no source polynomial")
        return self.source.coeff(2 * n if self.grid == "integer" else n)

    def degree(self) -> int:
        """Smallest d whose nodes -d..d cover every exponent of the source."""
        if self.source is None:
            raise ValueError("sequence carries no source polynomial")
        if not self.source:
            return 0
        h = max(abs(self.source.min_h), abs(self.source.max_h))
        return (h + 1) // 2 if self.grid == "integer" else h


def vassiliev_from_laurent(p: HalfGridLaurent, i_max: int, grid: str | None = None) -> VassilievSequence:
    """v_0..v_{i_max} of p(e^x), exact."""
    if i_max < 0:
        raise ValueError("i_max must be non-negative")
    if grid is None:
        grid = "integer" if p.is_knot_grade else "half"
    if grid == "integer" and not p.is_knot_grade:
        raise ValueError("integer grid needs integer exponents")
    _grid_step(grid)
    terms = [(Fraction(h, 2), c) for h, c in p.items()]
    values = []
    powers = [c for _, c in terms]
    fact = 1
    for i in range(i_max + 1):
        if i:
            fact *= i
            powers = [pw * x for pw, (x, _) in zip(powers, terms)]
        values.append(sum(powers, Fraction(0)) / fact)
    return VassilievSequence(grid, tuple(values), p)


# ---------------------------------------------------------------------------
# Finite case


def nodes(d: int, grid: str) -> list[Fraction]:
    step = _grid_step(grid)
    return [j * step for j in range(-d, d + 1)]


def solve_exact(matrix: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]) -> tuple[list[Fraction], Fraction]:
    """Gaussian elimination over Q; returns (solution, determinant).

    The determinant is the signed product of the pivots.
    """
    n = len(matrix)
    m = [[Fraction(x) for x in row] + [Fraction(b)] for row, b in zip(matrix, rhs)]
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col]), None)
        if piv is None:
            raise ZeroDivisionError("singular system")
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        p = m[col][col]
        det *= p
        inv = 1 / p
        pivot_row = m[col]
        for r in range(col + 1, n):
            f = m[r][col]
            if f:
                f *= inv
                row = m[r]
                for k in range(col, n + 1):
                    if pivot_row[k]:
                        row[k] -= f * pivot_row[k]
    x = [Fraction(0)] * n
    for r in range(n - 1, -1, -1):
        s = m[r][n] - sum((m[r][k] * x[k] for k in range(r + 1, n)), Fraction(0))
        x[r] = s / m[r][r]
    return x, det


def vandermonde_system(v: VassilievSequence, d: int):
    """Rows i = 0..2d: sum_k x_k^i alpha_k = i! v_i."""
    size = 2 * d + 1
    if len(v) < size:
        raise ValueError(f"need {size} sequence entries, have {len(v)}")
    xs = nodes(d, v.grid)
    matrix = [[x ** i for x in xs] for i in range(size)]
    rhs = [_factorial(i) * v[i] for i in range(size)]
    return matrix, rhs


def vandermonde_solve(v: VassilievSequence, d: int) -> tuple[Fraction, ...]:
    """alpha_{d,-d} .. alpha_{d,d}, the exact solution of the (2d+1) block."""
    matrix, rhs = vandermonde_system(v, d)
    x, _ = solve_exact(matrix, rhs)
    return tuple(x)


def vandermonde_pivot_product(d: int, grid: str) -> Fraction:
    """Determinant of the (2d+1) node block as produced by the exact solver."""
    xs = nodes(d, grid)
    matrix = [[x ** i for x in xs] for i in range(len(xs))]
    _, det = solve_exact(matrix, [Fraction(0)] * len(xs))
    return det


@dataclass(frozen=True)
class GeneratingPolynomial:
    """f_{d,n}(v) = prod_{j != n} (v - x_j) / (x_n - x_j) over the grid nodes."""

    n: int
    d: int
    grid: str
    coefficients: tuple[Fraction, ...]

    def __call__(self, x) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    def derivatives(self) -> tuple[Fraction, ...]:
        """f^(i)(0) for i = 0..2d."""
        return tuple(_factorial(i) * c for i, c in enumerate(self.coefficients))


def _poly_mul_linear(coeffs: list[Fraction], root: Fraction) -> list[Fraction]:
    out = [Fraction(0)] * (len(coeffs) + 1)
    for i, c in enumerate(coeffs):
        out[i + 1] += c
        out[i] -= root * c
    return out


@lru_cache(maxsize=4096)
def finite_gen_fn(d: int, n: int, grid: str = "integer") -> GeneratingPolynomial:
    if not -d <= n <= d:
        raise ValueError(f"index {n} outside -{d}..{d}")
    xs = nodes(d, grid)
    xn = xs[n + d]
    coeffs = [Fraction(1)]
    denom = Fraction(1)
    for x in xs:
        if x == xn:
            continue
        coeffs = _poly_mul_linear(coeffs, x)
        denom *= xn - x
    return GeneratingPolynomial(n, d, grid, tuple(c / denom for c in coeffs))


def reconstruct_finite(v: VassilievSequence, d: int, n: int) -> Fraction:
    """sum_i f_{d,n}^(i)(0) v_i."""
    if len(v) < 2 * d + 1:
        raise ValueError(f"need {2 * d + 1} sequence entries, have {len(v)}")
    f = finite_gen_fn(d, n, v.grid)
    return sum((fi * v[i] for i, fi in enumerate(f.derivatives())), Fraction(0))


def vassiliev_consistency(v: VassilievSequence, d: int, i: int) -> Fraction:
    """Express v_i through v_0..v_2d, valid whenever the source has degree <= d."""
    size = 2 * d + 1
    if len(v) < size:
        raise ValueError(f"need {size} sequence entries, have {len(v)}")
    xs = nodes(d, v.grid)
    derivs = [finite_gen_fn(d, k, v.grid).derivatives() for k in range(-d, d + 1)]
    total = Fraction(0)
    for j in range(size):
        weight = sum((x ** i * dk[j] for x, dk in zip(xs, derivs)), Fraction(0)) / _factorial(i)
        total += weight * v[j]
    return total


# ---------------------------------------------------------------------------
# Infinite case


@dataclass(frozen=True)
class SincCoefficients:
    """Entry i is f_{inf,n}^(i)(0) as an element of Q[pi^2]."""

    n: int
    grid: str
    coeffs: tuple[PiPolynomial, ...]

    def __getitem__(self, i) -> PiPolynomial:
        return self.coeffs[i]

    def __len__(self) -> int:
        return len(self.coeffs)


def _sinc_taylor(n: int, i: int) -> PiPolynomial:
    """[u^i] of sin(pi (u - n)) / (pi (u - n))."""
    if n == 0:
        if i % 2:
            return PiPolynomial()
        k = i // 2
        return PiPolynomial([0] * k + [Fraction((-1) ** k, _factorial(2 * k + 1))])
    sign = -1 if n % 2 == 0 else 1  # (-1)^(n+1)
    cs = []
    for k in range((i - 1) // 2 + 1 if i >= 1 else 0):
        cs.append(Fraction(sign * (-1) ** k, _factorial(2 * k + 1) * n ** (i - 2 * k)))
    return PiPolynomial(cs)


def sinc_coeffs(n: int, i_max: int, grid: str = "integer") -> SincCoefficients:
    """Derivatives at 0 of sin(pi(v-n))/(pi(v-n)), or of sin(pi(2v-n))/(pi(2v-n)) on the half grid."""
    scale = 1 / _grid_step(grid)
    coeffs = tuple(_sinc_taylor(n, i) * (_factorial(i) * scale ** i) for i in range(i_max + 1))
    return SincCoefficients(n, grid, coeffs)


def sinc_at_grid_point(n: int, m: int, grid: str = "integer") -> Fraction:
    """f_{inf,n} at the grid point of index m: sin of an integer multiple of pi over a nonzero multiple of pi."""
    _grid_step(grid)
    # the argument pi (m - n) is an integer multiple of pi on both grids
    return Fraction(1) if m == n else Fraction(0)


@dataclass
class ReconstructionReport:
    n: int
    grid: str
    partial_sums: list[ComplexHP]
    reference: Fraction | None = None
    errors: list = field(default_factory=list)
    precision: int = DEFAULT_PRECISION

    def first_order_within(self, tolerance) -> int | None:
        """Smallest order from which every later error stays below tolerance."""
        if isinstance(tolerance, Fraction):
            ctx = mp_context(self.precision)
            tolerance = ctx.mpf(tolerance.numerator) / tolerance.denominator
        first = None
        for i, e in enumerate(self.errors):
            if e is None or e >= tolerance:
                first = None
            elif first is None:
                first = i
        return first

    def final_error(self):
        return self.errors[-1] if self.errors else None

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["order", "partial_sum_re", "partial_sum_im", "abs_error"])
        digits = max(15, int(self.precision * 0.30103))
        for i, s in enumerate(self.partial_sums):
            ctx = s.ctx
            err = self.errors[i] if i < len(self.errors) and self.errors[i] is not None else None
            writer.writerow([
                i,
                ctx.nstr(s.real, digits),
                ctx.nstr(s.imag, digits),
                "" if err is None else ctx.nstr(err, 10),
            ])
        return buf.getvalue()


def _accurate_eval(p: PiPolynomial, prec: int) -> ComplexHP:
    """Evaluate with enough guard bits that the absolute error is about 2^-prec."""
    bound = p.condition_bound()
    guard = 16 + (max(0, math.ceil(math.log2(bound))) if bound > 0 else 0)
    return ComplexHP.of(pi_poly_eval(p, prec + guard), prec)


def reconstruct_infinite(v: VassilievSequence, n: int, order: int, precision: int = DEFAULT_PRECISION) -> ReconstructionReport:
    """Partial sums sum_{j<=i} f_{inf,n}^(j)(0) v_j for i = 0..order.

    The partial sums are accumulated exactly in Q[pi^2]; only the final
    evaluation is floating point.
    """
    if len(v) < order + 1:
        raise ValueError(f"need {order + 1} sequence entries, have {len(v)}")
    if precision < 64:
        raise ValueError("precision must be at least 64 bits")
    sinc = sinc_coeffs(n, order, v.grid)
    reference = v.coefficient(n) if v.source is not None else None
    ctx = mp_context(precision)
    report = ReconstructionReport(n, v.grid, [], reference, [], precision)
    exact = PiPolynomial()
    for j in range(order + 1):
        if v[j]:
            exact = exact + sinc[j] * v[j]
        value = _accurate_eval(exact, precision)
        report.partial_sums.append(value)
        if reference is not None:
            ref = ctx.mpf(reference.numerator) / reference.denominator
            report.errors.append(abs(value - ref))
        else:
            report.errors.append(None)
    return report


def approx_eval(v: VassilievSequence, z, d: int) -> ComplexHP:
    """g_d(z) = sum_k alpha_{d,k} z^(x_k) from the Vandermonde solution."""
    prec = z.prec if isinstance(z, ComplexHP) else DEFAULT_PRECISION
    if complex(z) == 0:
        raise ZeroDivisionError("evaluation point must be nonzero")
    alphas = vandermonde_solve(v, d)
    factor = 2 if v.grid == "integer" else 1
    poly = HalfGridLaurent({k * factor: a for k, a in zip(range(-d, d + 1), alphas)})
    return laurent_eval(poly, z, prec)


@dataclass(frozen=True)
class DegreeEstimate:
    value: ComplexHP
    vanished: bool
    exact: Fraction | None = None


def _exact_root(x: Fraction, n: int) -> Fraction | None:
    def iroot(m: int) -> int | None:
        r = round(m ** (1.0 / n)) if m < 1 << 1000 else int(math.exp(math.log(m) / n))
        for cand in (r - 1, r, r + 1):
            if cand >= 0 and cand ** n == m:
                return cand
        return None

    num, den = iroot(x.numerator), iroot(x.denominator)
    if num is None or den is None:
        return None
    return Fraction(num, den)


def degree_estimate(v: VassilievSequence, n: int, precision: int = DEFAULT_PRECISION) -> DegreeEstimate:
    """(n! |v_n|)^(1/n); its limit in n is the degree."""
    if n < 1:
        raise ValueError("n must be at least 1")
    ctx = mp_context(precision)
    x = abs(_factorial(n) * v[n])
    if x == 0:
        return DegreeEstimate(ComplexHP.of(0, precision), True)
    exact = _exact_root(x, n)
    if exact is not None:
        return DegreeEstimate(ComplexHP.of(exact, precision), False, exact)
    value = ctx.root(ctx.mpf(x.numerator) / x.denominator, n)
    return DegreeEstimate(ComplexHP(ctx.mpc(value), precision), False)
