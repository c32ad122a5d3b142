"""Special values of J and Q, and homology of branched covers derived from them.

Every derived integer is rounded from a high-precision evaluation; a residue
above the tolerance raises rather than being rounded away. Where a Fox
coloring oracle exists, it is carried alongside in the report row.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import (
    ComplexHP,
    DEFAULT_PRECISION,
    HalfGridLaurent,
    laurent_eval,
    mp_context,
    root_of_unity,
    round_to_integer,
)
from .approximation import reconstruct_finite, vassiliev_from_laurent
from .invariants import (
    HomflyPolynomial,
    JonesPolynomial,
    alexander,
    fox_colorings,
    fox_determinant,
    fox_dimension,
    homfly,
    homfly_specialize,
    jones,
    q_polynomial,
)
from .notation import CorpusEntry, PDCode, braid_to_pd, torus_braid

COLUMNS = (
    "link", "r", "point_re", "point_im", "value_re", "value_im",
    "derived_name", "derived_value", "oracle_value", "match",
)


def default_tolerance(precision: int = DEFAULT_PRECISION):
    """2^-32 at 128 bits, scaling linearly with the precision."""
    ctx = mp_context(precision)
    return ctx.ldexp(1, -max(16, precision // 4))


@dataclass
class EvaluationRow:
    r: int
    point: ComplexHP | None
    value: ComplexHP | None
    derived_name: str
    derived_value: int | str | None
    oracle_value: int | None = None
    match: bool | None = None


@dataclass
class EvaluationReport:
    link: str
    rows: list[EvaluationRow] = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(row.match is not False for row in self.rows)

    def row(self, r: int, derived_name: str | None = None) -> EvaluationRow:
        for row in self.rows:
            if row.r == r and (derived_name is None or row.derived_name == derived_name):
                return row
        raise KeyError((r, derived_name))

    def records(self) -> list[dict]:
        out = []
        for row in self.rows:
            rec = {"link": self.link, "r": row.r}
            for prefix, z in (("point", row.point), ("value", row.value)):
                rec[f"{prefix}_re"] = "" if z is None else _fmt(z.real, z)
                rec[f"{prefix}_im"] = "" if z is None else _fmt(z.imag, z)
            rec["derived_name"] = row.derived_name
            rec["derived_value"] = "" if row.derived_value is None else row.derived_value
            rec["oracle_value"] = "" if row.oracle_value is None else row.oracle_value
            rec["match"] = "" if row.match is None else str(row.match).lower()
            out.append(rec)
        return out

    def to_csv(self, header: bool = True) -> str:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=COLUMNS, lineterminator="\n")
        if header:
            writer.writeheader()
        writer.writerows(self.records())
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps({"link": self.link, "metadata": self.metadata, "rows": self.records()}, indent=1)


def _fmt(x, z: ComplexHP) -> str:
    ctx = z.ctx
    digits = max(15, int(z.prec * 0.30103) - 2)
    # roundoff noise and negative zero print as 0 so output is byte-stable
    if abs(x) < ctx.ldexp(1, -(z.prec - 16)):
        x = ctx.mpf(0)
    return ctx.nstr(x, digits, min_fixed=-5, max_fixed=30)


def _exact_power(value: int, base: int) -> int:
    """k with base^k == value, or ArithmeticError."""
    if value < 1:
        raise ArithmeticError(f"{value} is not a power of {base}")
    k = 0
    while value % base == 0:
        value //= base
        k += 1
    if value != 1:
        raise ArithmeticError(f"value is not a power of {base}")
    return k


def _exact_at(p: HalfGridLaurent, x: Fraction) -> Fraction:
    if not p.is_knot_grade:
        raise ValueError("exact evaluation needs integer exponents")
    return sum((c * x ** (h // 2) for h, c in p.items()), Fraction(0))


def _squared_magnitude(value: ComplexHP, tolerance) -> int:
    v = value.value
    return round_to_integer(v.real ** 2 + v.imag ** 2, tolerance)


# ---------------------------------------------------------------------------
# Jones polynomial at roots of unity


def table1_report(
    J: JonesPolynomial,
    pd: PDCode | None = None,
    name: str = "",
    precision: int = DEFAULT_PRECISION,
    tolerance=None,
) -> EvaluationReport:
    tol = default_tolerance(precision) if tolerance is None else tolerance
    ell = J.components
    report = EvaluationReport(name, metadata={"table": 1, "precision": precision, "components": ell})
    values = {}
    for r in (1, 2, 3, 4, 6):
        z = root_of_unity(1, r, precision)
        values[r] = (z, laurent_eval(J.poly, z, precision))

    # r = 1: J(1) = (-2)^(l-1), exact
    z, val = values[1]
    j1 = J.poly.at_one()
    report.rows.append(EvaluationRow(1, z, val, "J(1)", int(j1), (-2) ** (ell - 1), j1 == (-2) ** (ell - 1)))

    # r = 2: det L = |J(-1)|
    z, val = values[2]
    det = round_to_integer(abs(val), tol)
    oracle = fox_determinant(pd) if pd is not None else None
    report.rows.append(EvaluationRow(2, z, val, "det", det, oracle, None if oracle is None else det == oracle))

    # r = 3: J(e^{2 pi i/3}) = 1 for knots; links are compared in magnitude
    z, val = values[3]
    if ell == 1:
        ok = abs(val - 1) < tol
        report.rows.append(EvaluationRow(3, z, val, "J(omega)", 1 if ok else None, 1, ok))
    else:
        ok = abs(abs(val) - 1) < tol
        report.rows.append(EvaluationRow(3, z, val, "|J(omega)|", 1 if ok else None, 1, ok))

    # r = 4: (-1)^Arf for knots; 0 when J(i) vanishes (Arf undefined)
    z, val = values[4]
    if abs(val) < tol:
        report.rows.append(EvaluationRow(4, z, val, "Arf", 0, None, None))
    elif ell == 1:
        sign = round_to_integer(val.real, tol)
        if abs(val.imag) > tol or sign not in (1, -1):
            raise ArithmeticError(f"J(i) = {val!r} is not +-1 for a knot")
        arf = 0 if sign == 1 else 1
        # Levine: Arf = 0 exactly when det = +-1 mod 8
        oracle = None if pd is None else (0 if fox_determinant(pd) % 8 in (1, 7) else 1)
        report.rows.append(EvaluationRow(4, z, val, "Arf", arf, oracle, None if oracle is None else arf == oracle))
    else:
        report.rows.append(EvaluationRow(4, z, val, "Arf", None, None, None))

    # r = 6: |J(e^{i pi/3})|^2 = 3^dim H_1(Sigma_2, Z_3)
    z, val = values[6]
    dim = _exact_power(_squared_magnitude(val, tol), 3)
    oracle = fox_dimension(pd, 3) if pd is not None else None
    report.rows.append(EvaluationRow(6, z, val, "dim_H1_Sigma2_Z3", dim, oracle, None if oracle is None else dim == oracle))
    return report


# ---------------------------------------------------------------------------
# Q polynomial at x = 2 cos(2 pi / r)


def table2_report(
    Q: HalfGridLaurent,
    ell: int,
    pd: PDCode | None = None,
    name: str = "",
    precision: int = DEFAULT_PRECISION,
    tolerance=None,
) -> EvaluationReport:
    """Rows r = 1..6; r = 4 (x = 0) is reported as undefined.

    The r = 1 row matches |Q(2)| against det^2 and records the observed
    sign in the report metadata.
    """
    tol = default_tolerance(precision) if tolerance is None else tolerance
    ctx = mp_context(precision)
    report = EvaluationReport(name, metadata={"table": 2, "precision": precision, "components": ell})

    def exact_row(r, x):
        v = _exact_at(Q, x)
        return ComplexHP.of(x, precision), v, ComplexHP.of(v, precision)

    point, v, val = exact_row(1, Fraction(2))
    det = fox_determinant(pd) if pd is not None else None
    if v.denominator != 1:
        raise ArithmeticError("Q(2) is not an integer")
    report.metadata["Q(2)_sign"] = (v > 0) - (v < 0)
    report.metadata["Q(2)_expected_sign"] = (-1) ** (ell - 1)
    report.rows.append(EvaluationRow(1, point, val, "|Q(2)|", abs(int(v)), None if det is None else det * det,
                                     None if det is None else abs(v) == det * det))

    point, v, val = exact_row(2, Fraction(-2))
    report.rows.append(EvaluationRow(2, point, val, "Q(-2)", int(v), (-2) ** (ell - 1), v == (-2) ** (ell - 1)))

    point, v, val = exact_row(3, Fraction(-1))
    dim = _exact_power(abs(int(v)), 3)
    sign_ok = v == (-3) ** dim
    oracle = fox_dimension(pd, 3) if pd is not None else None
    report.rows.append(EvaluationRow(3, point, val, "dim_H1_Sigma2_Z3", dim, oracle,
                                     sign_ok if oracle is None else sign_ok and dim == oracle))

    report.rows.append(EvaluationRow(4, ComplexHP.of(0, precision), None, "undefined", "undefined"))

    x5 = 2 * ctx.cos(2 * ctx.pi / 5)
    point = ComplexHP.of(x5, precision)
    val = laurent_eval(Q, point, precision)
    dim = _exact_power(_squared_magnitude(val, tol), 5)
    oracle = fox_dimension(pd, 5) if pd is not None else None
    report.rows.append(EvaluationRow(5, point, val, "dim_H1_Sigma2_Z5", dim, oracle, None if oracle is None else dim == oracle))

    point, v, val = exact_row(6, Fraction(1))
    report.rows.append(EvaluationRow(6, point, val, "Q(1)", int(v), 1, v == 1))
    return report


# ---------------------------------------------------------------------------
# Branched covers


def h1_sigma_n(delta: HalfGridLaurent, n: int, precision: int = DEFAULT_PRECISION, tolerance=None) -> int:
    """|H_1(Sigma_n, Z)| = |prod_{j=1}^{n-1} Delta(e^{2 pi i j/n})|; 0 means infinite.

    Roots j and n - j are conjugate, so each pair contributes |Delta|^2.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    tol = default_tolerance(precision) if tolerance is None else tolerance
    ctx = mp_context(precision + 32)
    prod = ctx.mpf(1)
    for j in range(1, (n + 1) // 2):
        val = laurent_eval(delta, root_of_unity(j, n, precision + 32)).value
        prod *= val.real ** 2 + val.imag ** 2
    if n % 2 == 0:
        prod *= abs(laurent_eval(delta, ComplexHP.of(-1, precision + 32)).value)
    return round_to_integer(prod, tol)


def h1_sigma3_z2(H: HomflyPolynomial, precision: int = DEFAULT_PRECISION, tolerance=None) -> int:
    """dim H_1(Sigma_3, Z_2) from |H(-i, i)|^2 = 2^dim, cross-checked against H^9(e^{i pi/3})."""
    tol = default_tolerance(precision) if tolerance is None else tolerance
    ctx = mp_context(precision)
    direct = H.poly.evaluate(ctx.mpc(0, -1), ctx.mpc(0, 1), precision)
    via_n9 = laurent_eval(homfly_specialize(H, 9), root_of_unity(1, 6, precision), precision)
    if abs(direct - via_n9) > ctx.ldexp(1, -(precision - 16)) * (1 + abs(direct)):
        raise ArithmeticError("H(-i, i) disagrees with H^9 at e^{i pi/3}")
    return _exact_power(_squared_magnitude(direct, tol), 2)


def tricolorings(J: JonesPolynomial, pd: PDCode, precision: int = DEFAULT_PRECISION, tolerance=None) -> tuple[int, int]:
    """(3 |J(e^{i pi/3})|^2, number of Fox 3-colorings)."""
    tol = default_tolerance(precision) if tolerance is None else tolerance
    val = laurent_eval(J.poly, root_of_unity(1, 6, precision), precision)
    return 3 * _squared_magnitude(val, tol), fox_colorings(pd, 3)


def cover_report(entry: CorpusEntry, precision: int = DEFAULT_PRECISION, tolerance=None) -> EvaluationReport:
    """Cross-identities between J, H, Delta and the Fox oracles for one link.

    The r column holds the cover degree.
    """
    tol = default_tolerance(precision) if tolerance is None else tolerance
    pd = entry.diagram()
    J = jones(pd)
    report = EvaluationReport(entry.name, metadata={"table": "covers", "precision": precision})
    det = fox_determinant(pd)
    if entry.braid is not None:
        H = homfly(entry.braid)
        delta = alexander(H)
        report.rows.append(EvaluationRow(2, None, None, "det_from_alexander", h1_sigma_n(delta, 2, precision, tol), det,
                                         h1_sigma_n(delta, 2, precision, tol) == det))
        report.rows.append(EvaluationRow(3, None, None, "order_H1_Sigma3", h1_sigma_n(delta, 3, precision, tol), None, None))
        dim2 = h1_sigma3_z2(H, precision, tol)
        report.rows.append(EvaluationRow(3, None, None, "dim_H1_Sigma3_Z2", dim2, None, None))
    tri_j, tri_f = tricolorings(J, pd, precision, tol)
    report.rows.append(EvaluationRow(2, None, None, "tricolorings", tri_j, tri_f, tri_j == tri_f))
    return report


def corpus_reports(entry: CorpusEntry, precision: int = DEFAULT_PRECISION, tolerance=None) -> list[EvaluationReport]:
    """Jones values, Q values (when F is ingested) and the cover identities."""
    pd = entry.diagram()
    reports = [table1_report(jones(pd), pd, entry.name, precision, tolerance)]
    if entry.kauffman_F is not None:
        Q = q_polynomial(entry.kauffman_F, entry.components)
        reports.append(table2_report(Q, entry.components, pd, entry.name, precision, tolerance))
    reports.append(cover_report(entry, precision, tolerance))
    return reports


# ---------------------------------------------------------------------------
# Twist sequence


def twist_closed_form(m: int) -> HalfGridLaurent:
    """-t^m (t^(2m+1) - t^(2m) + ... + t^3 - t^2 - 1)."""
    inner = {k: (1 if k % 2 else -1) for k in range(3, 2 * m + 2)}
    inner[2] = -1
    inner[0] = -1
    return HalfGridLaurent.from_integer_exponents({k + m: -c for k, c in inner.items()})


def twist_window_zero(m: int, n: int) -> bool:
    """True where the vanishing window forces a_n(T_m) = 0."""
    return 3 * m < n - 1 or m > n


@dataclass
class TwistReport:
    m_max: int
    n_max: int
    coefficients: dict[int, list[Fraction]]
    closed_form_ok: dict[int, bool]
    window_violations: list[tuple[int, int]]

    @property
    def ok(self) -> bool:
        return all(self.closed_form_ok.values()) and not self.window_violations

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["m", "closed_form"] + [f"a_{n}" for n in range(self.n_max + 1)])
        for m in sorted(self.coefficients):
            writer.writerow([m, str(self.closed_form_ok[m]).lower()] + [str(c) for c in self.coefficients[m]])
        return buf.getvalue()


def twist_sequence_report(m_max: int, n_max: int | None = None) -> TwistReport:
    """a_n(T_m) reconstructed from the Vassiliev sequence, m = 1..m_max."""
    if m_max < 1:
        raise ValueError("m_max must be at least 1")
    if n_max is None:
        n_max = 3 * m_max + 3
    d = n_max
    coefficients, closed, violations = {}, {}, []
    for m in range(1, m_max + 1):
        J = jones(braid_to_pd(torus_braid(m)))
        closed[m] = J.poly == twist_closed_form(m)
        v = vassiliev_from_laurent(J.poly, 2 * d, "integer")
        row = [reconstruct_finite(v, d, n) for n in range(n_max + 1)]
        coefficients[m] = row
        for n, a in enumerate(row):
            if a != J.poly.coeff(2 * n):
                violations.append((m, n))
            elif twist_window_zero(m, n) and a != 0:
                violations.append((m, n))
    return TwistReport(m_max, n_max, coefficients, closed, violations)
