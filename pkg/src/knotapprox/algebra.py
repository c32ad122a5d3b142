"""Exact arithmetic substrate.

Half-grid Laurent polynomials (exponents in (1/2)Z, rational coefficients),
two-variable integer Laurent polynomials, elements of Q[pi^2], and
high-precision complex values backed by private mpmath contexts.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Iterable, Mapping

from mpmath.ctx_mp import MPContext

DEFAULT_PRECISION = 128


@lru_cache(maxsize=None)
def mp_context(prec: int) -> MPContext:
    """Return a dedicated mpmath context running at ``prec`` bits."""
    ctx = MPContext()
    ctx.prec = prec
    return ctx


@dataclass(frozen=True)
class ComplexHP:
    """A complex number carried at a recorded binary precision."""

    value: object
    prec: int = DEFAULT_PRECISION

    @classmethod
    def of(cls, x, prec: int = DEFAULT_PRECISION) -> "ComplexHP":
        if isinstance(x, ComplexHP):
            return cls(mp_context(prec).mpc(x.value), prec)
        ctx = mp_context(prec)
        if isinstance(x, Fraction):
            x = ctx.mpf(x.numerator) / x.denominator
        return cls(ctx.mpc(x), prec)

    @property
    def ctx(self) -> MPContext:
        return mp_context(self.prec)

    @property
    def real(self):
        return self.value.real

    @property
    def imag(self):
        return self.value.imag

    def __abs__(self):
        return self.ctx.fabs(self.value)

    def __add__(self, other):
        return ComplexHP(self.value + _raw(other, self.prec), self.prec)

    __radd__ = __add__

    def __sub__(self, other):
        return ComplexHP(self.value - _raw(other, self.prec), self.prec)

    def __rsub__(self, other):
        return ComplexHP(_raw(other, self.prec) - self.value, self.prec)

    def __mul__(self, other):
        return ComplexHP(self.value * _raw(other, self.prec), self.prec)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return ComplexHP(self.value / _raw(other, self.prec), self.prec)

    def __neg__(self):
        return ComplexHP(-self.value, self.prec)

    def conjugate(self) -> "ComplexHP":
        return ComplexHP(self.ctx.conj(self.value), self.prec)

    def __complex__(self) -> complex:
        return complex(self.value)

    def __repr__(self) -> str:
        return f"ComplexHP({self.ctx.nstr(self.value, 20)}, prec={self.prec})"


def _raw(x, prec: int):
    if isinstance(x, ComplexHP):
        return x.value
    if isinstance(x, Fraction):
        ctx = mp_context(prec)
        return ctx.mpf(x.numerator) / x.denominator
    return x


def root_of_unity(k: int | Fraction, r: int, prec: int = DEFAULT_PRECISION) -> ComplexHP:
    """``exp(2 pi i k / r)`` at ``prec`` bits."""
    ctx = mp_context(prec)
    k = Fraction(k)
    angle = 2 * ctx.pi * ctx.mpf(k.numerator) / (k.denominator * r)
    return ComplexHP(ctx.mpc(ctx.cos(angle), ctx.sin(angle)), prec)


def round_to_integer(x, tolerance) -> int:
    """Round a real mp value to the nearest integer, refusing if the residue exceeds ``tolerance``."""
    n = int(x.context.nint(x)) if hasattr(x, "context") else round(x)
    if abs(x - n) > tolerance:
        raise ArithmeticError(f"value {x} is not within {tolerance} of an integer")
    return n


# ---------------------------------------------------------------------------
# Half-grid Laurent polynomials


def _frac(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, Rational)):
        return Fraction(c)
    raise TypeError(f"exact coefficient required, got {type(c).__name__}")


class HalfGridLaurent:
    """Laurent polynomial in t with exponents h/2 for integer h.

    Coefficients are exact rationals and zero terms are never stored.
    Instances are immutable and hashable.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, object] | Iterable[tuple[int, object]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[int, Fraction] = {}
        for h, c in items:
            c = _frac(c)
            if c:
                acc[int(h)] = acc.get(int(h), Fraction(0)) + c
        self._terms = tuple(sorted((h, c) for h, c in acc.items() if c))
        self._hash = None

    @classmethod
    def from_integer_exponents(cls, terms: Mapping[int, object]) -> "HalfGridLaurent":
        """Build from ``{k: a_k}`` meaning sum a_k t^k."""
        return cls({2 * k: c for k, c in terms.items()})

    @classmethod
    def constant(cls, c) -> "HalfGridLaurent":
        return cls({0: c})

    @classmethod
    def monomial(cls, h: int, c=1) -> "HalfGridLaurent":
        return cls({h: c})

    # -- container protocol
    def items(self):
        return self._terms

    def terms(self) -> dict[int, Fraction]:
        return dict(self._terms)

    def coeff(self, h: int) -> Fraction:
        for k, c in self._terms:
            if k == h:
                return c
        return Fraction(0)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = HalfGridLaurent.constant(other)
        if not isinstance(other, HalfGridLaurent):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._terms)
        return self._hash

    # -- structure
    @property
    def is_knot_grade(self) -> bool:
        """True when every exponent is an integer."""
        return all(h % 2 == 0 for h, _ in self._terms)

    @property
    def min_h(self) -> int:
        return self._terms[0][0] if self._terms else 0

    @property
    def max_h(self) -> int:
        return self._terms[-1][0] if self._terms else 0

    @property
    def span_h(self) -> int:
        """max |h| over the support: the degree on the half grid."""
        return max((abs(h) for h, _ in self._terms), default=0)

    def integer_coefficients(self) -> dict[int, Fraction]:
        """``{k: a_k}`` for knot-grade polynomials."""
        if not self.is_knot_grade:
            raise ValueError("polynomial has half-integer exponents")
        return {h // 2: c for h, c in self._terms}

    # -- ring operations
    def __add__(self, other):
        other = _as_laurent(other)
        acc = dict(self._terms)
        for h, c in other._terms:
            acc[h] = acc.get(h, Fraction(0)) + c
        return HalfGridLaurent(acc)

    __radd__ = __add__

    def __neg__(self):
        return HalfGridLaurent((h, -c) for h, c in self._terms)

    def __sub__(self, other):
        return self + (-_as_laurent(other))

    def __rsub__(self, other):
        return _as_laurent(other) + (-self)

    def __mul__(self, other):
        other = _as_laurent(other)
        acc: dict[int, Fraction] = {}
        for h1, c1 in self._terms:
            for h2, c2 in other._terms:
                acc[h1 + h2] = acc.get(h1 + h2, Fraction(0)) + c1 * c2
        return HalfGridLaurent(acc)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if len(self._terms) != 1:
                raise ValueError("only monomials are invertible")
            (h, c), = self._terms
            return HalfGridLaurent({h * n: c ** n})
        result = HalfGridLaurent.constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def shift(self, dh: int) -> "HalfGridLaurent":
        """Multiply by t^{dh/2}."""
        return HalfGridLaurent((h + dh, c) for h, c in self._terms)

    def scale_exponents(self, k: int) -> "HalfGridLaurent":
        """Substitute t -> t^k."""
        return HalfGridLaurent((h * k, c) for h, c in self._terms)

    def mirror(self) -> "HalfGridLaurent":
        """t -> t^{-1}."""
        return self.scale_exponents(-1)

    def divide_exact(self, divisor: "HalfGridLaurent") -> "HalfGridLaurent":
        """Exact quotient in Q[t^{+-1/2}]; raises ArithmeticError on a remainder."""
        if not divisor:
            raise ZeroDivisionError("division by zero polynomial")
        if not self:
            return HalfGridLaurent()
        num = {h - self.min_h: c for h, c in self._terms}
        den = {h - divisor.min_h: c for h, c in divisor._terms}
        dn, dd = max(num), max(den)
        lead = den[dd]
        quot: dict[int, Fraction] = {}
        while num and max(num) >= dd:
            top = max(num)
            q = num[top] / lead
            quot[top - dd] = q
            for h, c in den.items():
                k = h + top - dd
                v = num.get(k, Fraction(0)) - q * c
                if v:
                    num[k] = v
                else:
                    num.pop(k, None)
        if num:
            raise ArithmeticError("division leaves a remainder")
        return HalfGridLaurent(quot).shift(self.min_h - divisor.min_h)

    # -- evaluation
    def __call__(self, z, prec: int | None = None) -> ComplexHP:
        return laurent_eval(self, z, prec)

    def at_one(self) -> Fraction:
        return sum((c for _, c in self._terms), Fraction(0))

    # -- serialization
    def to_json(self) -> list[list[int]]:
        return [[h, c.numerator, c.denominator] for h, c in self._terms]

    @classmethod
    def from_json(cls, data) -> "HalfGridLaurent":
        out = {}
        for entry in data:
            if len(entry) == 2:
                h, num = entry
                den = 1
            else:
                h, num, den = entry
            out[int(h)] = out.get(int(h), Fraction(0)) + Fraction(int(num), int(den))
        return cls(out)

    def __repr__(self) -> str:
        return f"HalfGridLaurent({self})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for h, c in reversed(self._terms):
            exp = str(h // 2) if h % 2 == 0 else f"{h}/2"
            mag = abs(c)
            if h == 0:
                body = str(mag)
            else:
                body = ("" if mag == 1 else f"{mag}*") + ("t" if exp == "1" else f"t^{exp}")
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        s = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s


def _as_laurent(x) -> HalfGridLaurent:
    if isinstance(x, HalfGridLaurent):
        return x
    return HalfGridLaurent.constant(x)


def laurent_op(kind: str, x: HalfGridLaurent, y: HalfGridLaurent | None = None) -> HalfGridLaurent:
    if kind == "add":
        return x + y
    if kind == "mul":
        return x * y
    if kind == "neg":
        return -x
    if kind == "mirror":
        return x.mirror()
    raise ValueError(f"unknown operation {kind!r}")


def laurent_eval(p: HalfGridLaurent, z, prec: int | None = None) -> ComplexHP:
    """Evaluate ``p`` at ``z`` with the principal branch for half exponents.

    ``t^{h/2}`` is computed as ``exp(h log(z) / 2)`` with the principal log.
    """
    if prec is None:
        prec = z.prec if isinstance(z, ComplexHP) else DEFAULT_PRECISION
    ctx = mp_context(prec)
    zv = ctx.mpc(_raw(z, prec))
    if zv == 0:
        if any(h < 0 for h, _ in p.items()):
            raise ZeroDivisionError("negative exponents at z = 0")
        return ComplexHP(ctx.mpc(p.coeff(0).numerator) / p.coeff(0).denominator, prec)
    half_log = ctx.log(zv) / 2
    total = ctx.mpc(0)
    for h, c in p.items():
        if h % 2 == 0:
            power = zv ** (h // 2)
        else:
            power = ctx.exp(h * half_log)
        total += power * (ctx.mpf(c.numerator) / c.denominator)
    return ComplexHP(total, prec)


# ---------------------------------------------------------------------------
# Two-variable Laurent polynomials


class TwoVarLaurent:
    """Integer-coefficient Laurent polynomial in a and z."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[tuple[int, int], int] | Iterable = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[tuple[int, int], int] = {}
        for (ea, ez), c in items:
            if c != int(c):
                raise TypeError("TwoVarLaurent coefficients must be integers")
            key = (int(ea), int(ez))
            acc[key] = acc.get(key, 0) + int(c)
        self._terms = tuple(sorted((k, c) for k, c in acc.items() if c))
        self._hash = None

    @classmethod
    def constant(cls, c: int) -> "TwoVarLaurent":
        return cls({(0, 0): c})

    @classmethod
    def monomial(cls, ea: int, ez: int, c: int = 1) -> "TwoVarLaurent":
        return cls({(ea, ez): c})

    def items(self):
        return self._terms

    def terms(self) -> dict[tuple[int, int], int]:
        return dict(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = TwoVarLaurent.constant(other)
        if not isinstance(other, TwoVarLaurent):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._terms)
        return self._hash

    def __add__(self, other):
        other = other if isinstance(other, TwoVarLaurent) else TwoVarLaurent.constant(other)
        acc = dict(self._terms)
        for k, c in other._terms:
            acc[k] = acc.get(k, 0) + c
        return TwoVarLaurent(acc)

    __radd__ = __add__

    def __neg__(self):
        return TwoVarLaurent((k, -c) for k, c in self._terms)

    def __sub__(self, other):
        other = other if isinstance(other, TwoVarLaurent) else TwoVarLaurent.constant(other)
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return TwoVarLaurent((k, c * other) for k, c in self._terms)
        acc: dict[tuple[int, int], int] = {}
        for (a1, z1), c1 in self._terms:
            for (a2, z2), c2 in other._terms:
                key = (a1 + a2, z1 + z2)
                acc[key] = acc.get(key, 0) + c1 * c2
        return TwoVarLaurent(acc)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        result = TwoVarLaurent.constant(1)
        for _ in range(n):
            result = result * self
        return result

    def map_exponents(self, fa=lambda e: e, fz=lambda e: e, sign=lambda ea, ez: 1) -> "TwoVarLaurent":
        return TwoVarLaurent(((fa(ea), fz(ez)), c * sign(ea, ez)) for (ea, ez), c in self._terms)

    def evaluate(self, a, z, prec: int = DEFAULT_PRECISION) -> ComplexHP:
        ctx = mp_context(prec)
        av, zv = ctx.mpc(_raw(a, prec)), ctx.mpc(_raw(z, prec))
        total = ctx.mpc(0)
        for (ea, ez), c in self._terms:
            total += c * av ** ea * zv ** ez
        return ComplexHP(total, prec)

    def to_json(self) -> list[list[int]]:
        return [[ea, ez, c] for (ea, ez), c in self._terms]

    @classmethod
    def from_json(cls, data) -> "TwoVarLaurent":
        terms: dict[tuple[int, int], int] = {}
        for entry in data:
            if len(entry) != 3 or not all(isinstance(x, int) and not isinstance(x, bool) for x in entry):
                raise ValueError(f"expected [a_exp, z_exp, coeff] integer triple, got {entry!r}")
            ea, ez, c = entry
            terms[(ea, ez)] = terms.get((ea, ez), 0) + c
        return cls(terms)

    def __repr__(self) -> str:
        return f"TwoVarLaurent({self.to_json()})"


def substitute_two_var(f: TwoVarLaurent, a_sub: HalfGridLaurent, z_sub: HalfGridLaurent) -> HalfGridLaurent:
    """Compose f(a_sub, z_sub) exactly.

    ``a_sub`` must be a monomial. Negative powers of ``z_sub`` are cleared by
    exact division, which succeeds for link polynomials under the standard
    substitutions.
    """
    if not f:
        return HalfGridLaurent()
    min_z = min(ez for (_, ez), _ in f.items())
    shift = -min_z if min_z < 0 else 0
    max_z = max(ez for (_, ez), _ in f.items()) + shift
    z_powers = [HalfGridLaurent.constant(1)]
    for _ in range(max_z):
        z_powers.append(z_powers[-1] * z_sub)
    acc = HalfGridLaurent()
    for (ea, ez), c in f.items():
        acc = acc + (a_sub ** ea) * z_powers[ez + shift] * c
    if shift:
        acc = acc.divide_exact(z_powers[shift])
    return acc


# ---------------------------------------------------------------------------
# Q[pi^2]


class PiPolynomial:
    """An element sum_k c_k pi^(2k) of Q[pi^2]."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [_frac(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def rational(cls, c) -> "PiPolynomial":
        return cls([c])

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = PiPolynomial.rational(other)
        if not isinstance(other, PiPolynomial):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __add__(self, other):
        if not isinstance(other, PiPolynomial):
            other = PiPolynomial.rational(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return PiPolynomial(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self):
        return PiPolynomial(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-other if isinstance(other, PiPolynomial) else PiPolynomial.rational(-_frac(other)))

    def __mul__(self, other):
        if not isinstance(other, PiPolynomial):
            c = _frac(other)
            return PiPolynomial(x * c for x in self.coeffs)
        if not self.coeffs or not other.coeffs:
            return PiPolynomial()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            for j, y in enumerate(other.coeffs):
                out[i + j] += x * y
        return PiPolynomial(out)

    __rmul__ = __mul__

    def condition_bound(self) -> float:
        """A float upper bound on sum |c_k| pi^(2k), used to size guard bits."""
        import math

        total = 0.0
        for k, c in enumerate(self.coeffs):
            if c:
                total += math.exp(math.log(abs(c.numerator)) - math.log(c.denominator) + 2 * k * math.log(math.pi))
        return total

    def __repr__(self) -> str:
        if not self.coeffs:
            return "PiPolynomial(0)"
        parts = [f"{c}*pi^{2 * k}" if k else str(c) for k, c in enumerate(self.coeffs) if c]
        return "PiPolynomial(" + " + ".join(parts) + ")"


def pi_poly_eval(p: PiPolynomial, prec: int = DEFAULT_PRECISION) -> ComplexHP:
    """Evaluate ``p`` with pi taken at ``prec`` bits."""
    if prec < 64:
        raise ValueError("precision must be at least 64 bits")
    ctx = mp_context(prec)
    pi2 = ctx.pi ** 2
    total = ctx.mpf(0)
    for c in reversed(p.coeffs):
        total = total * pi2 + ctx.mpf(c.numerator) / c.denominator
    return ComplexHP(ctx.mpc(total), prec)
