"""Link polynomials: Kauffman bracket, Jones, HOMFLY and its specializations,
Alexander-Conway, the Q polynomial from ingested Kauffman data, and Fox
colorings as an independent oracle.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache

from .algebra import HalfGridLaurent, TwoVarLaurent, substitute_two_var
from .notation import BraidWord, PDCode, components, writhe

MAX_CROSSINGS = 16
MAX_STRANDS = 6
MAX_WORD = 40


class EngineLimitError(ValueError):
    """Input exceeds a configured engine limit."""


@dataclass(frozen=True)
class JonesPolynomial:
    poly: HalfGridLaurent
    components: int


@dataclass(frozen=True)
class HomflyPolynomial:
    """HOMFLY polynomial with a P+ - a^-1 P- = z P0 and P(unknot) = 1."""

    poly: TwoVarLaurent


# ---------------------------------------------------------------------------
# Kauffman bracket and Jones


def _count_loops(n_labels: int, pairs) -> int:
    parent = list(range(n_labels + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    loops = n_labels
    for u, v in pairs:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
            loops -= 1
    return loops


def kauffman_bracket(pd: PDCode, max_crossings: int = MAX_CROSSINGS) -> HalfGridLaurent:
    """State sum <L> as a Laurent polynomial in A (A^e is stored at h = 2e).

    The A-smoothing of X(a,b,c,d) joins a-b and c-d; the B-smoothing joins
    a-d and b-c.
    """
    c = len(pd.crossings)
    if c > max_crossings:
        raise EngineLimitError(f"{c} crossings exceeds the bracket limit {max_crossings}")
    if c == 0:
        return HalfGridLaurent.constant(1)
    a_pairs = [((x[0], x[1]), (x[2], x[3])) for x in pd.crossings]
    b_pairs = [((x[0], x[3]), (x[1], x[2])) for x in pd.crossings]
    tally: Counter = Counter()
    for state in range(1 << c):
        pairs = []
        sigma = 0
        for i in range(c):
            if state >> i & 1:
                pairs.extend(b_pairs[i])
                sigma -= 1
            else:
                pairs.extend(a_pairs[i])
                sigma += 1
        tally[sigma, _count_loops(pd.arc_count, pairs)] += 1
    delta = HalfGridLaurent({4: -1, -4: -1})
    max_loops = max(loops for _, loops in tally)
    delta_powers = [HalfGridLaurent.constant(1)]
    for _ in range(max_loops):
        delta_powers.append(delta_powers[-1] * delta)
    total = HalfGridLaurent()
    for (sigma, loops), count in sorted(tally.items()):
        total = total + HalfGridLaurent.monomial(2 * sigma, count) * delta_powers[loops - 1]
    return total


def jones(pd: PDCode, max_crossings: int = MAX_CROSSINGS) -> JonesPolynomial:
    """(-A^3)^(-w) <L> rewritten in t = A^(-4)."""
    bracket = kauffman_bracket(pd, max_crossings)
    w = writhe(pd)
    normalized = bracket * HalfGridLaurent.monomial(-6 * w, -1 if w % 2 else 1)
    terms = {}
    for h, coef in normalized.items():
        e = h // 2  # exponent of A
        if e % 2:
            raise ArithmeticError("odd A-exponent after normalization")
        terms[-e // 2] = coef
    return JonesPolynomial(HalfGridLaurent(terms), components(pd))


# ---------------------------------------------------------------------------
# HOMFLY via the Hecke algebra trace

_A = TwoVarLaurent.monomial(1, 0)
_AINV_Z = TwoVarLaurent.monomial(-1, 1)
_AINV2 = TwoVarLaurent.monomial(-2, 0)
_A2 = TwoVarLaurent.monomial(2, 0)
_MINUS_AZ = TwoVarLaurent.monomial(1, 1, -1)
_DELTA = TwoVarLaurent({(1, -1): 1, (-1, -1): -1})  # (a - a^-1) / z
_ONE = TwoVarLaurent.constant(1)


def _swap(w: tuple[int, ...], i: int) -> tuple[int, ...]:
    lst = list(w)
    lst[i], lst[i + 1] = lst[i + 1], lst[i]
    return tuple(lst)


def _add_into(acc: dict, key, coef: TwoVarLaurent) -> None:
    v = acc.get(key)
    v = coef if v is None else v + coef
    if v:
        acc[key] = v
    else:
        acc.pop(key, None)


def _times_generator(elem: dict, i: int) -> dict:
    """Right-multiply a Hecke element by g_i, where g_i^2 = a^-1 z g_i + a^-2."""
    out: dict = {}
    for w, coef in elem.items():
        ws = _swap(w, i)
        if w[i] < w[i + 1]:
            _add_into(out, ws, coef)
        else:
            _add_into(out, w, coef * _AINV_Z)
            _add_into(out, ws, coef * _AINV2)
    return out


def _times_inverse(elem: dict, i: int) -> dict:
    """Right-multiply by g_i^-1 = a^2 g_i - a z."""
    out: dict = {}
    for w, coef in _times_generator(elem, i).items():
        _add_into(out, w, coef * _A2)
    for w, coef in elem.items():
        _add_into(out, w, coef * _MINUS_AZ)
    return out


@lru_cache(maxsize=None)
def _basis_trace(w: tuple[int, ...]) -> TwoVarLaurent:
    """Markov trace of T_w, normalized so that it is the HOMFLY of the closure."""
    n = len(w)
    if n == 1:
        return _ONE
    k = w.index(n - 1)
    if k == n - 1:
        return _DELTA * _basis_trace(w[:-1])
    # T_w = T_u g_{n-2} g_{n-3} ... g_k with u fixing the last strand;
    # tr(x g_{n-2} y) = tr(x y) for x, y on n-1 strands.
    u = w
    for j in range(k, n - 1):
        u = _swap(u, j)
    elem = {u[:-1]: _ONE}
    for j in range(n - 3, k - 1, -1):
        elem = _times_generator(elem, j)
    return _trace(elem)


def _trace(elem: dict) -> TwoVarLaurent:
    total = TwoVarLaurent()
    for w, coef in elem.items():
        total = total + coef * _basis_trace(w)
    return total


def homfly(braid: BraidWord, max_strands: int = MAX_STRANDS, max_word: int = MAX_WORD) -> HomflyPolynomial:
    """HOMFLY polynomial of the braid closure."""
    if braid.strands > max_strands:
        raise EngineLimitError(f"{braid.strands} strands exceeds the limit {max_strands}")
    if len(braid.word) > max_word:
        raise EngineLimitError(f"word length {len(braid.word)} exceeds the limit {max_word}")
    elem = {tuple(range(braid.strands)): _ONE}
    for g in braid.word:
        elem = _times_generator(elem, g - 1) if g > 0 else _times_inverse(elem, -g - 1)
    return HomflyPolynomial(_trace(elem))


_Z_HALF = HalfGridLaurent({1: 1, -1: -1})  # t^(1/2) - t^(-1/2)


def homfly_specialize(H: HomflyPolynomial, N: int) -> HalfGridLaurent:
    """H^N(t): substitute a = t^(N/2), z = t^(1/2) - t^(-1/2)."""
    if N == 0:
        raise ValueError("N must be nonzero")
    return substitute_two_var(H.poly, HalfGridLaurent.monomial(N), _Z_HALF)


def alexander(H: HomflyPolynomial) -> HalfGridLaurent:
    """Conway-normalized Alexander polynomial: a = 1, z = t^(1/2) - t^(-1/2)."""
    return substitute_two_var(H.poly, HalfGridLaurent.constant(1), _Z_HALF)


def skein_check(braid: BraidWord, position: int, engine=homfly) -> bool:
    """Check a H(+) - a^-1 H(-) = z H(0) at one letter of the word."""
    if not 0 <= position < len(braid.word):
        raise IndexError(f"position {position} outside word of length {len(braid.word)}")
    g = abs(braid.word[position])
    before, after = braid.word[:position], braid.word[position + 1:]
    plus = engine(BraidWord(braid.strands, before + (g,) + after)).poly
    minus = engine(BraidWord(braid.strands, before + (-g,) + after)).poly
    zero = engine(BraidWord(braid.strands, before + after)).poly
    lhs = _A * plus - TwoVarLaurent.monomial(-1, 0) * minus - TwoVarLaurent.monomial(0, 1) * zero
    return not lhs


# ---------------------------------------------------------------------------
# Kauffman F (ingested) and the Q polynomial

_Z_FULL = HalfGridLaurent({2: 1, -2: -1})  # t - t^-1


def kauffman_specialize(F: TwoVarLaurent | None, N: int) -> HalfGridLaurent:
    """F^N(t): substitute a = t^N, z = t - t^-1."""
    if F is None:
        raise ValueError("link has no ingested kauffman_F")
    if N == 0:
        raise ValueError("N must be nonzero")
    return substitute_two_var(F, HalfGridLaurent.monomial(2 * N), _Z_FULL)


def q_polynomial(F: TwoVarLaurent | None, ell: int) -> HalfGridLaurent:
    """Q(x) = (-1)^(ell-1) F(i, -i x), as an integer-exponent polynomial in x.

    The sign makes Q(unknot) = 1 for F(unknot) = 1.
    """
    if F is None:
        raise ValueError("link has no ingested kauffman_F")
    real: dict[int, int] = {}
    imag: dict[int, int] = {}
    for (ea, ez), c in F.items():
        # i^ea * (-i)^ez = i^(ea - ez)
        r = (ea - ez) % 4
        target = real if r % 2 == 0 else imag
        target[ez] = target.get(ez, 0) + (c if r < 2 else -c)
    if any(imag.values()):
        raise ArithmeticError("F(i, -ix) has a nonzero imaginary part; check the Kauffman convention")
    sign = (-1) ** (ell - 1)
    return HalfGridLaurent.from_integer_exponents({k: sign * v for k, v in real.items()})


# ---------------------------------------------------------------------------
# Fox colorings


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    k = 2
    while k * k <= p:
        if p % k == 0:
            return False
        k += 1
    return True


def _rank_mod_p(rows: list[list[int]], p: int) -> int:
    rows = [[v % p for v in r] for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(rows)) if rows[r][col]), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = pow(rows[rank][col], -1, p)
        rows[rank] = [v * inv % p for v in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][col]:
                f = rows[r][col]
                rows[r] = [(x - f * y) % p for x, y in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def fox_colorings(pd: PDCode, p: int) -> int:
    """Number of Fox p-colorings of the diagram.

    Unknowns are PD arc labels; each crossing forces the two over-arcs equal
    and 2*over = under_in + under_out mod p.
    """
    if not _is_prime(p):
        raise ValueError(f"{p} is not prime")
    n = pd.arc_count
    if n == 0:
        return p
    rows = []
    for a, b, c, d in pd.crossings:
        r1 = [0] * n
        r1[b - 1] += 1
        r1[d - 1] -= 1
        r2 = [0] * n
        r2[b - 1] += 2
        r2[a - 1] -= 1
        r2[c - 1] -= 1
        rows.extend([r1, r2])
    return p ** (n - _rank_mod_p(rows, p))


def _bareiss_det(m: list[list[int]]) -> int:
    n = len(m)
    if n == 0:
        return 1
    m = [row[:] for row in m]
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if m[r][k]), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def coloring_matrix(pd: PDCode) -> list[list[int]]:
    """Integer Fox matrix: rows are crossings, columns Wirtinger arcs."""
    parent = {v: v for v in range(1, pd.arc_count + 1)}

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for _, b, _, d in pd.crossings:
        rb, rd = find(b), find(d)
        if rb != rd:
            parent[rb] = rd
    arcs = sorted({find(v) for v in parent})
    col = {r: i for i, r in enumerate(arcs)}
    rows = []
    for a, b, c, _ in pd.crossings:
        row = [0] * len(arcs)
        row[col[find(b)]] += 2
        row[col[find(a)]] -= 1
        row[col[find(c)]] -= 1
        rows.append(row)
    return rows


def fox_determinant(pd: PDCode) -> int:
    """|det| of the coloring matrix with its first row and column removed."""
    if not pd.crossings:
        return 1
    m = coloring_matrix(pd)
    minor = [row[1:] for row in m[1:]]
    if minor and len(minor) != len(minor[0]):
        # an over-only component lifts off the rest: the link is split
        return 0
    return abs(_bareiss_det(minor))


def fox_dimension(pd: PDCode, p: int) -> int:
    """dim H_1(Sigma_2, Z_p) recovered from the coloring count p^(1 + dim)."""
    count = fox_colorings(pd, p)
    dim = -1
    while count > 1:
        count //= p
        dim += 1
    return dim
