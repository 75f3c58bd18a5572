"""Global Weierstrass models over Q: invariants, per-prime minimization,
reduction-type classification, bounded point search and division polynomials.

Models are short Weierstrass y^2 = x^3 + a*x + b with exact integer
coefficients; long models [a1, a2, a3, a4, a6] are accepted for ingestion
and converted by completing the square and cube (valid for the supported
primes p >= 5, which the 2- and 3-powers of the conversion never touch).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

from .arith import is_prime, kronecker_symbol
from .errors import DomainError
from .fp import FpCurve, trace_of_frobenius

try:
    import numpy as _np
except ImportError:  # pragma: no cover - numpy is a declared dependency
    _np = None


@dataclass(frozen=True)
class Curve:
    """y^2 = x^3 + a*x + b over Q with nonzero discriminant."""

    a: int
    b: int
    label: str | None = None

    def __post_init__(self):
        if self.discriminant == 0:
            raise DomainError("singular model: -16(4a^3 + 27b^2) = 0")

    @property
    def discriminant(self) -> int:
        return -16 * (4 * self.a**3 + 27 * self.b**2)

    @property
    def c4(self) -> int:
        return -48 * self.a

    @property
    def c6(self) -> int:
        return -864 * self.b

    def rhs(self, x: Fraction) -> Fraction:
        return x * x * x + self.a * x + self.b

    def contains(self, point: "QPoint") -> bool:
        if point.is_identity:
            return True
        return point.y * point.y == self.rhs(point.x)

    def __str__(self):
        name = f"[{self.label}] " if self.label else ""
        return f"{name}y^2 = x^3 + {self.a}x + {self.b}"


@dataclass(frozen=True)
class QPoint:
    """Rational affine point or the identity; coordinates are exact."""

    x: Fraction | None
    y: Fraction | None

    @classmethod
    def identity(cls) -> "QPoint":
        return cls(None, None)

    @classmethod
    def from_pair(cls, x, y) -> "QPoint":
        return cls(Fraction(x), Fraction(y))

    @property
    def is_identity(self) -> bool:
        return self.x is None

    def __str__(self):
        return "O" if self.is_identity else f"({self.x}, {self.y})"


def q_neg(point: QPoint) -> QPoint:
    if point.is_identity:
        return point
    return QPoint(point.x, -point.y)


def q_add(curve: Curve, P: QPoint, Q: QPoint) -> QPoint:
    """Exact chord-tangent addition over Q."""
    if P.is_identity:
        return Q
    if Q.is_identity:
        return P
    if P.x == Q.x:
        if P.y + Q.y == 0:
            return QPoint.identity()
        lam = (3 * P.x * P.x + curve.a) / (2 * P.y)
    else:
        lam = (Q.y - P.y) / (Q.x - P.x)
    x3 = lam * lam - P.x - Q.x
    y3 = lam * (P.x - x3) - P.y
    return QPoint(x3, y3)


def q_scalar_mul(curve: Curve, k: int, P: QPoint) -> QPoint:
    if k < 0:
        return q_scalar_mul(curve, -k, q_neg(P))
    R = QPoint.identity()
    Q = P
    while k:
        if k & 1:
            R = q_add(curve, R, Q)
        Q = q_add(curve, Q, Q)
        k >>= 1
    return R


def curve_from_long_weierstrass(ai: list[int], label: str | None = None) -> Curve:
    """Short model integrally equivalent to y^2+a1xy+a3y = x^3+a2x^2+a4x+a6.

    The returned model is the (u = 1/6)-scaled one y^2 = x^3 - 27c4 x - 54c6;
    use :func:`long_point_to_short` to carry points across.
    """
    a1, a2, a3, a4, a6 = ai
    b2 = a1 * a1 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3 * a3 + 4 * a6
    c4 = b2 * b2 - 24 * b4
    c6 = -(b2**3) + 36 * b2 * b4 - 216 * b6
    return Curve(-27 * c4, -54 * c6, label=label)


def long_point_to_short(ai: list[int], x, y) -> QPoint:
    """Image of a long-model point on the model of curve_from_long_weierstrass."""
    a1, a2, a3, a4, a6 = ai
    x, y = Fraction(x), Fraction(y)
    b2 = a1 * a1 + 4 * a2
    return QPoint(36 * x + 3 * b2, 216 * y + 108 * (a1 * x + a3))


def _val(n: int, p: int) -> int | None:
    # p-adic valuation; None encodes +infinity (n = 0)
    if n == 0:
        return None
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _minimal_with_scale(curve: Curve, p: int) -> tuple[Curve, int]:
    a, b = curve.a, curve.b
    k = 0
    while True:
        va = _val(a, p)
        vb = _val(b, p)
        if (va is None or va >= 4) and (vb is None or vb >= 6):
            a //= p**4
            b //= p**6
            k += 1
        else:
            return Curve(a, b, label=curve.label), k


def minimal_at_p(curve: Curve, p: int) -> Curve:
    """Model with minimal v_p(discriminant) among u = p^k rescalings."""
    if p < 5 or not is_prime(p):
        raise DomainError("minimal_at_p requires a prime p >= 5")
    return _minimal_with_scale(curve, p)[0]


class ReductionKind(enum.Enum):
    GOOD_ORDINARY = "good ordinary"
    GOOD_SUPERSINGULAR = "good supersingular"
    SPLIT_MULTIPLICATIVE = "split multiplicative"
    NONSPLIT_MULTIPLICATIVE = "nonsplit multiplicative"
    ADDITIVE = "additive"

    @property
    def is_good(self) -> bool:
        return self in (ReductionKind.GOOD_ORDINARY, ReductionKind.GOOD_SUPERSINGULAR)


@dataclass(frozen=True)
class ReductionType:
    kind: ReductionKind
    anomalous: bool = False
    trace: int | None = None

    def __post_init__(self):
        if self.anomalous and self.kind is not ReductionKind.GOOD_ORDINARY:
            raise DomainError("anomalous reduction is necessarily good ordinary")

    def __str__(self):
        extra = ", anomalous" if self.anomalous else ""
        return f"{self.kind.value}{extra}"


def reduction_type(curve: Curve, p: int) -> ReductionType:
    """Classify the special fiber at p >= 5 after minimizing the model.

    Good iff p does not divide the minimal discriminant; multiplicative
    fibers are split iff -c6 is a square mod p; additive otherwise.
    """
    if p < 5 or not is_prime(p):
        raise DomainError("reduction_type requires a prime p >= 5")
    minimal = minimal_at_p(curve, p)
    disc = minimal.discriminant
    if disc % p != 0:
        reduced = FpCurve(p, minimal.a % p, minimal.b % p)
        ap = trace_of_frobenius(reduced)
        if ap % p == 0:
            return ReductionType(ReductionKind.GOOD_SUPERSINGULAR, trace=ap)
        return ReductionType(ReductionKind.GOOD_ORDINARY, anomalous=(ap == 1), trace=ap)
    if minimal.c4 % p != 0:
        if kronecker_symbol(-minimal.c6, p) == 1:
            return ReductionType(ReductionKind.SPLIT_MULTIPLICATIVE)
        return ReductionType(ReductionKind.NONSPLIT_MULTIPLICATIVE)
    return ReductionType(ReductionKind.ADDITIVE)


def _is_square(n: int) -> tuple[bool, int]:
    if n < 0:
        return False, 0
    r = isqrt(n)
    return r * r == n, r


_SEARCH_GRID_CACHE: dict = {}
_SQUARE_MOD_TABLES: dict = {}


def _square_table(mod: int):
    table = _SQUARE_MOD_TABLES.get(mod)
    if table is None:
        table = _np.zeros(mod, dtype=bool)
        for i in range(mod):
            table[i * i % mod] = True
        _SQUARE_MOD_TABLES[mod] = table
    return table


def _search_grid(height: int):
    grid = _SEARCH_GRID_CACHE.get(height)
    if grid is None:
        ms = _np.arange(-height, height + 1, dtype=_np.int64)
        grid = (ms, ms * ms * ms)
        _SEARCH_GRID_CACHE.clear()  # keep at most one height resident
        _SEARCH_GRID_CACHE[height] = grid
    return grid


def _icbrt(n: int) -> int:
    # floor cube root
    if n < 0:
        c = _icbrt(-n)
        return -c if c**3 == -n else -c - 1
    r = round(n ** (1.0 / 3.0)) if n else 0
    while r * r * r > n:
        r -= 1
    while (r + 1) ** 3 <= n:
        r += 1
    return r


def _cubic_max(a: int, ae4: int, be6: int, height: int) -> int:
    # exact max of m^3 + ae4*m + be6 over the integer interval [-H, H]
    candidates = [-height, height]
    if a < 0:
        crit = isqrt(-ae4 // 3)
        for m in (crit, crit + 1, -crit, -crit - 1):
            if -height <= m <= height:
                candidates.append(m)
    return max(m * m * m + ae4 * m + be6 for m in candidates)


def _search_numpy(a: int, b: int, height: int):
    # int64 is safe only while |m^3 + a m e^4 + b e^6| stays below 2^62
    bound = height**3 * (1 + abs(a) + abs(b))
    if bound >= 1 << 62:
        return None
    ms, m3 = _search_grid(height)
    sq64 = _square_table(64)
    sq63 = _square_table(63)
    sq65 = _square_table(65)
    sq11 = _square_table(11)
    hits = []
    for e in range(1, isqrt(height) + 1):
        ae4 = a * e**4
        be6 = b * e**6
        if _cubic_max(a, ae4, be6, height) < 0:
            continue
        lo = 0
        if a == 0:
            # t >= 0 iff m^3 >= -be6: slice the grid to the live range
            mlo = _icbrt(-be6 - 1) + 1 if be6 < 0 else -_icbrt(be6) - 1
            if mlo > height:
                continue
            lo = max(0, mlo + height)
        mm, mm3 = ms[lo:], m3[lo:]
        t = mm3 + ae4 * mm + be6 if a else mm3 + be6
        # residue prefilters knock out non-squares before any sqrt
        idx = _np.nonzero((t >= 0) & sq64[t & 63])[0]
        if idx.size == 0:
            continue
        tt = t[idx]
        keep = sq63[tt % 63] & sq65[tt % 65] & sq11[tt % 11]
        idx = idx[keep]
        if idx.size == 0:
            continue
        tt = tt[keep]
        root = _np.sqrt(tt.astype(_np.float64)).astype(_np.int64)
        for delta in (-1, 0, 1):
            s = root + delta
            ok = _np.nonzero((s >= 0) & (s * s == tt))[0]
            for i in ok.tolist():
                hits.append((int(mm[idx[i]]), e, int(s[i])))
    return hits


def _search_python(a: int, b: int, height: int):
    hits = []
    for e in range(1, isqrt(height) + 1):
        e4, e6 = e**4, e**6
        for m in range(-height, height + 1):
            if e > 1 and gcd(m, e) != 1:
                continue
            t = m * m * m + a * e4 * m + b * e6
            ok, s = _is_square(t)
            if ok:
                hits.append((m, e, s))
    return hits


def naive_point_search(curve: Curve, height: int) -> list[QPoint]:
    """All rational points with x = m/e^2, |m| <= height, e <= sqrt(height).

    Every candidate is verified exactly in arbitrary precision; results are
    deduplicated and sorted by the naive height of x.
    """
    if height < 1:
        raise DomainError("height bound must be >= 1")
    hits = _search_numpy(curve.a, curve.b, height) if _np is not None else None
    if hits is None:
        hits = _search_python(curve.a, curve.b, height)
    points = []
    seen = set()
    for m, e, s in hits:
        x = Fraction(m, e * e)
        if x in seen:
            continue
        seen.add(x)
        y = Fraction(s, e**3)
        if y * y != curve.rhs(x):  # exact confirmation of the sieve hit
            continue
        points.append(QPoint(x, y))
        if s != 0:
            points.append(QPoint(x, -y))
    points.sort(key=lambda P: (max(abs(P.x.numerator), P.x.denominator), P.x, P.y))
    return points


# --- division polynomials -------------------------------------------------
#
# psi_m is stored through the y-free family P_n: psi_n = P_n for odd n and
# psi_n = 2y * P_n for even n, with y^2 eliminated via f = x^3 + a x + b.

Poly = list


def poly_add(u: Poly, v: Poly) -> Poly:
    n = max(len(u), len(v))
    out = [0] * n
    for i, c in enumerate(u):
        out[i] += c
    for i, c in enumerate(v):
        out[i] += c
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def poly_sub(u: Poly, v: Poly) -> Poly:
    return poly_add(u, [-c for c in v])


def poly_mul(u: Poly, v: Poly) -> Poly:
    out = [0] * (len(u) + len(v) - 1)
    for i, ci in enumerate(u):
        if ci == 0:
            continue
        for j, cj in enumerate(v):
            out[i + j] += ci * cj
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def poly_scale(u: Poly, c: int) -> Poly:
    return [c * ci for ci in u]


def poly_eval(u: Poly, x, mod: int | None = None):
    acc = 0
    for c in reversed(u):
        acc = acc * x + c
        if mod is not None:
            acc %= mod
    return acc


def poly_deriv(u: Poly) -> Poly:
    if len(u) <= 1:
        return [0]
    return [i * c for i, c in enumerate(u)][1:]


def poly_degree(u: Poly) -> int:
    d = len(u) - 1
    while d > 0 and u[d] == 0:
        d -= 1
    return d


class _DivisionPolynomials:
    """Cache of the y-free division polynomial family for one curve."""

    def __init__(self, a: int, b: int):
        self.a, self.b = a, b
        f = [b, a, 0, 1]
        self.f = f
        self.cache: dict[int, Poly] = {
            0: [0],
            1: [1],
            2: [1],
            3: [-a * a, 12 * b, 6 * a, 0, 3],
            4: poly_scale(
                [-(a**3) - 8 * b * b, -4 * a * b, -5 * a * a, 20 * b, 5 * a, 0, 1], 2
            ),
        }
        self.f_sq = poly_mul(f, f)

    def get(self, n: int) -> Poly:
        if n in self.cache:
            return self.cache[n]
        m = n // 2
        if n % 2 == 1:
            t1 = poly_mul(self.get(m + 2), poly_mul(self.get(m), poly_mul(self.get(m), self.get(m))))
            t2 = poly_mul(self.get(m - 1), poly_mul(self.get(m + 1), poly_mul(self.get(m + 1), self.get(m + 1))))
            if m % 2 == 0:
                out = poly_sub(poly_scale(poly_mul(self.f_sq, t1), 16), t2)
            else:
                out = poly_sub(t1, poly_scale(poly_mul(self.f_sq, t2), 16))
        else:
            t1 = poly_mul(self.get(m + 2), poly_mul(self.get(m - 1), self.get(m - 1)))
            t2 = poly_mul(self.get(m - 2), poly_mul(self.get(m + 1), self.get(m + 1)))
            out = poly_mul(self.get(m), poly_sub(t1, t2))
        self.cache[n] = out
        return out


def division_polynomial(curve: Curve, m: int) -> Poly:
    """psi_m as a univariate integer polynomial (odd m >= 3), ascending powers.

    Its degree is (m^2 - 1)/2 and its roots are the x-coordinates of the
    nonzero m-torsion points.
    """
    if m < 3 or m % 2 == 0:
        raise DomainError("division_polynomial is defined here for odd m >= 3")
    return _DivisionPolynomials(curve.a, curve.b).get(m)


class _Dual:
    """Dual number (value, derivative) modulo a fixed integer."""

    __slots__ = ("v", "d", "mod")

    def __init__(self, v, d, mod):
        self.v, self.d, self.mod = v % mod, d % mod, mod

    def __add__(self, o):
        return _Dual(self.v + o.v, self.d + o.d, self.mod)

    def __sub__(self, o):
        return _Dual(self.v - o.v, self.d - o.d, self.mod)

    def __mul__(self, o):
        return _Dual(self.v * o.v, self.v * o.d + self.d * o.v, self.mod)

    def scale(self, c: int):
        return _Dual(c * self.v, c * self.d, self.mod)


def divpoly_eval_with_derivative(curve: Curve, m: int, x0: int, modulus: int) -> tuple[int, int]:
    """(psi_m(x0), psi_m'(x0)) modulo `modulus` for odd m, without expanding psi_m.

    Runs the division-polynomial recurrence on dual numbers, so only
    O(log m) windowed values are ever materialized; this is what makes
    torsion lifting at m = p feasible for primes like 223.
    """
    if m < 1 or m % 2 == 0:
        raise DomainError("dual evaluation is defined for odd m >= 1")
    a, b = curve.a, curve.b
    x = _Dual(x0, 1, modulus)
    x2 = x * x
    x3 = x2 * x
    f = x3 + x.scale(a) + _Dual(b, 0, modulus)
    f_sq = f * f
    base: dict[int, _Dual] = {
        0: _Dual(0, 0, modulus),
        1: _Dual(1, 0, modulus),
        2: _Dual(1, 0, modulus),
        3: (x2 * x2).scale(3) + x2.scale(6 * a) + x.scale(12 * b) + _Dual(-a * a, 0, modulus),
        4: (
            x3 * x3
            + (x2 * x2).scale(5 * a)
            + x3.scale(20 * b)
            + x2.scale(-5 * a * a)
            + x.scale(-4 * a * b)
            + _Dual(-8 * b * b - a**3, 0, modulus)
        ).scale(2),
    }

    def rec(n: int) -> _Dual:
        if n in base:
            return base[n]
        h = n // 2
        if n % 2 == 1:
            t1 = rec(h + 2) * rec(h) * rec(h) * rec(h)
            t2 = rec(h - 1) * rec(h + 1) * rec(h + 1) * rec(h + 1)
            out = (f_sq * t1).scale(16) - t2 if h % 2 == 0 else t1 - (f_sq * t2).scale(16)
        else:
            t1 = rec(h + 2) * rec(h - 1) * rec(h - 1)
            t2 = rec(h - 2) * rec(h + 1) * rec(h + 1)
            out = rec(h) * (t1 - t2)
        base[n] = out
        return out

    result = rec(m)
    return result.v, result.d
