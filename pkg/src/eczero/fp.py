"""Elliptic curves over prime fields: group law, point counting, traces.

Counting is dual-route: a table-driven sweep for p <= 2^16 and
baby-step/giant-step order finding (with quadratic-twist disambiguation)
for 2^16 < p <= 2^40.  The BSGS route falls back to the naive sweep when
the Hasse-interval candidate is not unique, so the returned order is
always exact.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from math import isqrt

from .arith import is_prime, kronecker_symbol, sqrt_mod_p
from .errors import DomainError, UnsupportedModulusError

_NAIVE_LIMIT = 1 << 16
_BSGS_LIMIT = 1 << 40


@dataclass(frozen=True)
class FpCurve:
    """Nonsingular curve y^2 = x^3 + a*x + b over F_p with p >= 5."""

    p: int
    a: int
    b: int

    def __post_init__(self):
        if self.p < 5 or not is_prime(self.p):
            raise DomainError(f"FpCurve needs a prime p >= 5, got {self.p}")
        object.__setattr__(self, "a", self.a % self.p)
        object.__setattr__(self, "b", self.b % self.p)
        if (4 * self.a**3 + 27 * self.b**2) % self.p == 0:
            raise DomainError("singular curve: 4a^3 + 27b^2 = 0 mod p")

    def rhs(self, x: int) -> int:
        return (x * x % self.p * x + self.a * x + self.b) % self.p

    def contains(self, point: "FpPoint") -> bool:
        if point.is_identity:
            return True
        return point.y * point.y % self.p == self.rhs(point.x)

    def __str__(self):
        return f"y^2 = x^3 + {self.a}x + {self.b} over F_{self.p}"


@dataclass(frozen=True)
class FpPoint:
    """Affine point or the identity; coordinates are residues mod p."""

    x: int | None
    y: int | None

    @classmethod
    def identity(cls) -> "FpPoint":
        return cls(None, None)

    @property
    def is_identity(self) -> bool:
        return self.x is None

    def __str__(self):
        return "O" if self.is_identity else f"({self.x}, {self.y})"


# Tuple-based kernels; (None, None) is the identity.  FpPoint wraps these.


def _add(p: int, a: int, P, Q):
    if P[0] is None:
        return Q
    if Q[0] is None:
        return P
    x1, y1 = P
    x2, y2 = Q
    if x1 == x2:
        if (y1 + y2) % p == 0:
            return (None, None)
        num = (3 * x1 * x1 + a) % p
        den = 2 * y1 % p
    else:
        num = (y2 - y1) % p
        den = (x2 - x1) % p
    lam = num * pow(den, -1, p) % p
    x3 = (lam * lam - x1 - x2) % p
    y3 = (lam * (x1 - x3) - y1) % p
    return (x3, y3)


def _mul(p: int, a: int, k: int, P):
    if k < 0:
        k = -k
        P = (P[0], (-P[1]) % p) if P[0] is not None else P
    R = (None, None)
    Q = P
    while k:
        if k & 1:
            R = _add(p, a, R, Q)
        Q = _add(p, a, Q, Q)
        k >>= 1
    return R


def fp_neg(curve: FpCurve, point: FpPoint) -> FpPoint:
    if point.is_identity:
        return point
    return FpPoint(point.x, (-point.y) % curve.p)


def fp_add(curve: FpCurve, P: FpPoint, Q: FpPoint) -> FpPoint:
    """Chord-tangent addition; the identity is neutral."""
    x, y = _add(curve.p, curve.a, (P.x, P.y), (Q.x, Q.y))
    return FpPoint(x, y)


def fp_scalar_mul(curve: FpCurve, k: int, P: FpPoint) -> FpPoint:
    """[k]P by double-and-add; [0]P = O and [-k]P = -[k]P."""
    x, y = _mul(curve.p, curve.a, k, (P.x, P.y))
    return FpPoint(x, y)


def point_at_x(curve: FpCurve, x: int) -> FpPoint | None:
    """A point with the given x-coordinate (smaller y), if one exists."""
    y = sqrt_mod_p(curve.rhs(x % curve.p), curve.p)
    if y is None:
        return None
    return FpPoint(x % curve.p, y)


def _qr_table(p: int) -> bytearray:
    # table[t] = 1 iff t is a nonzero square mod p
    table = bytearray(p)
    s = 0
    for i in range(1, (p - 1) // 2 + 1):
        s = (s + 2 * i - 1) % p  # i^2 = (i-1)^2 + 2i - 1
        table[s] = 1
    return table


def count_points_naive(curve: FpCurve) -> int:
    """|E(F_p)| by a full x-sweep with a precomputed residue table."""
    p, a, b = curve.p, curve.a, curve.b
    qr = _qr_table(p)
    total = p + 1
    for x in range(p):
        t = (x * x % p * x + a * x + b) % p
        if t == 0:
            continue
        total += 1 if qr[t] else -1
    return total


def _kill_values(curve: FpCurve, P, lo: int, width: int) -> list[int]:
    # All n in [lo, lo + width) with [n]P = O, as multiples of ord(P).
    p, a = curve.p, curve.a
    m = isqrt(width) + 1
    table: dict[tuple, int] = {}
    R = (None, None)
    for j in range(m):
        if R in table:
            # Walk revisited a point: ord(P) = j - table[R] (= j, since R
            # first repeats at the identity).
            order = j - table[R]
            first = lo + (-lo) % order
            return list(range(first, lo + width, order))
        table[R] = j
        R = _add(p, a, R, P)
    hits = []
    base = _mul(p, a, lo, P)
    stride = _mul(p, a, m, P)
    G = base
    i = 0
    while i * m < width:
        # [lo + i*m + j]P = O  <=>  [j]P = -G
        negG = (G[0], (-G[1]) % p) if G[0] is not None else G
        j = table.get(negG)
        if j is not None and i * m + j < width:
            hits.append(lo + i * m + j)
        G = _add(p, a, G, stride)
        i += 1
    return hits


def _order_candidates(curve: FpCurve, lo: int, width: int, max_points: int = 24):
    cands: set[int] | None = None
    tried = 0
    x = 0
    while tried < max_points and x < curve.p:
        P = point_at_x(curve, x)
        x += 1
        if P is None:
            continue
        tried += 1
        hits = set(_kill_values(curve, (P.x, P.y), lo, width))
        cands = hits if cands is None else cands & hits
        if cands is not None and len(cands) <= 1:
            break
    return cands if cands is not None else set()


def _twist(curve: FpCurve) -> FpCurve:
    p = curve.p
    g = 2
    while kronecker_symbol(g, p) != -1:
        g += 1
    return FpCurve(p, curve.a * g * g % p, curve.b * g**3 % p)


def count_points_bsgs(curve: FpCurve) -> int:
    """|E(F_p)| by BSGS order finding over the Hasse interval.

    Ambiguities are first resolved against the quadratic twist (the two
    orders sum to 2p + 2); if a unique order still cannot be certified the
    naive sweep decides.
    """
    p = curve.p
    s = isqrt(4 * p)
    lo = p + 1 - s
    width = 2 * s + 1
    cands = _order_candidates(curve, lo, width)
    if len(cands) == 1:
        return cands.pop()
    twist_cands = _order_candidates(_twist(curve), lo, width)
    pairs = [n for n in cands if 2 * p + 2 - n in twist_cands]
    if len(pairs) == 1:
        return pairs[0]
    return count_points_naive(curve)


def count_points(curve: FpCurve) -> int:
    """Exact group order |E(F_p)| including the identity."""
    if curve.p <= _NAIVE_LIMIT:
        return count_points_naive(curve)
    if curve.p <= _BSGS_LIMIT:
        return count_points_bsgs(curve)
    raise UnsupportedModulusError(f"point counting supports p <= 2^40, got {curve.p}")


def trace_of_frobenius(curve: FpCurve) -> int:
    """a_p = p + 1 - |E(F_p)|, bounded by 2*sqrt(p)."""
    return curve.p + 1 - count_points(curve)


def is_anomalous(curve: FpCurve) -> bool:
    """True iff |E(F_p)| = p, i.e. a_p = 1."""
    return count_points(curve) == curve.p


class OrdinaryClass(enum.Enum):
    ORDINARY = "ordinary"
    SUPERSINGULAR = "supersingular"


def ordinary_class(curve: FpCurve) -> OrdinaryClass:
    """Ordinary iff a_p is nonzero mod p; for p >= 5 this is a_p != 0."""
    ap = trace_of_frobenius(curve)
    return OrdinaryClass.SUPERSINGULAR if ap % curve.p == 0 else OrdinaryClass.ORDINARY
