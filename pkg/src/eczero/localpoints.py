"""Local machinery at a good anomalous prime: the kernel-of-reduction
filtration E_1 of E(Q_p), p-torsion lifting, and the decomposition of a
global point into a formal part and a special-fiber part.

The decomposition of P works on a model that is minimal and anomalous at p:
the reduction barP of P is lifted to the unique Q_p-rational p-torsion
point T0 above it, and F = P - T0 lands in the kernel of reduction.  The
valuation of the formal parameter t = -x/y of F (1 versus >= 2) is the
decision bit consumed by the verdict layer.

Torsion lifting runs Newton iteration against the degree-(p^2-1)/2 division
polynomial, evaluated pointwise with derivatives (never expanded).  The
x-coordinate of T0 is a p-fold root of that polynomial mod p, so the
classical simple-root Hensel criterion is unavailable; instead the
iteration exploits that the Newton quotient is a genuine element of Q_p
(integer valuation), which restores quadratic convergence from the mod-p
approximation, and monitors the valuation of f at every step.  A stall
means no Q_p-rational lift exists and is reported as a violation of the
torsion-splitting hypothesis.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    DomainError,
    InternalConsistencyError,
    PrecisionExhaustedError,
    SplitHypothesisError,
)
from .fp import FpCurve, FpPoint, count_points
from .padic import DEFAULT_PRECISION, PadicNumber, pval
from .rational import (
    Curve,
    QPoint,
    _minimal_with_scale,
    divpoly_eval_with_derivative,
    q_scalar_mul,
)

_NEWTON_GUARD = 12
_RETRY_FACTOR = 2
_TORSION_BOUND = 12  # Mazur: rational torsion orders divide 10 or 12
MIN_LIFT_PRECISION = 6


@dataclass(frozen=True)
class QpPoint:
    """Point on E over Q_p with fixed-precision coordinates, or the identity."""

    x: PadicNumber | None
    y: PadicNumber | None

    @classmethod
    def identity(cls) -> "QpPoint":
        return cls(None, None)

    @property
    def is_identity(self) -> bool:
        return self.x is None

    def __str__(self):
        return "O" if self.is_identity else f"({self.x}, {self.y})"


def embed_point(curve: Curve, point: QPoint, p: int, precision: int = DEFAULT_PRECISION) -> QpPoint:
    """Image of a rational point in E(Q_p) at the given relative precision."""
    if point.is_identity:
        return QpPoint.identity()
    if not curve.contains(point):
        raise DomainError(f"{point} is not on {curve}")
    return QpPoint(
        PadicNumber.from_fraction(point.x, p, precision),
        PadicNumber.from_fraction(point.y, p, precision),
    )


def on_curve(curve: Curve, point: QpPoint) -> bool:
    """Check y^2 = x^3 + ax + b at the precision the coordinates carry."""
    if point.is_identity:
        return True
    x, y = point.x, point.y
    return (y * y - (x * x * x + x * curve.a + curve.b)).is_zero


def qp_neg(point: QpPoint) -> QpPoint:
    if point.is_identity:
        return point
    return QpPoint(point.x, -point.y)


def qp_add(curve: Curve, P: QpPoint, Q: QpPoint) -> QpPoint:
    """Chord-tangent addition with precision-aware equality decisions."""
    if P.is_identity:
        return Q
    if Q.is_identity:
        return P
    dx = Q.x - P.x
    if dx.is_zero:
        dy = Q.y - P.y
        if not dy.is_zero:
            s = Q.y + P.y
            if s.is_zero:
                return QpPoint.identity()
            raise PrecisionExhaustedError(
                "x-coordinates collide at precision but y-coordinates resolve neither"
            )
        # same point at precision: tangent line
        if P.y.is_zero:
            return QpPoint.identity()
        lam = (P.x * P.x * 3 + curve.a) / (P.y * 2)
    else:
        lam = (Q.y - P.y) / dx
    x3 = lam * lam - P.x - Q.x
    y3 = lam * (P.x - x3) - P.y
    return QpPoint(x3, y3)


def qp_scalar_mul(curve: Curve, k: int, P: QpPoint) -> QpPoint:
    if k < 0:
        return qp_scalar_mul(curve, -k, qp_neg(P))
    R = QpPoint.identity()
    Q = P
    while k:
        if k & 1:
            R = qp_add(curve, R, Q)
        Q = qp_add(curve, Q, Q)
        k >>= 1
    return R


def reduce_point(curve: Curve, point: QpPoint, p: int) -> FpPoint:
    """Reduction map E(Q_p) -> E(F_p) for a model with good reduction at p.

    Points with negative coordinate valuations lie in the kernel of
    reduction and map to the identity; on a good model those valuations can
    only be (-2m, -3m).
    """
    if point.is_identity:
        return FpPoint.identity()
    vx = point.x.valuation if not point.x.is_zero else 0
    vy = point.y.valuation if not point.y.is_zero else 0
    if vx < 0 or vy < 0:
        if point.x.is_zero or point.y.is_zero:
            raise PrecisionExhaustedError("cannot classify a coordinate indistinguishable from 0")
        if vx >= 0 or vy >= 0 or vx % 2 != 0 or 3 * vx != 2 * vy:
            raise InternalConsistencyError(
                f"impossible coordinate valuations ({vx}, {vy}) on a good model"
            )
        return FpPoint.identity()
    return FpPoint(point.x.residue_mod(1), point.y.residue_mod(1))


def t_parameter(curve: Curve, point: QpPoint, p: int) -> PadicNumber:
    """Formal-group parameter t = -x/y of a point in the kernel of reduction.

    Its valuation m >= 1 locates the layer E_m \\ E_{m+1}.
    """
    if point.is_identity:
        raise DomainError("the identity has no formal parameter")
    if not reduce_point(curve, point, p).is_identity:
        raise DomainError("point is not in the kernel of reduction")
    t = -(point.x / point.y)
    if t.is_zero or t.valuation < 1:
        raise InternalConsistencyError("formal parameter must have valuation >= 1")
    return t


def formal_layer_point(curve: Curve, p: int, layer: int = 1, precision: int = DEFAULT_PRECISION) -> QpPoint:
    """A point of E(Q_p) with t-valuation exactly `layer` (deep in E_1).

    Takes x = p^(-2*layer) and solves for y; on a good model the right-hand
    side is p^(-6*layer) times a 1-unit, so the square root is a plain
    Hensel lift from 1.
    """
    if layer < 1:
        raise DomainError("layer must be >= 1")
    m = layer
    work = precision + 6 * m + 2
    mod = p**work
    # y = p^(-3m) * sqrt(u), u = 1 + a p^(4m) + b p^(6m)
    u = (1 + curve.a * p ** (4 * m) + curve.b * p ** (6 * m)) % mod
    y_unit = _sqrt_one_unit(u, p, work)
    x = PadicNumber.from_fraction(Fraction(1, p ** (2 * m)), p, precision + 2)
    y = PadicNumber(p, -3 * m, y_unit % p ** (precision + 2), precision + 2)
    point = QpPoint(x, y)
    if not on_curve(curve, point):
        raise InternalConsistencyError("formal layer point failed the curve equation")
    return point


def _sqrt_one_unit(u: int, p: int, k: int) -> int:
    # Newton square root of a 1-unit modulo p^k, starting from 1 (p odd)
    if u % p != 1:
        raise InternalConsistencyError("expected a 1-unit")
    y = 1
    reach = 1
    while reach < k:
        reach = min(2 * reach, k)
        mod = p**reach
        y = (y + u * pow(y, -1, mod)) * pow(2, -1, mod) % mod
    return y


def _sqrt_matching(g: int, y0: int, p: int, k: int) -> int:
    # square root of g mod p^k congruent to y0 mod p (g a unit square, p odd)
    if y0 % p == 0 or (y0 * y0 - g) % p != 0:
        raise InternalConsistencyError("bad square-root seed")
    y = y0 % p
    reach = 1
    while reach < k:
        reach = min(2 * reach, k)
        mod = p**reach
        y = (y + g * pow(y, -1, mod)) * pow(2, -1, mod) % mod
    return y


def _require_anomalous(curve: Curve, p: int) -> FpCurve:
    if curve.discriminant % p == 0:
        raise DomainError(f"model has bad reduction at {p}")
    reduced = FpCurve(p, curve.a % p, curve.b % p)
    if count_points(reduced) != p:
        raise DomainError(f"reduction at {p} is not anomalous")
    return reduced


def lift_p_torsion(curve: Curve, p: int, target: FpPoint, precision: int = DEFAULT_PRECISION) -> QpPoint:
    """The p-torsion point T0 of E(Q_p) reducing to `target`.

    Requires an anomalous good model at p and a nonzero target.  Raises
    SplitHypothesisError when the Newton iteration on the division
    polynomial stalls, i.e. when no Q_p-rational lift exists.
    """
    if precision < MIN_LIFT_PRECISION:
        raise DomainError(f"torsion lifting needs precision >= {MIN_LIFT_PRECISION}")
    reduced = _require_anomalous(curve, p)
    if target.is_identity:
        raise DomainError("target must be a nonzero special-fiber point")
    if not reduced.contains(target):
        raise DomainError(f"{target} is not on the reduction of {curve} mod {p}")

    work = precision + _NEWTON_GUARD
    mod = p**work
    x = target.x % p
    prev_vf = 0
    max_steps = precision.bit_length() + 8
    for _ in range(max_steps):
        fv, fd = divpoly_eval_with_derivative(curve, p, x, mod)
        vf = pval(fv, p, cap=work)
        if vf >= precision + 1:
            break
        vd = pval(fd, p, cap=work)
        if vd >= vf or vf <= prev_vf:
            raise SplitHypothesisError(
                f"no {p}-adic torsion lift above x = {target.x}: "
                "division-polynomial Newton iteration stalled"
            )
        prev_vf = vf
        scale = p**vd
        inv = pow(fd // scale, -1, p ** (work - vd))
        x = (x - (fv // scale) * inv) % mod
    else:
        raise SplitHypothesisError(
            f"torsion lift above x = {target.x} did not converge in {max_steps} steps"
        )

    g = (x * x % mod * x + curve.a * x + curve.b) % mod
    y = _sqrt_matching(g, target.y, p, work)
    point = QpPoint(
        _integral_padic(x, p, precision),
        _integral_padic(y, p, precision),
    )
    if reduce_point(curve, point, p) != target:
        raise InternalConsistencyError("torsion lift does not reduce to its target")
    if not qp_scalar_mul(curve, p, point).is_identity:
        raise SplitHypothesisError("candidate torsion lift is not annihilated by p")
    return point


def _integral_padic(residue: int, p: int, abs_prec: int) -> PadicNumber:
    residue %= p**abs_prec
    if residue == 0:
        return PadicNumber.zero(p, abs_prec)
    v = pval(residue, p)
    return PadicNumber(p, v, (residue // p**v) % p ** (abs_prec - v), abs_prec - v)


@dataclass(frozen=True)
class Decomposition:
    """P = F + T0 with F in the kernel of reduction and [p]T0 = O.

    ``t_valuation`` is the valuation of the formal parameter of F (None
    encodes F = O, which the infinite-order precondition rules out), and
    ``formal_nontrivial`` is the t_valuation == 1 criterion.
    """

    p: int
    bar_point: FpPoint
    torsion: QpPoint
    formal: QpPoint
    t_valuation: int | None
    formal_nontrivial: bool
    precision: int


def decompose_point(curve: Curve, point: QPoint, p: int, precision: int = DEFAULT_PRECISION) -> Decomposition:
    """Split a global infinite-order point locally at an anomalous prime.

    On PrecisionExhaustedError the computation is retried once at doubled
    precision; a second failure propagates.
    """
    try:
        return _decompose(curve, point, p, precision)
    except PrecisionExhaustedError:
        return _decompose(curve, point, p, _RETRY_FACTOR * precision)


def _decompose(curve: Curve, point: QPoint, p: int, precision: int) -> Decomposition:
    minimal, scale = _minimal_with_scale(curve, p)
    _require_anomalous(minimal, p)
    if point.is_identity:
        raise DomainError("decomposition needs a nonzero global point")
    if scale:
        u2 = Fraction(1, p ** (2 * scale))
        point = QPoint(point.x * u2, point.y * u2 / p**scale)
    if not minimal.contains(point):
        raise DomainError(f"{point} is not on {minimal}")
    for m in range(1, _TORSION_BOUND + 1):
        if q_scalar_mul(minimal, m, point).is_identity:
            raise DomainError(f"point has finite order {m}; decomposition needs infinite order")

    work = precision + 8
    P = embed_point(minimal, point, p, work)
    bar = reduce_point(minimal, P, p)
    if bar.is_identity:
        torsion = QpPoint.identity()
        formal = P
    else:
        torsion = lift_p_torsion(minimal, p, bar, precision + 4)
        formal = qp_add(minimal, P, qp_neg(torsion))
    if formal.is_identity:
        raise PrecisionExhaustedError("formal component vanished at working precision")
    if not reduce_point(minimal, formal, p).is_identity:
        raise InternalConsistencyError("formal component does not reduce to the identity")
    tval = t_parameter(minimal, formal, p).valuation
    return Decomposition(
        p=p,
        bar_point=bar,
        torsion=torsion,
        formal=formal,
        t_valuation=tval,
        formal_nontrivial=(tval == 1),
        precision=precision,
    )


# --- serialization helpers (CLI / survey reports) --------------------------


def padic_to_dict(z: PadicNumber) -> dict:
    if z.is_zero:
        return {"zero": True, "abs_precision": z.abs_precision}
    return {"valuation": z.valuation, "digits": z.digits(), "precision": z.precision}


def qppoint_to_dict(point: QpPoint) -> dict:
    if point.is_identity:
        return {"identity": True}
    return {"x": padic_to_dict(point.x), "y": padic_to_dict(point.y)}


def decomposition_to_dict(dec: Decomposition) -> dict:
    bar = (
        {"identity": True}
        if dec.bar_point.is_identity
        else {"x": dec.bar_point.x, "y": dec.bar_point.y}
    )
    return {
        "p": dec.p,
        "bar_point": bar,
        "torsion": qppoint_to_dict(dec.torsion),
        "formal": qppoint_to_dict(dec.formal),
        "t_valuation": dec.t_valuation,
        "formal_nontrivial": dec.formal_nontrivial,
        "precision": dec.precision,
    }
