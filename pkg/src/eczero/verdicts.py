"""Hypothesis-checked decision rules with citations.

Each rule inspects a record of named facts, every fact carrying its
provenance: "verified" means this package computed it, "asserted" means
the caller supplied it (Galois-theoretic inputs beyond desk-scale
computation), "derived" means it follows mechanically from an asserted
fact.  Rules fire only when every required fact is present and favorable;
a silent None/empty result is *not* a refutation, the implemented results
are one-directional.

Every emitted Verdict names its conclusion, quotes a fixed citation string
keyed by the conclusion, and lists exactly the hypotheses it consumed.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .arith import is_prime
from .errors import DomainError
from .localpoints import Decomposition
from .quadfields import ImagQuadField, splits_completely
from .rational import Curve, ReductionKind, ReductionType, minimal_at_p, reduction_type

VERIFIED = "verified"
ASSERTED = "asserted"
DERIVED = "derived"


@dataclass(frozen=True)
class Fact:
    value: object
    provenance: str

    def __post_init__(self):
        if self.provenance not in (VERIFIED, ASSERTED, DERIVED):
            raise DomainError(f"unknown provenance {self.provenance!r}")


def verified(value) -> Fact:
    return Fact(value, VERIFIED)


def asserted(value) -> Fact:
    return Fact(value, ASSERTED)


class Conclusion(enum.Enum):
    DIVISIBLE = "Divisible"
    ND_IS_Z_MOD_PN = "NdIsZmodPn"
    MIDDLE_TERM_ZP_SQUARED = "MiddleTermZpSquared"
    BRAUER_P_VANISHES = "BrauerPVanishes"
    UNCONDITIONAL_EXACTNESS = "UnconditionalExactness"
    QUARTIC_ND_2_PRIMARY = "QuarticNd2Primary"


CITATIONS: dict[Conclusion, str] = {
    Conclusion.DIVISIBLE: (
        "divisibility rule: over an unramified base with odd residue "
        "characteristic, good ordinary or almost-ordinary product reduction "
        "makes the degree-zero cycle class group divisible"
    ),
    Conclusion.ND_IS_Z_MOD_PN: (
        "non-divisible structure rule: good ordinary self-pairs with full "
        "p^n-torsion, wildly ramified next torsion layer and trivial "
        "Neron-Severi action have non-divisible part Z/p^n away from 2"
    ),
    Conclusion.MIDDLE_TERM_ZP_SQUARED: (
        "anomalous split-prime rule: for a CM curve with anomalous good "
        "reduction at a split p >= 5, the local middle term over the "
        "degree-(p-1) ramified extension is (Z/p)^2"
    ),
    Conclusion.BRAUER_P_VANISHES: (
        "anomalous split-prime rule: under the same hypotheses the p-primary "
        "transcendental Brauer quotient of the Kummer surface vanishes"
    ),
    Conclusion.UNCONDITIONAL_EXACTNESS: (
        "global lifting rule: a nontrivial formal component of an "
        "infinite-order global point lifts the (Z/p)^2 middle term, making "
        "the degree-zero complex exact with no rational-point assumptions"
    ),
    Conclusion.QUARTIC_ND_2_PRIMARY: (
        "diagonal quartic rule: for p = 1 mod 4 prime to the quartic model, "
        "the non-divisible part over an unramified base is 2-primary"
    ),
}


@dataclass(frozen=True)
class Verdict:
    conclusion: Conclusion
    citation: str
    hypotheses_used: tuple[str, ...]
    level: int | None = None
    conditional: bool = False

    @property
    def name(self) -> str:
        if self.conclusion is Conclusion.ND_IS_Z_MOD_PN:
            return f"{self.conclusion.value}({self.level})"
        return self.conclusion.value

    def to_dict(self) -> dict:
        return {
            "conclusion": self.name,
            "citation": self.citation,
            "hypotheses": list(self.hypotheses_used),
            "conditional": self.conditional,
        }


def _verdict(conclusion: Conclusion, used: list[tuple[str, str]], level: int | None = None) -> Verdict:
    return Verdict(
        conclusion=conclusion,
        citation=CITATIONS[conclusion],
        hypotheses_used=tuple(f"{name} ({prov})" for name, prov in used),
        level=level,
        conditional=any(prov != VERIFIED for _, prov in used),
    )


@dataclass(frozen=True)
class HypothesisRecord:
    """Named facts a verdict rule may consume; None marks an absent fact."""

    prime: Fact | None = None
    base_unramified: Fact | None = None
    e1_reduction: Fact | None = None
    e2_reduction: Fact | None = None
    anomalous: Fact | None = None
    cm_disc: Fact | None = None
    torsion_level: Fact | None = None
    wild_ramification: Fact | None = None
    trivial_ns_action: Fact | None = None
    surface_good_reduction: Fact | None = None

    @classmethod
    def for_pair(
        cls,
        e1: Curve,
        e2: Curve,
        p: int,
        *,
        base_unramified: bool | None = None,
        cm_disc: int | None = None,
        torsion_level: int | None = None,
        wild_ramification: bool | None = None,
        trivial_ns_action: bool | None = None,
        surface_good_reduction: bool | None = None,
    ) -> "HypothesisRecord":
        """Verify the computable facts for a pair of curves, assert the rest."""
        if not is_prime(p):
            raise DomainError(f"{p} is not prime")
        r1 = reduction_type(e1, p) if p >= 5 else None
        r2 = reduction_type(e2, p) if p >= 5 else None
        return cls(
            prime=verified(p),
            base_unramified=None if base_unramified is None else asserted(base_unramified),
            e1_reduction=None if r1 is None else verified(r1),
            e2_reduction=None if r2 is None else verified(r2),
            anomalous=None if r1 is None else verified(r1.anomalous),
            cm_disc=None if cm_disc is None else asserted(cm_disc),
            torsion_level=None if torsion_level is None else asserted(torsion_level),
            wild_ramification=None if wild_ramification is None else asserted(wild_ramification),
            trivial_ns_action=None if trivial_ns_action is None else asserted(trivial_ns_action),
            surface_good_reduction=None
            if surface_good_reduction is None
            else asserted(surface_good_reduction),
        )


def _pair_ordinary_or_almost(r1: ReductionType, r2: ReductionType) -> bool:
    if not (r1.kind.is_good and r2.kind.is_good):
        return False
    supersingular = sum(
        1 for r in (r1, r2) if r.kind is ReductionKind.GOOD_SUPERSINGULAR
    )
    return supersingular <= 1


def divisibility_verdict(h: HypothesisRecord) -> Verdict | None:
    """Divisible cycle classes for good ordinary/almost-ordinary products."""
    if h.prime is None or h.base_unramified is None or h.e1_reduction is None or h.e2_reduction is None:
        return None
    if h.prime.value <= 2 or not h.base_unramified.value:
        return None
    if not _pair_ordinary_or_almost(h.e1_reduction.value, h.e2_reduction.value):
        return None
    used = [
        (f"p = {h.prime.value} odd", h.prime.provenance),
        ("base field unramified", h.base_unramified.provenance),
        (f"E1 reduction {h.e1_reduction.value}", h.e1_reduction.provenance),
        (f"E2 reduction {h.e2_reduction.value}", h.e2_reduction.provenance),
    ]
    return _verdict(Conclusion.DIVISIBLE, used)


def nd_structure_verdict(h: HypothesisRecord) -> Verdict | None:
    """Z/p^n structure of the non-divisible part for good ordinary pairs."""
    needed = (
        h.prime,
        h.e1_reduction,
        h.e2_reduction,
        h.torsion_level,
        h.wild_ramification,
        h.trivial_ns_action,
    )
    if any(f is None for f in needed):
        return None
    if h.prime.value <= 2:
        return None
    if h.e1_reduction.value.kind is not ReductionKind.GOOD_ORDINARY:
        return None
    if h.e2_reduction.value.kind is not ReductionKind.GOOD_ORDINARY:
        return None
    n = h.torsion_level.value
    if n < 1 or not h.wild_ramification.value or not h.trivial_ns_action.value:
        return None
    used = [
        (f"p = {h.prime.value} odd", h.prime.provenance),
        ("E1 good ordinary", h.e1_reduction.provenance),
        ("E2 good ordinary", h.e2_reduction.provenance),
        (f"full p^{n}-torsion over the base", h.torsion_level.provenance),
        ("wild ramification of the next torsion layer", h.wild_ramification.provenance),
        ("trivial Neron-Severi Galois action", h.trivial_ns_action.provenance),
    ]
    return _verdict(Conclusion.ND_IS_Z_MOD_PN, used, level=n)


def cm_tower_verdict(curve: Curve, cm_field: ImagQuadField, p: int, n: int) -> Verdict | None:
    """Z/p^n over the p^n-torsion tower field of a CM self-product.

    CM by the full ring of integers is the caller's assertion; good
    ordinary reduction is verified by counting, and triviality of the
    Neron-Severi action is derived from the CM assertion.
    """
    if n < 1:
        raise DomainError("tower level n must be >= 1")
    if p < 5 or not is_prime(p):
        return None
    r = reduction_type(curve, p)
    if r.kind is not ReductionKind.GOOD_ORDINARY:
        return None
    used = [
        (f"p = {p} odd", VERIFIED),
        (f"CM by the full ring of integers of {cm_field}", ASSERTED),
        (f"good ordinary reduction at {p} (trace {r.trace})", VERIFIED),
        ("trivial Neron-Severi Galois action", DERIVED),
        (f"base extended to the p^{n}-torsion tower field", ASSERTED),
    ]
    return _verdict(Conclusion.ND_IS_Z_MOD_PN, used, level=n)


def brauer_middle_term_verdict(
    curve: Curve, cm_field: ImagQuadField, p: int, cm_asserted: bool = False
) -> list[Verdict]:
    """The (Z/p)^2 middle term and Brauer vanishing at an anomalous split prime.

    Machine-verified: p >= 5 prime, p splits in the CM field, the model is
    good at p (p does not divide the minimal discriminant, standing in for
    conductor coprimality) and the reduction is anomalous.  The CM
    hypothesis itself must be asserted by the caller.
    """
    if not cm_asserted:
        return []
    if p < 5 or not is_prime(p):
        return []
    if not splits_completely(cm_field, p):
        return []
    minimal = minimal_at_p(curve, p)
    if minimal.discriminant % p == 0:
        return []
    r = reduction_type(curve, p)
    if not r.anomalous:
        return []
    used = [
        (f"p = {p} >= 5 prime", VERIFIED),
        (f"{p} splits completely in {cm_field}", VERIFIED),
        (f"good reduction at {p} (p coprime to the minimal discriminant)", VERIFIED),
        (f"anomalous reduction: |E(F_{p})| = {p}", VERIFIED),
        (f"CM by the full ring of integers of {cm_field}", ASSERTED),
    ]
    return [
        _verdict(Conclusion.MIDDLE_TERM_ZP_SQUARED, used),
        _verdict(Conclusion.BRAUER_P_VANISHES, used),
    ]


def global_lift_verdict(dec: Decomposition | None, prior: Verdict | None) -> Verdict | None:
    """Unconditional exactness from a nontrivial formal component.

    One-directional: a trivial formal component yields no conclusion.
    """
    if dec is None or prior is None:
        return None
    if prior.conclusion is not Conclusion.MIDDLE_TERM_ZP_SQUARED:
        return None
    if not dec.formal_nontrivial:
        return None
    used = [
        ("middle term (Z/p)^2 established", VERIFIED),
        ("global point of infinite order", ASSERTED),
        (f"formal component nontrivial (t-valuation {dec.t_valuation})", VERIFIED),
    ]
    return _verdict(Conclusion.UNCONDITIONAL_EXACTNESS, used)


_QUARTIC_CURVE = Curve(-4, 0)
# discriminant of the genus-one quartic model (x^2 - 1)(2x^2 - 1); a 2-power,
# so the coprimality test below is vacuous for every odd p, but it is checked
# rather than assumed
_QUARTIC_MODEL_DISC = 32


def quartic_verdict(p: int, flags: HypothesisRecord) -> list[Verdict]:
    """Diagonal-quartic conclusions at p = 1 mod 4.

    Emits the 2-primary bound whenever p = 1 (mod 4) is coprime to the
    quartic models and the base is unramified; adds Divisible when good
    reduction of the surface is additionally asserted.
    """
    if flags.base_unramified is None or not flags.base_unramified.value:
        return []
    if not is_prime(p) or p % 4 != 1 or p < 5:
        return []
    if _QUARTIC_CURVE.discriminant % p == 0 or _QUARTIC_MODEL_DISC % p == 0:
        return []
    used = [
        (f"p = {p} = 1 (mod 4)", VERIFIED),
        ("p coprime to the quartic and its Jacobian model", VERIFIED),
        ("base field unramified", flags.base_unramified.provenance),
    ]
    out = [_verdict(Conclusion.QUARTIC_ND_2_PRIMARY, used)]
    if flags.surface_good_reduction is not None and flags.surface_good_reduction.value:
        used_div = used + [
            ("good reduction of the quartic surface", flags.surface_good_reduction.provenance)
        ]
        out.append(_verdict(Conclusion.DIVISIBLE, used_div))
    return out


@dataclass(frozen=True)
class AdmissibilityConfig:
    isogeny_degree: int = 1
    field_degree: int = 1
    bad_fiber_orders: tuple[int, ...] = field(default_factory=tuple)

    @property
    def m_constant(self) -> int:
        m = 6
        for n in self.bad_fiber_orders:
            m *= n
        return m


@dataclass(frozen=True)
class AdmissibilityResult:
    admissible: bool
    reasons: tuple[str, ...]

    def to_dict(self) -> dict:
        return {"admissible": self.admissible, "reasons": list(self.reasons)}


def prime_admissibility(
    e1: Curve, e2: Curve, p: int, config: AdmissibilityConfig = AdmissibilityConfig()
) -> AdmissibilityResult:
    """Three-condition filter for primes entering the local-to-global set.

    1: p coprime to 2 * isogeny degree * field degree, with good reduction
    of both curves above p; 2: good ordinary or almost-ordinary pair;
    3: p coprime to M = 6 * product of the asserted bad-fiber orders.
    """
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    reasons: list[str] = []
    ok = True

    deg_product = 2 * config.isogeny_degree * config.field_degree
    if p > 0 and deg_product % p == 0:
        reasons.append(f"condition 1: fail (p divides 2*deg(phi)*[K:F] = {deg_product})")
        ok = False
        good_known = False
    elif p < 5:
        reasons.append("condition 1: fail (reduction types undetermined for p < 5)")
        ok = False
        good_known = False
    else:
        r1, r2 = reduction_type(e1, p), reduction_type(e2, p)
        good_known = True
        if r1.kind.is_good and r2.kind.is_good:
            reasons.append(
                f"condition 1: pass (p coprime to {deg_product}; good reduction of both curves)"
            )
        else:
            reasons.append(f"condition 1: fail (reduction at {p}: E1 {r1}, E2 {r2})")
            ok = False

    if good_known and ok:
        if _pair_ordinary_or_almost(r1, r2):
            reasons.append("condition 2: pass (good ordinary or almost-ordinary pair)")
        else:
            reasons.append("condition 2: fail (both factors supersingular)")
            ok = False
    elif not good_known:
        reasons.append("condition 2: not evaluated")
    else:
        reasons.append("condition 2: fail (good reduction required first)")

    m = config.m_constant
    if m % p == 0:
        reasons.append(f"condition 3: fail (p divides M = {m})")
        ok = False
    else:
        reasons.append(f"condition 3: pass (p coprime to M = {m})")

    return AdmissibilityResult(admissible=ok, reasons=tuple(reasons))
