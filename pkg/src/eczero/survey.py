"""Batch pipeline over curve families: ingest, hypothesis checks, generator
search, decomposition, verdicts, and deterministic CSV/JSON reports.

Rank is never computed here.  The aggregate statistic is the fraction of
*curves with a certified infinite-order point* whose formal component is
nontrivial; replicating any externally published rank-filtered statistic
requires ingesting that external generator/rank data, and every report
says so in its aggregate note.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .errors import DomainError, IngestError
from .localpoints import decompose_point
from .quadfields import ImagQuadField, splits_completely
from .rational import (
    Curve,
    QPoint,
    curve_from_long_weierstrass,
    long_point_to_short,
    naive_point_search,
    q_scalar_mul,
    reduction_type,
)
from .verdicts import brauer_middle_term_verdict, global_lift_verdict

DEFAULT_HEIGHT = 10**4
_TORSION_BOUND = 12

PROXY_NOTE = (
    "statistic counts curves with a certified infinite-order point found by "
    "bounded search; it is not a rank-filtered statistic and externally "
    "computed rank/generator data must be ingested to replicate one"
)

CSV_HEADER = "n,label,good7,anomalous,splits,generator,formal_nontrivial,verdicts"


@dataclass(frozen=True)
class FamilySpec:
    """Integer-linear family y^2 = x^3 + (a0 + a1 n) x + (b0 + b1 n)."""

    a_const: int
    a_slope: int
    b_const: int
    b_slope: int
    n_min: int
    n_max: int
    p: int
    disc: int
    height: int = DEFAULT_HEIGHT
    precision: int = 16
    generators: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.n_min > self.n_max:
            raise DomainError("empty parameter range")
        if self.p < 5:
            raise DomainError("survey prime must be >= 5")

    def curve(self, n: int) -> Curve:
        return Curve(
            self.a_const + self.a_slope * n,
            self.b_const + self.b_slope * n,
            label=f"n={n}",
        )


@dataclass(frozen=True)
class SurveyRow:
    n: int | None
    label: str
    good_p: bool | None = None
    anomalous: bool | None = None
    splits: bool | None = None
    generator_status: str = "unknown"  # found | ingested | unknown
    generator: QPoint | None = None
    formal_nontrivial: bool | None = None  # None = not run
    t_valuation: int | None = None
    verdicts: tuple = ()
    error: str | None = None
    curve_a: int | None = None
    curve_b: int | None = None

    def to_dict(self) -> dict:
        gen = None
        if self.generator is not None and not self.generator.is_identity:
            gen = [
                self.generator.x.numerator,
                self.generator.x.denominator,
                self.generator.y.numerator,
                self.generator.y.denominator,
            ]
        return {
            "n": self.n,
            "label": self.label,
            "A": self.curve_a,
            "B": self.curve_b,
            "good_p": self.good_p,
            "anomalous": self.anomalous,
            "splits": self.splits,
            "generator": self.generator_status,
            "gen": gen,
            "formal_nontrivial": self.formal_nontrivial,
            "t_valuation": self.t_valuation,
            "verdicts": list(self.verdicts),
            "error": self.error,
        }


@dataclass(frozen=True)
class IngestRecord:
    label: str
    curve: Curve
    generator: QPoint | None
    rank: int | None
    source: str | None
    provenance: str = "ingested"


@dataclass(frozen=True)
class IngestResult:
    records: tuple
    rejected: tuple  # (line number, reason)


def _parse_generator(curve: Curve, raw) -> QPoint:
    if not (isinstance(raw, list) and len(raw) == 4 and all(isinstance(t, int) for t in raw)):
        raise IngestError("gen must be [x_num, x_den, y_num, y_den] with integer entries")
    xn, xd, yn, yd = raw
    if xd <= 0 or yd <= 0:
        raise IngestError("gen denominators must be positive")
    point = QPoint(Fraction(xn, xd), Fraction(yn, yd))
    if not curve.contains(point):
        raise IngestError(f"generator {point} is not on the curve")
    return point


def ingest_curves(path) -> IngestResult:
    """Parse a line-delimited curve file; invalid rows are reported, not fatal.

    Each line is a JSON object with label, A/B or a1..a6, and optional
    gen = [x_num, x_den, y_num, y_den], rank, source.
    """
    records = []
    rejected = []
    text = Path(path).read_text()
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            rejected.append((lineno, f"parse error: {exc.msg} at column {exc.colno}"))
            continue
        try:
            if not isinstance(obj, dict):
                raise IngestError("record must be a JSON object")
            label = str(obj.get("label", f"line{lineno}"))
            if "A" in obj and "B" in obj:
                if not isinstance(obj["A"], int) or not isinstance(obj["B"], int):
                    raise IngestError("A and B must be integers")
                curve = Curve(obj["A"], obj["B"], label=label)
                gen = _parse_generator(curve, obj["gen"]) if obj.get("gen") is not None else None
            elif all(f"a{i}" in obj for i in (1, 2, 3, 4, 6)):
                ai = [obj[f"a{i}"] for i in (1, 2, 3, 4, 6)]
                if not all(isinstance(t, int) for t in ai):
                    raise IngestError("a1..a6 must be integers")
                curve = curve_from_long_weierstrass(ai, label=label)
                gen = None
                if obj.get("gen") is not None:
                    raw = obj["gen"]
                    if not (isinstance(raw, list) and len(raw) == 4):
                        raise IngestError("gen must be [x_num, x_den, y_num, y_den]")
                    long_pt = long_point_to_short(
                        ai, Fraction(raw[0], raw[1]), Fraction(raw[2], raw[3])
                    )
                    if not curve.contains(long_pt):
                        raise IngestError(f"generator {long_pt} is not on the curve")
                    gen = long_pt
            else:
                raise IngestError("record needs A,B or a1..a6")
            rank = obj.get("rank")
            if rank is not None and not isinstance(rank, int):
                raise IngestError("rank must be an integer")
            records.append(
                IngestRecord(
                    label=label,
                    curve=curve,
                    generator=gen,
                    rank=rank,
                    source=obj.get("source"),
                )
            )
        except (IngestError, DomainError) as exc:
            rejected.append((lineno, str(exc)))
    return IngestResult(records=tuple(records), rejected=tuple(rejected))


def find_generator(curve: Curve, height: int) -> QPoint | None:
    """Smallest-height infinite-order point from the bounded search, if any.

    Non-torsion certification: no multiple [m]P with m <= 12 is the
    identity (larger rational torsion orders do not occur).
    """
    for P in naive_point_search(curve, height):
        if not any(q_scalar_mul(curve, m, P).is_identity for m in range(1, _TORSION_BOUND + 1)):
            return P
    return None


def build_row(
    curve: Curve,
    p: int,
    cm_field: ImagQuadField,
    height: int,
    n: int | None = None,
    label: str | None = None,
    ingested_generator: QPoint | None = None,
    precision: int = 16,
) -> SurveyRow:
    """Hypotheses, generator, decomposition and verdicts for one curve."""
    label = label or curve.label or "?"
    base = dict(n=n, label=label, curve_a=curve.a, curve_b=curve.b)
    try:
        r = reduction_type(curve, p)
        good_p = r.kind.is_good
        anomalous = r.anomalous
        splits = splits_completely(cm_field, p)
        eligible = good_p and anomalous and splits

        if ingested_generator is not None:
            if not curve.contains(ingested_generator):
                raise DomainError(f"ingested generator is not on {curve}")
            gen, status = ingested_generator, "ingested"
        else:
            gen = find_generator(curve, height)
            status = "found" if gen is not None else "unknown"

        flag = None
        tval = None
        names: list[str] = []
        if eligible:
            fired = brauer_middle_term_verdict(curve, cm_field, p, cm_asserted=True)
            names = [v.name for v in fired]
            if gen is not None:
                dec = decompose_point(curve, gen, p, precision)
                flag = dec.formal_nontrivial
                tval = dec.t_valuation
                lifted = global_lift_verdict(dec, fired[0])
                if lifted is not None:
                    names.append(lifted.name)
        return SurveyRow(
            good_p=good_p,
            anomalous=anomalous,
            splits=splits,
            generator_status=status,
            generator=gen,
            formal_nontrivial=flag,
            t_valuation=tval,
            verdicts=tuple(names),
            **base,
        )
    except DomainError as exc:
        return SurveyRow(error=str(exc), **base)


def aggregate_rows(rows) -> dict:
    eligible = [r for r in rows if r.error is None and r.good_p and r.anomalous and r.splits]
    ran = [r for r in eligible if r.formal_nontrivial is not None]
    nontrivial = sum(1 for r in ran if r.formal_nontrivial)
    unknown = sum(1 for r in eligible if r.generator_status == "unknown")
    fraction = f"{nontrivial}/{len(ran)}" if ran else None
    return {
        "eligible": len(eligible),
        "with_generator": len(ran),
        "nontrivial": nontrivial,
        "fraction": fraction,
        "generator_unknown": unknown,
        "errors": sum(1 for r in rows if r.error is not None),
        "note": PROXY_NOTE,
    }


def scan_family(spec: FamilySpec):
    """Per-curve rows plus the aggregate; row failures never abort the scan."""
    cm_field = ImagQuadField(spec.disc)
    rows = []
    for n in range(spec.n_min, spec.n_max + 1):
        try:
            curve = spec.curve(n)
        except DomainError as exc:
            rows.append(SurveyRow(n=n, label=f"n={n}", error=str(exc)))
            continue
        rows.append(
            build_row(
                curve,
                spec.p,
                cm_field,
                spec.height,
                n=n,
                ingested_generator=spec.generators.get(n),
                precision=spec.precision,
            )
        )
    rows.sort(key=lambda r: (r.n is None, r.n, r.label))
    return rows, aggregate_rows(rows)


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def emit_report(rows, aggregate: dict, format: str = "csv") -> str:
    """Deterministic report text; identical inputs give identical bytes."""
    if format == "csv":
        lines = [CSV_HEADER]
        for r in rows:
            lines.append(
                ",".join(
                    [
                        _csv_cell(r.n),
                        _csv_cell(r.label),
                        _csv_cell(r.good_p),
                        _csv_cell(r.anomalous),
                        _csv_cell(r.splits),
                        r.generator_status,
                        _csv_cell(r.formal_nontrivial),
                        ";".join(r.verdicts),
                    ]
                )
            )
        agg = " ".join(
            f"{k}={aggregate[k]}"
            for k in ("eligible", "with_generator", "nontrivial", "fraction", "generator_unknown")
        )
        lines.append(f"# aggregate {agg} note={aggregate['note']!r}")
        return "\n".join(lines) + "\n"
    if format == "json":
        payload = {"rows": [r.to_dict() for r in rows], "aggregate": aggregate}
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"
    raise DomainError(f"unknown report format {format!r}")
