import json

import pytest

from eczero.errors import DomainError
from eczero.quadfields import ImagQuadField
from eczero.rational import Curve, QPoint
from eczero.survey import (
    CSV_HEADER,
    FamilySpec,
    aggregate_rows,
    build_row,
    emit_report,
    find_generator,
    ingest_curves,
    scan_family,
)

from oracles import formal_nontrivial_oracle

EN_SPEC = dict(a_const=0, a_slope=0, b_const=-2, b_slope=7, p=7, disc=-3)


def _spec(n_min, n_max, **kw):
    params = dict(EN_SPEC, n_min=n_min, n_max=n_max, height=500)
    params.update(kw)
    return FamilySpec(**params)


def test_ingest_basic(tmp_path):
    f = tmp_path / "curves.jsonl"
    f.write_text(
        '{"label": "E0", "A": 0, "B": -2, "gen": [3, 1, 5, 1]}\n'
        '{"label": "bad-gen", "A": 0, "B": -2, "gen": [0, 1, 0, 1]}\n'
        "not json at all\n"
        '{"label": "no-coeffs"}\n'
        '{"label": "long", "a1": 0, "a2": -1, "a3": 1, "a4": 0, "a6": 0, "gen": [0, 1, 0, 1]}\n'
    )
    result = ingest_curves(f)
    assert len(result.records) == 2
    rec = result.records[0]
    assert rec.curve == Curve(0, -2, label="E0")
    assert rec.generator == QPoint.from_pair(3, 5)
    assert rec.provenance == "ingested"
    long_rec = result.records[1]
    assert (long_rec.curve.a, long_rec.curve.b) == (-432, 8208)
    assert long_rec.generator == QPoint.from_pair(-12, 108)
    assert [ln for ln, _ in result.rejected] == [2, 3, 4]
    assert "not on the curve" in result.rejected[0][1]
    assert "parse error" in result.rejected[1][1]


def test_ingest_empty_file(tmp_path):
    f = tmp_path / "empty.jsonl"
    f.write_text("")
    result = ingest_curves(f)
    assert result.records == () and result.rejected == ()


def test_ingest_rank_and_source(tmp_path):
    f = tmp_path / "curves.jsonl"
    f.write_text('{"label": "E", "A": -4, "B": 1, "rank": 1, "source": "external table"}\n')
    result = ingest_curves(f)
    assert result.records[0].rank == 1
    assert result.records[0].source == "external table"


def test_find_generator():
    gen = find_generator(Curve(0, -2), 100)
    assert gen == QPoint.from_pair(3, 5) or gen == QPoint.from_pair(3, -5)
    # torsion-only curve must not produce a generator: y^2 = x^3 + 1 has
    # rational 6-torsion and rank 0
    assert find_generator(Curve(0, 1), 60) is None


def test_scan_family_single_row_matches_oracle():
    spec = _spec(0, 0, generators={0: QPoint.from_pair(3, 5)})
    rows, agg = scan_family(spec)
    assert len(rows) == 1
    row = rows[0]
    assert row.generator_status == "ingested"
    assert row.good_p and row.anomalous and row.splits
    expected = formal_nontrivial_oracle(Curve(0, -2), QPoint.from_pair(3, 5), 7, 24)
    assert row.formal_nontrivial == expected
    assert "MiddleTermZpSquared" in row.verdicts
    assert "BrauerPVanishes" in row.verdicts
    assert ("UnconditionalExactness" in row.verdicts) == expected
    assert agg == {
        "eligible": 1,
        "with_generator": 1,
        "nontrivial": 1 if expected else 0,
        "fraction": "1/1" if expected else "0/1",
        "generator_unknown": 0,
        "errors": 0,
        "note": agg["note"],
    }


def test_scan_family_good_reduction_everywhere():
    rows, _ = scan_family(_spec(-12, 12))
    assert all(r.good_p and r.anomalous for r in rows if r.error is None)
    # discriminant of E_n is never divisible by 7
    for n in range(-12, 13):
        assert Curve(0, -2 + 7 * n).discriminant % 7 != 0


def test_scan_rows_are_range_independent():
    a, _ = scan_family(_spec(-6, 6))
    b1, _ = scan_family(_spec(-6, -1))
    b2, _ = scan_family(_spec(0, 6))
    assert a == b1 + b2


def test_scan_determinism():
    spec = _spec(-5, 5)
    rows1, agg1 = scan_family(spec)
    rows2, agg2 = scan_family(spec)
    assert rows1 == rows2 and agg1 == agg2
    assert emit_report(rows1, agg1, "csv") == emit_report(rows2, agg2, "csv")
    assert emit_report(rows1, agg1, "json") == emit_report(rows2, agg2, "json")


def test_empty_denominator_reported_not_crashed():
    # a family that never satisfies the split hypothesis: disc -11 at p = 7
    spec = FamilySpec(
        a_const=0, a_slope=0, b_const=-2, b_slope=7, n_min=0, n_max=2, p=7, disc=-11, height=10
    )
    rows, agg = scan_family(spec)
    assert all(r.splits is False for r in rows)
    assert agg["eligible"] == 0 and agg["with_generator"] == 0
    assert agg["fraction"] is None


def test_aggregate_counts():
    rows, agg = scan_family(_spec(-30, 30))
    assert agg["eligible"] == 61 - agg["errors"]
    assert agg["nontrivial"] <= agg["with_generator"] <= agg["eligible"]
    ran = [r for r in rows if r.formal_nontrivial is not None]
    assert len(ran) == agg["with_generator"]
    assert sum(1 for r in ran if r.formal_nontrivial) == agg["nontrivial"]


def test_emit_csv_shape():
    rows, agg = scan_family(_spec(0, 0, generators={0: QPoint.from_pair(3, 5)}))
    text = emit_report(rows, agg, "csv")
    lines = text.strip().split("\n")
    assert len(lines) == 3  # header, row, footer
    assert lines[0] == CSV_HEADER
    first = lines[1].split(",")
    assert first[0] == "0" and first[2] == "true" and first[5] == "ingested"
    assert lines[2].startswith("# aggregate ")


def test_emit_csv_empty():
    text = emit_report([], aggregate_rows([]), "csv")
    lines = text.strip().split("\n")
    assert len(lines) == 2
    assert lines[0] == CSV_HEADER


def test_json_report_roundtrips_through_ingest(tmp_path):
    spec = _spec(-3, 3, generators={0: QPoint.from_pair(3, 5)})
    rows, agg = scan_family(spec)
    payload = json.loads(emit_report(rows, agg, "json"))
    assert payload["aggregate"]["note"]
    jsonl = tmp_path / "roundtrip.jsonl"
    lines = []
    for row in payload["rows"]:
        rec = {"label": row["label"], "A": row["A"], "B": row["B"]}
        if row["gen"]:
            rec["gen"] = row["gen"]
        lines.append(json.dumps(rec))
    jsonl.write_text("\n".join(lines) + "\n")
    result = ingest_curves(jsonl)
    assert not result.rejected
    assert [r.curve.a for r in result.records] == [row["A"] for row in payload["rows"]]
    assert [r.curve.b for r in result.records] == [row["B"] for row in payload["rows"]]
    by_label = {r.label: r for r in result.records}
    assert by_label["n=0"].generator == QPoint.from_pair(3, 5)
    for rec in result.records:
        if rec.generator is not None:
            assert rec.curve.contains(rec.generator)


def test_build_row_for_ingested_record():
    row = build_row(
        Curve(0, -2, label="E0"),
        7,
        ImagQuadField(-3),
        height=100,
        ingested_generator=QPoint.from_pair(3, 5),
    )
    assert row.label == "E0"
    assert row.formal_nontrivial is not None


def test_build_row_captures_errors():
    # ingested generator that is not on the curve
    row = build_row(
        Curve(0, -2),
        7,
        ImagQuadField(-3),
        height=10,
        ingested_generator=QPoint.from_pair(1, 1),
    )
    assert row.error is not None and "not on" in row.error


def test_family_spec_validation():
    with pytest.raises(DomainError):
        FamilySpec(**dict(EN_SPEC, n_min=3, n_max=1))
    with pytest.raises(DomainError):
        FamilySpec(a_const=0, a_slope=0, b_const=-2, b_slope=7, n_min=0, n_max=1, p=3, disc=-3)
