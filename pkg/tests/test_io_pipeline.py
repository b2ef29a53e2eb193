"""Parsing and export tests.

Export assertions check raw bytes, not parsed structures, because the
artifact contract is byte-stability across reruns and platforms.
"""

import json

import numpy as np
import pytest

from sitepick.clustering import kmeans
from sitepick.errors import ConfigError, ParseError, ValidationError
from sitepick.geo import from_degrees
from sitepick.io_pipeline import (
    Quadrant,
    QuadrantSummary,
    RunManifest,
    build_weighted_points,
    export_dunn_curve,
    export_geojson,
    export_site_table,
    parse_key_values,
    parse_responses,
    sha256_digest,
    source_points,
)
from sitepick.model_selection import sweep
from sitepick.sites import assign_site_ids, select_representatives
from sitepick.weighting import FrequencyCategory, reliability_weight

HEADER = (
    "participant_id,quadrant,region,latitude_deg,longitude_deg,"
    "visit_count_category,avg_duration_min"
)

SIX_ROWS = "\n".join(
    [
        HEADER,
        "p1,A,CBD,1.291598203,103.84653,10 or more,30",
        "p2,A,CBD,1.292,103.847,4 to 6,12.5",
        "p3,A,East,1.35,103.94,1 to 3,5",
        "p4,A,East,1.351,103.941,7 to 9,45",
        "p5,A,West,1.33,103.70,4 to 6,20",
        "p6,B,CBD,1.30,103.85,1 to 3,8",
        "",
    ]
)


def parse(text, **kwargs):
    return parse_responses(text.encode("utf-8"), **kwargs)


# --- parsing ---


def test_parse_example_row():
    result = parse(SIX_ROWS)
    assert result.total_rows == 6
    assert result.accepted == 6
    assert result.skipped == 0
    assert result.diagnostics == []
    first = result.responses[0]
    assert first.participant_id == "p1"
    assert first.quadrant is Quadrant.FULL_OF_LIFE_EXCITING
    assert first.region == "CBD"
    assert first.lat_deg == 1.291598203
    assert first.lon_deg == 103.84653
    assert first.visit_count_category is FrequencyCategory.TEN_OR_MORE
    assert first.avg_duration_min == 30.0
    assert first.row == 2
    assert first.cadence is None


def test_parse_quadrant_tokens_are_flexible():
    rows = "\n".join(
        [
            HEADER,
            "p1,a,CBD,1.0,103.0,1 to 3,5",
            "p2,FULL of life AND exciting,CBD,1.0,103.0,1 to 3,5",
            "p3,Calm and Tranquil,CBD,1.0,103.0,1 to 3,5",
        ]
    )
    result = parse(rows)
    assert [r.quadrant for r in result.responses] == [
        Quadrant.FULL_OF_LIFE_EXCITING,
        Quadrant.FULL_OF_LIFE_EXCITING,
        Quadrant.CALM_TRANQUIL,
    ]


def test_parse_category_tokens_are_flexible():
    rows = "\n".join(
        [
            HEADER,
            "p1,A,CBD,1.0,103.0,4 to 6 times,5",
            "p2,A,CBD,1.0,103.0,10 OR MORE,5",
            "p3,A,CBD,1.0,103.0,7  to  9,5",
        ]
    )
    result = parse(rows)
    assert [r.visit_count_category for r in result.responses] == [
        FrequencyCategory.FOUR_TO_SIX,
        FrequencyCategory.TEN_OR_MORE,
        FrequencyCategory.SEVEN_TO_NINE,
    ]


def test_parse_flags_bad_cells_and_skips_the_row():
    rows = "\n".join(
        [
            HEADER,
            "p1,A,CBD,91.0,103.0,1 to 3,5",
            "p2,E,CBD,1.0,103.0,1 to 3,5",
            "p3,A,CBD,1.0,103.0,weekly,5",
            "p4,A,CBD,1.0,103.0,1 to 3,-4",
            "p5,A,CBD,abc,103.0,1 to 3,5",
            "p6,A,CBD,1.0,103.0,1 to 3,5",
        ]
    )
    result = parse(rows)
    assert result.total_rows == 6
    assert result.accepted == 1
    assert result.skipped == 5
    assert len(result.diagnostics) == 5
    by_row = {d.row: d for d in result.diagnostics}
    assert by_row[2].column == "latitude_deg"
    assert "91" in by_row[2].message
    assert by_row[3].column == "quadrant"
    assert by_row[4].column == "visit_count_category"
    assert by_row[5].column == "avg_duration_min"
    assert by_row[6].column == "latitude_deg"
    assert "not a number" in by_row[6].message
    assert str(by_row[2]) == f"row 2, column latitude_deg: {by_row[2].message}"


def test_parse_short_row_reports_every_missing_cell():
    result = parse(HEADER + "\np1,A,CBD")
    assert result.accepted == 0
    assert result.total_rows == 1
    assert {d.message for d in result.diagnostics} == {"missing value"}
    assert {d.column for d in result.diagnostics} == {
        "latitude_deg",
        "longitude_deg",
        "visit_count_category",
        "avg_duration_min",
    }


def test_parse_blank_rows_are_not_counted_but_keep_numbering():
    rows = HEADER + "\np1,A,CBD,1.0,103.0,1 to 3,5\n,,,\np2,A,CBD,1.1,103.1,1 to 3,5\n"
    result = parse(rows)
    assert result.total_rows == 2
    assert [r.row for r in result.responses] == [2, 4]


def test_parse_header_only_and_empty_input():
    result = parse(HEADER)
    assert result.accepted == 0 and result.total_rows == 0 and result.diagnostics == []
    with pytest.raises(ParseError, match="header"):
        parse("")


def test_parse_missing_required_column():
    with pytest.raises(ParseError, match="latitude_deg"):
        parse("participant_id,quadrant,region,longitude_deg,visit_count_category,avg_duration_min\n")


def test_parse_column_map_renames_and_names_actual_header():
    rows = "\n".join(
        [
            "participant_id,quadrant,region,lat,lng,visit_count_category,avg_duration_min",
            "p1,A,CBD,1.291598203,103.84653,10 or more,30",
            "p2,A,CBD,bogus,103.8,1 to 3,5",
        ]
    )
    column_map = {"latitude_deg": "lat", "longitude_deg": "lng"}
    result = parse(rows, column_map=column_map)
    assert result.accepted == 1
    assert result.responses[0].lat_deg == 1.291598203
    assert result.diagnostics[0].column == "lat"
    # Without the map the renamed column is simply missing.
    with pytest.raises(ParseError, match="'latitude_deg'"):
        parse(rows)


def test_parse_strict_escalates_after_full_read():
    rows = HEADER + "\np1,A,CBD,91.0,103.0,1 to 3,5\n"
    with pytest.raises(ParseError, match="strict"):
        parse(rows, strict=True)
    assert parse(rows).skipped == 1  # non-strict just skips


def test_parse_handles_utf8_bom():
    data = b"\xef\xbb\xbf" + SIX_ROWS.encode("utf-8")
    assert parse_responses(data).accepted == 6


def test_parse_keeps_optional_columns():
    rows = "\n".join(
        [
            HEADER + ",cadence,rationale",
            "p1,A,CBD,1.0,103.0,1 to 3,5,weekly,close to work",
        ]
    )
    response = parse(rows).responses[0]
    assert response.cadence == "weekly"
    assert response.rationale == "close to work"


# --- weighting glue ---


def test_build_weighted_points_filters_and_weights():
    responses = parse(SIX_ROWS).responses
    weighted = build_weighted_points(responses, Quadrant.FULL_OF_LIFE_EXCITING)
    assert len(weighted) == 5
    assert [wp.source_index for wp in weighted] == [0, 1, 2, 3, 4]
    assert weighted[0].weight == reliability_weight(4, 30.0)
    assert weighted[2].weight == reliability_weight(1, 5.0)
    only_b = build_weighted_points(responses, Quadrant.CHAOTIC_RESTLESS)
    assert [wp.source_index for wp in only_b] == [5]
    assert build_weighted_points(responses, Quadrant.LIFELESS_BORING) == []


def test_source_points_align_with_weighted_list():
    responses = parse(SIX_ROWS).responses
    weighted = build_weighted_points(responses, Quadrant.CHAOTIC_RESTLESS)
    sources = source_points(responses, weighted)
    assert len(sources) == 1
    assert sources[0].lat_deg == 1.30
    assert sources[0].region == "CBD"
    assert sources[0].source_row == 7


# --- exports ---


def clustered_quadrant_a():
    responses = parse(SIX_ROWS).responses
    weighted = build_weighted_points(responses, Quadrant.FULL_OF_LIFE_EXCITING)
    points = [wp.point for wp in weighted]
    weights = [wp.weight for wp in weighted]
    result = kmeans(points, weights, k=2, seed=1)
    reps = select_representatives(points, result.assignment, list(result.centers))
    report = assign_site_ids(reps, "A", source_points(responses, weighted))
    return responses, weighted, result, report


def test_export_geojson_structure_and_precision():
    responses, weighted, result, report = clustered_quadrant_a()
    raw = export_geojson(weighted, responses, result, report)
    assert raw == export_geojson(weighted, responses, result, report)
    document = json.loads(raw)
    assert document["type"] == "FeatureCollection"
    features = document["features"]
    assert len(features) == len(weighted) + 2 + 2
    roles = [f["properties"]["role"] for f in features]
    assert roles.count("response") == 5
    assert roles.count("center") == 2
    assert roles.count("site") == 2
    # Coordinates are [lon, lat] and responses carry their original degrees.
    first = features[0]
    assert first["geometry"]["coordinates"] == [103.84653, 1.291598203]
    assert first["properties"]["source_row"] == 2
    assert first["properties"]["region"] == "CBD"
    assert b"103.846530000000" in raw  # 12 fixed decimal places
    weight = float(first["properties"]["weight"])
    assert weight == pytest.approx(weighted[0].weight, abs=1e-12)


def test_export_geojson_validates_alignment():
    responses, weighted, result, report = clustered_quadrant_a()
    with pytest.raises(ValidationError):
        export_geojson(weighted[:-1], responses, result, report)
    truncated = type(report)(quadrant_letter="A", records=report.records[:1])
    with pytest.raises(ValidationError):
        export_geojson(weighted, responses, result, truncated)


def test_export_site_table_bytes():
    responses, _, _, report = clustered_quadrant_a()
    raw = export_site_table(report)
    lines = raw.decode("utf-8").splitlines()
    assert lines[0] == "ID,Region,Latitude_deg,Longitude_deg,SourceRow"
    assert len(lines) == 3
    id_column = [line.split(",")[0] for line in lines[1:]]
    assert id_column == ["A01", "A02"]
    surveyed = {(r.lat_deg, r.lon_deg) for r in responses}
    for line in lines[1:]:
        _, _, lat_text, lon_text, _ = line.split(",")
        assert len(lat_text.split(".")[1]) == 9  # fixed 9 decimal places
        assert len(lon_text.split(".")[1]) == 9
        assert (float(lat_text), float(lon_text)) in surveyed


def test_export_site_table_empty_report():
    _, _, _, report = clustered_quadrant_a()
    empty = type(report)(quadrant_letter="A", records=())
    assert export_site_table(empty) == b"ID,Region,Latitude_deg,Longitude_deg,SourceRow\n"


def test_export_dunn_curve_leaves_degenerate_rows_empty():
    # One duplicated point caps the usable cluster count at 2, so k=3 has no
    # scoreable run and its row keeps empty cells.
    points = [from_degrees(lat, 103.8) for lat in (1.30, 1.30, 1.40, 1.50)]
    result = sweep(points, [1.0] * 4, k_range=[2, 3], runs_per_k=3, base_seed=0)
    lines = export_dunn_curve(result).decode("utf-8").splitlines()
    assert lines[0] == "k,best_run,best_seed,dunn_index,min_inter_km,max_intra_km"
    assert lines[1].startswith("2,")
    assert lines[2] == "3,,,,,"
    assert len(lines[1].split(",")) == 6


def test_manifest_json_is_deterministic_and_complete():
    manifest = RunManifest(
        tool_version="0.1.0",
        input_digest=sha256_digest(b"abc"),
        base_seed=0,
        k_min=2,
        k_max=None,
        runs_per_k=100,
        max_iterations=300,
        earth_radius_km=6371.0,
        strict=False,
        column_map=None,
        region_order=("CBD", "East"),
        quadrants={
            "A": QuadrantSummary(
                label="full of life and exciting",
                n_points=5,
                auc=0.91,
                k_max=2,
                optimal_k=2,
                best_dunn=12.5,
                min_inter_km=2.0,
                max_intra_km=0.16,
                sites=2,
            )
        },
    )
    raw = manifest.to_json()
    assert raw == manifest.to_json()
    assert raw.endswith(b"\n")
    payload = json.loads(raw)
    assert payload["input_digest"].startswith("sha256:")
    assert payload["region_order"] == ["CBD", "East"]
    assert payload["quadrants"]["A"]["optimal_k"] == 2
    assert list(payload) == sorted(payload)
    for key in payload:
        assert "time" not in key and "date" not in key and "path" not in key


# --- small helpers ---


def test_parse_key_values():
    text = "# comment\n\nbase_seed = 7\nk_min=2\n"
    assert parse_key_values(text) == {"base_seed": "7", "k_min": "2"}
    with pytest.raises(ConfigError, match="duplicate"):
        parse_key_values("a=1\na=2\n")
    with pytest.raises(ConfigError, match="key=value"):
        parse_key_values("just words\n")
    with pytest.raises(ConfigError, match="empty key"):
        parse_key_values("=5\n")


def test_sha256_digest_known_value():
    assert sha256_digest(b"") == (
        "sha256:e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
    )
