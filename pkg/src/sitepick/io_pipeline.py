"""Survey CSV parsing, per-quadrant weighting, and artifact export.

Parsing is diagnostic-first: a malformed row is reported with its row number
and column and skipped, it never aborts the run unless strict mode is on.
Exporters render floats themselves (fixed decimal places) so artifacts are
byte-identical across reruns, platforms and worker counts; json.dumps float
formatting is avoided everywhere coordinates appear.
"""

from __future__ import annotations

import csv
import enum
import hashlib
import io
import json
import math
from dataclasses import asdict, dataclass, field
from typing import Mapping, Optional, Sequence

from .clustering import ClusteringResult
from .errors import ParseError, ConfigError, ValidationError
from .geo import from_degrees
from .model_selection import SweepResult
from .sites import SiteReport, SourcePoint
from .weighting import FrequencyCategory, WeightedPoint, frequency_weight, reliability_weight


class Quadrant(enum.Enum):
    """The four mood quadrants responses are collected under."""

    FULL_OF_LIFE_EXCITING = ("A", "full of life and exciting")
    CHAOTIC_RESTLESS = ("B", "chaotic and restless")
    CALM_TRANQUIL = ("C", "calm and tranquil")
    LIFELESS_BORING = ("D", "lifeless and boring")

    @property
    def letter(self) -> str:
        return self.value[0]

    @property
    def label(self) -> str:
        return self.value[1]

    @classmethod
    def from_token(cls, token: str) -> "Quadrant":
        """Resolve a quadrant from its letter or its descriptive label."""
        cleaned = " ".join(token.split()).casefold()
        for quadrant in cls:
            if cleaned == quadrant.letter.casefold() or cleaned == quadrant.label:
                return quadrant
        raise ValidationError(f"unknown quadrant {token!r}")


REQUIRED_COLUMNS = (
    "participant_id",
    "quadrant",
    "region",
    "latitude_deg",
    "longitude_deg",
    "visit_count_category",
    "avg_duration_min",
)
OPTIONAL_COLUMNS = ("cadence", "rationale")


@dataclass(frozen=True)
class SurveyResponse:
    """One accepted survey row."""

    participant_id: str
    quadrant: Quadrant
    region: str
    lat_deg: float
    lon_deg: float
    visit_count_category: FrequencyCategory
    avg_duration_min: float
    row: int
    cadence: Optional[str] = None
    rationale: Optional[str] = None


@dataclass(frozen=True)
class RowDiagnostic:
    """A problem found in one cell; the row it points at was skipped."""

    row: int
    column: str
    message: str

    def __str__(self) -> str:
        return f"row {self.row}, column {self.column}: {self.message}"


@dataclass
class ParseResult:
    responses: "list[SurveyResponse]"
    diagnostics: "list[RowDiagnostic]"
    total_rows: int

    @property
    def accepted(self) -> int:
        return len(self.responses)

    @property
    def skipped(self) -> int:
        return self.total_rows - self.accepted


def parse_key_values(text: str) -> "dict[str, str]":
    """Parse "key = value" lines; blank lines and #-comments are ignored."""
    values: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key=value, got {line!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        if not key:
            raise ConfigError(f"line {lineno}: empty key")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        values[key] = value.strip()
    return values


_CATEGORY_BY_TOKEN = {c.value: c for c in FrequencyCategory}


def _parse_category(token: str) -> FrequencyCategory:
    cleaned = " ".join(token.split()).casefold()
    if cleaned.endswith(" times"):
        cleaned = cleaned[: -len(" times")]
    category = _CATEGORY_BY_TOKEN.get(cleaned)
    if category is None:
        expected = ", ".join(repr(c.value) for c in FrequencyCategory)
        raise ValidationError(f"expected one of {expected}, got {token!r}")
    return category


def parse_responses(
    data: "bytes | str",
    column_map: Mapping[str, str] | None = None,
    strict: bool = False,
) -> ParseResult:
    """Parse survey CSV bytes into responses plus per-row diagnostics.

    column_map renames canonical columns to whatever the file actually uses
    (e.g. {"latitude_deg": "lat"}). A missing required column is a
    file-level ParseError. Cell-level problems become diagnostics naming the
    row and the column as it appears in the file; with strict=True any
    diagnostic is escalated to a ParseError after the whole file is read.
    """
    text = data.decode("utf-8-sig") if isinstance(data, bytes) else data
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header is None:
        raise ParseError("input has no header row")
    names = [cell.strip() for cell in header]
    position = {name: i for i, name in enumerate(names)}
    column_map = dict(column_map or {})

    actual: dict[str, str] = {}
    indices: dict[str, int] = {}
    for canonical in REQUIRED_COLUMNS + OPTIONAL_COLUMNS:
        name = column_map.get(canonical, canonical)
        actual[canonical] = name
        if name in position:
            indices[canonical] = position[name]
        elif canonical in REQUIRED_COLUMNS:
            raise ParseError(f"required column {name!r} not found in header")

    responses: list[SurveyResponse] = []
    diagnostics: list[RowDiagnostic] = []
    total = 0
    for row_number, cells in enumerate(reader, start=2):
        if not any(cell.strip() for cell in cells):
            continue
        total += 1
        issues: list[RowDiagnostic] = []

        def cell(canonical: str) -> Optional[str]:
            index = indices.get(canonical)
            if index is None:
                return None
            if index >= len(cells):
                issues.append(
                    RowDiagnostic(row_number, actual[canonical], "missing value")
                )
                return None
            return cells[index]

        def parse_float(canonical: str, raw: Optional[str]) -> Optional[float]:
            if raw is None:
                return None
            try:
                value = float(raw)
            except ValueError:
                issues.append(
                    RowDiagnostic(row_number, actual[canonical], f"not a number: {raw!r}")
                )
                return None
            if not math.isfinite(value):
                issues.append(
                    RowDiagnostic(row_number, actual[canonical], f"not finite: {raw!r}")
                )
                return None
            return value

        participant = (cell("participant_id") or "").strip()

        quadrant: Optional[Quadrant] = None
        raw_quadrant = cell("quadrant")
        if raw_quadrant is not None:
            try:
                quadrant = Quadrant.from_token(raw_quadrant)
            except ValidationError as exc:
                issues.append(RowDiagnostic(row_number, actual["quadrant"], str(exc)))

        region = (cell("region") or "").strip()

        lat = parse_float("latitude_deg", cell("latitude_deg"))
        if lat is not None and not -90.0 <= lat <= 90.0:
            issues.append(
                RowDiagnostic(
                    row_number, actual["latitude_deg"], f"latitude {lat} outside [-90, 90]"
                )
            )
            lat = None
        lon = parse_float("longitude_deg", cell("longitude_deg"))

        category: Optional[FrequencyCategory] = None
        raw_category = cell("visit_count_category")
        if raw_category is not None:
            try:
                category = _parse_category(raw_category)
            except ValidationError as exc:
                issues.append(
                    RowDiagnostic(row_number, actual["visit_count_category"], str(exc))
                )

        duration = parse_float("avg_duration_min", cell("avg_duration_min"))
        if duration is not None and duration < 0.0:
            issues.append(
                RowDiagnostic(
                    row_number, actual["avg_duration_min"], f"negative duration {duration}"
                )
            )
            duration = None

        cadence = cell("cadence")
        rationale = cell("rationale")

        if issues:
            diagnostics.extend(issues)
            continue
        assert quadrant is not None and category is not None
        assert lat is not None and lon is not None and duration is not None
        responses.append(
            SurveyResponse(
                participant_id=participant,
                quadrant=quadrant,
                region=region,
                lat_deg=lat,
                lon_deg=lon,
                visit_count_category=category,
                avg_duration_min=duration,
                row=row_number,
                cadence=cadence.strip() if cadence is not None else None,
                rationale=rationale.strip() if rationale is not None else None,
            )
        )

    if strict and diagnostics:
        raise ParseError(
            f"{len(diagnostics)} problem(s) in strict mode; first: {diagnostics[0]}"
        )
    return ParseResult(responses=responses, diagnostics=diagnostics, total_rows=total)


def build_weighted_points(
    responses: Sequence[SurveyResponse], quadrant: Quadrant
) -> "list[WeightedPoint]":
    """Weighted points for one quadrant, preserving response order. Each
    point's source_index refers back into the full responses sequence."""
    weighted: list[WeightedPoint] = []
    for index, response in enumerate(responses):
        if response.quadrant is not quadrant:
            continue
        factor = frequency_weight(response.visit_count_category)
        weighted.append(
            WeightedPoint(
                point=from_degrees(response.lat_deg, response.lon_deg),
                weight=reliability_weight(factor, response.avg_duration_min),
                source_index=index,
            )
        )
    return weighted


def source_points(
    responses: Sequence[SurveyResponse], weighted: Sequence[WeightedPoint]
) -> "list[SourcePoint]":
    """Degree-exact provenance records aligned with a weighted point list."""
    out: list[SourcePoint] = []
    for wp in weighted:
        response = responses[wp.source_index]
        out.append(
            SourcePoint(
                lat_deg=response.lat_deg,
                lon_deg=response.lon_deg,
                region=response.region,
                source_row=response.row,
            )
        )
    return out


def sha256_digest(data: bytes) -> str:
    return "sha256:" + hashlib.sha256(data).hexdigest()


def _fixed(value: float, places: int = 12) -> str:
    return f"{value:.{places}f}"


def _feature(lon_deg: float, lat_deg: float, properties: "list[tuple[str, str]]") -> str:
    body = ", ".join(f"{json.dumps(key)}: {rendered}" for key, rendered in properties)
    return (
        '{"type": "Feature", "geometry": {"type": "Point", "coordinates": ['
        + _fixed(lon_deg)
        + ", "
        + _fixed(lat_deg)
        + ']}, "properties": {'
        + body
        + "}}"
    )


def export_geojson(
    weighted: Sequence[WeightedPoint],
    responses: Sequence[SurveyResponse],
    result: ClusteringResult,
    report: SiteReport,
) -> bytes:
    """One FeatureCollection holding responses, centers and sites.

    Coordinates are [lon, lat] in degrees with 12 fixed decimal places.
    Response features carry their original parsed degrees; only center
    features are converted from radians, since centers exist nowhere else.
    """
    labels = result.assignment.labels
    if len(weighted) != labels.size:
        raise ValidationError(f"{len(weighted)} weighted points but {labels.size} labels")
    if len(report.records) != result.assignment.k:
        raise ValidationError(
            f"site report has {len(report.records)} records for k={result.assignment.k}"
        )
    features: list[str] = []
    for index, wp in enumerate(weighted):
        response = responses[wp.source_index]
        features.append(
            _feature(
                response.lon_deg,
                response.lat_deg,
                [
                    ("role", json.dumps("response")),
                    ("cluster", str(int(labels[index]))),
                    ("weight", _fixed(wp.weight)),
                    ("region", json.dumps(response.region)),
                    ("source_row", str(response.row)),
                ],
            )
        )
    for cluster, center in enumerate(result.centers):
        features.append(
            _feature(
                math.degrees(center.lon),
                math.degrees(center.lat),
                [("role", json.dumps("center")), ("cluster", str(cluster))],
            )
        )
    for record in report.records:
        features.append(
            _feature(
                record.lon_deg,
                record.lat_deg,
                [
                    ("role", json.dumps("site")),
                    ("cluster", str(record.cluster)),
                    ("site_id", json.dumps(record.site_id)),
                    ("region", json.dumps(record.region)),
                    ("source_row", str(record.source_row)),
                ],
            )
        )
    document = (
        '{"type": "FeatureCollection", "features": [\n'
        + ",\n".join(features)
        + "\n]}\n"
    )
    return document.encode("utf-8")


def export_site_table(report: SiteReport) -> bytes:
    """Site CSV with degree coordinates printed to 9 decimal places."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["ID", "Region", "Latitude_deg", "Longitude_deg", "SourceRow"])
    for record in report.records:
        writer.writerow(
            [
                record.site_id,
                record.region,
                _fixed(record.lat_deg, 9),
                _fixed(record.lon_deg, 9),
                record.source_row,
            ]
        )
    return buffer.getvalue().encode("utf-8")


def export_dunn_curve(result: SweepResult) -> bytes:
    """Per-k sweep curve CSV; a k whose runs all degenerated leaves its
    score cells empty."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(
        ["k", "best_run", "best_seed", "dunn_index", "min_inter_km", "max_intra_km"]
    )
    for k in result.k_range:
        best = result.per_k[k]
        if best is None:
            writer.writerow([k, "", "", "", "", ""])
        else:
            writer.writerow(
                [
                    k,
                    best.run_index,
                    best.seed,
                    _fixed(best.dunn.value),
                    _fixed(best.dunn.min_inter_km),
                    _fixed(best.dunn.max_intra_km),
                ]
            )
    return buffer.getvalue().encode("utf-8")


@dataclass(frozen=True)
class QuadrantSummary:
    label: str
    n_points: int
    auc: float
    k_max: int
    optimal_k: int
    best_dunn: float
    min_inter_km: float
    max_intra_km: float
    sites: int


@dataclass(frozen=True)
class RunManifest:
    """Everything needed to reproduce a run's numeric outputs exactly,
    minus the input itself (recorded as a digest). Deliberately contains
    no timestamps, hostnames or paths."""

    tool_version: str
    input_digest: str
    base_seed: int
    k_min: int
    k_max: Optional[int]
    runs_per_k: int
    max_iterations: int
    earth_radius_km: float
    strict: bool
    column_map: Optional["dict[str, str]"]
    region_order: tuple[str, ...]
    quadrants: "dict[str, QuadrantSummary]" = field(default_factory=dict)

    def to_json(self) -> bytes:
        payload = asdict(self)
        payload["region_order"] = list(self.region_order)
        text = json.dumps(payload, indent=2, sort_keys=True)
        return (text + "\n").encode("utf-8")
