"""Turn cluster centers into concrete recommended sites.

A k-means center is a coordinate average and usually lands on no surveyed
location (it can sit in water or inside a building). Each cluster is
therefore represented by its member point closest to the center, so every
recommended site is verbatim one of the surveyed coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .clustering import ClusterAssignment, DistanceMetric, HaversineMetric
from .errors import EmptyClusterError, ValidationError
from .geo import GeoPoint, coords_array

#: Region labels in the order site tables are sorted by, mirroring how the
#: survey area is usually broken down in reports.
DEFAULT_REGION_ORDER: tuple[str, ...] = (
    "CBD",
    "Central",
    "East",
    "North",
    "North-east",
    "West",
)

_QUADRANT_LETTERS = ("A", "B", "C", "D")


@dataclass(frozen=True)
class Representative:
    """The member point standing in for one cluster."""

    cluster: int
    point_index: int
    distance_km: float


@dataclass(frozen=True)
class SourcePoint:
    """Original coordinates and provenance of one clustered point, kept in
    degrees exactly as parsed so exports never round-trip through radians."""

    lat_deg: float
    lon_deg: float
    region: str
    source_row: int


@dataclass(frozen=True)
class SiteRecord:
    site_id: str
    cluster: int
    lat_deg: float
    lon_deg: float
    region: str
    source_row: int
    distance_km: float


@dataclass(frozen=True)
class SiteReport:
    """Labelled, deterministically ordered sites for one quadrant."""

    quadrant_letter: str
    records: tuple[SiteRecord, ...]


def select_representatives(
    points: "list[GeoPoint]",
    assignment: ClusterAssignment,
    centers: "list[GeoPoint]",
    metric: DistanceMetric | None = None,
) -> "list[Representative]":
    """Pick, for every cluster, the member nearest its center.

    Ties go to the lowest point index. Output is ordered by cluster index
    and always has exactly one entry per cluster.
    """
    metric = metric if metric is not None else HaversineMetric()
    if assignment.labels.size != len(points):
        raise ValidationError(f"{len(points)} points but {assignment.labels.size} labels")
    if len(centers) != assignment.k:
        raise ValidationError(f"expected {assignment.k} centers, got {len(centers)}")
    coords = coords_array(points)
    center_coords = coords_array(centers)
    representatives: list[Representative] = []
    for cluster in range(assignment.k):
        members = assignment.members(cluster)
        if members.size == 0:
            raise EmptyClusterError(f"cluster {cluster} has no members to represent it")
        dist = metric.pairwise(coords[members], center_coords[cluster : cluster + 1])[:, 0]
        nearest = int(np.argmin(dist))
        representatives.append(
            Representative(
                cluster=cluster,
                point_index=int(members[nearest]),
                distance_km=float(dist[nearest]),
            )
        )
    return representatives


def assign_site_ids(
    representatives: Sequence[Representative],
    quadrant_letter: str,
    sources: Sequence[SourcePoint],
    region_order: Sequence[str] = DEFAULT_REGION_ORDER,
) -> SiteReport:
    """Label representatives as sites like "A01" and order them for reporting.

    Sites sort by region (in region_order, unknown regions alphabetically
    after the known ones), then by latitude ascending. IDs are the quadrant
    letter plus a zero-padded ordinal in that sort order. A representative
    whose source has a blank region is reported under "UNKNOWN".
    """
    if quadrant_letter not in _QUADRANT_LETTERS:
        raise ValidationError(f"quadrant letter must be one of {_QUADRANT_LETTERS}")
    ranks = {region: i for i, region in enumerate(region_order)}
    fallback_rank = len(region_order)

    def sort_key(rep: Representative):
        source = sources[rep.point_index]
        region = source.region.strip() or "UNKNOWN"
        return (
            ranks.get(region, fallback_rank),
            region if region not in ranks else "",
            source.lat_deg,
            source.lon_deg,
            rep.point_index,
        )

    for rep in representatives:
        if not 0 <= rep.point_index < len(sources):
            raise ValidationError(f"representative index {rep.point_index} has no source")

    width = max(2, len(str(len(representatives))))
    records = []
    for ordinal, rep in enumerate(sorted(representatives, key=sort_key), start=1):
        source = sources[rep.point_index]
        records.append(
            SiteRecord(
                site_id=f"{quadrant_letter}{ordinal:0{width}d}",
                cluster=rep.cluster,
                lat_deg=source.lat_deg,
                lon_deg=source.lon_deg,
                region=source.region.strip() or "UNKNOWN",
                source_row=source.source_row,
                distance_km=rep.distance_km,
            )
        )
    return SiteReport(quadrant_letter=quadrant_letter, records=tuple(records))
