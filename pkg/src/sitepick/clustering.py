"""Weighted k-means over a pluggable distance metric.

Centers are seeded with k-means++ (selection probability proportional to
squared distance from the nearest chosen center) and updated as weighted
per-coordinate means of (lat, lon) in radians. Assignment uses the plain
metric distance; weights enter only the centroid update and the reported
objective. The whole computation is a pure function of its inputs and the
seed, so identical calls produce bit-identical results.
"""

from __future__ import annotations

import warnings
from abc import ABC, abstractmethod
from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyClusterError, ValidationError
from .geo import EARTH, EarthModel, GeoPoint, coords_array, haversine_km
from .rng import SplitMix64

DEFAULT_MAX_ITERATIONS = 300


class LongitudeSpanWarning(UserWarning):
    """A cluster spans more than pi radians of longitude; the coordinate mean
    of such a cluster is unreliable near the antimeridian."""


class DistanceMetric(ABC):
    """Symmetric, non-negative distance between points given as radians."""

    @abstractmethod
    def pairwise(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Distance matrix of shape (len(a), len(b)) for (n, 2) coordinate arrays."""

    @abstractmethod
    def between(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Row-aligned distances for two (n, 2) coordinate arrays."""

    def distance(self, p: GeoPoint, q: GeoPoint) -> float:
        return float(self.between(coords_array([p]), coords_array([q]))[0])


@dataclass(frozen=True)
class HaversineMetric(DistanceMetric):
    """Great-circle distance in km on a spherical Earth (the default metric)."""

    earth: EarthModel = EARTH

    def pairwise(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return haversine_km(
            a[:, 0][:, None], a[:, 1][:, None], b[:, 0][None, :], b[:, 1][None, :],
            radius_km=self.earth.radius_km,
        )

    def between(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return haversine_km(a[:, 0], a[:, 1], b[:, 0], b[:, 1], radius_km=self.earth.radius_km)


@dataclass(frozen=True)
class PlanarMetric(DistanceMetric):
    """Euclidean distance treating (lat, lon) as a plane; oracle/testing metric."""

    def pairwise(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        diff = a[:, None, :] - b[None, :, :]
        return np.sqrt((diff * diff).sum(axis=2))

    def between(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        diff = a - b
        return np.sqrt((diff * diff).sum(axis=1))


@dataclass(frozen=True, eq=False)
class ClusterAssignment:
    """Per-point cluster labels forming a partition into k clusters."""

    labels: np.ndarray
    k: int

    def __post_init__(self) -> None:
        labels = np.asarray(self.labels, dtype=np.int64)
        object.__setattr__(self, "labels", labels)
        if labels.ndim != 1:
            raise ValidationError("labels must be a flat sequence")
        if self.k < 1:
            raise ValidationError(f"cluster count must be >= 1, got {self.k}")
        if labels.size and (labels.min() < 0 or labels.max() >= self.k):
            raise ValidationError("every label must lie in [0, k)")

    def members(self, cluster: int) -> np.ndarray:
        """Ascending point indices assigned to a cluster."""
        return np.flatnonzero(self.labels == cluster)


@dataclass(frozen=True, eq=False)
class ClusteringResult:
    """Converged (or capped) output of one weighted k-means run."""

    centers: tuple[GeoPoint, ...]
    assignment: ClusterAssignment
    iterations: int
    converged: bool
    seed: int
    objective: float


def _validate_weights(weights: np.ndarray) -> None:
    if np.any(~np.isfinite(weights)) or np.any(weights <= 0.0):
        raise ValidationError("weights must be finite and positive")


def weighted_center(points: "list[GeoPoint]", weights: "list[float]") -> GeoPoint:
    """Weighted per-coordinate mean of a cluster's points.

    With equal weights this is the ordinary coordinate mean. Raises
    EmptyClusterError for an empty cluster so the caller can repair it.
    """
    if len(points) == 0:
        raise EmptyClusterError("cannot take the center of an empty cluster")
    if len(points) != len(weights):
        raise ValidationError(f"{len(points)} points but {len(weights)} weights")
    coords = coords_array(points)
    w = np.asarray(weights, dtype=np.float64)
    lat, lon = _weighted_center_core(coords, w)
    return GeoPoint(lat, lon)


def _weighted_center_core(coords: np.ndarray, w: np.ndarray) -> tuple[float, float]:
    total = float(w.sum())
    if not total > 0.0:
        raise ValidationError(f"sum of weights must be positive, got {total}")
    if coords.shape[0] > 1 and float(np.ptp(coords[:, 1])) > np.pi:
        warnings.warn(
            "cluster spans more than pi radians of longitude; the coordinate "
            "mean does not account for antimeridian wrap-around",
            LongitudeSpanWarning,
            stacklevel=3,
        )
    mean = (w[:, None] * coords).sum(axis=0) / total
    return float(mean[0]), float(mean[1])


def kmeanspp_init(
    points: "list[GeoPoint]",
    weights: "list[float] | None",
    k: int,
    metric: DistanceMetric,
    rng: SplitMix64,
) -> "list[GeoPoint]":
    """Draw k initial centers, spaced out proportionally to squared distance.

    The first center is uniform over the points; each later center is drawn
    with probability r_j^2 / sum(r^2) where r_j is point j's distance to its
    nearest already-chosen center. Weights are accepted for signature parity
    but play no role in seeding.
    """
    del weights
    if len(points) == 0:
        raise ValidationError("cannot seed centers from an empty point set")
    if not 1 <= k <= len(points):
        raise ValidationError(f"k must be in [1, {len(points)}], got {k}")
    coords = coords_array(points)
    centers, _ = _kmeanspp_core(coords, k, metric, rng)
    return [GeoPoint(float(lat), float(lon)) for lat, lon in centers]


def _weighted_draw(probabilities: np.ndarray, rng: SplitMix64) -> int:
    cumulative = np.cumsum(probabilities)
    u = rng.random() * float(cumulative[-1])
    idx = int(np.searchsorted(cumulative, u, side="right"))
    return min(idx, probabilities.size - 1)


def _kmeanspp_core(
    coords: np.ndarray, k: int, metric: DistanceMetric, rng: SplitMix64
) -> tuple[np.ndarray, list[int]]:
    n = coords.shape[0]
    nearest = np.full(n, np.inf)
    probabilities: np.ndarray | None = np.full(n, 1.0 / n)
    centers = np.empty((k, 2), dtype=np.float64)
    chosen: list[int] = []
    for i in range(k):
        if probabilities is None:
            # Every remaining point coincides with a chosen center, so the
            # squared-distance rule is 0/0; fall back to a uniform draw over
            # the indices not yet chosen.
            unchosen = sorted(set(range(n)) - set(chosen))
            idx = unchosen[rng.randrange(len(unchosen))]
        else:
            idx = _weighted_draw(probabilities, rng)
        chosen.append(idx)
        centers[i] = coords[idx]
        np.minimum(nearest, metric.pairwise(coords, centers[i : i + 1])[:, 0], out=nearest)
        squared = nearest * nearest
        total = float(squared.sum())
        probabilities = squared / total if total > 0.0 else None
    return centers, chosen


def _repair_empty_clusters(
    coords: np.ndarray,
    centers: np.ndarray,
    dist: np.ndarray,
    labels: np.ndarray,
    metric: DistanceMetric,
) -> bool:
    """Ensure no cluster is empty; mutates centers, dist and labels in place.

    An emptied cluster's center is moved onto the point farthest from it and
    the nearest-center assignment is recomputed. If exact coordinate
    duplicates keep the cluster empty (another center sits on the very same
    point), the farthest point whose donor cluster can spare a member is
    pinned to it instead. Returns True when any label was pinned, i.e. the
    final labels are not a pure argmin of the returned centers.
    """
    k = centers.shape[0]
    pinned: dict[int, int] = {}

    def apply_argmin() -> None:
        labels[:] = dist.argmin(axis=1)
        for point, cluster in pinned.items():
            labels[point] = cluster

    for _ in range(k):
        empties = np.flatnonzero(np.bincount(labels, minlength=k) == 0)
        if empties.size == 0:
            break
        j = int(empties[0])
        farthest = int(dist[:, j].argmax())
        centers[j] = coords[farthest]
        dist[:, j] = metric.pairwise(coords, centers[j : j + 1])[:, 0]
        apply_argmin()

    counts = np.bincount(labels, minlength=k)
    for j in np.flatnonzero(counts == 0):
        spare = counts[labels] > 1
        for point in pinned:
            spare[point] = False
        column = np.where(spare, dist[:, int(j)], -np.inf)
        point = int(column.argmax())
        # n >= k guarantees some cluster has two members, and pinned points
        # occupy distinct clusters, so an eligible donor always exists.
        assert np.isfinite(column[point])
        labels[point] = int(j)
        pinned[point] = int(j)
        counts = np.bincount(labels, minlength=k)
    return bool(pinned)


def _update_centers(
    coords: np.ndarray, weights: np.ndarray, labels: np.ndarray, k: int
) -> np.ndarray:
    centers = np.empty((k, 2), dtype=np.float64)
    for j in range(k):
        members = np.flatnonzero(labels == j)
        if members.size == 0:
            raise EmptyClusterError(f"cluster {j} lost all members")  # pragma: no cover
        centers[j] = _weighted_center_core(coords[members], weights[members])
    return centers


def _kmeans_core(
    coords: np.ndarray,
    weights: np.ndarray,
    k: int,
    metric: DistanceMetric,
    seed: int,
    max_iterations: int,
) -> tuple[np.ndarray, np.ndarray, int, bool]:
    rng = SplitMix64(seed)
    centers, _ = _kmeanspp_core(coords, k, metric, rng)
    labels: np.ndarray | None = None
    converged = False
    iterations = 0
    for iterations in range(1, max_iterations + 1):
        dist = metric.pairwise(coords, centers)
        new_labels = dist.argmin(axis=1)
        # Any repair (center relocation or pinned label) makes this pass
        # incomparable with the previous one, so it cannot declare convergence.
        repaired = int(np.bincount(new_labels, minlength=k).min()) == 0
        if repaired:
            _repair_empty_clusters(coords, centers, dist, new_labels, metric)
        if labels is not None and not repaired and np.array_equal(new_labels, labels):
            converged = True
            labels = new_labels
            break
        labels = new_labels
        centers = _update_centers(coords, weights, labels, k)
    assert labels is not None
    return centers, labels, iterations, converged


def kmeans(
    points: "list[GeoPoint]",
    weights: "list[float]",
    k: int,
    metric: DistanceMetric | None = None,
    seed: int = 0,
    max_iterations: int = DEFAULT_MAX_ITERATIONS,
) -> ClusteringResult:
    """Cluster points into k groups by alternating assignment and weighted means.

    Points are assigned to the metric-nearest center (ties to the lowest
    center index); centers are recomputed as weighted coordinate means.
    Stops once an assignment pass leaves the labels unchanged, or after
    max_iterations with converged=False.
    """
    metric = metric if metric is not None else HaversineMetric()
    n = len(points)
    if n == 0:
        raise ValidationError("cannot cluster zero points")
    if not 1 <= k <= n:
        raise ValidationError(f"k must be in [1, {n}], got {k}")
    if len(weights) != n:
        raise ValidationError(f"{n} points but {len(weights)} weights")
    if max_iterations < 1:
        raise ValidationError(f"max_iterations must be >= 1, got {max_iterations}")
    coords = coords_array(points)
    w = np.asarray(weights, dtype=np.float64)
    _validate_weights(w)
    centers, labels, iterations, converged = _kmeans_core(
        coords, w, k, metric, seed, max_iterations
    )
    assignment = ClusterAssignment(labels=labels, k=k)
    return ClusteringResult(
        centers=tuple(GeoPoint(float(lat), float(lon)) for lat, lon in centers),
        assignment=assignment,
        iterations=iterations,
        converged=converged,
        seed=seed,
        objective=_objective_core(coords, w, centers, labels, metric),
    )


def _objective_core(
    coords: np.ndarray,
    weights: np.ndarray,
    centers: np.ndarray,
    labels: np.ndarray,
    metric: DistanceMetric,
) -> float:
    d = metric.between(coords, centers[labels])
    return float((weights * d * d).sum())


def objective(
    points: "list[GeoPoint]",
    weights: "list[float]",
    centers: "list[GeoPoint]",
    assignment: ClusterAssignment,
    metric: DistanceMetric | None = None,
) -> float:
    """Weighted within-cluster dispersion: sum of w * d(x, assigned center)^2."""
    metric = metric if metric is not None else HaversineMetric()
    n = len(points)
    if len(weights) != n or assignment.labels.size != n:
        raise ValidationError("points, weights and assignment must be aligned")
    if len(centers) != assignment.k:
        raise ValidationError(f"expected {assignment.k} centers, got {len(centers)}")
    return _objective_core(
        coords_array(points),
        np.asarray(weights, dtype=np.float64),
        coords_array(centers),
        assignment.labels,
        metric,
    )
