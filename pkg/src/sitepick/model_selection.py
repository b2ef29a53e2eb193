"""Cluster-count selection by sweeping k and scoring partitions with the
Dunn index (worst-case separation between clusters divided by the largest
cluster diameter; higher is better).

For every candidate k the sweep reruns k-means from many seeded starts and
keeps the run with the highest Dunn index, then picks the k whose best run
scores highest overall. Seeds for each (k, run) cell are derived
independently from the base seed, so results do not depend on execution
order and the sweep can fan out across processes.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial
from typing import Iterable, Optional, Sequence

import numpy as np

from .clustering import (
    ClusterAssignment,
    ClusteringResult,
    DistanceMetric,
    HaversineMetric,
    _kmeans_core,
    _objective_core,
    _validate_weights,
    DEFAULT_MAX_ITERATIONS,
)
from .errors import DegenerateClusteringError, SweepError, ValidationError
from .geo import GeoPoint, coords_array
from .rng import derive_seed

DEFAULT_RUNS_PER_K = 100


@dataclass(frozen=True)
class DunnScore:
    """Dunn index with the two quantities it is the ratio of."""

    value: float
    min_inter_km: float
    max_intra_km: float


@dataclass(frozen=True, eq=False)
class KBest:
    """The best-scoring run for one candidate k."""

    k: int
    run_index: int
    seed: int
    result: ClusteringResult
    dunn: DunnScore


@dataclass(frozen=True, eq=False)
class SweepResult:
    """Outcome of a full k sweep. per_k maps each candidate k to its best run,
    or to None when every run at that k was degenerate."""

    per_k: "dict[int, Optional[KBest]]"
    optimal_k: int
    k_range: tuple[int, ...]
    runs_per_k: int
    base_seed: int

    @property
    def best(self) -> KBest:
        chosen = self.per_k[self.optimal_k]
        assert chosen is not None
        return chosen


def default_k_max(n: int) -> int:
    """Largest candidate k for n points: floor(sqrt(n)). Requires n >= 4 so
    the sweep range [2, k_max] is non-empty."""
    if n < 4:
        raise ValidationError(f"need at least 4 points to sweep, got {n}")
    return math.isqrt(n)


def dunn_index(
    points: "list[GeoPoint]",
    assignment: ClusterAssignment,
    metric: DistanceMetric | None = None,
) -> DunnScore:
    """Minimum pointwise inter-cluster distance over maximum cluster diameter.

    Needs at least two non-empty clusters. When every cluster is a bundle of
    coincident points the largest diameter is zero and the ratio is
    undefined; that raises DegenerateClusteringError rather than returning
    infinity, because such a partition carries no separation information.
    """
    metric = metric if metric is not None else HaversineMetric()
    labels = assignment.labels
    if labels.size != len(points):
        raise ValidationError(f"{len(points)} points but {labels.size} labels")
    if np.unique(labels).size < 2:
        raise ValidationError("Dunn index needs at least two non-empty clusters")
    coords = coords_array(points)
    iu, iv = np.triu_indices(len(points), k=1)
    dist_flat = metric.pairwise(coords, coords)[iu, iv]
    same_flat = labels[iu] == labels[iv]
    score = _dunn_from_condensed(dist_flat, same_flat)
    if score is None:
        raise DegenerateClusteringError(
            "every cluster has zero diameter; the Dunn ratio is undefined"
        )
    return score


def _dunn_from_condensed(dist_flat: np.ndarray, same_flat: np.ndarray) -> DunnScore | None:
    """Dunn score from condensed upper-triangle distances, or None when the
    largest intra-cluster diameter is zero (all-singleton/coincident case)."""
    intra = dist_flat[same_flat]
    max_intra_km = float(intra.max()) if intra.size else 0.0
    if max_intra_km == 0.0:
        return None
    min_inter_km = float(dist_flat[~same_flat].min())
    return DunnScore(min_inter_km / max_intra_km, min_inter_km, max_intra_km)


@dataclass(frozen=True)
class _RawBest:
    """Picklable best-of-k summary produced by a (possibly remote) worker."""

    k: int
    run_index: int
    seed: int
    centers: np.ndarray
    labels: np.ndarray
    iterations: int
    converged: bool
    value: float
    min_inter_km: float
    max_intra_km: float


def _best_for_k(
    coords: np.ndarray,
    weights: np.ndarray,
    runs_per_k: int,
    base_seed: int,
    metric: DistanceMetric,
    max_iterations: int,
    k: int,
) -> Optional[_RawBest]:
    iu, iv = np.triu_indices(coords.shape[0], k=1)
    dist_flat = metric.pairwise(coords, coords)[iu, iv]
    best: Optional[_RawBest] = None
    for run in range(runs_per_k):
        seed = derive_seed(base_seed, k, run)
        centers, labels, iterations, converged = _kmeans_core(
            coords, weights, k, metric, seed, max_iterations
        )
        score = _dunn_from_condensed(dist_flat, labels[iu] == labels[iv])
        if score is None:
            continue
        if best is None or score.value > best.value:
            best = _RawBest(
                k=k,
                run_index=run,
                seed=seed,
                centers=centers,
                labels=labels,
                iterations=iterations,
                converged=converged,
                value=score.value,
                min_inter_km=score.min_inter_km,
                max_intra_km=score.max_intra_km,
            )
    return best


def _materialize(
    raw: _RawBest, coords: np.ndarray, weights: np.ndarray, metric: DistanceMetric
) -> KBest:
    assignment = ClusterAssignment(labels=raw.labels, k=raw.k)
    result = ClusteringResult(
        centers=tuple(GeoPoint(float(lat), float(lon)) for lat, lon in raw.centers),
        assignment=assignment,
        iterations=raw.iterations,
        converged=raw.converged,
        seed=raw.seed,
        objective=_objective_core(coords, weights, raw.centers, raw.labels, metric),
    )
    dunn = DunnScore(raw.value, raw.min_inter_km, raw.max_intra_km)
    return KBest(k=raw.k, run_index=raw.run_index, seed=raw.seed, result=result, dunn=dunn)


def sweep(
    points: "list[GeoPoint]",
    weights: "list[float]",
    k_range: Iterable[int] | None = None,
    runs_per_k: int = DEFAULT_RUNS_PER_K,
    base_seed: int = 0,
    metric: DistanceMetric | None = None,
    max_iterations: int = DEFAULT_MAX_ITERATIONS,
    workers: int = 1,
) -> SweepResult:
    """Best clustering per k and the k with the highest Dunn index.

    Every (k, run) cell gets its own derived seed, so the outcome is a pure
    function of (points, weights, k_range, runs_per_k, base_seed,
    max_iterations) regardless of worker count. Ties between runs keep the
    earliest run; ties between k values keep the smallest k. Degenerate runs
    are dropped; a k where every run degenerates maps to None; if that
    happens for all k the sweep raises SweepError.
    """
    metric = metric if metric is not None else HaversineMetric()
    n = len(points)
    if len(weights) != n:
        raise ValidationError(f"{n} points but {len(weights)} weights")
    if runs_per_k < 1:
        raise ValidationError(f"runs_per_k must be >= 1, got {runs_per_k}")
    if k_range is None:
        ks: Sequence[int] = range(2, default_k_max(n) + 1)
    else:
        ks = sorted(set(int(k) for k in k_range))
    if len(ks) == 0:
        raise ValidationError("no candidate k values to sweep")
    if ks[0] < 2 or ks[-1] > n:
        raise ValidationError(f"candidate k values must lie in [2, {n}], got {list(ks)}")
    coords = coords_array(points)
    w = np.asarray(weights, dtype=np.float64)
    _validate_weights(w)

    job = partial(_best_for_k, coords, w, runs_per_k, base_seed, metric, max_iterations)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            raw_bests = list(pool.map(job, ks))
    else:
        raw_bests = [job(k) for k in ks]

    per_k: dict[int, Optional[KBest]] = {}
    optimal: Optional[KBest] = None
    for k, raw in zip(ks, raw_bests):
        if raw is None:
            per_k[k] = None
            continue
        candidate = _materialize(raw, coords, w, metric)
        per_k[k] = candidate
        if optimal is None or candidate.dunn.value > optimal.dunn.value:
            optimal = candidate
    if optimal is None:
        raise SweepError(
            "every run at every candidate k was degenerate (all clusters were "
            "coincident-point singletons); lower k relative to the number of "
            "distinct points"
        )
    return SweepResult(
        per_k=per_k,
        optimal_k=optimal.k,
        k_range=tuple(ks),
        runs_per_k=runs_per_k,
        base_seed=base_seed,
    )
