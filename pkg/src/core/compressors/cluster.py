"""Column clustering (k-means++ on the transposed matrix) with per-cluster aggregation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import CompressorError
from .base import FittedCompressor

AGGREGATIONS = ("max", "mean", "median")
DEFAULT_MAX_ITER = 100
DEFAULT_TOL = 1e-4


@dataclass(frozen=True)
class ClusterState:
    assignment: np.ndarray  # (d_in,) cluster id per input column, ids 0..d_out-1
    agg: str

    def apply(self, e: np.ndarray) -> np.ndarray:
        k = int(self.assignment.max()) + 1
        out = np.empty((e.shape[0], k))
        reduce = {"max": np.max, "mean": np.mean, "median": np.median}[self.agg]
        for c in range(k):
            out[:, c] = reduce(e[:, self.assignment == c], axis=1)
        return out

    def nbytes(self) -> int:
        return self.assignment.nbytes


def _kmeans_pp_init(points: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = points.shape[0]
    chosen = [int(rng.integers(n))]
    d2 = np.sum((points - points[chosen[0]]) ** 2, axis=1)
    for _ in range(k - 1):
        total = d2.sum()
        if total <= 0:
            # All remaining points duplicate a chosen center; fall back to uniform.
            remaining = np.setdiff1d(np.arange(n), chosen)
            idx = int(rng.choice(remaining))
        else:
            idx = int(rng.choice(n, p=d2 / total))
        chosen.append(idx)
        d2 = np.minimum(d2, np.sum((points - points[idx]) ** 2, axis=1))
    return points[chosen].copy()


def _sq_distances(points: np.ndarray, centers: np.ndarray) -> np.ndarray:
    # (n, k) squared euclidean distances, clipped against cancellation.
    d2 = (
        np.sum(points**2, axis=1)[:, None]
        - 2.0 * points @ centers.T
        + np.sum(centers**2, axis=1)[None, :]
    )
    return np.maximum(d2, 0.0)


def kmeans_columns(
    points: np.ndarray,
    k: int,
    seed: int,
    max_iter: int = DEFAULT_MAX_ITER,
    tol: float = DEFAULT_TOL,
) -> np.ndarray:
    """Lloyd iterations from a k-means++ start; returns the assignment vector.

    Empty clusters are repaired each round by moving in the point currently
    farthest from its assigned center, so the final partition always has k
    non-empty clusters.
    """
    rng = np.random.default_rng(seed)
    centers = _kmeans_pp_init(points, k, rng)
    prev_inertia = np.inf
    assignment = np.zeros(points.shape[0], dtype=np.int64)
    for _ in range(max_iter):
        d2 = _sq_distances(points, centers)
        assignment = d2.argmin(axis=1)
        dist_to_own = d2[np.arange(len(points)), assignment]
        for c in range(k):
            if not np.any(assignment == c):
                far = int(dist_to_own.argmax())
                assignment[far] = c
                dist_to_own[far] = 0.0
        for c in range(k):
            centers[c] = points[assignment == c].mean(axis=0)
        inertia = float(np.sum((points - centers[assignment]) ** 2))
        if prev_inertia - inertia <= tol * prev_inertia:
            break
        prev_inertia = inertia
    return assignment


def fit_cluster_aggregate(
    e: np.ndarray,
    d_out: int,
    agg: str,
    seed: int = 0,
    max_iter: int = DEFAULT_MAX_ITER,
    tol: float = DEFAULT_TOL,
) -> FittedCompressor:
    e = np.asarray(e, dtype=np.float64)
    if not 1 <= d_out <= e.shape[1]:
        raise CompressorError(f"d_out must be in [1, {e.shape[1]}], got {d_out}")
    if agg not in AGGREGATIONS:
        raise CompressorError(f"unknown aggregation {agg!r}; expected one of {AGGREGATIONS}")
    assignment = kmeans_columns(e.T.copy(), d_out, seed, max_iter, tol)
    return FittedCompressor(f"cluster-{agg}", e.shape[1], d_out, ClusterState(assignment, agg))
