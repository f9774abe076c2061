"""Truncated SVD compression, exact (LAPACK) and randomized (subspace iteration)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import CompressorError
from .base import FittedCompressor

DEFAULT_OVERSAMPLE = 10
DEFAULT_POWER_ITERS = 5


@dataclass(frozen=True)
class SvdState:
    components: np.ndarray  # (d_in, d_out) leading right singular vectors
    singular_values: np.ndarray  # (d_out,)

    def apply(self, e: np.ndarray) -> np.ndarray:
        # Projecting the fitted matrix itself yields the score matrix U*Sigma.
        return e @ self.components

    def nbytes(self) -> int:
        return self.components.nbytes + self.singular_values.nbytes


def exact_truncated_svd(e: np.ndarray, d_out: int) -> tuple[np.ndarray, np.ndarray]:
    """Leading d_out right singular vectors and singular values via full SVD."""
    _, s, vt = np.linalg.svd(e, full_matrices=False)
    return vt[:d_out].T.copy(), s[:d_out].copy()


def randomized_truncated_svd(
    e: np.ndarray,
    d_out: int,
    seed: int,
    oversample: int = DEFAULT_OVERSAMPLE,
    power_iters: int = DEFAULT_POWER_ITERS,
) -> tuple[np.ndarray, np.ndarray]:
    """Range-finder sketch with QR-stabilized power iterations."""
    rng = np.random.default_rng(seed)
    n_rows, n_cols = e.shape
    sketch = min(d_out + oversample, n_cols)
    y = e @ rng.standard_normal((n_cols, sketch))
    q, _ = np.linalg.qr(y)
    for _ in range(power_iters):
        q, _ = np.linalg.qr(e.T @ q)
        q, _ = np.linalg.qr(e @ q)
    b = q.T @ e
    _, s, vt = np.linalg.svd(b, full_matrices=False)
    return vt[:d_out].T.copy(), s[:d_out].copy()


def fit_svd(
    e: np.ndarray,
    d_out: int,
    mode: str = "randomized",
    seed: int = 0,
    oversample: int = DEFAULT_OVERSAMPLE,
    power_iters: int = DEFAULT_POWER_ITERS,
) -> FittedCompressor:
    e = np.asarray(e, dtype=np.float64)
    limit = min(e.shape)
    if not 1 <= d_out <= limit:
        raise CompressorError(f"d_out must be in [1, {limit}] for a {e.shape[0]}x{e.shape[1]} matrix, got {d_out}")
    if mode == "exact":
        components, sv = exact_truncated_svd(e, d_out)
    elif mode == "randomized":
        components, sv = randomized_truncated_svd(e, d_out, seed, oversample, power_iters)
    else:
        raise CompressorError(f"unknown SVD mode {mode!r}")
    kind = "svd-exact" if mode == "exact" else "svd"
    return FittedCompressor(kind, e.shape[1], d_out, SvdState(components, sv))
