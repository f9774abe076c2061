"""Random column subspace selection followed by per-row l2 normalization."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import CompressorError
from .base import FittedCompressor


def normalize_rows(m: np.ndarray) -> np.ndarray:
    """Scale each row to unit l2 norm; all-zero rows stay zero."""
    norms = np.linalg.norm(m, axis=1, keepdims=True)
    return m / np.where(norms == 0, 1.0, norms)


@dataclass(frozen=True)
class SubspaceState:
    columns: np.ndarray  # (d_out,) distinct column indices

    def apply(self, e: np.ndarray) -> np.ndarray:
        return normalize_rows(e[:, self.columns])

    def nbytes(self) -> int:
        return self.columns.nbytes


def fit_random_subspace(d_in: int, d_out: int, seed: int = 0) -> FittedCompressor:
    if not 1 <= d_out <= d_in:
        raise CompressorError(f"d_out must be in [1, {d_in}], got {d_out}")
    rng = np.random.default_rng(seed)
    columns = np.sort(rng.choice(d_in, size=d_out, replace=False))
    return FittedCompressor("random-subspace", d_in, d_out, SubspaceState(columns))


def random_subspace(e: np.ndarray, d_out: int, seed: int = 0) -> np.ndarray:
    """One-shot convenience: select d_out columns of e and normalize rows."""
    e = np.asarray(e, dtype=np.float64)
    fc = fit_random_subspace(e.shape[1], d_out, seed)
    return fc.state.apply(e)
