"""Very sparse random projections with density 1/sqrt(d_in)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import sparse

from ..errors import CompressorError
from .base import FittedCompressor


@dataclass(frozen=True)
class ProjectionState:
    matrix: sparse.csr_array  # (d_in, d_out)

    def apply(self, e: np.ndarray) -> np.ndarray:
        return e @ self.matrix

    def nbytes(self) -> int:
        return self.matrix.data.nbytes + self.matrix.indices.nbytes + self.matrix.indptr.nbytes


def projection_density(d_in: int) -> float:
    return 1.0 / np.sqrt(d_in)


def fit_sparse_projection(d_in: int, d_out: int, seed: int = 0) -> FittedCompressor:
    """Entries are 0 with probability 1-s, else +-sqrt(1/(s*d_out)) with equal sign odds."""
    if not 1 <= d_out <= d_in:
        raise CompressorError(f"d_out must be in [1, {d_in}], got {d_out}")
    rng = np.random.default_rng(seed)
    density = projection_density(d_in)
    mask = rng.random((d_in, d_out)) < density
    signs = rng.integers(0, 2, size=int(mask.sum())) * 2 - 1
    scale = np.sqrt(1.0 / (density * d_out))
    rows, cols = np.nonzero(mask)
    matrix = sparse.csr_array(
        (signs.astype(np.float64) * scale, (rows, cols)), shape=(d_in, d_out)
    )
    return FittedCompressor("sparse-projection", d_in, d_out, ProjectionState(matrix))
