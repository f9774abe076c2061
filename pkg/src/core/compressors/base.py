"""Shared compressor types: the descriptor for a compressor and its fitted state."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from ..errors import CompressorError

KINDS = (
    "svd",
    "svd-exact",
    "sparse-projection",
    "random-subspace",
    "cluster-max",
    "cluster-mean",
    "cluster-median",
    "neural-small",
    "neural-large",
)

# Parameter keys each kind accepts, validated up front so typos fail fast.
_PARAM_KEYS = {
    "svd": {"oversample", "power_iters"},
    "svd-exact": set(),
    "sparse-projection": set(),
    "random-subspace": set(),
    "cluster-max": {"max_iter", "tol"},
    "cluster-mean": {"max_iter", "tol"},
    "cluster-median": {"max_iter", "tol"},
    "neural-small": {"max_epochs", "tol", "learning_rate", "momentum", "dropout_rate", "bn_eps", "bn_momentum"},
    "neural-large": {"max_epochs", "tol", "learning_rate", "momentum", "dropout_rate", "bn_eps", "bn_momentum"},
}


@dataclass(frozen=True)
class CompressorSpec:
    """Which algorithm to fit, its seed, and kind-specific settings."""

    kind: str
    seed: int = 0
    params: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise CompressorError(f"unknown compressor kind {self.kind!r}; expected one of {KINDS}")
        if not isinstance(self.seed, int) or self.seed < 0:
            raise CompressorError(f"seed must be a non-negative integer, got {self.seed!r}")
        unknown = set(self.params) - _PARAM_KEYS[self.kind]
        if unknown:
            raise CompressorError(f"{self.kind}: unknown params {sorted(unknown)}")

    def with_seed(self, seed: int) -> "CompressorSpec":
        return CompressorSpec(self.kind, seed, dict(self.params))


@dataclass(frozen=True)
class FittedCompressor:
    """Immutable learned projection state; ``transform`` maps rows x d_in -> rows x d_out."""

    kind: str
    input_dim: int
    output_dim: int
    state: Any

    def state_bytes(self) -> int:
        return self.state.nbytes()


def check_transform_input(fc: FittedCompressor, e: np.ndarray) -> np.ndarray:
    e = np.asarray(e, dtype=np.float64)
    if e.ndim != 2:
        raise CompressorError(f"expected a 2-D matrix, got shape {e.shape}")
    if e.shape[0] == 0:
        raise CompressorError("cannot transform an empty matrix (0 rows)")
    if e.shape[1] != fc.input_dim:
        raise CompressorError(f"matrix has {e.shape[1]} columns but compressor expects {fc.input_dim}")
    return e


def transform(fc: FittedCompressor, e: np.ndarray) -> np.ndarray:
    """Apply a fitted compressor to a matrix with matching column count."""
    e = check_transform_input(fc, e)
    out = fc.state.apply(e)
    assert out.shape == (e.shape[0], fc.output_dim)
    return out
