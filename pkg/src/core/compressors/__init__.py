"""Compression algorithms behind a single fit/transform interface."""

from __future__ import annotations

import numpy as np

from .autoencoder import (
    AutoencoderParams,
    TrainConfig,
    autoencoder_forward,
    batchnorm,
    embed_autoencoder,
    fit_autoencoder,
    reconstruction_loss_and_grads,
    softsign,
    train_autoencoder,
)
from .base import KINDS, CompressorSpec, FittedCompressor, transform
from .cluster import fit_cluster_aggregate, kmeans_columns
from .projection import fit_sparse_projection, projection_density
from .serialize import load_fitted, save_fitted
from .subspace import fit_random_subspace, normalize_rows, random_subspace
from .svd import exact_truncated_svd, fit_svd, randomized_truncated_svd


def fit(spec: CompressorSpec, e: np.ndarray, d_out: int) -> FittedCompressor:
    """Fit the compressor described by ``spec`` on ``e`` for the target dimension."""
    e = np.asarray(e, dtype=np.float64)
    kind, seed, params = spec.kind, spec.seed, spec.params
    if kind == "svd":
        return fit_svd(e, d_out, "randomized", seed, **params)
    if kind == "svd-exact":
        return fit_svd(e, d_out, "exact", seed)
    if kind == "sparse-projection":
        return fit_sparse_projection(e.shape[1], d_out, seed)
    if kind == "random-subspace":
        return fit_random_subspace(e.shape[1], d_out, seed)
    if kind.startswith("cluster-"):
        return fit_cluster_aggregate(e, d_out, kind.removeprefix("cluster-"), seed, **params)
    if kind.startswith("neural-"):
        return fit_autoencoder(e, d_out, kind.removeprefix("neural-"), seed, TrainConfig(**params))
    raise AssertionError(f"unhandled kind {kind}")


__all__ = [
    "KINDS",
    "CompressorSpec",
    "FittedCompressor",
    "AutoencoderParams",
    "TrainConfig",
    "fit",
    "transform",
    "fit_svd",
    "fit_sparse_projection",
    "fit_random_subspace",
    "fit_cluster_aggregate",
    "fit_autoencoder",
    "train_autoencoder",
    "autoencoder_forward",
    "embed_autoencoder",
    "reconstruction_loss_and_grads",
    "softsign",
    "batchnorm",
    "random_subspace",
    "normalize_rows",
    "kmeans_columns",
    "projection_density",
    "exact_truncated_svd",
    "randomized_truncated_svd",
    "save_fitted",
    "load_fitted",
]
