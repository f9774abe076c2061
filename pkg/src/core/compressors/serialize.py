"""Fitted-compressor persistence: one self-describing .npz blob per state."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np
from scipy import sparse

from ..errors import CompressorError
from .autoencoder import AutoencoderParams
from .base import FittedCompressor
from .cluster import ClusterState
from .projection import ProjectionState
from .subspace import SubspaceState
from .svd import SvdState


def save_fitted(fc: FittedCompressor, path: str | Path) -> None:
    meta = {"kind": fc.kind, "input_dim": fc.input_dim, "output_dim": fc.output_dim}
    arrays: dict[str, np.ndarray] = {}
    s = fc.state
    if isinstance(s, SvdState):
        arrays = {"components": s.components, "singular_values": s.singular_values}
    elif isinstance(s, ProjectionState):
        arrays = {
            "proj_data": s.matrix.data,
            "proj_indices": s.matrix.indices,
            "proj_indptr": s.matrix.indptr,
        }
    elif isinstance(s, SubspaceState):
        arrays = {"columns": s.columns}
    elif isinstance(s, ClusterState):
        arrays = {"assignment": s.assignment}
        meta["agg"] = s.agg
    elif isinstance(s, AutoencoderParams):
        for i, w in enumerate(s.weights):
            arrays[f"w{i}"] = w
            if s.biases[i] is not None:
                arrays[f"b{i}"] = s.biases[i]
        for i in range(len(s.bn_mean)):
            arrays[f"bn_mean{i}"] = s.bn_mean[i]
            arrays[f"bn_var{i}"] = s.bn_var[i]
        meta.update(
            n_affine=len(s.weights),
            dropout_rate=s.dropout_rate,
            bn_eps=s.bn_eps,
            embed_index=s.embed_index,
            train_meta=s.train_meta,
        )
    else:
        raise CompressorError(f"cannot serialize state of type {type(s).__name__}")
    with open(path, "wb") as fh:
        np.savez(fh, meta=np.frombuffer(json.dumps(meta).encode(), dtype=np.uint8), **arrays)


def load_fitted(path: str | Path) -> FittedCompressor:
    with np.load(path) as blob:
        meta = json.loads(blob["meta"].tobytes().decode())
        kind = meta["kind"]
        d_in, d_out = meta["input_dim"], meta["output_dim"]
        if kind in ("svd", "svd-exact"):
            state = SvdState(blob["components"], blob["singular_values"])
        elif kind == "sparse-projection":
            matrix = sparse.csr_array(
                (blob["proj_data"], blob["proj_indices"], blob["proj_indptr"]), shape=(d_in, d_out)
            )
            state = ProjectionState(matrix)
        elif kind == "random-subspace":
            state = SubspaceState(blob["columns"])
        elif kind.startswith("cluster-"):
            state = ClusterState(blob["assignment"], meta["agg"])
        elif kind.startswith("neural-"):
            n = meta["n_affine"]
            weights = [blob[f"w{i}"] for i in range(n)]
            biases = [blob[f"b{i}"] if f"b{i}" in blob else None for i in range(n)]
            state = AutoencoderParams(
                weights=weights,
                biases=biases,
                bn_mean=[blob[f"bn_mean{i}"] for i in range(n - 1)],
                bn_var=[blob[f"bn_var{i}"] for i in range(n - 1)],
                dropout_rate=meta["dropout_rate"],
                bn_eps=meta["bn_eps"],
                embed_index=meta["embed_index"],
                train_meta=meta["train_meta"],
            )
        else:
            raise CompressorError(f"unknown serialized kind {kind!r}")
    return FittedCompressor(kind, d_in, d_out, state)
