"""Experiment orchestration: config, synthetic corpora, and the full run loop."""

from __future__ import annotations

import json
from concurrent.futures import FIRST_COMPLETED, ThreadPoolExecutor, wait
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .compressors import CompressorSpec
from .compressors.cluster import DEFAULT_MAX_ITER, DEFAULT_TOL
from .compressors.autoencoder import TrainConfig
from .compressors.svd import DEFAULT_OVERSAMPLE, DEFAULT_POWER_ITERS
from .errors import CompressorError, ConfigError, CoreError
from .evaluation import EvaluationRecord, evaluate_matrices, evaluate_representation
from .io import Labels, load_embeddings, load_labels, load_manifest, save_labels, save_matrix, validate_dataset
from .pipeline import compress_direct, compress_recursive, dimension_schedule, mix64
from .report import ResultsTable

MODES = ("recursive", "direct")


@dataclass(frozen=True)
class ExperimentConfig:
    manifest: str
    specs: tuple[CompressorSpec, ...]
    kappa: int = 2
    modes: tuple[str, ...] = MODES
    folds: int = 3
    repeats: int = 3
    seed: int = 0
    margin: float = 0.05
    out_dir: str = "results"
    threads: int = 1
    task_timeout: float | None = None

    def __post_init__(self):
        if not self.specs:
            raise ConfigError("need at least one compressor spec")
        if self.kappa < 2:
            raise ConfigError(f"kappa must be >= 2, got {self.kappa}")
        if self.margin < 0:
            raise ConfigError(f"margin must be >= 0, got {self.margin}")
        if self.threads < 1:
            raise ConfigError(f"threads must be >= 1, got {self.threads}")
        bad = [m for m in self.modes if m not in MODES]
        if bad or not self.modes:
            raise ConfigError(f"modes must be a non-empty subset of {MODES}, got {self.modes}")


def config_to_dict(cfg: ExperimentConfig) -> dict:
    d = asdict(cfg)
    d["specs"] = [{"kind": s.kind, "seed": s.seed, "params": dict(s.params)} for s in cfg.specs]
    d["modes"] = list(cfg.modes)
    return d


def config_from_dict(data: dict) -> ExperimentConfig:
    try:
        specs = tuple(
            CompressorSpec(s["kind"], s.get("seed", 0), s.get("params", {})) for s in data["specs"]
        )
        return ExperimentConfig(
            manifest=data["manifest"],
            specs=specs,
            kappa=data.get("kappa", 2),
            modes=tuple(data.get("modes", MODES)),
            folds=data.get("folds", 3),
            repeats=data.get("repeats", 3),
            seed=data.get("seed", 0),
            margin=data.get("margin", 0.05),
            out_dir=data.get("out_dir", "results"),
            threads=data.get("threads", 1),
            task_timeout=data.get("task_timeout"),
        )
    except (KeyError, TypeError, CompressorError) as exc:
        raise ConfigError(f"bad experiment config: {exc}") from exc


def load_config(path: str | Path) -> ExperimentConfig:
    try:
        return config_from_dict(json.loads(Path(path).read_text()))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc


def make_synthetic_dataset(
    docs: int,
    classes: int,
    rank: int,
    dim: int,
    seed: int = 0,
    separation: float = 4.0,
    within: float = 1.0,
    noise: float = 1.0,
) -> tuple[np.ndarray, Labels]:
    """Gaussian class clusters of a chosen intrinsic rank embedded in ``dim`` ambient
    dimensions through a random orthonormal map, plus isotropic ambient noise."""
    if not (docs >= classes >= 2 and 1 <= rank <= dim):
        raise ConfigError(f"bad synthetic shape: docs={docs}, classes={classes}, rank={rank}, dim={dim}")
    rng = np.random.default_rng(seed)
    centers = rng.standard_normal((classes, rank)) * separation
    ids = rng.permutation(np.arange(docs) % classes)
    latent = centers[ids] + rng.standard_normal((docs, rank)) * within
    basis, _ = np.linalg.qr(rng.standard_normal((dim, rank)))
    e = latent @ basis.T + rng.standard_normal((docs, dim)) * noise
    labels = Labels(ids=ids.astype(np.int64), names=tuple(f"c{i}" for i in range(classes)))
    return e, labels


def write_synthetic_dataset(out_dir: str | Path, name: str, **kwargs) -> dict:
    """Write <name>.core and <name>.labels plus a manifest entry dict."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    e, labels = make_synthetic_dataset(**kwargs)
    save_matrix(e, out_dir / f"{name}.core")
    save_labels(labels, out_dir / f"{name}.labels")
    return {
        "name": name,
        "embeddings": f"{name}.core",
        "labels": f"{name}.labels",
        "representation": "synthetic",
    }


@dataclass
class _Dataset:
    index: int
    name: str
    representation: str
    matrix: np.ndarray
    labels: Labels
    eval_seed: int
    baseline_mean: float = 0.0


def _run_task(cfg: ExperimentConfig, ds: _Dataset, spec_index: int, mode: str) -> list[EvaluationRecord]:
    spec = cfg.specs[spec_index]
    schedule = dimension_schedule(ds.matrix.shape[1], cfg.kappa)
    compress = compress_recursive if mode == "recursive" else compress_direct
    task_seed = mix64(mix64(cfg.seed, ds.index), spec_index)
    repeat_seeds = [mix64(task_seed, r) for r in range(cfg.repeats)]
    runs = [compress(ds.matrix, spec.with_seed(s), schedule) for s in repeat_seeds]
    records = []
    for i, dim in enumerate(schedule.dims, start=1):
        mats = [run.outputs()[i - 1] for run in runs]
        res = evaluate_matrices(mats, ds.labels, cfg.folds, ds.eval_seed)
        records.append(
            EvaluationRecord(
                dataset=ds.name,
                representation=ds.representation,
                compressor=spec.kind,
                mode=mode,
                step=i,
                dim=dim,
                mean_f1=res.mean_f1,
                std_f1=res.std_f1,
                epsilon_f1=res.mean_f1 - ds.baseline_mean,
                repeats=cfg.repeats,
                extra={"eval_seed": ds.eval_seed, "compressor_seeds": repeat_seeds},
            )
        )
    return records


def run_experiment(cfg: ExperimentConfig) -> ResultsTable:
    """Run every (dataset, spec, mode) task; failures are recorded, not fatal.

    All seeds derive from (config seed, stable manifest/spec indices), so the
    output is byte-identical across runs and thread counts.
    """
    entries = load_manifest(cfg.manifest)
    errors: list[str] = []
    datasets: list[_Dataset] = []
    records: list[EvaluationRecord] = []

    for idx, entry in enumerate(entries):
        try:
            e = load_embeddings(entry.embeddings)
            labels = load_labels(entry.labels)
            validate_dataset(e, labels, cfg.folds)
        except (CoreError, OSError) as exc:
            errors.append(f"dataset {entry.name}: {exc}")
            continue
        datasets.append(
            _Dataset(
                index=idx,
                name=entry.name,
                representation=entry.representation,
                matrix=e,
                labels=labels,
                eval_seed=mix64(cfg.seed, idx),
            )
        )

    for ds in datasets:
        base = evaluate_representation(ds.matrix, ds.labels, cfg.folds, cfg.repeats, ds.eval_seed)
        ds.baseline_mean = base.mean_f1
        records.append(
            EvaluationRecord(
                dataset=ds.name,
                representation=ds.representation,
                compressor="baseline",
                mode="none",
                step=0,
                dim=ds.matrix.shape[1],
                mean_f1=base.mean_f1,
                std_f1=base.std_f1,
                epsilon_f1=0.0,
                repeats=cfg.repeats,
                extra={"eval_seed": ds.eval_seed},
            )
        )

    tasks = [(ds, si, mode) for ds in datasets for si in range(len(cfg.specs)) for mode in cfg.modes]
    with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
        futures = {
            pool.submit(_run_task, cfg, ds, si, mode): (ds.name, cfg.specs[si].kind, mode)
            for ds, si, mode in tasks
        }
        pending = set(futures)
        while pending:
            done, pending = wait(pending, timeout=cfg.task_timeout, return_when=FIRST_COMPLETED)
            if not done and cfg.task_timeout is not None:
                for fut in pending:
                    fut.cancel()  # running threads cannot be killed, queued tasks can
                    name, kind, mode = futures[fut]
                    errors.append(f"task {name}/{kind}/{mode}: timed out after {cfg.task_timeout}s")
                break
            for fut in done:
                name, kind, mode = futures[fut]
                try:
                    records.extend(fut.result())
                except CoreError as exc:
                    errors.append(f"task {name}/{kind}/{mode}: {exc}")

    meta = {
        "config": config_to_dict(cfg),
        "package_version": __version__,
        "seed_derivation": "splitmix64 chain: config seed -> dataset index -> spec index -> repeat",
        "algorithm_settings": {
            "rsvd_oversample": DEFAULT_OVERSAMPLE,
            "rsvd_power_iters": DEFAULT_POWER_ITERS,
            "kmeans_max_iter": DEFAULT_MAX_ITER,
            "kmeans_tol": DEFAULT_TOL,
            "autoencoder_defaults": asdict(TrainConfig()),
            "logreg_c": 1.0,
        },
        "errors": sorted(errors),
    }
    return ResultsTable(records=records, meta=meta)
