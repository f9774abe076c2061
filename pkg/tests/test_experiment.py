import json

import numpy as np
import pytest

from core.compressors import CompressorSpec
from core.errors import ConfigError
from core.experiment import (
    ExperimentConfig,
    config_from_dict,
    config_to_dict,
    make_synthetic_dataset,
    run_experiment,
    write_synthetic_dataset,
)
from core.report import emit_json, table_to_dict


def small_manifest(tmp_path, names=("dsA", "dsB")):
    entries = []
    for i, name in enumerate(names):
        entries.append(
            write_synthetic_dataset(
                tmp_path, name, docs=36, classes=3, rank=4, dim=16, seed=10 + i
            )
        )
    (tmp_path / "manifest.json").write_text(json.dumps(entries))
    return tmp_path / "manifest.json"


def small_config(manifest, **overrides):
    base = dict(
        manifest=str(manifest),
        specs=(CompressorSpec("svd", seed=1), CompressorSpec("random-subspace", seed=2)),
        kappa=2,
        modes=("recursive", "direct"),
        folds=3,
        repeats=2,
        seed=7,
    )
    base.update(overrides)
    return ExperimentConfig(**base)


def test_synthetic_dataset_shape_and_determinism():
    e, labels = make_synthetic_dataset(60, 4, 8, 32, seed=5)
    assert e.shape == (60, 32)
    assert labels.n_classes == 4
    assert np.bincount(labels.ids).min() == 15
    e2, labels2 = make_synthetic_dataset(60, 4, 8, 32, seed=5)
    assert np.all(e == e2) and np.all(labels.ids == labels2.ids)


def test_synthetic_intrinsic_rank():
    e, _ = make_synthetic_dataset(100, 3, 5, 24, seed=1, noise=0.0)
    s = np.linalg.svd(e, compute_uv=False)
    assert s[4] > 1e-6 and s[5] < 1e-8


def test_config_json_mirror():
    cfg = small_config("m.json", margin=0.1, threads=3)
    back = config_from_dict(config_to_dict(cfg))
    assert back == cfg


def test_config_validation():
    with pytest.raises(ConfigError):
        ExperimentConfig(manifest="m", specs=())
    with pytest.raises(ConfigError):
        small_config("m", margin=-0.1)
    with pytest.raises(ConfigError):
        small_config("m", modes=("sideways",))


def test_run_experiment_record_inventory(tmp_path):
    manifest = small_manifest(tmp_path)
    table = run_experiment(small_config(manifest))
    assert table.meta["errors"] == []
    steps = (8, 4, 2)
    baselines = [r for r in table.records if r.compressor == "baseline"]
    assert {(b.dataset, b.step, b.dim) for b in baselines} == {("dsA", 0, 16), ("dsB", 0, 16)}
    assert all(b.epsilon_f1 == 0.0 for b in baselines)
    rest = [r for r in table.records if r.compressor != "baseline"]
    expected = {
        (ds, kind, mode, i + 1, d)
        for ds in ("dsA", "dsB")
        for kind in ("svd", "random-subspace")
        for mode in ("recursive", "direct")
        for i, d in enumerate(steps)
    }
    assert {(r.dataset, r.compressor, r.mode, r.step, r.dim) for r in rest} == expected
    base_mean = {b.dataset: b.mean_f1 for b in baselines}
    for r in rest:
        assert r.epsilon_f1 == pytest.approx(r.mean_f1 - base_mean[r.dataset])


def test_run_experiment_thread_invariant_bytes(tmp_path):
    manifest = small_manifest(tmp_path, names=("only",))
    dumps = []
    for threads in (1, 4):
        table = run_experiment(small_config(manifest, threads=threads))
        table.meta["config"]["threads"] = 0  # ignore the knob itself
        out = tmp_path / f"r{threads}.json"
        emit_json(table, out)
        dumps.append(out.read_bytes())
    assert dumps[0] == dumps[1]


def test_run_experiment_missing_labels_continues(tmp_path):
    manifest = small_manifest(tmp_path)
    entries = json.loads(manifest.read_text())
    entries[0]["labels"] = "missing.labels"
    manifest.write_text(json.dumps(entries))
    table = run_experiment(small_config(manifest))
    assert len(table.meta["errors"]) == 1
    assert "dsA" in table.meta["errors"][0]
    assert {r.dataset for r in table.records} == {"dsB"}


def test_run_experiment_json_is_deterministic(tmp_path):
    manifest = small_manifest(tmp_path, names=("only",))
    a = table_to_dict(run_experiment(small_config(manifest)))
    b = table_to_dict(run_experiment(small_config(manifest)))
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)
