import numpy as np
import pytest

from core.compressors import fit_cluster_aggregate, transform
from core.errors import CompressorError


def brute_force_two_clustering(points):
    """Exhaustive optimal 2-partition of points by within-cluster squared distance."""
    n = len(points)
    best, best_mask = np.inf, None
    for bits in range(1, 2 ** (n - 1)):  # point 0 always in cluster 0
        mask = np.array([(bits >> i) & 1 for i in range(n)], dtype=bool)
        inertia = 0.0
        for part in (points[mask], points[~mask]):
            if len(part) == 0:
                break
            inertia += float(np.sum((part - part.mean(axis=0)) ** 2))
        else:
            if inertia < best:
                best, best_mask = inertia, mask
    return best, best_mask


def test_two_block_columns_recovered_exactly():
    rng = np.random.default_rng(7)
    c1 = rng.standard_normal(20)
    c2 = rng.standard_normal(20)
    c2 -= (c2 @ c1) / (c1 @ c1) * c1  # make the two column values orthogonal
    e = np.column_stack([c1] * 4 + [c2] * 4)

    best_inertia, best_mask = brute_force_two_clustering(e.T.copy())
    assert best_inertia == pytest.approx(0.0, abs=1e-20)
    assert set(np.flatnonzero(best_mask).tolist()) in ({0, 1, 2, 3}, {4, 5, 6, 7})

    fc = fit_cluster_aggregate(e, 2, "mean", seed=0)
    out = transform(fc, e)
    got = {tuple(np.round(out[:, j], 10)) for j in range(2)}
    assert got == {tuple(np.round(c1, 10)), tuple(np.round(c2, 10))}


@pytest.mark.parametrize("agg", ["max", "mean", "median"])
def test_singleton_clusters_permute_input(agg):
    rng = np.random.default_rng(1)
    e = rng.standard_normal((12, 5))
    fc = fit_cluster_aggregate(e, 5, agg, seed=2)
    out = transform(fc, e)
    assert sorted(map(tuple, out.T)) == sorted(map(tuple, e.T))


def test_max_aggregation_per_row():
    e = np.array([[1.0, 0.0], [0.0, 1.0]])
    fc = fit_cluster_aggregate(e, 1, "max", seed=0)
    out = transform(fc, e)
    np.testing.assert_array_equal(out, [[1.0], [1.0]])


def test_assignment_is_full_partition():
    rng = np.random.default_rng(3)
    e = rng.standard_normal((9, 30)) * np.linspace(0.2, 5.0, 30)
    for k in (2, 7, 13):
        fc = fit_cluster_aggregate(e, k, "mean", seed=4)
        a = fc.state.assignment
        assert a.shape == (30,)
        assert set(a.tolist()) == set(range(k))  # no empty clusters after fit


def test_deterministic_given_seed():
    rng = np.random.default_rng(5)
    e = rng.standard_normal((8, 20))
    a = fit_cluster_aggregate(e, 4, "median", seed=11).state.assignment
    b = fit_cluster_aggregate(e, 4, "median", seed=11).state.assignment
    np.testing.assert_array_equal(a, b)


def test_agg_and_range_validation():
    e = np.ones((4, 3))
    with pytest.raises(CompressorError):
        fit_cluster_aggregate(e, 4, "mean", seed=0)
    with pytest.raises(CompressorError):
        fit_cluster_aggregate(e, 2, "sum", seed=0)
