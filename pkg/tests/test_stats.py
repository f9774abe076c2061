import numpy as np
import pytest

from core.errors import StatsError
from core.stats import (
    Q_ALPHA,
    CriticalDistance,
    average_ranks,
    cd_diagram_layout,
    friedman_test,
    nemenyi_cd,
)


def test_average_ranks_two_methods():
    r = average_ranks(np.array([[0.9, 0.8], [0.7, 0.6]]))
    np.testing.assert_array_equal(r.avg_ranks, [1.0, 2.0])


def test_average_ranks_tie_convention():
    r = average_ranks(np.array([[0.5, 0.5]]))
    np.testing.assert_array_equal(r.ranks[0], [1.5, 1.5])


def test_average_ranks_all_identical():
    r = average_ranks(np.full((4, 5), 0.3))
    np.testing.assert_array_equal(r.avg_ranks, [3.0] * 5)


def test_average_ranks_row_sums():
    rng = np.random.default_rng(0)
    scores = rng.random((6, 7))
    r = average_ranks(scores)
    k = 7
    np.testing.assert_allclose(r.ranks.sum(axis=1), k * (k + 1) / 2)


def test_average_ranks_rejects_non_finite():
    with pytest.raises(StatsError):
        average_ranks(np.array([[0.1, np.nan]]))


def test_friedman_identical_methods():
    res = friedman_test(average_ranks(np.full((5, 3), 0.5)))
    assert res.chi2_f == 0.0
    assert res.p_value == 1.0


def test_friedman_unanimous_rankings():
    # Hand evaluation: k=3, N=4, rank sums (4, 8, 12) give chi2 = 8;
    # chi-square survival with 2 dof at 8 is exp(-4).
    scores = np.tile([0.9, 0.6, 0.3], (4, 1))
    res = friedman_test(average_ranks(scores))
    assert res.chi2_f == pytest.approx(8.0, abs=1e-12)
    assert res.p_value == pytest.approx(np.exp(-4.0), rel=1e-9)


def test_friedman_nonnegative():
    rng = np.random.default_rng(1)
    for _ in range(30):
        scores = rng.random((int(rng.integers(2, 8)), int(rng.integers(2, 6))))
        assert friedman_test(average_ranks(scores)).chi2_f >= 0.0


def test_friedman_rank_invariance_under_monotone_transform():
    rng = np.random.default_rng(2)
    scores = rng.random((5, 4))
    a = friedman_test(average_ranks(scores))
    b = friedman_test(average_ranks(np.exp(3.0 * scores) + 7.0))
    assert a.chi2_f == pytest.approx(b.chi2_f)
    assert a.p_value == pytest.approx(b.p_value)


def test_friedman_degenerate_input():
    with pytest.raises(StatsError):
        friedman_test(average_ranks(np.array([[0.1, 0.2]])))


def test_nemenyi_formula_and_homogeneity():
    for k in (3, 8, 15):
        for n in (4, 9, 17):
            cd = nemenyi_cd(k, n, 0.05)
            assert cd.cd == pytest.approx(cd.q_alpha * np.sqrt(k * (k + 1) / (6.0 * n)))
            assert nemenyi_cd(k, 4 * n, 0.05).cd == pytest.approx(cd.cd / 2.0, rel=1e-15)


def test_nemenyi_known_table_values():
    # Cross-check the generated table against published critical values.
    assert Q_ALPHA[0.05][2] == pytest.approx(1.960, abs=2e-3)
    assert Q_ALPHA[0.05][3] == pytest.approx(2.343, abs=2e-3)
    assert Q_ALPHA[0.05][10] == pytest.approx(3.164, abs=2e-3)
    assert Q_ALPHA[0.10][2] == pytest.approx(1.645, abs=2e-3)
    assert Q_ALPHA[0.10][5] == pytest.approx(2.459, abs=2e-3)
    cd = nemenyi_cd(3, 17, 0.05)
    assert cd.cd == pytest.approx(Q_ALPHA[0.05][3] * np.sqrt(12.0 / 102.0))


def test_nemenyi_out_of_table():
    with pytest.raises(StatsError):
        nemenyi_cd(21, 10, 0.05)
    with pytest.raises(StatsError):
        nemenyi_cd(1, 10, 0.05)
    with pytest.raises(StatsError):
        nemenyi_cd(5, 10, 0.01)


def test_groups_all_equal_ranks():
    r = average_ranks(np.full((3, 4), 1.0))
    groups = cd_diagram_layout(r, nemenyi_cd(4, 3, 0.05))
    assert len(groups) == 1
    assert set(groups[0].methods) == set(r.methods)


def test_groups_far_separated_singletons():
    scores = np.tile([0.9, 0.1], (30, 1))
    r = average_ranks(scores)
    groups = cd_diagram_layout(r, nemenyi_cd(2, 30, 0.05))
    assert [set(g.methods) for g in groups] == [{"m1"}, {"m2"}]


def test_groups_pairwise_gap_oracle():
    # Brute-force check of the stated example: ranks 1.0, 1.2, 3.0 at cd 0.5.
    r = average_ranks(np.array([[3.0, 2.0, 1.0]]))  # placeholder scores
    object.__setattr__(r, "avg_ranks", np.array([1.0, 1.2, 3.0]))
    groups = cd_diagram_layout(r, CriticalDistance(alpha=0.05, q_alpha=1.0, cd=0.5))
    assert [set(g.methods) for g in groups] == [{"m1", "m2"}, {"m3"}]
    for g in groups:
        assert g.hi - g.lo < 0.5


def test_groups_cover_and_maximal():
    rng = np.random.default_rng(3)
    scores = rng.random((8, 6))
    r = average_ranks(scores)
    cd = nemenyi_cd(6, 8, 0.05)
    groups = cd_diagram_layout(r, cd)
    covered = {m for g in groups for m in g.methods}
    assert covered == set(r.methods)
    ranks = dict(zip(r.methods, r.avg_ranks))
    for g in groups:
        span = [ranks[m] for m in g.methods]
        assert max(span) - min(span) < cd.cd
        outside = [m for m in r.methods if m not in g.methods]
        for m in outside:
            lo = min(min(span), ranks[m])
            hi = max(max(span), ranks[m])
            assert hi - lo >= cd.cd  # adding any method breaks the bound
