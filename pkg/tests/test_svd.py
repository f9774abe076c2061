import numpy as np
import pytest

from core.compressors import fit_svd, transform
from core.errors import CompressorError


def truncated_reconstruction_error(e, components):
    return np.linalg.norm(e - (e @ components) @ components.T)


def test_exact_svd_score_norms():
    e = np.diag([3.0, 2.0, 1.0])
    out = transform(fit_svd(e, 2, "exact"), e)
    np.testing.assert_allclose(np.linalg.norm(out, axis=0), [3.0, 2.0], atol=1e-12)


def test_exact_rank_preserves_inner_products():
    rng = np.random.default_rng(0)
    e = rng.standard_normal((20, 2)) @ rng.standard_normal((2, 8))
    out = transform(fit_svd(e, 2, "exact"), e)
    np.testing.assert_allclose(out @ out.T, e @ e.T, atol=1e-6)


def test_randomized_close_to_exact():
    # Oracle: exact truncated SVD gives the optimal Frobenius error.
    rng = np.random.default_rng(1)
    e = rng.standard_normal((100, 64))
    exact = fit_svd(e, 32, "exact")
    rand = fit_svd(e, 32, "randomized", seed=0)
    err_exact = truncated_reconstruction_error(e, exact.state.components)
    err_rand = truncated_reconstruction_error(e, rand.state.components)
    assert err_rand <= 1.05 * err_exact


def test_randomized_deterministic():
    rng = np.random.default_rng(2)
    e = rng.standard_normal((30, 16))
    a = transform(fit_svd(e, 4, "randomized", seed=9), e)
    b = transform(fit_svd(e, 4, "randomized", seed=9), e)
    assert np.all(a == b)


def test_d_out_out_of_range():
    e = np.ones((5, 3))
    with pytest.raises(CompressorError):
        fit_svd(e, 4, "exact")
    with pytest.raises(CompressorError):
        fit_svd(e, 0, "exact")


def test_transform_shape_and_new_data():
    rng = np.random.default_rng(3)
    e = rng.standard_normal((40, 10))
    fc = fit_svd(e, 5, "exact")
    other = rng.standard_normal((7, 10))
    assert transform(fc, other).shape == (7, 5)


def test_exact_columns_match_score_matrix_up_to_sign():
    rng = np.random.default_rng(4)
    u, _ = np.linalg.qr(rng.standard_normal((12, 6)))
    v, _ = np.linalg.qr(rng.standard_normal((6, 6)))
    s = np.array([9.0, 6.5, 4.0, 2.5, 1.2, 0.5])
    e = u @ np.diag(s) @ v.T
    out = transform(fit_svd(e, 3, "exact"), e)
    expected = u[:, :3] * s[:3]
    for j in range(3):
        assert min(
            np.abs(out[:, j] - expected[:, j]).max(),
            np.abs(out[:, j] + expected[:, j]).max(),
        ) < 1e-9
