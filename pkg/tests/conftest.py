import numpy as np
import pytest

from symlevy.emm import ModelParams


@pytest.fixture
def vg_params():
    """VG parameter set of the first price table (annual units)."""
    return ModelParams.from_kurtosis("vg", 0.03, 0.19, 4.0, 0.06)


@pytest.fixture
def nig_params():
    return ModelParams.from_kurtosis("nig", 0.03, 0.19, 4.0, 0.06)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def batch_mean_se(x, n_batches=100):
    """Mean and batch-means standard error of a large sample."""
    x = np.asarray(x, dtype=float)
    k = len(x) // n_batches
    means = x[: k * n_batches].reshape(n_batches, k).mean(axis=1)
    return float(x.mean()), float(means.std(ddof=1) / np.sqrt(n_batches))
