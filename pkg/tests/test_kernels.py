"""Backend parity: the numba kernels must agree with the NumPy fallback."""

import numpy as np
import pytest

from viralab import _kernels
from viralab._kernels import available_backends

BACKENDS = available_backends()

needs_numba = pytest.mark.skipif(
    "numba" not in BACKENDS, reason="numba not importable"
)


@pytest.fixture
def arrays(rng):
    n = 5000
    return {
        "r": rng.integers(0, 5000, n).astype(float),
        "f": rng.integers(0, 5000, n).astype(float),
        "w": rng.integers(0, 100_000, n).astype(float),
        "d": rng.integers(0, 100_000, n).astype(float),
    }


@needs_numba
class TestParity:
    def test_influence_scores(self, arrays):
        a = BACKENDS["numpy"].influence_scores(
            arrays["r"], arrays["f"], arrays["w"], arrays["d"], 10.0
        )
        b = BACKENDS["numba"].influence_scores(
            arrays["r"], arrays["f"], arrays["w"], arrays["d"], 10.0
        )
        np.testing.assert_allclose(a, b, rtol=1e-14)

    def test_ratio_scores(self, arrays):
        a = BACKENDS["numpy"].follower_ratio_scores(arrays["r"], arrays["w"])
        b = BACKENDS["numba"].follower_ratio_scores(arrays["r"], arrays["w"])
        np.testing.assert_array_equal(a, b)

    def test_log_ratio_scores(self, arrays):
        a = BACKENDS["numpy"].log_ratio_scores(arrays["r"], arrays["w"], -1e18)
        b = BACKENDS["numba"].log_ratio_scores(arrays["r"], arrays["w"], -1e18)
        np.testing.assert_allclose(a, b, rtol=1e-14)

    def test_percentile_ranks(self, rng):
        n_authors = 40
        counts = rng.integers(1, 60, n_authors)
        offsets = np.zeros(n_authors + 1, dtype=np.int64)
        offsets[1:] = np.cumsum(counts)
        values = np.sort(rng.integers(0, 30, offsets[-1])).astype(float)
        # sort within each author slice
        values = np.concatenate(
            [np.sort(values[offsets[i]:offsets[i + 1]]) for i in range(n_authors)]
        )
        n = 3000
        author_idx = rng.integers(0, n_authors, n).astype(np.int64)
        rt = rng.integers(0, 35, n).astype(float)
        a = BACKENDS["numpy"].percentile_ranks(rt, author_idx, offsets, values)
        b = BACKENDS["numba"].percentile_ranks(rt, author_idx, offsets, values)
        np.testing.assert_array_equal(a, b)

    def test_logreg_fit(self, rng):
        x = rng.normal(size=(200, 8))
        y = (rng.random(200) < 0.5).astype(float)
        wa, ba, la = BACKENDS["numpy"].logreg_fit(x, y, 150, 0.2, 1e-3)
        wb, bb, lb = BACKENDS["numba"].logreg_fit(x, y, 150, 0.2, 1e-3)
        np.testing.assert_allclose(wa, wb, rtol=1e-8, atol=1e-12)
        assert ba == pytest.approx(bb, rel=1e-8, abs=1e-12)
        np.testing.assert_allclose(la, lb, rtol=1e-10)


class TestDispatch:
    def test_backend_is_declared(self):
        assert _kernels.BACKEND in BACKENDS

    def test_dispatched_functions_come_from_backend(self):
        mod = BACKENDS[_kernels.BACKEND]
        assert _kernels.influence_scores is mod.influence_scores
        assert _kernels.logreg_fit is mod.logreg_fit
