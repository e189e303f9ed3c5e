"""Kernel correctness against brute-force oracles, plus compiled/python parity."""

import numpy as np
import pytest

import thermotrack.kernels as K
import thermotrack.kernels._py as PY
from oracles import bilinear_point, flood_fill_components, otsu_exhaustive

try:
    import thermotrack.kernels._core as CORE

    IMPLS = [PY, CORE]
except ImportError:
    CORE = None
    IMPLS = [PY]


@pytest.fixture(params=IMPLS, ids=lambda m: m.__name__.rsplit(".", 1)[-1])
def impl(request):
    return request.param


def random_mask(rng, p=0.3):
    return rng.random((12, 16)) < p


def partition_from_labels(labels, count):
    return [
        frozenset(map(tuple, np.argwhere(labels == lab))) for lab in range(1, count + 1)
    ]


class TestLabelComponents:
    def test_empty(self, impl):
        labels, n = impl.label_components(np.zeros((12, 16), bool))
        assert n == 0 and not labels.any()

    def test_diagonal_is_connected(self, impl):
        m = np.zeros((12, 16), bool)
        m[2, 3] = m[3, 4] = True
        _, n = impl.label_components(m)
        assert n == 1

    def test_matches_flood_fill_oracle(self, impl):
        rng = np.random.default_rng(42)
        for _ in range(300):
            m = random_mask(rng, rng.uniform(0.05, 0.7))
            labels, n = impl.label_components(m)
            got = set(partition_from_labels(labels, n))
            want = set(flood_fill_components(m))
            assert got == want

    def test_label_order_is_first_pixel_row_major(self, impl):
        m = np.zeros((12, 16), bool)
        m[0, 5] = True
        m[3, 0] = True
        labels, n = impl.label_components(m)
        assert n == 2
        assert labels[0, 5] == 1 and labels[3, 0] == 2


class TestOtsu:
    def test_degenerate(self, impl):
        h = np.zeros(256, np.int64)
        h[17] = 192
        assert impl.otsu_threshold(h) == -1
        assert impl.otsu_threshold(np.zeros(256, np.int64)) == -1

    def test_two_level(self, impl):
        h = np.zeros(256, np.int64)
        h[0] = 188
        h[255] = 4
        t = impl.otsu_threshold(h)
        assert t == otsu_exhaustive(h)
        # warm (> t) must be exactly the 255 bin
        assert 0 <= t < 255

    def test_matches_exhaustive_oracle(self, impl):
        rng = np.random.default_rng(7)
        for _ in range(200):
            vals = rng.integers(0, 256, 192)
            h = np.bincount(vals, minlength=256)
            assert impl.otsu_threshold(h) == otsu_exhaustive(h)


class TestBilinear:
    def test_identity(self, impl):
        rng = np.random.default_rng(0)
        src = rng.uniform(0, 255, (12, 16))
        out = impl.bilinear_resize(src, 12, 16)
        np.testing.assert_array_equal(out, src)

    def test_constant(self, impl):
        src = np.full((12, 16), 42.0)
        out = impl.bilinear_resize(src, 600, 800)
        np.testing.assert_allclose(out, 42.0)

    def test_matches_pointwise_oracle(self, impl):
        rng = np.random.default_rng(3)
        src = rng.uniform(0, 255, (12, 16))
        out = impl.bilinear_resize(src, 60, 80)
        sy = 11.0 / 59.0
        sx = 15.0 / 79.0
        for i in range(0, 60, 7):
            for j in range(0, 80, 11):
                want = bilinear_point(src, i * sy, j * sx)
                assert out[i, j] == pytest.approx(want, abs=1e-12)

    def test_range_bounded(self, impl):
        rng = np.random.default_rng(9)
        src = rng.uniform(0, 255, (12, 16))
        out = impl.bilinear_resize(src, 600, 800)
        assert out.min() >= src.min() - 1e-12
        assert out.max() <= src.max() + 1e-12


@pytest.mark.skipif(CORE is None, reason="compiled kernels unavailable")
class TestParity:
    """Compiled and fallback kernels must agree bit-for-bit."""

    def test_labels(self):
        rng = np.random.default_rng(11)
        for _ in range(200):
            m = random_mask(rng, rng.uniform(0.05, 0.8))
            la, na = PY.label_components(m)
            lb, nb = CORE.label_components(m)
            assert na == nb
            np.testing.assert_array_equal(la, lb)

    def test_otsu(self):
        rng = np.random.default_rng(12)
        for _ in range(300):
            h = np.bincount(rng.integers(0, 256, 192), minlength=256)
            assert PY.otsu_threshold(h) == CORE.otsu_threshold(h)

    def test_bilinear(self):
        rng = np.random.default_rng(13)
        for _ in range(20):
            src = rng.uniform(-5, 300, (12, 16))
            a = PY.bilinear_resize(src, 600, 800)
            b = CORE.bilinear_resize(src, 600, 800)
            np.testing.assert_array_equal(a, b)


def test_selected_implementation_exported():
    assert K.IMPLEMENTATION in ("compiled", "python")
    assert callable(K.label_components)
