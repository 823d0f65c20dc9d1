from __future__ import annotations

import math

import numpy as np
import pytest

from bozd.errors import QuadratureFailure
from bozd.quadrature import GAUSS_W, KRONROD_W, NODES, gk15_panel, integrate


class TestRule:
    def test_weights_sum_to_interval_length(self):
        assert KRONROD_W.sum() == pytest.approx(2.0, abs=1e-15)
        assert GAUSS_W.sum() == pytest.approx(2.0, abs=1e-15)

    def test_nodes_symmetric(self):
        np.testing.assert_allclose(NODES, -NODES[::-1], atol=1e-16)

    def test_kronrod_exact_for_degree_22(self):
        val, _ = gk15_panel(lambda x: (x ** 22)[:, None], -1.0, 1.0)
        assert val[0] == pytest.approx(2.0 / 23.0, rel=1e-13)


class TestAdaptive:
    def test_exponential(self):
        val, _ = integrate(lambda x: np.exp(x)[:, None], [0.0, 1.0], rtol=1e-13)
        assert val[0] == pytest.approx(math.e - 1.0, rel=1e-13)

    def test_vector_valued(self):
        f = lambda x: np.column_stack([np.sin(x), np.cos(x)])
        val, _ = integrate(f, [0.0, math.pi], rtol=1e-12, atol=1e-13)
        np.testing.assert_allclose(val, [2.0, 0.0], atol=1e-12)

    def test_oscillatory_complex(self):
        k = 40.0
        val, _ = integrate(lambda x: np.exp(1j * k * x)[:, None], [0.0, 1.0], rtol=1e-12, atol=1e-14)
        exact = (np.exp(1j * k) - 1.0) / (1j * k)
        assert abs(val[0] - exact) < 1e-12

    def test_breakpoints_at_kink(self):
        val, _ = integrate(lambda x: np.abs(x - 0.3)[:, None], [0.0, 0.3, 1.0], rtol=1e-14)
        assert val[0] == pytest.approx(0.5 * 0.09 + 0.5 * 0.49, rel=1e-14)

    def test_empty_range_raises(self):
        with pytest.raises(QuadratureFailure):
            integrate(lambda x: x[:, None], [1.0, 1.0])
