from __future__ import annotations

import numpy as np
import pytest
from numpy.polynomial.laguerre import laggauss

from bozd.errors import ConfigError
from bozd.matsuno import MatsunoSpec, laguerre_residual, laguerre_zeros, u_matsuno, u_matsuno_grid


class TestLaguerre:
    @pytest.mark.parametrize("N", [1, 2, 5, 16, 64])
    def test_zeros_match_gauss_laguerre_nodes(self, N):
        np.testing.assert_allclose(laguerre_zeros(N), laggauss(N)[0], rtol=1e-12)

    def test_residual_small(self):
        assert laguerre_residual(128, laguerre_zeros(128)).max() < 1e-10

    def test_order_validation(self):
        with pytest.raises(ConfigError):
            MatsunoSpec.for_order(0)


class TestSolitons:
    def test_one_soliton_closed_form(self):
        # N = 1: lambda = -1/2 and the determinant is 1 + i(x - t), so u = 2/(1 + (x - t)^2)
        spec = MatsunoSpec.for_order(1)
        for t, x in [(0.0, 0.0), (0.5, 0.3), (1.0, 2.0), (2.0, -1.0)]:
            assert u_matsuno(spec, t, x) == pytest.approx(2.0 / (1.0 + (x - t) ** 2), rel=1e-13)

    @pytest.mark.parametrize("N", [2, 4, 8])
    def test_initial_profile_is_lorentzian(self, N):
        xs = np.linspace(-4.0, 4.0, 17)
        np.testing.assert_allclose(u_matsuno_grid(MatsunoSpec.for_order(N), 0.0, xs),
                                   2.0 / (1.0 + xs ** 2), rtol=1e-10)

    def test_mass_conserved(self):
        # int u dx = 2 pi for all t; the 1/x^2 tails are added analytically
        spec = MatsunoSpec.for_order(4)
        xs = np.linspace(-400.0, 400.0, 400001)
        u = u_matsuno_grid(spec, 1.0, xs)
        mass = np.trapezoid(u, xs) if hasattr(np, "trapezoid") else np.trapz(u, xs)
        assert mass + 2.0 * 2.0 / 400.0 == pytest.approx(2.0 * np.pi, abs=2e-3)
