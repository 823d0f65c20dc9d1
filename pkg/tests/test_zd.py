from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bozd.branches import solve_branches
from bozd.errors import NonPositiveModulus
from bozd.multiphase import JPhaseSpec, jphase_u
from bozd.rational import LaxOleinikPoint, eval_u0, lorentzian, two_pole_fixture
from bozd.zd import (
    U_r,
    fourier_coeff_Ur,
    gamma_modulus,
    gamma_modulus_sq,
    phi_closed_form,
    phi_integral_form,
    u_zd,
    u_zd_determinant,
    u_zd_one_phase,
    u_zd_sweep,
    zd_params,
)


class TestUr:
    @settings(max_examples=40, deadline=None)
    @given(st.floats(0.05, 0.9), st.integers(0, 7), st.sampled_from([1, 2]))
    def test_fourier_coefficients(self, r, n, p):
        theta = 2 * math.pi * np.arange(4096) / 4096
        numeric = np.mean(U_r(r, theta) ** p * np.cos(n * theta))
        assert abs(numeric - fourier_coeff_Ur(r, n, p)) < 1e-10 * max(1.0, fourier_coeff_Ur(r, n, p))

    def test_extremes(self):
        r = 0.3
        assert U_r(r, 0.0) == pytest.approx((1 + r) / (1 - r))
        assert U_r(r, math.pi) == pytest.approx((1 - r) / (1 + r))


class TestModuli:
    def test_one_phase_modulus(self):
        # J = 1: |gamma|^2 = (R2 - R0) / ((R1 - R0)(R2 - R1)^2)
        R = np.array([0.2, 1.0, 2.5])
        assert gamma_modulus_sq(R)[0] == pytest.approx((2.5 - 0.2) / ((1.0 - 0.2) * (2.5 - 1.0) ** 2))

    def test_nonpositive_modulus_raises(self):
        with pytest.raises(NonPositiveModulus):
            gamma_modulus(np.array([1.0, 0.0, 2.0]))


class TestPhi:
    @pytest.mark.parametrize("t,x", [(1.0, 3.4), (4.5, 4.5), (3.0, 7.0)])
    def test_closed_form_matches_integral(self, t, x):
        data = lorentzian() if t < 2 else two_pole_fixture()
        pt = LaxOleinikPoint(t, x)
        br = solve_branches(data, pt)
        for y in br.real_roots:
            assert abs(phi_closed_form(data, pt, br, y) - phi_integral_form(data, pt, br, y)) < 1e-6


class TestProfile:
    def test_single_branch_region_is_burgers(self):
        data = lorentzian()
        pt = LaxOleinikPoint(0.3, 0.4)
        br = solve_branches(data, pt)
        assert u_zd(data, pt, 0.01) == pytest.approx(eval_u0(data, br.real_roots[0]), abs=1e-14)

    @pytest.mark.parametrize("eps", [2.0 ** -3, 2.0 ** -6])
    def test_one_phase_closed_form_vs_determinant(self, eps):
        data = two_pole_fixture()
        pt = LaxOleinikPoint(4.5, 4.5)
        params = zd_params(data, pt)
        assert abs(u_zd_one_phase(params, eps) - u_zd_determinant(data, pt, eps, params, slow=False)) < 1e-10

    def test_frozen_parameters_give_exact_dk_solution(self):
        # the determinant with slow derivatives dropped is a J-phase solution in its fast phase
        data = two_pole_fixture()
        pt = LaxOleinikPoint(4.5, 4.5)
        params = zd_params(data, pt)
        eps = 0.05
        R = params.branches.branch_values
        spec = JPhaseSpec(R, params.gamma * np.exp(1j * params.theta / eps), eps)
        assert jphase_u(spec, 0.0, 0.0) == pytest.approx(
            u_zd_determinant(data, pt, eps, params, slow=False), abs=1e-10)

    def test_sweep_matches_pointwise(self):
        data = two_pole_fixture()
        xs = np.linspace(4.0, 5.0, 11)
        swept = u_zd_sweep(data, 4.5, xs, 2.0 ** -5)
        single = [u_zd(data, LaxOleinikPoint(4.5, float(x)), 2.0 ** -5) for x in xs]
        np.testing.assert_allclose(swept, single, atol=1e-12)
