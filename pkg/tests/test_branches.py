from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bozd.branches import (
    J_at,
    discriminant_zeros_in_x,
    global_identity_residual,
    hprime_factored,
    solve_branches,
    weak_limit_ubar,
)
from bozd.errors import NearCaustic, NonPositiveTime
from bozd.rational import LaxOleinikPoint, eval_h_prime, eval_u0, lorentzian, two_pole_fixture

# first caustic of u0 = 2/(1+x^2): min over y of (1+y^2)^2/(8y) at y = 1/sqrt(3)
LORENTZ_BREAKING_T = 2.0 * math.sqrt(3.0) / 9.0


def lorentzian_caustics(t: float) -> np.ndarray:
    """x = y + 2t u0(y) at the real roots of 1 + 2t u0'(y) = 0, i.e. (1+y^2)^2 = 8ty."""
    ys = np.roots([1.0, 0.0, 2.0, -8.0 * t, 1.0])
    ys = np.sort(ys[np.abs(ys.imag) < 1e-9].real)
    return np.sort(ys + 4.0 * t / (1.0 + ys ** 2))


class TestBranches:
    def test_roots_solve_characteristic_equation(self):
        data = two_pole_fixture()
        pt = LaxOleinikPoint(4.5, 4.5)
        br = solve_branches(data, pt)
        y = br.real_roots
        np.testing.assert_allclose(y + 2 * pt.t * eval_u0(data, y), pt.x, atol=1e-11)
        np.testing.assert_allclose(br.branch_values, eval_u0(data, y), atol=1e-12)

    def test_count_is_two_n_plus_one(self):
        data = two_pole_fixture()
        br = solve_branches(data, LaxOleinikPoint(3.0, 6.0))
        assert len(br.all_roots) == 2 * data.N + 1

    def test_single_branch_before_breaking(self):
        data = lorentzian()
        for x in np.linspace(-5.0, 5.0, 21):
            assert J_at(data, LaxOleinikPoint(0.9 * LORENTZ_BREAKING_T, float(x))) == 0

    def test_three_branches_between_caustics(self):
        data = lorentzian()
        lo, hi = lorentzian_caustics(1.0)
        br = solve_branches(data, LaxOleinikPoint(1.0, 0.5 * (lo + hi)))
        assert br.J == 1

    def test_weak_limit_alternating_sum(self):
        br = solve_branches(lorentzian(), LaxOleinikPoint(1.0, 3.4))
        u = br.branch_values
        assert weak_limit_ubar(br) == pytest.approx(u[0] - u[1] + u[2], abs=1e-15)

    def test_near_caustic_raises(self):
        x_c = lorentzian_caustics(1.0)[0]
        with pytest.raises(NearCaustic):
            solve_branches(lorentzian(), LaxOleinikPoint(1.0, float(x_c)))

    def test_nonpositive_time_raises(self):
        with pytest.raises(NonPositiveTime):
            solve_branches(lorentzian(), LaxOleinikPoint(0.0, 1.0))


class TestIdentities:
    @pytest.mark.parametrize("t,x", [(0.3, 0.0), (1.0, 3.4), (4.5, 4.5), (3.0, 7.0)])
    def test_global_identity(self, t, x):
        data = two_pole_fixture() if t > 2 else lorentzian()
        br = solve_branches(data, LaxOleinikPoint(t, x))
        assert global_identity_residual(data, br) < 1e-10

    def test_factored_hprime(self):
        data = two_pole_fixture()
        pt = LaxOleinikPoint(4.5, 4.5)
        br = solve_branches(data, pt)
        z = 0.4 + 0.7j
        assert abs(2 * pt.t * eval_h_prime(data, pt, z) - hprime_factored(data, br, z)) < 1e-10


class TestCaustics:
    @pytest.mark.parametrize("t", [0.5, 1.0, 2.0, 3.0])
    def test_lorentzian_zeros_match_closed_form(self, t):
        found = discriminant_zeros_in_x(lorentzian(), t, (-10.0, 30.0), 4000)
        np.testing.assert_allclose(found, lorentzian_caustics(t), atol=1e-9)

    def test_none_before_breaking(self):
        assert len(discriminant_zeros_in_x(lorentzian(), 0.3, (-10.0, 30.0), 4000)) == 0

    def test_two_pole_caustic_in_table_window(self):
        found = discriminant_zeros_in_x(two_pole_fixture(), 4.5, (2.0, 8.0), 4000)
        np.testing.assert_allclose(found, [7.4193016], atol=1e-6)

    @settings(max_examples=20, deadline=None)
    @given(st.floats(0.2, 4.0))
    def test_at_most_four_n(self, t):
        data = two_pole_fixture()
        found = discriminant_zeros_in_x(data, t, (-30.0, 60.0), 6000)
        assert len(found) <= 4 * data.N
