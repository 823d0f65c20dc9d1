from __future__ import annotations

import numpy as np
import pytest

from bozd import exact
from bozd.errors import ConfigError
from bozd.exact import (
    SolverConfig,
    build_contours,
    critical_points,
    explicit_contours,
    nonspecial_check,
    u_exact,
    u_exact_from_paths,
    u_exact_multi,
    u_exact_perturbed,
    u_exact_sweep,
)
from bozd.matsuno import MatsunoSpec, u_matsuno
from bozd.rational import LaxOleinikPoint, lorentzian, two_pole_fixture

LORENTZ_POINTS = [(0.5, 0.3), (1.0, 2.0), (2.0, -1.0), (1.5, 3.7)]


class TestAgainstSolitons:
    def test_one_soliton(self):
        # eps = 1 turns 2/(1+x^2) into the traveling soliton 2/(1 + (x - t)^2)
        data = lorentzian()
        for t, x in LORENTZ_POINTS:
            assert u_exact(data, LaxOleinikPoint(t, x), 1.0) == pytest.approx(
                2.0 / (1.0 + (x - t) ** 2), abs=1e-10)

    @pytest.mark.parametrize("N", [2, 4, 8])
    def test_matsuno(self, N):
        data = lorentzian()
        spec = MatsunoSpec.for_order(N)
        for t, x in LORENTZ_POINTS:
            assert abs(u_exact(data, LaxOleinikPoint(t, x), 1.0 / N) - u_matsuno(spec, t, x)) < 1e-9


class TestContours:
    @pytest.mark.parametrize("fixture,t,x", [("lorentzian", 1.0, 3.4), ("two-pole", 4.5, 4.5),
                                             ("two-pole", 0.5, 2.89)])
    def test_dominance_validated(self, fixture, t, x):
        data = lorentzian() if fixture == "lorentzian" else two_pole_fixture()
        cs = build_contours(data, LaxOleinikPoint(t, x))
        assert len(cs.paths) == 2 * data.N + 1
        for th, path in zip(cs.thimbles.values(), cs.paths):
            assert path.dominant_saddles[0] == th.saddle

    def test_critical_point_count(self):
        data = two_pole_fixture()
        assert len(critical_points(data, LaxOleinikPoint(4.5, 4.5))) == 2 * data.N + 1

    @pytest.mark.parametrize("fixture,t,x,eps", [("lorentzian", 1.0, 2.0, 0.125),
                                                 ("two-pole", 4.5, 4.3, 2.0 ** -5)])
    def test_node_jitter_invariance(self, fixture, t, x, eps):
        data = lorentzian() if fixture == "lorentzian" else two_pole_fixture()
        config = SolverConfig()
        pt = LaxOleinikPoint(t, x)
        moved = u_exact_perturbed(data, pt, eps, 1e-3, np.random.default_rng(0), config)
        assert abs(moved - u_exact(data, pt, eps, config)) < 10 * config.quad_tol

    def test_path_rotation_invariance(self, monkeypatch):
        data = two_pole_fixture()
        pt = LaxOleinikPoint(4.5, 4.5)
        base = u_exact(data, pt, 2.0 ** -5)
        monkeypatch.setattr(exact, "PATH_ROTATION", 0.12)
        assert abs(u_exact(data, pt, 2.0 ** -5) - base) < 1e-10

    def test_explicit_route_at_large_eps(self):
        data = lorentzian()
        pt = LaxOleinikPoint(1.0, 2.0)
        paths = explicit_contours(data, pt, 0.5)
        assert abs(u_exact_from_paths(data, pt, 0.5, paths) - u_exact(data, pt, 0.5)) < 1e-10


class TestSweeps:
    def test_sweep_matches_pointwise(self):
        data = two_pole_fixture()
        xs = np.linspace(4.0, 5.0, 9)
        eps = [2.0 ** -4, 2.0 ** -5]
        swept = u_exact_sweep(data, 4.5, xs, eps)
        assert swept.shape == (2, 9)
        for j, e in enumerate(eps):
            single = [u_exact(data, LaxOleinikPoint(4.5, float(x)), e) for x in xs]
            np.testing.assert_allclose(swept[j], single, atol=1e-10)

    def test_multi_matches_single(self):
        data = lorentzian()
        pt = LaxOleinikPoint(1.0, 3.0)
        eps = [0.25, 0.125]
        np.testing.assert_allclose(u_exact_multi(data, pt, eps),
                                   [u_exact(data, pt, e) for e in eps], atol=1e-12)


class TestConfig:
    def test_quad_tol_bounds(self):
        with pytest.raises(ConfigError):
            SolverConfig(quad_tol=1e-3)

    def test_truncation_bounds(self):
        with pytest.raises(ConfigError):
            SolverConfig(truncation=1e-4)

    def test_epsilon_positive(self):
        with pytest.raises(ConfigError):
            u_exact(lorentzian(), LaxOleinikPoint(1.0, 0.0), 0.0)


class TestNonspecial:
    def test_lorentzian_residue_sum_vanishes(self):
        report = nonspecial_check(lorentzian(), LaxOleinikPoint(1.0, 3.0))
        assert report.discriminant_ok
        assert not report.re_c_sums_ok

    def test_two_pole_generic(self):
        report = nonspecial_check(two_pole_fixture(), LaxOleinikPoint(4.5, 4.5))
        assert report.discriminant_ok and report.re_c_sums_ok
