from __future__ import annotations

import numpy as np
import pytest

from bozd.errors import InsufficientData, JTooLarge, NearCaustic
from bozd.rational import lorentzian, two_pole_fixture
from bozd.verify import (
    SweepReport,
    caustic_window,
    error_sweep,
    l2_profile_check,
    loglog_slope,
    require_caustic_free,
    sample_grid,
    worker_count,
)
from bozd.branches import discriminant_zeros_in_x


class TestSlope:
    def test_first_order(self):
        eps = [2.0 ** -k for k in range(3, 8)]
        assert loglog_slope([(e, 3.0 * e) for e in eps]) == pytest.approx(1.0, abs=1e-12)

    def test_second_order(self):
        eps = [2.0 ** -k for k in range(3, 8)]
        assert loglog_slope([(e, 0.5 * e * e) for e in eps]) == pytest.approx(2.0, abs=1e-12)

    def test_uses_three_smallest(self):
        pairs = [(0.5, 100.0), (0.25, 0.25), (0.125, 0.125), (0.0625, 0.0625)]
        assert loglog_slope(pairs) == pytest.approx(1.0, abs=1e-12)

    def test_needs_three_points(self):
        with pytest.raises(InsufficientData):
            loglog_slope([(0.1, 0.1), (0.05, 0.05)])


class TestGrids:
    def test_sample_grid(self):
        np.testing.assert_allclose(sample_grid(4.0, 5.0, 4), [4.0, 4.25, 4.5, 4.75, 5.0])

    def test_report_validation(self):
        with pytest.raises(ValueError):
            SweepReport((0.0, 1.0), 1.0, [0.1, 0.05], [50, 100], [0.1, 0.05])
        with pytest.raises(ValueError):
            SweepReport((0.0, 1.0), 1.0, [0.05, 0.1], [100, 100], [0.1, 0.05])

    def test_caustic_detected(self):
        with pytest.raises(NearCaustic):
            require_caustic_free(two_pole_fixture(), 4.5, np.linspace(7.0, 8.0, 101))

    def test_workers_from_environment(self, monkeypatch):
        monkeypatch.setenv("BO_WORKERS", "3")
        assert worker_count() == 3
        monkeypatch.setenv("BO_WORKERS", "0")
        with pytest.raises(ValueError):
            worker_count()

    def test_caustic_window_contains_all_caustics(self):
        data = two_pole_fixture()
        lo, hi = caustic_window(data, 4.5)
        wide = discriminant_zeros_in_x(data, 4.5, (-200.0, 200.0), 20000)
        assert np.all((wide > lo) & (wide < hi))


class TestSweeps:
    def test_matsuno_reference_needs_reciprocal_integer(self):
        with pytest.raises(ValueError):
            error_sweep(lorentzian(), 1.0, (3.0, 3.2), [0.3, 0.2, 0.1], [100] * 3, "matsuno")

    def test_matsuno_sweep_small(self):
        report = error_sweep(lorentzian(), 1.0, (3.0, 3.2), [1 / 8, 1 / 16, 1 / 32], [200] * 3, "matsuno")
        assert len(report.max_errors) == 3
        assert all(e < 1.0 for e in report.max_errors)
        assert report.fitted_slope is not None


class TestL2:
    def test_norm_preserved_before_breaking(self):
        check = l2_profile_check(lorentzian(), 0.3, 0.1, window=(-3.0, 5.0), quad_tol=1e-11)
        assert check.caustics == []
        assert check.rel_gap < 1e-10

    def test_two_phase_window_rejected(self):
        with pytest.raises(JTooLarge):
            l2_profile_check(two_pole_fixture(), 4.5, 0.1)

    def test_raw_grid_matches_max_errors(self):
        report = error_sweep(lorentzian(), 1.0, (3.0, 3.2), [1 / 8, 1 / 16], [100, 200], "matsuno")
        grid = report.grid
        assert grid.shape[1] == 4
        for e, m, err in zip(report.epsilons, report.m, report.max_errors):
            rows = grid[grid[:, 0] == e]
            assert rows.shape[0] == m + 1
            assert np.max(np.abs(rows[:, 2] - rows[:, 3])) == err
        assert "grid" not in report.to_dict()
