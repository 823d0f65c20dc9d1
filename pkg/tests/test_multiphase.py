from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bozd.errors import ConfigError
from bozd.multiphase import (
    JPhaseSpec,
    dk_matrix,
    jphase_u,
    one_phase_parameters,
    periodic_wave,
    traveling_speed,
)
from bozd.zd import U_r, gamma_modulus_sq

ascending3 = st.tuples(st.floats(-2, 2), st.floats(0.1, 2), st.floats(0.1, 2)).map(
    lambda v: (v[0], v[0] + v[1], v[0] + v[1] + v[2]))


class TestSpec:
    def test_even_length_rejected(self):
        with pytest.raises(ConfigError):
            JPhaseSpec(np.array([0.0, 1.0]), np.array([1.0]), 0.1)

    def test_unordered_rejected(self):
        with pytest.raises(ConfigError):
            JPhaseSpec.from_phases([0.0, 2.0, 1.0], [0.0], 0.1)

    def test_modulus_violation_rejected(self):
        R = np.array([0.0, 1.0, 2.0])
        good = math.sqrt(gamma_modulus_sq(R)[0])
        with pytest.raises(ConfigError, match="modulus"):
            JPhaseSpec(R, np.array([1.01 * good]), 0.1)

    def test_nonpositive_epsilon_rejected(self):
        with pytest.raises(ConfigError):
            JPhaseSpec.from_phases([0.0, 1.0, 2.0], [0.0], 0.0)


class TestOnePhase:
    @settings(max_examples=40, deadline=None)
    @given(ascending3, st.floats(-3, 3), st.floats(0.02, 0.5), st.floats(0, 2), st.floats(-3, 3))
    def test_reduces_to_traveling_wave(self, R, phase, eps, t, x):
        spec = JPhaseSpec.from_phases(R, [phase], eps)
        M, r, a, alpha = one_phase_parameters(spec)
        wave = float(periodic_wave(M, r, a, alpha, eps, t, x))
        assert abs(jphase_u(spec, t, x) - wave) < 1e-10 * (1.0 + abs(wave))

    @settings(max_examples=30, deadline=None)
    @given(ascending3, st.floats(-3, 3), st.floats(0.05, 0.5), st.floats(-2, 2))
    def test_galilean_shift(self, R, phase, eps, shift):
        # u -> u + a with x -> x - 2 a t maps solutions of u_t + (u^2)_x = eps d_x |D| u to solutions
        t, x = 0.7, 0.3
        base = JPhaseSpec.from_phases(R, [phase], eps)
        moved = JPhaseSpec.from_phases(np.asarray(R) + shift, [phase], eps)
        assert abs(jphase_u(moved, t, x + 2 * shift * t) - (jphase_u(base, t, x) + shift)) < 1e-9

    def test_peak_to_trough_and_period(self):
        M, r, a, eps = 1.3, 0.6, 0.2, 0.05
        period = 2 * math.pi * eps / M
        xs = np.linspace(0.0, period, 20001)
        u = periodic_wave(M, r, a, 0.4, eps, 0.0, xs)
        assert u.max() - u.min() == pytest.approx(4 * M * r / (1 - r * r), rel=1e-7)
        np.testing.assert_allclose(periodic_wave(M, r, a, 0.4, eps, 0.0, xs + period), u, atol=1e-11)

    def test_traveling_invariance(self):
        M, r, a, eps = 0.8, 0.4, -0.3, 0.1
        c = traveling_speed(M, r, a)
        xs = np.linspace(-1, 1, 11)
        np.testing.assert_allclose(periodic_wave(M, r, a, 0.0, eps, 2.0, xs + 2.0 * c),
                                   periodic_wave(M, r, a, 0.0, eps, 0.0, xs), atol=1e-12)

    def test_speed_formula(self):
        assert traveling_speed(2.0, 0.5, 0.0) == pytest.approx(2.0 * 1.25 / 0.75)

    def test_wave_validation(self):
        with pytest.raises(ConfigError):
            periodic_wave(-1.0, 0.5, 0.0, 0.0, 0.1, 0.0, 0.0)
        with pytest.raises(ConfigError):
            periodic_wave(1.0, 1.0, 0.0, 0.0, 0.1, 0.0, 0.0)

    def test_mean_of_ur_is_one(self):
        theta = 2 * math.pi * np.arange(4096) / 4096
        assert U_r(0.7, theta).mean() == pytest.approx(1.0, abs=1e-12)


class TestTwoPhase:
    def test_pde_residual_small(self):
        # u_t + (u^2)_x - eps d_x H[u_x] vanishes; checked with Fourier differentiation in x
        # on a window that is periodic for the chosen R (wavenumbers 1 and 2 times base)
        eps = 0.25
        R = np.array([0.0, 1.0, 2.0, 3.0, 5.0])
        spec = JPhaseSpec.from_phases(R, [0.3, 1.1], eps)
        period = 2 * math.pi * eps
        n = 512
        xs = period * np.arange(n) / n
        dt = 1e-5

        def profile(t):
            return np.array([jphase_u(spec, t, float(x)) for x in xs])

        u = profile(0.0)
        ut = (profile(dt) - profile(-dt)) / (2 * dt)
        k = 2 * math.pi * np.fft.fftfreq(n, d=period / n)
        spectrum = np.fft.fft(u)
        ux = np.fft.ifft(1j * k * spectrum).real
        dispersion = np.fft.ifft(1j * k * np.abs(k) * spectrum).real
        residual = ut + 2 * u * ux - eps * dispersion
        assert np.max(np.abs(residual)) < 1e-5 * np.max(np.abs(ut))

    def test_matrix_diagonal(self):
        spec = JPhaseSpec.from_phases([0.0, 1.0, 2.0, 3.0, 5.0], [0.0, 0.0], 0.1)
        M = dk_matrix(spec, 0.0, 0.0)
        np.testing.assert_allclose(np.diag(M) - spec.gamma, [1 / (1.0 - 2.0), 1 / (3.0 - 5.0)])
