from __future__ import annotations

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from bozd.roots import aberth, newton_polish


def _match(found, expected):
    found = list(found)
    worst = 0.0
    for r in expected:
        k = int(np.argmin(np.abs(np.array(found) - r)))
        worst = max(worst, abs(found.pop(k) - r))
    return worst


class TestAberth:
    def test_cubic_with_known_roots(self):
        roots = aberth([1.0, -6.0, 11.0, -6.0])
        np.testing.assert_allclose(np.sort(roots.real), [1.0, 2.0, 3.0], atol=1e-12)
        np.testing.assert_allclose(roots.imag, 0.0, atol=1e-12)

    def test_unit_roots(self):
        n = 7
        roots = aberth([1.0] + [0.0] * (n - 1) + [-1.0])
        np.testing.assert_allclose(np.abs(roots), 1.0, atol=1e-12)
        assert _match(roots, np.exp(2j * np.pi * np.arange(n) / n)) < 1e-12

    def test_warm_start(self):
        expected = np.array([0.5 + 1j, 0.5 - 1j, -2.0])
        coeffs = np.poly(expected)
        roots = aberth(coeffs, init=expected + 0.01)
        assert _match(roots, expected) < 1e-12

    def test_degree_zero(self):
        assert len(aberth([3.0])) == 0

    @settings(max_examples=40, deadline=None)
    @given(st.lists(st.tuples(st.floats(-4, 4), st.floats(-4, 4)), min_size=1, max_size=9))
    def test_random_separated_roots(self, pairs):
        expected = np.array([complex(a, b) for a, b in pairs])
        gaps = np.abs(expected[:, None] - expected[None, :]) + np.eye(len(expected))
        if gaps.min() < 0.2:
            return
        roots = aberth(np.poly(expected))
        assert _match(roots, expected) < 1e-8


class TestNewtonPolish:
    def test_square_root_of_two(self):
        z, _ = newton_polish(lambda z: z * z - 2.0, lambda z: 2.0 * z, 1.4 + 0j, tol=1e-15)
        assert abs(z - np.sqrt(2.0)) < 1e-14
