from __future__ import annotations

import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bozd.errors import ConfigError
from bozd.rational import (
    RationalInitialData,
    eval_u0,
    eval_u0_complex,
    eval_u0_prime,
    lorentzian,
    two_pole_fixture,
)


class TestValidation:
    def test_pole_on_real_axis_rejected(self):
        with pytest.raises(ConfigError, match="positive imaginary part"):
            RationalInitialData((2.0 - 0.5j,), (1.0,))

    def test_count_mismatch_rejected(self):
        with pytest.raises(ConfigError):
            RationalInitialData((1j, 2j), (1.0,))

    def test_coincident_poles_rejected(self):
        with pytest.raises(ConfigError, match="coincides"):
            RationalInitialData((1j, 1j), (1.0, 2.0))

    def test_empty_rejected(self):
        with pytest.raises(ConfigError):
            RationalInitialData((), ())


class TestEvaluation:
    def test_lorentzian_closed_form(self):
        xs = np.linspace(-5.0, 5.0, 101)
        np.testing.assert_allclose(eval_u0(lorentzian(), xs), 2.0 / (1.0 + xs ** 2), rtol=1e-14)

    def test_two_pole_fixture_values(self):
        data = two_pole_fixture()
        np.testing.assert_allclose(data.p, [1j, 16 + 1j])
        np.testing.assert_allclose(data.c, [1 - 1j, 1 + 1j / np.sqrt(2.0)])

    def test_complex_continuation_matches_real_line(self):
        data = two_pole_fixture()
        xs = np.linspace(-3.0, 20.0, 57)
        np.testing.assert_allclose(eval_u0_complex(data, xs).real, eval_u0(data, xs), rtol=1e-13)
        np.testing.assert_allclose(eval_u0_complex(data, xs).imag, 0.0, atol=1e-14)

    def test_derivative_against_central_difference(self):
        data = two_pole_fixture()
        z = 0.7 + 0.2j
        step = 1e-5
        fd = (eval_u0_complex(data, z + step) - eval_u0_complex(data, z - step)) / (2 * step)
        assert abs(eval_u0_prime(data, z) - fd) < 1e-8

    def test_dict_round_trip(self, tmp_path):
        data = two_pole_fixture()
        path = tmp_path / "data.json"
        path.write_text(json.dumps(data.to_dict()))
        back = RationalInitialData.load(path)
        np.testing.assert_array_equal(back.p, data.p)
        np.testing.assert_array_equal(back.c, data.c)


poles = st.tuples(st.floats(-5, 5), st.floats(0.2, 3)).map(lambda v: complex(*v))
residues = st.tuples(st.floats(-3, 3), st.floats(-3, 3)).map(lambda v: complex(*v))


class TestProperties:
    @settings(max_examples=50, deadline=None)
    @given(st.lists(st.tuples(poles, residues), min_size=1, max_size=4), st.floats(-50, 50))
    def test_u0_is_twice_real_part(self, pairs, x):
        ps = [p for p, _ in pairs]
        if min((abs(a - b) for i, a in enumerate(ps) for b in ps[:i]), default=1.0) < 1e-3:
            return
        data = RationalInitialData(tuple(ps), tuple(c for _, c in pairs))
        direct = sum(2.0 * (c / (x - p)).real for p, c in pairs)
        assert abs(eval_u0(data, x) - direct) <= 1e-12 * (1.0 + abs(direct))

    @settings(max_examples=30, deadline=None)
    @given(st.floats(0.5, 40.0))
    def test_decay_like_inverse_x(self, x):
        data = lorentzian()
        assert eval_u0(data, x) == pytest.approx(2.0 / (1.0 + x * x), rel=1e-13)
