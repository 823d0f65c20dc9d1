from __future__ import annotations

import numpy as np
import pytest

from bozd.identities import CHECKS, random_branches, random_data


class TestSampling:
    def test_random_data_poles_in_upper_half_plane(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            data = random_data(rng)
            assert 1 <= data.N <= 4
            assert np.all(data.p.imag > 0)

    @pytest.mark.parametrize("J", [0, 1, 2])
    def test_wanted_phase_count(self, J):
        _, _, br = random_branches(np.random.default_rng(J), want_j=J)
        assert br.J == J


@pytest.mark.parametrize("name,check,bound", CHECKS, ids=[c[0] for c in CHECKS])
def test_identity_on_random_samples(name, check, bound):
    rng = np.random.default_rng(2024)
    worst = max(check(rng) for _ in range(15))
    assert worst < bound, f"{name}: {worst}"
