import math

import numpy as np
import pytest

from cantion import AnsatzState, SystemParams, initial_ansatz


class TestSystemParams:
    def test_valid(self):
        p = SystemParams(19.7, 16.0, 4.0, 0.0197, 0.0197)
        assert p.freq_a == 19.7 - 0.0197j
        assert p.freq_b == 16.0 - 0.0197j

    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(omega=0.0, nu=1.0, kappa=0.0, gamma_a=0.0, gamma_b=0.0),
            dict(omega=1.0, nu=-2.0, kappa=0.0, gamma_a=0.0, gamma_b=0.0),
            dict(omega=1.0, nu=1.0, kappa=-0.1, gamma_a=0.0, gamma_b=0.0),
            dict(omega=1.0, nu=1.0, kappa=0.1, gamma_a=-1e-9, gamma_b=0.0),
        ],
    )
    def test_invalid(self, kwargs):
        with pytest.raises(ValueError):
            SystemParams(**kwargs)

    def test_swapped(self):
        p = SystemParams(19.7, 16.0, 4.0, 0.01, 0.02)
        q = p.swapped()
        assert (q.omega, q.nu, q.gamma_a, q.gamma_b) == (16.0, 19.7, 0.02, 0.01)
        assert q.kappa == p.kappa


class TestInitialAnsatz:
    def test_vacuum(self):
        s = initial_ansatz(0.0)
        assert s.rho == 1.0
        assert s.alpha1 == 0.0 and s.alpha2 == 0.0 and s.alpha3 == 0.0

    def test_six_quanta_closed_forms(self):
        s = initial_ansatz(6.0)
        assert s.rho == pytest.approx(7.0 ** -0.25, abs=1e-15)
        assert s.alpha1 == pytest.approx(0.5 * math.sqrt(6.0 / 7.0), abs=1e-15)
        # the printed 6-digit values
        assert abs(s.rho - 0.614789) < 1e-6
        assert abs(s.alpha1 - 0.462910) < 1e-6
        assert s.alpha2 == 0.0 and s.alpha3 == 0.0

    def test_three_quanta(self):
        s = initial_ansatz(3.0)
        assert s.rho == pytest.approx(4.0 ** -0.25, abs=1e-15)
        assert s.alpha1 == pytest.approx(math.sqrt(3.0) / 4.0, abs=1e-15)

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            initial_ansatz(-0.1)

    def test_alpha1_below_half_for_any_occupation(self):
        for n0 in [0.0, 0.3, 1.0, 6.0, 50.0, 4000.0]:
            s = initial_ansatz(n0)
            assert 0.0 <= s.alpha1.real < 0.5
            assert s.is_normalizable()


class TestAnsatzState:
    def test_singular_value_diagonal(self):
        s = AnsatzState(1.0, 0.3, 0.0, 0.1j)
        # M = diag(0.6, 0.2j): singular values are the moduli
        assert s.max_singular_value() == pytest.approx(0.6, abs=1e-14)

    def test_singular_value_matches_numpy(self, rng):
        for _ in range(50):
            a = rng.standard_normal(3) + 1j * rng.standard_normal(3)
            s = AnsatzState(1.0, 0.3 * a[0], 0.3 * a[1], 0.3 * a[2])
            ref = np.linalg.svd(s.squeeze_matrix(), compute_uv=False)[0]
            assert s.max_singular_value() == pytest.approx(ref, rel=1e-12)

    def test_vector_round_trip(self):
        s = AnsatzState(0.5 + 0.1j, 0.2, -0.3j, 0.1 + 0.1j)
        assert AnsatzState.from_vector(s.as_vector()) == s

    def test_swapped(self):
        s = AnsatzState(1.0, 0.2, 0.3, 0.4j)
        w = s.swapped()
        assert (w.alpha1, w.alpha3) == (s.alpha3, s.alpha1)
