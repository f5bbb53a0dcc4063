import numpy as np
import pytest
from hypothesis import given, strategies as st

from cantion import (
    AnsatzState,
    NormSingular,
    fock_expand,
    fock_occupations,
    initial_ansatz,
    mean_occupations,
    series_norm_partial,
    series_occupation_partial,
    state_norm,
)
from cantion.validation import random_squeeze_state


class TestStateNorm:
    def test_vacuum(self):
        assert state_norm(AnsatzState(1.0, 0.0, 0.0, 0.0)) == 1.0

    def test_initial_states_normalized(self):
        for n0 in [0.0, 1.0, 3.0, 6.0, 17.5]:
            assert state_norm(initial_ansatz(n0)) == pytest.approx(1.0, abs=1e-12)

    def test_cross_squeezed_closed_form(self):
        # exp(z a^+ b^+)|00> has squared norm 1/(1-|z|^2)
        s = AnsatzState(1.0, 0.0, 0.5, 0.0)
        assert state_norm(s) == pytest.approx(4.0 / 3.0, rel=1e-14)

    def test_singular_raises(self):
        with pytest.raises(NormSingular):
            state_norm(AnsatzState(1.0, 0.5, 0.0, 0.0))  # M = diag(1, 0)

    def test_matches_fock_expansion(self, rng):
        for _ in range(30):
            s = random_squeeze_state(rng, smax=0.8)
            ref = fock_occupations(fock_expand(s, 140))
            assert state_norm(s) == pytest.approx(ref.norm, abs=1e-10)


class TestMeanOccupations:
    def test_initial_condition_forced(self):
        for n0 in [0.0, 0.7, 2.0, 6.0]:
            rec = mean_occupations(initial_ansatz(n0))
            assert rec.n_a == pytest.approx(n0, abs=1e-10)
            assert rec.n_b == pytest.approx(0.0, abs=1e-12)

    def test_two_mode_squeezed_value(self):
        rec = mean_occupations(AnsatzState(1.0, 0.0, 0.5, 0.0))
        assert rec.n_a == pytest.approx(1.0 / 3.0, rel=1e-13)
        assert rec.n_b == pytest.approx(1.0 / 3.0, rel=1e-13)

    def test_matches_fock_expansion(self, rng):
        worst = 0.0
        for _ in range(30):
            s = random_squeeze_state(rng, smax=0.8)
            rec = mean_occupations(s)
            ref = fock_occupations(fock_expand(s, 140))
            worst = max(worst, abs(rec.n_a - ref.n_a), abs(rec.n_b - ref.n_b))
        assert worst < 1e-10

    @given(
        a1=st.floats(0.0, 0.35),
        a3=st.floats(0.0, 0.35),
        phase=st.floats(0.0, 2 * np.pi),
    )
    def test_mode_swap_and_phase_invariance(self, a1, a3, phase):
        s = AnsatzState(0.8, a1, 0.1j, a3 * 1j)
        swapped = mean_occupations(s.swapped())
        rec = mean_occupations(s)
        assert swapped.n_a == pytest.approx(rec.n_b, abs=1e-13)
        assert swapped.n_b == pytest.approx(rec.n_a, abs=1e-13)
        assert swapped.norm == pytest.approx(rec.norm, abs=1e-13)
        rotated = AnsatzState(s.rho * np.exp(1j * phase), s.alpha1, s.alpha2, s.alpha3)
        rot = mean_occupations(rotated)
        assert rot.norm == pytest.approx(rec.norm, rel=1e-14)
        assert rot.n_a == pytest.approx(rec.n_a, abs=1e-14)


class TestSeries:
    def test_trivial(self):
        assert series_norm_partial(0.0, 1) == 1.0
        assert series_occupation_partial(0.0, 5) == 1.0

    def test_quarter_values(self):
        assert series_norm_partial(0.25, 60) == pytest.approx(0.75 ** -0.5, abs=1e-12)
        assert series_occupation_partial(0.25, 80) == pytest.approx(0.75 ** -1.5, abs=1e-12)

    def test_heavy_tail_values(self):
        x = 0.462910
        assert series_norm_partial(x, 400) == pytest.approx((1 - 4 * x * x) ** -0.5, abs=1e-9)
        assert series_occupation_partial(x, 600) == pytest.approx((1 - 4 * x * x) ** -1.5, abs=1e-6)

    def test_domain_errors(self):
        for bad in (0.5, -0.5, 0.7):
            with pytest.raises(ValueError):
                series_norm_partial(bad, 10)
            with pytest.raises(ValueError):
                series_occupation_partial(bad, 10)

    @given(x=st.floats(-0.4, 0.4))
    def test_converges_to_closed_form(self, x):
        assert series_norm_partial(x, 300) == pytest.approx((1 - 4 * x * x) ** -0.5, abs=1e-10)
        assert series_occupation_partial(x, 300) == pytest.approx((1 - 4 * x * x) ** -1.5, abs=1e-9)

    def test_single_mode_identities_reproduce_moments(self):
        # with alpha2 = alpha3 = 0 the closed forms reduce to the series limits
        for n0 in [1.0, 3.0, 6.0]:
            s = initial_ansatz(n0)
            x = abs(s.alpha1)
            norm_series = abs(s.rho) ** 2 * series_norm_partial(x, 800)
            assert norm_series == pytest.approx(state_norm(s), abs=1e-9)
            # rho^2 * occupation-series = unnormalized <a^+a> + norm
            rec = mean_occupations(s)
            lhs = abs(s.rho) ** 2 * series_occupation_partial(x, 1200)
            rhs = rec.n_a * rec.norm + rec.norm
            assert lhs == pytest.approx(rhs, abs=2e-7)
