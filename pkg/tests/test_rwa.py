import numpy as np
import pytest

from cantion import (
    DegenerateModes,
    IntegratorConfig,
    ModelKind,
    PRESETS,
    SystemParams,
    eigen_modes,
    initial_ansatz,
    integrate,
    mean_occupations,
    propagate_rwa,
    rwa_matrix,
    rwa_trajectory_states,
)

TIGHT = IntegratorConfig(rel_tol=1e-12, abs_tol=1e-14)


class TestRwaMatrix:
    def test_resonant_entries(self):
        k = rwa_matrix(PRESETS[2].params)
        assert k[0, 0] == pytest.approx(39.4 - 0.0394j)
        assert k[0, 1] == -1.8
        assert k[1, 0] == -3.6
        assert k[1, 2] == -3.6
        assert k[2, 1] == -1.8
        assert k[0, 2] == 0.0 and k[2, 0] == 0.0

    def test_decoupled_diagonal(self):
        p = SystemParams(19.7, 16.0, 0.0, 0.01, 0.02)
        k = rwa_matrix(p)
        assert np.allclose(k, np.diag([2 * p.freq_a, p.freq_a + p.freq_b, 2 * p.freq_b]))

    def test_trace(self, rng):
        for _ in range(20):
            p = SystemParams(
                rng.uniform(5, 40), rng.uniform(5, 40), rng.uniform(0, 6),
                rng.uniform(0, 0.1), rng.uniform(0, 0.1),
            )
            k = rwa_matrix(p)
            expected = 3 * (p.omega + p.nu) - 3j * (p.gamma_a + p.gamma_b)
            assert np.trace(k) == pytest.approx(expected, rel=1e-14)


class TestEigenModes:
    def test_first_exponent_exact(self):
        for fig in PRESETS:
            p = PRESETS[fig].params
            m = eigen_modes(p)[0]
            assert m.omega_big == -(p.gamma_a + p.gamma_b) - 1j * (p.omega + p.nu)

    def test_resonant_splitting(self):
        # equal frequencies and damping: the pair splits by +/- 2 kappa
        modes = eigen_modes(PRESETS[2].params)
        oms = sorted((m.omega_big for m in modes[1:]), key=lambda z: z.imag)
        assert oms[0] == pytest.approx(-0.0394 - 43.0j, abs=1e-12)
        assert oms[1] == pytest.approx(-0.0394 - 35.8j, abs=1e-12)

    def test_decoupled_exponents(self):
        p = SystemParams(19.7, 16.0, 0.0, 0.01, 0.02)
        oms = {m.omega_big for m in eigen_modes(p)}
        expected = {
            -2 * p.gamma_a - 2j * p.omega,
            -(p.gamma_a + p.gamma_b) - 1j * (p.omega + p.nu),
            -2 * p.gamma_b - 2j * p.nu,
        }
        for e in expected:
            assert min(abs(e - o) for o in oms) < 1e-12

    def test_eigen_equation_residual(self, rng):
        for _ in range(30):
            p = SystemParams(
                rng.uniform(5, 40), rng.uniform(5, 40), rng.uniform(0.1, 6),
                rng.uniform(0, 0.1), rng.uniform(0, 0.1),
            )
            k = rwa_matrix(p)
            for m in eigen_modes(p):
                res = k @ m.vec - (1j * m.omega_big) * m.vec
                assert np.max(np.abs(res)) < 1e-10 * np.max(np.abs(k))

    def test_ratio_relations(self):
        for fig in PRESETS:
            p = PRESETS[fig].params
            for m in eigen_modes(p):
                a10, a20, a30 = m.vec
                lam = 1j * m.omega_big
                lhs = p.kappa * a20
                assert lhs == pytest.approx((2 * p.freq_a - lam) * a10, abs=1e-10)
                assert lhs == pytest.approx((2 * p.freq_b - lam) * a30, abs=1e-10)

    def test_damped_never_grows(self, rng):
        for _ in range(30):
            p = SystemParams(
                rng.uniform(5, 40), rng.uniform(5, 40), rng.uniform(0, 6),
                rng.uniform(0, 0.1), rng.uniform(0, 0.1),
            )
            try:
                modes = eigen_modes(p)
            except DegenerateModes:
                continue
            assert all(m.omega_big.real <= 1e-12 for m in modes)

    def test_degenerate_raises(self):
        # kappa = 0 at exact resonance with equal damping: all exponents collide
        p = SystemParams(19.7, 19.7, 0.0, 0.0197, 0.0197)
        with pytest.raises(DegenerateModes):
            eigen_modes(p)


class TestPropagate:
    def test_identity_at_t0(self):
        for fig in PRESETS:
            s = propagate_rwa(6.0, PRESETS[fig].params, 0.0)
            ref = initial_ansatz(6.0)
            assert s.rho == pytest.approx(ref.rho, abs=1e-14)
            assert s.alpha1 == pytest.approx(ref.alpha1, abs=1e-12)
            assert abs(s.alpha2) < 1e-12 and abs(s.alpha3) < 1e-12

    def test_rho_frozen(self):
        p = PRESETS[3].params
        for t in (0.3, 1.0, 2.7):
            assert propagate_rwa(6.0, p, t).rho == initial_ansatz(6.0).rho

    def test_beam_splitter_full_transfer(self):
        # no damping, resonant: at t = pi/(2 kappa) the quanta sit entirely in mode b
        p = SystemParams(19.7, 19.7, 1.8, 0.0, 0.0)
        rec = mean_occupations(propagate_rwa(6.0, p, np.pi / (2 * p.kappa)))
        assert rec.n_a < 1e-6
        assert rec.n_b == pytest.approx(6.0, abs=1e-6)
        assert rec.norm == pytest.approx(1.0, abs=1e-9)

    def test_matches_integrator_on_presets(self):
        grid = np.arange(0.0, 3.0 + 1e-12, 0.1)
        for fig in PRESETS:
            p = PRESETS[fig]
            traj = integrate(initial_ansatz(p.n_a0), p.params, ModelKind.RWA, grid, TIGHT)
            states = rwa_trajectory_states(p.n_a0, p.params, grid)
            diff = np.abs(traj.alphas - np.array([s.as_vector() for s in states]))
            assert diff.max() < 1e-8

    def test_negative_time_rejected(self):
        with pytest.raises(ValueError):
            propagate_rwa(6.0, PRESETS[2].params, -0.1)
