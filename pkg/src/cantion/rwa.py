"""Closed-form propagation of the excitation-swap (RWA) model.

With the swap coupling only, the squeeze parameters obey the linear system
``i d/dt (alpha1, alpha2, alpha3)^T = K (alpha1, alpha2, alpha3)^T`` while
rho stays constant.  Writing ``alpha(t) = alpha0 * exp(Omega t)`` turns this
into the eigenproblem ``i Omega = eigenvalue of K``.

The spectrum has one exact member: because ``K[1,1] = (K[0,0] + K[2,2])/2``,
``lambda = K[1,1]`` is always an eigenvalue, i.e.
``Omega = -(gamma_a + gamma_b) - i(omega + nu)``.  Deflating it leaves the
quadratic ``(K00 - lam)(K22 - lam) = 4 kappa^2``, so the remaining pair
splits by ``+/- sqrt(((omega - nu) - i(gamma_a - gamma_b))^2 + 4 kappa^2)``
around the mean: at resonance with equal damping the normal-mode splitting
is ``2 kappa`` (full transfer period ``pi/kappa``).
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateModes
from .model import AnsatzState, SystemParams, initial_ansatz

__all__ = ["EigenMode", "rwa_matrix", "eigen_modes", "propagate_rwa", "rwa_trajectory_states"]

#: Relative spacing below which two exponents count as degenerate.
DEGENERACY_RTOL = 1e-10


@dataclass(frozen=True)
class EigenMode:
    """One decay-rotation exponent Omega with its (alpha1, alpha2, alpha3) direction."""

    omega_big: complex
    vec: np.ndarray

    @property
    def eigenvalue(self) -> complex:
        """The matrix eigenvalue lambda = i*Omega of the coefficient matrix."""
        return 1j * self.omega_big


def rwa_matrix(params: SystemParams) -> np.ndarray:
    """Coefficient matrix K of ``i d/dt alpha = K alpha`` for the swap model."""
    wa, wb, k = params.freq_a, params.freq_b, params.kappa
    return np.array(
        [
            [2.0 * wa, -k, 0.0],
            [-2.0 * k, wa + wb, -2.0 * k],
            [0.0, -k, 2.0 * wb],
        ],
        dtype=complex,
    )


def _null_vector(kmat: np.ndarray, lam: complex) -> np.ndarray:
    """Unit null vector of the (rank-2) matrix K - lam*I via row cross products."""
    a = kmat - lam * np.eye(3)
    candidates = [
        np.cross(a[0], a[1]),
        np.cross(a[0], a[2]),
        np.cross(a[1], a[2]),
    ]
    best = max(candidates, key=lambda v: float(np.linalg.norm(v)))
    nrm = np.linalg.norm(best)
    if nrm == 0.0:
        raise DegenerateModes(f"rank deficiency > 1 at eigenvalue {lam:.6g}")
    v = best / nrm
    # Deterministic phase: largest-magnitude component made real positive.
    pivot = v[np.argmax(np.abs(v))]
    return v * (abs(pivot) / pivot)


def eigen_modes(params: SystemParams) -> tuple[EigenMode, EigenMode, EigenMode]:
    """The three (Omega, eigenvector) pairs of the swap-model linear system.

    The first mode is always the exact ``Omega = -(gamma_a+gamma_b) - i(omega+nu)``;
    the other two solve the deflated quadratic and are ordered by increasing
    imaginary part of the matrix eigenvalue for determinism.

    Raises :class:`DegenerateModes` when two exponents coincide within
    ``1e-10 * max|Omega|`` (callers should fall back to numerical integration).
    """
    kmat = rwa_matrix(params)
    a, b = kmat[0, 0], kmat[2, 2]
    lam1 = kmat[1, 1]  # exact: (a + b) / 2
    # Deflated quadratic: lam^2 - (a+b) lam + ab - 4 kappa^2 = 0.
    half_diff = 0.5 * (a - b)
    root = cmath.sqrt(half_diff * half_diff + 4.0 * params.kappa**2)
    lam2, lam3 = lam1 - root, lam1 + root
    lams = [lam1] + sorted([lam2, lam3], key=lambda z: (z.imag, z.real))
    omegas = [-1j * lam for lam in lams]

    scale = max(abs(om) for om in omegas)
    for i in range(3):
        for j in range(i + 1, 3):
            if abs(omegas[i] - omegas[j]) <= DEGENERACY_RTOL * scale:
                raise DegenerateModes(
                    f"exponents {omegas[i]:.6g} and {omegas[j]:.6g} coincide"
                )
    return tuple(EigenMode(omega_big=om, vec=_null_vector(kmat, lam)) for om, lam in zip(omegas, lams))


def _mode_expansion(n_a0: float, params: SystemParams):
    """Eigenbasis, exponents, and expansion coefficients of the initial vector."""
    modes = eigen_modes(params)
    vmat = np.column_stack([m.vec for m in modes])
    omega = np.array([m.omega_big for m in modes])
    alpha0 = np.array([initial_ansatz(n_a0).alpha1, 0.0, 0.0], dtype=complex)
    coeff = np.linalg.solve(vmat, alpha0)
    return vmat, omega, coeff


def propagate_rwa(n_a0: float, params: SystemParams, t: float) -> AnsatzState:
    """Closed-form swap-model state at time ``t`` from the squeezed-vacuum start.

    Expands the initial (alpha1(0), 0, 0) in the eigenbasis and re-sums
    ``alpha(t) = sum_j c_j v_j exp(Omega_j t)``; rho keeps its initial value.
    """
    if t < 0:
        raise ValueError("t must be non-negative")
    vmat, omega, coeff = _mode_expansion(n_a0, params)
    alphas = vmat @ (coeff * np.exp(omega * t))
    rho = initial_ansatz(n_a0).rho
    return AnsatzState(rho=rho, alpha1=alphas[0], alpha2=alphas[1], alpha3=alphas[2])


def rwa_trajectory_states(n_a0: float, params: SystemParams, t_grid) -> list[AnsatzState]:
    """Vectorized :func:`propagate_rwa` over a time grid."""
    t_grid = np.asarray(t_grid, dtype=float)
    if np.any(t_grid < 0):
        raise ValueError("times must be non-negative")
    vmat, omega, coeff = _mode_expansion(n_a0, params)
    rho = initial_ansatz(n_a0).rho
    # (3, T): columns are alpha vectors at each time
    alphas = vmat @ (coeff[:, None] * np.exp(np.outer(omega, t_grid)))
    return [
        AnsatzState(rho=rho, alpha1=alphas[0, i], alpha2=alphas[1, i], alpha3=alphas[2, i])
        for i in range(t_grid.size)
    ]
