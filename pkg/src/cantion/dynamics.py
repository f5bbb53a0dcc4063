"""Equations of motion for the squeeze parameters and an adaptive integrator.

The full (position-position coupling) model is the nonlinear system

    d rho    / dt = i kappa alpha2 rho
    d alpha1 / dt = -i [2(omega - i gamma_a) alpha1 - kappa alpha2 - 2 kappa alpha2 alpha1]
    d alpha2 / dt = -i [(omega + nu - i gamma_a - i gamma_b) alpha2 - kappa
                        - kappa alpha2^2 - 4 kappa alpha1 alpha3
                        - 2 kappa alpha1 - 2 kappa alpha3]
    d alpha3 / dt = -i [2(nu - i gamma_b) alpha3 - kappa alpha2 - 2 kappa alpha2 alpha3]

The swap-only (RWA) model drops the constant seed ``-kappa`` and every
product term, leaving a linear system and a constant rho.

The integrator is an embedded Dormand-Prince 5(4) pair with FSAL, a
proportional-integral step controller, and the standard quartic dense-output
interpolant, so trajectories land exactly on the requested output grid
without step clamping.  The state is advanced as 4 complex (8 real)
components; the error norm is the max of component-wise mixed
absolute/relative errors over the 8 real parts.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import AnsatzBreakdown, StepSizeUnderflow
from .model import BREAKDOWN_THRESHOLD, AnsatzState, ModelKind, SystemParams
from .moments import mean_occupations

__all__ = [
    "AnsatzDerivative",
    "IntegratorConfig",
    "Trajectory",
    "full_rhs",
    "rwa_rhs",
    "integrate",
]


@dataclass(frozen=True)
class AnsatzDerivative:
    """Time derivatives of (rho, alpha1, alpha2, alpha3) [1/us]."""

    d_rho: complex
    d_alpha1: complex
    d_alpha2: complex
    d_alpha3: complex

    def as_vector(self) -> np.ndarray:
        return np.array([self.d_rho, self.d_alpha1, self.d_alpha2, self.d_alpha3], dtype=complex)


def full_rhs(state: AnsatzState, params: SystemParams) -> AnsatzDerivative:
    """Right-hand side of the full (pair-creating) model."""
    wa, wb, k = params.freq_a, params.freq_b, params.kappa
    a1, a2, a3 = state.alpha1, state.alpha2, state.alpha3
    d_rho = 1j * k * a2 * state.rho
    d_a1 = -1j * (2.0 * wa * a1 - k * a2 - 2.0 * k * a2 * a1)
    d_a2 = -1j * ((wa + wb) * a2 - k - k * a2 * a2 - 4.0 * k * a1 * a3 - 2.0 * k * a1 - 2.0 * k * a3)
    d_a3 = -1j * (2.0 * wb * a3 - k * a2 - 2.0 * k * a2 * a3)
    return AnsatzDerivative(d_rho, d_a1, d_a2, d_a3)


def rwa_rhs(state: AnsatzState, params: SystemParams) -> AnsatzDerivative:
    """Right-hand side of the swap-only model (linear; rho frozen)."""
    wa, wb, k = params.freq_a, params.freq_b, params.kappa
    a1, a2, a3 = state.alpha1, state.alpha2, state.alpha3
    d_a1 = -1j * (2.0 * wa * a1 - k * a2)
    d_a2 = -1j * ((wa + wb) * a2 - 2.0 * k * a1 - 2.0 * k * a3)
    d_a3 = -1j * (2.0 * wb * a3 - k * a2)
    return AnsatzDerivative(0j, d_a1, d_a2, d_a3)


@dataclass(frozen=True)
class IntegratorConfig:
    """Tolerances and step bounds for the adaptive integrator."""

    rel_tol: float = 1e-9
    abs_tol: float = 1e-12
    max_step: float = 0.05
    initial_step: float = 1e-3

    def __post_init__(self):
        if self.rel_tol <= 0 or self.abs_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.max_step <= 0 or self.initial_step <= 0:
            raise ValueError("step bounds must be positive")


@dataclass
class Trajectory:
    """Time-ordered record of states and observables on the output grid."""

    t: np.ndarray
    alphas: np.ndarray  # (n, 4) complex: rho, alpha1, alpha2, alpha3 per row
    n_a: np.ndarray
    n_b: np.ndarray
    norm: np.ndarray
    accepted_steps: int = 0
    rejected_steps: int = 0

    def __len__(self) -> int:
        return self.t.size

    def state(self, i: int) -> AnsatzState:
        return AnsatzState.from_vector(self.alphas[i])

    def records(self):
        """Iterate (t, state, n_a, n_b, norm) tuples."""
        for i in range(len(self)):
            yield self.t[i], self.state(i), self.n_a[i], self.n_b[i], self.norm[i]


# Dormand-Prince 5(4) tableau (FSAL: the 7th stage equals the next first stage).
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_B = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84])
_E = np.array([71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40])
# Quartic dense-output coefficients (Shampine's interpolant for this pair).
_P = np.array(
    [
        [1, -8048581381 / 2820520608, 8663915743 / 2820520608, -12715105075 / 11282082432],
        [0, 0, 0, 0],
        [0, 131558114200 / 32700410799, -68118460800 / 10900136933, 87487479700 / 32700410799],
        [0, -1754552775 / 470086768, 14199869525 / 1410260304, -10690763975 / 1880347072],
        [0, 127303824393 / 49829197408, -318862633887 / 49829197408, 701980252875 / 199316789632],
        [0, -282668133 / 205662961, 2019193451 / 616988883, -1453857185 / 822651844],
        [0, 40617522 / 29380423, -110615467 / 29380423, 69997945 / 29380423],
    ]
)

_SAFETY = 0.9
_MIN_FACTOR = 0.1  # fac >= 0.1 => step may grow at most 10x
_MAX_FACTOR = 5.0  # fac <= 5   => step may shrink at most 5x per acceptance
_PI_EXPONENT = 0.17  # 1/5 - 0.75*beta with beta = 0.04
_PI_BETA = 0.04


def _error_norm(err: np.ndarray, y0: np.ndarray, y1: np.ndarray, rtol: float, atol: float) -> float:
    e = err.view(np.float64)
    a = y0.view(np.float64)
    b = y1.view(np.float64)
    scale = atol + rtol * np.maximum(np.abs(a), np.abs(b))
    return float(np.max(np.abs(e) / scale))


def integrate(
    initial: AnsatzState,
    params: SystemParams,
    model: ModelKind,
    t_grid,
    cfg: IntegratorConfig | None = None,
) -> Trajectory:
    """Integrate the chosen model, sampling observables on ``t_grid``.

    ``t_grid`` must start at 0 and be strictly increasing.  Between grid
    points the stepper is fully adaptive; grid values are produced by the
    dense-output interpolant of the accepted step that covers them.

    Raises
    ------
    AnsatzBreakdown
        If the squeeze matrix singular value reaches ``1 - 1e-9`` at an
        accepted step (the trial state stops being normalizable).
    StepSizeUnderflow
        If the controller cannot meet the tolerance with a usable step.
    """
    cfg = cfg or IntegratorConfig()
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.ndim != 1 or t_grid.size < 1:
        raise ValueError("t_grid must be a 1-d sequence of times")
    if t_grid[0] != 0.0:
        raise ValueError("t_grid must start at 0")
    if t_grid.size > 1 and not np.all(np.diff(t_grid) > 0):
        raise ValueError("t_grid must be strictly increasing")
    if not initial.is_normalizable():
        raise AnsatzBreakdown(0.0, initial.max_singular_value())

    # Resolved at call time so the module-level functions stay patchable.
    rhs = full_rhs if model is ModelKind.FULL else rwa_rhs

    def f(t: float, y: np.ndarray) -> np.ndarray:
        return rhs(AnsatzState.from_vector(y), params).as_vector()

    n_out = t_grid.size
    out = np.empty((n_out, 4), dtype=complex)
    y = initial.as_vector()
    out[0] = y
    gi = 1

    t_end = float(t_grid[-1])
    t = 0.0
    accepted = rejected = 0
    if n_out > 1:
        k = np.zeros((7, 4), dtype=complex)
        k[6] = f(t, y)
        h = min(cfg.initial_step, cfg.max_step, t_end)
        facold = 1e-4
        prev_rejected = False
        while gi < n_out:
            h = min(h, t_end - t)
            if h <= 16.0 * np.finfo(float).eps * max(abs(t), 1.0):
                raise StepSizeUnderflow(t, h)
            k[0] = k[6]
            for s in range(1, 7):
                ys = y + h * sum(a_sj * k[j] for j, a_sj in enumerate(_A[s]))
                k[s] = f(t + _C[s] * h, ys)
            y_new = y + h * (_B @ k[:6])
            err = _error_norm(h * (_E @ k), y, y_new, cfg.rel_tol, cfg.abs_tol)
            if err <= 1.0:
                fac11 = err**_PI_EXPONENT if err > 1e-30 else 1e-6
                factor = max(_MIN_FACTOR, min(_MAX_FACTOR, (fac11 / facold**_PI_BETA) / _SAFETY))
                h_next = h / factor
                if prev_rejected:
                    h_next = min(h_next, h)
                # Dense output for every grid point inside (t, t + h].
                if gi < n_out and t_grid[gi] <= t + h + 1e-15 * max(abs(t), 1.0):
                    q = k.T @ _P  # (4 components, 4 powers)
                    while gi < n_out and t_grid[gi] <= t + h + 1e-15 * max(abs(t), 1.0):
                        theta = (t_grid[gi] - t) / h
                        pv = np.array([theta, theta**2, theta**3, theta**4])
                        out[gi] = y + h * (q @ pv)
                        gi += 1
                t += h
                y = y_new
                if not np.all(np.isfinite(y.view(np.float64))):
                    raise AnsatzBreakdown(t, float("inf"))
                sv = AnsatzState.from_vector(y).max_singular_value()
                if sv >= BREAKDOWN_THRESHOLD:
                    raise AnsatzBreakdown(t, sv)
                facold = max(err, 1e-4)
                h = min(h_next, cfg.max_step)
                prev_rejected = False
                accepted += 1
            else:
                h = h / min(_MAX_FACTOR, err**_PI_EXPONENT / _SAFETY)
                prev_rejected = True
                rejected += 1

    n_a = np.empty(n_out)
    n_b = np.empty(n_out)
    norm = np.empty(n_out)
    for i in range(n_out):
        rec = mean_occupations(AnsatzState.from_vector(out[i]))
        n_a[i], n_b[i], norm[i] = rec.n_a, rec.n_b, rec.norm
    return Trajectory(
        t=t_grid.copy(),
        alphas=out,
        n_a=n_a,
        n_b=n_b,
        norm=norm,
        accepted_steps=accepted,
        rejected_steps=rejected,
    )
