"""Physical parameters, model selection, and the variational state.

Conventions: all rates are angular frequencies in rad/us, time is in us.
Mode ``a`` is the cantilever, mode ``b`` the trapped ion.  Damping enters
through complex frequencies ``omega - i*gamma_a`` and ``nu - i*gamma_b``,
so the state norm shrinks instead of mixing.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

__all__ = ["ModelKind", "SystemParams", "AnsatzState", "initial_ansatz"]

#: Largest singular value of the squeeze matrix tolerated before the state is
#: declared non-normalizable (kept a hair below 1 to absorb round-off jitter).
BREAKDOWN_THRESHOLD = 1.0 - 1e-9


class ModelKind(enum.Enum):
    """Which coupling Hamiltonian drives the dynamics."""

    #: Position-position coupling -kappa*(a + a^+)(b + b^+), pair creation included.
    FULL = "full"
    #: Excitation-swap coupling -kappa*(a b^+ + a^+ b) only.
    RWA = "rwa"


@dataclass(frozen=True)
class SystemParams:
    """The five rates defining either Hamiltonian.

    Parameters
    ----------
    omega : float
        Cantilever angular frequency [rad/us].
    nu : float
        Ion vibrational angular frequency [rad/us].
    kappa : float
        Coupling constant [rad/us].
    gamma_a, gamma_b : float
        Cantilever / ion amplitude decay coefficients [rad/us].
    """

    omega: float
    nu: float
    kappa: float
    gamma_a: float
    gamma_b: float

    def __post_init__(self):
        if not (self.omega > 0 and self.nu > 0):
            raise ValueError("omega and nu must be positive")
        if self.kappa < 0:
            raise ValueError("kappa must be non-negative")
        if self.gamma_a < 0 or self.gamma_b < 0:
            raise ValueError("decay coefficients must be non-negative")

    @property
    def freq_a(self) -> complex:
        """Complex cantilever frequency omega - i*gamma_a."""
        return self.omega - 1j * self.gamma_a

    @property
    def freq_b(self) -> complex:
        """Complex ion frequency nu - i*gamma_b."""
        return self.nu - 1j * self.gamma_b

    def swapped(self) -> "SystemParams":
        """Parameters with the roles of the two modes exchanged."""
        return SystemParams(self.nu, self.omega, self.kappa, self.gamma_b, self.gamma_a)


@dataclass(frozen=True)
class AnsatzState:
    """Variational parameters of the two-mode squeezed trial state.

    The state is ``rho * exp(alpha1 a^+^2 + alpha2 a^+ b^+ + alpha3 b^+^2)|0>``.
    It is normalizable iff the symmetric squeeze matrix
    ``M = [[2 alpha1, alpha2], [alpha2, 2 alpha3]]`` has largest singular
    value strictly below 1.
    """

    rho: complex
    alpha1: complex
    alpha2: complex
    alpha3: complex

    def squeeze_matrix(self) -> np.ndarray:
        """The symmetric 2x2 squeeze matrix M."""
        return np.array(
            [[2.0 * self.alpha1, self.alpha2], [self.alpha2, 2.0 * self.alpha3]],
            dtype=complex,
        )

    def max_singular_value(self) -> float:
        """Largest singular value of the squeeze matrix (closed form)."""
        # Eigenvalues of the 2x2 Hermitian Gram matrix conj(M) @ M.
        g00 = 4.0 * abs(self.alpha1) ** 2 + abs(self.alpha2) ** 2
        g11 = abs(self.alpha2) ** 2 + 4.0 * abs(self.alpha3) ** 2
        g01 = 2.0 * np.conj(self.alpha1) * self.alpha2 + 2.0 * np.conj(self.alpha2) * self.alpha3
        disc = math.sqrt((g00 - g11) ** 2 + 4.0 * abs(g01) ** 2)
        return math.sqrt(0.5 * (g00 + g11 + disc))

    def is_normalizable(self, threshold: float = BREAKDOWN_THRESHOLD) -> bool:
        return self.max_singular_value() < threshold

    def as_vector(self) -> np.ndarray:
        """Pack (rho, alpha1, alpha2, alpha3) into a complex 4-vector."""
        return np.array([self.rho, self.alpha1, self.alpha2, self.alpha3], dtype=complex)

    @classmethod
    def from_vector(cls, y: np.ndarray) -> "AnsatzState":
        return cls(complex(y[0]), complex(y[1]), complex(y[2]), complex(y[3]))

    def swapped(self) -> "AnsatzState":
        """State with the two modes exchanged (alpha1 <-> alpha3)."""
        return AnsatzState(self.rho, self.alpha3, self.alpha2, self.alpha1)


def initial_ansatz(n_a0: float) -> AnsatzState:
    """Squeezed-vacuum initial condition with cantilever occupation ``n_a0``.

    Solves norm = 1 and <a^+ a> = n_a0 with alpha2 = alpha3 = 0, taking the
    positive roots, which gives ``rho = (n_a0 + 1)**-0.25`` and
    ``alpha1 = sqrt(n_a0 / (n_a0 + 1)) / 2``.  Both sign choices produce the
    same observables; positive roots are used for determinism.

    ``n_a0`` may be any non-negative real, not only an integer.
    """
    if n_a0 < 0:
        raise ValueError(f"n_a0 must be non-negative, got {n_a0}")
    rho = (n_a0 + 1.0) ** -0.25
    alpha1 = 0.5 * math.sqrt(n_a0 / (n_a0 + 1.0))
    return AnsatzState(rho=complex(rho), alpha1=complex(alpha1), alpha2=0j, alpha3=0j)
