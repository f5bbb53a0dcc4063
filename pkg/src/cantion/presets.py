"""Built-in parameter sets for the four standard operating regimes.

All regimes share gamma_a = gamma_b = 0.0197 rad/us and start from a
squeezed vacuum with mean cantilever occupation 6.  Frequencies are angular,
numerically equal to the MHz figures they are usually quoted in; time is
then measured in us.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import SystemParams

__all__ = ["FigurePreset", "PRESETS", "DEFAULT_T_MAX", "DEFAULT_DT_OUT"]

DEFAULT_T_MAX = 3.0  # us: several transfer periods at the weakest preset coupling
DEFAULT_DT_OUT = 0.01  # us


@dataclass(frozen=True)
class FigurePreset:
    params: SystemParams
    n_a0: float
    label: str


PRESETS: dict[int, FigurePreset] = {
    2: FigurePreset(
        SystemParams(omega=19.7, nu=19.7, kappa=1.8, gamma_a=0.0197, gamma_b=0.0197),
        n_a0=6.0,
        label="resonant, weak coupling (kappa/nu ~ 0.09)",
    ),
    3: FigurePreset(
        SystemParams(omega=19.7, nu=19.7, kappa=5.0, gamma_a=0.0197, gamma_b=0.0197),
        n_a0=6.0,
        label="resonant, strong coupling (kappa/nu ~ 0.25)",
    ),
    4: FigurePreset(
        SystemParams(omega=19.7, nu=16.0, kappa=4.0, gamma_a=0.0197, gamma_b=0.0197),
        n_a0=6.0,
        label="detuned, kappa = 4.0",
    ),
    5: FigurePreset(
        SystemParams(omega=19.7, nu=16.0, kappa=5.0, gamma_a=0.0197, gamma_b=0.0197),
        n_a0=6.0,
        label="detuned, kappa = 5.0",
    ),
}
