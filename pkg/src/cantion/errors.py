"""Exception types shared across the package."""


class CantionError(Exception):
    """Base class for all package-specific errors."""


class SimulationBreakdown(CantionError):
    """Base class for runtime failures of a simulation (CLI exit code 3)."""


class AnsatzBreakdown(SimulationBreakdown):
    """The squeeze matrix reached the normalizability boundary during integration.

    Raised when the largest singular value of the 2x2 squeeze matrix exceeds
    1 - 1e-9 at an accepted step; the variational state is no longer a
    normalizable vector and the model has effectively blown up.
    """

    def __init__(self, t: float, singular_value: float):
        self.t = t
        self.singular_value = singular_value
        super().__init__(
            f"squeeze matrix singular value {singular_value:.12g} >= 1 - 1e-9 at t = {t:.6g}"
        )


class StepSizeUnderflow(SimulationBreakdown):
    """The adaptive step controller could not meet the error tolerance."""

    def __init__(self, t: float, h: float):
        self.t = t
        self.h = h
        super().__init__(f"step size underflow (h = {h:.3e}) at t = {t:.6g}")


class DegenerateModes(CantionError):
    """Two decay-rotation exponents coincide; the closed-form propagator is
    ill-conditioned and the caller must fall back to numerical integration."""


class NormSingular(CantionError):
    """det(I - conj(M) M) <= 0: the Gaussian norm formula is singular."""


class TruncationTooSmall(SimulationBreakdown):
    """The requested number-basis cutoff cannot hold the state's tail mass."""


class LeakageExceeded(SimulationBreakdown):
    """Truncation leakage or outer-shell mass crossed the safety threshold."""

    def __init__(self, t: float, measure: float, threshold: float):
        self.t = t
        self.measure = measure
        self.threshold = threshold
        super().__init__(
            f"truncation leakage {measure:.3e} exceeds {threshold:.3e} at t = {t:.6g}"
        )


class ZeroNorm(CantionError):
    """A number-basis state with zero norm has no defined occupations."""
