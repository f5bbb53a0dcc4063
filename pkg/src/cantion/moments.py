"""Observables of the squeezed trial state: norm and mean occupations.

For ``|psi> = rho * exp(1/2 a^+T M a^+)|0>`` with symmetric 2x2 squeeze
matrix M (largest singular value < 1), closed forms follow from the ladder
identity ``a_i |psi> = (M a^+)_i |psi>``:

* norm:        ``<psi|psi> = |rho|^2 * det(I - conj(M) M)**-0.5``
* occupations: ``N = conj(M) M (I - conj(M) M)^-1``, ``n_a = N[0,0]``,
  ``n_b = N[1,1]`` (already normalized by the norm).

The occupation formula is implementer-derived for the two-mode case and is
validated against the brute-force number-basis expansion in the test suite;
the single-mode reduction ``n = 4|alpha1|^2 / (1 - 4|alpha1|^2)`` matches the
textbook squeezed-vacuum result.

All reported occupations are normalized by the (decaying) norm; the raw norm
is returned alongside so the unnormalized convention can be reconstructed.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NormSingular
from .model import AnsatzState

__all__ = [
    "MomentRecord",
    "state_norm",
    "mean_occupations",
    "series_norm_partial",
    "series_occupation_partial",
]


@dataclass(frozen=True)
class MomentRecord:
    """Norm and normalized mean occupations of a state."""

    norm: float
    n_a: float
    n_b: float


def _gram_entries(state: AnsatzState):
    """Entries of the Hermitian Gram matrix P = conj(M) M and det(I - P)."""
    a1, a2, a3 = state.alpha1, state.alpha2, state.alpha3
    p00 = 4.0 * abs(a1) ** 2 + abs(a2) ** 2
    p11 = abs(a2) ** 2 + 4.0 * abs(a3) ** 2
    p01 = 2.0 * a1.conjugate() * a2 + 2.0 * a2.conjugate() * a3
    det = (1.0 - p00) * (1.0 - p11) - abs(p01) ** 2
    return p00, p11, p01, det


def state_norm(state: AnsatzState) -> float:
    """Squared length <psi|psi> of the (generally unnormalized) trial state.

    Reduces to ``rho^2 / sqrt(1 - 4|alpha1|^2)`` when alpha2 = alpha3 = 0.
    Raises :class:`NormSingular` when det(I - conj(M) M) <= 0.
    """
    _, _, _, det = _gram_entries(state)
    if det <= 0.0:
        raise NormSingular(f"det(I - conj(M) M) = {det:.6g} <= 0")
    return abs(state.rho) ** 2 * det**-0.5


def mean_occupations(state: AnsatzState) -> MomentRecord:
    """Norm plus normalized mean occupations of both modes."""
    p00, p11, p01, det = _gram_entries(state)
    if det <= 0.0:
        raise NormSingular(f"det(I - conj(M) M) = {det:.6g} <= 0")
    # N = P (I - P)^-1 via the 2x2 adjugate; diagonal entries are real.
    c = abs(p01) ** 2
    n_a = (p00 * (1.0 - p11) + c) / det
    n_b = (p11 * (1.0 - p00) + c) / det
    norm = abs(state.rho) ** 2 * det**-0.5
    return MomentRecord(norm=norm, n_a=n_a, n_b=n_b)


def series_norm_partial(x: float, n_terms: int) -> float:
    """Partial sum of ``sum_n (2n)!/(n!)^2 x^(2n)`` (limit ``(1-4x^2)**-0.5``).

    Terms are generated by the ratio recurrence
    ``t_{n+1}/t_n = x^2 (2n+1)(2n+2)/(n+1)^2`` so no factorial is ever formed.
    Requires |x| < 1/2 (radius of convergence).
    """
    if abs(x) >= 0.5:
        raise ValueError(f"series diverges for |x| >= 1/2, got x = {x}")
    if n_terms < 1:
        raise ValueError("n_terms must be >= 1")
    term = 1.0
    total = 1.0
    x2 = x * x
    for n in range(n_terms - 1):
        term *= x2 * (2 * n + 1) * (2 * n + 2) / (n + 1) ** 2
        total += term
    return total


def series_occupation_partial(x: float, n_terms: int) -> float:
    """Partial sum of ``sum_n (2n+1)!/(n!)^2 x^(2n)`` (limit ``(1-4x^2)**-1.5``)."""
    if abs(x) >= 0.5:
        raise ValueError(f"series diverges for |x| >= 1/2, got x = {x}")
    if n_terms < 1:
        raise ValueError("n_terms must be >= 1")
    term = 1.0
    total = 1.0
    x2 = x * x
    for n in range(n_terms - 1):
        term *= x2 * (2 * n + 2) * (2 * n + 3) / (n + 1) ** 2
        total += term
    return total
