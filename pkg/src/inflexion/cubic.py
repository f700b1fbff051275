"""Closed forms for third-order polynomials.

For ``f(x) = alpha x^3 + beta x^2 + gamma x + delta`` on [a, b] the left and right
chords touch the graph at ``x_l = -(alpha a + beta) / (2 alpha)`` and
``x_r = -(alpha b + beta) / (2 alpha)``. Their sum is ``3p - (a + b)/2`` with
``p = -beta / (3 alpha)``, so p is recovered exactly from the tangency points
and the window, and approximately from their data estimates.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DegenerateCubicError, InvalidIntervalError


@dataclass(frozen=True)
class CubicCoefficients:
    alpha: float
    beta: float
    gamma: float = 0.0
    delta: float = 0.0

    def __post_init__(self):
        if self.alpha == 0:
            raise DegenerateCubicError("alpha must be non-zero")

    @property
    def p(self) -> float:
        return -self.beta / (3.0 * self.alpha)

    @classmethod
    def from_spec(cls, spec) -> CubicCoefficients:
        q = spec.params
        return cls(q["alpha"], q["beta"], q["gamma"], q["delta"])


def cubic_tangency(coeffs: CubicCoefficients, a: float, b: float) -> tuple[float, float]:
    """Return ``(x_l, x_r)``."""
    if not a < b:
        raise InvalidIntervalError(f"need a < b, got [{a}, {b}]")
    if coeffs.alpha == 0:
        raise DegenerateCubicError("alpha must be non-zero")
    two_alpha = 2.0 * coeffs.alpha
    return -(coeffs.alpha * a + coeffs.beta) / two_alpha, -(coeffs.alpha * b + coeffs.beta) / two_alpha


def cubic_corrected_p(chi_l: float, chi_r: float, a: float, b: float) -> float:
    """Inflection estimate ``(chi_l + chi_r)/3 + (a + b)/6``."""
    if not a < b:
        raise InvalidIntervalError(f"need a < b, got [{a}, {b}]")
    return (chi_l + chi_r) / 3.0 + a / 6.0 + b / 6.0
