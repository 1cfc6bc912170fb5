"""Small-deformation expansions in s = ln q and t = ln p, per energy level.

[l]_G is expanded from its finite form sum_j e^(j s) e^((l-1-j) t), which
avoids the 0/0 of the quotient at s = t = 0.  hbar*omega_0 = 1 throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exact_poly import PowerSeries2, series_exp_linear


@dataclass(frozen=True)
class EigenSeries:
    level: int
    series: PowerSeries2

    def to_json(self) -> dict:
        return {"level": self.level, "order": self.series.order, "series": self.series.to_json()}


def bracket_series(l: int, order: int) -> PowerSeries2:
    if l < 0:
        raise ValueError("level must be non-negative")
    total = PowerSeries2(order)
    for j in range(l):
        total = total + series_exp_linear(j, "s", order) * series_exp_linear(l - 1 - j, "t", order)
    return total


def hamiltonian_series(l: int, order: int) -> EigenSeries:
    """Eigenvalue of (a+ a + a a+)/2 on |l>, i.e. ([l] + [l+1])/2."""
    return EigenSeries(l, (bracket_series(l, order) + bracket_series(l + 1, order)) * Fraction(1, 2))


def commutator_series(l: int, order: int) -> EigenSeries:
    """Eigenvalue of [a, a+] (Q = 1) on |l>, i.e. [l+1] - [l]."""
    return EigenSeries(l, bracket_series(l + 1, order) - bracket_series(l, order))


def _s_plus_t(order):
    return PowerSeries2.variable("s", order) + PowerSeries2.variable("t", order)


def hamiltonian_closed_form(l: int, order: int = 1) -> PowerSeries2:
    """(s+t)/8 + (1 - (s+t)/2)(l+1/2) + (s+t)/2 (l+1/2)^2, valid through degree 1."""
    u = _s_plus_t(order)
    x = Fraction(2 * l + 1, 2)
    return u * Fraction(1, 8) + (1 - u * Fraction(1, 2)) * x + u * (x * x / 2)


def commutator_closed_form(l: int, order: int = 2) -> PowerSeries2:
    """1 + (s+t - (s+t)^2/2) l + (s^2 + st + t^2)/2 * l(l+1), valid through degree 2."""
    s = PowerSeries2.variable("s", order)
    t = PowerSeries2.variable("t", order)
    u = s + t
    return 1 + (u - u * u * Fraction(1, 2)) * l + (s * s + s * t + t * t) * Fraction(l * (l + 1), 2)


def hamiltonian_residual(l: int, order: int = 1) -> PowerSeries2:
    """Computed minus closed form, compared through total degree min(order, 1)."""
    deg = min(order, 1)
    return (hamiltonian_series(l, order).series - hamiltonian_closed_form(l, order)).truncate(deg)


def commutator_residual(l: int, order: int = 2) -> PowerSeries2:
    deg = min(order, 2)
    return (commutator_series(l, order).series - commutator_closed_form(l, order)).truncate(deg)


def anharmonic_coefficients() -> tuple[Fraction, Fraction, Fraction]:
    """Fit the s-coefficient of the Hamiltonian as a x^2 + b x + c with x = l + 1/2.

    The degree-1 part is symmetric in s and t, so the s-coefficient is the
    coefficient of (s + t).  ``b`` is the frequency renormalization: omega =
    omega_0 (1 + b (s + t)).  Three levels determine the quadratic; exact.
    """
    h = [hamiltonian_series(l, 1).series.coefficient(1, 0) for l in range(3)]
    x0, x1 = Fraction(1, 2), Fraction(3, 2)
    a = Fraction(h[2] - 2 * h[1] + h[0], 2)
    b = (h[1] - h[0]) - a * (x1 + x0)
    c = h[0] - a * x0 * x0 - b * x0
    return a, b, c
