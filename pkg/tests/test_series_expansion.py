from fractions import Fraction

import pytest
import sympy

from qstirling.exact_poly import PowerSeries2, series_exp_linear
from qstirling.series_expansion import (
    anharmonic_coefficients,
    bracket_series,
    commutator_closed_form,
    commutator_residual,
    commutator_series,
    hamiltonian_closed_form,
    hamiltonian_residual,
    hamiltonian_series,
)

s, t = sympy.symbols("s t")


def sympy_series(expr, order):
    """Taylor coefficients of expr in (s, t) through total degree ``order``."""
    out = {}
    for a in range(order + 1):
        for b in range(order + 1 - a):
            c = sympy.diff(expr, s, a, t, b).subs({s: 0, t: 0}) / (sympy.factorial(a) * sympy.factorial(b))
            c = sympy.nsimplify(c)
            if c != 0:
                out[(a, b)] = Fraction(int(c.p), int(c.q))
    return out


def sympy_bracket(l):
    # sympy differentiates this directly, bypassing the PowerSeries2 arithmetic
    return sum(sympy.exp(j * s) * sympy.exp((l - 1 - j) * t) for j in range(l))


def test_bracket_series_examples():
    assert bracket_series(0, 3).is_zero()
    assert bracket_series(1, 4) == PowerSeries2.constant(1, 4)
    assert str(bracket_series(2, 1)) == "2 + t + s"


@pytest.mark.parametrize("l", range(0, 9))
def test_bracket_series_times_denominator(l):
    # [l] (e^s - e^t) = e^(ls) - e^(lt); the factor has no constant term, so
    # degree order + 1 of the product is fixed by [l] through degree order
    order = 4
    bigger = order + 1
    lhs = bracket_series(l, bigger) * (series_exp_linear(1, "s", bigger) - series_exp_linear(1, "t", bigger))
    rhs = series_exp_linear(l, "s", bigger) - series_exp_linear(l, "t", bigger)
    assert lhs == rhs


def test_hamiltonian_examples():
    assert str(hamiltonian_series(0, 1).series) == "1/2"
    assert hamiltonian_series(1, 1).series == PowerSeries2(1, {(0, 0): Fraction(3, 2), (1, 0): Fraction(1, 2), (0, 1): Fraction(1, 2)})
    for l in range(8):
        h = hamiltonian_series(l, 1).series
        assert h.coefficient(1, 0) == h.coefficient(0, 1) == Fraction(l * l, 2)


@pytest.mark.parametrize("l", range(0, 13))
def test_expansions_match_closed_forms(l):
    assert hamiltonian_residual(l).is_zero()
    assert commutator_residual(l).is_zero()
    assert hamiltonian_series(l, 3).series.truncate(1) == hamiltonian_closed_form(l, 3).truncate(1)


@pytest.mark.parametrize("l", range(0, 13))
def test_P_line_removes_first_order_anharmonicity(l):
    line = hamiltonian_series(l, 2).series.at_t_equals_minus_s()
    assert line.homogeneous(1).is_zero()


@pytest.mark.parametrize("l", range(0, 6))
def test_series_against_sympy(l):
    H = (sympy_bracket(l) + sympy_bracket(l + 1)) / 2
    C = sympy_bracket(l + 1) - sympy_bracket(l)
    assert hamiltonian_series(l, 3).series == PowerSeries2(3, sympy_series(H, 3))
    assert commutator_series(l, 3).series == PowerSeries2(3, sympy_series(C, 3))


def test_commutator_examples():
    assert commutator_series(0, 2).series == PowerSeries2.constant(1, 2)
    one = commutator_series(1, 2).series
    assert str(one) == "1 + t + 1/2*t^2 + s + 1/2*s^2"
    assert one == commutator_closed_form(1, 2)
    assert commutator_series(2, 2).series == commutator_closed_form(2, 2)


def test_order_zero_is_undeformed():
    for l in range(10):
        assert hamiltonian_series(l, 0).series == PowerSeries2.constant(Fraction(2 * l + 1, 2), 0)
        assert commutator_series(l, 0).series == PowerSeries2.constant(1, 0)


def test_degree_two_of_hamiltonian_differs_from_truncated_display():
    # the closed form is only claimed through degree 1; beyond that the two differ
    assert not (hamiltonian_series(3, 2).series - hamiltonian_closed_form(3, 2)).is_zero()


def test_frequency_renormalization():
    a, b, c = anharmonic_coefficients()
    assert (a, b, c) == (Fraction(1, 2), Fraction(-1, 2), Fraction(1, 8))


def test_json():
    data = commutator_series(2, 2).to_json()
    assert data["level"] == 2
    assert PowerSeries2.from_json(data["series"], 2) == commutator_series(2, 2).series


def test_negative_level():
    with pytest.raises(ValueError):
        bracket_series(-1, 2)
