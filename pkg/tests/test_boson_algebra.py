import pytest
import sympy

from conftest import SYM, same
from qstirling.boson_algebra import (
    InverseForm,
    NExpExpr,
    NormalForm,
    QChoice,
    big_phi,
    check_q_limit_consistency,
    extract_reduced_factor,
    falling_product_inverse_check,
    inverse_normal_form,
    n_shift,
    normal_order_power,
    phi,
    reorder_right,
    shat_first_kind,
    shat_second_kind,
    verify_biorthogonality,
    verify_reduced_factors,
)
from qstirling.deformed_numbers import BracketKind, bracket
from qstirling.errors import FactorizationFailed
from qstirling.exact_poly import ONE, Q, p, q
from qstirling.stirling import F, build_table

sq, sp, sQ = SYM[:3]
KINDS = list(BracketKind)
P_OF = {BracketKind.M: sympy.Integer(1), BracketKind.P: 1 / sq, BracketKind.G: sp}
Q_OF = {
    QChoice.SYMBOLIC: lambda kind: sQ,
    QChoice.Q_EQUALS_Q: lambda kind: sq,
    QChoice.Q_EQUALS_P: lambda kind: P_OF[kind],
    QChoice.Q_EQUALS_ONE: lambda kind: sympy.Integer(1),
}


def pn(b):
    return NExpExpr.exp(0, b)


# -- commutator functions -------------------------------------------------------


def test_phi_examples():
    assert phi(QChoice.Q_EQUALS_Q, "M") == NExpExpr.constant(ONE)
    assert phi(QChoice.Q_EQUALS_Q, "P") == NExpExpr.exp(-1, 0)
    assert phi(QChoice.Q_EQUALS_P, "G") == NExpExpr.exp(1, 0)


@pytest.mark.parametrize("kind", KINDS)
def test_phi_equals_q_power_when_Q_is_p(kind):
    assert phi(QChoice.Q_EQUALS_P, kind) == NExpExpr.exp(1, 0)


def test_big_phi_examples():
    for kind in KINDS:
        for choice in QChoice:
            assert big_phi(1, choice, kind) == phi(choice, kind)
    assert big_phi(2, QChoice.Q_EQUALS_Q, "M") == NExpExpr.constant(1 + q)
    assert big_phi(2, QChoice.Q_EQUALS_Q, "G") == NExpExpr.exp(0, 1, p + q)


@pytest.mark.parametrize("kind", KINDS)
@pytest.mark.parametrize("choice", list(QChoice))
@pytest.mark.parametrize("k", range(1, 5))
def test_big_phi_against_ladder_algebra(kind, choice, k):
    # a^k a+ - Q^k a+ a^k acting on a number state leaves [n+k] - Q^k [n]
    pv, Qv = P_OF[kind], Q_OF[choice](kind)

    def br(x):
        return sympy.cancel((sq**x - pv**x) / (sq - pv))

    e = big_phi(k, choice, kind)
    for n in range(0, 6):
        expected = sympy.cancel(br(n + k) - Qv**k * br(n))
        assert same(e.evaluate(n), expected)


def test_n_shift_examples():
    assert n_shift(pn(1), 1) == NExpExpr.exp(0, 1, p)
    c = NExpExpr.constant(3 * q)
    assert n_shift(c, 5) == c
    assert n_shift(NExpExpr.exp(-1, 0), -2) == NExpExpr.exp(-1, 0, q**2)


def test_symbolic_Q_denominator_cancels_on_evaluation():
    e = big_phi(3, QChoice.SYMBOLIC, "G")
    assert e.den_power == 1
    value = e.evaluate(2)
    assert value == bracket(5) - Q**3 * bracket(2)


# -- operator-valued Stirling numbers -----------------------------------------


@pytest.mark.parametrize("m", range(1, 7))
def test_M_type_has_no_n_dependence(m):
    S_q = build_table(F.Q_SECOND, m)
    for k in range(1, m + 1):
        e = shat_second_kind(m, k, QChoice.Q_EQUALS_Q, "M")
        assert e.is_constant()
        assert e.constant_value() == S_q[m, k]


def test_G_second_kind_examples():
    assert shat_second_kind(2, 1) == pn(1)
    assert shat_second_kind(2, 2) == NExpExpr.constant(q)
    assert shat_second_kind(3, 4).is_zero()


def test_first_kind_examples():
    assert shat_first_kind(2, 1) == NExpExpr.exp(0, 1, -(q**-1) * p**-1)
    assert shat_first_kind(2, 2) == NExpExpr.constant(q**-1)


@pytest.mark.parametrize("k", range(1, 7))
def test_first_kind_reduces_to_q_table(k):
    s_q = build_table(F.Q_FIRST, k)
    for m in range(1, k + 1):
        assert shat_first_kind(k, m).subs({"p": 1}) == NExpExpr.constant(s_q[k, m])


@pytest.mark.parametrize("m", range(1, 7))
def test_G_structure_single_exponential(m):
    for k in range(1, m + 1):
        terms = shat_second_kind(m, k).terms()
        assert len(terms) == 1 and terms[0][1:] == (0, m - k)
        terms = shat_first_kind(m, k).terms()
        assert len(terms) == 1 and terms[0][1:] == (0, m - k)


def test_reduced_factor_examples():
    assert extract_reduced_factor(shat_second_kind(2, 1), 2, 1) == ONE
    assert extract_reduced_factor(shat_second_kind(3, 2), 3, 2) == 2 * p + q
    assert extract_reduced_factor(shat_first_kind(2, 1), 2, 1, "first_kind") == -(p**-1)


def test_reduced_factor_rejects_wrong_shape():
    with pytest.raises(FactorizationFailed):
        extract_reduced_factor(pn(1) + pn(2), 3, 1)
    with pytest.raises(FactorizationFailed):
        extract_reduced_factor(pn(5), 3, 1)
    with pytest.raises(ValueError):
        extract_reduced_factor(pn(2), 3, 1, "third_kind")


def test_reduced_factors_all():
    assert verify_reduced_factors(6).passed


# -- normal forms ---------------------------------------------------------------


@pytest.mark.parametrize("kind", KINDS)
def test_first_power_is_trivial(kind):
    assert normal_order_power(1, kind).coeffs == {1: NExpExpr.constant(ONE)}
    assert inverse_normal_form(1, kind).coeffs == {1: NExpExpr.constant(ONE)}


def test_second_power():
    assert normal_order_power(2, "M").coeffs == {1: NExpExpr.constant(ONE), 2: NExpExpr.constant(q)}
    nf = normal_order_power(2, "G")
    assert nf.coeffs == {1: pn(1), 2: NExpExpr.constant(q)}
    # on |2>: the k=1 coefficient is read at n = 1
    b2 = bracket(2)
    assert nf.coeffs[1].evaluate(1) * b2 + nf.coeffs[2].evaluate(0) * b2 * bracket(1) == b2**2


def test_text_forms():
    assert normal_order_power(2, "G").to_text() == "k=1: p^(1*n) * 1 ; k=2: q"
    assert normal_order_power(2, "M").to_text() == "k=1: 1 ; k=2: q"
    assert inverse_normal_form(2, "M").to_text() == "m=1: -1*q^-1 ; m=2: q^-1"


def test_inverse_forms():
    assert inverse_normal_form(2, "M").coeffs == {
        1: NExpExpr.constant(-(q**-1)),
        2: NExpExpr.constant(q**-1),
    }
    assert inverse_normal_form(2, "G").coeffs == {
        1: NExpExpr.exp(0, 1, -(q**-1) * p**-1),
        2: NExpExpr.constant(q**-1),
    }


def test_reorder_right_example():
    right = reorder_right(normal_order_power(2, "G"))
    assert right.placement == "right"
    assert right.coeffs[1] == NExpExpr.exp(0, 1, p**-1)


@pytest.mark.parametrize("kind", KINDS)
@pytest.mark.parametrize("choice", list(QChoice))
def test_json_round_trip(kind, choice):
    nf = normal_order_power(4, kind, choice)
    assert NormalForm.from_json(nf.to_json()) == nf
    inv = inverse_normal_form(4, kind)
    assert InverseForm.from_json(inv.to_json()) == inv


def test_json_schema():
    d = normal_order_power(2, "G").to_dict()
    assert d["m"] == 2 and d["kind"] == "G"
    assert d["coeffs"]["1"] == {"terms": [{"coeff": "1", "alpha": 0, "beta": 1}]}


def test_biorthogonality():
    assert verify_biorthogonality(8).passed


def test_symbolic_Q_consistency():
    assert check_q_limit_consistency(5).passed


def test_first_kind_two_paths():
    assert falling_product_inverse_check(7).passed


def test_bad_arguments():
    with pytest.raises(ValueError):
        normal_order_power(0)
    with pytest.raises(ValueError):
        inverse_normal_form(0)
    with pytest.raises(ValueError):
        big_phi(0)
    with pytest.raises(ValueError):
        QChoice.parse("Q_equals_banana")
