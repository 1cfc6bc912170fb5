import pytest
from hypothesis import given
from hypothesis import strategies as st
from sympy.functions.combinatorial.numbers import stirling as sympy_stirling

from qstirling.errors import MismatchedTables
from qstirling.exact_poly import ONE, X, ZERO, Poly, p, q
from qstirling.stirling import (
    DUAL_PAIRS,
    F,
    StirlingTable,
    build_table,
    check_tilde_relation,
    check_wachs_white_reduction,
    count_set_partitions,
    falling_product_expand,
    set_partitions,
    to_classical,
    verify_classical_limits,
    verify_defining_relations,
    verify_duality,
)

N = 10


def weighted_partitions(n, k, join_weight, open_weight):
    """Sum over set partitions of [n] into k blocks, built left to right."""
    total = ZERO
    for rgs in set_partitions(n):
        if max(rgs) + 1 != k:
            continue
        w = ONE
        top = 0
        for b in rgs[1:]:
            if b <= top:
                w = w * join_weight(b, top + 1)
            else:
                w = w * open_weight(top + 1)
                top = b
        total = total + w
    return total


# -- classical ---------------------------------------------------------------


def test_brute_force_examples():
    assert count_set_partitions(3, 2) == 3
    assert falling_product_expand("classical", 3) == X**3 - 3 * X**2 + 2 * X
    assert build_table(F.CLASSICAL_SECOND, 3)[3, 2] == 3
    assert build_table(F.CLASSICAL_FIRST, 3)[3, 2] == -3


@pytest.mark.parametrize("n", range(1, N + 1))
def test_classical_against_sympy(n):
    S = build_table(F.CLASSICAL_SECOND, n)
    s = build_table(F.CLASSICAL_FIRST, n)
    for k in range(1, n + 1):
        assert S[n, k] == int(sympy_stirling(n, k, kind=2))
        assert s[n, k] == int(sympy_stirling(n, k, kind=1, signed=True))


@pytest.mark.parametrize("family", [f for f in F if f not in (F.CLASSICAL_FIRST, F.CLASSICAL_SECOND)])
def test_every_family_reduces_to_classical(family):
    limit = to_classical(build_table(family, N))
    ref = build_table(limit.family, N)
    assert limit.entries == ref.entries


def test_limits_report():
    assert verify_classical_limits(N).passed


# -- combinatorial oracles ----------------------------------------------------


@pytest.mark.parametrize("n", range(1, 7))
def test_tilde_second_counts_partitions_by_block_index(n):
    table = build_table(F.TILDE_SECOND, n)
    for k in range(1, n + 1):
        oracle = weighted_partitions(n, k, lambda b, blocks: q**b, lambda blocks: ONE)
        assert table[n, k] == oracle


@pytest.mark.parametrize("n", range(1, 7))
def test_wachs_white_counts_partitions(n):
    table = build_table(F.WACHS_WHITE_SECOND, n)
    for k in range(1, n + 1):
        oracle = weighted_partitions(
            n, k, lambda b, blocks: q**b * p ** (blocks - 1 - b), lambda blocks: p**blocks
        )
        assert table[n, k] == oracle


# -- worked examples ----------------------------------------------------------


def test_table_entries():
    assert str(build_table(F.Q_SECOND, 3)[3, 2]) == "2*q + q^2"
    assert str(build_table(F.Q_FIRST, 2)[2, 1]) == "-1*q^-1"
    assert build_table(F.REDUCED_SECOND_XI, 3)[3, 2] == 2 * p + q
    assert build_table(F.REDUCED_SECOND_XIPRIME, 2)[2, 1] == p**-1
    assert build_table(F.REDUCED_FIRST_XI, 2)[2, 1] == -(p**-1)


def test_falling_product_examples():
    assert falling_product_expand("M_shifted", 2) == q**-1 * (X**2 - X)
    assert falling_product_expand("M_bracket_diff", 2) == X**2 - X
    with pytest.raises(ValueError):
        falling_product_expand("nope", 2)


@pytest.mark.parametrize("family", ["classical", "q", "tilde"])
def test_defining_relations(family):
    assert verify_defining_relations(family, N).passed


def test_defining_relation_m2_by_hand():
    S = build_table(F.Q_SECOND, 2)
    rhs = S[2, 1] * falling_product_expand("M_shifted", 1) + S[2, 2] * falling_product_expand("M_shifted", 2)
    assert rhs == X**2


@pytest.mark.parametrize("first, second", sorted(DUAL_PAIRS, key=lambda pr: pr[0].value))
def test_duality(first, second):
    assert verify_duality(build_table(first, N), build_table(second, N)).passed


def test_duality_small_cases_by_hand():
    s, S = build_table(F.Q_FIRST, 2), build_table(F.Q_SECOND, 2)
    assert s[2, 1] * S[1, 1] + s[2, 2] * S[2, 1] == ZERO
    assert s[2, 2] * S[2, 2] == ONE
    Xp, xi = build_table(F.REDUCED_SECOND_XIPRIME, 2), build_table(F.REDUCED_FIRST_XI, 2)
    assert Xp[2, 1] * xi[1, 1] + Xp[2, 2] * xi[2, 1] == ZERO


def test_duality_rejects_mismatch():
    with pytest.raises(MismatchedTables):
        verify_duality(build_table(F.Q_FIRST, 3), build_table(F.Q_SECOND, 4))
    with pytest.raises(MismatchedTables):
        verify_duality(build_table(F.Q_FIRST, 3), build_table(F.TILDE_SECOND, 3))


def test_duality_negative_control():
    wrong = build_table(F.TILDE_SECOND, 4)
    report = verify_duality(build_table(F.Q_FIRST, 4), StirlingTable(F.Q_SECOND, 4, wrong.entries))
    assert not report.passed
    assert report.counterexample is not None


def test_tilde_and_wachs_white():
    assert check_tilde_relation(N).passed
    assert check_wachs_white_reduction(N).passed
    assert build_table(F.TILDE_FIRST, 2)[2, 1] == -1
    assert build_table(F.TILDE_SECOND, 2)[2, 2] == 1
    assert build_table(F.WACHS_WHITE_SECOND, 2)[2, 2] == p


# -- invariants ---------------------------------------------------------------


@pytest.mark.parametrize(
    "family", [F.Q_SECOND, F.TILDE_SECOND, F.WACHS_WHITE_SECOND, F.REDUCED_SECOND_XI]
)
def test_second_kind_positivity(family):
    for _, _, e in build_table(family, N).rows():
        assert all(c > 0 for c in e.coefficients())


@pytest.mark.parametrize("k", range(1, N + 1))
def test_diagonals(k):
    assert build_table(F.Q_FIRST, N)[k, k] == q ** (-k * (k - 1) // 2)
    assert build_table(F.Q_SECOND, N)[k, k] == q ** (k * (k - 1) // 2)


@pytest.mark.parametrize("family", ["classical", "M_shifted", "M_bracket_diff"])
def test_falling_product_matches_first_kind(family):
    first = {"classical": F.CLASSICAL_FIRST, "M_shifted": F.Q_FIRST, "M_bracket_diff": F.TILDE_FIRST}[family]
    table = build_table(first, N)
    for k in range(1, N + 1):
        prod = falling_product_expand(family, k)
        for m in range(0, k + 2):
            assert prod.coefficient("X", m) == table[k, m]


def test_out_of_triangle_is_zero():
    t = build_table(F.Q_SECOND, 4)
    assert t[2, 3] == ZERO and t[3, 0] == ZERO
    with pytest.raises(IndexError):
        t[5, 1]


@given(st.sampled_from(list(F)), st.integers(min_value=1, max_value=7))
def test_serialization_round_trips(family, n):
    table = build_table(family, n)
    assert StirlingTable.from_json(table.to_json()) == table
    assert StirlingTable.from_csv(table.to_csv(), family) == table


def test_csv_layout():
    lines = build_table(F.Q_SECOND, 3).to_csv().splitlines()
    assert "3,2,2*q + q^2" in lines
    assert lines[0] == "1,1,1"


def test_unknown_family():
    with pytest.raises(ValueError):
        build_table("bogus", 3)
    with pytest.raises(ValueError):
        build_table(F.Q_FIRST, 0)


def test_specialize():
    t = build_table(F.WACHS_WHITE_SECOND, 3).specialize(p=1, q=1)
    assert all(isinstance(e, Poly) and e.is_constant() for _, _, e in t.rows())
