import itertools
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from delpezzo_delta.lattice import (
    CurveSystem,
    DivisorClass,
    check_decomposition,
    determinant,
    format_rational,
    is_negative_definite,
    leading_minors,
    pair,
    solve,
    to_rational,
)

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=12)


def eckardt(by_id):
    return by_id["eckardt-Q-on-line"].system


def test_to_rational_rejects_floats_and_decimal_strings():
    assert to_rational("3/6") == Fraction(1, 2)
    assert to_rational(4) == 4
    for bad in (0.5, "0.5", "1e3", True):
        with pytest.raises((TypeError, ValueError)):
            to_rational(bad)


def test_format_rational():
    assert format_rational(Fraction(-4, 6)) == "-2/3"
    assert format_rational(Fraction(8, 4)) == "2"


def test_pair_examples(by_id):
    sys = eckardt(by_id)
    A = DivisorClass.anticanonical(sys)
    E2 = DivisorClass.curve(sys, "E2")
    assert pair(A, A, sys) == 3
    assert pair(A, E2, sys) == 0
    D = A - E2 * Fraction(1, 2)
    assert pair(D, D, sys) == Fraction(11, 4)


def test_pair_dimension_mismatch(by_id):
    sys = eckardt(by_id)
    other = by_id["cubic-line"].system
    with pytest.raises(IndexError):
        pair(DivisorClass.anticanonical(other), DivisorClass.curve(other, "L"), sys)


def test_negative_definite_examples(by_id):
    sys = by_id["eckardt-Q-on-line"].system
    assert is_negative_definite(sys, [sys.index("E1")])
    hand = CurveSystem(Fraction(3), ("C", "E1"), [[-1, 1], [1, -2]], [1, 0])
    assert is_negative_definite(hand, [0, 1])
    two = by_id["twoline-general-generic"].system
    assert not is_negative_definite(two, [two.index(n) for n in ("L1", "L2", "L3", "E1")])
    four = by_id["twoline-Q-on-line"].system
    idx = [four.index(n) for n in ("L1", "L2", "L3", "E1")]
    assert not is_negative_definite(four, idx)
    assert determinant(four.submatrix(idx)) == 0


def test_negative_definite_bad_subsets(by_id):
    sys = eckardt(by_id)
    with pytest.raises(ValueError):
        is_negative_definite(sys, [])
    with pytest.raises(IndexError):
        is_negative_definite(sys, [len(sys)])


def test_check_decomposition_examples(by_id):
    sys = eckardt(by_id)
    A = DivisorClass.anticanonical(sys)
    rhs = DivisorClass.from_map(sys, {"L1": 1, "L2": 1, "L3": 1, "E1": 3, "E2": 4})
    assert check_decomposition(sys, A, rhs)
    assert check_decomposition(sys, A, A)
    wrong = DivisorClass.from_map(sys, {"L1": 1, "L2": 1, "L3": 1, "E1": 3, "E2": 3})
    assert not check_decomposition(sys, A, wrong)


def test_every_catalog_relation_holds(catalog):
    for s in catalog:
        for lhs, rhs in s.relations:
            assert check_decomposition(s.system, lhs, rhs), s.id


def test_solve_and_determinant():
    m = [[Fraction(2), Fraction(1)], [Fraction(1), Fraction(3)]]
    assert determinant(m) == 5
    assert solve(m, [Fraction(3), Fraction(5)]) == [Fraction(4, 5), Fraction(7, 5)]
    with pytest.raises(ZeroDivisionError):
        solve([[Fraction(1), Fraction(2)], [Fraction(2), Fraction(4)]], [Fraction(1), Fraction(1)])


def test_system_problems_reported():
    bad = CurveSystem(Fraction(3), ("X", "Y"), [[-1, 1], [0, -1]], [1, 0])
    assert any("symmetric" in p for p in bad.problems())
    positive = CurveSystem(Fraction(3), ("X",), [[1]], [1])
    assert positive.problems()


@st.composite
def classes(draw, sys):
    a = draw(rationals)
    cs = draw(st.lists(rationals, min_size=len(sys), max_size=len(sys)))
    return DivisorClass(a, tuple(cs))


@given(st.data())
def test_pair_symmetric_and_bilinear(by_id, data):
    sys = by_id["twoline-general-generic"].system
    u, v, w = (data.draw(classes(sys)) for _ in range(3))
    alpha = data.draw(rationals)
    assert pair(u, v, sys) == pair(v, u, sys)
    assert pair(u * alpha + w, v, sys) == alpha * pair(u, v, sys) + pair(w, v, sys)


def _char_poly(matrix):
    """Faddeev-LeVerrier: coefficients of det(tI - M), leading first."""
    n = len(matrix)
    ident = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    coeffs = [Fraction(1)]
    m_k = [[Fraction(0)] * n for _ in range(n)]
    for k in range(1, n + 1):
        prev = [[m_k[i][j] + coeffs[-1] * ident[i][j] for j in range(n)] for i in range(n)]
        m_k = [[sum(matrix[i][l] * prev[l][j] for l in range(n)) for j in range(n)] for i in range(n)]
        coeffs.append(-sum(m_k[i][i] for i in range(n)) / k)
    return coeffs


def _nd_oracle(matrix):
    """All eigenvalues of a symmetric matrix are negative iff every
    coefficient of its (real-rooted) characteristic polynomial is positive."""
    return all(c > 0 for c in _char_poly(matrix))


def _grid_negative(matrix, steps=(-1, 0, 1, 2)):
    n = len(matrix)
    for v in itertools.product(steps, repeat=n):
        if any(v):
            q = sum(v[i] * matrix[i][j] * v[j] for i in range(n) for j in range(n))
            if q >= 0:
                return False
    return True


def test_negative_definite_matches_oracles(catalog):
    checked = 0
    for s in catalog:
        sys = s.system
        for size in range(1, min(5, len(sys)) + 1):
            for subset in itertools.combinations(range(len(sys)), size):
                sub = sys.submatrix(subset)
                verdict = is_negative_definite(sys, subset)
                assert verdict == _nd_oracle(sub), (s.id, subset)
                if verdict:
                    assert _grid_negative(sub), (s.id, subset)
                checked += 1
    assert checked > 500


def test_leading_minors_alternate_for_negative_definite():
    m = [[Fraction(-2), Fraction(1)], [Fraction(1), Fraction(-2)]]
    assert leading_minors(m) == [Fraction(-2), Fraction(3)]
