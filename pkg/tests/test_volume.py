from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from delpezzo_delta.errors import DegenerateBound, IrrationalThreshold, NotNef, RangeError
from delpezzo_delta.lattice import CurveSystem, DivisorClass
from delpezzo_delta.volume import (
    PiecewisePoly,
    delta_from_mult_bound,
    evaluate,
    expected_vanishing_order,
    integrate,
    sweep,
    tail_bound_barycenter,
    tail_bound_simple,
    tau,
    tau_upper_via_nef,
    volume_function,
)

from conftest import sq


def full(catalog):
    return [s for s in catalog if s.mode == "full"]


def test_cubic_line_single_piece(by_id):
    s = by_id["cubic-line"]
    pw = volume_function(s.system, "L")
    assert pw.rows() == [(0, 1, 3, -2, -1)]
    assert tau(s.system, "L") == 1
    assert expected_vanishing_order(s.system, "L") == Fraction(5, 9)


def test_eckardt_table(by_id):
    s = by_id["eckardt-Q-on-line"]
    pw = volume_function(s.system, "E2")
    f = Fraction
    assert pw.breakpoints == (0, 1, 2, 4)
    assert pw.pieces == ((3, 0, f(-1, 2)), (f(20, 6), f(-4, 6), f(-1, 6)), sq(f(1, 3), 4, 1))
    assert tau(s.system, "E2") == 4
    assert integrate(pw, 0, 4) == Fraction(17, 3)
    assert expected_vanishing_order(s.system, "E2") == Fraction(17, 9)


def test_irrational_threshold():
    sys = CurveSystem(Fraction(3), ("F",), [[-1]], [0])
    with pytest.raises(IrrationalThreshold):
        volume_function(sys, "F")


def test_tau_examples(by_id):
    assert tau(by_id["dp1-singular"].system, "E1") == 2
    assert expected_vanishing_order(by_id["dp1-Q-on-C"].system, "E2") == Fraction(11, 9)


def test_integrate_examples(by_id):
    pw = volume_function(by_id["dp1-ordinary"].system, "E1")
    assert pw.rows() == [(0, 1, 1, 0, -1)]
    assert integrate(pw, 0, 1) == Fraction(2, 3)
    assert integrate(pw, Fraction(1, 2), Fraction(1, 2)) == 0
    with pytest.raises(RangeError):
        integrate(pw, 0, 2)
    with pytest.raises(RangeError):
        pw(Fraction(-1))


def test_tail_bound_examples(by_id):
    f = Fraction
    two = volume_function(by_id["twoline-general-generic"].system, "E2", stop=f(5, 2))
    assert two(f(5, 2)) == f(1, 8)
    assert tail_bound_simple(two, f(5, 2), 3) == f(1, 16)
    assert tail_bound_simple(two, f(5, 2), f(5, 2)) == 0
    conic = volume_function(by_id["oneline-general-conic"].system, "E2", stop=f(5, 2))
    assert tail_bound_simple(conic, f(5, 2), 3) == f(1, 48)
    three = volume_function(by_id["oneline-general-threelines"].system, "E2", stop=f(5, 2))
    assert three(f(5, 2)) == f(1, 6)
    assert tail_bound_barycenter(three, f(5, 2), 3) == f(1, 18)
    const = PiecewisePoly((0, 1), ((3, 0, 0),), complete=False)
    assert tail_bound_barycenter(const, 0, 1) == 2
    assert tail_bound_barycenter(const, 1, 1) == 0
    with pytest.raises(RangeError):
        tail_bound_simple(const, 2, 1)


def test_tau_upper_via_nef(by_id):
    s = by_id["twoline-general-generic"]
    sys = s.system
    nef = DivisorClass.from_map(sys, {"E1": 1, "N": 2, "M": 1})
    assert tau_upper_via_nef(sys, nef, "E2") == 3
    c = by_id["oneline-general-conic"]
    nef = DivisorClass.from_map(c.system, {"l": 1, "Z": 2, "L": 1})
    assert tau_upper_via_nef(c.system, nef, "E2") == 3
    with pytest.raises(DegenerateBound):
        tau_upper_via_nef(sys, DivisorClass.anticanonical(sys), "E2")
    with pytest.raises(NotNef):
        tau_upper_via_nef(sys, DivisorClass.curve(sys, "E2"), "E2")


def test_delta_from_mult_bound():
    assert delta_from_mult_bound(Fraction(17, 9)) == Fraction(18, 17)
    assert delta_from_mult_bound(2) == 1
    assert delta_from_mult_bound(Fraction(11, 9)) == Fraction(18, 11)


def test_volume_invariants(catalog):
    for s in catalog:
        stop = s.truncation.mu if s.truncation else None
        pw = volume_function(s.system, s.F, stop=stop)
        assert pw.problems(s.degree) == [], s.id
        assert pw(0) == s.degree
        if s.mode == "full":
            assert pw.complete and pw(pw.end) == 0
        else:
            assert not pw.complete and pw(pw.end) > 0


def _riemann(pw, lo, hi, n):
    """Midpoint sums per piece with the exact midpoint-rule error bound."""
    total, bound = Fraction(0), Fraction(0)
    for a, b, piece in zip(pw.breakpoints, pw.breakpoints[1:], pw.pieces):
        a, b = max(a, lo), min(b, hi)
        if a >= b:
            continue
        h = (b - a) / n
        total += h * sum(evaluate(piece, a + (k + Fraction(1, 2)) * h) for k in range(n))
        bound += (b - a) * h * h * abs(2 * piece[2]) / 24
    return total, bound


def test_integrate_matches_riemann_oracle(catalog):
    for s in catalog:
        stop = s.truncation.mu if s.truncation else None
        pw = volume_function(s.system, s.F, stop=stop)
        exact = integrate(pw, pw.start, pw.end)
        approx, bound = _riemann(pw, pw.start, pw.end, 16)
        assert abs(exact - approx) <= bound, s.id


@given(st.fractions(0, 1), st.fractions(0, 1))
def test_integrate_additive(by_id, u, v):
    pw = volume_function(by_id["eckardt-Q-on-line"].system, "E2")
    a, b = sorted((u * 4, v * 4))
    m = (a + b) / 2
    assert integrate(pw, a, b) == integrate(pw, a, m) + integrate(pw, m, b)


def _sqrt_midpoint_concave(v1, vm, v2):
    """sqrt(vm) >= (sqrt(v1) + sqrt(v2)) / 2, decided exactly by squaring."""
    lhs = 4 * vm - v1 - v2
    return lhs >= 0 and lhs * lhs >= 4 * v1 * v2


def test_log_concavity_spot_checks(catalog):
    for s in catalog:
        stop = s.truncation.mu if s.truncation else None
        pw = volume_function(s.system, s.F, stop=stop)
        grid = [pw.end * Fraction(k, 12) for k in range(13)]
        for x1 in grid:
            for x2 in grid:
                if x1 < x2:
                    assert _sqrt_midpoint_concave(pw(x1), pw((x1 + x2) / 2), pw(x2)), (s.id, x1, x2)


def test_tail_bounds_dominate_true_tail(by_id):
    for sid in ("eckardt-Q-on-line", "eckardt-Q-general", "dp1-Q-on-C", "dp1-Q-off-C", "dp1-singular"):
        s = by_id[sid]
        pw = volume_function(s.system, s.F)
        for k in range(0, 10):
            mu = pw.end * Fraction(k, 10)
            true_tail = integrate(pw, mu, pw.end)
            assert tail_bound_simple(pw, mu, pw.end) >= true_tail
            assert tail_bound_barycenter(pw, mu, pw.end) >= true_tail


def test_truncated_sweep_stops_at_mu(by_id):
    s = by_id["twoline-general-generic"]
    sw = sweep(s.system, "E2", stop=Fraction(5, 2))
    assert not sw.complete and sw.merged.end == Fraction(5, 2)
    assert sw.merged.rows()[-1] == (2, Fraction(5, 2), 7, -4, Fraction(1, 2))


def test_piecewise_problems_detected():
    jump = PiecewisePoly((0, 1, 2), ((3, 0, 0), (1, 0, 0)))
    assert any("discontinuous" in p for p in jump.problems())
    rising = PiecewisePoly((0, 1), ((0, 1, 0),))
    assert any("increasing" in p for p in rising.problems())
    with pytest.raises(ValueError):
        PiecewisePoly((0, 0), ((1, 0, 0),))
