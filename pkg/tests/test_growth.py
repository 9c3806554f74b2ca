from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from suppvar.growth import (berlekamp_massey, classify_betti, complexity, line_implies_periodic_check,
                            period_divisor_check, periodic_ext_structure, periodicity, replay)
from suppvar.repmod import dual, projective, simple, syzygy_module
from suppvar.variety import default_hspec


def test_berlekamp_massey_known_sequences():
    assert berlekamp_massey([1, 1, 1, 1, 1]) == (1, [1, -1])
    L, c = berlekamp_massey([1, 1, 2, 3, 5, 8, 13, 21])
    assert L == 2 and c == [1, -1, -1]
    L, c = berlekamp_massey([1, 2, 4, 8, 16])
    assert (L, c) == (1, [1, -2])
    assert berlekamp_massey([0, 0, 0])[0] == 0


@given(st.lists(st.integers(-5, 5), min_size=1, max_size=12))
def test_recurrence_replays_any_sequence(seq):
    L, c = berlekamp_massey(seq)
    assert replay(c, seq) == [Fraction(x) for x in seq]
    assert L <= len(seq)


@settings(max_examples=40)
@given(st.integers(0, 3), st.lists(st.integers(0, 4), min_size=4, max_size=4), st.integers(1, 5))
def test_polynomial_growth_is_finite(deg, lower, lead):
    # b_n = lead * n^deg + lower-order terms, always positive
    coeffs = lower[:deg] + [lead]
    betti = [sum(c * n ** i for i, c in enumerate(coeffs)) + 1 for n in range(2 * deg + 8)]
    v = classify_betti(betti)
    assert v.kind == "finite"
    assert v.value == deg + 1
    assert v.evidence["replays"]


@given(st.integers(2, 5), st.integers(1, 3))
def test_geometric_growth_is_exponential(r, a):
    v = classify_betti([a * r ** n for n in range(9)], 8)
    assert v.kind == "exponential"


def test_quasi_polynomial_growth():
    assert classify_betti([1, 1, 2, 2, 3, 3, 4, 4, 5, 5]).label() == "finite 2"
    assert classify_betti([1, 2, 1, 2, 1, 2, 1, 2, 1]).label() == "finite 1"
    assert classify_betti([1, 1, 2, 3, 5, 8, 13, 21, 34], 8).kind == "exponential"


def test_short_data_is_not_certified():
    assert classify_betti([1, 3, 2]).kind == "inconclusive"


@pytest.mark.parametrize("name,vertex,label", [
    ("A1", 0, "finite 1"), ("A3", 0, "finite 2"), ("A4(2)", 0, "exponential"),
    ("A5", 0, "finite 1"), ("A5", 1, "finite 1"), ("A2(3)", 0, "finite 1"),
])
def test_complexity_of_simples(get_algebra, name, vertex, label):
    assert complexity(simple(get_algebra(name), vertex), 8).label() == label


def test_projective_has_complexity_zero(get_algebra):
    v = complexity(projective(get_algebra("A3"), 0), 8)
    assert v.label() == "finite 0"
    assert v.betti[1:] == [0] * 8


@pytest.mark.parametrize("name", ["A1", "A3", "A5", "A2(3)"])
def test_complexity_is_stable_under_syzygy_and_dual(get_algebra, name):
    a = get_algebra(name)
    k = simple(a, 0)
    c = complexity(k, 8).label()
    assert complexity(syzygy_module(k), 8).label() == c
    assert complexity(dual(k), 8).label() == c


def test_periodicity_of_simples(get_algebra):
    assert periodicity(simple(get_algebra("A1"), 0)).period == 1
    assert periodicity(simple(get_algebra("A3"), 0)).period is None
    for v in range(2):
        per, wit = periodicity(simple(get_algebra("A5"), v))
        assert per is not None and 2 % per == 0
        assert wit.is_homomorphism()
    assert periodicity(projective(get_algebra("A1"), 0)).period is None


@pytest.mark.parametrize("name", ["A1", "A5", "A2(3)"])
def test_periodic_modules_have_complexity_one(get_algebra, name):
    k = simple(get_algebra(name), 0)
    if periodicity(k).period is not None:
        assert complexity(k, 8).label() == "finite 1"


def test_period_divides_a_generator_degree(get_algebra):
    a1 = get_algebra("A1")
    rep = period_divisor_check(simple(a1, 0), default_hspec(a1, cap=4))
    assert rep["holds"] and rep["period"] == 1
    a5 = get_algebra("A5")
    rep = period_divisor_check(simple(a5, 0), default_hspec(a5, cap=4))
    assert rep["holds"] and 2 in rep["degrees"]


def test_line_implies_periodic(get_algebra):
    a = get_algebra("A1")
    rep = line_implies_periodic_check(simple(a, 0))
    assert rep["applies"] and not rep["falsification"]
    rep = line_implies_periodic_check(projective(a, 0))
    assert not rep["applies"] and not rep["falsification"]


def test_periodic_ext_structure_of_dual_numbers(get_algebra):
    rep = periodic_ext_structure(simple(get_algebra("A1"), 0), 8)
    assert rep["unit_found"] and rep["dims_match"] and rep["complement_nilpotent"]
    assert rep["polynomial_dims"] == [1] * 9
    assert rep["nilpotent_dims"] == [0] * 9


def test_periodic_ext_structure_of_truncated_polynomials(get_algebra):
    rep = periodic_ext_structure(simple(get_algebra("A2(3)"), 0), 8)
    assert rep["period"] == 2
    assert rep["unit_found"] and rep["dims_match"] and rep["complement_nilpotent"]
    assert rep["polynomial_dims"] == [1, 0] * 4 + [1]
    assert rep["nilpotent_dims"] == [0, 1] * 4 + [0]


def test_periodic_ext_structure_rejects_projectives(get_algebra):
    with pytest.raises(ValueError):
        periodic_ext_structure(projective(get_algebra("A1"), 0))
