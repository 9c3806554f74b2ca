import itertools
from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, strategies as st

from suppvar import exactlinalg as el
from suppvar.exactlinalg import GF, QQ


def small_matrix(max_rows=5, max_cols=5, lo=0, hi=6):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(st.integers(lo, hi), min_size=c, max_size=c),
                               min_size=r, max_size=r)))


def gf2_rank_by_enumeration(rows):
    """Rank over GF(2) as log2 of the size of the row space."""
    rows = [tuple(r) for r in rows]
    seen = set()
    for mask in itertools.product([0, 1], repeat=len(rows)):
        v = [0] * len(rows[0])
        for bit, r in zip(mask, rows):
            if bit:
                v = [(a + b) % 2 for a, b in zip(v, r)]
        seen.add(tuple(v))
    return len(seen).bit_length() - 1


def test_parse_field_forms():
    assert el.parse_field("2") == GF(2)
    assert el.parse_field("GF(5)") == GF(5)
    assert el.parse_field("QQ") is QQ
    with pytest.raises(ValueError):
        el.parse_field("GF(6)")


@given(small_matrix(hi=1))
def test_gf2_rank_matches_enumeration(rows):
    assert el.rank(np.array(rows), GF(2)) == gf2_rank_by_enumeration(rows)


@given(small_matrix(lo=-4, hi=4))
def test_rational_rank_matches_sympy(rows):
    assert el.rank(QQ.array(rows), QQ) == sympy.Matrix(rows).rank()


@given(small_matrix(hi=6))
def test_rank_nullity_gf7(rows):
    f = GF(7)
    a = f.array(rows)
    k = el.kernel_basis(a, f)
    assert el.rank(a, f) + k.shape[1] == a.shape[1]
    assert not np.any(f.matmul(a, k))


@given(small_matrix(hi=4), st.integers(0, 2**16))
def test_solve_right_finds_solutions(rows, seed):
    f = GF(5)
    a = f.array(rows)
    rng = np.random.default_rng(seed)
    x0 = f.random(rng, (a.shape[1], 2))
    b = f.matmul(a, x0)
    x, _ = el.solve_right(a, b, f)
    assert x is not None
    assert np.array_equal(f.matmul(a, x), b)
    solver = el.LinearSolver(a, f)
    assert np.array_equal(f.matmul(a, solver.solve(b)), b)


def test_solve_right_reports_inconsistency():
    f = GF(3)
    a = f.array([[1, 0], [0, 0]])
    x, _ = el.solve_right(a, f.array([[0], [1]]), f)
    assert x is None


@given(small_matrix(max_rows=4, max_cols=4, hi=10), small_matrix(max_rows=4, max_cols=4, hi=10))
def test_subspace_dimension_formula(u, v):
    f = GF(11)
    n = 4
    u = f.array([r + [0] * (n - len(r)) for r in u]).T
    v = f.array([r + [0] * (n - len(r)) for r in v]).T
    s = el.subspace_sum(u, v, f).shape[1]
    i = el.subspace_intersect(u, v, f).shape[1]
    assert s + i == el.rank(u, f) + el.rank(v, f)


@given(st.integers(1, 5), st.integers(0, 2**16))
def test_inverse_roundtrip(n, seed):
    f = GF(13)
    rng = np.random.default_rng(seed)
    a = f.random(rng, (n, n))
    if not el.is_invertible(a, f):
        assert el.rank(a, f) < n
        return
    assert np.array_equal(f.matmul(a, el.inverse(a, f)), f.eye(n))


@given(st.integers(1, 5), st.integers(0, 2**16))
def test_charpoly_matches_sympy_mod_p(n, seed):
    p = 7
    f = GF(p)
    rng = np.random.default_rng(seed)
    a = f.random(rng, (n, n))
    ours = el.charpoly(a, f)
    x = sympy.Symbol("x")
    theirs = sympy.Poly(sympy.Matrix(a.tolist()).charpoly(x).as_expr(), x).all_coeffs()
    assert ours == [int(c) % p for c in theirs]
    assert not np.any(el.poly_eval_matrix(ours, a, f))


def test_charpoly_rational():
    a = QQ.array([[Fraction(1, 2), 1], [0, 3]])
    assert el.charpoly(a, QQ) == [1, Fraction(-7, 2), Fraction(3, 2)]


def test_factor_poly_over_gf2_and_q():
    # x^2 + 1 = (x + 1)^2 in characteristic 2
    assert el.factor_poly([1, 0, 1], GF(2)) == [([1, 1], 2)]
    facs = el.factor_poly([Fraction(1), Fraction(0), Fraction(-1)], QQ)
    assert sorted(f for f, _ in facs) == [[1, -1], [1, 1]]


def test_echelon_tracks_independence():
    f = GF(3)
    e = el.Echelon(3, f)
    assert e.add(f.array([1, 1, 0]))
    assert e.add(f.array([0, 1, 1]))
    assert not e.add(f.array([1, 2, 1]))
    assert e.contains(f.array([2, 1, 2]))
    assert not e.contains(f.array([2, 0, 2]))
    assert len(e) == 2


def test_canonical_basis_is_independent_of_spanning_set():
    f = GF(5)
    a = f.array([[1, 2], [0, 1], [3, 0]])
    b = f.array([[1, 3, 2], [0, 1, 1], [3, 3, 0]])     # same span, extra column
    assert np.array_equal(el.canonical_basis(a, f), el.canonical_basis(b, f))


def test_matmul_does_not_overflow_large_primes():
    p = 2**31 - 1
    f = GF(p)
    a = f.array([[p - 1] * 8] * 8)
    got = f.matmul(a, a)
    assert int(got[0, 0]) == (8 * (p - 1) ** 2) % p
