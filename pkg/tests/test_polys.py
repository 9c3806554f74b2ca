import itertools

import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from suppvar import exactlinalg as el
from suppvar.exactlinalg import GF
from suppvar.polys import IdealTruncation, PolyRing, hilbert_krull, monomials_of_degree, wdeg

F = GF(3)


def poly_from(ring, terms):
    out = {}
    for e, c in terms:
        ring.add_scaled(out, {tuple(e): ring.field.one}, ring.field(c))
    return out


def span_hilbert(ring, gens, cap):
    """Quotient dimensions from the rank of all multiples, no Gröbner bases involved."""
    f = ring.field
    out = []
    for d in range(cap + 1):
        mons = ring.monomials(d)
        index = {e: i for i, e in enumerate(mons)}
        cols = []
        for g in gens:
            dg = ring.degree(g)
            if dg > d:
                continue
            for m in ring.monomials(d - dg):
                prod = ring.mul({m: f.one}, g)
                v = f.zeros(len(mons))
                for e, c in prod.items():
                    v[index[e]] = c
                cols.append(v)
        r = el.rank(np.stack(cols, axis=1), f) if cols else 0
        out.append(len(mons) - r)
    return out


def homogeneous_poly(weights, degree, coeffs):
    return {e: c for e, c in zip(monomials_of_degree(weights, degree), coeffs) if c % 3}


@st.composite
def homogeneous_ideals(draw):
    weights = draw(st.sampled_from([(1, 1), (1, 1, 1), (1, 2), (2, 1, 1)]))
    ring = PolyRing(F, weights)
    gens = []
    for _ in range(draw(st.integers(1, 3))):
        d = draw(st.integers(1, 3))
        mons = monomials_of_degree(weights, d)
        if not mons:
            continue
        coeffs = draw(st.lists(st.integers(0, 2), min_size=len(mons), max_size=len(mons)))
        p = {e: F(c) for e, c in zip(mons, coeffs) if c}
        if p:
            gens.append(p)
    return ring, gens


def test_degrevlex_order_on_degree_two():
    assert monomials_of_degree((1, 1, 1), 2) == [(2, 0, 0), (1, 1, 0), (0, 2, 0), (1, 0, 1), (0, 1, 1), (0, 0, 2)]
    assert all(wdeg(e, (1, 2)) == 4 for e in monomials_of_degree((1, 2), 4))


@settings(max_examples=30)
@given(homogeneous_ideals())
def test_hilbert_function_matches_linear_algebra(data):
    ring, gens = data
    cap = 6
    ideal = IdealTruncation(ring, gens, cap)
    assert ideal.hilbert() == span_hilbert(ring, gens, cap)


@settings(max_examples=30)
@given(homogeneous_ideals(), st.randoms(use_true_random=False))
def test_groebner_basis_ignores_generator_order(data, rnd):
    ring, gens = data
    shuffled = list(gens)
    rnd.shuffle(shuffled)
    a = IdealTruncation(ring, gens, 6)
    b = IdealTruncation(ring, shuffled, 6)
    assert a.canonical() == b.canonical()
    for g in gens:
        assert b.contains(g)


@settings(max_examples=30)
@given(homogeneous_ideals())
def test_leading_terms_match_sympy_groebner(data):
    ring, gens = data
    if set(ring.weights) != {1} or not gens:
        return
    xs = sympy.symbols(f"x1:{ring.nvars + 1}")
    exprs = [sum(int(c) * sympy.prod([x ** k for x, k in zip(xs, e)]) for e, c in g.items()) for g in gens]
    gb = sympy.groebner(exprs, *xs, order="grevlex", modulus=3)
    theirs = sorted(sympy.Poly(p, *xs).monoms(order="grevlex")[0] for p in gb.exprs)
    if max(sum(m) for m in theirs) > 8 or theirs == [(0,) * ring.nvars]:
        return
    ours = sorted(IdealTruncation(ring, gens, 8).leads())
    assert ours == theirs


@pytest.mark.parametrize("terms,expected", [
    ([], (2, 2)),
    ([[((1, 0), 1)]], (1, 1)),
    ([[((1, 1), 1)]], (1, 1)),
    ([[((1, 0), 1)], [((0, 1), 1)]], (0, 0)),
    ([[((2, 0), 1)]], (1, 1)),
])
def test_krull_bounds_of_small_ideals(terms, expected):
    ring = PolyRing(F, (1, 1))
    gens = [poly_from(ring, t) for t in terms]
    assert hilbert_krull(IdealTruncation(ring, gens, 8)) == expected


def test_krull_bounds_weighted():
    ring = PolyRing(F, (1, 2))
    ideal = IdealTruncation(ring, [poly_from(ring, [((0, 2), 1)])], 10)
    assert hilbert_krull(ideal) == (1, 1)


@settings(max_examples=40)
@given(st.lists(st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(0, 2)), max_size=4))
def test_monomial_ideal_krull_dimension(exps):
    exps = [e for e in exps if sum(e) > 0]
    ring = PolyRing(F, (1, 1, 1))
    gens = [{e: F.one} for e in exps]
    # the largest coordinate subspace avoiding every generator
    best = 0
    for size in range(4):
        for s in itertools.combinations(range(3), size):
            if not any(all(i in s for i in range(3) if e[i]) for e in exps):
                best = max(best, size)
    lower, upper = hilbert_krull(IdealTruncation(ring, gens, 12))
    assert lower == upper == best


def test_nilpotent_degree_zero_variable():
    # a weight-zero variable with z^2 = 0 contributes nothing to growth
    ring = PolyRing(F, (0, 1), bounds=(1, 0))
    ideal = IdealTruncation(ring, [], 6)
    assert ideal.hilbert() == [2] * 7
    assert hilbert_krull(ideal)[0] == 1
