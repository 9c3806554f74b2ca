import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from suppvar.algebra import (AdmissibilityError, NotFiniteDimensionalAtCap,
                             Quiver, basis_identical, build_algebra, is_connected)
from suppvar.fixtures import fixture


@pytest.mark.parametrize("name,dim,vertices", [
    ("A1", 2, 1), ("A2(3)", 3, 1), ("A2(5)", 5, 1), ("A3", 4, 1), ("A4(2)", 3, 1), ("A4(3)", 4, 1),
    ("A5", 4, 2), ("PATH_A2", 3, 2),
])
def test_fixture_dimensions(get_algebra, name, dim, vertices):
    a = get_algebra(name)
    assert a.dim == dim
    assert a.num_vertices == vertices
    assert a.check_associative()


def test_commutative_quotient_matches_monomial_count():
    # k<x,y>/(xy - yx, x^2, y^3) is k[x,y]/(x^2, y^3), of dimension 2 * 3
    q = Quiver(["1"], [("x", "1", "1"), ("y", "1", "1")])
    a = build_algebra(q, ["x*y - y*x", "x*x", "y*y*y"], 5, length_cap=6)
    assert a.dim == 6
    assert a.check_associative()
    # the centre of a commutative algebra is everything
    assert a.centre().shape[1] == a.dim


def _words_avoiding(forbidden, letters, max_len):
    out = 0
    for n in range(max_len + 1):
        for w in itertools.product(letters, repeat=n):
            if not any(w[i:i + 2] in forbidden for i in range(n - 1)):
                out += 1
    return out


@given(st.sets(st.sampled_from(list(itertools.product("xy", repeat=2)))))
def test_monomial_algebras_count_surviving_words(zero_pairs):
    # all paths of length 3 vanish; a random set of length-2 monomials vanishes too
    q = Quiver(["1"], [("x", "1", "1"), ("y", "1", "1")])
    rels = ["*".join(w) for w in itertools.product("xy", repeat=3)] + ["*".join(p) for p in zero_pairs]
    a = build_algebra(q, rels, 2, length_cap=5)
    assert a.dim == _words_avoiding(set(zero_pairs), "xy", 2)
    assert a.check_associative()


def test_noncommutative_relation_keeps_the_other_order():
    q = Quiver(["1"], [("x", "1", "1"), ("y", "1", "1")])
    a = build_algebra(q, ["x*x", "y*y", "x*y"], 3, length_cap=5)
    assert sorted(a.labels) == sorted(["e1", "x", "y", "y*x"])


def test_opposite_is_an_involution(get_algebra):
    for name in ("A1", "A3", "A5"):
        a = get_algebra(name)
        op = a.opposite()
        assert op.opposite() is a
        assert op.dim == a.dim
        assert op.check_associative()
        assert basis_identical(a, a)


def test_enveloping_algebra_dimension(get_algebra):
    for name in ("A1", "A5"):
        a = get_algebra(name)
        env = a.enveloping()
        assert env.dim == a.dim ** 2
        assert env.num_vertices == a.num_vertices ** 2
        assert env.check_associative()


def test_unit_and_idempotents(get_algebra):
    a = get_algebra("A5")
    assert a.check_idempotents()
    u = a.unit()
    f = a.field
    for i in range(a.dim):
        e = f.zeros(a.dim)
        e[i] = 1
        assert np.array_equal(a.multiply(u, e), e)
        assert np.array_equal(a.multiply(e, u), e)


def test_non_admissible_relation_rejected():
    q = Quiver(["1"], [("x", "1", "1")])
    with pytest.raises(AdmissibilityError):
        build_algebra(q, ["x"], 2)


def test_non_parallel_relation_rejected():
    q = Quiver(["1", "2"], [("a", "1", "2"), ("b", "2", "1")])
    with pytest.raises(AdmissibilityError):
        build_algebra(q, ["a*b + b*a"], 2)


def test_infinite_algebra_hits_the_cap():
    q = Quiver(["1"], [("x", "1", "1"), ("y", "1", "1")])
    with pytest.raises(NotFiniteDimensionalAtCap):
        build_algebra(q, ["x*x"], 2, length_cap=4)


def test_connectedness():
    assert is_connected(fixture("A5"))
    q = Quiver(["1", "2"], [])
    assert not is_connected(build_algebra(q, [], 2))


def test_bad_quiver_inputs():
    with pytest.raises(ValueError):
        Quiver(["1", "1"], [])
    with pytest.raises(ValueError):
        Quiver(["1"], [("a", "1", "3")])
    q = Quiver(["1"], [("x", "1", "1")])
    with pytest.raises(ValueError):
        q.parse_path("x*z")
