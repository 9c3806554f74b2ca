import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from suppvar.cohom import hh_complex, restrict_to_ext
from suppvar.fixtures import fixture
from suppvar.growth import complexity
from suppvar.polys import IdealTruncation, hilbert_krull
from suppvar.repmod import (decompose, direct_sum, projective, radical, regular_module, simple,
                            syzygy_module, top_semisimple)
from suppvar.variety import (FgViolation, HAction, HSpec, annihilator, default_hspec, eta_square_annihilation_check,
                             even_to_degree, ext_vanishing_check, fg_diagnostic, h_relations, line_module,
                             pencil_family, periodic_witness, realize_variety, split_equivalence_check,
                             variety_report)


def ext_generator(a, cap=4):
    cx = hh_complex(a, cap)
    return next(cx.klass(1, i) for i in range(cx.dim(1)) if not restrict_to_ext(cx.klass(1, i)).is_zero())


def brute_force_ideal_dims(h, m, cap, degrees):
    """Count polynomials of each degree acting as zero on Ext*(m, A/r), by enumeration over GF(2)."""
    act = HAction(h, m, top_semisimple(m.algebra), cap)
    f = h.field
    out = []
    for d in degrees:
        mons = h.ring.monomials(d)
        count = 0
        for bits in itertools.product([0, 1], repeat=len(mons)):
            p = {e: f.one for e, b in zip(mons, bits) if b}
            if all(not np.any(act.poly_matrix(p, i)) for i in range(cap - d + 1)):
                count += 1
        out.append(count.bit_length() - 1)
    return out


def test_default_hspec_choices(get_algebra):
    assert default_hspec(get_algebra("A1"), cap=4).degrees == [1]
    assert default_hspec(get_algebra("A3"), cap=4).degrees == [1, 1]
    assert default_hspec(get_algebra("A5"), cap=4).degrees == [2]
    assert default_hspec(get_algebra("A4(2)"), cap=3).degrees == []
    assert default_hspec(fixture("A1", field=5), cap=4).degrees == [2]


def test_generators_commute(get_algebra):
    h = default_hspec(get_algebra("A3"), cap=4)
    assert h.check_commutes()


def test_relations(get_algebra):
    a = get_algebra("A1")
    h = default_hspec(a, cap=6)
    assert h_relations(h).completed() == []
    cx = hh_complex(a, 4)
    # a nilpotent degree-0 class z (z^2 = 0) next to the degree-1 generator
    h2 = HSpec(a, [cx.klass(1, 0), cx.klass(0, 1)], cap=4)
    rel = h_relations(h2)
    assert rel.fmt() == ["x2^2"]
    assert hilbert_krull(rel) == (1, 1)
    with pytest.raises(FgViolation):
        HSpec(a, [cx.klass(0, 0)], cap=4)
    h3 = HSpec(a, [cx.klass(1, 1)], cap=4)
    assert h_relations(h3).fmt() == ["x1^2"]


def test_even_degree_hspec(get_algebra):
    h = even_to_degree(get_algebra("A1"), 2, cap=4)
    assert set(h.degrees) == {2}


@pytest.mark.parametrize("name", ["A1", "A3"])
def test_annihilator_matches_enumeration(get_algebra, name):
    a = get_algebra(name)
    h = default_hspec(a, cap=6)
    for m in (simple(a, 0), radical(regular_module(a)), line_module(h, 0)):
        ann = annihilator(h, m, 6)
        hilb = ann.hilbert()
        degrees = [1, 2, 3]
        ideal_dims = [len(h.ring.monomials(d)) - hilb[d] for d in degrees]
        assert ideal_dims == brute_force_ideal_dims(h, m, 6, degrees)
        for g in ann.completed():
            assert HAction(h, m, top_semisimple(a), 6) \
                .annihilates(g)


def test_annihilator_examples(get_algebra):
    a = get_algebra("A1")
    h = default_hspec(a, cap=6)
    assert annihilator(h, simple(a, 0)).completed() == []
    ann = annihilator(h, projective(a, 0))
    assert ann.hilbert() == [1] + [0] * 6
    a4 = get_algebra("A4(2)")
    cx = hh_complex(a4, 3)
    gens = [cx.klass(d, 0) for d in (1, 2) if cx.dim(d)]
    h4 = HSpec(a4, gens, cap=3, check=False)
    ann4 = annihilator(h4, simple(a4, 0), 3)
    for i in range(len(gens)):
        assert ann4.contains(h4.ring.var(i))


@pytest.mark.parametrize("name,vertex,bounds,label", [
    ("A1", 0, (1, 1), "finite 1"), ("A3", 0, (2, 2), "finite 2"),
    ("A5", 0, (1, 1), "finite 1"), ("A5", 1, (1, 1), "finite 1"),
])
def test_complexity_within_krull_bounds(get_algebra, name, vertex, bounds, label):
    a = get_algebra(name)
    h = default_hspec(a, cap=8)
    rep = variety_report(h, simple(a, vertex), 8)
    assert (rep.krull_dim_lower, rep.krull_dim_upper) == bounds
    assert rep.complexity.label() == label
    assert rep.consistent


def test_projective_variety_is_trivial(get_algebra):
    a = get_algebra("A3")
    rep = variety_report(default_hspec(a, cap=6), projective(a, 0), 6)
    assert (rep.krull_dim_lower, rep.krull_dim_upper) == (0, 0)
    assert rep.complexity.label() == "finite 0"
    assert rep.consistent


def test_eta_square_annihilation(get_algebra):
    a = get_algebra("A1")
    k = simple(a, 0)
    eta = ext_generator(a)
    assert eta_square_annihilation_check(eta, k)
    assert eta_square_annihilation_check(hh_complex(a, 4).zero(1), k)


@settings(max_examples=20)
@given(st.sampled_from(["A1", "A3"]), st.sampled_from([1, 2]), st.integers(0, 10), st.integers(0, 2))
def test_split_conditions_agree(name, degree, index, which):
    a = fixture(name)
    cx = hh_complex(a, 4)
    eta = cx.klass(degree, index % cx.dim(degree))
    k = simple(a, 0)
    m = [k, radical(regular_module(a)), direct_sum(k, syzygy_module(k))][which]
    rep = split_equivalence_check([eta], m, cap=8)
    assert rep["agree"] and not rep["falsification"]
    if rep["in_annihilator"]:
        assert rep["summand"]
    assert eta_square_annihilation_check(eta, m, 8)


def test_split_conditions_examples(get_algebra):
    a = get_algebra("A1")
    k = simple(a, 0)
    rep = split_equivalence_check([ext_generator(a)], k)
    assert (rep["in_annihilator"], rep["each_splits"], rep["chain_splits"]) == (False, False, False)
    cx = hh_complex(a, 4)
    rep = split_equivalence_check([cx.zero(1), cx.zero(2)], k)
    assert (rep["in_annihilator"], rep["each_splits"], rep["chain_splits"]) == (True, True, True)
    assert rep["summand"]


def test_realization_on_a3(get_algebra):
    a = get_algebra("A3")
    h = default_hspec(a, cap=8)
    one = realize_variety(h, [h.ring.var(0)])
    assert one.report.complexity.label() == "finite 1"
    assert (one.report.krull_dim_lower, one.report.krull_dim_upper) == (1, 1) == one.expected
    assert one.inclusion and one.matches
    two = realize_variety(h, [h.ring.var(0), h.ring.var(1)])
    assert two.report.complexity.label() == "finite 0"
    assert two.expected == (0, 0) and two.matches
    empty = realize_variety(h, [])
    assert (empty.report.krull_dim_lower, empty.report.krull_dim_upper) == (2, 2)


def test_realization_on_a1(get_algebra):
    a = get_algebra("A1")
    h = default_hspec(a, cap=6)
    r = realize_variety(h, [h.generators[0]])
    assert r.report.complexity.label() == "finite 0"
    assert r.matches


def test_witness(get_algebra):
    a3 = get_algebra("A3")
    w = periodic_witness(default_hspec(a3, cap=8), simple(a3, 0))
    assert w.route == "recipe"
    assert w.ext1_dim >= 1
    assert w.complexity.finite and w.complexity.value <= 1
    a1 = get_algebra("A1")
    w1 = periodic_witness(default_hspec(a1, cap=6), simple(a1, 0))
    assert w1.route == "periodic" and w1.ext1_dim >= 1


def test_pencil(get_algebra):
    a = get_algebra("A3")
    h = default_hspec(a, cap=6)
    rep = pencil_family(h, 0, 1)
    assert rep["distinct_annihilators"] and rep["distinct_ideals"]
    assert rep["all_complexity_one"]
    again = pencil_family(h, 0, 1, alphas=((1, 1), (1, 1)))
    assert again["members"][0] == again["members"][1]


def test_fg_diagnostic(get_algebra):
    assert fg_diagnostic(default_hspec(get_algebra("A1"), cap=6))["verdict"] == "PASS-to-cap"
    rep = fg_diagnostic(default_hspec(get_algebra("A3"), cap=6))
    assert rep["verdict"] == "PASS-to-cap"
    assert rep["growth"]["max_complexity"] == 2


def test_ext_vanishing(get_algebra):
    a = get_algebra("A3")
    h = default_hspec(a, cap=8)
    m = line_module(h, 0)
    n = line_module(h, 1)
    rep = ext_vanishing_check(h, m, n)
    assert rep["precondition"] and rep["held"]
    assert rep["ext_dims"] == [0] * 8
    dec = decompose(direct_sum(m, n))
    assert len(dec.summands) == 2
    same = ext_vanishing_check(h, m, m)
    assert not same["precondition"]
    assert ext_vanishing_check(h, projective(a, 0), m)["vacuous"]


def test_witness_from_a_too_small_h_is_refused(get_algebra):
    from suppvar.variety import WitnessError
    a = get_algebra("A3")
    cx = hh_complex(a, 6)
    h = HSpec(a, [cx.klass(1, 0)], cap=6)
    with pytest.raises(WitnessError):
        periodic_witness(h, simple(a, 0))
