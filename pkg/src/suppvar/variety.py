"""Support varieties: the subalgebra H, annihilator ideals and the constructions built on them."""

import itertools
from dataclasses import dataclass, field as dc_field
from functools import reduce

import numpy as np

from . import exactlinalg as el
from .bimod import (dual_star, pushout_data, tensor_bimodules, tensor_chain,
                    tensor_over_algebra, tensor_sequence)
from .cohom import (CohomClass, ExtAction, ext_class_of, ext_algebra, ext_dims,
                    hh_complex, restrict_to_ext, yoneda_product)
from .growth import complexity, periodicity
from .polys import IdealTruncation, PolyRing, all_monomials_in, hilbert_krull
from .repmod import (Verdict, decompose, direct_sum, is_projective, is_selfinjective,
                     is_split, iso_test, min_proj_resolution, simple, top_semisimple)


class FgViolation(ValueError):
    """Chosen generators fail to graded-commute."""


class WitnessError(RuntimeError):
    pass


# -- the subalgebra H ------------------------------------------------------------


class HSpec:
    """A graded subalgebra of HH*(A) given by homogeneous generators.

    HH^0 enters only through scalars, unless nilpotent degree-0 classes are
    passed explicitly as generators.
    """

    def __init__(self, algebra, generators, names=None, cap=8, check=True):
        self.algebra = algebra
        self.cap = cap
        self.complex = hh_complex(algebra, cap)
        self.generators = list(generators)
        self.names = list(names) if names else [f"x{i + 1}" for i in range(len(self.generators))]
        self.degrees = [g.degree for g in self.generators]
        bounds = [self._nilpotency(g) if g.degree == 0 else 0 for g in self.generators]
        self.ring = PolyRing(algebra.field, self.degrees, self.names, bounds)
        self._monomials = {}
        self._relations = None
        if check:
            self.check_commutes()

    @property
    def field(self):
        return self.algebra.field

    def _nilpotency(self, g):
        f = self.field
        cur = self.complex.unit()
        for k in range(1, self.algebra.dim + 2):
            cur = yoneda_product(cur, g)
            if cur.is_zero():
                return k
        raise FgViolation("degree-0 generators must be nilpotent")

    def check_commutes(self):
        f = self.field
        for i, j in itertools.combinations_with_replacement(range(len(self.generators)), 2):
            a, b = self.generators[i], self.generators[j]
            if a.degree + b.degree > self.cap:
                continue
            ab = yoneda_product(a, b).coords()
            ba = yoneda_product(b, a).coords()
            if (a.degree * b.degree) % 2:
                ba = f.neg(ba)
            if not np.array_equal(ab, ba):
                raise FgViolation(f"generators {self.names[i]} and {self.names[j]} do not graded-commute")
        return True

    def evaluate(self, exp):
        """The HH class of a monomial, multiplied in variable order."""
        exp = tuple(exp)
        hit = self._monomials.get(exp)
        if hit is not None:
            return hit
        if not any(exp):
            out = self.complex.unit()
        else:
            j = max(i for i, e in enumerate(exp) if e)
            prev = list(exp)
            prev[j] -= 1
            out = yoneda_product(self.evaluate(prev), self.generators[j])
        self._monomials[exp] = out
        return out

    def evaluate_poly(self, p):
        f = self.field
        deg = self.ring.degree(p)
        acc = self.complex.zero(deg)
        for e, c in p.items():
            acc = acc + self.evaluate(e).scale(c)
        return acc

    def poly_of(self, eta):
        """Express an HH class as a polynomial in the generators, if possible."""
        f = self.field
        mons = self.ring.monomials(eta.degree)
        if not mons:
            raise ValueError("class is not in H")
        cols = np.stack([self.evaluate(e).coords() for e in mons], axis=1)
        x, _ = el.solve_right(cols, eta.coords(), f)
        if x is None:
            raise ValueError("class is not in H")
        x = np.asarray(x).reshape(-1)
        return {e: f(v) for e, v in zip(mons, x) if v != 0}

    def ideal(self, gens, cap=None):
        return IdealTruncation(self.ring, list(gens), self.cap if cap is None else cap)

    def __repr__(self):
        return f"HSpec({', '.join(f'{n}:{d}' for n, d in zip(self.names, self.degrees))})"


def default_hspec(algebra, cap=8, max_degree=2):
    """Generators with independent images in the Ext algebra, lowest degree first."""
    cx = hh_complex(algebra, cap)
    f = algebra.field
    chosen = []
    for d in range(1, max_degree + 1):
        probe = HSpec(algebra, chosen, cap=cap, check=False)
        ech = el.Echelon(ext_dims_top(algebra, d), f)
        for e in probe.ring.monomials(d):
            ech.add(restrict_to_ext(probe.evaluate(e), cap).coords())
        for b in cx.basis(d):
            r = restrict_to_ext(b, cap).coords()
            if ech.add(r):
                chosen.append(b)
    return HSpec(algebra, chosen, cap=cap)


def ext_dims_top(algebra, d):
    from .cohom import ext_complex
    return ext_complex(algebra, d).dim(d)


def even_to_degree(algebra, d, cap=8):
    """H spanned by all HH classes of even degree 2..d."""
    cx = hh_complex(algebra, cap)
    gens = [b for e in range(2, d + 1, 2) for b in cx.basis(e)]
    return HSpec(algebra, gens, cap=cap)


def h_relations(h, cap=None):
    """Ideal of polynomial relations among the generators, to cap."""
    cap = h.cap if cap is None else cap
    f = h.field
    gens = []
    for d in range(cap + 1):
        mons = h.ring.monomials(d)
        if not mons:
            continue
        cols = np.stack([h.evaluate(e).coords() for e in mons], axis=1)
        if cols.shape[0] == 0:
            ker = f.eye(len(mons))
        else:
            ker = el.kernel_basis(cols, f)
        for j in range(ker.shape[1]):
            gens.append({e: v for e, v in zip(mons, ker[:, j]) if v != 0})
    return IdealTruncation(h.ring, gens, cap)


def buchberger(ideal):
    ideal.completed()
    return ideal


# -- the action of H on Ext ------------------------------------------------------


class HAction:
    """Matrices of monomials of H acting on Ext^*(m, n) to a cap."""

    def __init__(self, h, m, n, cap):
        self.h, self.m, self.n, self.cap = h, m, n, cap
        self.dims = ext_dims(m, n, cap)
        self.gen_maps = [ExtAction(g, m, n, cap).maps for g in h.generators]
        self._cache = {}

    def matrix(self, exp, i):
        """Ext^i -> Ext^{i + deg}, applying generators in variable order."""
        key = (tuple(exp), i)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        f = self.h.field
        if not any(exp):
            out = f.eye(self.dims[i])
        else:
            j = max(k for k, e in enumerate(exp) if e)
            prev = list(exp)
            prev[j] -= 1
            inner = self.matrix(prev, i)
            mid = i + sum(a * w for a, w in zip(prev, self.h.degrees))
            out = f.matmul(self.gen_maps[j][mid], inner)
        self._cache[key] = out
        return out

    def poly_matrix(self, p, i):
        f = self.h.field
        d = self.h.ring.degree(p)
        out = f.zeros((self.dims[i + d], self.dims[i]))
        for e, c in p.items():
            out = f.add(out, f.scale(self.matrix(e, i), c))
        return out

    def annihilates(self, p):
        d = self.h.ring.degree(p)
        return all(not np.any(self.poly_matrix(p, i)) for i in range(self.cap - d + 1))


def annihilator(h, m, cap=None, n=None):
    """A_H(m, n) to cap; n defaults to A/r."""
    cap = h.cap if cap is None else cap
    n = top_semisimple(m.algebra) if n is None else n
    f = h.field
    act = HAction(h, m, n, cap)
    gens = []
    if not any(act.dims):
        return IdealTruncation(h.ring, [{tuple([0] * h.ring.nvars): f.one}], cap)
    for d in range(cap + 1):
        mons = h.ring.monomials(d)
        if not mons:
            continue
        rows = []
        for e in mons:
            blocks = [act.matrix(e, i).reshape(-1) for i in range(cap - d + 1)]
            rows.append(np.concatenate(blocks) if blocks else f.zeros(0))
        mat = np.stack(rows, axis=1)
        ker = el.kernel_basis(mat, f) if mat.shape[0] else f.eye(len(mons))
        for j in range(ker.shape[1]):
            gens.append({e: v for e, v in zip(mons, ker[:, j]) if v != 0})
    return IdealTruncation(h.ring, gens, cap)


@dataclass
class VarietyReport:
    module_ref: str
    annihilator: IdealTruncation
    krull_dim_lower: int
    krull_dim_upper: int
    complexity: object
    consistent: object        # None when the complexity verdict is not finite

    def to_dict(self):
        return {"module": self.module_ref,
                "annihilator": self.annihilator.fmt(),
                "hilbert": self.annihilator.hilbert(),
                "krull_dim": [self.krull_dim_lower, self.krull_dim_upper],
                "complexity": self.complexity.label(),
                "betti": list(self.complexity.betti),
                "consistent": self.consistent}


def variety_report(h, m, cap=None, name="M"):
    cap = h.cap if cap is None else cap
    ann = annihilator(h, m, cap)
    lo, hi = hilbert_krull(ann)
    cv = complexity(m, cap)
    consistent = (lo <= cv.value <= hi) if cv.finite else None
    return VarietyReport(name, ann, lo, hi, cv, consistent)


# -- theorem checks ---------------------------------------------------------------


def eta_square_annihilation_check(eta, m, cap=8):
    """η² kills Ext*(M_η ⊗ m, A/r) to cap."""
    if eta.degree < 1:
        raise ValueError("need a class of positive degree")
    if eta.is_zero():
        return True
    sq = yoneda_product(eta, eta)
    if sq.degree > cap or sq.is_zero():
        return True
    mod = tensor_chain([eta], m).module
    maps = ExtAction(sq, mod, top_semisimple(m.algebra), cap).maps
    return all(not np.any(x) for x in maps.values())


def summand_of(m, big, seed=0):
    """Is m isomorphic to a direct summand of big?  Matches indecomposable summands."""
    if m.dim == 0:
        return True
    small = decompose(m, seed=seed).summands
    pool = list(decompose(big, seed=seed).summands)
    for s in small:
        hit = None
        for k, t in enumerate(pool):
            if iso_test(s, t, seed=seed)[0] == Verdict.YES:
                hit = k
                break
        if hit is None:
            return False
        pool.pop(hit)
    return True


def split_equivalence_check(etas, m, cap=8, seed=0):
    """Three equivalent conditions for m to be a summand of the chain tensor."""
    etas = list(etas)
    ann = all(not np.any(ext_class_of(e, m, cap)) for e in etas)
    each = all(is_split(tensor_sequence(pushout_data(e).seq, m))[0] for e in etas)
    chain = tensor_chain(etas, m)
    whole = is_split(chain.seq)[0]
    agree = ann == each == whole
    report = {"in_annihilator": ann, "each_splits": each, "chain_splits": whole,
              "agree": agree, "falsification": not agree, "summand": None, "seed": seed}
    if agree and ann:
        report["summand"] = summand_of(m, chain.module, seed)
        if not report["summand"]:
            report["falsification"] = True
    return report


@dataclass
class Realization:
    module: object
    report: VarietyReport
    etas: list
    inclusion: bool
    expected: tuple

    def __iter__(self):
        return iter((self.module, self.report))

    @property
    def matches(self):
        return (self.report.krull_dim_lower, self.report.krull_dim_upper) == tuple(self.expected)


def _as_pair(h, eta):
    if isinstance(eta, CohomClass):
        return eta, h.poly_of(eta)
    return h.evaluate_poly(eta), eta


def realize_variety(h, etas, cap=None):
    """M_{η1} ⊗ ... ⊗ M_{ηt} ⊗ A/r with its variety report."""
    cap = h.cap if cap is None else cap
    pairs = [_as_pair(h, e) for e in etas]
    if any(c.degree < 1 for c, _ in pairs):
        raise ValueError("realization needs classes of positive degree")
    s = top_semisimple(h.algebra)
    mod = tensor_chain([c for c, _ in pairs], s).module
    rep = variety_report(h, mod, cap, name="chain")
    inclusion = all(rep.annihilator.contains(p) for _, p in pairs if h.ring.degree(p) <= cap)
    rel = h_relations(h, cap)
    target = IdealTruncation(h.ring, list(rel.generators) + [p for _, p in pairs], cap)
    return Realization(mod, rep, [c for c, _ in pairs], inclusion, hilbert_krull(target))


def line_module(h, index, cap=None):
    """L_x for the generator x of the given index."""
    return realize_variety(h, [h.generators[index]], cap).module


@dataclass
class Witness:
    w: object
    ext1_dim: int
    route: str
    complexity: object
    etas: list = dc_field(default_factory=list)

    def __iter__(self):
        return iter((self.w, self.ext1_dim))

    def to_dict(self):
        return {"route": self.route, "dim_W": self.w.dim, "ext1_dim": self.ext1_dim,
                "complexity": self.complexity.label(), "eta_degrees": [e.degree for e in self.etas]}


def periodic_witness(h, m, cap=None, seed=0):
    """W of complexity at most one with Ext^1(W, m) nonzero."""
    cap = h.cap if cap is None else cap
    a = m.algebra
    if not is_selfinjective(a):
        raise ValueError("periodic witnesses need a selfinjective algebra")
    if is_projective(m):
        raise ValueError("module is projective")
    per = periodicity(m, cap, seed).period
    if per is not None:
        w = m if per == 1 else min_proj_resolution(m, per).syzygy(per - 1)[0]
        return Witness(w, ext_dims(w, m, 1)[1], "periodic", complexity(w, cap))
    base = annihilator(h, m, cap, n=m)
    chosen = []
    upper = hilbert_krull(base)[1]
    order = sorted(range(len(h.generators)), key=lambda i: (h.degrees[i], i))
    for i in order:
        if upper <= 1:
            break
        if h.degrees[i] < 1:
            continue
        trial = IdealTruncation(h.ring, list(base.generators) + chosen + [h.ring.var(i)], cap)
        u = hilbert_krull(trial)[1]
        if u < upper:
            chosen.append(h.ring.var(i))
            upper = u
    if upper != 1:
        raise WitnessError("no suitable classes found within the cap")
    etas = []
    for g in base.completed():
        if h.ring.degree(g) >= 1:
            c = h.evaluate_poly(g)
            if not c.is_zero():
                etas.append(c)
    etas += [h.evaluate_poly(p) for p in chosen]
    if etas:
        chain = reduce(tensor_bimodules, [pushout_data(e).bimodule for e in etas])
        w = tensor_over_algebra(dual_star(chain), top_semisimple(a))
    else:
        # nothing to cut: the empty chain is Λ itself, and Λ* ⊗ A/r = A/r
        w = top_semisimple(a)
    wit = Witness(w, ext_dims(w, m, 1)[1], "recipe", complexity(w, cap), etas)
    cv = wit.complexity
    if not (cv.finite and cv.value <= 1 and wit.ext1_dim >= 1):
        # happens when E(A) is not finitely generated over H
        raise WitnessError(f"recipe produced W with complexity {cv.label()} and "
                           f"dim Ext^1(W, M) = {wit.ext1_dim}")
    return wit


def _degree_match(d1, d2, cap):
    import math
    l = d1 * d2 // math.gcd(d1, d2)
    if l > cap:
        raise ValueError("generator degrees do not meet below the cap")
    return l // d1, l // d2


def pencil_family(h, x1, x2, rest=(), alphas=((1, 0), (0, 1), (1, 1)), cap=None):
    """Modules C_α for η_α = α1 x1^r + α2 x2^s, with their annihilators."""
    cap = h.cap if cap is None else cap
    f = h.field
    ring = h.ring
    r, s = _degree_match(h.degrees[x1], h.degrees[x2], cap)
    rest_pairs = [_as_pair(h, e) for e in rest]
    rel = h_relations(h, cap)
    members = []
    for alpha in alphas:
        p = {}
        ring.add_scaled(p, ring.pow(ring.var(x1), r), f(alpha[0]))
        ring.add_scaled(p, ring.pow(ring.var(x2), s), f(alpha[1]))
        eta = h.evaluate_poly(p)
        mod = tensor_chain([eta] + [c for c, _ in rest_pairs], top_semisimple(h.algebra)).module
        ann = annihilator(h, mod, cap)
        ideal = IdealTruncation(ring, list(rel.generators) + [p] + [q for _, q in rest_pairs], cap)
        members.append({"alpha": [f.to_json(f(x)) for x in alpha], "eta": ring.fmt(p),
                        "dim": mod.dim, "annihilator": ann.fmt(), "ideal": ideal.fmt(),
                        "complexity": complexity(mod, cap).label(),
                        "_ann_key": ann.canonical(), "_ideal_key": ideal.canonical()})
    distinct_ann = len({m["_ann_key"] for m in members}) == len(members)
    distinct_ideal = len({m["_ideal_key"] for m in members}) == len(members)
    for m in members:
        del m["_ann_key"], m["_ideal_key"]
    return {"r": r, "s": s, "members": members,
            "distinct_annihilators": distinct_ann, "distinct_ideals": distinct_ideal,
            "all_complexity_one": all(m["complexity"] == "finite 1" for m in members)}


def fg_diagnostic(h, cap=None):
    """Three to-cap signals bearing on finite generation of E(A) over H."""
    cap = h.cap if cap is None else cap
    a = h.algebra
    f = h.field
    s = top_semisimple(a)
    act = HAction(h, s, s, cap)
    dims = act.dims
    # (1) generation degree
    gen_degree = None
    for g in range(cap + 1):
        ok = True
        for d in range(g + 1, cap + 1):
            ech = el.Echelon(dims[d], f)
            for j in range(g + 1):
                for e in h.ring.monomials(d - j):
                    mat = act.matrix(e, j)
                    for c in range(mat.shape[1]):
                        ech.add(mat[:, c])
            if len(ech) < dims[d]:
                ok = False
                break
        if ok:
            gen_degree = g
            break
    generation = "PASS" if gen_degree is not None and gen_degree < cap else "FAIL"
    # (2) growth of the simples
    verdicts = [complexity(simple(a, v), cap) for v in range(a.num_vertices)]
    if any(v.kind == "exponential" for v in verdicts):
        growth = "FAIL"
    elif all(v.finite for v in verdicts):
        growth = "PASS"
    else:
        growth = "INCONCLUSIVE"
    # (3) centre obstruction: positive HH classes all restrict to zero while E grows
    top = min(cap, h.cap)
    restricted_zero = all(restrict_to_ext(b, top).is_zero()
                          for d in range(1, top + 1) for b in h.complex.basis(d))
    grows = all(x > 0 for x in dims[1:]) and dims[-1] > 0
    obstruction = restricted_zero and grows
    centre = "FAIL" if obstruction else "PASS"
    signals = [generation, growth, centre]
    verdict = "FAIL" if "FAIL" in signals else ("PASS-to-cap" if all(x == "PASS" for x in signals)
                                                 else "INCONCLUSIVE")
    return {"cap": cap, "verdict": verdict,
            "generation": {"status": generation, "degree": gen_degree, "ext_dims": dims},
            "growth": {"status": growth, "simples": [v.label() for v in verdicts],
                       "betti": [v.betti for v in verdicts],
                       "max_complexity": max((v.value for v in verdicts if v.finite), default=None)},
            "centre": {"status": centre, "positive_restrictions_zero": restricted_zero,
                       "ext_grows": grows}}


def ext_vanishing_check(h, m, n, cap=None):
    """Comaximal annihilators should force Ext^{>=1}(m, n) = 0 to cap."""
    cap = h.cap if cap is None else cap
    if not is_selfinjective(m.algebra):
        raise ValueError("Ext vanishing needs a selfinjective algebra")
    if is_projective(m) or is_projective(n):
        return {"precondition": True, "held": True, "vacuous": True, "ext_dims": []}
    total = annihilator(h, m, cap) + annihilator(h, n, cap)
    degree = next((d for d in range(1, cap + 1) if all_monomials_in(total, d)), None)
    if degree is None:
        return {"precondition": False, "held": None, "vacuous": False, "ext_dims": []}
    dims = ext_dims(m, n, cap)[1:]
    return {"precondition": True, "held": not any(dims), "vacuous": False,
            "comaximal_degree": degree, "ext_dims": dims}
