"""Complexity and Ω-periodicity of modules."""

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import numpy as np
import sympy

from . import exactlinalg as el
from .repmod import (Verdict, decompose, direct_sum, is_projective, iso_test,
                     min_proj_resolution, zero_module)

DELTA = Fraction(1, 8)


# -- linear recurrences ------------------------------------------------------------


def berlekamp_massey(seq):
    """Shortest recurrence over Q; returns (L, c) with c = [1, c1, .., cL].

    The recurrence is s_n + c1 s_{n-1} + ... + cL s_{n-L} = 0 for n >= L.
    """
    s = [Fraction(x) for x in seq]
    c = [Fraction(1)]
    b = [Fraction(1)]
    L, m, bb = 0, 1, Fraction(1)
    for n in range(len(s)):
        d = s[n] + sum(c[i] * s[n - i] for i in range(1, L + 1))
        if d == 0:
            m += 1
            continue
        coef = d / bb
        t = list(c)
        need = len(b) + m
        if len(c) < need:
            c = c + [Fraction(0)] * (need - len(c))
        for i, bi in enumerate(b):
            c[i + m] -= coef * bi
        if 2 * L <= n:
            L, b, bb, m = n + 1 - L, t, d, 1
        else:
            m += 1
    c = (c + [Fraction(0)] * (L + 1))[:L + 1]
    return L, c


def replay(c, seq):
    """Regenerate seq from its first L terms using recurrence c."""
    L = len(c) - 1
    out = [Fraction(x) for x in seq[:L]]
    for n in range(L, len(seq)):
        out.append(-sum(c[i] * out[n - i] for i in range(1, L + 1)))
    return out


def pole_analysis(c, seq):
    """Reduced denominator of the generating function, split into factors.

    Returns (cyclotomic factors with multiplicity, other factors).
    """
    x = sympy.Symbol("x")
    L = len(c) - 1
    den = sum(sympy.Rational(ci.numerator, ci.denominator) * x**i for i, ci in enumerate(c))
    # numerator = (C * S) mod x^L
    num = 0
    for k in range(L):
        v = sum(c[i] * Fraction(seq[k - i]) for i in range(0, k + 1) if i <= L)
        num += sympy.Rational(v.numerator, v.denominator) * x**k
    g = sympy.gcd(sympy.Poly(num, x), sympy.Poly(den, x)) if num != 0 else sympy.Poly(den, x)
    red = sympy.Poly(den, x).quo(g) if num != 0 else sympy.Poly(1, x)
    cyclo, other = [], []
    if red.degree() <= 0:
        return cyclo, other
    _, factors = sympy.factor_list(red.as_expr(), x)
    for fac, mult in factors:
        p = sympy.Poly(fac, x)
        if p.degree() == 0:
            continue
        monic = sympy.Poly(p.as_expr() / p.LC(), x)
        rev = sympy.Poly(list(reversed(p.all_coeffs())), x)
        cyc = rev.is_cyclotomic or monic.is_cyclotomic
        (cyclo if cyc else other).append((str(p.as_expr()), int(mult)))
    return cyclo, other


@dataclass
class ComplexityVerdict:
    betti: list
    kind: str              # "finite", "exponential", "inconclusive"
    value: int = None
    cap: int = 0
    evidence: dict = dc_field(default_factory=dict)

    @property
    def finite(self):
        return self.kind == "finite"

    def label(self):
        return f"finite {self.value}" if self.finite else self.kind

    def to_dict(self):
        return {"betti": list(self.betti), "classification": self.kind, "value": self.value,
                "cap": self.cap, "evidence": self.evidence}


def classify_betti(betti, cap=None):
    cap = len(betti) - 1 if cap is None else cap
    L, c = berlekamp_massey(betti)
    ev = {"recurrence_length": L,
          "recurrence": [el.QQ.to_json(x) for x in c]}
    enough = len(betti) >= 2 * L + 1
    replays = replay(c, betti) == [Fraction(b) for b in betti]
    ev["replays"] = replays
    ev["sufficient_data"] = enough
    if enough and replays:
        cyclo, other = pole_analysis(c, betti)
        ev["unit_circle_factors"] = cyclo
        ev["other_factors"] = other
        if not other:
            value = max((m for _, m in cyclo), default=0)
            return ComplexityVerdict(list(betti), "finite", value, cap, ev)
    # exponential tail test
    window = math.ceil(cap / 2)
    tail = betti[-(window + 1):]
    ratios_ok = len(tail) >= 2 and all(a > 0 and Fraction(b, a) >= 1 + DELTA for a, b in zip(tail, tail[1:]))
    ev["tail_window"] = window
    ev["tail_ratios"] = [el.QQ.to_json(Fraction(b, a)) if a else None for a, b in zip(tail, tail[1:])]
    if ratios_ok:
        return ComplexityVerdict(list(betti), "exponential", None, cap, ev)
    return ComplexityVerdict(list(betti), "inconclusive", None, cap, ev)


def complexity(m, cap=8):
    res = min_proj_resolution(m, cap)
    return classify_betti(res.betti[:cap + 1], cap)


# -- periodicity ---------------------------------------------------------------------


def strip_projectives(m, seed=0):
    """m with its projective summands removed (up to isomorphism)."""
    if m.dim == 0 or is_projective(m):
        return zero_module(m.algebra)
    dec = decompose(m, seed=seed)
    keep = [s for s in dec.summands if not is_projective(s)]
    if len(keep) == len(dec.summands):
        return m
    if not keep:
        return zero_module(m.algebra)
    return keep[0] if len(keep) == 1 else direct_sum(*keep)


@dataclass
class Periodicity:
    period: int = None
    witness: object = None
    reduced: object = None

    def __iter__(self):
        return iter((self.period, self.witness))


def periodicity(m, cap=8, seed=0):
    """Smallest n <= cap with Ω^n(m') ≅ m', m' the non-projective part of m."""
    core = strip_projectives(m, seed)
    if core.dim == 0:
        return Periodicity(None, None, core)
    res = min_proj_resolution(core, cap)
    for n in range(1, cap + 1):
        omega = res.syzygy(n)[0]
        if omega.dim != core.dim:
            continue
        verdict, wit = iso_test(omega, core, seed=seed)
        if verdict == Verdict.YES:
            return Periodicity(n, wit, core)
    return Periodicity(None, None, core)


def period_divisor_check(m, h, cap=8, seed=0):
    """Does the Ω-period of m divide one of the generator degrees of h?"""
    per = periodicity(m, cap, seed).period
    if per is None:
        raise ValueError("module is not periodic within the cap")
    degrees = [g.degree for g in h.generators]
    return {"period": per, "degrees": degrees, "holds": any(d % per == 0 for d in degrees if d > 0)}


def line_implies_periodic_check(m, cap=8, seed=0):
    """If m has complexity one, every non-projective summand should be periodic."""
    cv = complexity(m, cap)
    report = {"complexity": cv.label(), "summands": [], "falsification": False, "applies": False}
    if not (cv.finite and cv.value == 1):
        return report
    report["applies"] = True
    for s in decompose(m, seed=seed).summands:
        if is_projective(s):
            report["summands"].append({"dim": s.dim, "projective": True, "period": None})
            continue
        per = periodicity(s, cap, seed).period
        report["summands"].append({"dim": s.dim, "projective": False, "period": per})
        if per is None:
            report["falsification"] = True
    return report


# -- Ext structure of periodic modules -----------------------------------------------


def periodic_ext_structure(m, cap=8, seed=0):
    """Ext*(m, m) of a periodic module: a unit x in the period degree plus nilpotents."""
    from .cohom import CohomClass, ChainLift, compose_with_lift, ext_groups, yoneda_product

    if is_projective(m):
        raise ValueError("projective modules have no periodic Ext structure")
    per = periodicity(m, cap, seed).period
    if per is None:
        raise ValueError("module is not periodic within the cap")
    f = m.field
    cx = ext_groups(m, m, cap)
    dims = cx.dims(cap)
    res = cx.resolution

    def right_mult(x, i):
        # matrix of g -> g · x from Ext^i to Ext^{i+per}
        lift = ChainLift(res, res, per, cx.images(per, x))
        lift.ensure(i)
        src = cx.cohomology(i)
        out = f.zeros((dims[i + per], src.dim))
        for c in range(src.dim):
            out[:, c] = cx.class_coords(i + per, compose_with_lift(cx, i, src.reps[:, c], lift))
        return out

    def bijective(x):
        for i in range(cap - per + 1):
            if dims[i] != dims[i + per]:
                return False
            mat = right_mult(x, i)
            if el.rank(mat, f) != dims[i]:
                return False
        return True

    basis = cx.basis(per)
    cands = [b.vector for b in basis]
    rng = np.random.default_rng(seed)
    reps = cx.cohomology(per).reps
    for _ in range(8):
        c = f.random(rng, reps.shape[1])
        cands.append(f.matmul(reps, c.reshape(-1, 1))[:, 0])
    x = None
    for v in cands:
        if bijective(v):
            x = v
            break
    report = {"period": per, "dims": dims, "cap": cap}
    if x is None:
        report["unit_found"] = False
        return report
    xcls = CohomClass(cx, per, x)
    report["unit_found"] = True
    report["unit_coords"] = [f.to_json(v) for v in xcls.coords()]
    # powers of x span the polynomial part
    powers = {0: cx.unit()}
    cur = cx.unit()
    for j in range(1, cap // per + 1):
        cur = yoneda_product(cur, xcls)
        powers[j * per] = cur
    poly_dims, nil_dims, nilpotent = [], [], True
    for d in range(cap + 1):
        span = f.zeros((dims[d], 0))
        if d % per == 0 and not powers[d].is_zero():
            span = powers[d].coords().reshape(-1, 1)
        poly_dims.append(span.shape[1])
        # complement: standard basis vectors outside the span
        ech = el.Echelon(dims[d], f)
        for j in range(span.shape[1]):
            ech.add(span[:, j])
        comp = []
        for j in range(dims[d]):
            e = f.zeros(dims[d])
            e[j] = f.one
            if ech.add(e):
                comp.append(e)
        nil_dims.append(len(comp))
        for coords in comp:
            z = cx.from_coords(d, coords)
            if not _nilpotent_to_cap(z, cap, cx):
                nilpotent = False
    report.update({"polynomial_dims": poly_dims, "nilpotent_dims": nil_dims,
                   "complement_nilpotent": nilpotent,
                   "dims_match": all(p + q == d for p, q, d in zip(poly_dims, nil_dims, dims))})
    return report


def _nilpotent_to_cap(z, cap, cx):
    """Some power of z vanishes, or every in-cap power of z is checked zero."""
    from .cohom import yoneda_product

    if z.is_zero():
        return True
    d = z.degree
    if d == 0:
        f = cx.field
        mat = _end_matrix(z, cx)
        return not np.any(el.matrix_power(mat, max(1, mat.shape[0]), f))
    cur, k = z, 1
    while (k + 1) * d <= cap:
        cur = yoneda_product(cur, z)
        k += 1
        if cur.is_zero():
            return True
    # no in-cap power left to test
    return k == 1


def _end_matrix(z, cx):
    """Degree-0 Ext class as an endomorphism of the module."""
    from .cohom import cochain_full_map

    res = cx.resolution
    f = cx.field
    full = cochain_full_map(cx, 0, z.vector)            # m x P_0
    sec = el.LinearSolver(res.diff(0), f).solve(f.eye(cx.coeff.dim))
    return f.matmul(full, sec)
