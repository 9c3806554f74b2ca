"""Weighted graded polynomial ideals, truncated at a degree cap.

Polynomials are dicts {exponent tuple: coefficient}.  Variables carry
positive integer weights; the monomial order is weighted degree followed by
reverse lexicographic tie-breaking (degrevlex).
"""

import itertools
from dataclasses import dataclass, field as dc_field


def wdeg(exp, weights):
    return sum(e * w for e, w in zip(exp, weights))


def _revlex_key(exp, weights):
    # larger key = larger monomial
    return (wdeg(exp, weights), tuple(-e for e in reversed(exp)))


def monomials_of_degree(weights, d, bounds=None):
    """All exponent vectors of weighted degree d, in decreasing order.

    Weight-zero variables need an exponent bound in ``bounds``.
    """
    t = len(weights)
    out = []

    def rec(i, rem, cur):
        if i == t:
            if rem == 0:
                out.append(tuple(cur))
            return
        w = weights[i]
        top = rem // w if w else bounds[i]
        for e in range(top, -1, -1):
            cur.append(e)
            rec(i + 1, rem - e * w, cur)
            cur.pop()

    if t == 0:
        return [()] if d == 0 else []
    rec(0, d, [])
    out.sort(key=lambda e: _revlex_key(e, weights), reverse=True)
    return out


def divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


class PolyRing:
    def __init__(self, field, weights, names=None, bounds=None):
        self.field = field
        self.weights = tuple(int(w) for w in weights)
        self.nvars = len(self.weights)
        self.names = list(names) if names else [f"x{i + 1}" for i in range(self.nvars)]
        # exponent bounds, only consulted for weight-zero variables
        self.bounds = tuple(bounds) if bounds else tuple([0] * self.nvars)
        if any(w < 0 for w in self.weights):
            raise ValueError("weights must be non-negative")

    def monomials(self, d):
        return monomials_of_degree(self.weights, d, self.bounds)

    def key(self, exp):
        return _revlex_key(exp, self.weights)

    def lead(self, p):
        return max(p, key=self.key)

    def clean(self, p):
        return {e: c for e, c in p.items() if c != 0}

    def monic(self, p):
        f = self.field
        lt = self.lead(p)
        inv = f.inv(p[lt])
        return {e: f(c * inv) for e, c in p.items()}

    def add_scaled(self, acc, p, c, shift=None):
        f = self.field
        for e, v in p.items():
            ee = _add(e, shift) if shift is not None else e
            x = f(acc.get(ee, f.zero) + c * v)
            if x == 0:
                acc.pop(ee, None)
            else:
                acc[ee] = x
        return acc

    def degree(self, p):
        return max(wdeg(e, self.weights) for e in p) if p else -1

    def is_homogeneous(self, p):
        return len({wdeg(e, self.weights) for e in p}) <= 1

    def var(self, i):
        e = [0] * self.nvars
        e[i] = 1
        return {tuple(e): self.field.one}

    def mul(self, p, q):
        f = self.field
        out = {}
        for e1, c1 in p.items():
            for e2, c2 in q.items():
                e = _add(e1, e2)
                v = f(out.get(e, f.zero) + c1 * c2)
                if v == 0:
                    out.pop(e, None)
                else:
                    out[e] = v
        return out

    def pow(self, p, k):
        out = {tuple([0] * self.nvars): self.field.one}
        for _ in range(k):
            out = self.mul(out, p)
        return out

    def reduce(self, p, basis):
        """Full reduction of p modulo a list of monic polynomials."""
        f = self.field
        p = dict(p)
        out = {}
        leads = [(self.lead(g), g) for g in basis]
        while p:
            lt = self.lead(p)
            c = p[lt]
            hit = None
            for l, g in leads:
                if divides(l, lt):
                    hit = (l, g)
                    break
            if hit is None:
                out[lt] = c
                del p[lt]
                continue
            l, g = hit
            self.add_scaled(p, g, f(-c), _sub(lt, l))
        return out

    def fmt_monomial(self, e):
        parts = []
        for n, k in zip(self.names, e):
            if k == 1:
                parts.append(n)
            elif k > 1:
                parts.append(f"{n}^{k}")
        return "*".join(parts) if parts else "1"

    def fmt(self, p):
        if not p:
            return "0"
        terms = []
        for e in sorted(p, key=self.key, reverse=True):
            c = p[e]
            m = self.fmt_monomial(e)
            cs = str(self.field.to_json(c))
            terms.append(m if cs == "1" else (cs if m == "1" else f"{cs}*{m}"))
        return " + ".join(terms)


@dataclass
class IdealTruncation:
    ring: PolyRing
    generators: list
    cap: int
    groebner: list = dc_field(default=None)

    def completed(self):
        if self.groebner is None:
            self.groebner = buchberger_basis(self.ring, self.generators, self.cap)
        return self.groebner

    def contains(self, p):
        return not self.ring.reduce(p, self.completed())

    def leads(self):
        return [self.ring.lead(g) for g in self.completed()]

    def canonical(self):
        """Hashable canonical form: the reduced truncated Gröbner basis."""
        r = self.ring
        return tuple(tuple(sorted(((e, r.field.to_json(c)) for e, c in g.items()), reverse=True))
                     for g in self.completed())

    def __add__(self, other):
        return IdealTruncation(self.ring, list(self.generators) + list(other.generators),
                               min(self.cap, other.cap))

    def hilbert(self):
        return hilbert_function(self.ring, self.completed(), self.cap)

    def fmt(self):
        return [self.ring.fmt(g) for g in self.completed()]


def buchberger_basis(ring, gens, cap):
    """Reduced Gröbner basis, with S-pairs restricted to weighted degree <= cap."""
    w = ring.weights
    basis = []
    for g in gens:
        g = ring.clean(g)
        if not g:
            continue
        if not ring.is_homogeneous(g):
            raise ValueError("ideal generators must be homogeneous")
        if ring.degree(g) > cap:
            continue
        r = ring.reduce(g, basis)
        if r:
            basis.append(ring.monic(r))
    pairs = [(i, j) for i in range(len(basis)) for j in range(i)]
    while pairs:
        # process lowest-degree pairs first for determinism
        pairs.sort(key=lambda ij: (wdeg(_lcm(ring.lead(basis[ij[0]]), ring.lead(basis[ij[1]])), w), ij))
        i, j = pairs.pop(0)
        li, lj = ring.lead(basis[i]), ring.lead(basis[j])
        l = _lcm(li, lj)
        if wdeg(l, w) > cap:
            continue
        if _add(li, lj) == l:
            continue   # coprime leads reduce to zero
        s = {}
        ring.add_scaled(s, basis[i], ring.field.one, _sub(l, li))
        ring.add_scaled(s, basis[j], ring.field(-1), _sub(l, lj))
        r = ring.reduce(s, basis)
        if r:
            basis.append(ring.monic(r))
            k = len(basis) - 1
            pairs.extend((k, m) for m in range(k))
    return interreduce(ring, basis)


def interreduce(ring, basis):
    basis = [g for g in basis if g]
    # drop elements whose lead is divisible by another lead
    keep = []
    leads = [ring.lead(g) for g in basis]
    for i, g in enumerate(basis):
        li = leads[i]
        if any(j != i and divides(leads[j], li) and (leads[j] != li or j < i) for j in range(len(basis))):
            continue
        keep.append(g)
    out = []
    for i, g in enumerate(keep):
        others = keep[:i] + keep[i + 1:]
        lt = ring.lead(g)
        tail = {e: c for e, c in g.items() if e != lt}
        r = ring.reduce(tail, others)
        r[lt] = g[lt]
        out.append(ring.monic(r))
    out.sort(key=lambda g: ring.key(ring.lead(g)))
    return out


def standard_monomials(ring, basis, d):
    leads = [ring.lead(g) for g in basis]
    return [e for e in ring.monomials(d) if not any(divides(l, e) for l in leads)]


def hilbert_function(ring, basis, cap):
    return [len(standard_monomials(ring, basis, d)) for d in range(cap + 1)]


def independent_dimension(ring, basis):
    """Largest set of variables with no leading monomial supported inside it."""
    leads = [ring.lead(g) for g in basis]
    t = ring.nvars
    for size in range(t, -1, -1):
        for subset in itertools.combinations(range(t), size):
            s = set(subset)
            if not any(all(i in s for i, e in enumerate(l) if e) for l in leads):
                return size
    return 0


def growth_dimension(hilb, weights, upper):
    """Polynomial growth order of a Hilbert function, read off its tail.

    Sums over a window of length lcm(weights) smooth out quasi-polynomial
    behaviour; the order is the number of finite differences needed to
    reach zero on the tail.
    """
    import math

    weights = [w for w in weights if w > 0]
    if not weights:
        return 0
    period = 1
    for w in weights:
        period = period * w // math.gcd(period, w)
    sums = [sum(hilb[d - period + 1:d + 1]) for d in range(period - 1, len(hilb))]
    if not sums or sums[-1] == 0:
        return 0
    tail = sums[len(sums) // 2:]
    k = 0
    cur = tail
    while len(cur) >= 2 and any(cur):
        if all(x == cur[0] for x in cur):
            return min(k + 1, upper)
        cur = [b - a for a, b in zip(cur, cur[1:])]
        k += 1
    if len(cur) >= 1 and not any(cur):
        return min(k, upper)
    return min(1, upper)


def hilbert_krull(ideal):
    """(lower, upper) bounds on the Krull dimension of the graded quotient."""
    ring = ideal.ring
    gb = ideal.completed()
    upper = independent_dimension(ring, gb)
    hilb = hilbert_function(ring, gb, ideal.cap)
    lower = growth_dimension(hilb, ring.weights, upper)
    return lower, upper


def all_monomials_in(ideal, d):
    return not standard_monomials(ideal.ring, ideal.completed(), d)
