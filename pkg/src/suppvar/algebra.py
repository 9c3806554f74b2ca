"""Finite-dimensional quiver algebras with relations.

Paths are tuples of arrow indices in traversal order: the path ``(a, b)``
first walks ``a`` and then ``b``.  As an element of the algebra acting on
the left of a module it is the composite ``b ∘ a``.  The basis of an
algebra is the set of irreducible paths (plus one trivial path per
vertex) under a length-lex rewriting system.

Multiplication follows the left-module convention: for basis elements
``u`` and ``v``, ``u * v`` means "first v, then u", i.e. the concatenation
``word(v) + word(u)`` when the endpoints match.
"""

import itertools
import re
from dataclasses import dataclass

import numpy as np

from .exactlinalg import QQ, kernel_basis, parse_field


class AdmissibilityError(ValueError):
    pass


class InconsistentRelations(ValueError):
    pass


class NotFiniteDimensionalAtCap(RuntimeError):
    pass


@dataclass(frozen=True)
class Arrow:
    label: str
    source: int
    target: int


class Quiver:
    def __init__(self, vertices, arrows):
        self.vertices = [str(v) for v in vertices]
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("vertex labels must be unique")
        idx = {v: i for i, v in enumerate(self.vertices)}
        out = []
        for a in arrows:
            label, s, t = a
            if str(s) not in idx or str(t) not in idx:
                raise ValueError(f"arrow {label!r} references an unknown vertex")
            out.append(Arrow(str(label), idx[str(s)], idx[str(t)]))
        labels = [a.label for a in out]
        if len(set(labels)) != len(labels):
            raise ValueError("arrow labels must be unique")
        if set(labels) & set(self.vertices):
            raise ValueError("arrow and vertex labels must differ")
        self.arrows = out
        self.arrow_index = {a.label: i for i, a in enumerate(out)}

    def source(self, word):
        return self.arrows[word[0]].source

    def target(self, word):
        return self.arrows[word[-1]].target

    def is_path(self, word):
        return all(self.arrows[a].target == self.arrows[b].source for a, b in zip(word, word[1:]))

    def word_label(self, word):
        return "*".join(self.arrows[a].label for a in word)

    def parse_path(self, text):
        toks = [t for t in re.split(r"[\s*·.]+", text.strip()) if t]
        try:
            return tuple(self.arrow_index[t] for t in toks)
        except KeyError as exc:
            raise ValueError(f"unknown arrow {exc.args[0]!r} in path {text!r}") from None


_TERM = re.compile(r"([+-]?)\s*([^+-]+)")


def parse_relation(text, quiver, field):
    """Parse 'x*y + y*x' or '2 a*b - c*d' into {path: coefficient}."""
    out = {}
    s = text.strip()
    if not s:
        raise ValueError("empty relation")
    if s[0] not in "+-":
        s = "+" + s
    for sign, body in _TERM.findall(s):
        body = body.strip()
        if not body:
            continue
        toks = [t for t in re.split(r"[\s*]+", body) if t]
        coef = 1
        if toks and re.fullmatch(r"\d+(/\d+)?", toks[0]):
            coef = toks[0]
            toks = toks[1:]
        from fractions import Fraction

        c = field(Fraction(coef))
        if sign == "-":
            c = field(-Fraction(coef))
        path = quiver.parse_path(" ".join(toks))
        out[path] = field(out.get(path, field.zero) + c)
    return {w: c for w, c in out.items() if c != 0}


# --- noncommutative rewriting -------------------------------------------


def _key(word):
    return (len(word), word)


def _lead(poly):
    return max(poly, key=_key)


def _monic(poly, field):
    lead = _lead(poly)
    inv = field.inv(poly[lead])
    return {w: field(c * inv) for w, c in poly.items()}


def _addto(acc, poly, coef, field, left=(), right=()):
    for w, c in poly.items():
        ww = left + w + right
        v = field(acc.get(ww, field.zero) + coef * c)
        if v == 0:
            acc.pop(ww, None)
        else:
            acc[ww] = v


def _find_sub(word, sub):
    n, m = len(word), len(sub)
    for i in range(n - m + 1):
        if word[i:i + m] == sub:
            return i
    return -1


class Rewriter:
    """Reduction modulo a set of monic polynomials with distinct leads."""

    def __init__(self, field):
        self.field = field
        self.rules = {}

    def reduce(self, poly):
        field = self.field
        poly = dict(poly)
        out = {}
        while poly:
            w = _lead(poly)
            c = poly.pop(w)
            hit = None
            for lead, rule in self.rules.items():
                i = _find_sub(w, lead)
                if i >= 0:
                    hit = (i, lead, rule)
                    break
            if hit is None:
                out[w] = c
                continue
            i, lead, rule = hit
            left, right = w[:i], w[i + len(lead):]
            for ww, cc in rule.items():
                if ww == lead:
                    continue
                key = left + ww + right
                v = field(poly.get(key, field.zero) - c * cc)
                if v == 0:
                    poly.pop(key, None)
                else:
                    poly[key] = v
        return out

    def is_reducible(self, word):
        return any(_find_sub(word, lead) >= 0 for lead in self.rules)


def complete_relations(relations, quiver, field, length_cap):
    """Buchberger-style completion truncated at overlaps of length <= cap."""
    rw = Rewriter(field)
    pending = [dict(r) for r in relations if r]
    pairs = []

    def insert(poly):
        poly = rw.reduce(poly)
        if not poly:
            return
        poly = _monic(poly, field)
        lead = _lead(poly)
        if len(lead) == 0:
            raise InconsistentRelations("relations rewrite a vertex idempotent to zero")
        # drop rules whose leads become reducible, requeue them
        stale = [l for l in rw.rules if _find_sub(l, lead) >= 0]
        for l in stale:
            pending.append(rw.rules.pop(l))
        rw.rules[lead] = poly
        for other in list(rw.rules):
            pairs.append((lead, other))
            if other != lead:
                pairs.append((other, lead))
        # keep tails reduced
        for l in list(rw.rules):
            if l == lead:
                continue
            tail = {w: c for w, c in rw.rules[l].items() if w != l}
            if any(rw.is_reducible(w) for w in tail):
                rw.rules[l] = {l: field.one, **rw.reduce(tail)}

    while pending or pairs:
        while pending:
            insert(pending.pop(0))
        if not pairs:
            break
        l1, l2 = pairs.pop(0)
        if l1 not in rw.rules or l2 not in rw.rules:
            continue
        g1, g2 = rw.rules[l1], rw.rules[l2]
        for k in range(1, min(len(l1), len(l2))):
            if l1[-k:] != l2[:k]:
                continue
            if len(l1) + len(l2) - k > length_cap:
                continue
            s = {}
            _addto(s, g1, field.one, field, right=l2[k:])
            _addto(s, g2, field(-1), field, left=l1[:-k])
            r = rw.reduce(s)
            if r:
                pending.append(r)
    return rw


class FDAlgebra:
    """A finite-dimensional algebra given by a basis and structure constants.

    ``structure[i, j, k]`` is the coefficient of basis element k in the
    product ``b_i * b_j``.  Each basis element carries a word (arrow
    indices in traversal order), a source and a target vertex, and a
    length.  Vertex idempotents are the words of length 0.
    """

    def __init__(self, field, vertices, arrows, words, sources, targets, structure, name=None):
        self.field = field
        self.vertices = list(vertices)
        self.arrows = list(arrows)
        self.words = [tuple(w) for w in words]
        self.source = np.array(sources, dtype=int)
        self.target = np.array(targets, dtype=int)
        self.length = np.array([len(w) for w in self.words], dtype=int)
        self.structure = structure
        self.dim = len(self.words)
        self.name = name or "algebra"
        self.vertex_basis = [next(i for i, w in enumerate(self.words) if not w and self.source[i] == v)
                             for v in range(len(self.vertices))]
        self.arrow_basis = [self.words.index((a,)) for a in range(len(self.arrows))]
        self.radical_indices = [i for i in range(self.dim) if self.length[i] > 0]
        self._opposite = None
        self._enveloping = None
        self._lmul = None

    @property
    def num_vertices(self):
        return len(self.vertices)

    def label(self, i):
        w = self.words[i]
        if not w:
            return f"e{self.vertices[self.source[i]]}"
        return "*".join(self.arrows[a].label for a in w)

    @property
    def labels(self):
        return [self.label(i) for i in range(self.dim)]

    def left_mult(self, i):
        """Matrix of x -> b_i * x on the basis."""
        return self.left_mult_all()[i]

    def left_mult_all(self):
        if self._lmul is None:
            self._lmul = np.ascontiguousarray(np.transpose(self.structure, (0, 2, 1)))
        return self._lmul

    def right_mult(self, i):
        """Matrix of x -> x * b_i on the basis."""
        return np.ascontiguousarray(self.structure[:, i, :].T)

    def multiply(self, u, v):
        """Product of two coefficient vectors."""
        f = self.field
        t = f.tensordot(u, self.structure, axes=([0], [0]))
        return f.tensordot(v, t, axes=([0], [0]))

    def unit(self):
        out = self.field.zeros(self.dim)
        for i in self.vertex_basis:
            out[i] = self.field.one
        return out

    def check_associative(self):
        f = self.field
        c = self.structure
        # (b_i b_j) b_k and b_i (b_j b_k)
        lhs = f.tensordot(c, c, axes=([2], [0]))          # i j k n
        rhs = f.tensordot(c, c, axes=([1], [2]))          # i n' j k -> i, n, j, k
        rhs = np.transpose(rhs, (0, 2, 3, 1))
        return bool(np.all(lhs == rhs))

    def check_idempotents(self):
        f = self.field
        e = self.vertex_basis
        for a in e:
            for b in e:
                prod = self.structure[a, b]
                want = f.zeros(self.dim)
                if a == b:
                    want[a] = f.one
                if not np.all(prod == want):
                    return False
        u = self.unit()
        for i in range(self.dim):
            x = f.zeros(self.dim)
            x[i] = f.one
            if not (np.all(self.multiply(u, x) == x) and np.all(self.multiply(x, u) == x)):
                return False
        return True

    def radical_nilpotency(self):
        """Smallest k with rad^k = 0."""
        return int(self.length.max()) + 1 if self.dim else 0

    def opposite(self):
        if self._opposite is None:
            op = _build_opposite(self)
            op._opposite = self
            self._opposite = op
        return self._opposite

    def enveloping(self):
        if self._enveloping is None:
            self._enveloping = EnvelopingAlgebra(self)
        return self._enveloping

    def centre(self):
        """Basis (columns) of the centre Z(A)."""
        f = self.field
        gens = self.vertex_basis + self.arrow_basis
        blocks = [f.sub(self.right_mult(g), self.left_mult(g)) for g in gens]
        if not blocks:
            return f.eye(self.dim)
        return kernel_basis(np.concatenate(blocks, axis=0), f)

    def __repr__(self):
        return f"<{self.name} over {self.field.tag}, dim {self.dim}>"


def _op_label(label):
    return label[:-3] if label.endswith("^op") else label + "^op"


def _build_opposite(a):
    arrows = [Arrow(_op_label(x.label), x.target, x.source) for x in a.arrows]
    words = [tuple(reversed(w)) for w in a.words]
    structure = np.ascontiguousarray(np.transpose(a.structure, (1, 0, 2)))
    name = a.name[:-3] if a.name.endswith("^op") else a.name + "^op"
    return FDAlgebra(a.field, a.vertices, arrows, words, a.target, a.source, structure, name=name)


class EnvelopingAlgebra(FDAlgebra):
    """A ⊗ A^op.  Basis element (p, q) acts on a bimodule by x -> p x q.

    Index of (p, q) is ``p * dim + q``; vertex (u, w) has index
    ``u * n + w``.  Arrows are (alpha ⊗ e_w) for every arrow alpha and
    vertex w, followed by (e_u ⊗ beta^op).
    """

    def __init__(self, base):
        self.base = base
        f = base.field
        d = base.dim
        n = base.num_vertices
        vertices = [f"{base.vertices[u]}|{base.vertices[w]}" for u in range(n) for w in range(n)]
        arrows = []
        for i, x in enumerate(base.arrows):
            for w in range(n):
                arrows.append(Arrow(f"{x.label}|{base.vertices[w]}", x.source * n + w, x.target * n + w))
        na = len(base.arrows)
        for u in range(n):
            for i, x in enumerate(base.arrows):
                arrows.append(Arrow(f"{base.vertices[u]}|{x.label}^op", u * n + x.target, u * n + x.source))
        words, sources, targets = [], [], []
        for p in range(d):
            for q in range(d):
                u_s, u_t = base.source[p], base.target[p]
                w_s, w_t = base.target[q], base.source[q]  # op direction for q
                # q's op-arrows first (right factor), then p's arrows
                wq = [na * n + u_s * na + x for x in reversed(base.words[q])]
                wp = [x * n + w_t for x in base.words[p]]
                words.append(tuple(wq + wp))
                sources.append(u_s * n + w_s)
                targets.append(u_t * n + w_t)
        # (p q)(p' q') = p p' ⊗ q' q
        c = base.structure
        structure = np.einsum("abx,dcy->acbdxy", c, c) if not f.exact_rational else None
        if structure is None:
            structure = np.empty((d, d, d, d, d, d), dtype=object)
            for a_, b_, x_ in itertools.product(range(d), repeat=3):
                for d_, c_, y_ in itertools.product(range(d), repeat=3):
                    structure[a_, c_, b_, d_, x_, y_] = c[a_, b_, x_] * c[d_, c_, y_]
        else:
            structure = f.reduce(structure)
        structure = structure.reshape(d * d, d * d, d * d)
        super().__init__(f, vertices, arrows, words, sources, targets, structure,
                         name=f"({base.name})^e")

    def pair(self, p, q):
        return p * self.base.dim + q

    def split(self, idx):
        return divmod(idx, self.base.dim)

    def vertex_pair(self, v):
        return divmod(v, self.base.num_vertices)

    def label(self, i):
        p, q = self.split(i)
        return f"{self.base.label(p)}⊗{self.base.label(q)}"


# --- construction ---------------------------------------------------------


def _normal_words(quiver, rw, length_cap):
    """All irreducible paths, by BFS on length; raises at the cap."""
    n = len(quiver.vertices)
    words = [((), v, v) for v in range(n)]
    cur = []
    for a in range(len(quiver.arrows)):
        w = (a,)
        if not rw.is_reducible(w):
            cur.append(w)
    length = 1
    while cur:
        if length >= length_cap:
            raise NotFiniteDimensionalAtCap(
                f"irreducible paths of length {length} survive (cap {length_cap})")
        for w in cur:
            words.append((w, quiver.source(w), quiver.target(w)))
        nxt = []
        for w in cur:
            t = quiver.target(w)
            for a, arr in enumerate(quiver.arrows):
                if arr.source != t:
                    continue
                ww = w + (a,)
                if any(ww[len(ww) - len(lead):] == lead for lead in rw.rules if len(lead) <= len(ww)):
                    continue
                nxt.append(ww)
        cur = nxt
        length += 1
    return words


def build_algebra(quiver, relations, field=None, length_cap=8, name=None):
    """Algebra of a quiver modulo relations.

    ``relations`` is a list of strings such as ``"x*y + y*x"`` or of
    dicts mapping paths (label strings or index tuples) to coefficients.
    """
    field = parse_field(field) if field is not None else QQ
    if length_cap < 2:
        raise ValueError("length_cap must be at least 2")
    if not isinstance(quiver, Quiver):
        quiver = Quiver(*quiver)
    rels = []
    for r in relations:
        if isinstance(r, str):
            poly = parse_relation(r, quiver, field)
        else:
            poly = {}
            for path, c in dict(r).items():
                w = quiver.parse_path(path) if isinstance(path, str) else tuple(path)
                poly[w] = field(poly.get(w, field.zero) + field(c))
            poly = {w: c for w, c in poly.items() if c != 0}
        if not poly:
            continue
        ends = set()
        for w in poly:
            if len(w) < 2:
                raise AdmissibilityError(f"relation term of length {len(w)} is not in rad^2")
            if not quiver.is_path(w):
                raise AdmissibilityError(f"{quiver.word_label(w)} is not a path")
            ends.add((quiver.source(w), quiver.target(w)))
        if len(ends) != 1:
            raise AdmissibilityError("relation terms are not parallel paths")
        rels.append(poly)
    rw = complete_relations(rels, quiver, field, length_cap)
    words = _normal_words(quiver, rw, length_cap)
    # order: vertices, then by (length, word)
    verts = words[:len(quiver.vertices)]
    rest = sorted(words[len(quiver.vertices):], key=lambda t: _key(t[0]))
    words = verts + rest
    index = {}
    for i, (w, s, t) in enumerate(words):
        index[(w, s) if not w else w] = i
    d = len(words)
    structure = field.zeros((d, d, d))
    for i, (wi, si, ti) in enumerate(words):
        for j, (wj, sj, tj) in enumerate(words):
            if tj != si:
                continue
            if not wi:
                structure[i, j, j] = field.one
                continue
            if not wj:
                structure[i, j, i] = field.one
                continue
            nf = rw.reduce({wj + wi: field.one})
            for w, c in nf.items():
                structure[i, j, index[w]] = c
    return FDAlgebra(field, quiver.vertices, quiver.arrows, [w for w, _, _ in words],
                     [s for _, s, _ in words], [t for _, _, t in words], structure, name=name)


def is_connected(a):
    n = a.num_vertices
    if n == 0:
        return False
    adj = {v: set() for v in range(n)}
    for x in a.arrows:
        adj[x.source].add(x.target)
        adj[x.target].add(x.source)
    seen = {0}
    stack = [0]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == n


def opposite(a):
    return a.opposite()


def enveloping(a):
    return a.enveloping()


def basis_identical(a, b):
    return (a.field == b.field and a.words == b.words and list(a.source) == list(b.source)
            and list(a.target) == list(b.target) and [x.label for x in a.arrows] == [x.label for x in b.arrows]
            and np.array_equal(a.structure, b.structure))
