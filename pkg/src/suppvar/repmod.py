"""Finite-dimensional left modules over an FDAlgebra.

A module stores one vertex label per basis vector and one full square
matrix per arrow.  Arrow matrices map the source-vertex coordinates to the
target-vertex coordinates and vanish elsewhere.  Homomorphisms are plain
matrices (target dim x source dim) wrapped in ``ModuleHom``.
"""

from dataclasses import dataclass, field as dc_field
from enum import Enum

import numpy as np

from . import exactlinalg as el


class ModuleError(ValueError):
    pass


class Module:
    def __init__(self, algebra, basis_vertex, arrows, check=False, name=None):
        self.algebra = algebra
        self.field = algebra.field
        self.basis_vertex = np.asarray(basis_vertex, dtype=int).reshape(-1)
        self.dim = len(self.basis_vertex)
        f = self.field
        self.arrows = [np.asarray(a) if np.asarray(a).dtype == f.dtype else f.array(a) for a in arrows]
        self.name = name
        self._act = {}
        self._cache = {}
        if len(self.arrows) != len(algebra.arrows):
            raise ModuleError(f"expected {len(algebra.arrows)} arrow matrices, got {len(self.arrows)}")
        for a in self.arrows:
            if a.shape != (self.dim, self.dim):
                raise ModuleError("arrow matrices must be square of the module dimension")
        if check:
            self.validate()

    # -- structure ------------------------------------------------------
    @property
    def vertex_dims(self):
        return [int(np.sum(self.basis_vertex == v)) for v in range(self.algebra.num_vertices)]

    @property
    def total_dim(self):
        return self.dim

    def vertex_indices(self, v):
        return np.flatnonzero(self.basis_vertex == v)

    def projector(self, v):
        p = self.field.zeros((self.dim, self.dim))
        idx = self.vertex_indices(v)
        p[idx, idx] = self.field.one
        return p

    def act(self, k):
        """Matrix of the action of basis element k of the algebra."""
        m = self._act.get(k)
        if m is not None:
            return m
        a = self.algebra
        word = a.words[k]
        if not word:
            m = self.projector(a.source[k])
        else:
            m = self.arrows[word[0]]
            for x in word[1:]:
                m = self.field.matmul(self.arrows[x], m)
        self._act[k] = m
        return m

    def act_all(self):
        t = self._cache.get("act_all")
        if t is None:
            t = np.stack([self.act(k) for k in range(self.algebra.dim)]) if self.dim else \
                self.field.zeros((self.algebra.dim, 0, 0))
            self._cache["act_all"] = t
        return t

    def action_of(self, vec):
        """Matrix of the action of an algebra element given by coordinates."""
        return self.field.tensordot(np.asarray(vec), self.act_all(), axes=([0], [0])) if self.dim else \
            self.field.zeros((0, 0))

    def block(self, arrow):
        x = self.algebra.arrows[arrow]
        rows = self.vertex_indices(x.target)
        cols = self.vertex_indices(x.source)
        return self.arrows[arrow][np.ix_(rows, cols)]

    def validate(self):
        f = self.field
        a = self.algebra
        for i, x in enumerate(a.arrows):
            m = self.arrows[i]
            mask = np.zeros((self.dim, self.dim), dtype=bool)
            mask[np.ix_(self.vertex_indices(x.target), self.vertex_indices(x.source))] = True
            if np.any(m[~mask] != 0):
                raise ModuleError(f"arrow {x.label} acts outside its vertex blocks")
        if self.dim == 0:
            return True
        acts = self.act_all()
        for i in a.arrow_basis:
            lhs = f.tensordot(self.act(i), acts, axes=([1], [1]))      # rows, k, cols
            rhs = f.tensordot(a.structure[i], acts, axes=([1], [0]))   # j, rows, cols
            lhs = np.transpose(lhs, (1, 0, 2))
            if not np.array_equal(lhs, rhs):
                raise ModuleError("relations do not hold on this representation")
        return True

    @classmethod
    def from_blocks(cls, algebra, vertex_dims, blocks, check=True, name=None):
        """Build from per-vertex dimensions and arrow blocks (target x source)."""
        f = algebra.field
        basis_vertex = [v for v, d in enumerate(vertex_dims) for _ in range(int(d))]
        mod = cls.__new__(cls)
        dim = len(basis_vertex)
        arrows = []
        bv = np.asarray(basis_vertex, dtype=int)
        for i, x in enumerate(algebra.arrows):
            m = f.zeros((dim, dim))
            b = blocks[i] if not isinstance(blocks, dict) else blocks.get(x.label, blocks.get(i))
            rows = np.flatnonzero(bv == x.target)
            cols = np.flatnonzero(bv == x.source)
            if b is not None and len(rows) and len(cols):
                b = f.array(b).reshape(len(rows), len(cols))
                m[np.ix_(rows, cols)] = b
            arrows.append(m)
        mod.__init__(algebra, basis_vertex, arrows, check=check, name=name)
        return mod

    def __repr__(self):
        return f"<Module {self.name or ''} dims {self.vertex_dims} over {self.algebra.name}>"


def zero_module(a):
    return Module(a, [], [a.field.zeros((0, 0)) for _ in a.arrows])


class ModuleHom:
    def __init__(self, source, target, matrix):
        self.source = source
        self.target = target
        self.matrix = matrix

    @property
    def blocks(self):
        out = []
        for v in range(self.source.algebra.num_vertices):
            out.append(self.matrix[np.ix_(self.target.vertex_indices(v), self.source.vertex_indices(v))])
        return out

    def is_homomorphism(self):
        f = self.source.field
        m = self.matrix
        for i in range(len(self.source.algebra.arrows)):
            if not np.array_equal(f.matmul(self.target.arrows[i], m), f.matmul(m, self.source.arrows[i])):
                return False
        return True

    def compose(self, other):
        """self ∘ other."""
        return ModuleHom(other.source, self.target, self.source.field.matmul(self.matrix, other.matrix))

    def rank(self):
        return el.rank(self.matrix, self.source.field)


def identity(m):
    return ModuleHom(m, m, m.field.eye(m.dim))


# -- constructors -------------------------------------------------------------


def simple(a, v):
    if not 0 <= v < a.num_vertices:
        raise ModuleError(f"unknown vertex {v}")
    return Module(a, [v], [a.field.zeros((1, 1)) for _ in a.arrows], name=f"S{a.vertices[v]}")


def semisimple(a, mults):
    basis_vertex = [v for v, m in enumerate(mults) for _ in range(m)]
    d = len(basis_vertex)
    return Module(a, basis_vertex, [a.field.zeros((d, d)) for _ in a.arrows])


def top_semisimple(a):
    """Λ/𝔯 = sum of all simples."""
    return semisimple(a, [1] * a.num_vertices)


class FreeModule:
    """⊕_g A e_{v_g} with coordinates (g, k) for basis paths k starting at v_g.

    Elements can also be viewed as padded (r x dim A) matrices whose row g
    holds the coefficients of generator g.
    """

    def __init__(self, algebra, gens):
        self.algebra = algebra
        self.field = algebra.field
        self.gens = tuple(int(v) for v in gens)
        r = len(self.gens)
        a = algebra
        self.mask = np.zeros((r, a.dim), dtype=bool)
        for g, v in enumerate(self.gens):
            self.mask[g] = a.source == v
        self.index = np.flatnonzero(self.mask.reshape(-1))
        self.dim = len(self.index)
        self.coord_gen = self.index // a.dim if r else np.zeros(0, dtype=int)
        self.coord_path = self.index % a.dim if r else np.zeros(0, dtype=int)
        self._module = None
        self._pos = {int(x): i for i, x in enumerate(self.index)}

    @property
    def rank(self):
        return len(self.gens)

    def pad(self, x):
        out = self.field.zeros((self.rank * self.algebra.dim,))
        out[self.index] = x
        return out.reshape(self.rank, self.algebra.dim)

    def pad_many(self, xs):
        """xs: (dim, m) -> (m, r, dimA)."""
        m = xs.shape[1]
        out = self.field.zeros((m, self.rank * self.algebra.dim))
        out[:, self.index] = xs.T
        return out.reshape(m, self.rank, self.algebra.dim)

    def compact(self, padded):
        return padded.reshape(-1)[self.index]

    def gen_coord(self, g):
        return self._pos[g * self.algebra.dim + self.algebra.vertex_basis[self.gens[g]]]

    def gen_vector(self, g):
        x = self.field.zeros(self.dim)
        x[self.gen_coord(g)] = self.field.one
        return x

    def vertex_coords(self, v):
        return np.flatnonzero(self.algebra.target[self.coord_path] == v)

    def radical_coords(self):
        return np.flatnonzero(self.algebra.length[self.coord_path] > 0)

    def module(self):
        if self._module is None:
            a = self.algebra
            basis_vertex = a.target[self.coord_path]
            arrows = [self.act(i) for i in a.arrow_basis]
            self._module = Module(a, basis_vertex, arrows, name=f"free{self.gens}")
        return self._module

    def act(self, k):
        # (b_k · X)[g, m] = Σ_l X[g, l] C[k, l, m]
        f = self.field
        da = self.algebra.dim
        out = f.zeros((self.dim, self.dim))
        if self.dim == 0:
            return out
        pos = np.full(self.rank * da, -1, dtype=int)
        pos[self.index] = np.arange(self.dim)
        vals = self.algebra.structure[k][self.coord_path]            # col, m
        rows = pos[self.coord_gen[:, None] * da + np.arange(da)[None, :]]
        cols, ms = np.nonzero(vals != 0)
        out[rows[cols, ms], cols] = vals[cols, ms]
        return out

    def map_to(self, target, images):
        """Matrix of the map sending generator g to images[:, g].

        ``target`` is a Module or a FreeModule.
        """
        f = self.field
        a = self.algebra
        images = np.asarray(images)
        tdim = target.dim
        out = f.zeros((tdim, self.dim))
        if self.dim == 0 or tdim == 0:
            return out
        if isinstance(target, FreeModule):
            padded = target.pad_many(images)              # g, h, l
            prod = f.tensordot(padded, a.structure, axes=([2], [1]))   # g, h, k, m
            prod = np.transpose(prod, (0, 2, 1, 3)).reshape(self.rank, a.dim, -1)
            prod = prod[:, :, target.index]                # g, k, tdim
            out[:, :] = prod[self.coord_gen, self.coord_path].T
            return out
        acts = target.act_all()                            # k, rows, cols
        prod = f.tensordot(acts, images, axes=([2], [0]))  # k, rows, g
        out[:, :] = prod[self.coord_path, :, self.coord_gen].T
        return out

    def __repr__(self):
        return f"<FreeModule gens {self.gens} dim {self.dim}>"


def projective(a, v):
    m = FreeModule(a, [v]).module()
    m.name = f"P{a.vertices[v]}"
    return m


def regular_module(a):
    return FreeModule(a, list(range(a.num_vertices))).module()


def direct_sum(*mods):
    mods = [m for m in mods]
    a = mods[0].algebra
    f = a.field
    basis_vertex = np.concatenate([m.basis_vertex for m in mods]) if mods else []
    arrows = [el.block_diag([m.arrows[i] for m in mods], f) for i in range(len(a.arrows))]
    out = Module(a, basis_vertex, arrows)
    out.summand_dims = [m.dim for m in mods]
    return out


def direct_sum_maps(mods):
    """Inclusions and projections for a direct sum of the given modules."""
    total = direct_sum(*mods)
    f = total.field
    inc, proj = [], []
    off = 0
    for m in mods:
        i = f.zeros((total.dim, m.dim))
        i[off:off + m.dim, :] = f.eye(m.dim)
        inc.append(ModuleHom(m, total, i))
        proj.append(ModuleHom(total, m, np.ascontiguousarray(i.T)))
        off += m.dim
    return total, inc, proj


def submodule(m, cols):
    """Submodule spanned by canonical columns; returns (module, embedding)."""
    f = m.field
    cols = el.canonical_basis(cols, f) if cols.shape[1] else cols
    piv = el.pivot_rows(cols)
    basis_vertex = m.basis_vertex[piv] if len(piv) else np.zeros(0, dtype=int)
    arrows = []
    for x in m.arrows:
        arrows.append(np.ascontiguousarray(f.matmul(x, cols)[piv]) if len(piv) else f.zeros((0, 0)))
    sub = Module(m.algebra, basis_vertex, arrows)
    return sub, ModuleHom(sub, m, cols)


def quotient(m, cols):
    """Quotient by the submodule spanned by cols; returns (module, projection)."""
    f = m.field
    if cols.shape[1]:
        r, piv, rk = el.rref(cols.T, f)
        r = r[:rk]
    else:
        r, piv = f.zeros((0, m.dim)), []
    keep = [i for i in range(m.dim) if i not in set(piv)]
    proj = f.zeros((len(keep), m.dim))
    for j, i in enumerate(keep):
        proj[j, i] = f.one
    if len(piv):
        proj[:, piv] = f.neg(np.ascontiguousarray(r[:, keep].T))
    emb = f.zeros((m.dim, len(keep)))
    for j, i in enumerate(keep):
        emb[i, j] = f.one
    arrows = [f.matmul(f.matmul(proj, x), emb) for x in m.arrows]
    q = Module(m.algebra, m.basis_vertex[keep], arrows)
    return q, ModuleHom(m, q, proj)


def radical_basis(m):
    f = m.field
    if m.dim == 0:
        return f.zeros((0, 0))
    mats = [x for x in m.arrows]
    if not mats:
        return f.zeros((m.dim, 0))
    return el.image_basis(np.concatenate(mats, axis=1), f)


def radical(m):
    return submodule(m, radical_basis(m))[0]


def semisimple_top(m):
    return quotient(m, radical_basis(m))[0]


def socle_basis(m):
    f = m.field
    if not m.arrows or m.dim == 0:
        return f.eye(m.dim)
    return el.kernel_basis(np.concatenate(m.arrows, axis=0), f)


def top_dims(m):
    t = semisimple_top(m)
    return t.vertex_dims


def is_zero(m):
    return m.dim == 0


def is_semisimple(m):
    return all(not np.any(x) for x in m.arrows)


# -- covers and resolutions -------------------------------------------------


@dataclass
class ProjectiveCover:
    free: FreeModule
    epi: np.ndarray        # dim M x dim P
    generators: np.ndarray  # dim M x r, images of the generators

    @property
    def module(self):
        return self.free.module()


def projective_cover(m):
    """Minimal projective cover; generators are chosen among basis vectors."""
    c = m._cache.get("cover")
    if c is not None:
        return c
    f = m.field
    ech = el.Echelon(m.dim, f)
    rad = radical_basis(m)
    for j in range(rad.shape[1]):
        ech.add(rad[:, j])
    gens = []
    for i in range(m.dim):
        e = f.zeros(m.dim)
        e[i] = f.one
        if ech.add(e):
            gens.append(i)
    free = FreeModule(m.algebra, [m.basis_vertex[i] for i in gens])
    images = f.zeros((m.dim, len(gens)))
    for g, i in enumerate(gens):
        images[i, g] = f.one
    epi = free.map_to(m, images)
    c = ProjectiveCover(free, epi, images)
    m._cache["cover"] = c
    return c


def graded_kernel(mat, src_vertex, tgt_vertex, n_vertices, field):
    """Kernel of a vertex-preserving map computed blockwise; canonical columns."""
    n = mat.shape[1]
    out = []
    for v in range(n_vertices):
        ci = np.flatnonzero(src_vertex == v)
        if not len(ci):
            continue
        ri = np.flatnonzero(tgt_vertex == v)
        if len(ri):
            k = el.kernel_basis(mat[np.ix_(ri, ci)], field)
        else:
            k = field.eye(len(ci))
        if k.shape[1]:
            full = field.zeros((n, k.shape[1]))
            full[ci] = k
            out.append(full)
    if not out:
        return field.zeros((n, 0))
    return el.canonical_basis(np.concatenate(out, axis=1), field)


def graded_image(mat, src_vertex, tgt_vertex, n_vertices, field):
    return el.image_basis(mat, field) if mat.shape[1] else field.zeros((mat.shape[0], 0))


def syzygy(m):
    """Ω(m) with its embedding into the projective cover."""
    c = m._cache.get("syzygy")
    if c is not None:
        return c
    cov = projective_cover(m)
    p = cov.free.module()
    k = graded_kernel(cov.epi, p.basis_vertex, m.basis_vertex, m.algebra.num_vertices, m.field)
    out = submodule(p, k)
    m._cache["syzygy"] = out
    return out


def syzygy_module(m, n=1):
    for _ in range(n):
        m = syzygy(m)[0]
    return m


class ProjResolution:
    """Projective resolution P_n -> ... -> P_0 -> M, extended on demand.

    ``terms[n]`` is a FreeModule; ``images[n]`` holds the images of the
    generators of P_n (columns, in P_{n-1} coordinates, or in M for n = 0);
    ``diff(n)`` is the full matrix of d_n.  Minimal resolutions are built
    from projective covers of successive syzygies.
    """

    def __init__(self, target, minimal=True):
        self.target = target
        self.algebra = target.algebra
        self.field = target.field
        self.minimal = minimal
        self.terms = []
        self.images = []
        self._diffs = []
        self.syzygies = []       # (module, embedding hom into P_{n-1}) for n >= 1
        self._solvers = {}
        self.cap = -1

    @property
    def over(self):
        return self.algebra

    @property
    def betti(self):
        return [t.rank for t in self.terms]

    def betti_by_vertex(self, n):
        t = self.terms[n]
        return [sum(1 for v in t.gens if v == w) for w in range(self.algebra.num_vertices)]

    def diff(self, n):
        self.ensure(n)
        return self._diffs[n]

    def ensure(self, n):
        while self.cap < n:
            self._extend()

    def _extend(self):
        f = self.field
        n = self.cap + 1
        if n == 0:
            cov = projective_cover(self.target)
            self.terms.append(cov.free)
            self.images.append(cov.generators)
            self._diffs.append(cov.epi)
            self.cap = 0
            return
        prev = self.terms[n - 1]
        d_prev = self._diffs[n - 1]
        tgt_vertex = self.target.basis_vertex if n == 1 else self.algebra.target[self.terms[n - 2].coord_path]
        k = graded_kernel(d_prev, self.algebra.target[prev.coord_path], tgt_vertex,
                          self.algebra.num_vertices, f)
        sub, emb = submodule(prev.module(), k)
        cov = projective_cover(sub)
        images = f.matmul(k, cov.generators)
        d = f.matmul(k, cov.epi)
        self.syzygies.append((sub, emb))
        self.terms.append(cov.free)
        self.images.append(images)
        self._diffs.append(d)
        self.cap = n

    def syzygy(self, n):
        """Ω^n of the target (Ω^0 is the target itself)."""
        if n == 0:
            return self.target, None
        self.ensure(n)
        return self.syzygies[n - 1]

    def solve(self, n, v, y):
        """x in e_v P_n with d_n x = y (augmentation for n = 0), or None."""
        key = (n, v)
        s = self._solvers.get(key)
        if s is None:
            self.ensure(n)
            cols = self.terms[n].vertex_coords(v)
            s = (cols, el.LinearSolver(self._diffs[n][:, cols], self.field))
            self._solvers[key] = s
        cols, solver = s
        x = solver.solve(y)
        if x is None:
            return None
        out = self.field.zeros(self.terms[n].dim)
        out[cols] = x
        return out

    def check_complex(self, upto=None):
        f = self.field
        upto = self.cap if upto is None else upto
        self.ensure(upto)
        for n in range(1, upto + 1):
            if np.any(f.matmul(self._diffs[n - 1], self._diffs[n]) != 0):
                return False
        return True

    def check_exact(self, upto=None):
        f = self.field
        upto = self.cap if upto is None else upto
        self.ensure(upto + 1)
        if el.rank(self._diffs[0], f) != self.target.dim:
            return False
        for n in range(1, upto + 1):
            ker = el.kernel_basis(self._diffs[n - 1], f)
            img = el.image_basis(self._diffs[n], f)
            if ker.shape != img.shape or not np.array_equal(ker, img):
                return False
        return True

    def check_minimal(self, upto=None):
        upto = self.cap if upto is None else upto
        self.ensure(upto)
        for n in range(1, upto + 1):
            prev = self.terms[n - 1]
            top = np.setdiff1d(np.arange(prev.dim), prev.radical_coords())
            if np.any(self._diffs[n][top] != 0):
                return False
        return True


def min_proj_resolution(m, cap):
    res = m._cache.get("minres")
    if res is None:
        res = ProjResolution(m)
        m._cache["minres"] = res
    res.ensure(cap)
    return res


def truncated_view(res, cap):
    return res.betti[:cap + 1]


# -- homomorphisms ------------------------------------------------------------


def _presentation(m):
    c = m._cache.get("presentation")
    if c is None:
        f = m.field
        cov = projective_cover(m)
        k = syzygy(m)[1].matrix
        section = el.LinearSolver(cov.epi, f).solve(f.eye(m.dim)) if m.dim else f.zeros((cov.free.dim, 0))
        c = (cov, k, section)
        m._cache["presentation"] = c
    return c


def hom_space(m, n):
    """Basis of Hom_A(m, n) as a list of ModuleHom."""
    if m.algebra is not n.algebra:
        raise ModuleError("modules over different algebras")
    return [ModuleHom(m, n, x) for x in hom_matrices(m, n)]


def hom_matrices(m, n):
    f = m.field
    if m.dim == 0 or n.dim == 0:
        return []
    key = ("hom", id(n))
    cached = m._cache.get(key)
    if cached is not None and cached[0] is n:
        return cached[1]
    cov, k, section = _presentation(m)
    free = cov.free
    a = m.algebra
    acts = n.act_all()          # paths, n rows, n cols
    # unknowns: x_g in e_{v_g} n
    unknowns = []
    for g, v in enumerate(free.gens):
        for j in n.vertex_indices(v):
            unknowns.append((g, j))
    if not unknowns:
        m._cache[key] = (n, [])
        return []
    # Phi_{g,j} has column (g,k) = act_k[:, j]
    cols_of_gen = [np.flatnonzero(free.coord_gen == g) for g in range(free.rank)]
    eqs = []
    phis = []
    for g, j in unknowns:
        cols = cols_of_gen[g]
        phi_cols = acts[free.coord_path[cols], :, j].T          # n.dim x len(cols)
        phis.append((cols, phi_cols))
        if k.shape[1]:
            eqs.append(f.matmul(phi_cols, k[cols]).reshape(-1))
    if eqs:
        big = np.stack(eqs, axis=1)
        sol = el.kernel_basis(big, f)
    else:
        sol = f.eye(len(unknowns))
    out = []
    # f = Phi(x) @ section
    sec_rows = [section[cols] for cols, _ in phis]
    per_unknown = [f.matmul(pc, sr) for (cols, pc), sr in zip(phis, sec_rows)]
    stack = np.stack(per_unknown)         # u, n.dim, m.dim
    for s in range(sol.shape[1]):
        x = sol[:, s]
        out.append(f.tensordot(x, stack, axes=([0], [0])))
    m._cache[key] = (n, out)
    return out


def hom_dim(m, n):
    return len(hom_matrices(m, n))


def _span_matrix(mats, shape, field):
    if not mats:
        return field.zeros((shape[0] * shape[1], 0))
    return np.stack([x.reshape(-1) for x in mats], axis=1)


def projectively_trivial_basis(m, n):
    """Canonical basis (as flattened columns) of maps m -> P(n) -> n."""
    f = m.field
    cov = projective_cover(n)
    p = cov.free.module()
    gens = hom_matrices(m, p)
    mats = [f.matmul(cov.epi, g) for g in gens]
    return el.canonical_basis(_span_matrix(mats, (n.dim, m.dim), f), f)


def stable_hom(m, n):
    """(dim of Hom modulo maps through the cover of n, coset representatives)."""
    f = m.field
    homs = hom_matrices(m, n)
    if not homs:
        return 0, []
    triv = projectively_trivial_basis(m, n)
    ech = el.Echelon(m.dim * n.dim, f)
    for j in range(triv.shape[1]):
        ech.add(triv[:, j])
    reps = []
    for h in homs:
        if ech.add(h.reshape(-1)):
            reps.append(ModuleHom(m, n, h))
    return len(reps), reps


def is_stably_zero(hom):
    """Does the hom factor through the projective cover of its target?"""
    f = hom.source.field
    if not np.any(hom.matrix != 0):
        return True
    triv = projectively_trivial_basis(hom.source, hom.target)
    if triv.shape[1] == 0:
        return False
    return el.in_span(triv, hom.matrix.reshape(-1), f)


# -- exact sequences ------------------------------------------------------------


@dataclass
class ShortExactSeq:
    left: Module
    middle: Module
    right: Module
    inj: ModuleHom
    surj: ModuleHom

    def check(self):
        f = self.middle.field
        if self.inj.rank() != self.left.dim:
            return False
        if self.surj.rank() != self.right.dim:
            return False
        if np.any(f.matmul(self.surj.matrix, self.inj.matrix) != 0):
            return False
        return self.left.dim + self.right.dim == self.middle.dim


def is_split(s):
    """Find a section of s.surj; (True, section) or (False, None)."""
    f = s.middle.field
    if s.right.dim == 0:
        return True, ModuleHom(s.right, s.middle, f.zeros((s.middle.dim, 0)))
    homs = hom_matrices(s.right, s.middle)
    if not homs:
        return False, None
    comps = np.stack([f.matmul(s.surj.matrix, h).reshape(-1) for h in homs], axis=1)
    want = f.eye(s.right.dim).reshape(-1)
    x, _ = el.solve_right(comps, want, f)
    if x is None:
        return False, None
    sec = f.tensordot(x[:, 0], np.stack(homs), axes=([0], [0]))
    return True, ModuleHom(s.right, s.middle, sec)


def canonical_sequence(a_mod, b_mod):
    total, inc, proj = direct_sum_maps([a_mod, b_mod])
    return ShortExactSeq(a_mod, total, b_mod, inc[0], proj[1])


def kernel_module(hom):
    m = hom.source
    k = graded_kernel(hom.matrix, m.basis_vertex, hom.target.basis_vertex, m.algebra.num_vertices, m.field)
    return submodule(m, k)


def image_module(hom):
    f = hom.source.field
    return submodule(hom.target, el.image_basis(hom.matrix, f) if hom.matrix.shape[1] else
                     f.zeros((hom.target.dim, 0)))


def cokernel_module(hom):
    f = hom.source.field
    img = el.image_basis(hom.matrix, f) if hom.matrix.shape[1] else f.zeros((hom.target.dim, 0))
    return quotient(hom.target, img)


# -- isomorphism ------------------------------------------------------------


class Verdict(str, Enum):
    YES = "yes"
    NO = "no"
    INCONCLUSIVE = "inconclusive"


def _radical_layers(m, depth=None):
    f = m.field
    out = []
    cur = f.eye(m.dim)
    while cur.shape[1]:
        dims = [0] * m.algebra.num_vertices
        for v in m.basis_vertex[el.pivot_rows(cur)]:
            dims[v] += 1
        out.append(tuple(dims))
        nxt = [f.matmul(x, cur) for x in m.arrows]
        cur = el.image_basis(np.concatenate(nxt, axis=1), f) if nxt else f.zeros((m.dim, 0))
        if depth is not None and len(out) >= depth:
            break
    return out


def iso_test(m, n, seed=0, budget=256):
    """Las-Vegas isomorphism test: (Verdict, witness or None)."""
    if m.algebra is not n.algebra:
        raise ModuleError("modules over different algebras")
    f = m.field
    if m.vertex_dims != n.vertex_dims:
        return Verdict.NO, None
    if m.dim == 0:
        return Verdict.YES, ModuleHom(m, n, f.zeros((0, 0)))
    hmn = hom_matrices(m, n)
    if len(hmn) != hom_dim(n, m) or len(hmn) != hom_dim(m, m):
        return Verdict.NO, None
    if _radical_layers(m) != _radical_layers(n):
        return Verdict.NO, None
    if not hmn:
        return Verdict.NO, None
    tried = 0

    def ok(x):
        return el.is_invertible(x, f)

    for h in hmn:
        tried += 1
        if ok(h):
            return Verdict.YES, ModuleHom(m, n, h)
    stack = np.stack(hmn)
    r = len(hmn)
    for i in range(r):
        for j in range(i + 1, r):
            if tried >= budget // 2:
                break
            tried += 1
            x = f.add(hmn[i], hmn[j])
            if ok(x):
                return Verdict.YES, ModuleHom(m, n, x)
    rng = np.random.default_rng(seed)
    while tried < budget:
        tried += 1
        c = f.random(rng, r)
        x = f.tensordot(c, stack, axes=([0], [0]))
        if ok(x):
            return Verdict.YES, ModuleHom(m, n, x)
    return Verdict.INCONCLUSIVE, None


# -- decomposition ------------------------------------------------------------


@dataclass
class Decomposition:
    summands: list
    embeddings: list
    certified: bool
    notes: list = dc_field(default_factory=list)

    def __iter__(self):
        return iter((self.summands, self.certified))


def _generalised_eigen_split(phi, field):
    """Split by the primary decomposition of phi; list of (kernel cols)."""
    cp = el.charpoly(phi, field)
    facs = el.factor_poly(cp, field)
    if len(facs) < 2:
        return None
    n = phi.shape[0]
    parts = []
    for coeffs, e in facs:
        q = el.poly_eval_matrix(coeffs, phi, field)
        q = el.matrix_power(q, n, field)
        parts.append(el.kernel_basis(q, field))
    return parts


def _local_certificate(m):
    """True when End(m) = k·id ⊕ (a nilpotent ideal)."""
    f = m.field
    ends = hom_matrices(m, m)
    d = m.dim
    if not ends:
        return False
    eye = f.eye(d)
    nil = []
    for x in ends:
        cp = el.charpoly(x, f)
        facs = el.factor_poly(cp, f)
        if len(facs) != 1 or len(facs[0][0]) != 2:
            return False
        lam = f.neg(np.asarray([facs[0][0][1]]))[0]
        nil.append(f.sub(x, f.scale(eye, lam)))
    basis = el.canonical_basis(_span_matrix(nil, (d, d), f), f)
    if basis.shape[1] >= len(ends):
        return False
    gens = [basis[:, j].reshape(d, d) for j in range(basis.shape[1])]
    cur = gens
    for _ in range(d + 1):
        if not cur:
            return True
        prods = [f.matmul(a, b) for a in cur for b in gens]
        span = el.canonical_basis(_span_matrix(prods, (d, d), f), f)
        cur = [span[:, j].reshape(d, d) for j in range(span.shape[1])]
    return not cur


def decompose(m, seed=0, tries=24):
    """Best-effort Krull–Schmidt splitting via Fitting decompositions."""
    f = m.field
    rng = np.random.default_rng(seed)
    if m.dim == 0:
        return Decomposition([], [], True)
    work = [(m, f.eye(m.dim))]
    done = []
    while work:
        x, emb = work.pop(0)
        parts = _split_once(x, rng, tries)
        if parts is None:
            done.append((x, emb))
            continue
        for cols in parts:
            sub, e = submodule(x, cols)
            work.append((sub, f.matmul(emb, e.matrix)))
    done.sort(key=lambda t: el.pivot_rows(t[1])[0])
    certified = all(_local_certificate(x) for x, _ in done)
    return Decomposition([x for x, _ in done], [e for _, e in done], certified)


def _split_once(x, rng, tries):
    f = x.field
    ends = hom_matrices(x, x)
    if len(ends) <= 1:
        return None
    cands = list(ends)
    stack = np.stack(ends)
    for _ in range(tries):
        c = f.random(rng, len(ends))
        cands.append(f.tensordot(c, stack, axes=([0], [0])))
    for phi in cands:
        parts = _generalised_eigen_split(phi, f)
        if parts is not None:
            return parts
    return None


def brute_force_summand_count(m):
    """Number of indecomposable summands via primitive idempotents (GF(p) only).

    Enumerates every element of End(m); only feasible for tiny cases.
    """
    import itertools

    f = m.field
    ends = hom_matrices(m, m)
    if not ends:
        return 0
    stack = np.stack(ends)
    idems = []
    for c in itertools.product(range(f.p), repeat=len(ends)):
        e = f.tensordot(np.array(c, dtype=np.int64), stack, axes=([0], [0]))
        if np.array_equal(f.matmul(e, e), e):
            idems.append(e)
    # peel off a minimal-rank idempotent (necessarily primitive) each step
    eye = f.eye(m.dim)

    def count(e, depth=0):
        rk = el.rank(e, f)
        if rk == 0:
            return 0
        sub = [g for g in idems if 0 < el.rank(g, f) < rk and np.array_equal(f.matmul(e, g), g)
               and np.array_equal(f.matmul(g, e), g)]
        if not sub:
            return 1
        g = min(sub, key=lambda z: el.rank(z, f))
        return 1 + count(f.sub(e, g))

    return count(eye)


# -- duality ------------------------------------------------------------------


def dual(m):
    """D(m) = Hom_k(m, k) as a module over the opposite algebra."""
    op = m.algebra.opposite()
    arrows = [np.ascontiguousarray(x.T) for x in m.arrows]
    return Module(op, m.basis_vertex, arrows)


def projective_dimension(m, cap, _memo=None):
    """Projective dimension when it is at most cap, else AtLeast(cap + 1)."""
    memo = {} if _memo is None else _memo
    cur = m
    for n in range(cap + 1):
        if cur.dim == 0:
            return max(n - 1, 0) if n else 0
        cov = projective_cover(cur)
        if cov.free.dim == cur.dim:
            return n
        if is_semisimple(cur) and n > 0:
            worst = 0
            for v, mult in enumerate(cur.vertex_dims):
                if not mult:
                    continue
                key = v
                if key not in memo:
                    memo[key] = None   # recursion guard
                    memo[key] = projective_dimension(simple(cur.algebra, v), cap, memo)
                pd = memo[key]
                if pd is None or isinstance(pd, AtLeast):
                    return AtLeast(cap + 1)
                worst = max(worst, pd)
            return n + worst if n + worst <= cap else AtLeast(cap + 1)
        cur = syzygy(cur)[0]
    return AtLeast(cap + 1)


@dataclass(frozen=True)
class AtLeast:
    bound: int

    def __str__(self):
        return f">={self.bound}"


def is_projective(m):
    return projective_cover(m).free.dim == m.dim


def is_selfinjective(a):
    """D(A_A) projective as a left module."""
    right_regular = regular_module(a.opposite())
    return is_projective(dual(right_regular))


def gorenstein_bounds(a, cap):
    """Injective dimensions of A on the left and on the right, capped."""
    left = projective_dimension(dual(regular_module(a)), cap)
    right = projective_dimension(dual(regular_module(a.opposite())), cap)
    return left, right
