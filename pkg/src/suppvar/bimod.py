"""Bimodules as modules over the enveloping algebra, and the tensor constructions.

A bimodule is a Module over ``A.enveloping()``.  Basis element (p, q) of
the enveloping algebra acts as x -> p x q.  The left vertex of a basis
vector is u and the right vertex is w when it lies in e_u B e_w.
"""

from dataclasses import dataclass

import numpy as np

from . import exactlinalg as el
from .repmod import (FreeModule, Module, ModuleHom, ShortExactSeq, direct_sum, hom_matrices,
                     is_projective, iso_test, kernel_module, min_proj_resolution, projective_cover,
                     quotient, submodule, Verdict)


class Bimodule:
    def __init__(self, module, name=None):
        env = module.algebra
        if not hasattr(env, "base"):
            raise ValueError("a bimodule must be a module over an enveloping algebra")
        self.module = module
        self.env = env
        self.base = env.base
        self.field = module.field
        self.name = name
        n = self.base.num_vertices
        self.left_vertex = module.basis_vertex // n
        self.right_vertex = module.basis_vertex % n

    @property
    def dim(self):
        return self.module.dim

    def left_action(self, k):
        """x -> b_k x for basis element k of the base algebra."""
        f = self.field
        env, base = self.env, self.base
        out = f.zeros((self.dim, self.dim))
        for w in range(base.num_vertices):
            out = f.add(out, self.module.act(env.pair(k, base.vertex_basis[w])))
        return out

    def right_action(self, k):
        """x -> x b_k."""
        f = self.field
        env, base = self.env, self.base
        out = f.zeros((self.dim, self.dim))
        for u in range(base.num_vertices):
            out = f.add(out, self.module.act(env.pair(base.vertex_basis[u], k)))
        return out

    def left_view(self):
        base = self.base
        return Module(base, self.left_vertex, [self.left_action(i) for i in base.arrow_basis])

    def right_view(self):
        """The right structure, as a left module over the opposite algebra."""
        op = self.base.opposite()
        return Module(op, self.right_vertex, [self.right_action(i) for i in self.base.arrow_basis])

    def __repr__(self):
        return f"<Bimodule {self.name or ''} dim {self.dim} over {self.base.name}>"


def bimodule_from_actions(base, left_vertex, right_vertex, left_arrows, right_arrows, name=None):
    """Assemble a bimodule from vertex labels and one-sided arrow actions."""
    env = base.enveloping()
    f = base.field
    n = base.num_vertices
    lv = np.asarray(left_vertex, dtype=int)
    rv = np.asarray(right_vertex, dtype=int)
    dim = len(lv)
    arrows = []
    for i in range(len(base.arrows)):
        for w in range(n):
            mask = (rv == w).astype(np.int64)
            arrows.append(f.reduce(left_arrows[i] * mask[None, :]) if not f.exact_rational
                          else left_arrows[i] * mask[None, :])
    for u in range(n):
        for i in range(len(base.arrows)):
            mask = (lv == u).astype(np.int64)
            arrows.append(f.reduce(right_arrows[i] * mask[None, :]) if not f.exact_rational
                          else right_arrows[i] * mask[None, :])
    if dim == 0:
        arrows = [f.zeros((0, 0)) for _ in env.arrows]
    mod = Module(env, lv * n + rv, arrows)
    return Bimodule(mod, name=name)


def lambda_as_bimodule(a):
    """A as a bimodule over itself."""
    c = getattr(a, "_regular_bimodule", None)
    if c is not None:
        return c
    left = [a.left_mult(i) for i in a.arrow_basis]
    right = [a.right_mult(i) for i in a.arrow_basis]
    b = bimodule_from_actions(a, a.target, a.source, left, right, name="A")
    a._regular_bimodule = b
    return b


def bimodule_min_resolution(a, cap):
    """Minimal projective resolution of A over its enveloping algebra."""
    return min_proj_resolution(lambda_as_bimodule(a).module, cap)


def one_sided_projectivity(b):
    return is_projective(b.left_view()), is_projective(b.right_view())


# -- tensor products ----------------------------------------------------------


@dataclass
class TensorProduct:
    """B ⊗_A M as a quotient of the subspace W ⊆ B ⊗_k M of matching pairs.

    ``pairs`` lists the (b, m) index pairs spanning W; ``proj`` maps W onto
    the quotient coordinates and ``emb`` is a section of it.
    """
    result: object
    pairs: np.ndarray
    proj: np.ndarray
    emb: np.ndarray
    left_dim: int
    right_dim: int

    @property
    def dim(self):
        return self.proj.shape[0]

    def w_index(self):
        idx = np.full(self.left_dim * self.right_dim, -1, dtype=int)
        idx[self.pairs[:, 0] * self.right_dim + self.pairs[:, 1]] = np.arange(len(self.pairs))
        return idx

    def element(self, i, j):
        """Class of b_i ⊗ m_j in the quotient coordinates."""
        k = self.w_index()[i * self.right_dim + j]
        if k < 0:
            return None
        return self.proj[:, k]


def _tensor_core(field, base, rvert_left, lvert_right, right_arrow_left, left_arrow_right):
    """Shared core for B ⊗_A X.

    ``right_arrow_left[i]`` is the right action of arrow i on B and
    ``left_arrow_right[i]`` the left action on X.
    """
    dl, dr = len(rvert_left), len(lvert_right)
    pairs = np.array([(i, j) for i in range(dl) for j in range(dr)
                      if rvert_left[i] == lvert_right[j]], dtype=int).reshape(-1, 2)
    widx = np.full(dl * dr, -1, dtype=int)
    flat = pairs[:, 0] * dr + pairs[:, 1]
    widx[flat] = np.arange(len(pairs))
    nw = len(pairs)
    rels = []
    for i, x in enumerate(base.arrows):
        rb = right_arrow_left[i]
        lx = left_arrow_right[i]
        # relation for b in B e_{t(x)}, m in e_{s(x)} X:  (b x) ⊗ m - b ⊗ (x m)
        bs = np.flatnonzero(rvert_left == x.target)
        ms = np.flatnonzero(lvert_right == x.source)
        if not len(bs) or not len(ms):
            continue
        for b in bs:
            col_b = rb[:, b]
            nzb = np.flatnonzero(col_b)
            for m in ms:
                r = field.zeros(nw)
                for b2 in nzb:
                    r[widx[b2 * dr + m]] = field.add(r[widx[b2 * dr + m]], col_b[b2])
                col_m = lx[:, m]
                for m2 in np.flatnonzero(col_m):
                    k = widx[b * dr + m2]
                    r[k] = field.sub(r[k], col_m[m2])
                if np.any(r != 0):
                    rels.append(r)
    if rels:
        rr, piv, rk = el.rref(np.stack(rels), field)
        rr = rr[:rk]
    else:
        rr, piv = field.zeros((0, nw)), []
    pivset = set(piv)
    keep = [k for k in range(nw) if k not in pivset]
    proj = field.zeros((len(keep), nw))
    for j, k in enumerate(keep):
        proj[j, k] = field.one
    if len(piv):
        proj[:, piv] = field.neg(np.ascontiguousarray(rr[:, keep].T))
    emb = field.zeros((nw, len(keep)))
    for j, k in enumerate(keep):
        emb[k, j] = field.one
    return pairs, proj, emb, keep


def _induced(field, tp, left_op, right_op):
    """Matrix on the quotient induced by left_op ⊗ right_op on W."""
    pairs = tp.pairs
    # (L ⊗ R) restricted to W: entry [(i',j'), (i,j)] = L[i',i] R[j',j]
    big = field.reduce(left_op[np.ix_(pairs[:, 0], pairs[:, 0])] * right_op[np.ix_(pairs[:, 1], pairs[:, 1])]) \
        if not field.exact_rational else \
        left_op[np.ix_(pairs[:, 0], pairs[:, 0])] * right_op[np.ix_(pairs[:, 1], pairs[:, 1])]
    return field.matmul(field.matmul(tp.proj, big), tp.emb)


def _induced_between(field, src, dst, left_map, right_map):
    """(f ⊗ g) from src = B ⊗ X to dst = B' ⊗ X' on quotient coordinates."""
    sp, dp = src.pairs, dst.pairs
    big = left_map[np.ix_(dp[:, 0], sp[:, 0])] * right_map[np.ix_(dp[:, 1], sp[:, 1])]
    big = field.reduce(big) if not field.exact_rational else big
    return field.matmul(field.matmul(dst.proj, big), src.emb)


def tensor_over_algebra(b, m, with_data=False):
    """B ⊗_A M as a left A-module."""
    base = b.base
    if m.algebra is not base:
        raise ValueError("algebra mismatch")
    f = b.field
    right_b = [b.right_action(i) for i in base.arrow_basis]
    pairs, proj, emb, keep = _tensor_core(f, base, b.right_vertex, m.basis_vertex, right_b, m.arrows)
    tp = TensorProduct(None, pairs, proj, emb, b.dim, m.dim)
    eye_m = f.eye(m.dim)
    arrows = [_induced(f, tp, b.left_action(i), eye_m) for i in base.arrow_basis]
    verts = b.left_vertex[pairs[keep, 0]] if len(keep) else np.zeros(0, dtype=int)
    if not len(keep):
        arrows = [f.zeros((0, 0)) for _ in base.arrows]
    out = Module(base, verts, arrows)
    tp.result = out
    return (out, tp) if with_data else out


def tensor_bimodules(b1, b2, with_data=False):
    """B1 ⊗_A B2 as a bimodule."""
    base = b1.base
    if b2.base is not base:
        raise ValueError("algebra mismatch")
    f = b1.field
    right_1 = [b1.right_action(i) for i in base.arrow_basis]
    left_2 = [b2.left_action(i) for i in base.arrow_basis]
    pairs, proj, emb, keep = _tensor_core(f, base, b1.right_vertex, b2.left_vertex, right_1, left_2)
    tp = TensorProduct(None, pairs, proj, emb, b1.dim, b2.dim)
    e1, e2 = f.eye(b1.dim), f.eye(b2.dim)
    left = [_induced(f, tp, b1.left_action(i), e2) for i in base.arrow_basis]
    right = [_induced(f, tp, e1, b2.right_action(i)) for i in base.arrow_basis]
    lv = b1.left_vertex[pairs[keep, 0]] if len(keep) else np.zeros(0, dtype=int)
    rv = b2.right_vertex[pairs[keep, 1]] if len(keep) else np.zeros(0, dtype=int)
    out = bimodule_from_actions(base, lv, rv, left, right)
    tp.result = out
    return (out, tp) if with_data else out


def tensor_map(field, src, dst, left_map, right_map):
    """Functoriality: the map src -> dst induced by left_map ⊗ right_map."""
    return _induced_between(field, src, dst, left_map, right_map)


def unit_map(m):
    """x -> 1 ⊗ x, from M to A ⊗_A M; returns (matrix, tensor data)."""
    a = m.algebra
    lam = lambda_as_bimodule(a)
    out, tp = tensor_over_algebra(lam, m, with_data=True)
    f = m.field
    mat = f.zeros((out.dim, m.dim))
    idx = tp.w_index()
    for j in range(m.dim):
        v = m.basis_vertex[j]
        k = idx[a.vertex_basis[v] * m.dim + j]
        mat[:, j] = tp.proj[:, k]
    return mat, tp


def bimodule_unit_map(b):
    """x -> 1 ⊗ x, from B to A ⊗_A B."""
    a = b.base
    lam = lambda_as_bimodule(a)
    out, tp = tensor_bimodules(lam, b, with_data=True)
    f = b.field
    mat = f.zeros((out.dim, b.dim))
    idx = tp.w_index()
    for j in range(b.dim):
        v = b.left_vertex[j]
        k = idx[a.vertex_basis[v] * b.dim + j]
        mat[:, j] = tp.proj[:, k]
    return mat, out, tp


# -- duals --------------------------------------------------------------------


def dual_star(b, with_eval=False):
    """B* = Hom_A(B, A) over the left structure, with its residual bimodule structure.

    For phi in B*, (a·phi)(x) = phi(x a) and (phi·a)(x) = phi(x) a.
    """
    base = b.base
    f = b.field
    left_b = b.left_view()
    reg = lambda_as_bimodule(base)
    reg_left = reg.left_view()
    homs = hom_matrices(left_b, reg_left)     # each: dim A x dim B
    if not homs:
        out = bimodule_from_actions(base, [], [], [f.zeros((0, 0))] * len(base.arrows),
                                    [f.zeros((0, 0))] * len(base.arrows))
        return (out, None) if with_eval else out
    # split into pieces Hom(B e_u, A e_w): phi supported on right vertex u of B,
    # landing in right vertex w of A
    n = base.num_vertices
    pieces = []
    for u in range(n):
        src_cols = np.flatnonzero(b.right_vertex == u)
        for w in range(n):
            tgt_rows = np.flatnonzero(base.source == w)
            mats = []
            for h in homs:
                x = f.zeros(h.shape)
                x[np.ix_(tgt_rows, src_cols)] = h[np.ix_(tgt_rows, src_cols)]
                mats.append(x.reshape(-1))
            if not mats:
                continue
            basis = el.canonical_basis(np.stack(mats, axis=1), f)
            for j in range(basis.shape[1]):
                pieces.append((u, w, basis[:, j]))
    d = len(pieces)
    flat = np.stack([p[2] for p in pieces], axis=1) if d else f.zeros((homs[0].size, 0))
    solver = el.LinearSolver(flat, f)
    lv = np.array([p[0] for p in pieces], dtype=int)
    rv = np.array([p[1] for p in pieces], dtype=int)
    shape = homs[0].shape

    def coords(mats):
        cols = np.stack([x.reshape(-1) for x in mats], axis=1)
        out = solver.solve(cols)
        if out is None:
            raise RuntimeError("dual action left the hom space")
        return out

    left, right = [], []
    for i in base.arrow_basis:
        rb = b.right_action(i)
        ra = base.right_mult(i)
        left.append(coords([f.matmul(p[2].reshape(shape), rb) for p in pieces]))
        right.append(coords([f.matmul(ra, p[2].reshape(shape)) for p in pieces]))
    out = bimodule_from_actions(base, lv, rv, left, right, name="B*")
    if with_eval:
        return out, np.stack([p[2].reshape(shape) for p in pieces])
    return out


# -- the pushout bimodule -------------------------------------------------------


@dataclass
class PushoutData:
    bimodule: Bimodule
    seq: ShortExactSeq
    degree: int
    cover: np.ndarray          # Λ ⊕ P^{n-1} -> M_eta


def pushout_M_eta(eta):
    """M_eta from a Hochschild class; returns (bimodule, exact sequence)."""
    data = pushout_data(eta)
    return data.bimodule, data.seq


def pushout_data(eta):
    from .cohom import cochain_full_map
    if eta.degree < 1:
        raise ValueError("M_eta needs a class of positive degree")
    cache = eta.complex._pushouts
    key = eta.key()
    if key in cache:
        return cache[key]
    res = eta.complex.resolution
    n = eta.degree
    res.ensure(n)
    a = res.target
    f = a.field
    lam = a                                   # the Λ^e-module Λ
    pn = res.terms[n]
    pn1 = res.terms[n - 1]
    eta_full = cochain_full_map(eta.complex, n, eta.vector)      # dim Λ x dim P^n
    d_n = res.diff(n)                                             # P^{n-1} x P^n
    total = direct_sum(lam, pn1.module())
    rel = np.concatenate([eta_full, f.neg(d_n)], axis=0)
    img = el.image_basis(rel, f) if rel.shape[1] else f.zeros((total.dim, 0))
    q, proj = quotient(total, img)
    m_eta = Bimodule(q, name=f"M_eta(deg {n})")
    inc = f.zeros((total.dim, lam.dim))
    inc[:lam.dim] = f.eye(lam.dim)
    alpha = f.matmul(proj.matrix, inc)
    # beta: (λ, p) -> d_{n-1}(p) in Ω^{n-1}
    if n == 1:
        omega = a
        coords = res.diff(0)                                    # Λ x P^0
        beta_total = np.concatenate([f.zeros((omega.dim, lam.dim)), coords], axis=1)
    else:
        omega, emb = res.syzygy(n - 1)
        piv = el.pivot_rows(emb.matrix)
        dn1 = res.diff(n - 1)[piv]
        beta_total = np.concatenate([f.zeros((omega.dim, lam.dim)), dn1], axis=1)
    # beta on the quotient: beta_total restricted through any section of proj
    section = el.LinearSolver(proj.matrix, f).solve(f.eye(q.dim))
    beta = f.matmul(beta_total, section)
    seq = ShortExactSeq(lam, q, omega, ModuleHom(lam, q, alpha), ModuleHom(q, omega, beta))
    data = PushoutData(m_eta, seq, n, proj.matrix)
    cache[key] = data
    return data


@dataclass
class ChainResult:
    module: Module
    seq: ShortExactSeq
    bimodules: list


def tensor_chain(etas, m):
    """M_{η1} ⊗ ... ⊗ M_{ηt} ⊗ m with the sequence 0 -> m -> chain -> coker -> 0."""
    f = m.field
    if not etas:
        zero = Module(m.algebra, [], [f.zeros((0, 0)) for _ in m.algebra.arrows])
        seq = ShortExactSeq(m, m, zero, ModuleHom(m, m, f.eye(m.dim)), ModuleHom(m, zero, f.zeros((0, m.dim))))
        return ChainResult(m, seq, [])
    cur = m
    alpha = f.eye(m.dim)            # m -> cur
    bims = []
    for eta in reversed(etas):
        data = pushout_data(eta)
        bims.append(data.bimodule)
        unit, tp_lam = unit_map(cur)                      # cur -> Λ ⊗ cur
        out, tp = tensor_over_algebra(data.bimodule, cur, with_data=True)
        amap = tensor_map(f, tp_lam, tp, data.seq.inj.matrix, f.eye(cur.dim))
        alpha = f.matmul(amap, f.matmul(unit, alpha))
        cur = out
    bims.reverse()
    inj = ModuleHom(m, cur, alpha)
    img = el.image_basis(alpha, f) if alpha.shape[1] else f.zeros((cur.dim, 0))
    right, proj = quotient(cur, img)
    seq = ShortExactSeq(m, cur, right, inj, proj)
    return ChainResult(cur, seq, bims)


def tensor_sequence(seq, m):
    """Apply - ⊗_A m to an exact sequence of bimodules (left term kept as B ⊗ m)."""
    f = m.field
    left_b = Bimodule(seq.left) if not isinstance(seq.left, Bimodule) else seq.left
    mid_b = Bimodule(seq.middle)
    right_b = Bimodule(seq.right)
    l, tpl = tensor_over_algebra(left_b, m, with_data=True)
    c, tpc = tensor_over_algebra(mid_b, m, with_data=True)
    r, tpr = tensor_over_algebra(right_b, m, with_data=True)
    eye = f.eye(m.dim)
    inj = tensor_map(f, tpl, tpc, seq.inj.matrix, eye)
    surj = tensor_map(f, tpc, tpr, seq.surj.matrix, eye)
    return ShortExactSeq(l, c, r, ModuleHom(l, c, inj), ModuleHom(c, r, surj))


# -- Lemma-style product sequence -----------------------------------------------


def product_sequence_check(eta1, eta2, seed=0, budget=4):
    """Look for 0 -> Ω^n(M_{η1}) -> M_{η2η1} ⊕ F -> M_{η2} -> 0 with F projective.

    n is the degree of η2.  Returns a dict report.
    """
    from .cohom import yoneda_product, cochain_lift

    f = eta1.complex.field
    n = eta2.degree
    prod = yoneda_product(eta2, eta1)
    report = {"degrees": [eta1.degree, eta2.degree]}
    d21 = pushout_data(prod) if prod.degree >= 1 else None
    d2 = pushout_data(eta2)
    d1 = pushout_data(eta1)
    m21, m2 = d21.bimodule.module, d2.bimodule.module
    omega_res = min_proj_resolution(d1.bimodule.module, n)
    omega = omega_res.syzygy(n)[0]
    res = eta1.complex.resolution
    # μ: M_{η2η1} -> M_{η2},  (λ, p) -> (λ, lift(η1)_{n-1}(p))
    m_deg = eta1.degree
    lift = cochain_lift(eta1.complex, eta1.degree, eta1.vector, n - 1)
    lam_dim = res.target.dim
    pn1 = res.terms[n - 1]
    g = lift.full(n - 1)                       # P^{n-1} x P^{m+n-1}
    top = np.concatenate([f.eye(lam_dim), f.zeros((lam_dim, res.terms[m_deg + n - 1].dim))], axis=1)
    bottom = np.concatenate([f.zeros((pn1.dim, lam_dim)), g], axis=1)
    mu_total = np.concatenate([top, bottom], axis=0)
    section21 = el.LinearSolver(d21.cover, f).solve(f.eye(m21.dim))
    mu = f.matmul(f.matmul(d2.cover, mu_total), section21)      # m2 x m21
    # F: projective cover of coker μ, lifted to M_{η2}
    img = el.image_basis(mu, f) if mu.shape[1] else f.zeros((m2.dim, 0))
    coker, cproj = quotient(m2, img)
    cov = projective_cover(coker)
    lifts = []
    for gi in range(cov.free.rank):
        y = cov.generators[:, gi]
        v = cov.free.gens[gi]
        cols = m2.vertex_indices(v)
        x = el.LinearSolver(cproj.matrix[:, cols], f).solve(y)
        full = f.zeros(m2.dim)
        full[cols] = x
        lifts.append(full)
    env = res.algebra
    found = False
    f_rank = list(cov.free.gens)
    rng = np.random.default_rng(seed)
    extra = 0
    kernel_dim = None
    while True:
        free = FreeModule(env, f_rank)
        imgs = np.stack(lifts, axis=1) if lifts else f.zeros((m2.dim, 0))
        fmap = free.map_to(m2, imgs)
        total = np.concatenate([mu, fmap], axis=1)
        src = direct_sum(m21, free.module())
        ker, _ = kernel_module(ModuleHom(src, m2, total))
        kernel_dim = ker.dim
        surj = el.rank(total, f) == m2.dim
        if surj:
            verdict, _ = iso_test(ker, omega, seed=seed)
            if verdict == Verdict.YES:
                found = True
                break
        if extra >= budget:
            break
        # grow F by one regular summand with a seeded random map
        v = extra % env.num_vertices
        f_rank.append(v)
        cols = m2.vertex_indices(v)
        x = f.zeros(m2.dim)
        if len(cols):
            x[cols] = f.random(rng, len(cols))
        lifts.append(x)
        extra += 1
    f_dim = FreeModule(env, f_rank).dim
    report.update({
        "found": found,
        "dim_M_product": m21.dim,
        "dim_F": f_dim,
        "dim_omega": omega.dim,
        "dim_M_eta2": m2.dim,
        "kernel_dim": kernel_dim,
        "dimension_identity": m21.dim + f_dim == omega.dim + m2.dim if found else
        m21.dim + f_dim == kernel_dim + m2.dim,
        "extra_summands": extra,
        "seed": seed,
    })
    return report
