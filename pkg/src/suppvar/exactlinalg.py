"""Exact dense linear algebra over prime fields and the rationals.

Matrices are numpy arrays.  Over GF(p) they are int64 arrays with entries
in [0, p); over Q they are object arrays of ``fractions.Fraction``.
Subspaces are handed around as matrices whose *columns* form a basis in
canonical form (the transpose of a reduced row-echelon matrix), so two
subspaces are equal exactly when their bases are equal arrays.
"""

from fractions import Fraction

import numpy as np

_INT64_HEADROOM = 2**62


class DimensionError(ValueError):
    pass


def _is_prime(n):
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class PrimeField:
    """The field GF(p), p prime and at most 2**31."""

    exact_rational = False

    def __init__(self, p):
        p = int(p)
        if not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        if p > 2**31:
            raise ValueError("prime fields are limited to p <= 2**31")
        self.p = p
        self.characteristic = p
        self.dtype = np.int64
        self.one = 1
        self.zero = 0

    @property
    def tag(self):
        return f"GF({self.p})"

    def __repr__(self):
        return self.tag

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def __call__(self, x):
        if isinstance(x, Fraction):
            return self.div(x.numerator % self.p, x.denominator % self.p)
        return int(x) % self.p

    def reduce(self, a):
        return np.mod(a, self.p)

    def array(self, data):
        a = np.array(data, dtype=object) if not isinstance(data, np.ndarray) else data
        if a.dtype == object:
            out = np.empty(a.shape, dtype=np.int64)
            flat = out.reshape(-1)
            for i, x in enumerate(a.reshape(-1)):
                flat[i] = self(x)
            return out
        return np.mod(a.astype(np.int64, copy=False), self.p)

    def zeros(self, shape):
        return np.zeros(shape, dtype=np.int64)

    def eye(self, n):
        return np.eye(n, dtype=np.int64)

    def inv(self, x):
        x = int(x) % self.p
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(x, self.p - 2, self.p)

    def div(self, a, b):
        return (int(a) * self.inv(b)) % self.p

    def neg(self, a):
        return np.mod(-a, self.p)

    def scale(self, a, c):
        return np.mod(a * (int(c) % self.p), self.p)

    def add(self, a, b):
        return np.mod(a + b, self.p)

    def sub(self, a, b):
        return np.mod(a - b, self.p)

    def _safe_inner(self):
        return max(1, _INT64_HEADROOM // max(1, (self.p - 1) ** 2))

    def matmul(self, a, b):
        a = np.asarray(a)
        b = np.asarray(b)
        k = a.shape[-1]
        step = self._safe_inner()
        if k <= step:
            return np.mod(a @ b, self.p)
        if step < 4:
            out = (a.astype(object) @ b.astype(object)) % self.p
            return out.astype(np.int64)
        acc = np.zeros(a.shape[:-1] + b.shape[1:], dtype=np.int64)
        for lo in range(0, k, step):
            acc = np.mod(acc + np.mod(a[..., lo:lo + step] @ b[lo:lo + step], self.p), self.p)
        return acc

    def tensordot(self, a, b, axes):
        # contracted length bounds the accumulated size
        if isinstance(axes, int):
            k = int(np.prod(a.shape[len(a.shape) - axes:])) if axes else 1
        else:
            k = int(np.prod([a.shape[i] for i in axes[0]])) if len(axes[0]) else 1
        if k <= self._safe_inner():
            return np.mod(np.tensordot(a, b, axes=axes), self.p)
        out = np.tensordot(a.astype(object), b.astype(object), axes=axes) % self.p
        return out.astype(np.int64)

    def is_zero(self, a):
        return not np.any(a)

    def random(self, rng, shape):
        return rng.integers(0, self.p, size=shape, dtype=np.int64)

    def elements(self):
        return range(self.p)

    def to_json(self, x):
        return int(x)

    def to_fraction(self, x):
        return Fraction(int(x))


class RationalField:
    """The rationals, with Fraction entries in object arrays."""

    exact_rational = True
    characteristic = 0
    tag = "QQ"

    def __init__(self):
        self.dtype = object
        self.one = Fraction(1)
        self.zero = Fraction(0)

    def __repr__(self):
        return self.tag

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")

    def __call__(self, x):
        return Fraction(x)

    def reduce(self, a):
        return a

    def array(self, data):
        a = np.array(data, dtype=object)
        flat = a.reshape(-1)
        for i, x in enumerate(flat):
            flat[i] = Fraction(x)
        return a

    def zeros(self, shape):
        out = np.empty(shape, dtype=object)
        out.fill(Fraction(0))
        return out

    def eye(self, n):
        out = self.zeros((n, n))
        for i in range(n):
            out[i, i] = Fraction(1)
        return out

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / Fraction(x)

    def div(self, a, b):
        return Fraction(a) / Fraction(b)

    def neg(self, a):
        return -a

    def scale(self, a, c):
        return a * Fraction(c)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def matmul(self, a, b):
        a = np.asarray(a, dtype=object)
        b = np.asarray(b, dtype=object)
        if a.shape[-1] == 0:
            return self.zeros(a.shape[:-1] + b.shape[1:])
        return a @ b

    def tensordot(self, a, b, axes):
        out = np.tensordot(np.asarray(a, dtype=object), np.asarray(b, dtype=object), axes=axes)
        if out.dtype != object:
            out = out.astype(object)
        if out.size and not isinstance(out.flat[0], Fraction):
            out = self.array(out)
        return out

    def is_zero(self, a):
        return all(x == 0 for x in np.asarray(a).reshape(-1))

    def random(self, rng, shape):
        vals = rng.integers(-3, 4, size=shape)
        return self.array(vals)

    def elements(self):
        raise ValueError("QQ is infinite")

    def to_json(self, x):
        x = Fraction(x)
        if x.denominator == 1:
            return int(x.numerator)
        return f"{x.numerator}/{x.denominator}"

    def to_fraction(self, x):
        return Fraction(x)


QQ = RationalField()


def GF(p):
    return PrimeField(p)


def parse_field(text):
    """'2', 'GF(5)', 'F7', 'QQ', 'Q' -> field."""
    if isinstance(text, (PrimeField, RationalField)):
        return text
    if isinstance(text, int):
        return GF(text)
    t = str(text).strip().upper().replace(" ", "")
    if t in ("Q", "QQ", "RATIONALS", "0"):
        return QQ
    for prefix in ("GF(", "F_", "F", "GF"):
        if t.startswith(prefix):
            t = t[len(prefix):]
            break
    t = t.rstrip(")")
    return GF(int(t))


def nonzero_mask(a):
    return np.asarray(a) != 0


def rref(m, field):
    """Reduced row-echelon form: (matrix, pivot columns, rank)."""
    a = field.array(m).copy() if not isinstance(m, np.ndarray) or m.dtype != field.dtype else m.copy()
    if a.ndim != 2:
        raise DimensionError("rref needs a 2-d matrix")
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c] != 0)
        if len(nz) == 0:
            continue
        i = r + nz[0]
        if i != r:
            a[[r, i]] = a[[i, r]]
        piv = a[r, c]
        if piv != 1:
            a[r, c:] = field.scale(a[r, c:], field.inv(piv))
        col = a[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col != 0)
        if len(hit):
            upd = field.reduce(np.outer(col[hit], a[r, c:]))
            a[np.ix_(hit, np.arange(c, cols))] = field.sub(a[np.ix_(hit, np.arange(c, cols))], upd)
        pivots.append(c)
        r += 1
    return a, pivots, r


def rank(m, field):
    m = np.asarray(m)
    if m.size == 0:
        return 0
    return rref(m, field)[2]


def _as2d(a, field, rows=None):
    a = np.asarray(a)
    if a.ndim == 1:
        a = a.reshape(-1, 1)
    if a.dtype != field.dtype:
        a = field.array(a)
    return a


def solve_right(a, b, field):
    """Solve a x = b.  Returns (particular or None, kernel basis columns)."""
    a = _as2d(a, field)
    b = _as2d(b, field)
    if a.shape[0] != b.shape[0]:
        raise DimensionError(f"row mismatch {a.shape} vs {b.shape}")
    n = a.shape[1]
    aug = np.concatenate([a, b], axis=1)
    r, piv, rk = rref(aug, field)
    kernel = _kernel_from_rref(r[:, :n], [p for p in piv if p < n], n, field)
    if any(p >= n for p in piv):
        return None, kernel
    x = field.zeros((n, b.shape[1]))
    for i, p in enumerate(piv):
        x[p] = r[i, n:]
    return x, kernel


def _kernel_from_rref(r, piv, n, field):
    free = [c for c in range(n) if c not in set(piv)]
    k = field.zeros((n, len(free)))
    for j, f in enumerate(free):
        k[f, j] = field.one
        for i, p in enumerate(piv):
            if r[i, f] != 0:
                k[p, j] = field.neg(r[i, f])
    return canonical_basis(k, field)


def canonical_basis(cols, field):
    """Canonical column basis of the span of the given columns."""
    cols = _as2d(cols, field)
    n = cols.shape[0]
    if cols.shape[1] == 0:
        return field.zeros((n, 0))
    r, piv, rk = rref(cols.T, field)
    return np.ascontiguousarray(r[:rk].T)


def kernel_basis(a, field):
    a = _as2d(a, field)
    n = a.shape[1]
    if a.shape[0] == 0:
        return field.eye(n)
    r, piv, rk = rref(a, field)
    return _kernel_from_rref(r, piv, n, field)


def image_basis(a, field):
    return canonical_basis(a, field)


def subspace_sum(u, v, field):
    u = _as2d(u, field)
    v = _as2d(v, field)
    if u.shape[0] != v.shape[0]:
        raise DimensionError("ambient dimensions differ")
    return canonical_basis(np.concatenate([u, v], axis=1), field)


def subspace_intersect(u, v, field):
    u = _as2d(u, field)
    v = _as2d(v, field)
    if u.shape[0] != v.shape[0]:
        raise DimensionError("ambient dimensions differ")
    if u.shape[1] == 0 or v.shape[1] == 0:
        return field.zeros((u.shape[0], 0))
    u = canonical_basis(u, field)
    v = canonical_basis(v, field)
    k = kernel_basis(np.concatenate([u, field.neg(v)], axis=1), field)
    return canonical_basis(field.matmul(u, k[:u.shape[1]]), field)


def pivot_rows(basis):
    """Row index of the leading entry of each canonical basis column."""
    out = []
    for j in range(basis.shape[1]):
        out.append(int(np.flatnonzero(basis[:, j] != 0)[0]))
    return out


def in_span(basis, vecs, field):
    """True when every column of vecs lies in the column span of basis."""
    vecs = _as2d(vecs, field)
    if basis.shape[1] == 0:
        return field.is_zero(vecs)
    x, _ = solve_right(basis, vecs, field)
    return x is not None


def inverse(a, field):
    a = _as2d(a, field)
    n = a.shape[0]
    if a.shape != (n, n):
        raise DimensionError("inverse of a non-square matrix")
    r, piv, rk = rref(np.concatenate([a, field.eye(n)], axis=1), field)
    if rk < n or piv[n - 1] >= n:
        raise ZeroDivisionError("singular matrix")
    return r[:, n:]


def is_invertible(a, field):
    a = np.asarray(a)
    return a.shape[0] == a.shape[1] and rank(a, field) == a.shape[0]


class LinearSolver:
    """Precomputed solver for a x = y with a fixed.

    ``solve`` returns the particular solution with free variables set to
    zero, or None when some column of y is not in the column space.
    """

    def __init__(self, a, field):
        a = _as2d(a, field)
        self.field = field
        self.shape = a.shape
        m, n = a.shape
        r, piv, rk = rref(np.concatenate([a, field.eye(m)], axis=1), field)
        self.pivots = [p for p in piv if p < n]
        self.rank = len(self.pivots)
        self.transform = r[:, n:]

    def solve(self, y):
        field = self.field
        y = np.asarray(y)
        vec = y.ndim == 1
        y = _as2d(y, field)
        z = field.matmul(self.transform, y)
        if np.any(z[self.rank:] != 0):
            return None
        x = field.zeros((self.shape[1], y.shape[1]))
        x[self.pivots] = z[:self.rank]
        return x[:, 0] if vec else x


class Echelon:
    """Incrementally grown reduced row-echelon basis of row vectors."""

    def __init__(self, n, field):
        self.n = n
        self.field = field
        self.rows = field.zeros((0, n))
        self.pivots = []

    def __len__(self):
        return len(self.pivots)

    def reduce(self, v):
        field = self.field
        v = field.array(v) if not isinstance(v, np.ndarray) or v.dtype != field.dtype else v
        if not self.pivots:
            return v.copy()
        c = v[self.pivots]
        return field.sub(v, field.matmul(c.reshape(1, -1), self.rows)[0])

    def contains(self, v):
        return not np.any(self.reduce(v) != 0)

    def add(self, v):
        """Add v; return True when it was independent."""
        field = self.field
        w = self.reduce(v)
        nz = np.flatnonzero(w != 0)
        if len(nz) == 0:
            return False
        p = int(nz[0])
        w = field.scale(w, field.inv(w[p]))
        if len(self.pivots):
            col = self.rows[:, p].copy()
            hit = np.flatnonzero(col != 0)
            if len(hit):
                self.rows[hit] = field.sub(self.rows[hit], field.reduce(np.outer(col[hit], w)))
        order = int(np.searchsorted(self.pivots, p))
        self.rows = np.insert(self.rows, order, w, axis=0)
        self.pivots.insert(order, p)
        return True


def charpoly(a, field):
    """Characteristic polynomial coefficients, highest degree first (monic).

    Reduces to upper Hessenberg form by similarity, then runs the standard
    determinant recurrence on the Hessenberg matrix.
    """
    h = _as2d(a, field).copy()
    n = h.shape[0]
    for j in range(n - 2):
        col = h[j + 1:, j]
        nz = np.flatnonzero(col != 0)
        if len(nz) == 0:
            continue
        i = j + 1 + nz[0]
        if i != j + 1:
            h[[i, j + 1]] = h[[j + 1, i]]
            h[:, [i, j + 1]] = h[:, [j + 1, i]]
        inv = field.inv(h[j + 1, j])
        for r in range(j + 2, n):
            if h[r, j] == 0:
                continue
            f = field.reduce(h[r, j] * inv) if not field.exact_rational else h[r, j] * inv
            h[r] = field.sub(h[r], field.scale(h[j + 1], f))
            h[:, j + 1] = field.add(h[:, j + 1], field.scale(h[:, r], f))
    # p[k] = charpoly of leading k x k block, coefficients low -> high
    polys = [[field.one]]
    for k in range(1, n + 1):
        prev = polys[k - 1]
        cur = [field.zero] + list(prev)
        d = h[k - 1, k - 1]
        for i, c in enumerate(prev):
            cur[i] = _f(field, cur[i] - d * c)
        prod = field.one
        for i in range(1, k):
            prod = _f(field, prod * h[k - i, k - i - 1])
            coef = _f(field, prod * h[k - i - 1, k - 1])
            if coef == 0:
                continue
            for t, c in enumerate(polys[k - i - 1]):
                cur[t] = _f(field, cur[t] - coef * c)
        polys.append(cur)
    return [polys[n][i] for i in range(n, -1, -1)]


def _f(field, x):
    return x % field.p if not field.exact_rational else Fraction(x)


def poly_eval_matrix(coeffs, a, field):
    """Evaluate a polynomial (highest degree first) at a square matrix."""
    a = _as2d(a, field)
    n = a.shape[0]
    out = field.zeros((n, n))
    eye = field.eye(n)
    for c in coeffs:
        out = field.add(field.matmul(out, a), field.scale(eye, c))
    return out


def factor_poly(coeffs, field):
    """Factor a polynomial (highest degree first) into monic irreducibles.

    Returns a list of (factor coefficients, multiplicity).
    """
    import sympy

    x = sympy.Symbol("x")
    if field.exact_rational:
        poly = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in coeffs], x, domain="QQ")
        _, facs = poly.factor_list()
        out = []
        for f, e in facs:
            f = f.monic()
            out.append(([Fraction(int(c.p), int(c.q)) for c in f.all_coeffs()], e))
        return sorted(out, key=lambda t: (len(t[0]), t[0]))
    poly = sympy.Poly([int(c) for c in coeffs], x, modulus=field.p)
    _, facs = poly.factor_list()
    out = []
    for f, e in facs:
        cs = [int(c) % field.p for c in f.all_coeffs()]
        lead = cs[0]
        if lead != 1:
            inv = field.inv(lead)
            cs = [(c * inv) % field.p for c in cs]
        out.append((cs, e))
    return sorted(out, key=lambda t: (len(t[0]), t[0]))


def matrix_power(a, k, field):
    a = _as2d(a, field)
    out = field.eye(a.shape[0])
    base = a
    while k:
        if k & 1:
            out = field.matmul(out, base)
        base = field.matmul(base, base)
        k >>= 1
    return out


def block_diag(blocks, field):
    rows = sum(b.shape[0] for b in blocks)
    cols = sum(b.shape[1] for b in blocks)
    out = field.zeros((rows, cols))
    r = c = 0
    for b in blocks:
        out[r:r + b.shape[0], c:c + b.shape[1]] = b
        r += b.shape[0]
        c += b.shape[1]
    return out
