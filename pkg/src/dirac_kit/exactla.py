"""Exact linear algebra over the rationals.

Subspaces of Q^n are stored as row spans in reduced row echelon form, so
equality of subspaces is equality of stored data.  Bilinear forms are
symmetric Gram matrices; orthogonal complements, isotropy classification
and signatures are computed exactly.  No floating point enters this module.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

Vec = tuple[Fraction, ...]
Mat = tuple[Vec, ...]


class DimensionMismatch(ValueError):
    pass


class DegenerateFormError(ValueError):
    pass


def frac(x) -> Fraction:
    """Coerce ints, strings like '2/3' and Fractions; reject floats."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError("not an exact scalar: %r" % (x,))


def vec(xs: Iterable) -> Vec:
    return tuple(frac(x) for x in xs)


def mat(rows: Iterable[Iterable]) -> Mat:
    return tuple(vec(r) for r in rows)


def zero_vec(n: int) -> Vec:
    return (Fraction(0),) * n


def identity_mat(n: int) -> Mat:
    return tuple(tuple(Fraction(1 if i == j else 0) for j in range(n)) for i in range(n))


def transpose(a: Sequence[Sequence[Fraction]]) -> Mat:
    if not a:
        return ()
    return tuple(tuple(row[j] for row in a) for j in range(len(a[0])))


def mat_mul(a, b) -> Mat:
    bt = transpose(b)
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def mat_vec(a, v) -> Vec:
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def vec_add(u, v) -> Vec:
    return tuple(x + y for x, y in zip(u, v))


def vec_sub(u, v) -> Vec:
    return tuple(x - y for x, y in zip(u, v))


def vec_scale(c, v) -> Vec:
    c = frac(c)
    return tuple(c * x for x in v)


def rref(rows: Iterable[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    work = [list(vec(r)) for r in rows]
    if not work:
        return [], []
    ncols = len(work[0])
    for r in work:
        if len(r) != ncols:
            raise DimensionMismatch("rows of unequal length")
    pivots: list[int] = []
    row = 0
    for col in range(ncols):
        piv = None
        for r in range(row, len(work)):
            if work[r][col] != 0:
                piv = r
                break
        if piv is None:
            continue
        work[row], work[piv] = work[piv], work[row]
        inv = Fraction(1) / work[row][col]
        work[row] = [x * inv for x in work[row]]
        for r in range(len(work)):
            if r != row and work[r][col] != 0:
                f = work[r][col]
                work[r] = [x - f * y for x, y in zip(work[r], work[row])]
        pivots.append(col)
        row += 1
        if row == len(work):
            break
    return [w for w in work[:row]], pivots


def rank(rows) -> int:
    return len(rref(rows)[0])


def kernel_basis(a: Sequence[Sequence[Fraction]], ncols: int | None = None) -> list[Vec]:
    """Basis of {x : a @ x = 0}, canonical via RREF free-variable vectors."""
    a = [list(vec(r)) for r in a]
    if ncols is None:
        if not a:
            raise ValueError("need ncols for an empty matrix")
        ncols = len(a[0])
    if not a:
        return [tuple(Fraction(1 if i == j else 0) for j in range(ncols)) for i in range(ncols)]
    red, pivots = rref(a)
    free = [j for j in range(ncols) if j not in pivots]
    basis = []
    for j in free:
        x = [Fraction(0)] * ncols
        x[j] = Fraction(1)
        for i, p in enumerate(pivots):
            x[p] = -red[i][j]
        basis.append(tuple(x))
    return basis


def solve(a, b) -> Vec | None:
    """One solution of a @ x = b, or None if inconsistent."""
    a = [list(vec(r)) for r in a]
    b = list(vec(b))
    if len(a) != len(b):
        raise DimensionMismatch("matrix/vector size mismatch")
    if not a:
        return ()
    ncols = len(a[0])
    aug = [row + [bb] for row, bb in zip(a, b)]
    red, pivots = rref(aug)
    for row in red:
        if all(x == 0 for x in row[:-1]) and row[-1] != 0:
            return None
    x = [Fraction(0)] * ncols
    for row, p in zip(red, pivots):
        if p == ncols:
            return None
        x[p] = row[-1]
    return tuple(x)


def invert(a) -> Mat:
    n = len(a)
    aug = [list(vec(r)) + list(identity_mat(n)[i]) for i, r in enumerate(a)]
    red, pivots = rref(aug)
    if pivots[:n] != list(range(n)) or len(red) < n:
        raise ValueError("matrix not invertible")
    return tuple(tuple(row[n:]) for row in red[:n])


class Subspace:
    """Row span of `basis` inside Q^ambient_dim, kept in RREF."""

    __slots__ = ("ambient_dim", "basis")

    def __init__(self, ambient_dim: int, rows: Iterable[Iterable] = ()):
        rows = [vec(r) for r in rows]
        for r in rows:
            if len(r) != ambient_dim:
                raise DimensionMismatch(
                    "vector of length %d in Q^%d" % (len(r), ambient_dim))
        red, _ = rref(rows) if rows else ([], [])
        self.ambient_dim = ambient_dim
        self.basis: Mat = tuple(tuple(r) for r in red)

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(n, ())

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(n, identity_mat(n))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, v) -> bool:
        v = vec(v)
        if len(v) != self.ambient_dim:
            raise DimensionMismatch("vector/ambient mismatch")
        red, _ = rref(list(self.basis) + [v])
        return len(red) == self.dim

    def contains_subspace(self, other: "Subspace") -> bool:
        return all(self.contains(b) for b in other.basis)

    def annihilator(self) -> list[Vec]:
        """Rows y with basis @ y = 0; v in self iff y . v = 0 for all such y."""
        if self.dim == 0:
            return list(identity_mat(self.ambient_dim))
        return kernel_basis(self.basis, self.ambient_dim)

    def intersect(self, other: "Subspace") -> "Subspace":
        if self.ambient_dim != other.ambient_dim:
            raise DimensionMismatch("ambient dimensions differ")
        conditions = self.annihilator() + other.annihilator()
        return Subspace(self.ambient_dim, kernel_basis(conditions, self.ambient_dim))

    def join(self, other: "Subspace") -> "Subspace":
        if self.ambient_dim != other.ambient_dim:
            raise DimensionMismatch("ambient dimensions differ")
        return Subspace(self.ambient_dim, list(self.basis) + list(other.basis))

    def image(self, m) -> "Subspace":
        """Image under v -> m @ v (columns of m indexed by self's ambient)."""
        m = mat(m)
        out_dim = len(m)
        return Subspace(out_dim, [mat_vec(m, b) for b in self.basis])

    def preimage(self, m) -> "Subspace":
        """{x : m @ x in self}; m maps Q^k into Q^ambient_dim."""
        m = mat(m)
        k = len(m[0]) if m else 0
        conditions = [mat_vec(transpose(m), y) for y in self.annihilator()]
        if not conditions:
            return Subspace.full(k)
        return Subspace(k, kernel_basis(conditions, k))

    def project(self, coords: Sequence[int]) -> "Subspace":
        """Forget all coordinates except `coords` (in the given order)."""
        return Subspace(len(coords), [tuple(b[i] for i in coords) for b in self.basis])

    def direct_sum(self, other: "Subspace") -> "Subspace":
        n, m = self.ambient_dim, other.ambient_dim
        rows = [tuple(b) + zero_vec(m) for b in self.basis]
        rows += [zero_vec(n) + tuple(b) for b in other.basis]
        return Subspace(n + m, rows)

    def to_data(self) -> dict:
        return {
            "ambient_dim": self.ambient_dim,
            "basis": [[str(x) for x in row] for row in self.basis],
        }

    @classmethod
    def from_data(cls, data: dict) -> "Subspace":
        return cls(int(data["ambient_dim"]), data.get("basis", []))

    def __eq__(self, other) -> bool:
        return (isinstance(other, Subspace)
                and self.ambient_dim == other.ambient_dim
                and self.basis == other.basis)

    def __hash__(self) -> int:
        return hash((self.ambient_dim, self.basis))

    def __repr__(self) -> str:
        return "Subspace(dim=%d, ambient=%d)" % (self.dim, self.ambient_dim)


def canonicalize(rows: Iterable[Iterable]) -> Subspace:
    rows = [vec(r) for r in rows]
    if not rows:
        raise ValueError("cannot infer ambient dimension from no rows; use Subspace.zero")
    return Subspace(len(rows[0]), rows)


def meet_join(a: Subspace, b: Subspace) -> tuple[Subspace, Subspace]:
    return a.intersect(b), a.join(b)


class QForm:
    """Symmetric bilinear form on Q^dim with cached rank certificate."""

    __slots__ = ("dim", "gram", "_rank")

    def __init__(self, gram: Iterable[Iterable]):
        g = mat(gram)
        n = len(g)
        for row in g:
            if len(row) != n:
                raise DimensionMismatch("gram matrix not square")
        if transpose(g) != g:
            raise ValueError("gram matrix not symmetric")
        self.dim = n
        self.gram = g
        self._rank = rank(g)

    @classmethod
    def standard(cls, n: int) -> "QForm":
        return cls(identity_mat(n))

    @classmethod
    def hyperbolic(cls, n: int) -> "QForm":
        """Split form on Q^2n pairing the first n coordinates with the last n."""
        g = [[Fraction(0)] * (2 * n) for _ in range(2 * n)]
        for i in range(n):
            g[i][n + i] = Fraction(1)
            g[n + i][i] = Fraction(1)
        return cls(g)

    def pair(self, u, v) -> Fraction:
        u, v = vec(u), vec(v)
        if len(u) != self.dim or len(v) != self.dim:
            raise DimensionMismatch("vector/form mismatch")
        return sum(u[i] * self.gram[i][j] * v[j] for i in range(self.dim) for j in range(self.dim))

    @property
    def is_nondegenerate(self) -> bool:
        return self._rank == self.dim

    def negated(self) -> "QForm":
        return QForm([[-x for x in row] for row in self.gram])

    def direct_sum(self, other: "QForm") -> "QForm":
        n, m = self.dim, other.dim
        g = [[Fraction(0)] * (n + m) for _ in range(n + m)]
        for i in range(n):
            for j in range(n):
                g[i][j] = self.gram[i][j]
        for i in range(m):
            for j in range(m):
                g[n + i][n + j] = other.gram[i][j]
        return QForm(g)

    def signature(self) -> tuple[int, int, int]:
        """(positive, negative, null) inertia via exact symmetric reduction."""
        n = self.dim
        a = [list(row) for row in self.gram]
        pos = neg = 0
        for i in range(n):
            if a[i][i] == 0:
                swapped = False
                for j in range(i + 1, n):
                    if a[j][j] != 0:
                        a[i], a[j] = a[j], a[i]
                        for row in a:
                            row[i], row[j] = row[j], row[i]
                        swapped = True
                        break
                if not swapped:
                    for j in range(i + 1, n):
                        if a[i][j] != 0:
                            # symmetric row+col addition makes the pivot 2*a[i][j]
                            for k in range(n):
                                a[i][k] += a[j][k]
                            for row in a:
                                row[i] += row[j]
                            break
            p = a[i][i]
            if p == 0:
                continue
            for j in range(i + 1, n):
                f = a[j][i] / p
                if f != 0:
                    for k in range(n):
                        a[j][k] -= f * a[i][k]
                    for row in a:
                        row[j] -= f * row[i]
            if p > 0:
                pos += 1
            else:
                neg += 1
        return pos, neg, n - pos - neg

    def to_data(self) -> dict:
        return {"dim": self.dim, "gram": [[str(x) for x in row] for row in self.gram]}

    @classmethod
    def from_data(cls, data: dict) -> "QForm":
        return cls(data["gram"])

    def __eq__(self, other) -> bool:
        return isinstance(other, QForm) and self.gram == other.gram

    def __repr__(self) -> str:
        return "QForm(dim=%d, rank=%d)" % (self.dim, self._rank)


def orth_complement(w: Subspace, q: QForm) -> Subspace:
    """{v : q(b, v) = 0 for all b in w}, computed through the Gram matrix."""
    if q.dim != w.ambient_dim:
        raise DimensionMismatch("form/ambient mismatch")
    if w.dim == 0:
        return Subspace.full(q.dim)
    conditions = [mat_vec(q.gram, b) for b in w.basis]
    return Subspace(q.dim, kernel_basis(conditions, q.dim))


def is_isotropic(w: Subspace, q: QForm) -> bool:
    return all(q.pair(b1, b2) == 0 for b1 in w.basis for b2 in w.basis)


def lagrangian_class(w: Subspace, q: QForm) -> str:
    """One of 'isotropic', 'coisotropic', 'lagrangian', 'none'.

    Undefined for degenerate forms: those raise DegenerateFormError.
    """
    if q.dim != w.ambient_dim:
        raise DimensionMismatch("form/ambient mismatch")
    if not q.is_nondegenerate:
        raise DegenerateFormError("classification requires a nondegenerate form")
    perp = orth_complement(w, q)
    iso = perp.contains_subspace(w)
    coiso = w.contains_subspace(perp)
    if iso and coiso:
        return "lagrangian"
    if iso:
        return "isotropic"
    if coiso:
        return "coisotropic"
    return "none"
