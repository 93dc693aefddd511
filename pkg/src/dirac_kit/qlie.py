"""Quadratic Lie algebras by structure constants, Manin pairs and quasi
triples, Lie quasi-bialgebras, Drinfeld doubles, and the example catalog.

Bracket convention: on every matrix-built catalog algebra the bracket is the
one induced by right-invariant vector fields, [u, v] = vu - uv as matrices;
abstract algebras carry whatever structure constants they are given.  The
identification g = g* is always made through the stored Gram matrix.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .exactla import (DimensionMismatch, QForm, Subspace, frac, identity_mat,
                      invert, is_isotropic, kernel_basis, lagrangian_class,
                      mat, mat_mul, mat_vec, orth_complement, transpose, vec,
                      vec_add, vec_scale, zero_vec)

Vec = tuple[Fraction, ...]


class InvalidStructure(ValueError):
    """Raised when inputs fail a structural axiom; carries a witness."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class LieAlgebra:
    """Plain Lie algebra over Q given by basis structure constants."""

    def __init__(self, dim: int, brackets: dict[tuple[int, int], Sequence]):
        self.dim = dim
        table: dict[tuple[int, int], Vec] = {}
        for (i, j), coeffs in brackets.items():
            v = vec(coeffs)
            if len(v) != dim:
                raise DimensionMismatch("bracket coefficients of wrong length")
            table[(i, j)] = v
        self.table = table

    def bracket_basis(self, i: int, j: int) -> Vec:
        if i == j:
            return zero_vec(self.dim)
        if (i, j) in self.table:
            return self.table[(i, j)]
        if (j, i) in self.table:
            return vec_scale(-1, self.table[(j, i)])
        return zero_vec(self.dim)

    def bracket(self, u, v) -> Vec:
        u, v = vec(u), vec(v)
        out = zero_vec(self.dim)
        for i, a in enumerate(u):
            if a == 0:
                continue
            for j, b in enumerate(v):
                if b == 0:
                    continue
                out = vec_add(out, vec_scale(a * b, self.bracket_basis(i, j)))
        return out

    def jacobi_defect(self) -> tuple[tuple[int, int, int], Vec] | None:
        """First violating basis triple of the Jacobi identity, if any."""
        n = self.dim
        for i in range(n):
            for j in range(i + 1, n):
                for k in range(j + 1, n):
                    ei = tuple(Fraction(1 if t == i else 0) for t in range(n))
                    ej = tuple(Fraction(1 if t == j else 0) for t in range(n))
                    ek = tuple(Fraction(1 if t == k else 0) for t in range(n))
                    s = self.bracket(ei, self.bracket(ej, ek))
                    s = vec_add(s, self.bracket(ej, self.bracket(ek, ei)))
                    s = vec_add(s, self.bracket(ek, self.bracket(ei, ej)))
                    if any(x != 0 for x in s):
                        return (i, j, k), s
        return None

    def to_data(self) -> dict:
        rows = []
        for (i, j), v in sorted(self.table.items()):
            for k, c in enumerate(v):
                if c != 0:
                    rows.append([i, j, k, str(c)])
        return {"dim": self.dim, "brackets": rows}

    @classmethod
    def from_data(cls, data: dict) -> "LieAlgebra":
        dim = int(data["dim"])
        table: dict[tuple[int, int], list] = {}
        for i, j, k, c in data.get("brackets", []):
            row = table.setdefault((int(i), int(j)), [Fraction(0)] * dim)
            row[int(k)] += frac(c)
        return cls(dim, table)


class QuadLieAlgebra(LieAlgebra):
    """Lie algebra with an ad-invariant symmetric nondegenerate pairing."""

    def __init__(self, dim: int, brackets: dict[tuple[int, int], Sequence], gram):
        super().__init__(dim, brackets)
        self.gram = gram if isinstance(gram, QForm) else QForm(gram)
        if self.gram.dim != dim:
            raise DimensionMismatch("gram/algebra dimension mismatch")

    @classmethod
    def from_matrices(cls, basis: Sequence, pairing: Callable | None = None) -> "QuadLieAlgebra":
        """Build from n x n rational matrices with [u,v] = vu - uv and the
        trace form (or a supplied pairing)."""
        basis = [mat(b) for b in basis]
        dim = len(basis)
        flat = [tuple(x for row in b for x in row) for b in basis]
        if pairing is None:
            pairing = lambda a, b: sum(mat_mul(a, b)[i][i] for i in range(len(a)))
        table = {}
        for i in range(dim):
            for j in range(i + 1, dim):
                m = mat_mul(basis[j], basis[i])
                m2 = mat_mul(basis[i], basis[j])
                br = tuple(x - y for x, y in
                           zip((c for row in m for c in row), (c for row in m2 for c in row)))
                coeffs = _coords_in_span(flat, br)
                if coeffs is None:
                    raise InvalidStructure("matrix basis not closed under bracket", (i, j))
                table[(i, j)] = coeffs
        gram = [[pairing(basis[i], basis[j]) for j in range(dim)] for i in range(dim)]
        out = cls(dim, table, gram)
        out.matrix_basis = basis
        return out

    def pair(self, u, v) -> Fraction:
        return self.gram.pair(u, v)

    def coalgebra_vector(self, xi) -> Vec:
        """Inverse-Gram raise: the v with <v, .> = xi."""
        return mat_vec(invert(self.gram.gram), vec(xi))

    def dual_coords(self, v) -> Vec:
        """<v, .> as a covector in the basis dual to the algebra basis."""
        return mat_vec(self.gram.gram, vec(v))

    def negated(self) -> "QuadLieAlgebra":
        return QuadLieAlgebra(self.dim, dict(self.table), self.gram.negated())

    def direct_sum(self, other: "QuadLieAlgebra") -> "QuadLieAlgebra":
        n, m = self.dim, other.dim
        table: dict[tuple[int, int], Vec] = {}
        for (i, j), v in self.table.items():
            table[(i, j)] = tuple(v) + zero_vec(m)
        for (i, j), v in other.table.items():
            table[(n + i, n + j)] = zero_vec(n) + tuple(v)
        return QuadLieAlgebra(n + m, table, self.gram.direct_sum(other.gram))

    def is_subalgebra(self, w: Subspace) -> bool:
        for b1 in w.basis:
            for b2 in w.basis:
                if not w.contains(self.bracket(b1, b2)):
                    return False
        return True

    def ad_invariance_defect(self) -> tuple[tuple[int, int, int], Fraction] | None:
        n = self.dim
        basis = identity_mat(n)
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    val = (self.pair(self.bracket(basis[i], basis[j]), basis[k])
                           + self.pair(basis[j], self.bracket(basis[i], basis[k])))
                    if val != 0:
                        return (i, j, k), val
        return None

    def to_data(self) -> dict:
        data = super().to_data()
        data["gram"] = [[str(x) for x in row] for row in self.gram.gram]
        return data

    @classmethod
    def from_data(cls, data: dict) -> "QuadLieAlgebra":
        base = LieAlgebra.from_data(data)
        return cls(base.dim, base.table, data["gram"])


def _coords_in_span(span_vectors: Sequence[Vec], target: Vec) -> Vec | None:
    cols = transpose(span_vectors)
    from .exactla import solve
    return solve(cols, target)


def verify_quadratic(g: QuadLieAlgebra) -> dict:
    """Report antisymmetry, Jacobi, symmetry, nondegeneracy, ad-invariance
    and the exact signature.  Failures are entries, not exceptions."""
    report: dict = {"antisymmetry": True}
    jac = g.jacobi_defect()
    report["jacobi"] = jac is None
    if jac:
        report["jacobi_witness"] = {"triple": jac[0], "defect": [str(x) for x in jac[1]]}
    report["gram_symmetric"] = True  # enforced by QForm construction
    report["nondegenerate"] = g.gram.is_nondegenerate
    adinv = g.ad_invariance_defect()
    report["ad_invariant"] = adinv is None
    if adinv:
        report["ad_invariance_witness"] = {"triple": adinv[0], "value": str(adinv[1])}
    report["signature"] = g.gram.signature()
    report["pass"] = all(report[k] for k in
                         ("antisymmetry", "jacobi", "gram_symmetric",
                          "nondegenerate", "ad_invariant"))
    return report


class ManinPair:
    def __init__(self, algebra: QuadLieAlgebra, lag: Subspace):
        if lag.ambient_dim != algebra.dim:
            raise DimensionMismatch("subspace/ambient mismatch")
        if lagrangian_class(lag, algebra.gram) != "lagrangian":
            raise InvalidStructure("subspace is not lagrangian")
        if not algebra.is_subalgebra(lag):
            raise InvalidStructure("lagrangian subspace is not a subalgebra")
        self.algebra = algebra
        self.lag = lag


class QuasiManinTriple(ManinPair):
    def __init__(self, algebra: QuadLieAlgebra, lag: Subspace, complement: Subspace):
        super().__init__(algebra, lag)
        if not is_isotropic(complement, algebra.gram):
            raise InvalidStructure("complement is not isotropic")
        if lag.intersect(complement).dim != 0 or lag.join(complement).dim != algebra.dim:
            raise InvalidStructure("complement is not complementary to the lagrangian")
        self.complement = complement


class LieQuasiBialgebra:
    """(g, F, chi): cobracket F: g -> wedge^2 g and trivector chi in wedge^3 g.

    F is stored as F[i] = antisymmetric matrix of F(e_i); chi as a dict over
    sorted index triples.
    """

    def __init__(self, base: LieAlgebra, F: Sequence[Sequence[Sequence]],
                 chi: dict[tuple[int, int, int], Fraction]):
        self.base = base
        n = base.dim
        self.F = [mat(m) for m in F]
        if len(self.F) != n:
            raise DimensionMismatch("need one cobracket matrix per basis vector")
        for m in self.F:
            if len(m) != n or transpose(m) != tuple(tuple(-x for x in row) for row in m):
                raise InvalidStructure("cobracket values must be antisymmetric matrices")
        self.chi = {tuple(k): frac(v) for k, v in chi.items() if frac(v) != 0}
        for k in self.chi:
            if len(k) != 3 or not (0 <= k[0] < k[1] < k[2] < n):
                raise DimensionMismatch("chi indexed by sorted triples")

    @property
    def dim(self) -> int:
        return self.base.dim

    def chi_eval(self, a: int, b: int, c: int) -> Fraction:
        """chi on basis covectors e_a*, e_b*, e_c* (determinant convention)."""
        idx = (a, b, c)
        perm = tuple(sorted(idx))
        if len(set(idx)) != 3:
            return Fraction(0)
        inv = sum(1 for s in range(3) for t in range(s + 1, 3) if idx[s] > idx[t])
        val = self.chi.get(perm, Fraction(0))
        return -val if inv % 2 else val

    def equal_data(self, other: "LieQuasiBialgebra") -> bool:
        if self.dim != other.dim:
            return False
        for i in range(self.dim):
            for j in range(self.dim):
                if self.base.bracket_basis(i, j) != other.base.bracket_basis(i, j):
                    return False
        if any(self.F[i] != other.F[i] for i in range(self.dim)):
            return False
        return self.chi == other.chi


def drinfeld_double(b: LieQuasiBialgebra) -> QuadLieAlgebra:
    """Double g + g* with the canonical pairing; raises InvalidStructure with
    the violating triple if the result fails Jacobi."""
    n = b.dim
    N = 2 * n

    def ad_star(i: int, xi: Vec) -> Vec:
        # (ad*_u xi)(v) = -xi([u, v])
        return tuple(-sum(xi[k] * b.base.bracket_basis(i, j)[k] for k in range(n))
                     for j in range(n))

    table: dict[tuple[int, int], Vec] = {}
    for i in range(N):
        for j in range(i + 1, N):
            g_part = [Fraction(0)] * n
            s_part = [Fraction(0)] * n
            if i < n and j < n:
                g_part = list(b.base.bracket_basis(i, j))
            elif i < n <= j:
                # [e_i, eps_b] = i_eps F(e_i) + ad*_i eps_b, with the
                # first-slot contraction (i_xi F)(.) = F(xi, .); the sign is
                # pinned by ad-invariance against the extraction convention
                # F(e)(xi1, xi2) = <[xi1, xi2], e> of the inverse operation
                bb = j - n
                for k in range(n):
                    g_part[k] += b.F[i][bb][k]
                eps = tuple(Fraction(1 if t == bb else 0) for t in range(n))
                s_part = list(ad_star(i, eps))
            else:
                # [eps_a, eps_b] = i_b i_a chi + F*(a, b),  F*(a,b)(v) = F(v)(a,b)
                a, bb = i - n, j - n
                for k in range(n):
                    g_part[k] = b.chi_eval(a, bb, k)
                for v in range(n):
                    s_part[v] = b.F[v][a][bb]
            table[(i, j)] = tuple(g_part) + tuple(s_part)

    gram = [[Fraction(0)] * N for _ in range(N)]
    for i in range(n):
        gram[i][n + i] = Fraction(1)
        gram[n + i][i] = Fraction(1)
    double = QuadLieAlgebra(N, table, gram)
    jac = double.jacobi_defect()
    if jac is not None:
        raise InvalidStructure(
            "double fails Jacobi; input is not a Lie quasi-bialgebra", jac)
    return double


def double_triple(b: LieQuasiBialgebra) -> QuasiManinTriple:
    d = drinfeld_double(b)
    n = b.dim
    lag = Subspace(2 * n, [tuple(Fraction(1 if t == i else 0) for t in range(2 * n))
                           for i in range(n)])
    comp = Subspace(2 * n, [tuple(Fraction(1 if t == n + i else 0) for t in range(2 * n))
                            for i in range(n)])
    return QuasiManinTriple(d, lag, comp)


def quasi_bialgebra_from_triple(t: QuasiManinTriple) -> LieQuasiBialgebra:
    """Cobracket and trivector of the quasi triple (d, L, C).

    C is identified with L* through the pairing; then
    F(e)(xi1, xi2) = <[xi1, xi2], e> and chi(xi1, xi2, xi3) = <[xi1, xi2], xi3>.
    """
    d, lag, comp = t.algebra, t.lag, t.complement
    n = lag.dim
    # dual basis c'_j in C with <c'_j, l_i> = delta_ij
    m = [[d.pair(c, l) for c in comp.basis] for l in lag.basis]
    minv = invert(m)
    dual = [tuple(sum(minv[r][j] * comp.basis[r][s] for r in range(n))
                  for s in range(d.dim)) for j in range(n)]

    lag_table: dict[tuple[int, int], Vec] = {}
    for i in range(n):
        for j in range(i + 1, n):
            br = d.bracket(lag.basis[i], lag.basis[j])
            coeffs = _coords_in_span(lag.basis, br)
            if coeffs is None:
                raise InvalidStructure("lagrangian is not a subalgebra", (i, j))
            lag_table[(i, j)] = coeffs
    base = LieAlgebra(n, lag_table)

    F = []
    for e_idx in range(n):
        mtx = [[Fraction(0)] * n for _ in range(n)]
        for a in range(n):
            for bb in range(n):
                mtx[a][bb] = d.pair(d.bracket(dual[a], dual[bb]), lag.basis[e_idx])
        F.append(mtx)
    chi: dict[tuple[int, int, int], Fraction] = {}
    for a in range(n):
        for bb in range(a + 1, n):
            for c in range(bb + 1, n):
                val = d.pair(d.bracket(dual[a], dual[bb]), dual[c])
                if val != 0:
                    chi[(a, bb, c)] = val
    return LieQuasiBialgebra(base, F, chi)


def triple_isomorphism_defect(t: QuasiManinTriple) -> str | None:
    """Check that the double of quasi_bialgebra_from_triple(t) matches
    t.algebra under the evident basis map (l_i, c'_j); None when exact."""
    b = quasi_bialgebra_from_triple(t)
    dd = drinfeld_double(b)
    d, lag, comp = t.algebra, t.lag, t.complement
    n = lag.dim
    m = [[d.pair(c, l) for c in comp.basis] for l in lag.basis]
    minv = invert(m)
    dual = [tuple(sum(minv[r][j] * comp.basis[r][s] for r in range(n))
                  for s in range(d.dim)) for j in range(n)]
    emb = list(lag.basis) + dual  # image of the double's basis inside d

    def embed(x: Vec) -> Vec:
        out = zero_vec(d.dim)
        for c, v in zip(x, emb):
            out = vec_add(out, vec_scale(c, v))
        return out

    for i in range(2 * n):
        for j in range(2 * n):
            lhs = embed(dd.bracket_basis(i, j))
            rhs = d.bracket(emb[i], emb[j])
            if lhs != rhs:
                return "bracket mismatch at basis pair (%d, %d)" % (i, j)
            if dd.pair([Fraction(1 if t_ == i else 0) for t_ in range(2 * n)],
                       [Fraction(1 if t_ == j else 0) for t_ in range(2 * n)]) \
                    != d.pair(emb[i], emb[j]):
                return "pairing mismatch at basis pair (%d, %d)" % (i, j)
    return None


def gdelta_bialgebra(g: QuadLieAlgebra) -> LieQuasiBialgebra:
    """(g, F=0, chi) with chi(u~, v~, w~) = 1/4 <[u,v], w> through g = g*."""
    n = g.dim
    ginv = invert(g.gram.gram)
    basis = identity_mat(n)
    chi: dict[tuple[int, int, int], Fraction] = {}
    for a in range(n):
        for bb in range(a + 1, n):
            for c in range(bb + 1, n):
                u = mat_vec(ginv, basis[a])
                v = mat_vec(ginv, basis[bb])
                w = mat_vec(ginv, basis[c])
                val = g.pair(g.bracket(u, v), w) / 4
                if val != 0:
                    chi[(a, bb, c)] = val
    zero_f = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
    return LieQuasiBialgebra(LieAlgebra(n, dict(g.table)), zero_f, chi)


def gdelta_iso(g: QuadLieAlgebra) -> dict:
    """The identification of the double of (g, 0, chi) with g + gbar via
    (u, v~) -> (u + v/2, u - v/2); returns the matrix and exact defects."""
    n = g.dim
    b = gdelta_bialgebra(g)
    double = drinfeld_double(b)
    target = g.direct_sum(g.negated())
    ginv = invert(g.gram.gram)
    # column j of the map: image of double basis vector j
    cols = []
    for i in range(n):  # u-part
        e = [Fraction(0)] * n
        e[i] = Fraction(1)
        cols.append(tuple(e) + tuple(e))
    for i in range(n):  # v~-part, v = ginv e_i
        v = mat_vec(ginv, identity_mat(n)[i])
        half = vec_scale(Fraction(1, 2), v)
        cols.append(tuple(half) + tuple(-x for x in half))
    mtx = transpose(cols)

    def apply(x: Vec) -> Vec:
        return mat_vec(mtx, x)

    basis = identity_mat(2 * n)
    bracket_ok = pairing_ok = True
    for i in range(2 * n):
        for j in range(2 * n):
            if apply(double.bracket_basis(i, j)) != target.bracket(apply(basis[i]), apply(basis[j])):
                bracket_ok = False
            if double.pair(basis[i], basis[j]) != target.pair(apply(basis[i]), apply(basis[j])):
                pairing_ok = False
    return {"matrix": mtx, "bracket_preserved": bracket_ok,
            "pairing_preserved": pairing_ok, "double": double, "target": target}


# -- catalog -----------------------------------------------------------------

def _sl2_matrices():
    e = [[0, 1], [0, 0]]
    f = [[0, 0], [1, 0]]
    h = [[1, 0], [0, -1]]
    return [mat(e), mat(f), mat(h)]


def _sl3_matrices():
    def unit(i, j):
        return mat([[1 if (r, c) == (i, j) else 0 for c in range(3)] for r in range(3)])
    h1 = mat([[1, 0, 0], [0, -1, 0], [0, 0, 0]])
    h2 = mat([[0, 0, 0], [0, 1, 0], [0, 0, -1]])
    return [unit(0, 1), unit(0, 2), unit(1, 2), unit(1, 0), unit(2, 0), unit(2, 1), h1, h2]


def _quaternion_matrices():
    """Left-multiplication matrices of i, j, k on R^4 = H (basis 1,i,j,k)."""
    i = [[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]]
    j = [[0, 0, -1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, -1, 0, 0]]
    k = [[0, 0, 0, -1], [0, 0, -1, 0], [0, 1, 0, 0], [1, 0, 0, 0]]
    return [mat(i), mat(j), mat(k)]


def sl2_trace() -> QuadLieAlgebra:
    return QuadLieAlgebra.from_matrices(_sl2_matrices())


def sl3_trace() -> QuadLieAlgebra:
    return QuadLieAlgebra.from_matrices(_sl3_matrices())


def gl2_trace() -> QuadLieAlgebra:
    basis = _sl2_matrices() + [identity_mat(2)]
    return QuadLieAlgebra.from_matrices(basis)


def su2_trace() -> QuadLieAlgebra:
    """su(2) in the real quaternion model; the pairing is the trace form of
    the defining complex representation, i.e. half the 4x4 trace."""
    half_trace = lambda a, b: sum(mat_mul(a, b)[i][i] for i in range(4)) / Fraction(2)
    return QuadLieAlgebra.from_matrices(_quaternion_matrices(), half_trace)


def k_plus_kbar(g: QuadLieAlgebra) -> ManinPair:
    d = g.direct_sum(g.negated())
    n = g.dim
    diag = Subspace(2 * n, [tuple(Fraction(1 if t in (i, n + i) else 0)
                                  for t in range(2 * n)) for i in range(n)])
    return ManinPair(d, diag)


def _borel_masks(kind: str) -> tuple[list[int], list[int], list[tuple[int, Vec]]]:
    """Index sets of b+ and b-, and the Cartan projections per basis index."""
    if kind == "sl2":
        upper, lower, cartan = [0, 2], [1, 2], [2]
        dim = 3
    elif kind == "sl3":
        upper, lower, cartan = [0, 1, 2, 6, 7], [3, 4, 5, 6, 7], [6, 7]
        dim = 8
    else:
        raise KeyError(kind)
    proj = []
    for i in range(dim):
        row = [Fraction(0)] * dim
        if i in cartan:
            row[i] = Fraction(1)
        proj.append((i, tuple(row)))
    return upper, lower, proj


def gauss_lagrangian(kind: str) -> Subspace:
    """s = {(u, v) in b+ x b- : pr_t(u) + pr_t(v) = 0} inside g + gbar."""
    g = sl2_trace() if kind == "sl2" else sl3_trace()
    n = g.dim
    upper, lower, proj = _borel_masks(kind)
    conditions = []
    for i in range(n):  # u-coordinates outside b+
        if i not in upper:
            row = [Fraction(0)] * (2 * n)
            row[i] = Fraction(1)
            conditions.append(tuple(row))
    for i in range(n):  # v-coordinates outside b-
        if i not in lower:
            row = [Fraction(0)] * (2 * n)
            row[n + i] = Fraction(1)
            conditions.append(tuple(row))
    for i, prow in proj:
        if any(x != 0 for x in prow):
            row = list(prow) + list(prow)
            conditions.append(tuple(row))
    return Subspace(2 * n, kernel_basis(conditions, 2 * n))


def gauss_s(kind: str) -> ManinPair:
    g = sl2_trace() if kind == "sl2" else sl3_trace()
    d = g.direct_sum(g.negated())
    return ManinPair(d, gauss_lagrangian(kind))


def antidiagonal(g: QuadLieAlgebra) -> Subspace:
    n = g.dim
    return Subspace(2 * n, [tuple(Fraction(1 if t == i else (-1 if t == n + i else 0))
                                  for t in range(2 * n)) for i in range(n)])


def standard_bialgebra_sl2() -> LieQuasiBialgebra:
    """Standard sl2 bialgebra, realized through the Manin triple
    (sl2 + sl2bar, diagonal, Gauss lagrangian)."""
    g = sl2_trace()
    d = g.direct_sum(g.negated())
    diag = k_plus_kbar(g).lag
    t = QuasiManinTriple(d, diag, gauss_lagrangian("sl2"))
    return quasi_bialgebra_from_triple(t)


def gstar_sl2() -> dict:
    """Dual side of the standard sl2 bialgebra: the Gauss lagrangian with its
    induced structure constants."""
    g = sl2_trace()
    d = g.direct_sum(g.negated())
    s = gauss_lagrangian("sl2")
    n = s.dim
    table: dict[tuple[int, int], Vec] = {}
    for i in range(n):
        for j in range(i + 1, n):
            br = d.bracket(s.basis[i], s.basis[j])
            coeffs = _coords_in_span(s.basis, br)
            if coeffs is None:
                raise InvalidStructure("gauss lagrangian not closed", (i, j))
            table[(i, j)] = coeffs
    return {"algebra": LieAlgebra(n, table), "embedding": s, "ambient": d}


CATALOG: dict[str, Callable[[], object]] = {
    "sl2_trace": sl2_trace,
    "sl3_trace": sl3_trace,
    "gl2_trace": gl2_trace,
    "su2_trace": su2_trace,
    "k_plus_kbar_sl2": lambda: k_plus_kbar(sl2_trace()),
    "k_plus_kbar_su2": lambda: k_plus_kbar(su2_trace()),
    "gauss_s_sl2": lambda: gauss_s("sl2"),
    "gauss_s_sl3": lambda: gauss_s("sl3"),
    "standard_bialgebra_sl2": standard_bialgebra_sl2,
    "gstar_sl2": gstar_sl2,
}


def catalog(name: str):
    try:
        builder = CATALOG[name]
    except KeyError:
        raise KeyError("unknown catalog name %r; known: %s"
                       % (name, ", ".join(sorted(CATALOG)))) from None
    return builder()
