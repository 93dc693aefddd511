"""Linear Courant relations at fibers and over polynomial maps.

A relation from E1 to E2 is a subspace of E1 + E2bar (the target pairing
flipped); morphism-of-Manin-pairs checks, composition, Dirac reduction of
fibered pairs, lagrangian fibred products and bivector extraction all reduce
to exact subspace computations.  Cleanness and rank claims are decided by
dimension comparison, never by tolerances.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from typing import Callable, Sequence

from .exactla import (DimensionMismatch, QForm, Subspace, frac, identity_mat,
                      invert, is_isotropic, lagrangian_class, mat_vec,
                      orth_complement, transpose, vec, zero_vec)
from .polycal import PolyForm, PolyFun, ext_d, pullback


class QSpace:
    """A quadratic vector space fiber, optionally with named blocks."""

    def __init__(self, form: QForm, blocks: dict[str, tuple[int, int]] | None = None):
        self.form = form
        self.dim = form.dim
        self.blocks = blocks or {}

    @classmethod
    def tangent_fiber(cls, n: int) -> "QSpace":
        """T_x N + T*_x N with the canonical pairing, blocks T and T*."""
        g = [[Fraction(0)] * (2 * n) for _ in range(2 * n)]
        for i in range(n):
            g[i][n + i] = Fraction(1)
            g[n + i][i] = Fraction(1)
        return cls(QForm(g), {"T": (0, n), "T*": (n, 2 * n)})

    def block_range(self, name: str) -> tuple[int, int]:
        return self.blocks[name]

    def negated(self) -> "QSpace":
        return QSpace(self.form.negated(), dict(self.blocks))

    def product(self, other: "QSpace", flip_other: bool = False) -> "QSpace":
        f2 = other.form.negated() if flip_other else other.form
        blocks = {("1." + k): v for k, v in self.blocks.items()}
        for k, (a, b) in other.blocks.items():
            blocks["2." + k] = (a + self.dim, b + self.dim)
        return QSpace(self.form.direct_sum(f2), blocks)


class LinearCourantRelation:
    """Subspace of E1 + E2bar; flagged a morphism when lagrangian there."""

    def __init__(self, source: QSpace, target: QSpace, subspace: Subspace):
        if subspace.ambient_dim != source.dim + target.dim:
            raise DimensionMismatch("relation ambient is source + target")
        self.source = source
        self.target = target
        self.subspace = subspace

    @property
    def pair_form(self) -> QForm:
        return self.source.form.direct_sum(self.target.form.negated())

    @property
    def is_morphism(self) -> bool:
        return lagrangian_class(self.subspace, self.pair_form) == "lagrangian"

    @classmethod
    def identity(cls, space: QSpace) -> "LinearCourantRelation":
        n = space.dim
        rows = [tuple(Fraction(1 if j in (i, n + i) else 0) for j in range(2 * n))
                for i in range(n)]
        return cls(space, space, Subspace(2 * n, rows))


def compose(r23: LinearCourantRelation,
            r12: LinearCourantRelation) -> tuple[LinearCourantRelation, bool]:
    """Set-theoretic composition; clean iff the result has lagrangian dim."""
    if r12.target.dim != r23.source.dim:
        raise DimensionMismatch("middle spaces do not match")
    d1, d2, d3 = r12.source.dim, r12.target.dim, r23.target.dim
    big = d1 + d2 + d3
    rows_a = [tuple(b) + zero_vec(d3) for b in r12.subspace.basis]
    rows_a += [zero_vec(d1 + d2) + tuple(e) for e in identity_mat(d3)]
    rows_b = [tuple(e) + zero_vec(d2 + d3) for e in identity_mat(d1)]
    rows_b += [zero_vec(d1) + tuple(b) for b in r23.subspace.basis]
    inter = Subspace(big, rows_a).intersect(Subspace(big, rows_b))
    proj = inter.project(list(range(d1)) + list(range(d1 + d2, big)))
    out = LinearCourantRelation(r12.source, r23.target, proj)
    clean = 2 * proj.dim == d1 + d3
    return out, clean


def manin_morphism_check(r: LinearCourantRelation, l1: Subspace,
                         l2: Subspace) -> tuple[bool, dict]:
    """True iff the projection R cap (L1 x E2) -> E2 is injective with image
    L2; the witness names a kernel vector or a missing target vector."""
    d1, d2 = r.source.dim, r.target.dim
    amb = Subspace(d1 + d2, [tuple(b) + zero_vec(d2) for b in l1.basis]
                   + [zero_vec(d1) + tuple(e) for e in identity_mat(d2)])
    s = r.subspace.intersect(amb)
    kernel = s.intersect(Subspace(d1 + d2, [tuple(e) + zero_vec(d2)
                                            for e in identity_mat(d1)]))
    image = s.project(list(range(d1, d1 + d2)))
    if kernel.dim:
        return False, {"kind": "kernel_vector",
                       "vector": [str(x) for x in kernel.basis[0]]}
    if image != l2:
        for b in l2.basis:
            if not image.contains(b):
                return False, {"kind": "missing_target",
                               "vector": [str(x) for x in b]}
        return False, {"kind": "image_too_big", "dim": image.dim}
    return True, {}


class FiberedDiracPair:
    """L1 in E1 x k and L2 in E2 x kbar over a shared quadratic k."""

    def __init__(self, e1: QSpace, e2: QSpace, kform: QForm,
                 l1: Subspace, l2: Subspace):
        if l1.ambient_dim != e1.dim + kform.dim or l2.ambient_dim != e2.dim + kform.dim:
            raise DimensionMismatch("factor ambient mismatch")
        f1 = e1.form.direct_sum(kform)
        f2 = e2.form.direct_sum(kform.negated())
        if lagrangian_class(l1, f1) != "lagrangian":
            raise ValueError("L1 is not lagrangian in E1 x k")
        if lagrangian_class(l2, f2) != "lagrangian":
            raise ValueError("L2 is not lagrangian in E2 x kbar")
        self.e1, self.e2, self.kform = e1, e2, kform
        self.l1, self.l2 = l1, l2


def reduce(pair: FiberedDiracPair) -> tuple[Subspace, bool, dict]:
    """Project L1 x_k L2 into E1 x E2.

    Returns (L, iso_flag, report); iso_flag records the generation condition
    im(L1 -> k) + im(L2 -> k) = k, under which the projection is injective.
    When generation fails the set-theoretic image is still returned, with a
    warning in the report.
    """
    d1, d2, dk = pair.e1.dim, pair.e2.dim, pair.kform.dim
    big = d1 + dk + d2
    rows_a = [tuple(b) + zero_vec(d2) for b in pair.l1.basis]
    rows_a += [zero_vec(d1 + dk) + tuple(e) for e in identity_mat(d2)]
    # L2 lives in coordinates (e2, w); embed as (0, w, e2)
    rows_b = [zero_vec(d1) + tuple(b[d2:]) + tuple(b[:d2]) for b in pair.l2.basis]
    rows_b += [tuple(e) + zero_vec(dk + d2) for e in identity_mat(d1)]
    fib = Subspace(big, rows_a).intersect(Subspace(big, rows_b))
    out = fib.project(list(range(d1)) + list(range(d1 + dk, big)))

    im1 = pair.l1.project(list(range(d1, d1 + dk)))
    im2 = pair.l2.project(list(range(d2, d2 + dk)))
    iso = im1.join(im2).dim == dk
    total = pair.e1.form.direct_sum(pair.e2.form)
    cls = lagrangian_class(out, total) if total.is_nondegenerate else "n/a"
    report = {"fibered_dim": fib.dim, "reduced_dim": out.dim,
              "lagrangian": cls == "lagrangian", "iso": iso}
    if iso and fib.dim != out.dim:
        report["warning"] = "generation held but projection dropped rank"
    if not iso and 2 * out.dim == d1 + d2:
        report["warning"] = "generation failed; lagrangian-compatible image returned"
    return out, iso, report


def bivector_from_complement(r: LinearCourantRelation, comp: Subspace) -> list[list[Fraction]]:
    """Extract pi from graph(pi#) = R o C for an isotropic complement C.

    The source must carry T/T* blocks.  Raises ValueError naming the
    obstruction when the composition is not the graph of a skew map."""
    if "T" not in r.source.blocks:
        raise DimensionMismatch("source carries no T/T* block structure")
    t0, t1 = r.source.block_range("T")
    s0, s1 = r.source.block_range("T*")
    n = t1 - t0
    d1, d2 = r.source.dim, r.target.dim
    if comp.ambient_dim != d2:
        raise DimensionMismatch("complement lives in the target fiber")
    amb = Subspace(d1 + d2, [tuple(e) + zero_vec(d2) for e in identity_mat(d1)]
                   + [zero_vec(d1) + tuple(b) for b in comp.basis])
    s = r.subspace.intersect(amb).project(list(range(d1)))
    graph_kernel = s.intersect(Subspace(d1, [tuple(e) for e in identity_mat(d1)[t0:t1]]))
    if graph_kernel.dim:
        raise ValueError("composition is not a graph: X direction %s maps to alpha = 0"
                         % ([str(x) for x in graph_kernel.basis[0][t0:t1]],))
    image = s.project(list(range(s0, s1)))
    if image.dim != n:
        missing = next(e for e in identity_mat(n) if not image.contains(e))
        raise ValueError("composition misses the covector direction %s"
                         % ([str(x) for x in missing],))
    cols = []
    for j in range(n):
        target = [Fraction(0)] * d1
        # solve for the element of s with T*-part = eps_j
        coeffs = _solve_combination([list(b[s0:s1]) for b in s.basis],
                                    identity_mat(n)[j])
        if coeffs is None:
            raise ValueError("no element over covector %d" % j)
        x = [sum(c * b[t0 + i] for c, b in zip(coeffs, s.basis)) for i in range(n)]
        cols.append(x)
    pi = [[cols[j][i] for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(n):
            if pi[i][j] != -pi[j][i]:
                raise ValueError("extracted map is not skew at (%d, %d)" % (i, j))
    return pi


def _solve_combination(rows, target):
    from .exactla import solve
    if not rows:
        return None
    return solve(transpose(rows), target)


class RelationFamily:
    """R_(phi, sigma) over Graph(phi) for a polynomial map phi: R^m -> R^n."""

    def __init__(self, phi: Sequence[PolyFun], sigma: PolyForm, eta: PolyForm):
        self.phi = list(phi)
        self.m = self.phi[0].chart_dim if self.phi else sigma.chart_dim
        self.n = len(self.phi)
        if sigma.degree != 2 or sigma.chart_dim != self.m:
            raise DimensionMismatch("sigma must be a 2-form on the source")
        if eta.degree != 3 or eta.chart_dim != self.n:
            raise DimensionMismatch("eta must be a 3-form on the target")
        defect = ext_d(sigma) - pullback(self.phi, eta, self.m)
        if not defect.is_zero:
            raise ValueError("d sigma != phi* eta; no twisted relation exists")
        self.sigma = sigma
        self.eta = eta

    def jacobian(self, point) -> list[list[Fraction]]:
        return [[self.phi[i].diff(j).eval(point) for j in range(self.m)]
                for i in range(self.n)]

    def fiber(self, point) -> LinearCourantRelation:
        """The lagrangian fiber {((Y, Tphi* a + i_Y sigma), (Tphi Y, a))}."""
        m, n = self.m, self.n
        jac = self.jacobian(point)
        sig = [[self.sigma.comp((i, j)).eval(point) for j in range(m)] for i in range(m)]
        rows = []
        for i in range(m):
            y = [Fraction(1 if t == i else 0) for t in range(m)]
            iy = [sig[i][j] for j in range(m)]
            ty = [jac[k][i] for k in range(n)]
            rows.append(tuple(y) + tuple(iy) + tuple(ty) + zero_vec(n))
        for j in range(n):
            a = [Fraction(1 if t == j else 0) for t in range(n)]
            ta = [jac[j][i] for i in range(m)]
            rows.append(zero_vec(m) + tuple(ta) + zero_vec(n) + tuple(a))
        src = QSpace.tangent_fiber(m)
        tgt = QSpace.tangent_fiber(n)
        return LinearCourantRelation(src, tgt, Subspace(2 * m + 2 * n, rows))


def r_phi_sigma(phi: Sequence[PolyFun], sigma: PolyForm, eta: PolyForm) -> RelationFamily:
    return RelationFamily(phi, sigma, eta)


def strong_dirac_check(phi: Sequence[PolyFun], sigma: PolyForm,
                       l_fiber: Callable[[Sequence], Subspace], eta: PolyForm,
                       points: Sequence[Sequence]) -> dict:
    """Pointwise classification in {'not Dirac', 'Dirac', 'strong Dirac'}.

    l_fiber(point) must return the target Dirac fiber inside T M + T* M at
    phi(point); strong means R_(phi,sigma) is a morphism of Manin pairs from
    (TN, TN-fiber) to the target."""
    family = RelationFamily(phi, sigma, eta)
    m, n = family.m, family.n
    tn = Subspace(2 * m, [tuple(e) for e in identity_mat(2 * m)[:m]])
    out = []
    for p in points:
        phi_p = [f.eval(p) for f in family.phi]
        r = family.fiber(p)
        l2 = l_fiber(phi_p)
        ok, witness = manin_morphism_check(r, tn, l2)
        if ok:
            out.append({"point": [str(x) for x in vec(p)], "class": "strong Dirac"})
            continue
        amb = Subspace(2 * m + 2 * n,
                       [tuple(b) + zero_vec(2 * n) for b in tn.basis]
                       + [zero_vec(2 * m) + tuple(e) for e in identity_mat(2 * n)])
        image = r.subspace.intersect(amb).project(list(range(2 * m, 2 * m + 2 * n)))
        cls = "Dirac" if image == l2 else "not Dirac"
        out.append({"point": [str(x) for x in vec(p)], "class": cls,
                    "witness": witness})
    classes = {o["class"] for o in out}
    summary = ("strong Dirac" if classes == {"strong Dirac"}
               else "Dirac" if classes <= {"strong Dirac", "Dirac"} else "not Dirac")
    return {"points": out, "class": summary}


# -- fibred products ----------------------------------------------------------

def fibred_product_fibers(e1: QSpace, e2: QSpace, kform: QForm,
                          l1: Subspace, l2: Subspace) -> tuple[Subspace, dict]:
    """Fiber-level lagrangian fibred product; the surjectivity of the
    difference map onto k is required (transversality)."""
    im1 = l1.project(list(range(e1.dim, e1.dim + kform.dim)))
    im2 = l2.project(list(range(e2.dim, e2.dim + kform.dim)))
    if im1.join(im2).dim != kform.dim:
        raise ValueError("difference map not onto k: transversality fails")
    pair = FiberedDiracPair(e1, e2, kform, l1, l2)
    out, iso, report = reduce(pair)
    return out, report


def constant_k_solve(frame_wblocks: Sequence[Sequence[Fraction]],
                     l2: Subspace) -> list[tuple[Fraction, ...]]:
    """Coefficient combinations c with sum_i c_i w_i inside the constant
    subspace l2; used to build fibred-product frames when the k-block of a
    frame is constant."""
    conditions = []
    for y in l2.annihilator():
        conditions.append([sum(frac(w[t]) * y[t] for t in range(len(y)))
                           for w in frame_wblocks])
    from .exactla import kernel_basis
    if not conditions:
        return [tuple(e) for e in identity_mat(len(frame_wblocks))]
    return kernel_basis(conditions, len(frame_wblocks))


def random_lagrangian(rng: random.Random, a_basis: Sequence, b_basis: Sequence,
                      q: QForm) -> Subspace:
    """Random lagrangian from a hyperbolic pair (<a_i,b_j> = delta_ij, both
    halves isotropic): GL moves plus the graph of a random skew matrix."""
    n = len(a_basis)
    a_rows = [vec(a) for a in a_basis]
    b_rows = [vec(b) for b in b_basis]
    # random unimodular-ish change preserving the pairing: A -> M A, B -> M^-T B
    m = [[Fraction(rng.randint(-2, 2)) for _ in range(n)] for _ in range(n)]
    for i in range(n):
        m[i][i] += Fraction(rng.choice([1, 2, 3]))
    try:
        mi = invert(m)
    except ValueError:
        mi = identity_mat(n)
        m = identity_mat(n)
    mt = transpose(mi)
    a_rows = [tuple(sum(m[i][k] * a_rows[k][t] for k in range(n))
                    for t in range(len(a_rows[0]))) for i in range(n)]
    b_rows = [tuple(sum(mt[i][k] * b_rows[k][t] for k in range(n))
                    for t in range(len(b_rows[0]))) for i in range(n)]
    # swapping a_i <-> b_i keeps hyperbolicity (the pairing is symmetric)
    for i in range(n):
        if rng.random() < 0.4:
            a_rows[i], b_rows[i] = b_rows[i], a_rows[i]
    s = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            c = Fraction(rng.randint(-3, 3), rng.randint(1, 2))
            s[i][j] = c
            s[j][i] = -c
    rows = []
    for i in range(n):
        row = list(a_rows[i])
        for j in range(n):
            if s[i][j] != 0:
                row = [x + s[i][j] * y for x, y in zip(row, b_rows[j])]
        rows.append(tuple(row))
    out = Subspace(len(rows[0]), rows)
    assert lagrangian_class(out, q) == "lagrangian"
    return out


def vec_scale_neg(v):
    return tuple(-x for x in v)


def random_isotropic_complement(rng: random.Random, lag_basis: Sequence,
                                dual_basis: Sequence) -> Subspace:
    """Random isotropic complement of a lagrangian with a given dual basis:
    the graph of a skew matrix over the dual side."""
    n = len(lag_basis)
    s = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            c = Fraction(rng.randint(-3, 3), rng.randint(1, 2))
            s[i][j] = c
            s[j][i] = -c
    rows = []
    for i in range(n):
        row = list(vec(dual_basis[i]))
        for j in range(n):
            if s[i][j] != 0:
                row = [x + s[i][j] * y for x, y in zip(row, vec(lag_basis[j]))]
        rows.append(tuple(row))
    return Subspace(len(rows[0]), rows)
