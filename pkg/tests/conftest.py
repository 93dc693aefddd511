"""Shared builders for the test suite: hyperbolic systems for random
lagrangians, the Kirillov pair on sl2*, and the GL(2)+ chart realizations of
the group-level structures (bi-invariant action algebroid, Cartan splitting,
arrows frame)."""

from fractions import Fraction as F

import pytest

from dirac_kit import qlie
from dirac_kit.exactla import QForm, Subspace, invert, mat_vec, transpose
from dirac_kit.polycal import PolyForm, PolyFun, PolyMulti


def hyper_system(g: qlie.QuadLieAlgebra, n: int, kform: QForm):
    """(a_basis, b_basis, total_form) with <a_i, b_j> = delta, halves
    isotropic, on Q^(2n) (+) (g + gbar)-style coordinates."""
    total = QForm.hyperbolic(n).direct_sum(kform) if n else kform
    gd = g.dim
    a_basis, b_basis = [], []
    width = 2 * n + kform.dim
    for i in range(n):
        a_basis.append([F(1 if t == i else 0) for t in range(width)])
        b_basis.append([F(1 if t == n + i else 0) for t in range(width)])
    ginv = invert(g.gram.gram)
    for i in range(gd):
        e = [F(1 if t == i else 0) for t in range(gd)]
        w = mat_vec(ginv, e)
        a_basis.append([F(0)] * (2 * n) + list(e) + list(e))
        b_basis.append([F(0)] * (2 * n) + [-x / 2 for x in w] + [x / 2 for x in w])
    m = [[total.pair(a, b) for b in b_basis] for a in a_basis]
    mt = transpose(invert(m))
    b_basis = [tuple(sum(mt[i][k] * b_basis[k][t] for k in range(len(b_basis)))
                     for t in range(width)) for i in range(len(b_basis))]
    return a_basis, b_basis, total


def kirillov_pair(g: qlie.QuadLieAlgebra):
    """(pi, rho) on the dual chart R^dim: the linear Poisson bivector and the
    infinitesimal action xi -> xi o ad_u (a homomorphism into coordinate
    vector fields for the conventions of this package)."""
    dim = g.dim
    pi_comps = {}
    for i in range(dim):
        for j in range(i + 1, dim):
            br = g.bracket_basis(i, j)
            terms = {tuple(1 if t == k else 0 for t in range(dim)): br[k]
                     for k in range(dim) if br[k] != 0}
            if terms:
                pi_comps[(i, j)] = PolyFun(dim, terms)
    rho = []
    for a in range(dim):
        comps = {}
        for k in range(dim):
            terms = {}
            br = g.bracket_basis(a, k)
            for m in range(dim):
                if br[m] != 0:
                    terms[tuple(1 if t == m else 0 for t in range(dim))] = br[m]
            if terms:
                comps[(k,)] = PolyFun(dim, terms)
        rho.append(PolyMulti(dim, 1, comps))
    return PolyMulti(dim, 2, pi_comps), rho


# -- GL(2)+ chart realizations -------------------------------------------------

GL2_DET = PolyFun(4, {(1, 0, 0, 1): F(1), (0, 1, 1, 0): F(-1)})


def matrix_action_field(u, side: str) -> PolyMulti:
    """The vector field g -> u.g (side 'l') or g -> -g.u (side 'r') on the
    chart R^4 of 2x2 matrices, coordinates g = [[x0, x1], [x2, x3]]."""
    comps = {}
    for r in range(2):
        for c in range(2):
            terms = {}
            for k in range(2):
                if side == "l" and u[r][k] != 0:
                    e = [0] * 4
                    e[2 * k + c] = 1
                    terms[tuple(e)] = terms.get(tuple(e), F(0)) + u[r][k]
                if side == "r" and u[k][c] != 0:
                    e = [0] * 4
                    e[2 * r + k] = 1
                    terms[tuple(e)] = terms.get(tuple(e), F(0)) - u[k][c]
            terms = {kk: v for kk, v in terms.items() if v != 0}
            if terms:
                comps[(2 * r + c,)] = PolyFun(4, terms)
    return PolyMulti(4, 1, comps)


def gl2_bi_anchor_fields():
    """Anchor of d = gl2 + gl2bar acting by (u, v).g = u g - g v."""
    g = qlie.gl2_trace()
    return ([matrix_action_field(b, "l") for b in g.matrix_basis]
            + [matrix_action_field(b, "r") for b in g.matrix_basis])


@pytest.fixture(scope="session")
def gl2_cartan_chart():
    from dirac_kit.courant import action_courant
    g = qlie.gl2_trace()
    d = g.direct_sum(g.negated())
    return action_courant(d, gl2_bi_anchor_fields(), 4,
                          domain_unit=GL2_DET, check_points=4)


def gl2_adjugate():
    return [[PolyFun(4, {(0, 0, 0, 1): F(1)}), PolyFun(4, {(0, 1, 0, 0): F(-1)})],
            [PolyFun(4, {(0, 0, 1, 0): F(-1)}), PolyFun(4, {(1, 0, 0, 0): F(1)})]]


def gl2_coords(m):
    """Coordinates of a 2x2 matrix of PolyFuns in the basis (e, f, h, I)."""
    a = m[0][1]
    b = m[1][0]
    cc = (m[0][0] - m[1][1]).scale(F(1, 2))
    dd = (m[0][0] + m[1][1]).scale(F(1, 2))
    return [a, b, cc, dd]


def gl2_cartan_splitting():
    """s(d/dx_(rc)) = 1/2 (X g^-1, -g^-1 X) as d-valued localized tuples."""
    adj = gl2_adjugate()

    def over_det(p: PolyFun) -> PolyFun:
        return PolyFun(4, p.terms, GL2_DET.terms, 1)

    rows = []
    for r in range(2):
        for c in range(2):
            m1 = [[PolyFun.zero(4) for _ in range(2)] for _ in range(2)]
            m2 = [[PolyFun.zero(4) for _ in range(2)] for _ in range(2)]
            for j in range(2):
                m1[r][j] = over_det(adj[c][j]).scale(F(1, 2))
                m2[j][c] = over_det(adj[j][r]).scale(F(-1, 2))
            rows.append(gl2_coords(m1) + gl2_coords(m2))
    return rows


@pytest.fixture(scope="session")
def gl2_cartan_eta(gl2_cartan_chart):
    from dirac_kit.courant import splitting_to_eta
    eta, report = splitting_to_eta(gl2_cartan_chart, gl2_cartan_splitting(),
                                   verify_samples=1)
    assert report["pass"]
    return eta


def arrow_frame_gl2(eta: PolyForm):
    """The groupoid-of-arrows Dirac frame over the GL2 chart: sections
    e(u, v) = (u^r - v^l, 1/2<theta^r ., u> + 1/2<theta^l ., v>, u, v) inside
    T_eta(M2) x (gl2bar x gl2)."""
    from dirac_kit.courant import CourantChart, DiracFrame
    from dirac_kit.polycal import MixedSection

    g = qlie.gl2_trace()
    d = g.negated().direct_sum(g)  # gbar x g
    chart = CourantChart(4, "product", kalg=d, eta=eta, domain_unit=GL2_DET)
    adj = gl2_adjugate()
    basis = g.matrix_basis

    def theta_r_row(i: int):
        """theta^r(d/dx_i) as a 2x2 polynomial matrix over det."""
        r, c = divmod(i, 2)
        out = [[PolyFun.zero(4) for _ in range(2)] for _ in range(2)]
        for j in range(2):
            out[r][j] = PolyFun(4, adj[c][j].terms, GL2_DET.terms, 1)
        return out

    def theta_l_row(i: int):
        r, c = divmod(i, 2)
        out = [[PolyFun.zero(4) for _ in range(2)] for _ in range(2)]
        for j in range(2):
            out[j][c] = PolyFun(4, adj[j][r].terms, GL2_DET.terms, 1)
        return out

    def pair_const(m, u) -> PolyFun:
        out = PolyFun.zero(4)
        for i in range(2):
            for j in range(2):
                if u[j][i] != 0:
                    out = out + m[i][j].scale(u[j][i])
        return out

    sections = []
    for src in range(8):
        u = basis[src] if src < 4 else [[F(0)] * 2] * 2
        v = basis[src - 4] if src >= 4 else [[F(0)] * 2] * 2
        x = matrix_action_field(u, "l") + matrix_action_field(v, "r")
        alpha_comps = {}
        for i in range(4):
            val = pair_const(theta_r_row(i), u).scale(F(1, 2)) \
                + pair_const(theta_l_row(i), v).scale(F(1, 2))
            if not val.is_zero:
                alpha_comps[(i,)] = val
        w = []
        for t in range(4):
            w.append(PolyFun.const(4, 1) if src == t else PolyFun.zero(4))
        for t in range(4):
            w.append(PolyFun.const(4, 1) if src - 4 == t else PolyFun.zero(4))
        sections.append(MixedSection(x, PolyForm(4, 1, alpha_comps), tuple(w)))
    return DiracFrame(chart, sections, name="arrows_gl2")


def gl2_gauss_lagrangian() -> Subspace:
    """s = {(u,v) in b+ x b- : pr_t(u) + pr_t(v) = 0} inside gl2 + gl2,
    in (e, f, h, I)-coordinates: b+ = span(e, h, I), b- = span(f, h, I)."""
    from dirac_kit.exactla import kernel_basis
    conditions = []
    width = 8
    for idx in (1,):     # u has no f-component
        row = [F(0)] * width
        row[idx] = F(1)
        conditions.append(row)
    for idx in (4,):     # v has no e-component
        row = [F(0)] * width
        row[idx] = F(1)
        conditions.append(row)
    for idx in (2, 3):   # torus parts (h and I coords) cancel
        row = [F(0)] * width
        row[idx] = F(1)
        row[4 + idx] = F(1)
        conditions.append(row)
    return Subspace(width, kernel_basis(conditions, width))


def product_gdelta_bialgebra(g: qlie.QuadLieAlgebra) -> qlie.LieQuasiBialgebra:
    """The quasi-bialgebra (g x g, 0, chi (+) chi) whose double is d^2."""
    single = qlie.gdelta_bialgebra(g)
    n = g.dim
    base = qlie.LieAlgebra(2 * n, {
        (i, j): tuple(v) + (F(0),) * n
        for (i, j), v in g.table.items()
    } | {
        (n + i, n + j): (F(0),) * n + tuple(v)
        for (i, j), v in g.table.items()
    })
    zero_f = [[[F(0)] * (2 * n) for _ in range(2 * n)] for _ in range(2 * n)]
    chi = {}
    for (a, b, c), v in single.chi.items():
        chi[(a, b, c)] = v
        chi[(n + a, n + b, n + c)] = v
    return qlie.LieQuasiBialgebra(base, zero_f, chi)
