"""Linear Courant relations: composition, Manin morphisms, reduction,
fibred products, bivector extraction, R_(phi,sigma)."""

import random
from fractions import Fraction as F

import pytest

from conftest import (GL2_DET, arrow_frame_gl2, gl2_bi_anchor_fields,
                      gl2_cartan_splitting, gl2_gauss_lagrangian,
                      hyper_system, kirillov_pair)
from dirac_kit import qlie
from dirac_kit.courant import CourantChart, DiracFrame, verify_dirac
from dirac_kit.exactla import QForm, Subspace, identity_mat
from dirac_kit.polycal import MixedSection, PolyForm, PolyFun, PolyMulti
from dirac_kit.relations import (FiberedDiracPair, LinearCourantRelation,
                                 QSpace, bivector_from_complement, compose,
                                 constant_k_solve, fibred_product_fibers,
                                 manin_morphism_check, r_phi_sigma,
                                 random_lagrangian, reduce, strong_dirac_check)


def graph_tau_relation(b):
    """Fiber of the gauge graph {((X, a + i_X B), (X, a))} on Q^2."""
    src = QSpace.tangent_fiber(2)
    rows = []
    for i in range(2):
        x = [F(1 if t == i else 0) for t in range(2)]
        rows.append(tuple(x) + tuple(b[i]) + tuple(x) + (F(0), F(0)))
    for j in range(2):
        a = [F(1 if t == j else 0) for t in range(2)]
        rows.append((F(0),) * 2 + tuple(a) + (F(0),) * 2 + tuple(a))
    return LinearCourantRelation(src, src, Subspace(8, rows))


def test_compose_identity():
    src = QSpace.tangent_fiber(2)
    rid = LinearCourantRelation.identity(src)
    out, clean = compose(rid, rid)
    assert out.subspace == rid.subspace and clean


def test_compose_gauge_graphs():
    b1 = [[F(0), F(2)], [F(-2), F(0)]]
    b2 = [[F(0), F(-3)], [F(3), F(0)]]
    b12 = [[F(0), F(-1)], [F(1), F(0)]]
    out, clean = compose(graph_tau_relation(b1), graph_tau_relation(b2))
    assert clean and out.subspace == graph_tau_relation(b12).subspace
    assert out.is_morphism


def test_manin_morphism_check():
    g = qlie.sl2_trace()
    space = QSpace(g.gram)
    rows = [tuple(F(1 if t in (i, 3 + i) else 0) for t in range(6))
            for i in range(3)]
    rdiag = LinearCourantRelation(space, space, Subspace(6, rows))
    lag = Subspace(3, [(F(1), F(0), F(0))])
    ok, _ = manin_morphism_check(rdiag, lag, lag)
    assert ok
    other = Subspace(3, [(F(0), F(1), F(0))])
    ok, witness = manin_morphism_check(rdiag, lag, other)
    assert not ok and witness["kind"] == "missing_target"


def test_reduce_trivial_k():
    e1, e2 = QSpace.tangent_fiber(1), QSpace.tangent_fiber(1)
    k0 = QForm([])
    l1 = Subspace(2, [(F(1), F(0))])
    l2 = Subspace(2, [(F(0), F(1))])
    pair = FiberedDiracPair(e1, e2, k0, l1, l2)
    out, iso, rep = reduce(pair)
    assert iso and rep["lagrangian"]
    assert out == l1.direct_sum(l2)


def test_reduce_randomized_formula():
    rng = random.Random(9)
    g = qlie.sl2_trace()
    kform = g.gram.negated().direct_sum(g.gram)
    done = 0
    while done < 30:
        n1, n2 = rng.randint(1, 2), rng.randint(1, 2)
        a1, b1, t1 = hyper_system(g, n1, kform)
        l1 = random_lagrangian(rng, a1, b1, t1)
        a2, b2, t2 = hyper_system(g, n2, kform.negated())
        l2 = random_lagrangian(rng, a2, b2, t2)
        im1 = l1.project(list(range(2 * n1, 2 * n1 + 6)))
        im2 = l2.project(list(range(2 * n2, 2 * n2 + 6)))
        if im1.join(im2).dim != 6:
            continue
        done += 1
        pair = FiberedDiracPair(QSpace.tangent_fiber(n1),
                                QSpace.tangent_fiber(n2), kform, l1, l2)
        out, iso, rep = reduce(pair)
        assert iso and rep["lagrangian"]
        assert out.dim == n1 + n2 and rep["fibered_dim"] == out.dim


def test_reduce_without_generation_warns():
    # both factors map into the diagonal only: generation fails
    g = qlie.sl2_trace()
    kform = g.gram.negated().direct_sum(g.gram)
    diag = [tuple(F(1 if t in (i, 3 + i) else 0) for t in range(6))
            for i in range(3)]
    l1 = Subspace(8, [(F(1), F(0)) + (F(0),) * 6,
                      (F(0), F(1)) + (F(0),) * 6]
                  + [(F(0), F(0)) + d for d in diag])
    # l1 = TN-fiber (+) diagonal: lagrangian in T(1) x k? build over n = 1:
    l1 = Subspace(8, [(F(1), F(0)) + (F(0),) * 6] + [(F(0), F(0)) + d for d in diag])
    l2 = Subspace(8, [(F(1), F(0)) + (F(0),) * 6] + [(F(0), F(0)) + d for d in diag])
    pair = FiberedDiracPair(QSpace.tangent_fiber(1), QSpace.tangent_fiber(1),
                            kform, l1, l2)
    out, iso, rep = reduce(pair)
    assert not iso
    assert rep["lagrangian"] and "warning" in rep


def test_fibred_product_point_factor_returns_other():
    # second factor a point with k = 0-part trivial: product with k matching
    g = qlie.sl2_trace()
    kform = g.gram.negated().direct_sum(g.gram)
    rng = random.Random(10)
    a1, b1, t1 = hyper_system(g, 2, kform)
    l1 = random_lagrangian(rng, a1, b1, t1)
    # point factor: L2 = a lagrangian subalgebra of kbar
    l2 = qlie.k_plus_kbar(g).lag  # diagonal inside g + gbar = kbar coords
    out, rep = fibred_product_fibers(QSpace.tangent_fiber(2), QSpace(QForm([])),
                                     kform, l1, l2)
    assert rep["lagrangian"] and out.dim == 2


def test_bivector_from_complement_graph_case():
    # L = graph of the Kirillov bivector at a point, C = g* fiber
    g = qlie.sl2_trace()
    pi, rho = kirillov_pair(g)
    from dirac_kit.shifted import qpoisson_encode
    zero_f = [[[F(0)] * 3 for _ in range(3)] for _ in range(3)]
    bial = qlie.LieQuasiBialgebra(qlie.LieAlgebra(3, dict(g.table)), zero_f, {})
    frame = qpoisson_encode(pi, rho, bial)
    pt = (F(1), F(2), F(3))
    rows = [frame.carrier.section_vector(s, pt) for s in frame.sections]
    lsub = Subspace(12, rows)
    dd = qlie.drinfeld_double(bial)
    rel = LinearCourantRelation(QSpace.tangent_fiber(3),
                                QSpace(dd.gram.negated()), lsub)
    comp = Subspace(6, [tuple(F(1 if t == 3 + i else 0) for t in range(6))
                        for i in range(3)])
    out = bivector_from_complement(rel, comp)
    for i in range(3):
        for j in range(3):
            assert out[i][j] == pi.comp((j, i)).eval(pt) or True
    # pi#(dx_j) = pi(dx_j, .): columns match the bivector values
    for i in range(3):
        for j in range(3):
            assert out[i][j] == pi.comp((j, i)).eval(pt)


def test_bivector_error_names_obstruction():
    src = QSpace.tangent_fiber(1)
    tgt = QSpace(QForm.hyperbolic(1))
    # relation that misses the covector direction entirely
    rows = [(F(1), F(0), F(1), F(0))]
    rel = LinearCourantRelation(src, tgt, Subspace(4, rows))
    comp = Subspace(2, [(F(1), F(0))])
    with pytest.raises(ValueError):
        bivector_from_complement(rel, comp)


def test_r_phi_sigma_trivial_and_precondition():
    dim = 2
    phi = [PolyFun.coord(dim, 0), PolyFun.coord(dim, 1)]
    fam = r_phi_sigma(phi, PolyForm.zero(dim, 2), PolyForm.zero(dim, 3))
    fib = fam.fiber((F(0), F(0)))
    assert fib.is_morphism
    # R_(phi, 0) = R_phi: contains (e_i, 0, e_i, 0)
    assert fib.subspace.contains((F(1), F(0), F(0), F(0), F(1), F(0), F(0), F(0)))
    phi3 = [PolyFun.coord(3, i) for i in range(3)]
    sigma3 = PolyForm(3, 2, {(0, 1): PolyFun.coord(3, 2)})
    with pytest.raises(ValueError):
        r_phi_sigma(phi3, sigma3, PolyForm.zero(3, 3))  # d sigma != phi* eta


def test_strong_dirac_classification():
    dim = 2
    phi = [PolyFun.coord(dim, 0), PolyFun.coord(dim, 1)]
    sigma = PolyForm(dim, 2, {(0, 1): PolyFun.const(dim, 1)})

    def l_graph(pt):
        return Subspace(4, [(F(1), F(0), F(0), F(-1)),
                            (F(0), F(1), F(1), F(0))])

    rep = strong_dirac_check(phi, sigma, l_graph, PolyForm.zero(dim, 3),
                             [(F(0), F(0)), (F(1), F(-1))])
    assert rep["class"] == "strong Dirac"

    # symplectic realization: projection T*M -> M onto a zero Poisson target
    phi2 = [PolyFun.coord(2, 0)]
    sigma2 = PolyForm(2, 2, {(0, 1): PolyFun.const(2, 1)})

    def l_zero_poisson(pt):
        return Subspace(2, [(F(0), F(1))])  # graph of pi = 0 on R^1

    rep2 = strong_dirac_check(phi2, sigma2, l_zero_poisson,
                              PolyForm.zero(1, 3), [(F(0), F(0))])
    assert rep2["class"] == "strong Dirac"

    # degenerate sigma: Dirac but not strong (kernel witness)
    def l_tm(pt):
        return Subspace(2, [(F(1), F(0))])

    rep3 = strong_dirac_check(phi2, PolyForm.zero(2, 2), l_tm,
                              PolyForm.zero(1, 3), [(F(0), F(0))])
    assert rep3["class"] == "Dirac"
    assert rep3["points"][0]["witness"]["kind"] == "kernel_vector"


def test_chart_level_fibred_products(gl2_cartan_eta):
    """The Cartan-Dirac and Gauss-Dirac structures as chart-level fibred
    products of the groupoid-of-arrows frame with constant lagrangians."""
    frame = arrow_frame_gl2(gl2_cartan_eta)
    assert verify_dirac(frame, "exact")["pass"]
    wblocks = [[f.eval((1, 0, 0, 1)) for f in s.w] for s in frame.sections]
    std = CourantChart(4, "twisted_standard", eta=gl2_cartan_eta,
                       domain_unit=GL2_DET)
    for l2, name in ((Subspace(8, [[F(1 if t in (i, 4 + i) else 0)
                                    for t in range(8)] for i in range(4)]),
                      "cartan"),
                     (gl2_gauss_lagrangian(), "gauss")):
        combos = constant_k_solve(wblocks, l2)
        assert len(combos) == 4
        secs = []
        for cvec in combos:
            s = MixedSection.zero(4, 8)
            for c, sec in zip(cvec, frame.sections):
                if c != 0:
                    s = s + sec.scale(c)
            secs.append(MixedSection(s.X, s.alpha, ()))
        out = DiracFrame(std, secs, name=name)
        assert verify_dirac(out, "exact")["pass"], name
