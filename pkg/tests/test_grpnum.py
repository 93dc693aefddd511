"""Matrix-group layer: Maurer-Cartan evaluation, finite differences, and the
pointwise verification suites."""

import math
import random
from fractions import Fraction as F

import numpy as np
import pytest

from dirac_kit.grpnum import matops as mo
from dirac_kit.grpnum.charts import TangentVec, group_chart
from dirac_kit.grpnum.forms import (CartanThreeForm, Domain, PairingForm,
                                    PullbackForm, fd_ext_d, polwie_omega,
                                    polwie_theta)
from dirac_kit.grpnum.moment import g0_suite, gauss_cartan_suite, luwei_suite
from dirac_kit.grpnum.suites import (Settings, amm_suite, arrow_suite,
                                     ca_suite, polwie_suite)

FAST = Settings(samples=6, exact_points=2)


def test_mc_eval():
    chart = group_chart("sl2r")
    g = mo.mat_exact([[1, F(1, 2)], [0, 1]])
    u = chart.basis[2]
    t = TangentVec(g, u)
    assert chart.mc_right(t) == u
    want = mo.mmul(mo.minv(g), mo.mmul(u, g))
    assert chart.mc_left(t) == want
    # Ad-invariance of the pairing between left and right readings
    rng = random.Random(0)
    for _ in range(5):
        g = chart.sample_rational(rng, 1)[0]
        u1, u2 = chart.random_alg_rational(rng), chart.random_alg_rational(rng)
        t1, t2 = TangentVec(g, u1), TangentVec(g, u2)
        assert chart.pair(chart.mc_left(t1), chart.mc_left(t2)) == \
            chart.pair(chart.mc_right(t1), chart.mc_right(t2))


def test_rational_samplers_stay_in_group():
    rng = random.Random(1)
    sl2 = group_chart("sl2r")
    for g in sl2.sample_rational(rng, 6):
        assert g[0][0] * g[1][1] - g[0][1] * g[1][0] == 1
    su2 = group_chart("su2")
    for g in su2.sample_rational(rng, 6):
        gt = mo.mat_exact([[g[j][i] for j in range(4)] for i in range(4)])
        assert mo.mmul(gt, g) == mo.identity(4)


def test_fd_matches_maurer_cartan_equation():
    # d<u, theta^r> = -<u, (1/2)[theta^r, theta^r]> with the right-invariant
    # bracket convention
    chart = group_chart("su2")
    dom = Domain([chart])

    class MCOne:
        domain = dom
        arity = 1

        def __init__(self, u):
            self.u = mo.to_float(u)

        def eval(self, point, vectors):
            g = point[0]
            return float(chart.pair(self.u, vectors[0][0] @ np.linalg.inv(g)))

    rng = random.Random(2)
    u = chart.random_alg_float(rng)
    form = MCOne(u)
    for _ in range(3):
        p = dom.random_point_float(rng)
        v1 = dom.random_tangent_float(rng, p)
        v2 = dom.random_tangent_float(rng, p)
        got = fd_ext_d(form, p, [v1, v2], 1e-5)
        r1 = v1[0] @ np.linalg.inv(p[0])
        r2 = v2[0] @ np.linalg.inv(p[0])
        # (1/2)[theta, theta](v1, v2) = [theta(v1), theta(v2)]
        want = -float(chart.pair(u, mo.bracket_right_invariant(r1, r2)))
        assert abs(got - want) < 1e-6


def test_fd_richardson_improves():
    # the left Maurer-Cartan 1-form varies along the right-invariant flows
    # used by the differencer, so its truncation error is visible; halving
    # the step divides it by ~4 and Richardson extrapolation beats both
    chart = group_chart("su2")
    dom = Domain([chart])

    class LeftMC:
        domain = dom
        arity = 1

        def __init__(self, u):
            self.u = mo.to_float(u)

        def eval(self, point, vectors):
            g = point[0]
            return float(chart.pair(self.u, np.linalg.inv(g) @ vectors[0][0]))

    rng = random.Random(33)
    u = chart.random_alg_float(rng)
    form = LeftMC(u)
    p = dom.random_point_float(rng)
    v1 = dom.random_tangent_float(rng, p)
    v2 = dom.random_tangent_float(rng, p)
    gi = np.linalg.inv(p[0])
    l1, l2 = gi @ v1[0], gi @ v2[0]
    # d theta^l = -theta^l ^ theta^l for matrix groups, hence
    # d<u, theta^l>(v1, v2) = -<u, [theta^l v1, theta^l v2]_matrix>
    exact = -float(chart.pair(u, l1 @ l2 - l2 @ l1))
    err = abs(fd_ext_d(form, p, [v1, v2], 5e-2) - exact)
    err_half = abs(fd_ext_d(form, p, [v1, v2], 2.5e-2) - exact)
    err_rich = abs(fd_ext_d(form, p, [v1, v2], 5e-2, richardson=True) - exact)
    assert err > 1e-9  # a visible truncation error at this step
    assert 2.0 < err / err_half < 8.0  # second-order central differences
    assert err_rich < err / 4
    with pytest.raises(ValueError):
        fd_ext_d(form, p, [v1, v2], 0.0)


def test_form_evaluators_antisymmetric_multilinear():
    chart = group_chart("su2")
    dom = Domain([chart, chart])
    omega = polwie_omega(dom, 0, 1)
    rng = random.Random(4)
    p = dom.random_point_rational(rng)
    v = dom.random_tangent_rational(rng, p)
    w = dom.random_tangent_rational(rng, p)
    assert omega.eval(p, [v, w]) == -omega.eval(p, [w, v])
    two_v = tuple(mo.mscale(2, x) for x in v)
    assert omega.eval(p, [two_v, w]) == 2 * omega.eval(p, [v, w])
    theta = polwie_theta(Domain([chart]), 0)
    p1 = (p[0],)
    vs = [(mo.mmul(chart.basis[i], p[0]),) for i in range(3)]
    assert theta.eval(p1, [vs[0], vs[0], vs[1]]) == 0


def test_theta_at_identity_value():
    # Theta(u^r, v^r, w^r)|_1 = -(1/2) <u, [v, w]>
    chart = group_chart("sl2r")
    theta = polwie_theta(Domain([chart]), 0)
    e, f, h = chart.basis
    ident = chart.identity()
    got = theta.eval((ident,), [(e,), (f,), (h,)])
    want = -chart.pair(e, chart.bracket(f, h)) / 2
    assert got == want


def test_polwie_suite_groups():
    for name in ("su2", "sl2r"):
        rep = polwie_suite(group_chart(name), FAST)
        assert rep["pass"], rep


def test_polwie_abelian_exact_zero():
    rep = polwie_suite(group_chart("ab2"), FAST)
    assert rep["pass"]
    for c in rep["checks"]:
        assert c["max_residual"] == 0.0 or c["max_residual"] < 1e-10


def test_amm_suite():
    rep = amm_suite(group_chart("su2"), FAST)
    assert rep["pass"], rep


def test_arrow_suite():
    for name in ("su2", "ab2"):
        rep = arrow_suite(group_chart(name), FAST)
        assert rep["pass"], rep


def test_ca_suite():
    rep = ca_suite(group_chart("su2"), FAST)
    assert rep["pass"], rep


def test_g0_suite():
    rep = g0_suite(group_chart("sl2r"), FAST)
    assert rep["pass"], rep


def test_gauss_cartan_suite():
    rep = gauss_cartan_suite(group_chart("sl2r"), FAST)
    assert rep["pass"], rep
    rep2 = gauss_cartan_suite(group_chart("su2"), FAST)
    assert rep2["pass"], rep2
    assert not any("gauss_equality" in c["check"] for c in rep2["checks"])


def test_luwei_suite():
    rep = luwei_suite(group_chart("sl2r"), FAST)
    assert rep["pass"], rep
    with pytest.raises(ValueError):
        luwei_suite(group_chart("su2"), FAST)


def test_polwie_value_at_units():
    # Omega at (1,1) on ((u,0),(0,v)) is -(1/2)<u,v>
    chart = group_chart("sl2r")
    dom = Domain([chart, chart])
    omega = polwie_omega(dom, 0, 1)
    ident = chart.identity()
    zero = mo.mscale(0, ident)
    for u in chart.basis:
        for v in chart.basis:
            got = omega.eval((ident, ident), [(u, zero), (zero, v)])
            assert got == -chart.pair(u, v) / 2
