"""Pointwise verification suites for the explicit group-level structures:
the 2-shifted symplectic form on a quadratic group, the AMM groupoid, the
groupoid of arrows, and the CA-groupoid structure maps.

Each suite emits JSON-able check records {check, points, max_residual,
tolerance, pass}.  Derivative-free identities are evaluated exactly at
rational sample points and within 1e-9 at floating ones; exterior
derivatives use central differences (1e-6 tolerance at step 1e-5).
"""

from __future__ import annotations

import random
from fractions import Fraction

import numpy as np

from ..exactla import QForm, Subspace, lagrangian_class
from ..shifted import pairing_from_omega2
from . import matops as mo
from .charts import DEFAULT_SEED, MatrixGroupChart, group_chart
from .forms import (CartanThreeForm, Domain, FormEvaluator, GroupWord,
                    PairingForm, PullbackForm, SumForm, fd_ext_d,
                    polwie_omega, polwie_theta, product_omega, product_theta)


class Settings:
    """Default float tolerances and sampling controls (all overridable)."""

    def __init__(self, seed: int = DEFAULT_SEED, samples: int = 16,
                 tol: float = 1e-9, fd_tol: float = 1e-6,
                 fd_step: float = 1e-5, exact_points: int = 6):
        self.seed = seed
        self.samples = samples
        self.tol = tol
        self.fd_tol = fd_tol
        self.fd_step = fd_step
        self.exact_points = exact_points

    def derived(self, tag: str) -> random.Random:
        return random.Random((self.seed, tag).__repr__())


def _check(name: str, points: int, max_residual, tol, ok=None, **extra) -> dict:
    if ok is None:
        ok = float(max_residual) <= tol
    rec = {"check": name, "points": points,
           "max_residual": float(max_residual), "tolerance": float(tol),
           "pass": bool(ok)}
    rec.update(extra)
    return rec


def _max(a, b):
    return a if float(a) >= float(b) else b


def _exact_zero(x) -> bool:
    return isinstance(x, Fraction) and x == 0


# -- eq:polwie ----------------------------------------------------------------

def polwie_suite(chart: MatrixGroupChart, settings: Settings | None = None) -> dict:
    st = settings or Settings()
    checks = []
    dom2 = Domain([chart, chart])
    omega = polwie_omega(dom2, 0, 1)
    theta = polwie_theta(Domain([chart]), 0)

    # exact gram recovery at units via the 2-pairing formula
    ident = chart.identity()

    def omega_eval(pair1, pair2):
        def tangent(pair):
            first, second = pair
            z = mo.mscale(0, ident)
            return (first if first is not None else z,
                    second if second is not None else z)
        return omega.eval((ident, ident), [tangent(pair1), tangent(pair2)])

    recovered = pairing_from_omega2(omega_eval, chart.basis)
    gram_ok = isinstance(recovered, QForm) and recovered == chart.gram
    checks.append(_check("polwie.gram_recovered_at_units", chart.dim ** 2,
                         0 if gram_ok else 1, 0, ok=gram_ok))

    # delta Omega = 0 on composable triples
    dom3 = Domain([chart, chart, chart])
    faces = [
        [[(1, 1)], [(2, 1)]],
        [[(0, 1), (1, 1)], [(2, 1)]],
        [[(0, 1)], [(1, 1), (2, 1)]],
        [[(0, 1)], [(1, 1)]],
    ]
    delta_omega = SumForm(dom3, [((-1) ** i, PullbackForm(dom3, [dom3.word(w) for w in ws], omega))
                                 for i, ws in enumerate(faces)])
    rng = st.derived("polwie.delta")
    worst = 0.0
    for _ in range(st.samples):
        p = dom3.random_point_float(rng)
        v1 = dom3.random_tangent_float(rng, p)
        v2 = dom3.random_tangent_float(rng, p)
        worst = _max(worst, abs(delta_omega.eval(p, [v1, v2])))
    checks.append(_check("polwie.delta_omega_float", st.samples, worst, st.tol))

    rngq = st.derived("polwie.delta_exact")
    exact_ok = True
    for _ in range(st.exact_points):
        p = dom3.random_point_rational(rngq)
        v1 = dom3.random_tangent_rational(rngq, p)
        v2 = dom3.random_tangent_rational(rngq, p)
        if not _exact_zero(delta_omega.eval(p, [v1, v2])):
            exact_ok = False
    checks.append(_check("polwie.delta_omega_exact", st.exact_points,
                         0 if exact_ok else 1, 0, ok=exact_ok))

    # d Theta = 0 by finite differences
    dom1 = Domain([chart])
    rng = st.derived("polwie.dtheta")
    worst = 0.0
    for _ in range(max(2, st.samples // 2)):
        p = dom1.random_point_float(rng)
        vs = [dom1.random_tangent_float(rng, p) for _ in range(4)]
        worst = _max(worst, abs(fd_ext_d(theta, p, vs, st.fd_step)))
    checks.append(_check("polwie.d_theta_fd", max(2, st.samples // 2),
                         worst, st.fd_tol))

    # delta Theta + d Omega = 0 on pairs
    delta_theta = SumForm(dom2, [
        (1, PullbackForm(dom2, [dom2.word([(1, 1)])], theta)),
        (-1, PullbackForm(dom2, [dom2.word([(0, 1), (1, 1)])], theta)),
        (1, PullbackForm(dom2, [dom2.word([(0, 1)])], theta)),
    ])
    rng = st.derived("polwie.closed")
    worst = 0.0
    for _ in range(max(2, st.samples // 2)):
        p = dom2.random_point_float(rng)
        vs = [dom2.random_tangent_float(rng, p) for _ in range(3)]
        resid = fd_ext_d(omega, p, vs, st.fd_step) + delta_theta.eval(p, vs)
        worst = _max(worst, abs(resid))
    checks.append(_check("polwie.delta_theta_plus_d_omega_fd",
                         max(2, st.samples // 2), worst, st.fd_tol))

    return {"suite": "polwie", "group": chart.name, "checks": checks,
            "pass": all(c["pass"] for c in checks)}


# -- AMM groupoid -------------------------------------------------------------

def _amm_form(chart: MatrixGroupChart):
    dom = Domain([chart, chart])
    beta_half = PairingForm(dom, Fraction(1, 2), 0, "l", 1, "r")
    conj = [dom.word([(0, 1), (1, 1), (0, -1)]), dom.word([(0, 1)])]
    return SumForm(dom, [(1, beta_half), (-1, PullbackForm(dom, conj, beta_half))]), dom


def amm_suite(chart: MatrixGroupChart, settings: Settings | None = None) -> dict:
    st = settings or Settings()
    checks = []
    omega, dom = _amm_form(chart)
    eta = polwie_theta(Domain([chart]), 0)

    # normalization at units
    rngq = st.derived("amm.unit")
    ok = True
    for _ in range(st.exact_points):
        gamma = chart.sample_rational(rngq, 1)[0]
        p = (chart.identity(), gamma)
        for v in dom.basis_tangents(p):
            for w in dom.basis_tangents(p):
                val = omega.eval(p, [tuple(x if i == 1 else mo.mscale(0, x)
                                           for i, x in enumerate(v)),
                                     tuple(x if i == 1 else mo.mscale(0, x)
                                           for i, x in enumerate(w))])
                if not _exact_zero(val):
                    ok = False
    checks.append(_check("amm.unit_normalization_exact", st.exact_points,
                         0 if ok else 1, 0, ok=ok))

    # multiplicativity: delta omega = 0 on composables (k1, k2, gamma)
    dom3 = Domain([chart, chart, chart])
    pr1 = [dom3.word([(0, 1)]), dom3.word([(1, 1), (2, 1), (1, -1)])]
    pr2 = [dom3.word([(1, 1)]), dom3.word([(2, 1)])]
    mm = [dom3.word([(0, 1), (1, 1)]), dom3.word([(2, 1)])]
    delta = SumForm(dom3, [(1, PullbackForm(dom3, pr1, omega)),
                           (1, PullbackForm(dom3, pr2, omega)),
                           (-1, PullbackForm(dom3, mm, omega))])
    rng = st.derived("amm.delta")
    worst = 0.0
    for _ in range(st.samples):
        p = dom3.random_point_float(rng)
        v1 = dom3.random_tangent_float(rng, p)
        v2 = dom3.random_tangent_float(rng, p)
        worst = _max(worst, abs(delta.eval(p, [v1, v2])))
    checks.append(_check("amm.multiplicativity_float", st.samples, worst, st.tol))

    rngq = st.derived("amm.delta_exact")
    ok = True
    for _ in range(st.exact_points):
        p = dom3.random_point_rational(rngq)
        v1 = dom3.random_tangent_rational(rngq, p)
        v2 = dom3.random_tangent_rational(rngq, p)
        if not _exact_zero(delta.eval(p, [v1, v2])):
            ok = False
    checks.append(_check("amm.multiplicativity_exact", st.exact_points,
                         0 if ok else 1, 0, ok=ok))

    # d omega = s* eta - t* eta
    s_eta = PullbackForm(dom, [dom.word([(1, 1)])], eta)
    t_eta = PullbackForm(dom, [dom.word([(0, 1), (1, 1), (0, -1)])], eta)
    rhs = SumForm(dom, [(1, s_eta), (-1, t_eta)])
    rng = st.derived("amm.structure")
    worst = 0.0
    for _ in range(max(2, st.samples // 2)):
        p = dom.random_point_float(rng)
        vs = [dom.random_tangent_float(rng, p) for _ in range(3)]
        resid = fd_ext_d(omega, p, vs, st.fd_step) - rhs.eval(p, vs)
        worst = _max(worst, abs(resid))
    checks.append(_check("amm.d_omega_eq_s_eta_minus_t_eta_fd",
                         max(2, st.samples // 2), worst, st.fd_tol))

    # nondegeneracy ranks at sampled base points
    rng = st.derived("amm.rank")
    d = chart.dim
    ok = True
    min_sv = float("inf")
    for _ in range(st.samples):
        gamma = chart.sample_float(rng, 1)[0]
        p = (np.eye(chart.n), gamma)
        tangents = dom.basis_tangents(p)
        rows = []
        tword = dom.word([(0, 1), (1, 1), (0, -1)])
        for v in tangents:
            row = []
            # Ts: velocity of the gamma-slot, in algebra coordinates
            srep = mo.mmul(v[1], mo.minv(p[1]))
            row.extend(float(x) for x in _float_coords(chart, srep))
            tval, tdiff = tword.value_and_diff(p, v)
            trep = mo.mmul(tdiff, mo.minv(tval))
            row.extend(float(x) for x in _float_coords(chart, trep))
            for w in tangents:
                row.append(float(omega.eval(p, [v, w])))
            rows.append(row)
        a = np.array(rows)
        sv = np.linalg.svd(a, compute_uv=False)
        min_sv = min(min_sv, float(sv[2 * d - 1] / max(sv[0], 1e-300)))
        if mo.rank_numeric(rows) != 2 * d:
            ok = False
    checks.append(_check("amm.nondegeneracy_rank", st.samples,
                         0 if ok else 1, 0, ok=ok, min_rel_sv=min_sv))
    checks.append(_check("amm.dim_clause", 1, 0, 0,
                         ok=True, dims={"groupoid": 2 * d, "base": d}))

    return {"suite": "amm", "group": chart.name, "checks": checks,
            "pass": all(c["pass"] for c in checks)}


def _float_coords(chart: MatrixGroupChart, u) -> list[float]:
    flat = np.array([[float(x) for row in b for x in row] for b in chart.basis]).T
    target = np.array([float(x) for row in mo.to_float(u) for x in row])
    sol, *_ = np.linalg.lstsq(flat, target, rcond=None)
    return [float(x) for x in sol]


def _exact_coords(chart: MatrixGroupChart, u) -> list[Fraction]:
    return chart.alg_coords(u)


# -- groupoid of arrows -------------------------------------------------------

def _arrow_sigma(chart: MatrixGroupChart):
    """sigma on G^I in coordinates (g1, g2, gamma)."""
    dom = Domain([chart, chart, chart])
    dom2 = Domain([chart, chart])
    omega = polwie_omega(dom2, 0, 1)
    first = PullbackForm(dom, [dom.word([(0, 1), (2, 1), (1, -1)]),
                               dom.word([(1, 1)])], omega)
    second = PullbackForm(dom, [dom.word([(0, 1)]), dom.word([(2, 1)])], omega)
    return SumForm(dom, [(1, first), (-1, second)]), dom, omega, dom2


def arrow_frame_rows(chart: MatrixGroupChart, gamma) -> list[list[Fraction]]:
    """eq:dir-arr fiber rows at gamma, in right-trivialized coordinates
    (T-rep | covector on the rep basis | u | v)."""
    d = chart.dim
    rows = []
    gi = mo.minv(gamma)
    for src in range(2 * d):
        u = chart.basis[src] if src < d else mo.mscale(0, chart.basis[0])
        v = chart.basis[src - d] if src >= d else mo.mscale(0, chart.basis[0])
        x_rep = mo.msub(u, mo.mmul(gamma, mo.mmul(v, gi)))
        row = list(_exact_coords(chart, x_rep))
        for j in range(d):
            ej = chart.basis[j]
            val = (chart.pair(ej, u) + chart.pair(mo.mmul(gi, mo.mmul(ej, gamma)), v))
            row.append(val / 2)
        row.extend(_exact_coords(chart, u))
        row.extend(_exact_coords(chart, v))
        rows.append(row)
    return rows


def arrow_ambient_form(chart: MatrixGroupChart) -> QForm:
    """Pairing on the T + T* + (gbar x g) fiber in trivialized coordinates."""
    d = chart.dim
    tangent = QForm.hyperbolic(d)
    kbar = chart.gram.negated().direct_sum(chart.gram)
    return tangent.direct_sum(kbar)


def arrow_suite(chart: MatrixGroupChart, settings: Settings | None = None) -> dict:
    st = settings or Settings()
    checks = []
    sigma, dom, omega, dom2 = _arrow_sigma(chart)

    # delta sigma = ev* Omega_D on composables (ha, hb, g1, g2, gamma)
    dom5 = Domain([chart] * 5)
    pr1 = [dom5.word([(0, 1)]), dom5.word([(1, 1)]),
           dom5.word([(2, 1), (4, 1), (3, -1)])]
    pr2 = [dom5.word([(2, 1)]), dom5.word([(3, 1)]), dom5.word([(4, 1)])]
    mm = [dom5.word([(0, 1), (2, 1)]), dom5.word([(1, 1), (3, 1)]),
          dom5.word([(4, 1)])]
    dom4 = Domain([chart] * 4)
    omega_d = product_omega(dom4, [0, 1], [2, 3], [-1, 1])
    phi_words = [dom5.word([(0, 1)]), dom5.word([(1, 1)]),
                 dom5.word([(2, 1)]), dom5.word([(3, 1)])]
    delta = SumForm(dom5, [(1, PullbackForm(dom5, pr1, sigma)),
                           (1, PullbackForm(dom5, pr2, sigma)),
                           (-1, PullbackForm(dom5, mm, sigma)),
                           (-1, PullbackForm(dom5, phi_words, omega_d))])
    rng = st.derived("arrows.delta")
    worst = 0.0
    for _ in range(st.samples):
        p = dom5.random_point_float(rng)
        v1 = dom5.random_tangent_float(rng, p)
        v2 = dom5.random_tangent_float(rng, p)
        worst = _max(worst, abs(delta.eval(p, [v1, v2])))
    checks.append(_check("arrows.delta_sigma_eq_ev_omega_float", st.samples,
                         worst, st.tol))
    rngq = st.derived("arrows.delta_exact")
    ok = True
    for _ in range(st.exact_points):
        p = dom5.random_point_rational(rngq)
        v1 = dom5.random_tangent_rational(rngq, p)
        v2 = dom5.random_tangent_rational(rngq, p)
        if not _exact_zero(delta.eval(p, [v1, v2])):
            ok = False
    checks.append(_check("arrows.delta_sigma_eq_ev_omega_exact",
                         st.exact_points, 0 if ok else 1, 0, ok=ok))

    # eq:dir-arr spans a lagrangian subspace at samples
    rngq = st.derived("arrows.frame")
    form = arrow_ambient_form(chart)
    ok = True
    for _ in range(st.exact_points):
        gamma = chart.sample_rational(rngq, 1)[0]
        sub = Subspace(2 * chart.dim + 2 * chart.dim,
                       arrow_frame_rows(chart, gamma))
        if sub.dim != 2 * chart.dim or lagrangian_class(sub, form) != "lagrangian":
            ok = False
    checks.append(_check("arrows.dir_arr_lagrangian_exact", st.exact_points,
                         0 if ok else 1, 0, ok=ok))

    # identity fiber equals the Cartan splitting image of g + g
    gamma = chart.identity()
    sub = Subspace(4 * chart.dim, arrow_frame_rows(chart, gamma))
    cart = []
    for src in range(2 * chart.dim):
        d = chart.dim
        u = chart.basis[src] if src < d else mo.mscale(0, chart.basis[0])
        v = chart.basis[src - d] if src >= d else mo.mscale(0, chart.basis[0])
        row = list(_exact_coords(chart, mo.msub(u, v)))
        for j in range(d):
            row.append((chart.pair(chart.basis[j], u)
                        + chart.pair(chart.basis[j], v)) / 2)
        row.extend(_exact_coords(chart, u))
        row.extend(_exact_coords(chart, v))
        cart.append(row)
    ok = sub == Subspace(4 * chart.dim, cart)
    checks.append(_check("arrows.identity_fiber_cartan_splitting", 1,
                         0 if ok else 1, 0, ok=ok))

    # inversion identity i* sigma = -sigma + Phi* Omega-hat
    inv_words = [dom.word([(0, -1)]), dom.word([(1, -1)]),
                 dom.word([(0, 1), (2, 1), (1, -1)])]
    omega_d4 = product_omega(dom4, [0, 1], [2, 3], [-1, 1])
    dom2b = Domain([chart, chart])
    hat = PullbackForm(dom2b, [dom2b.word([(0, 1)]), dom2b.word([(1, 1)]),
                               dom2b.word([(0, -1)]), dom2b.word([(1, -1)])],
                       omega_d4)
    lhs = SumForm(dom, [(1, PullbackForm(dom, inv_words, sigma)),
                        (1, sigma),
                        (-1, PullbackForm(dom, [dom.word([(0, 1)]),
                                                dom.word([(1, 1)])], hat))])
    rngq = st.derived("arrows.inv")
    ok = True
    worst = 0.0
    for _ in range(st.exact_points):
        p = dom.random_point_rational(rngq)
        v1 = dom.random_tangent_rational(rngq, p)
        v2 = dom.random_tangent_rational(rngq, p)
        val = lhs.eval(p, [v1, v2])
        if not _exact_zero(val):
            ok = False
    checks.append(_check("arrows.inversion_identity_exact", st.exact_points,
                         0 if ok else 1, 0, ok=ok))
    rng = st.derived("arrows.invf")
    for _ in range(st.samples):
        p = dom.random_point_float(rng)
        v1 = dom.random_tangent_float(rng, p)
        v2 = dom.random_tangent_float(rng, p)
        worst = _max(worst, abs(lhs.eval(p, [v1, v2])))
    checks.append(_check("arrows.inversion_identity_float", st.samples,
                         worst, st.tol))

    return {"suite": "arrows", "group": chart.name, "checks": checks,
            "pass": all(c["pass"] for c in checks)}


# -- CA-groupoid structure maps ----------------------------------------------

def ca_suite(chart: MatrixGroupChart, settings: Settings | None = None) -> dict:
    st = settings or Settings()
    checks = []
    dom2 = Domain([chart, chart])
    omega = polwie_omega(dom2, 0, 1)
    ident = chart.identity()

    def omega_at(p1, p2, t1_pair, t2_pair):
        return omega.eval((p1, p2), [t1_pair, t2_pair])

    def zeta_cov(u, v, k, x_amb):
        z = mo.mscale(0, ident)
        first = omega_at(ident, k, (z, x_amb), (u, z))
        second = omega_at(k, ident, (x_amb, z), (z, v))
        return first - second

    def e_omega(u, v, k):
        ki = mo.minv(k)
        x_rep = mo.msub(u, mo.mmul(k, mo.mmul(v, ki)))
        x_amb = mo.mmul(x_rep, k)
        return x_rep, x_amb

    rngq = st.derived("ca.roundtrip")
    ok_round = True
    ok_pair = True
    for _ in range(st.exact_points):
        k = chart.sample_rational(rngq, 1)[0]
        z = mo.mscale(0, ident)
        for i in range(chart.dim):
            for j in range(chart.dim):
                u, v = chart.basis[i], chart.basis[j]
                x_rep, x_amb = e_omega(u, v, k)
                for w in chart.basis:
                    # t_Omega(X + alpha)(w) = alpha(w^r) + Omega_(1,k)((0,X),(w,0))
                    alpha_wr = zeta_cov(u, v, k, mo.mmul(w, k))
                    t_val = alpha_wr + omega_at(ident, k, (z, x_amb), (w, z))
                    alpha_wl = zeta_cov(u, v, k, mo.mmul(k, w))
                    s_val = alpha_wl + omega_at(k, ident, (x_amb, z), (z, w))
                    if t_val != chart.pair(u, w) or s_val != chart.pair(v, w):
                        ok_round = False
        for i in range(chart.dim):
            for j in range(chart.dim):
                u1, v1 = chart.basis[i], chart.basis[j]
                u2, v2 = chart.basis[(i + 1) % chart.dim], chart.basis[(j + 2) % chart.dim]
                x1_rep, x1_amb = e_omega(u1, v1, k)
                x2_rep, x2_amb = e_omega(u2, v2, k)
                pair = zeta_cov(u1, v1, k, x2_amb) + zeta_cov(u2, v2, k, x1_amb)
                if pair != chart.pair(u1, u2) - chart.pair(v1, v2):
                    ok_pair = False
    checks.append(_check("ca.st_roundtrip_exact", st.exact_points,
                         0 if ok_round else 1, 0, ok=ok_round))
    checks.append(_check("ca.e_omega_pairing_exact", st.exact_points,
                         0 if ok_pair else 1, 0, ok=ok_pair))

    rng = st.derived("ca.float")
    worst = 0.0
    for _ in range(st.samples):
        k = chart.sample_float(rng, 1)[0]
        z = np.zeros((chart.n, chart.n))
        i = rng.randrange(chart.dim)
        j = rng.randrange(chart.dim)
        u = mo.to_float(chart.basis[i])
        v = mo.to_float(chart.basis[j])
        ki = mo.minv(k)
        x_amb = u @ k - k @ v
        for w in chart.basis:
            wf = mo.to_float(w)
            t_val = zeta_cov(u, v, k, wf @ k) + omega_at(np.eye(chart.n), k,
                                                         (z, x_amb), (wf, z))
            worst = _max(worst, abs(t_val - float(chart.pair(chart.basis[i], w))))
    checks.append(_check("ca.st_roundtrip_float", st.samples, worst, st.tol))

    return {"suite": "ca_groupoid", "group": chart.name, "checks": checks,
            "pass": all(c["pass"] for c in checks)}
