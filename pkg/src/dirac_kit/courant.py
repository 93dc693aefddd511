"""Courant algebroid structures over affine charts.

Three flavors are supported: the eta-twisted standard Courant algebroid
T_eta M, the product T_eta M x k with a quadratic Lie algebra k, and action
Courant algebroids k_M for a quadratic k acting with coisotropic stabilizers.
Sections of the first two flavors are MixedSections; sections of an action
chart are k-valued tuples of PolyFun.

Dirac verification certificates: isotropy and involutivity of a frame are
established symbolically (for a half-rank isotropic frame, membership of a
bracket in the pointwise span is equivalent to the vanishing of its pairings
against the frame, which are polynomial residuals with an exact zero test);
pointwise independence is checked at structured rational points inside the
declared dense domain.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from typing import Iterable, Sequence

from .exactla import DimensionMismatch, Subspace, frac, invert, rank
from .polycal import (MixedSection, PolyForm, PolyFun, PolyMulti, ext_d,
                      interior, lie_derivative, schouten)
from .qlie import QuadLieAlgebra

FLAVORS = ("twisted_standard", "product", "action")


class FlavorMismatch(TypeError):
    pass


class RankDropError(ValueError):
    pass


class CourantChart:
    """A Courant algebroid over an affine chart R^dim.

    domain_unit, when set, declares the dense domain {unit != 0} on which
    pointwise claims (rank, stabilizers) are made.
    """

    def __init__(self, dim: int, flavor: str = "twisted_standard",
                 kalg: QuadLieAlgebra | None = None,
                 eta: PolyForm | None = None,
                 anchor_fields: Sequence[PolyMulti] | None = None,
                 domain_unit: PolyFun | None = None):
        if flavor not in FLAVORS:
            raise FlavorMismatch("unknown flavor %r" % flavor)
        self.dim = dim
        self.flavor = flavor
        self.kalg = kalg
        self.eta = eta if eta is not None else PolyForm.zero(dim, 3)
        if self.eta.degree != 3 or self.eta.chart_dim != dim:
            raise DimensionMismatch("eta must be a 3-form on the chart")
        if not ext_d(self.eta).is_zero:
            raise ValueError("twist eta is not closed")
        self.domain_unit = domain_unit
        if flavor == "action":
            if kalg is None or anchor_fields is None:
                raise FlavorMismatch("action flavor needs an algebra and anchor")
            if len(anchor_fields) != kalg.dim:
                raise DimensionMismatch("one anchor field per algebra basis vector")
            self.anchor_fields = list(anchor_fields)
        else:
            if flavor == "twisted_standard" and kalg is not None and kalg.dim:
                raise FlavorMismatch("twisted_standard carries no coefficients")
            self.anchor_fields = None

    # -- section plumbing ---------------------------------------------------

    @property
    def kdim(self) -> int:
        return self.kalg.dim if self.kalg is not None else 0

    @property
    def courant_rank(self) -> int:
        if self.flavor == "action":
            return self.kdim
        return 2 * self.dim + self.kdim

    def zero_section(self):
        if self.flavor == "action":
            return tuple(PolyFun.zero(self.dim) for _ in range(self.kdim))
        return MixedSection.zero(self.dim, self.kdim)

    def _check_section(self, s):
        if self.flavor == "action":
            if not isinstance(s, (tuple, list)) or len(s) != self.kdim:
                raise FlavorMismatch("action sections are k-valued tuples")
            return tuple(s)
        if not isinstance(s, MixedSection):
            raise FlavorMismatch("expected a MixedSection")
        if len(s.w) != self.kdim:
            raise DimensionMismatch("coefficient part has wrong length")
        return s

    def add(self, a, b):
        if self.flavor == "action":
            return tuple(x + y for x, y in zip(a, b))
        return a + b

    def sub(self, a, b):
        if self.flavor == "action":
            return tuple(x - y for x, y in zip(a, b))
        return a - b

    def mul_fun(self, s, f: PolyFun):
        if self.flavor == "action":
            return tuple(x * f for x in s)
        return s.mul_fun(f)

    def is_zero_section(self, s) -> bool:
        if self.flavor == "action":
            return all(x.is_zero for x in s)
        return s.is_zero

    def section_vector(self, s, point):
        if self.flavor == "action":
            return [f.eval(point) for f in s]
        return s.eval_vector(point)

    # -- structure maps -----------------------------------------------------

    def anchor(self, s) -> PolyMulti:
        s = self._check_section(s)
        if self.flavor == "action":
            out = PolyMulti.zero(self.dim, 1)
            for coeff, field in zip(s, self.anchor_fields):
                out = out + field.mul_fun(coeff)
            return out
        return s.X

    def pairing(self, a, b) -> PolyFun:
        a, b = self._check_section(a), self._check_section(b)
        if self.flavor == "action":
            return self._kpair(a, b)
        out = _contract(a.X, b.alpha) + _contract(b.X, a.alpha)
        if self.kdim:
            out = out + self._kpair(a.w, b.w)
        return out

    def _kpair(self, wa, wb) -> PolyFun:
        g = self.kalg.gram.gram
        out = PolyFun.zero(self.dim)
        for i, fa in enumerate(wa):
            if fa.is_zero:
                continue
            for j, fb in enumerate(wb):
                if g[i][j] != 0 and not fb.is_zero:
                    out = out + (fa * fb).scale(g[i][j])
        return out

    def _kbracket(self, wa, wb) -> tuple[PolyFun, ...]:
        out = [PolyFun.zero(self.dim) for _ in range(self.kdim)]
        for i, fa in enumerate(wa):
            if fa.is_zero:
                continue
            for j, fb in enumerate(wb):
                if fb.is_zero:
                    continue
                cb = self.kalg.bracket_basis(i, j)
                prod = fa * fb
                for k, c in enumerate(cb):
                    if c != 0:
                        out[k] = out[k] + prod.scale(c)
        return tuple(out)

    def _kdual(self, beta: PolyForm) -> tuple[PolyFun, ...]:
        """a*(beta) for the action flavor: <a*(beta), w> = beta(a(w))."""
        ginv = invert(self.kalg.gram.gram)
        raw = [_contract(field, beta) for field in self.anchor_fields]
        return tuple(sum((raw[j].scale(ginv[k][j]) for j in range(self.kdim)),
                         PolyFun.zero(self.dim)) for k in range(self.kdim))

    def dfun(self, f: PolyFun):
        """D f = a*(df)."""
        if self.flavor == "action":
            return self._kdual(ext_d(PolyForm.from_fun(f)))
        return MixedSection(PolyMulti.zero(self.dim, 1), ext_d(PolyForm.from_fun(f)),
                            tuple(PolyFun.zero(self.dim) for _ in range(self.kdim)))

    def dorfman(self, a, b):
        """The Courant-Dorfman bracket of this chart's flavor."""
        a, b = self._check_section(a), self._check_section(b)
        if self.flavor == "action":
            ptwise = self._kbracket(a, b)
            av, bv = self.anchor(a), self.anchor(b)
            nabla = tuple(av.apply_fun(f) for f in b)
            nabla2 = tuple(bv.apply_fun(f) for f in a)
            beta = PolyForm(self.dim, 1,
                            {(i,): self._kpair(tuple(f.diff(i) for f in a), b)
                             for i in range(self.dim)})
            dual = self._kdual(beta)
            return tuple(p + x - y + z for p, x, y, z in zip(ptwise, nabla, nabla2, dual))
        x1, x2 = a.X, b.X
        vec = schouten(x1, x2)
        cov = (lie_derivative(x1, b.alpha) - interior(x2, ext_d(a.alpha))
               + interior(x2, interior(x1, self.eta)))
        if self.kdim:
            cov = cov + PolyForm(self.dim, 1,
                                 {(i,): self._kpair(tuple(f.diff(i) for f in a.w), b.w)
                                  for i in range(self.dim)})
            w = tuple(x1.apply_fun(f2) - x2.apply_fun(f1) + br
                      for f1, f2, br in zip(a.w, b.w, self._kbracket(a.w, b.w)))
        else:
            w = ()
        return MixedSection(vec, cov, w)

    # -- randomized sections and the axiom suite -----------------------------

    def random_fun(self, rng: random.Random, degree: int = 1) -> PolyFun:
        terms = {}
        for exps in itertools.product(range(degree + 1), repeat=self.dim):
            if sum(exps) <= degree and rng.random() < 0.6:
                terms[exps] = Fraction(rng.randint(-3, 3), rng.randint(1, 2))
        return PolyFun(self.dim, terms)

    def random_section(self, rng: random.Random, degree: int = 1):
        if self.flavor == "action":
            return tuple(self.random_fun(rng, degree) for _ in range(self.kdim))
        X = PolyMulti(self.dim, 1, {(i,): self.random_fun(rng, degree)
                                    for i in range(self.dim)})
        alpha = PolyForm(self.dim, 1, {(i,): self.random_fun(rng, degree)
                                       for i in range(self.dim)})
        w = tuple(self.random_fun(rng, degree) for _ in range(self.kdim))
        return MixedSection(X, alpha, w)

    def courant_axiom_suite(self, samples: int = 4, seed: int = 0,
                            degree: int = 1) -> dict:
        """Exact verification of the five Courant axioms on random sections."""
        rng = random.Random(seed)
        checks = {"leibniz": True, "jacobi": True, "invariance": True,
                  "anchor_homomorphism": True, "symmetrization": True}
        witnesses = {}
        for trial in range(samples):
            e1 = self.random_section(rng, degree)
            e2 = self.random_section(rng, degree)
            e3 = self.random_section(rng, degree)
            f = self.random_fun(rng, degree)

            lhs = self.dorfman(e1, self.mul_fun(e2, f))
            rhs = self.add(self.mul_fun(self.dorfman(e1, e2), f),
                           self.mul_fun(e2, self.anchor(e1).apply_fun(f)))
            if not self.is_zero_section(self.sub(lhs, rhs)):
                checks["leibniz"] = False
                witnesses.setdefault("leibniz", trial)

            jac = self.sub(self.dorfman(e1, self.dorfman(e2, e3)),
                           self.add(self.dorfman(self.dorfman(e1, e2), e3),
                                    self.dorfman(e2, self.dorfman(e1, e3))))
            if not self.is_zero_section(jac):
                checks["jacobi"] = False
                witnesses.setdefault("jacobi", trial)

            inv = (self.anchor(e1).apply_fun(self.pairing(e2, e3))
                   - self.pairing(self.dorfman(e1, e2), e3)
                   - self.pairing(e2, self.dorfman(e1, e3)))
            if not inv.is_zero:
                checks["invariance"] = False
                witnesses.setdefault("invariance", trial)

            anc = schouten(self.anchor(e1), self.anchor(e2)) - self.anchor(self.dorfman(e1, e2))
            if not anc.is_zero:
                checks["anchor_homomorphism"] = False
                witnesses.setdefault("anchor_homomorphism", trial)

            sym = self.sub(self.add(self.dorfman(e1, e2), self.dorfman(e2, e1)),
                           self.dfun(self.pairing(e1, e2)))
            if not self.is_zero_section(sym):
                checks["symmetrization"] = False
                witnesses.setdefault("symmetrization", trial)
        checks["pass"] = all(checks.values())
        if witnesses:
            checks["witnesses"] = witnesses
        return checks

    # -- structured points ---------------------------------------------------

    def structured_points(self, count: int = 12) -> list[tuple[Fraction, ...]]:
        """Deterministic rational points inside the declared dense domain."""
        pool = [Fraction(1), Fraction(-1), Fraction(1, 2), Fraction(2),
                Fraction(-1, 3), Fraction(3), Fraction(-2), Fraction(1, 5)]
        points = []
        idx = 0
        attempts = 0
        while len(points) < count and attempts < 50 * count:
            attempts += 1
            p = tuple(pool[(idx + 3 * j + len(points)) % len(pool)] for j in range(self.dim))
            idx += 1
            if self.domain_unit is not None and self.domain_unit.eval(p) == 0:
                continue
            if p not in points:
                points.append(p)
        return points


def _contract(x: PolyMulti, alpha: PolyForm) -> PolyFun:
    out = PolyFun.zero(x.chart_dim)
    for (i,), f in x.comps.items():
        g = alpha.comps.get((i,))
        if g is not None:
            out = out + f * g
    return out


class DiracFrame:
    """A pointwise frame of a claimed-lagrangian subbundle over a chart."""

    def __init__(self, carrier: CourantChart, sections: Sequence, name: str = ""):
        self.carrier = carrier
        self.sections = [carrier._check_section(s) for s in sections]
        self.name = name

    @property
    def rank(self) -> int:
        return len(self.sections)

    def fiber(self, point) -> Subspace:
        rows = [self.carrier.section_vector(s, point) for s in self.sections]
        return Subspace(self.carrier.courant_rank, rows)


def verify_dirac(frame: DiracFrame, mode: str = "exact",
                 samples: int = 16, seed: int = 0) -> dict:
    """Rank, isotropy and involutivity report for a Dirac candidate.

    exact mode: isotropy and involutivity residuals are polynomial and
    zero-tested symbolically (valid on the declared dense domain); pointwise
    independence is checked at structured rational points.  sampled mode:
    all three at seeded rational sample points only.
    """
    chart = frame.carrier
    report: dict = {"name": frame.name, "mode": mode}
    expected = chart.courant_rank // 2
    report["rank_expected"] = expected
    report["rank_ok"] = frame.rank == expected

    if mode == "exact":
        points = chart.structured_points()
    else:
        rng = random.Random(seed)
        pool = [Fraction(k, d) for k in range(-6, 7) for d in (1, 2, 3)]
        points = []
        while len(points) < samples:
            p = tuple(rng.choice(pool) for _ in range(chart.dim))
            if chart.domain_unit is not None and chart.domain_unit.eval(p) == 0:
                continue
            points.append(p)

    drop = None
    for p in points:
        if frame.fiber(p).dim != frame.rank:
            drop = p
            break
    if drop is not None:
        raise RankDropError("frame rank drops at %s inside the declared domain"
                            % (tuple(str(x) for x in drop),))
    report["independence_points"] = len(points)

    iso_ok = True
    iso_witness = None
    for i in range(frame.rank):
        for j in range(i, frame.rank):
            pairing = chart.pairing(frame.sections[i], frame.sections[j])
            if mode == "exact":
                if not pairing.is_zero:
                    iso_ok, iso_witness = False, (i, j)
                    break
            else:
                if any(pairing.eval(p) != 0 for p in points):
                    iso_ok, iso_witness = False, (i, j)
                    break
        if not iso_ok:
            break
    report["isotropy_ok"] = iso_ok
    if iso_witness:
        report["isotropy_witness"] = iso_witness

    inv_ok = True
    inv_witness = None
    if iso_ok and report["rank_ok"]:
        for i in range(frame.rank):
            for j in range(i + 1, frame.rank):
                br = chart.dorfman(frame.sections[i], frame.sections[j])
                if mode == "exact":
                    # lagrangian self-orthogonality: membership in the span
                    # is the vanishing of all pairings against the frame
                    for k in range(frame.rank):
                        if not chart.pairing(br, frame.sections[k]).is_zero:
                            inv_ok, inv_witness = False, (i, j, k)
                            break
                else:
                    for p in points:
                        fib = frame.fiber(p)
                        if not fib.contains(chart.section_vector(br, p)):
                            inv_ok, inv_witness = False, (i, j, tuple(str(x) for x in p))
                            break
                if not inv_ok:
                    break
            if not inv_ok:
                break
    else:
        inv_ok = False
    report["involutivity_ok"] = inv_ok
    if inv_witness:
        report["involutivity_witness"] = inv_witness
    report["pass"] = report["rank_ok"] and iso_ok and inv_ok
    return report


def action_courant(d: QuadLieAlgebra, anchor_fields: Sequence[PolyMulti],
                   chart_dim: int, domain_unit: PolyFun | None = None,
                   check_points: int = 8) -> CourantChart:
    """Action Courant algebroid of a quadratic algebra acting on a chart.

    The coisotropic-stabilizer precondition is checked at structured rational
    points of the declared dense domain; the exactness flag records whether
    the anchor was onto with lagrangian stabilizers at every such point.
    """
    chart = CourantChart(chart_dim, "action", kalg=d,
                         anchor_fields=list(anchor_fields), domain_unit=domain_unit)
    exact = True
    for p in chart.structured_points(check_points):
        cols = [[field.comps.get((i,), PolyFun.zero(chart_dim)).eval(p)
                 for field in anchor_fields] for i in range(chart_dim)]
        stab = Subspace(d.dim, [list(row) for row in
                                _nullspace_cols(cols, d.dim)])
        from .exactla import orth_complement
        perp = orth_complement(stab, d.gram)
        if not stab.contains_subspace(perp):
            raise ValueError("stabilizer at %s is not coisotropic"
                             % (tuple(str(x) for x in p),))
        onto = rank(cols) == chart_dim
        if not (onto and stab == perp):
            exact = False
    chart.is_exact = exact
    return chart


def _nullspace_cols(a, ncols):
    from .exactla import kernel_basis
    return kernel_basis(a, ncols)


def splitting_to_eta(chart: CourantChart, s: Sequence[Sequence[PolyFun]],
                     verify_samples: int = 3, seed: int = 0) -> tuple[PolyForm, dict]:
    """Isotropic splitting -> twist 3-form and the chart isomorphism data.

    s gives s(d/dx_i) as a k-valued tuple; requires a o s = id and isotropy.
    Returns (eta, report); report carries the bracket-intertwining check of
    (anchor, s*) into T_eta M on random sections.
    """
    if chart.flavor != "action":
        raise FlavorMismatch("splittings live on action charts")
    n, kdim = chart.dim, chart.kdim
    s = [tuple(f for f in row) for row in s]
    for i in range(n):
        av = chart.anchor(s[i])
        want = PolyMulti.coord_field(n, i)
        if not (av - want).is_zero:
            raise ValueError("a(s(d_%d)) != d_%d; not a splitting" % (i, i))
    for i in range(n):
        for j in range(n):
            if not chart._kpair(s[i], s[j]).is_zero:
                raise ValueError("splitting is not isotropic at pair (%d, %d)" % (i, j))

    comps = {}
    for i, j, k in itertools.combinations(range(n), 3):
        val = chart._kpair(chart.dorfman(s[i], s[j]), s[k])
        if not val.is_zero:
            comps[(i, j, k)] = val
    eta = PolyForm(n, 3, comps)

    def s_star(w) -> PolyForm:
        return PolyForm(n, 1, {(i,): chart._kpair(s[i], w) for i in range(n)})

    def iso(w) -> MixedSection:
        return MixedSection(chart.anchor(w), s_star(w), ())

    target = CourantChart(n, "twisted_standard", eta=eta, domain_unit=chart.domain_unit)
    rng = random.Random(seed)
    ok = True
    for _ in range(verify_samples):
        u = chart.random_section(rng, 1)
        v = chart.random_section(rng, 1)
        lhs = iso(chart.dorfman(u, v))
        rhs = target.dorfman(iso(u), iso(v))
        if not (lhs - rhs).is_zero:
            ok = False
        if not (chart.pairing(u, v) - target.pairing(iso(u), iso(v))).is_zero:
            ok = False
    report = {"eta_closed": ext_d(eta).is_zero, "intertwines": ok,
              "pass": ext_d(eta).is_zero and ok}
    return eta, (report | {"iso": iso})


def gauge_section(b: PolyForm, s: MixedSection) -> MixedSection:
    return MixedSection(s.X, s.alpha + interior(s.X, b), s.w)


def gauge(b: PolyForm, obj):
    """Gauge transform tau_B; shifts the twist by -dB."""
    if b.degree != 2:
        raise DimensionMismatch("gauge needs a 2-form")
    if isinstance(obj, MixedSection):
        return gauge_section(b, obj)
    if isinstance(obj, CourantChart):
        if obj.flavor == "action":
            raise FlavorMismatch("gauge acts on standard/product charts")
        return CourantChart(obj.dim, obj.flavor, kalg=obj.kalg,
                            eta=obj.eta - ext_d(b), domain_unit=obj.domain_unit)
    if isinstance(obj, DiracFrame):
        chart = gauge(b, obj.carrier)
        return DiracFrame(chart, [gauge_section(b, s) for s in obj.sections],
                          name=obj.name)
    raise TypeError("cannot gauge %r" % (obj,))


def gauge_conjugation_check(chart: CourantChart, b: PolyForm,
                            samples: int = 3, seed: int = 0) -> dict:
    """tau_B intertwines brackets of T_eta and T_(eta - dB) and preserves
    the pairing; exact symbolic residuals."""
    rng = random.Random(seed)
    target = gauge(b, chart)
    ok_bracket = ok_pairing = True
    for _ in range(samples):
        u = chart.random_section(rng, 1)
        v = chart.random_section(rng, 1)
        lhs = gauge_section(b, chart.dorfman(u, v))
        rhs = target.dorfman(gauge_section(b, u), gauge_section(b, v))
        if not (lhs - rhs).is_zero:
            ok_bracket = False
        if not (chart.pairing(u, v) - target.pairing(gauge_section(b, u),
                                                     gauge_section(b, v))).is_zero:
            ok_pairing = False
    return {"bracket_conjugation": ok_bracket, "pairing_preserved": ok_pairing,
            "pass": ok_bracket and ok_pairing}


def tangent_frame(chart: CourantChart) -> DiracFrame:
    """TN inside T N (or T_eta N x k when eta = 0 contributes nothing)."""
    secs = [MixedSection(PolyMulti.coord_field(chart.dim, i),
                         PolyForm.zero(chart.dim, 1),
                         tuple(PolyFun.zero(chart.dim) for _ in range(chart.kdim)))
            for i in range(chart.dim)]
    return DiracFrame(chart, secs, name="TN")


def graph_frame(chart: CourantChart, pi: PolyMulti) -> DiracFrame:
    """graph(pi) = {(pi#(alpha), alpha)} for a bivector pi."""
    from .polycal import sharp
    secs = []
    for i in range(chart.dim):
        alpha = PolyForm.d_coord(chart.dim, i)
        secs.append(MixedSection(sharp(pi, alpha), alpha,
                                 tuple(PolyFun.zero(chart.dim)
                                       for _ in range(chart.kdim))))
    return DiracFrame(chart, secs, name="graph(pi)")
