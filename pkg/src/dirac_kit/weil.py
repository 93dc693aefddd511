"""Weil algebra of a Lie algebra and low-bidegree Weil data of chart
algebroids.

For a Lie algebra g, W^(p,q) = wedge^(p-q) g* (x) S^q g*.  The vertical
differential is the odd derivation sending each wedge generator to its
tautological symmetric generator (and symmetric generators to zero); the
horizontal differential is the Chevalley-Eilenberg differential with
coefficients in symmetric powers of the coadjoint representation.  These
anticommute, so (W, d^v, d^h) is a double complex.

For chart algebroids only the bidegrees the computations use are carried:
W^(1,2) cochains (c0, c1), the lift phi^(kappa) in W^(2,2), and eta in
W^(0,3); their identities are verified symbolically on frame sections.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Callable, Sequence

from .exactla import DimensionMismatch, frac, identity_mat, vec
from .polycal import (MixedSection, PolyForm, PolyFun, PolyMulti, ext_d,
                      interior, lie_derivative)
from .qlie import LieAlgebra
from .shifted import ChartAlgebroid

P_CAP = 8


class BidegreeOverflow(ValueError):
    pass


Key = tuple[tuple[int, ...], tuple[int, ...]]  # (wedge indices, sym indices)


def _merge_wedge(a: tuple[int, ...], b: tuple[int, ...]):
    idx = a + b
    if len(set(idx)) != len(idx):
        return None
    inv = sum(1 for s in range(len(idx)) for t in range(s + 1, len(idx))
              if idx[s] > idx[t])
    return (-1 if inv % 2 else 1), tuple(sorted(idx))


class WeilElement:
    """Homogeneous element of W^(p,q)(g) for a structure-constant algebra."""

    def __init__(self, algebra: LieAlgebra, p: int, q: int,
                 comps: dict[Key, Fraction] | None = None):
        if not (p >= q >= 0):
            raise BidegreeOverflow("need p >= q >= 0")
        if p > P_CAP:
            raise BidegreeOverflow("bidegree (%d, %d) beyond the cap" % (p, q))
        self.algebra = algebra
        self.p = p
        self.q = q
        clean: dict[Key, Fraction] = {}
        for (w, s), c in (comps or {}).items():
            w, s = tuple(w), tuple(sorted(s))
            c = frac(c)
            if c == 0:
                continue
            if len(w) != p - q or len(s) != q:
                raise DimensionMismatch("key does not match bidegree")
            if any(not 0 <= i < algebra.dim for i in w + s):
                raise DimensionMismatch("generator index out of range")
            if len(set(w)) != len(w):
                continue
            inv = sum(1 for a in range(len(w)) for b in range(a + 1, len(w))
                      if w[a] > w[b])
            sign = -1 if inv % 2 else 1
            key = (tuple(sorted(w)), s)
            clean[key] = clean.get(key, Fraction(0)) + sign * c
        self.comps = {k: c for k, c in clean.items() if c != 0}

    @classmethod
    def wedge_generator(cls, algebra: LieAlgebra, i: int) -> "WeilElement":
        return cls(algebra, 1, 0, {((i,), ()): Fraction(1)})

    @classmethod
    def sym_generator(cls, algebra: LieAlgebra, i: int) -> "WeilElement":
        return cls(algebra, 1, 1, {((), (i,)): Fraction(1)})

    @classmethod
    def from_sym_tensor(cls, algebra: LieAlgebra, kappa: dict) -> "WeilElement":
        """kappa maps sorted q-tuples to the values of a symmetric multilinear
        form on basis tuples; the corresponding polynomial in the symmetric
        generators is kappa(xi, ..., xi), so monomial coefficients pick up the
        multinomial factor q!/prod(multiplicities!)."""
        import math
        q = len(next(iter(kappa))) if kappa else 0
        comps = {}
        for k, v in kappa.items():
            k = tuple(sorted(k))
            mult = math.factorial(q)
            for i in set(k):
                mult //= math.factorial(k.count(i))
            comps[((), k)] = frac(v) * mult
        return cls(algebra, q, q, comps)

    @property
    def is_zero(self) -> bool:
        return not self.comps

    def __add__(self, other: "WeilElement") -> "WeilElement":
        if (self.p, self.q) != (other.p, other.q) and self.comps and other.comps:
            raise DimensionMismatch("bidegrees differ")
        p = self.p if self.comps or not other.comps else other.p
        q = self.q if self.comps or not other.comps else other.q
        comps = dict(self.comps)
        for k, c in other.comps.items():
            comps[k] = comps.get(k, Fraction(0)) + c
        return WeilElement(self.algebra, p, q, comps)

    def __sub__(self, other: "WeilElement") -> "WeilElement":
        return self + other.scale(-1)

    def scale(self, c) -> "WeilElement":
        return WeilElement(self.algebra, self.p, self.q,
                           {k: v * frac(c) for k, v in self.comps.items()})

    def mul(self, other: "WeilElement") -> "WeilElement":
        comps: dict[Key, Fraction] = {}
        for (w1, s1), c1 in self.comps.items():
            for (w2, s2), c2 in other.comps.items():
                res = _merge_wedge(w1, w2)
                if res is None:
                    continue
                sign, w = res
                key = (w, tuple(sorted(s1 + s2)))
                comps[key] = comps.get(key, Fraction(0)) + sign * c1 * c2
        return WeilElement(self.algebra, self.p + other.p, self.q + other.q, comps)

    def __eq__(self, other) -> bool:
        if not isinstance(other, WeilElement):
            return NotImplemented
        return (self - other).is_zero

    def __repr__(self) -> str:
        return "WeilElement(p=%d, q=%d, %d terms)" % (self.p, self.q, len(self.comps))


def _derive_monomial(e: WeilElement, key: Key, coeff: Fraction,
                     d_wedge: Callable[[int], list], d_sym: Callable[[int], list],
                     p_out: int, q_out: int) -> dict[Key, Fraction]:
    """Graded Leibniz expansion of a derivation given on generators.

    d_wedge(i) and d_sym(i) return lists of (wedge, sym, coeff) monomials.
    Wedge generators are odd, symmetric generators even."""
    w, s = key
    out: dict[Key, Fraction] = {}

    def push(wkey, skey, c):
        if len(set(wkey)) != len(wkey):
            return
        inv = sum(1 for a in range(len(wkey)) for b in range(a + 1, len(wkey))
                  if wkey[a] > wkey[b])
        sign = -1 if inv % 2 else 1
        k = (tuple(sorted(wkey)), tuple(sorted(skey)))
        out[k] = out.get(k, Fraction(0)) + sign * c

    for t in range(len(w)):
        sign = -1 if t % 2 else 1
        for dw, ds, dc in d_wedge(w[t]):
            push(w[:t] + dw + w[t + 1:], s + ds, sign * coeff * dc)
    sym_sign = -1 if len(w) % 2 else 1
    for t in range(len(s)):
        for dw, ds, dc in d_sym(s[t]):
            push(w + dw, s[:t] + ds + s[t + 1:], sym_sign * coeff * dc)
    return out


def weil_dv(e: WeilElement) -> WeilElement:
    """Vertical differential: theta_i -> s_i, s_i -> 0, odd derivation."""
    out: dict[Key, Fraction] = {}
    for key, c in e.comps.items():
        for k, v in _derive_monomial(
                e, key, c,
                d_wedge=lambda i: [((), (i,), Fraction(1))],
                d_sym=lambda i: [],
                p_out=e.p, q_out=e.q + 1).items():
            out[k] = out.get(k, Fraction(0)) + v
    return WeilElement(e.algebra, max(e.p, e.q + 1), e.q + 1, out)


def weil_dh(e: WeilElement) -> WeilElement:
    """Horizontal (Chevalley-Eilenberg) differential, odd derivation with
    d^h theta_i = -1/2 c^i_jk theta_j theta_k and
    d^h s_i = -c^i_jk theta_j s_k."""
    alg = e.algebra
    n = alg.dim

    def d_wedge(i: int):
        terms = []
        for j in range(n):
            for k in range(j + 1, n):
                c = alg.bracket_basis(j, k)[i]
                if c != 0:
                    terms.append(((j, k), (), -c))
        return terms

    def d_sym(i: int):
        terms = []
        for j in range(n):
            for k in range(n):
                c = alg.bracket_basis(j, k)[i]
                if c != 0:
                    terms.append(((j,), (k,), -c))
        return terms

    out: dict[Key, Fraction] = {}
    for key, c in e.comps.items():
        for k, v in _derive_monomial(e, key, c, d_wedge, d_sym,
                                     e.p + 1, e.q).items():
            out[k] = out.get(k, Fraction(0)) + v
    return WeilElement(e.algebra, e.p + 1, e.q, out)


def coadjoint_invariant(algebra: LieAlgebra, kappa: dict) -> bool:
    """Direct ad-invariance of kappa in S^q g*: sum over slots of kappa with
    [u, .] inserted vanishes on all basis tuples."""
    if not kappa:
        return True
    q = len(next(iter(kappa)))
    n = algebra.dim

    def kval(idx: tuple[int, ...]) -> Fraction:
        return frac(kappa.get(tuple(sorted(idx)), 0))

    for u in range(n):
        for idx in itertools.combinations_with_replacement(range(n), q):
            tot = Fraction(0)
            for slot in range(q):
                br = algebra.bracket_basis(u, idx[slot])
                for k, c in enumerate(br):
                    if c != 0:
                        jdx = list(idx)
                        jdx[slot] = k
                        tot += c * kval(tuple(jdx))
            if tot != 0:
                return False
    return True


def dh_closed_iff_invariant(algebra: LieAlgebra, kappa: dict) -> tuple[bool, bool]:
    """(d^h-closed, coadjoint-invariant) for kappa in S^q g*; the two always
    agree, which is itself asserted as a property test."""
    el = WeilElement.from_sym_tensor(algebra, kappa)
    closed = weil_dh(el).is_zero
    invariant = coadjoint_invariant(algebra, kappa)
    return closed, invariant


# -- chart-algebroid Weil data ------------------------------------------------

class AlgebroidWeilData:
    """A W^(2,2) element of a chart algebroid, stored on frame sections."""

    def __init__(self, alg: ChartAlgebroid, tau0: Callable, tau1: Callable,
                 tau2: Callable):
        self.alg = alg
        self.tau0 = tau0  # (u, v) -> PolyForm deg 2
        self.tau1 = tau1  # (u, v) -> PolyForm deg 1 ( = tau1(u | v) )
        self.tau2 = tau2  # (u, v) -> PolyFun

    def leibniz_defects(self) -> list[str]:
        """The compatibility c_i(..., fu) = f c_i(...) - df ^ i_u c_(i+1)(...)
        on frame generators with coordinate functions f (the condition
        constrains the last section argument; the S-slots are linear)."""
        alg = self.alg
        dim = alg.dim
        defects = []
        for u in range(alg.rank):
            for v in range(alg.rank):
                for x in range(dim):
                    f = PolyFun.coord(dim, x)
                    df = ext_d(PolyForm.from_fun(f))
                    lhs0 = self._tau0_section(u, (v, f))
                    rhs0 = self.tau0(u, v).mul_fun(f) - df.wedge(self.tau1(u, v))
                    if not (lhs0 - rhs0).is_zero:
                        defects.append("tau0 at (%d, %d*%d)" % (u, v, x))
                    lhs1 = self._tau1_section((u, f), v)
                    rhs1 = self.tau1(u, v).mul_fun(f) - df.mul_fun(self.tau2(u, v))
                    if not (lhs1 - rhs1).is_zero:
                        defects.append("tau1 at (%d*%d, %d)" % (u, x, v))
        return defects

    # the scaled-section evaluations have to be supplied by the constructor
    _tau0_section: Callable
    _tau1_section: Callable


def lift_kappa(alg: ChartAlgebroid, phi: Sequence[Sequence[PolyFun]],
               kappa: Sequence[Sequence]) -> AlgebroidWeilData:
    """The lift of kappa in S^2 g* along the algebroid morphism phi:
    tau0 = d(kappa(d phi(u), phi(v))), tau1 = -kappa(d phi(u), phi(v)),
    tau2 = phi* kappa (on frame sections)."""
    dim = alg.dim
    kap = [[frac(x) for x in row] for row in kappa]
    gdim = len(kap)

    def phi_of(sec) -> tuple[PolyFun, ...]:
        # sec is a frame index or (frame index, multiplier function)
        if isinstance(sec, tuple):
            u, f = sec
            return tuple(g * f for g in phi[u])
        return tuple(phi[sec])

    def kappa_dphi(secu, secv) -> PolyForm:
        pu, pv = phi_of(secu), phi_of(secv)
        comps = {}
        for i in range(dim):
            val = PolyFun.zero(dim)
            for a in range(gdim):
                for b in range(gdim):
                    if kap[a][b] != 0:
                        val = val + (pu[a].diff(i) * pv[b]).scale(kap[a][b])
            comps[(i,)] = val
        return PolyForm(dim, 1, comps)

    def tau0(u, v) -> PolyForm:
        return ext_d(kappa_dphi(u, v))

    def tau1(u, v) -> PolyForm:
        return kappa_dphi(u, v).scale(-1)

    def tau2(u, v) -> PolyFun:
        pu, pv = phi_of(u), phi_of(v)
        out = PolyFun.zero(dim)
        for a in range(gdim):
            for b in range(gdim):
                if kap[a][b] != 0:
                    out = out + (pu[a] * pv[b]).scale(kap[a][b])
        return out

    data = AlgebroidWeilData(alg, tau0, tau1, tau2)
    data._tau0_section = tau0
    data._tau1_section = tau1
    return data


def w12_check(alg: ChartAlgebroid, c0: Sequence[PolyForm], c1: Sequence[PolyForm],
              eta: PolyForm, phi: Sequence[Sequence[PolyFun]],
              kappa: Sequence[Sequence]) -> dict:
    """(d^v + d^h)(c + eta) = phi^(kappa), evaluated by two routes.

    Route A is the condition list (i)-(iii) of the W^(1,2) lemma; route B is
    the componentwise total-differential identity.  Both verdicts and their
    agreement are reported."""
    dim, r = alg.dim, alg.rank
    lift = lift_kappa(alg, phi, kappa)

    cond_i = ext_d(eta).is_zero

    cond_ii = True
    for u in range(r):
        want = interior(alg.anchor_fields[u], eta) - ext_d(c1[u])
        if not (c0[u] - want).is_zero:
            cond_ii = False

    cond_iii = True
    for u in range(r):
        for v in range(r):
            au, av = alg.anchor_fields[u], alg.anchor_fields[v]
            br = alg.bracket_basis(u, v)
            c1_br = PolyForm.zero(dim, 1)
            for k, coef in enumerate(br):
                if coef != 0:
                    c1_br = c1_br + c1[k].scale(coef)
            rhs = (lie_derivative(au, c1[v]) - interior(av, ext_d(c1[u]))
                   + interior(av, interior(au, eta)) - lift.tau1(u, v))
            if not (c1_br - rhs).is_zero:
                cond_iii = False
            lhs2 = _pair(au, c1[v]) + _pair(av, c1[u])
            if not (lhs2 + lift.tau2(u, v)).is_zero:
                cond_iii = False
    route_a = cond_i and cond_ii and cond_iii

    # route B: componentwise (d^v + d^h)(c + eta) - phi^(kappa) = 0
    b_04 = ext_d(eta).is_zero
    b_13 = True
    for u in range(r):
        au = alg.anchor_fields[u]
        if not (lie_derivative(au, eta) - ext_d(c0[u])).is_zero:
            b_13 = False
        if not (interior(au, eta) - ext_d(c1[u]) - c0[u]).is_zero:
            b_13 = False
    b_22 = True
    for u in range(r):
        for v in range(r):
            au, av = alg.anchor_fields[u], alg.anchor_fields[v]
            br = alg.bracket_basis(u, v)
            c0_br = PolyForm.zero(dim, 2)
            c1_br = PolyForm.zero(dim, 1)
            for k, coef in enumerate(br):
                if coef != 0:
                    c0_br = c0_br + c0[k].scale(coef)
                    c1_br = c1_br + c1[k].scale(coef)
            comp0 = (lie_derivative(au, c0[v]) - lie_derivative(av, c0[u])
                     - c0_br - lift.tau0(u, v))
            if not comp0.is_zero:
                b_22 = False
            comp1 = (lie_derivative(au, c1[v]) + interior(av, c0[u]) - c1_br
                     - lift.tau1(u, v))
            if not comp1.is_zero:
                b_22 = False
            comp2 = _pair(au, c1[v]) + _pair(av, c1[u]) + lift.tau2(u, v)
            if not comp2.is_zero:
                b_22 = False
    route_b = b_04 and b_13 and b_22

    return {"i": cond_i, "ii": cond_ii, "iii": cond_iii,
            "route_a": route_a, "route_b": route_b,
            "routes_agree": route_a == route_b,
            "pass": route_a and route_b}


def _pair(x: PolyMulti, alpha: PolyForm) -> PolyFun:
    out = PolyFun.zero(x.chart_dim)
    for (i,), f in x.comps.items():
        g = alpha.comps.get((i,))
        if g is not None:
            out = out + f * g
    return out


def infisot_to_w12(alg: ChartAlgebroid, lam: Sequence[PolyForm],
                   eta: PolyForm) -> tuple[list[PolyForm], list[PolyForm]]:
    """(lambda, eta) -> (c0, c1) with c1(|u) = lambda(u) and
    c0(u) = i_a(u) eta - d lambda(u)."""
    c1 = [lam[u] for u in range(alg.rank)]
    c0 = [interior(alg.anchor_fields[u], eta) - ext_d(lam[u])
          for u in range(alg.rank)]
    return c0, c1


def w12_to_infisot(c1: Sequence[PolyForm]) -> list[PolyForm]:
    """(c, eta) -> lambda = c1; the eta slot is carried unchanged."""
    return list(c1)
