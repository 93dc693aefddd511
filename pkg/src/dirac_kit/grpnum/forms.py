"""Form evaluators on products of matrix groups.

A domain is a list of factor charts; points are tuples of group elements and
tangent vectors are tuples of ambient derivative matrices (curve velocities).
Maps between domains are words in the factor labels, differentiated by the
analytic product/inverse rules, so only exterior derivatives ever need finite
differences.  Evaluation is exact on rational inputs.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from . import matops as mo
from .charts import MatrixGroupChart

Letter = tuple[int, int]  # (factor index, +1 or -1)


class GroupWord:
    """A word g_(i1)^(e1) ... g_(ik)^(ek) in the factors of a domain."""

    def __init__(self, letters: Sequence[Letter], size: int):
        self.letters = list(letters)
        self.size = size  # matrix size of the value

    def value(self, point: Sequence):
        out = mo.identity(self.size, mo.is_exact(point[0]) if point else True)
        for idx, e in self.letters:
            g = point[idx]
            out = mo.mmul(out, g if e > 0 else mo.minv(g))
        return out

    def value_and_diff(self, point: Sequence, tangent: Sequence):
        val = mo.identity(self.size, mo.is_exact(point[0]) if point else True)
        dval = mo.mscale(0, val)
        for idx, e in self.letters:
            g = point[idx]
            dg = tangent[idx]
            if e < 0:
                gi = mo.minv(g)
                dg = mo.mneg(mo.mmul(gi, mo.mmul(dg, gi)))
                g = gi
            dval = mo.madd(mo.mmul(dval, g), mo.mmul(val, dg))
            val = mo.mmul(val, g)
        return val, dval


class Domain:
    """An ordered product of group factors."""

    def __init__(self, factors: Sequence[MatrixGroupChart]):
        self.factors = list(factors)

    def __len__(self):
        return len(self.factors)

    def word(self, letters: Sequence[Letter]) -> GroupWord:
        return GroupWord(letters, self.factors[letters[0][0]].n if letters
                         else self.factors[0].n)

    def zero_tangent(self, point):
        return tuple(mo.mscale(0, g) for g in point)

    def basis_tangents(self, point):
        """Right-invariant basis tangents: one algebra basis vector at one
        factor at a time."""
        out = []
        for i, chart in enumerate(self.factors):
            for b in chart.basis:
                t = list(self.zero_tangent(point))
                t[i] = mo.mmul(b if mo.is_exact(point[i]) else mo.to_float(b),
                               point[i])
                out.append(tuple(t))
        return out

    def tangent_from_reps(self, point, reps):
        """reps[i] is the right-trivialized velocity at factor i (or None)."""
        out = []
        for i, g in enumerate(point):
            r = reps[i]
            if r is None:
                out.append(mo.mscale(0, g))
            else:
                rr = r if mo.is_exact(g) == mo.is_exact(r) else mo.to_float(r)
                out.append(mo.mmul(rr, g))
        return tuple(out)

    def reps_from_tangent(self, point, tangent):
        return tuple(mo.mmul(t, mo.minv(g)) for g, t in zip(point, tangent))

    def random_point_float(self, rng: random.Random):
        return tuple(c.sample_float(rng, 1)[0] for c in self.factors)

    def random_point_rational(self, rng: random.Random):
        return tuple(c.sample_rational(rng, 1)[0] for c in self.factors)

    def random_tangent_float(self, rng: random.Random, point):
        return self.tangent_from_reps(
            point, [c.random_alg_float(rng) for c in self.factors])

    def random_tangent_rational(self, rng: random.Random, point):
        return self.tangent_from_reps(
            point, [c.random_alg_rational(rng) for c in self.factors])


class FormEvaluator:
    """Base: a k-form on a domain, evaluated on points and tangent tuples."""

    arity: int
    domain: Domain

    def eval(self, point, vectors) -> Fraction | float:
        raise NotImplementedError

    def __add__(self, other):
        return SumForm(self.domain, [(1, self), (1, other)])

    def __sub__(self, other):
        return SumForm(self.domain, [(1, self), (-1, other)])

    def scale(self, c):
        return SumForm(self.domain, [(c, self)])


class SumForm(FormEvaluator):
    def __init__(self, domain: Domain, terms):
        self.domain = domain
        self.terms = []
        for c, f in terms:
            if isinstance(f, SumForm):
                self.terms.extend((c * c2, f2) for c2, f2 in f.terms)
            else:
                self.terms.append((c, f))
        self.arity = self.terms[0][1].arity if self.terms else 0

    def eval(self, point, vectors):
        total = None
        for c, f in self.terms:
            v = f.eval(point, vectors)
            v = v * c if c != 1 else v
            total = v if total is None else total + v
        return total if total is not None else Fraction(0)


class PairingForm(FormEvaluator):
    """c . <pr_a* theta^(sa), pr_b* theta^(sb)> as a 2-form.

    <alpha, beta>(v, w) = <alpha(v), beta(w)> - <alpha(w), beta(v)>."""

    def __init__(self, domain: Domain, coeff, a: int, side_a: str, b: int, side_b: str):
        self.domain = domain
        self.coeff = coeff
        self.a, self.side_a = a, side_a
        self.b, self.side_b = b, side_b
        self.arity = 2

    def _theta(self, point, tangent, idx, side):
        g = point[idx]
        t = tangent[idx]
        if side == "r":
            return mo.mmul(t, mo.minv(g))
        return mo.mmul(mo.minv(g), t)

    def eval(self, point, vectors):
        v, w = vectors
        chart = self.domain.factors[self.a]
        t1 = chart.pair(self._theta(point, v, self.a, self.side_a),
                        self._theta(point, w, self.b, self.side_b))
        t2 = chart.pair(self._theta(point, w, self.a, self.side_a),
                        self._theta(point, v, self.b, self.side_b))
        return (t1 - t2) * self.coeff


class CartanThreeForm(FormEvaluator):
    """c . <theta^l, [theta^l, theta^l]> on one factor (all-permutations
    convention, so the coefficient -1/12 gives -1/2 <u,[v,w]> at 1)."""

    def __init__(self, domain: Domain, coeff, idx: int):
        self.domain = domain
        self.coeff = coeff
        self.idx = idx
        self.arity = 3

    def eval(self, point, vectors):
        g = point[self.idx]
        gi = mo.minv(g)
        thetas = [mo.mmul(gi, v[self.idx]) for v in vectors]
        chart = self.domain.factors[self.idx]
        total = None
        for perm in itertools.permutations(range(3)):
            inv = sum(1 for i in range(3) for j in range(i + 1, 3)
                      if perm[i] > perm[j])
            sign = -1 if inv % 2 else 1
            val = chart.pair(thetas[perm[0]],
                             chart.bracket(thetas[perm[1]], thetas[perm[2]]))
            val = val * sign
            total = val if total is None else total + val
        return total * self.coeff


class PullbackForm(FormEvaluator):
    """Pullback of a base form along a tuple of words into its domain."""

    def __init__(self, domain: Domain, words: Sequence[GroupWord],
                 base: FormEvaluator):
        self.domain = domain
        self.words = list(words)
        self.base = base
        self.arity = base.arity

    def eval(self, point, vectors):
        imgs = [w.value(point) for w in self.words]
        tangents = []
        for v in vectors:
            tangents.append(tuple(w.value_and_diff(point, v)[1] for w in self.words))
        return self.base.eval(tuple(imgs), tangents)


def polwie_omega(domain: Domain, a: int, b: int, coeff=Fraction(-1, 2)) -> PairingForm:
    """Omega = -1/2 <pr_1* theta^l, pr_2* theta^r> on the factors (a, b)."""
    return PairingForm(domain, coeff, a, "l", b, "r")


def polwie_theta(domain: Domain, idx: int, coeff=Fraction(-1, 12)) -> CartanThreeForm:
    """Theta = -1/12 <theta^l, [theta^l, theta^l]> on one factor."""
    return CartanThreeForm(domain, coeff, idx)


def product_omega(domain: Domain, slots_first: Sequence[int],
                  slots_second: Sequence[int], signs: Sequence[int]) -> SumForm:
    """Omega of a product of 2-shifted groups (G, s1) x (G, s2) x ...:
    sum of signed polwie Omegas pairing the i-th slots of the two arguments."""
    terms = []
    for a, b, s in zip(slots_first, slots_second, signs):
        terms.append((1, polwie_omega(domain, a, b, Fraction(-s, 2))))
    return SumForm(domain, terms)


def product_theta(domain: Domain, slots: Sequence[int], signs: Sequence[int]) -> SumForm:
    terms = []
    for a, s in zip(slots, signs):
        terms.append((1, polwie_theta(domain, a, Fraction(-s, 12))))
    return SumForm(domain, terms)


def fd_ext_d(form: FormEvaluator, point, vectors, step: float = 1e-5,
             richardson: bool = False) -> float:
    """Central-difference exterior derivative in exponential charts.

    The tangents are extended right-invariantly, so the bracket terms of the
    coordinate-free formula are exact and only the directional derivatives
    are differenced."""
    if step <= 0 or step < 1e-14:
        raise ValueError("fd step underflow")
    domain = form.domain
    pt = tuple(mo.to_float(g) for g in point)
    vs = [tuple(mo.to_float(t) for t in v) for v in vectors]
    reps = [domain.reps_from_tangent(pt, v) for v in vs]
    k = len(vs)

    def flowed(i, h):
        newpt = tuple(mo.mexp(mo.mscale(h, reps[i][f])) @ pt[f]
                      for f in range(len(domain)))
        return newpt

    def value_without(i, at_point):
        others = [domain.tangent_from_reps(at_point, reps[j])
                  for j in range(k) if j != i]
        return form.eval(at_point, others)

    def derivative(h):
        total = 0.0
        for i in range(k):
            plus = value_without(i, flowed(i, h))
            minus = value_without(i, flowed(i, -h))
            total += ((-1) ** i) * (plus - minus) / (2 * h)
        return total

    deriv = derivative(step)
    if richardson:
        deriv = (4.0 * derivative(step / 2) - deriv) / 3.0

    bracket_total = 0.0
    for i in range(k):
        for j in range(i + 1, k):
            br = [mo.bracket_right_invariant(reps[i][f], reps[j][f])
                  for f in range(len(domain))]
            brt = domain.tangent_from_reps(pt, br)
            others = [domain.tangent_from_reps(pt, reps[t])
                      for t in range(k) if t not in (i, j)]
            val = form.eval(pt, [brt] + others)
            bracket_total += ((-1) ** (i + j)) * val
    return deriv + bracket_total
