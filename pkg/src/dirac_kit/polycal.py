"""Polynomial exterior/multivector calculus on an affine chart R^n.

Functions are polynomials with exact rational coefficients, optionally
localized at a fixed chart unit q (values num / q^k); forms and multivectors
store components over sorted index tuples.  This module fixes the sign
conventions used everywhere else:

* evaluation is the determinant convention, (dx^dy)(e1, e2) = 1;
* the Schouten bracket satisfies [X, f] = X(f) and, for a bivector pi,
  [pi,pi](df,dg,dh) = 2 * cyclic-sum pi(df, d(pi(dg,dh))).

Degree caps: nonzero forms of degree > 4 and nonzero multivectors of
degree > 3 are rejected (zero objects of any degree are allowed so that
identities like graded Jacobi can be *stated* on small charts).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .exactla import DimensionMismatch, frac, vec

FORM_DEGREE_CAP = 4
MULTI_DEGREE_CAP = 3

Terms = dict[tuple[int, ...], Fraction]


class DegreeCapExceeded(ValueError):
    pass


class UnitMismatch(ValueError):
    pass


# -- bare polynomial term dictionaries --------------------------------------

def t_norm(terms: Terms) -> Terms:
    return {e: c for e, c in terms.items() if c != 0}


def t_add(a: Terms, b: Terms) -> Terms:
    out = dict(a)
    for e, c in b.items():
        out[e] = out.get(e, Fraction(0)) + c
    return t_norm(out)


def t_scale(a: Terms, c: Fraction) -> Terms:
    if c == 0:
        return {}
    return {e: c * x for e, x in a.items()}


def t_mul(a: Terms, b: Terms) -> Terms:
    out: Terms = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            out[e] = out.get(e, Fraction(0)) + ca * cb
    return t_norm(out)


def t_pow(a: Terms, k: int, dim: int) -> Terms:
    out: Terms = {(0,) * dim: Fraction(1)}
    for _ in range(k):
        out = t_mul(out, a)
    return out


def t_diff(a: Terms, i: int) -> Terms:
    out: Terms = {}
    for e, c in a.items():
        if e[i] > 0:
            e2 = e[:i] + (e[i] - 1,) + e[i + 1:]
            out[e2] = out.get(e2, Fraction(0)) + c * e[i]
    return out


def t_eval(a: Terms, p: Sequence[Fraction]):
    total = Fraction(0)
    for e, c in a.items():
        v = c
        for x, k in zip(p, e):
            for _ in range(k):
                v *= x
        total = total + v
    return total


def _lex_key(e: tuple[int, ...]) -> tuple:
    return (sum(e), e)


def t_div_exact(num: Terms, div: Terms) -> Terms | None:
    """Quotient of num by div if division is exact, else None.

    Single-divisor multivariate division: the remainder vanishes iff num
    lies in the principal ideal (div).
    """
    if not num:
        return {}
    if not div:
        return None
    lead = max(div, key=_lex_key)
    lead_c = div[lead]
    rem = dict(num)
    quo: Terms = {}
    while rem:
        e = max(rem, key=_lex_key)
        if any(x < y for x, y in zip(e, lead)):
            return None
        q = tuple(x - y for x, y in zip(e, lead))
        c = rem[e] / lead_c
        quo[q] = quo.get(q, Fraction(0)) + c
        for ed, cd in div.items():
            e2 = tuple(x + y for x, y in zip(q, ed))
            rem[e2] = rem.get(e2, Fraction(0)) - c * cd
            if rem[e2] == 0:
                del rem[e2]
    return t_norm(quo)


def _unit_key(terms: Terms) -> tuple:
    return tuple(sorted(terms.items()))


class PolyFun:
    """Polynomial function on Q^chart_dim, optionally divided by unit^upow."""

    __slots__ = ("chart_dim", "terms", "unit", "upow")

    def __init__(self, chart_dim: int, terms: Terms | None = None,
                 unit: Terms | None = None, upow: int = 0):
        self.chart_dim = chart_dim
        tt = {}
        for e, c in (terms or {}).items():
            e = tuple(int(x) for x in e)
            if len(e) != chart_dim:
                raise DimensionMismatch("monomial arity != chart dim")
            c = frac(c)
            if c != 0:
                tt[e] = c
        self.terms = tt
        if unit is not None and upow == 0:
            unit = None
        self.unit = dict(unit) if unit else None
        self.upow = upow if unit else 0
        self._reduce()

    def _reduce(self):
        while self.upow > 0:
            q = t_div_exact(self.terms, self.unit)
            if q is None:
                return
            self.terms = q
            self.upow -= 1
        if self.upow == 0:
            self.unit = None

    # constructors
    @classmethod
    def const(cls, dim: int, c, unit: Terms | None = None) -> "PolyFun":
        return cls(dim, {(0,) * dim: frac(c)})

    @classmethod
    def zero(cls, dim: int) -> "PolyFun":
        return cls(dim, {})

    @classmethod
    def coord(cls, dim: int, i: int) -> "PolyFun":
        e = tuple(1 if j == i else 0 for j in range(dim))
        return cls(dim, {e: Fraction(1)})

    @classmethod
    def monomial(cls, dim: int, exps: Sequence[int], c=1) -> "PolyFun":
        return cls(dim, {tuple(exps): frac(c)})

    def _align(self, other: "PolyFun") -> tuple[Terms, Terms, Terms | None, int]:
        """Common denominator unit^k for self and other."""
        if self.chart_dim != other.chart_dim:
            raise DimensionMismatch("chart dims differ")
        if self.unit is None and other.unit is None:
            return self.terms, other.terms, None, 0
        unit = self.unit or other.unit
        if self.unit and other.unit and _unit_key(self.unit) != _unit_key(other.unit):
            raise UnitMismatch("functions localized at different units")
        k = max(self.upow, other.upow)
        a = t_mul(self.terms, t_pow(unit, k - self.upow, self.chart_dim))
        b = t_mul(other.terms, t_pow(unit, k - other.upow, self.chart_dim))
        return a, b, unit, k

    def __add__(self, other: "PolyFun") -> "PolyFun":
        a, b, unit, k = self._align(other)
        return PolyFun(self.chart_dim, t_add(a, b), unit, k)

    def __sub__(self, other: "PolyFun") -> "PolyFun":
        return self + other.scale(-1)

    def scale(self, c) -> "PolyFun":
        return PolyFun(self.chart_dim, t_scale(self.terms, frac(c)), self.unit, self.upow)

    def __neg__(self) -> "PolyFun":
        return self.scale(-1)

    def __mul__(self, other: "PolyFun") -> "PolyFun":
        if self.chart_dim != other.chart_dim:
            raise DimensionMismatch("chart dims differ")
        unit = self.unit or other.unit
        if self.unit and other.unit and _unit_key(self.unit) != _unit_key(other.unit):
            raise UnitMismatch("functions localized at different units")
        return PolyFun(self.chart_dim, t_mul(self.terms, other.terms),
                       unit, self.upow + other.upow)

    def diff(self, i: int) -> "PolyFun":
        if self.unit is None:
            return PolyFun(self.chart_dim, t_diff(self.terms, i))
        # (p/u^k)' = p'/u^k - k p u'/u^(k+1)
        du = t_diff(self.unit, i)
        a = t_mul(t_diff(self.terms, i), self.unit)
        b = t_scale(t_mul(self.terms, du), Fraction(-self.upow))
        return PolyFun(self.chart_dim, t_add(a, b), self.unit, self.upow + 1)

    def eval(self, p: Sequence) -> Fraction:
        p = vec(p)
        if len(p) != self.chart_dim:
            raise DimensionMismatch("point/chart mismatch")
        v = t_eval(self.terms, p)
        if self.unit is not None:
            d = t_eval(self.unit, p)
            if d == 0:
                raise ZeroDivisionError("point outside the chart's dense domain")
            v = v / d ** self.upow
        return v

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyFun):
            return NotImplemented
        return (self - other).is_zero

    def __repr__(self) -> str:
        if self.is_zero:
            return "PolyFun(0)"
        body = " + ".join("%s*x^%s" % (c, list(e)) for e, c in sorted(self.terms.items()))
        if self.unit is not None:
            body = "(%s)/unit^%d" % (body, self.upow)
        return "PolyFun(%s)" % body

    def to_data(self) -> dict:
        return {"dim": self.chart_dim,
                "terms": {",".join(map(str, e)): str(c) for e, c in self.terms.items()}}

    @classmethod
    def from_data(cls, data: dict) -> "PolyFun":
        dim = int(data["dim"])
        terms = {}
        for key, c in data.get("terms", {}).items():
            e = tuple(int(x) for x in key.split(",")) if key else ()
            terms[e] = frac(c)
        return cls(dim, terms)


def _merge_index(idx: tuple[int, ...]) -> tuple[int, tuple[int, ...]] | None:
    """Sort an index tuple; return (sign, sorted) or None on repetition."""
    idx = tuple(idx)
    if len(set(idx)) != len(idx):
        return None
    perm = sorted(range(len(idx)), key=lambda t: idx[t])
    sign = 1
    seen = list(idx)
    # parity by counting inversions
    inv = sum(1 for a in range(len(idx)) for b in range(a + 1, len(idx)) if seen[a] > seen[b])
    sign = -1 if inv % 2 else 1
    return sign, tuple(sorted(idx))


class _Graded:
    """Shared machinery of PolyForm and PolyMulti."""

    KIND = "graded"
    CAP = 99

    __slots__ = ("chart_dim", "degree", "comps")

    def __init__(self, chart_dim: int, degree: int, comps: dict | None = None):
        comps = comps or {}
        clean: dict[tuple[int, ...], PolyFun] = {}
        for idx, f in comps.items():
            res = _merge_index(tuple(idx))
            if res is None:
                continue
            sign, key = res
            if not isinstance(f, PolyFun):
                f = PolyFun(chart_dim, f)
            if sign < 0:
                f = f.scale(-1)
            if any(i < 0 or i >= chart_dim for i in key):
                raise DimensionMismatch("component index out of range")
            if len(key) != degree:
                raise DimensionMismatch("component arity != degree")
            if key in clean:
                clean[key] = clean[key] + f
            else:
                clean[key] = f
        clean = {k: f for k, f in clean.items() if not f.is_zero}
        if degree > self.CAP and clean:
            raise DegreeCapExceeded("nonzero %s of degree %d exceeds cap %d"
                                    % (self.KIND, degree, self.CAP))
        self.chart_dim = chart_dim
        self.degree = degree
        self.comps = clean

    @property
    def is_zero(self) -> bool:
        return not self.comps

    def comp(self, idx: tuple[int, ...]) -> PolyFun:
        res = _merge_index(idx)
        if res is None:
            return PolyFun.zero(self.chart_dim)
        sign, key = res
        f = self.comps.get(key)
        if f is None:
            return PolyFun.zero(self.chart_dim)
        return f.scale(sign)

    def _binary_check(self, other):
        if self.chart_dim != other.chart_dim:
            raise DimensionMismatch("chart dims differ")
        if self.degree != other.degree and self.comps and other.comps:
            raise DimensionMismatch("degrees differ")

    def __add__(self, other):
        self._binary_check(other)
        comps = dict(self.comps)
        for k, f in other.comps.items():
            comps[k] = comps[k] + f if k in comps else f
        return type(self)(self.chart_dim, max(self.degree, other.degree), comps)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        return type(self)(self.chart_dim, self.degree,
                          {k: f.scale(c) for k, f in self.comps.items()})

    def __neg__(self):
        return self.scale(-1)

    def mul_fun(self, g: PolyFun):
        return type(self)(self.chart_dim, self.degree,
                          {k: f * g for k, f in self.comps.items()})

    def wedge(self, other):
        if self.chart_dim != other.chart_dim:
            raise DimensionMismatch("chart dims differ")
        deg = self.degree + other.degree
        comps: dict[tuple[int, ...], PolyFun] = {}
        for ka, fa in self.comps.items():
            for kb, fb in other.comps.items():
                res = _merge_index(ka + kb)
                if res is None:
                    continue
                sign, key = res
                f = (fa * fb).scale(sign)
                comps[key] = comps[key] + f if key in comps else f
        return type(self)(self.chart_dim, deg, comps)

    def evaluate(self, point: Sequence, args: Sequence[Sequence]) -> Fraction:
        """Multilinear antisymmetric evaluation on vectors (determinant rule)."""
        if len(args) != self.degree:
            raise DimensionMismatch("expected %d arguments" % self.degree)
        point = vec(point)
        args = [vec(a) for a in args]
        total = Fraction(0)
        for key, f in self.comps.items():
            det = _det([[a[i] for i in key] for a in args])
            if det != 0:
                total += f.eval(point) * det
        return total

    def eval_comps(self, point: Sequence) -> dict[tuple[int, ...], Fraction]:
        return {k: f.eval(point) for k, f in self.comps.items()}

    def max_coeff_degree(self) -> int:
        return max((f.degree() for f in self.comps.values()), default=-1)

    def __eq__(self, other) -> bool:
        if not isinstance(other, type(self)):
            return NotImplemented
        return (self - other).is_zero

    def __repr__(self) -> str:
        return "%s(deg=%d, %d comps)" % (type(self).__name__, self.degree, len(self.comps))

    def to_data(self) -> dict:
        return {"dim": self.chart_dim, "degree": self.degree,
                "components": {",".join(map(str, k)): f.to_data()["terms"]
                               for k, f in self.comps.items()}}

    @classmethod
    def from_data(cls, data: dict):
        dim = int(data["dim"])
        comps = {}
        for key, terms in data.get("components", {}).items():
            idx = tuple(int(x) for x in key.split(",")) if key else ()
            comps[idx] = PolyFun.from_data({"dim": dim, "terms": terms})
        return cls(dim, int(data["degree"]), comps)


def _det(rows: list[list[Fraction]]) -> Fraction:
    n = len(rows)
    if n == 0:
        return Fraction(1)
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    total = Fraction(0)
    for j in range(n):
        if rows[0][j] == 0:
            continue
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        total += rows[0][j] * _det(minor) * (-1 if j % 2 else 1)
    return total


class PolyForm(_Graded):
    KIND = "form"
    CAP = FORM_DEGREE_CAP

    @classmethod
    def zero(cls, dim: int, degree: int = 0) -> "PolyForm":
        return cls(dim, degree, {})

    @classmethod
    def d_coord(cls, dim: int, i: int) -> "PolyForm":
        return cls(dim, 1, {(i,): PolyFun.const(dim, 1)})

    @classmethod
    def from_fun(cls, f: PolyFun) -> "PolyForm":
        return cls(f.chart_dim, 0, {(): f})


class PolyMulti(_Graded):
    KIND = "multivector"
    CAP = MULTI_DEGREE_CAP

    @classmethod
    def zero(cls, dim: int, degree: int = 1) -> "PolyMulti":
        return cls(dim, degree, {})

    @classmethod
    def coord_field(cls, dim: int, i: int) -> "PolyMulti":
        return cls(dim, 1, {(i,): PolyFun.const(dim, 1)})

    @classmethod
    def from_fun(cls, f: PolyFun) -> "PolyMulti":
        return cls(f.chart_dim, 0, {(): f})

    def apply_fun(self, f: PolyFun) -> PolyFun:
        """X(f) for a vector field X."""
        if self.degree != 1:
            raise DimensionMismatch("apply_fun needs a vector field")
        out = PolyFun.zero(self.chart_dim)
        for (i,), c in self.comps.items():
            out = out + c * f.diff(i)
        return out


def ext_d(omega: PolyForm) -> PolyForm:
    """Exterior derivative; d of a 0-form f is sum_i (df/dxi) dxi."""
    dim = omega.chart_dim
    comps: dict[tuple[int, ...], PolyFun] = {}
    for key, f in omega.comps.items():
        for i in range(dim):
            df = f.diff(i)
            if df.is_zero:
                continue
            res = _merge_index((i,) + key)
            if res is None:
                continue
            sign, nk = res
            g = df.scale(sign)
            comps[nk] = comps[nk] + g if nk in comps else g
    return PolyForm(dim, omega.degree + 1, comps)


def interior(x: PolyMulti, omega: PolyForm) -> PolyForm:
    """i_X omega for a vector field X (contraction in the first slot)."""
    if x.degree != 1:
        raise DimensionMismatch("interior product needs a vector field")
    dim = omega.chart_dim
    comps: dict[tuple[int, ...], PolyFun] = {}
    for key, f in omega.comps.items():
        for pos, i in enumerate(key):
            c = x.comps.get((i,))
            if c is None:
                continue
            nk = key[:pos] + key[pos + 1:]
            g = (c * f).scale(-1 if pos % 2 else 1)
            comps[nk] = comps[nk] + g if nk in comps else g
    return PolyForm(dim, max(omega.degree - 1, 0), comps)


def _right_xi_derivative(p: _Graded, i: int):
    """Right odd derivative d/dxi_i on multivector monomials."""
    comps: dict[tuple[int, ...], PolyFun] = {}
    for key, f in p.comps.items():
        if i not in key:
            continue
        pos = key.index(i)
        sign = -1 if (len(key) - 1 - pos) % 2 else 1
        nk = key[:pos] + key[pos + 1:]
        g = f.scale(sign)
        comps[nk] = comps[nk] + g if nk in comps else g
    return PolyMulti(p.chart_dim, max(p.degree - 1, 0), comps)


def _multi_diff(p: PolyMulti, i: int) -> PolyMulti:
    return PolyMulti(p.chart_dim, p.degree, {k: f.diff(i) for k, f in p.comps.items()})


def schouten(p: PolyMulti, q: PolyMulti) -> PolyMulti:
    """Schouten-Nijenhuis bracket.

    Convention fixed here once: [X, f] = X(f), [X, Y] is the Lie bracket,
    graded antisymmetry [P,Q] = -(-1)^((p-1)(q-1)) [Q,P], and
    [pi,pi](df,dg,dh) = 2 * cyclic-sum pi(df, d(pi(dg,dh))) for bivectors.
    """
    if p.chart_dim != q.chart_dim:
        raise DimensionMismatch("chart dims differ")
    dim = p.chart_dim
    deg = p.degree + q.degree - 1
    out = PolyMulti.zero(dim, max(deg, 0))
    sign2 = -1 if ((p.degree - 1) * (q.degree - 1)) % 2 else 1
    for i in range(dim):
        dp = _right_xi_derivative(p, i)
        if not dp.is_zero:
            out = out + dp.wedge(_multi_diff(q, i))
        dq = _right_xi_derivative(q, i)
        if not dq.is_zero:
            out = out - dq.wedge(_multi_diff(p, i)).scale(sign2)
    return out


def lie_derivative(x: PolyMulti, obj):
    """Lie derivative along a vector field: Cartan on forms, Schouten on
    multivectors, directional derivative on functions."""
    if isinstance(obj, PolyFun):
        return x.apply_fun(obj)
    if isinstance(obj, PolyForm):
        return ext_d(interior(x, obj)) + interior(x, ext_d(obj))
    if isinstance(obj, PolyMulti):
        return schouten(x, obj)
    raise TypeError("cannot take a Lie derivative of %r" % (obj,))


def pullback(phi: Sequence[PolyFun], omega: PolyForm, source_dim: int | None = None) -> PolyForm:
    """Pullback of omega along the polynomial map with components phi."""
    phi = list(phi)
    if len(phi) != omega.chart_dim:
        raise DimensionMismatch("map has %d components, form lives on R^%d"
                                % (len(phi), omega.chart_dim))
    if source_dim is None:
        source_dim = phi[0].chart_dim
    for f in phi:
        if f.chart_dim != source_dim:
            raise DimensionMismatch("map components on different charts")
    dphi = [PolyForm(source_dim, 1, {(i,): f.diff(i) for i in range(source_dim)})
            for f in phi]

    def compose(f: PolyFun) -> PolyFun:
        out = PolyFun.zero(source_dim)
        for e, c in f.terms.items():
            term = PolyFun.const(source_dim, c)
            for j, k in enumerate(e):
                for _ in range(k):
                    term = term * phi[j]
            out = out + term
        return out

    result = PolyForm.zero(source_dim, omega.degree)
    for key, f in omega.comps.items():
        piece = PolyForm(source_dim, 0, {(): compose(f)})
        for j in key:
            piece = piece.wedge(dphi[j])
        result = result + piece
    return result


def sharp(pi: PolyMulti, alpha: PolyForm) -> PolyMulti:
    """pi^sharp(alpha) = pi(alpha, .) for a bivector pi and 1-form alpha."""
    if pi.degree != 2 or alpha.degree != 1:
        raise DimensionMismatch("sharp needs a bivector and a 1-form")
    dim = pi.chart_dim
    comps: dict[tuple[int, ...], PolyFun] = {}
    for (i, j), f in pi.comps.items():
        ai, aj = alpha.comps.get((i,)), alpha.comps.get((j,))
        # pi(alpha, .): the (i,j) term contributes alpha_i * d_j - alpha_j * d_i
        if ai is not None:
            comps[(j,)] = comps.get((j,), PolyFun.zero(dim)) + f * ai
        if aj is not None:
            comps[(i,)] = comps.get((i,), PolyFun.zero(dim)) - f * aj
    return PolyMulti(dim, 1, comps)


class MixedSection:
    """Section X + alpha + w of (TN + T*N) + k_N over a chart."""

    __slots__ = ("X", "alpha", "w")

    def __init__(self, X: PolyMulti, alpha: PolyForm, w: Sequence[PolyFun] = ()):
        if X.degree != 1 or alpha.degree != 1:
            raise DimensionMismatch("vector/covector parts must have degree 1")
        if X.chart_dim != alpha.chart_dim:
            raise DimensionMismatch("parts on different charts")
        for f in w:
            if f.chart_dim != X.chart_dim:
                raise DimensionMismatch("coefficient part on a different chart")
        self.X = X
        self.alpha = alpha
        self.w = tuple(w)

    @classmethod
    def zero(cls, dim: int, kdim: int = 0) -> "MixedSection":
        return cls(PolyMulti.zero(dim, 1), PolyForm.zero(dim, 1),
                   tuple(PolyFun.zero(dim) for _ in range(kdim)))

    @property
    def chart_dim(self) -> int:
        return self.X.chart_dim

    def __add__(self, other: "MixedSection") -> "MixedSection":
        return MixedSection(self.X + other.X, self.alpha + other.alpha,
                            tuple(a + b for a, b in zip(self.w, other.w)))

    def __sub__(self, other: "MixedSection") -> "MixedSection":
        return self + other.scale(-1)

    def scale(self, c) -> "MixedSection":
        return MixedSection(self.X.scale(c), self.alpha.scale(c),
                            tuple(f.scale(c) for f in self.w))

    def mul_fun(self, g: PolyFun) -> "MixedSection":
        return MixedSection(self.X.mul_fun(g), self.alpha.mul_fun(g),
                            tuple(f * g for f in self.w))

    @property
    def is_zero(self) -> bool:
        return self.X.is_zero and self.alpha.is_zero and all(f.is_zero for f in self.w)

    def eval_vector(self, point: Sequence) -> list[Fraction]:
        """Fiber value as a vector in Q^(2n + kdim), blocks (X, alpha, w)."""
        point = vec(point)
        n = self.chart_dim
        out = [Fraction(0)] * (2 * n + len(self.w))
        for (i,), f in self.X.comps.items():
            out[i] = f.eval(point)
        for (i,), f in self.alpha.comps.items():
            out[n + i] = f.eval(point)
        for a, f in enumerate(self.w):
            out[2 * n + a] = f.eval(point)
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, MixedSection):
            return NotImplemented
        return (self - other).is_zero

    def to_data(self) -> dict:
        return {"X": self.X.to_data(), "alpha": self.alpha.to_data(),
                "w": [f.to_data() for f in self.w]}

    @classmethod
    def from_data(cls, data: dict) -> "MixedSection":
        return cls(PolyMulti.from_data(data["X"]), PolyForm.from_data(data["alpha"]),
                   tuple(PolyFun.from_data(f) for f in data.get("w", [])))
