"""Matrix group charts: bases, Maurer-Cartan evaluation, samplers.

Tangent vectors are carried in right trivialization: the pair (g, u) means
the vector u . g at g, so theta^r reads off u and theta^l gives Ad_(g^-1) u.
Floating samples are products of exponentials of random algebra vectors;
rational samples are products of exact group elements (shears for SL(2),
unit quaternions for SU(2)), so evaluation at them is exact.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from ..exactla import QForm, frac
from ..qlie import QuadLieAlgebra, sl2_trace, su2_trace, gl2_trace, _sl2_matrices, \
    _quaternion_matrices
from . import matops as mo

DEFAULT_SEED = 0x5EED


class TangentVec:
    """u . g at the base point g, with u the right-trivialized representative."""

    __slots__ = ("base", "rep")

    def __init__(self, base, rep):
        self.base = base
        self.rep = rep

    @property
    def ambient(self):
        return mo.mmul(self.rep, self.base)


class MatrixGroupChart:
    """A matrix Lie group with a fixed algebra basis and exact pairing."""

    def __init__(self, name: str, basis: Sequence, pairing_mat: Callable,
                 algebra: QuadLieAlgebra, rational_generators: Sequence):
        self.name = name
        self.basis = [mo.mat_exact(b) for b in basis]
        self.n = len(self.basis[0])
        self.dim = len(self.basis)
        self.pairing_mat = pairing_mat
        self.algebra = algebra
        self.gram = algebra.gram
        self.rational_generators = [mo.mat_exact(g) for g in rational_generators]

    def identity(self, exact: bool = True):
        return mo.identity(self.n, exact)

    def alg_vector(self, coeffs):
        out = mo.mscale(coeffs[0], self.basis[0])
        for c, b in zip(coeffs[1:], self.basis[1:]):
            out = mo.madd(out, mo.mscale(c, b))
        return out

    def alg_coords(self, u) -> list:
        """Coordinates of an algebra element in the chart basis (exact)."""
        from ..exactla import solve, transpose
        flat_basis = [tuple(x for row in b for x in row) for b in self.basis]
        target = tuple(x for row in u for x in row)
        sol = solve(transpose(flat_basis), target)
        if sol is None:
            raise ValueError("matrix not in the algebra span")
        return list(sol)

    def bracket(self, u, v):
        """[u, v] = vu - uv (right-invariant convention)."""
        return mo.bracket_right_invariant(u, v)

    def pair(self, u, v):
        return self.pairing_mat(u, v)

    def mc_right(self, t: TangentVec):
        return t.rep

    def mc_left(self, t: TangentVec):
        g_inv = mo.minv(t.base)
        return mo.mmul(g_inv, mo.mmul(t.rep, t.base))

    def ad(self, g, u):
        return mo.mmul(g, mo.mmul(u, mo.minv(g)))

    # -- samplers -------------------------------------------------------------

    def sample_float(self, rng: random.Random, count: int) -> list[np.ndarray]:
        out = []
        for _ in range(count):
            g = np.eye(self.n)
            for _ in range(2):
                coeffs = [rng.uniform(-1.0, 1.0) for _ in range(self.dim)]
                g = g @ mo.mexp(mo.to_float(self.alg_vector(coeffs)))
            out.append(g)
        return out

    def sample_rational(self, rng: random.Random, count: int, words: int = 3) -> list:
        out = []
        gens = self.rational_generators
        for _ in range(count):
            g = self.identity()
            for _ in range(words):
                g = mo.mmul(g, gens[rng.randrange(len(gens))])
            out.append(g)
        return out

    def random_alg_float(self, rng: random.Random) -> np.ndarray:
        return mo.to_float(self.alg_vector([rng.uniform(-1.0, 1.0)
                                            for _ in range(self.dim)]))

    def random_alg_rational(self, rng: random.Random):
        return self.alg_vector([Fraction(rng.randint(-2, 2), rng.randint(1, 3))
                                for _ in range(self.dim)])


def _trace_pairing(u, v):
    return mo.mtrace(mo.mmul(u, v))


def _half_trace_pairing(u, v):
    t = mo.mtrace(mo.mmul(u, v))
    return t / 2 if isinstance(t, Fraction) else 0.5 * t


def _sl2_rational_generators():
    halves = [Fraction(1, 2), Fraction(-1, 2), Fraction(1, 3), Fraction(2)]
    gens = []
    for b in halves:
        gens.append([[1, b], [0, 1]])
        gens.append([[1, 0], [b, 1]])
    gens.append([[2, 0], [0, Fraction(1, 2)]])
    return gens


def _su2_rational_generators():
    """Unit quaternions with rational coordinates, as 4x4 left multiplications."""
    quats = [(Fraction(3, 5), Fraction(4, 5), 0, 0),
             (Fraction(3, 5), 0, Fraction(4, 5), 0),
             (Fraction(3, 5), 0, 0, Fraction(4, 5)),
             (Fraction(5, 13), Fraction(12, 13), 0, 0),
             (Fraction(2, 3), Fraction(1, 3), Fraction(2, 3), 0),
             (Fraction(1, 3), Fraction(2, 3), 0, Fraction(2, 3))]
    mats = []
    for a, b, c, d in quats:
        mats.append([[a, -b, -c, -d],
                     [b, a, -d, c],
                     [c, d, a, -b],
                     [d, -c, b, a]])
    return mats


def _gl2_rational_generators():
    gens = _sl2_rational_generators()
    gens.append([[2, 0], [0, 1]])
    gens.append([[1, 0], [0, 3]])
    return gens


def _ab2_matrices():
    return [[[1, 0], [0, 0]], [[0, 0], [0, 1]]]


def _ab2_rational_generators():
    return [[[2, 0], [0, 1]], [[1, 0], [0, 2]],
            [[Fraction(1, 2), 0], [0, 3]]]


def sl2r_chart() -> MatrixGroupChart:
    return MatrixGroupChart("sl2r", _sl2_matrices(), _trace_pairing,
                            sl2_trace(), _sl2_rational_generators())


def su2_chart() -> MatrixGroupChart:
    return MatrixGroupChart("su2", _quaternion_matrices(), _half_trace_pairing,
                            su2_trace(), _su2_rational_generators())


def gl2_chart() -> MatrixGroupChart:
    from ..qlie import identity_mat
    basis = _sl2_matrices() + [identity_mat(2)]
    return MatrixGroupChart("gl2", basis, _trace_pairing,
                            gl2_trace(), _gl2_rational_generators())


def ab2_chart() -> MatrixGroupChart:
    """Abelian diagonal group; every bracket vanishes, pairing tr(uv)."""
    abelian = QuadLieAlgebra(2, {}, [[1, 0], [0, 1]])
    return MatrixGroupChart("ab2", _ab2_matrices(),
                            lambda u, v: mo.mtrace(mo.mmul(u, v)),
                            abelian, _ab2_rational_generators())


GROUP_CHARTS: dict[str, Callable[[], MatrixGroupChart]] = {
    "sl2r": sl2r_chart,
    "su2": su2_chart,
    "gl2": gl2_chart,
    "ab2": ab2_chart,
}


def group_chart(name: str) -> MatrixGroupChart:
    try:
        return GROUP_CHARTS[name]()
    except KeyError:
        raise KeyError("unknown group chart %r; known: %s"
                       % (name, ", ".join(sorted(GROUP_CHARTS)))) from None
