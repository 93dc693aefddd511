"""Matrix helpers shared by the exact and floating-point group layers.

Exact matrices are tuples of tuples of Fractions; float matrices are numpy
arrays.  Every helper dispatches on the type, so the same evaluation code
runs exactly at rational points and numerically at sampled ones.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import numpy as np

from ..exactla import frac


def is_exact(m) -> bool:
    return not isinstance(m, np.ndarray)


def mat_exact(rows) -> tuple:
    return tuple(tuple(frac(x) for x in row) for row in rows)


def to_float(m) -> np.ndarray:
    if isinstance(m, np.ndarray):
        return m
    return np.array([[float(x) for x in row] for row in m], dtype=float)


def zeros_like(m):
    if isinstance(m, np.ndarray):
        return np.zeros_like(m)
    n = len(m)
    return tuple((Fraction(0),) * len(m[0]) for _ in range(n))


def identity(n: int, exact: bool = True):
    if exact:
        return tuple(tuple(Fraction(1 if i == j else 0) for j in range(n))
                     for i in range(n))
    return np.eye(n)


def mmul(a, b):
    if isinstance(a, np.ndarray) or isinstance(b, np.ndarray):
        return to_float(a) @ to_float(b)
    n, m, p = len(a), len(b), len(b[0])
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(m)) for j in range(p))
                 for i in range(n))


def madd(a, b):
    if isinstance(a, np.ndarray) or isinstance(b, np.ndarray):
        return to_float(a) + to_float(b)
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def msub(a, b):
    if isinstance(a, np.ndarray) or isinstance(b, np.ndarray):
        return to_float(a) - to_float(b)
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mscale(c, a):
    if isinstance(a, np.ndarray):
        return float(c) * a
    if isinstance(c, float):
        return float(c) * to_float(a)
    c = frac(c)
    return tuple(tuple(c * x for x in row) for row in a)


def mneg(a):
    return mscale(-1, a)


def mtrace(a):
    if isinstance(a, np.ndarray):
        return float(np.trace(a))
    return sum(a[i][i] for i in range(len(a)))


def minv(a):
    if isinstance(a, np.ndarray):
        return np.linalg.inv(a)
    from ..exactla import invert
    return tuple(tuple(row) for row in invert(a))


def mexp(a) -> np.ndarray:
    """Floating exponential by scaling and squaring with a series core."""
    a = to_float(a)
    norm = np.max(np.abs(a)) if a.size else 0.0
    k = max(0, int(np.ceil(np.log2(norm / 0.25))) if norm > 0.25 else 0)
    b = a / (2.0 ** k)
    out = np.eye(a.shape[0])
    term = np.eye(a.shape[0])
    for i in range(1, 24):
        term = term @ b / i
        out = out + term
    for _ in range(k):
        out = out @ out
    return out


def bracket_right_invariant(u, v):
    """[u, v] = vu - uv: the Lie algebra bracket in the right-invariant
    vector field convention used throughout."""
    return msub(mmul(v, u), mmul(u, v))


def rank_numeric(rows: Sequence[Sequence[float]], rel_tol: float = 1e-8) -> int:
    a = np.array([[float(x) for x in row] for row in rows], dtype=float)
    if a.size == 0:
        return 0
    s = np.linalg.svd(a, compute_uv=False)
    if len(s) == 0 or s[0] == 0:
        return 0
    return int(np.sum(s > rel_tol * s[0]))


def min_singular(rows: Sequence[Sequence[float]]) -> float:
    a = np.array([[float(x) for x in row] for row in rows], dtype=float)
    if a.size == 0:
        return 0.0
    s = np.linalg.svd(a, compute_uv=False)
    return float(s[-1]) if len(s) else 0.0


def subspace_distance(rows_a, rows_b) -> float:
    """Frobenius distance of orthogonal projectors onto the two row spans."""
    def projector(rows):
        a = np.array([[float(x) for x in row] for row in rows], dtype=float)
        _, s, vt = np.linalg.svd(a)
        r = int(np.sum(s > 1e-10 * s[0])) if len(s) and s[0] > 0 else 0
        basis = vt[:r]
        return basis.T @ basis
    return float(np.linalg.norm(projector(rows_a) - projector(rows_b)))
