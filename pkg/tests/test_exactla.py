"""Exact linear algebra: canonical forms, meet/join, complements, signatures."""

import random
from fractions import Fraction as F

import pytest

from dirac_kit import qlie
from dirac_kit.exactla import (DegenerateFormError, QForm, Subspace,
                               canonicalize, identity_mat, invert,
                               lagrangian_class, mat_vec, meet_join,
                               orth_complement, rank)


def test_canonicalize_scaling():
    s = canonicalize([(2, 0), (0, 3)])
    assert s.basis == ((F(1), F(0)), (F(0), F(1)))


def test_zero_subspace():
    assert Subspace.zero(3).dim == 0
    assert Subspace(3, []).basis == ()


def test_canonical_form_generator_independent():
    rng = random.Random(1)
    base = [(1, 2, 0, 0, 1), (0, 1, 1, 3, 0), (2, 0, 0, 1, 1)]
    reference = Subspace(5, base)
    for _ in range(5):
        # random invertible change of generators
        while True:
            m = [[F(rng.randint(-3, 3)) for _ in range(3)] for _ in range(3)]
            if rank(m) == 3:
                break
        rows = [[sum(m[i][k] * F(base[k][t]) for k in range(3)) for t in range(5)]
                for i in range(3)]
        assert Subspace(5, rows) == reference
    shuffled = list(base)
    rng.shuffle(shuffled)
    assert Subspace(5, shuffled) == reference
    # idempotence
    again = Subspace(5, reference.basis)
    assert again == reference


def test_meet_join_basics():
    a = Subspace(2, [(1, 0)])
    b = Subspace(2, [(0, 1)])
    meet, join = meet_join(a, b)
    assert meet.dim == 0 and join.dim == 2
    meet, join = meet_join(a, a)
    assert meet == a and join == a


def test_meet_join_dimension_formula_randomized():
    rng = random.Random(7)
    for _ in range(25):
        a = Subspace(6, [[F(rng.randint(-2, 2)) for _ in range(6)]
                         for _ in range(rng.randint(1, 4))])
        b = Subspace(6, [[F(rng.randint(-2, 2)) for _ in range(6)]
                         for _ in range(rng.randint(1, 4))])
        meet, join = meet_join(a, b)
        assert a.dim + b.dim == meet.dim + join.dim
        # independent solve of the stacked kernel system {x A = y B}
        from dirac_kit.exactla import kernel_basis, transpose
        if a.dim and b.dim:
            stacked = transpose(list(a.basis) + [tuple(-x for x in r)
                                                 for r in b.basis])
            sols = kernel_basis(stacked, a.dim + b.dim)
            vecs = []
            for s in sols:
                vecs.append(tuple(sum(s[i] * a.basis[i][t] for i in range(a.dim))
                                  for t in range(6)))
            assert Subspace(6, vecs) == meet


def test_orth_complement_whole_space():
    q = QForm.standard(4)
    assert orth_complement(Subspace.full(4), q).dim == 0


def test_orth_complement_diagonal_self():
    g = qlie.sl2_trace()
    q = g.gram.direct_sum(g.gram.negated())
    diag = Subspace(6, [tuple(F(1 if t in (i, 3 + i) else 0) for t in range(6))
                        for i in range(3)])
    assert orth_complement(diag, q) == diag


def test_orth_complement_random_dims_and_involution():
    rng = random.Random(3)
    q = QForm.hyperbolic(4)
    for _ in range(10):
        w = Subspace(8, [[F(rng.randint(-2, 2)) for _ in range(8)]
                         for _ in range(3)])
        if w.dim != 3:
            continue
        perp = orth_complement(w, q)
        assert perp.dim == 5
        assert orth_complement(perp, q) == w


def test_lagrangian_class_examples():
    g = qlie.sl2_trace()
    q = g.gram.direct_sum(g.gram.negated())
    anti = Subspace(6, [tuple(F(1 if t == i else (-1 if t == 3 + i else 0))
                              for t in range(6)) for i in range(3)])
    assert lagrangian_class(anti, q) == "lagrangian"

    # graph of a skew map c: Q^3 -> Q^3 in hyperbolic Q^6
    hyp = QForm.hyperbolic(3)
    c = [[F(0), F(2), F(-1)], [F(-2), F(0), F(3)], [F(1), F(-3), F(0)]]
    rows = [tuple(F(1 if t == i else 0) for t in range(3)) + tuple(c[i])
            for i in range(3)]
    graph = Subspace(6, rows)
    assert lagrangian_class(graph, hyp) == "lagrangian"
    # direct evaluation oracle for isotropy
    for r1 in rows:
        for r2 in rows:
            assert hyp.pair(r1, r2) == 0

    null_line = Subspace(4, [(1, 0, 1, 0)])
    split = QForm([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, -1, 0], [0, 0, 0, -1]])
    assert lagrangian_class(null_line, split) == "isotropic"


def test_lagrangian_class_rejects_degenerate():
    q = QForm([[1, 0], [0, 0]])
    with pytest.raises(DegenerateFormError):
        lagrangian_class(Subspace(2, [(1, 0)]), q)


def test_lagrangian_perp_is_lagrangian():
    rng = random.Random(11)
    from dirac_kit.relations import random_lagrangian
    q = QForm.hyperbolic(3)
    a = [tuple(F(1 if t == i else 0) for t in range(6)) for i in range(3)]
    b = [tuple(F(1 if t == 3 + i else 0) for t in range(6)) for i in range(3)]
    for _ in range(10):
        w = random_lagrangian(rng, a, b, q)
        assert lagrangian_class(w, q) == "lagrangian"
        assert orth_complement(w, q) == w


def test_signature_exact():
    assert QForm.standard(2).signature() == (2, 0, 0)
    assert qlie.sl2_trace().gram.signature() == (2, 1, 0)
    assert qlie.su2_trace().gram.signature() == (0, 3, 0)
    assert QForm.hyperbolic(2).signature() == (2, 2, 0)
    assert QForm([[0, 1], [1, 0]]).signature() == (1, 1, 0)


def test_subspace_serialization_roundtrip():
    s = Subspace(3, [(1, 2, 3), (0, 1, F(1, 2))])
    assert Subspace.from_data(s.to_data()) == s
