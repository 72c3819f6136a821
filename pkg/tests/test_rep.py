"""
Tests for representations, Hom/Ext^1 and decomposition.

Tests cover:
- Projectives, simples and their Hom spaces
- Ext^1 through the Euler form
- Krull-Schmidt decomposition (also after a change of basis) and split tests
- Order statistics, ord_e as Hom from the projective at the branch vertex, and prime reduction
"""

import random

import pytest

from flagpave.artheory import knit
from flagpave.config import get_settings
from flagpave.errors import DimensionMismatchError, InvalidRootError, NotDynkinError
from flagpave.exactlinalg import GF, QQ, Matrix, rank
from flagpave.rep import (
    Representation,
    ShortExactSequence,
    Subrep,
    branch_vertex,
    build_indecomposable,
    decompose,
    direct_sum_of,
    ext1_dim,
    hom_dim,
    hom_space,
    is_indecomposable,
    ord_,
    ord_e,
    reduce_mod,
    safe_primes,
)


def _invertible(rng, n):
    if n == 0:
        return Matrix.identity(QQ, 0)
    while True:
        g = Matrix.from_rows(QQ, [[rng.randint(-2, 2) for _ in range(n)] for _ in range(n)], n)
        if rank(g) == n:
            return g


class TestConstruction:
    def test_projectives_of_a3(self, a3):
        assert Representation.projective(a3, "1").dims == (1, 1, 1)
        assert Representation.projective(a3, "3").dims == (0, 0, 1)
        assert Representation.injective(a3, "1").dims == (1, 0, 0)

    def test_wrong_matrix_shape(self, a2):
        with pytest.raises(DimensionMismatchError):
            Representation(a2, QQ, (1, 1), (Matrix.from_rows(QQ, [[1, 0]]),))

    def test_build_indecomposable_rejects_non_roots(self, a3):
        with pytest.raises(InvalidRootError):
            build_indecomposable(a3, (1, 0, 1))


class TestHomExt:
    def test_hom_between_projectives(self, a3):
        p1 = Representation.projective(a3, "1")
        p3 = Representation.projective(a3, "3")
        assert hom_dim(p3, p1) == 1
        assert hom_dim(p1, p3) == 0
        for f in hom_space(p3, p1):
            assert f.check()

    def test_ext_between_simples(self, a2):
        s1 = Representation.simple(a2, "1")
        s2 = Representation.simple(a2, "2")
        assert ext1_dim(s1, s2) == 1
        assert ext1_dim(s2, s1) == 0

    def test_bricks(self, e6):
        top = build_indecomposable(e6, (1, 2, 3, 2, 1, 2))
        assert hom_dim(top, top) == 1


class TestDecomposition:
    def test_direct_sum(self, a3):
        m = direct_sum_of(a3, {(1, 1, 1): 1, (0, 1, 0): 2})
        assert decompose(m) == {(1, 1, 1): 1, (0, 1, 0): 2}
        assert not is_indecomposable(m)

    def test_indecomposable(self, d4):
        assert is_indecomposable(build_indecomposable(d4, (1, 2, 1, 1)))

    def test_nonsplit_sequence(self, a3):
        p1 = Representation.projective(a3, "1")
        sub = Subrep.from_vectors(p1, [[], [], [[1]]])
        assert sub.is_stable()
        ses = ShortExactSequence.from_submodule(p1, sub)
        assert ses.is_exact()
        assert not ses.splits()

    def test_split_sequence(self, a3):
        m = Representation.simple(a3, "1").direct_sum(Representation.simple(a3, "3"))
        sub = Subrep.from_vectors(m, [[], [], [[1]]])
        assert ShortExactSequence.from_submodule(m, sub).splits()

    def test_change_of_basis_keeps_summands(self, d4):
        rng = random.Random(get_settings().seed)
        parts = {(1, 2, 1, 1): 1, (0, 1, 0, 0): 1, (1, 1, 0, 0): 2}
        m = direct_sum_of(d4, parts)
        for _ in range(3):
            moved = m.change_basis([_invertible(rng, n) for n in m.dims])
            assert decompose(moved) == parts

    def test_change_of_basis_keeps_indecomposable(self, e6):
        rng = random.Random(get_settings().seed)
        y = build_indecomposable(e6, (1, 2, 3, 2, 1, 2))
        moved = y.change_basis([_invertible(rng, n) for n in y.dims])
        assert is_indecomposable(moved)
        assert decompose(moved) == {y.dims: 1}

    def test_affine_is_not_decomposed(self):
        from flagpave.formats import load_quiver

        q = load_quiver("affine_a3")
        with pytest.raises(NotDynkinError):
            decompose(Representation.simple(q, "1"))


class TestOrders:
    def test_ord_and_ord_e(self, e6):
        m = build_indecomposable(e6, (1, 2, 3, 2, 1, 2))
        assert ord_(m) == 3
        assert ord_e(m) == 3

    def test_ord_e_is_hom_from_projective(self, e6):
        p = Representation.projective(e6, branch_vertex(e6))
        for m in knit(e6).nodes.values():
            assert ord_e(m) == hom_dim(p, m)

    def test_ord_e_needs_type_e(self, a3):
        with pytest.raises(NotDynkinError):
            ord_e(Representation.simple(a3, "1"))


class TestPrimes:
    def test_reduce_mod_keeps_dimensions(self, d4):
        m = build_indecomposable(d4, (1, 2, 1, 1))
        reduced = reduce_mod(m, 3)
        assert reduced.field == GF(3)
        assert hom_dim(reduced, reduced) == 1

    def test_safe_primes(self, a3):
        assert list(safe_primes(Representation.projective(a3, "1"), 3)) == [2, 3, 5]
