"""
Tests for extended quivers, the functor Phi and Ext over the bound algebra R.

Tests cover:
- Vertex, arrow and relation counts of Q_d and Q_{d,str}
- Phi(M) satisfies the relations; a hand-made violation is reported
- Flags of M and submodules of Phi(M) correspond
- Euler form of R against Ext^0 - Ext^1 + Ext^2, and vanishing Ext^2 (including random A3 pairs)
"""

import random

import pytest

from flagpave.artheory import knit
from flagpave.config import get_settings
from flagpave.errors import InvalidDepthError, RelationViolationError
from flagpave.exactlinalg import QQ
from flagpave.extended import (
    BoundModule,
    build_extended,
    ext_all,
    ext_R,
    euler_R,
    flag_to_submodule,
    is_flag,
    phi,
    submodule_to_flag,
)
from flagpave.rep import Representation, Subrep


class TestExtendedQuiver:
    def test_a4_depth_three(self):
        from flagpave.formats import load_quiver

        a4 = load_quiver("a4")
        eq = build_extended(a4, 3)
        assert len(eq.vertices) == 12
        assert len(eq.arrows) == 17
        assert len(eq.virtual) == 6

    def test_a4_depth_three_strict(self):
        from flagpave.formats import load_quiver

        eq = build_extended(load_quiver("a4"), 3, strict=True)
        assert len(eq.vertices) == 12
        assert len(eq.arrows) == 14
        assert len(eq.virtual) == 3

    def test_depth_checks(self, a2):
        with pytest.raises(InvalidDepthError):
            build_extended(a2, 0)
        with pytest.raises(InvalidDepthError):
            build_extended(a2, 1, strict=True)

    def test_virtual_arrow_paths(self, a2):
        eq = build_extended(a2, 2)
        (c,) = eq.virtual
        assert (c.source, c.target) == ("1:1", "2:2")
        assert c.paths == (("1:1^", "a1:2"), ("a1:1", "2:1^"))

    def test_describe(self, a2):
        described = build_extended(a2, 2, strict=True).describe()
        assert described["strict"] is True
        assert [a["id"] for a in described["arrows"]] == ["a1:2", "1:1^", "2:1^"]
        assert described["virtual_arrows"] == []


class TestPhi:
    def test_phi_is_bound(self, a3):
        m = Representation.projective(a3, "1")
        for strict in (False, True):
            t = phi(m, build_extended(a3, 2, strict))
            assert t.dims == (1, 1, 1, 1, 1, 1)
            assert t.validate() == []

    def test_violation_reported(self, a2):
        eq = build_extended(a2, 2)
        t = BoundModule.build(eq, QQ, (1, 1, 1, 1), {
            "a1:1": [[1]], "a1:2": [[1]], "1:1^": [[1]], "2:1^": [[0]],
        })
        assert t.validate() == ["a1:1*"]
        with pytest.raises(RelationViolationError) as info:
            t.checked()
        assert info.value.violated == ["a1:1*"]

    def test_flags_and_submodules(self, a3):
        m = Representation.projective(a3, "1")
        eq = build_extended(a3, 2)
        lower = Subrep.from_vectors(m, [[], [], [[1]]])
        upper = Subrep.from_vectors(m, [[], [[1]], [[1]]])
        assert is_flag(m, [lower, upper], strict=False)
        sub = flag_to_submodule(m, [lower, upper], eq)
        assert sub.dimvec == (0, 0, 1, 0, 1, 1)
        assert [s.dimvec for s in submodule_to_flag(sub, eq)] == [(0, 0, 1), (0, 1, 1)]

    def test_strict_flag_condition(self, a3):
        m = Representation.projective(a3, "1")
        zero = Subrep.zero(m)
        upper = Subrep.from_vectors(m, [[], [[1]], [[1]]])
        # the arrow 2 -> 3 maps the upper member outside the zero lower member
        assert not is_flag(m, [zero, upper], strict=True)
        bottom = Subrep.from_vectors(m, [[], [], [[1]]])
        assert is_flag(m, [bottom, upper], strict=True)


class TestExtOverR:
    @pytest.mark.parametrize("strict", [False, True])
    def test_euler_matches_ext(self, a3, strict):
        eq = build_extended(a3, 2, strict)
        modules = [phi(m, eq) for m in knit(a3).nodes.values()]
        for t in modules:
            for u in modules:
                e0, e1, e2 = ext_all(t, u, eq)
                assert e2 == 0
                assert euler_R(eq, t.dims, u.dims) == e0 - e1 + e2

    def test_euler_matches_ext_on_d4(self, d4):
        eq = build_extended(d4, 2)
        modules = [phi(m, eq) for m in knit(d4).nodes.values()]
        for t in modules:
            for u in modules:
                e0, e1, e2 = ext_all(t, u, eq)
                assert e2 == 0
                assert euler_R(eq, t.dims, u.dims) == e0 - e1

    @pytest.mark.slow
    def test_random_a3_pairs(self, a3):
        rng = random.Random(get_settings().seed)

        def sample():
            dims = [rng.randint(0, 2) for _ in a3.vertices]
            matrices = {}
            for a in a3.arrows:
                rows, cols = dims[a3.index(a.target)], dims[a3.index(a.source)]
                matrices[a.id] = [[rng.randint(-1, 1) for _ in range(cols)] for _ in range(rows)]
            return Representation.from_matrices(a3, QQ, dims, matrices)

        configs = [(1, False), (2, False), (2, True), (3, False), (3, True)]
        pairs = 0
        for d, strict in configs:
            eq = build_extended(a3, d, strict)
            for _ in range(45):
                t, u = phi(sample(), eq), phi(sample(), eq)
                e0, e1, e2 = ext_all(t, u, eq)
                assert e2 == 0
                assert euler_R(eq, t.dims, u.dims) == e0 - e1
                pairs += 1
        assert pairs >= 200

    def test_ext2_vanishes_on_submodules_and_quotients(self, a3):
        from flagpave.exactlinalg import GF
        from flagpave.grassmann import all_dimvecs, enumerate_submodules
        from flagpave.rep import indecomposables_over

        eq = build_extended(a3, 2)
        nodes = indecomposables_over(a3, GF(2))
        big = phi(nodes[(1, 1, 1)], eq)
        targets = [phi(m, eq) for m in nodes.values()]
        for f in all_dimvecs(big.dims):
            for w in enumerate_submodules(big, f):
                sub = w.as_representation()
                quot, _ = big.quotient(w)
                for t in targets:
                    assert ext_all(sub, t, eq)[2] == 0
                    assert ext_all(t, quot, eq)[2] == 0

    def test_ext_index_range(self, a2):
        eq = build_extended(a2, 2)
        t = phi(Representation.simple(a2, "1"), eq)
        with pytest.raises(ValueError):
            ext_R(t, t, 3, eq)
        assert ext_R(t, t, 0, eq) == 1
