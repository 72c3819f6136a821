"""
Tests for the paving engine.

Tests cover:
- Cell multiset arithmetic
- Base cases: points, projective lines, small-order indecomposables
- GR and U pieces, including the trivial U pieces
- Scope checks (affine input, non-rational fields)
- Agreement of cells, brute-force counts and the counting recursion
- Backtracking out of a bad peel in E7
- The counting recursion never enumerates
- Fitted counting polynomials against cell multisets
- Report layout
"""

import pytest

from flagpave.artheory import knit
from flagpave.errors import OutOfScopeError, QuiverMismatchError, UnresolvedPavingError
from flagpave.exactlinalg import GF
from flagpave.extended import build_extended, phi
from flagpave.formats import check_report, load_quiver
from flagpave.grassmann import count_submodules, interpolate_polynomial
from flagpave.paving import (
    BACKTRACK,
    CellMultiset,
    PavingEngine,
    Piece,
    Unresolved,
    count_recursive,
    pave,
    paving_report,
    verify_paving,
)
from flagpave.rep import Representation, Subrep, build_indecomposable, direct_sum_of, reduce_mod


class TestCellMultiset:
    def test_point_and_lines(self):
        assert CellMultiset.point().as_mapping() == {0: 1}
        assert CellMultiset.projective_lines(2).as_mapping() == {0: 1, 1: 2, 2: 1}
        assert CellMultiset.projective_lines(0) == CellMultiset.point()

    def test_sum_and_product(self):
        line = CellMultiset.projective_lines(1)
        assert (line + CellMultiset.point()).as_mapping() == {0: 2, 1: 1}
        assert line.product(line) == CellMultiset.projective_lines(2)
        assert line.product(CellMultiset.empty()).is_empty()

    def test_shift(self):
        assert CellMultiset.point().shift(3).as_mapping() == {3: 1}
        assert CellMultiset.empty().shift(-2).is_empty()
        with pytest.raises(ValueError):
            CellMultiset.point().shift(-1)

    def test_evaluation(self):
        cells = CellMultiset.from_mapping({0: 1, 1: 1, 2: 1})
        assert cells.evaluate(2) == 7
        assert cells.total() == 3
        assert cells.dimension() == 2
        assert cells.as_polynomial() == [1, 1, 1]
        assert CellMultiset.empty().as_polynomial() == []

    def test_normal_form(self):
        cells = CellMultiset(((2, 1), (0, 1), (2, 3), (1, 0)))
        assert cells.cells == ((0, 1), (2, 4))
        assert cells.to_dict() == {"0": 1, "2": 4}
        assert CellMultiset.from_dict(cells.to_dict()) == cells

    def test_negative_entries(self):
        with pytest.raises(ValueError):
            CellMultiset(((-1, 1),))


class TestBaseCases:
    def test_projective_submodule_is_a_point(self, a2):
        result = pave(Representation.projective(a2, "1"), 1, False, (0, 1))
        assert result == CellMultiset.point()

    def test_line_at_branch_vertex(self, d4):
        y = build_indecomposable(d4, (1, 2, 1, 1))
        assert pave(y, 1, False, (0, 1, 0, 0)) == CellMultiset.projective_lines(1)
        assert count_recursive(y, 1, False, (0, 1, 0, 0), 3) == 4

    def test_flags_of_a_simple(self, a2):
        results = PavingEngine(2).pave_all(Representation.simple(a2, "1"))
        assert list(results) == [(0, 0, 0, 0), (0, 0, 1, 0), (1, 0, 1, 0)]
        assert all(r == CellMultiset.point() for r in results.values())

    def test_admissible_dimvecs_increase(self, a2):
        engine = PavingEngine(2)
        for f in engine.admissible_dimvecs(Representation.projective(a2, "1")):
            assert f[0] <= f[2] and f[1] <= f[3]

    def test_empty_grassmannian(self, a2):
        # the top of P(1) is not a submodule
        assert pave(Representation.projective(a2, "1"), 1, False, (1, 0)).is_empty()


class TestPieces:
    def test_u_with_whole_sub_is_empty(self, a3):
        m = Representation.projective(a3, "1")
        result = PavingEngine(1).pave_piece(Piece("U", m, (0, 0, 1), Subrep.whole(m)))
        assert result.is_empty()

    def test_u_with_zero_sub_is_gr(self, d4):
        y = build_indecomposable(d4, (1, 2, 1, 1))
        engine = PavingEngine(1)
        f = (0, 1, 0, 0)
        assert engine.pave_piece(Piece("U", y, f, Subrep.zero(y))) == engine.pave(y, f)

    def test_u_count(self, a3):
        # Gr_(0,0,1)(P(1)) is a point and lies inside P(3)
        m = Representation.projective(a3, "1")
        p3 = Subrep.from_vectors(m, [[], [], [[1]]])
        assert PavingEngine(1).pave_piece(Piece("U", m, (0, 0, 1), p3)).is_empty()

    def test_piece_kind_checked(self, a2):
        m = Representation.simple(a2, "1")
        with pytest.raises(ValueError):
            Piece("V", m, (0, 0))
        with pytest.raises(ValueError):
            Piece("U", m, (0, 0))

    def test_direct_sum(self, a3):
        m = direct_sum_of(a3, {(0, 1, 0): 2})
        # lines in a plane
        result = pave(m, 1, False, (0, 1, 0))
        assert result == CellMultiset.projective_lines(1)
        assert result.evaluate(5) == 6


class TestScope:
    def test_affine_is_out_of_scope(self):
        q = load_quiver("affine_a3")
        with pytest.raises(OutOfScopeError):
            pave(Representation.simple(q, "1"), 1, False, (1, 0, 0, 0))

    def test_finite_field_input(self, a2):
        with pytest.raises(QuiverMismatchError):
            pave(Representation.simple(a2, "1", GF(2)), 1, False, (1, 0))


class TestVerification:
    @pytest.mark.slow
    @pytest.mark.parametrize("strict", [False, True])
    def test_a3_indecomposables(self, a3, strict):
        engine = PavingEngine(2, strict)
        for m in knit(a3).nodes.values():
            for f, result in engine.pave_all(m).items():
                assert not isinstance(result, Unresolved)
                check = verify_paving(m, 2, strict, f, primes=[2, 3], engine=engine)
                assert check.ok, check.to_dict()

    @pytest.mark.slow
    def test_d4_maximal_root(self, d4):
        y = build_indecomposable(d4, (1, 2, 1, 1))
        for f in [(0, 1, 0, 0, 0, 1, 0, 0), (0, 1, 0, 0, 1, 2, 1, 1), (0, 1, 1, 0, 1, 2, 1, 1)]:
            assert verify_paving(y, 2, False, f, primes=[2, 3]).ok

    @pytest.mark.slow
    def test_d4_sum(self, d4):
        m = direct_sum_of(d4, {(1, 2, 1, 1): 1, (0, 1, 0, 0): 1})
        for f in [(0, 1, 0, 0), (0, 2, 0, 0), (1, 2, 0, 0), (0, 3, 1, 1)]:
            assert verify_paving(m, 1, False, f, primes=[2, 3]).ok

    @pytest.mark.slow
    def test_e6_top_root(self, e6):
        y = build_indecomposable(e6, (1, 2, 3, 2, 1, 2))
        for f in [(0, 1, 1, 0, 0, 0), (0, 1, 2, 1, 0, 1), (1, 2, 2, 1, 0, 1)]:
            assert verify_paving(y, 1, False, f, primes=[2]).ok

    @pytest.mark.slow
    def test_e7_configuration_resolves(self, e7):
        y = build_indecomposable(e7, (1, 2, 2, 3, 2, 1, 1))
        check = verify_paving(y, 1, False, (0, 1, 1, 2, 1, 0, 1), primes=[2])
        assert check.resolved
        assert check.ok

    @pytest.mark.slow
    @pytest.mark.parametrize("strict", [False, True])
    def test_every_d4_indecomposable_at_depth_two(self, d4, strict):
        engine = PavingEngine(2, strict)
        for m in knit(d4).nodes.values():
            for f, result in engine.pave_all(m).items():
                assert not isinstance(result, Unresolved), result.to_dict()
                check = verify_paving(m, 2, strict, f, primes=[2, 3], engine=engine)
                assert check.ok, (m.dims, f, check.to_dict())

    @pytest.mark.slow
    def test_e6_indecomposables_of_order_three(self, e6):
        engine = PavingEngine(1)
        nodes = [m for root, m in knit(e6).nodes.items() if max(root) == 3]
        assert nodes
        for m in nodes:
            for f, result in engine.pave_all(m).items():
                assert not isinstance(result, Unresolved), result.to_dict()
                check = verify_paving(m, 1, False, f, primes=[2, 3], engine=engine)
                assert check.ok, (m.dims, f, check.to_dict())

    def test_fitted_polynomial_matches_cells(self, d4):
        y = build_indecomposable(d4, (1, 2, 1, 1))
        eq = build_extended(d4, 1)
        pavings = PavingEngine(1).pave_all(y)
        fs = [f for f, cells in pavings.items() if isinstance(cells, CellMultiset) and cells.dimension() <= 3]
        assert fs
        for f in fs:
            points = [(p, count_submodules(phi(reduce_mod(y, p), eq), f)) for p in (2, 3, 5, 7)]
            fit = interpolate_polynomial(points, pavings[f].dimension())
            assert list(fit.coefficients) == pavings[f].as_polynomial()

    @pytest.mark.slow
    def test_e7_bad_peel_backtracks(self, e7):
        # U((1;112321), (1;111210) + (0;000111)): peeling (1;111210) leaves a
        # quotient that (0;000111) does not map into irreducibly
        y = build_indecomposable(e7, (1, 2, 2, 3, 2, 1, 1))
        engine = PavingEngine(1)
        check = verify_paving(y, 1, False, (0, 1, 1, 2, 1, 0, 1), primes=[2], engine=engine)
        assert engine.stats["backtracks"] > 0
        dead_ends = [t for t in engine.trail if t.rule == BACKTRACK and "not a good mono" in t.detail]
        assert dead_ends
        ar = knit(e7)
        assert ar.label((1, 1, 2, 3, 2, 1, 1)) in dead_ends[0].detail
        assert ar.label((1, 1, 1, 2, 1, 0, 1)) in dead_ends[0].detail
        assert check.resolved
        assert check.evaluated[0] == check.brute[0] == check.recursive[0]


class TestRecursiveCount:
    def _brute(self, m, d, f, p):
        eq = build_extended(m.quiver, d)
        return count_submodules(phi(reduce_mod(m, p), eq), f)

    def test_no_enumeration_on_d4(self, d4, monkeypatch):
        y = build_indecomposable(d4, (1, 2, 1, 1))
        targets = [(1, (0, 1, 0, 0), 3), (2, (0, 1, 0, 0, 1, 2, 1, 1), 2), (2, (0, 1, 1, 0, 1, 2, 1, 1), 3)]
        expected = [self._brute(y, d, f, p) for d, f, p in targets]

        def forbidden(*args, **kwargs):
            raise AssertionError("the recursion enumerated submodules")

        monkeypatch.setattr("flagpave.paving.count_submodules", forbidden)
        assert [count_recursive(y, d, False, f, p) for d, f, p in targets] == expected

    @pytest.mark.slow
    def test_no_enumeration_on_e6(self, e6, monkeypatch):
        y = build_indecomposable(e6, (1, 2, 3, 2, 1, 2))
        fs = [(0, 1, 1, 0, 0, 0), (0, 1, 2, 1, 0, 1)]
        expected = [self._brute(y, 1, f, 2) for f in fs]

        def forbidden(*args, **kwargs):
            raise AssertionError("the recursion enumerated submodules")

        monkeypatch.setattr("flagpave.paving.count_submodules", forbidden)
        assert [count_recursive(y, 1, False, f, 2) for f in fs] == expected

    def test_stuck_node_raises(self, e6, monkeypatch):
        monkeypatch.setattr("flagpave.paving.minimal_sectional_monos", lambda ar, root: [])
        y = build_indecomposable(e6, (1, 2, 3, 2, 1, 2))
        with pytest.raises(UnresolvedPavingError) as info:
            count_recursive(y, 1, False, (0, 1, 1, 0, 0, 0), 2)
        assert info.value.exit_code == 3


class TestReport:
    def test_report_schema(self, a2):
        report = paving_report(Representation.projective(a2, "1"), 1, False, primes=[2, 3])
        model = check_report(report)
        assert model.ok
        assert model.input.type == "A2"
        assert [r.f for r in model.results] == [[0, 0], [0, 1], [1, 1]]
        assert all(r.unresolved is None for r in model.results)

    def test_strata_listed(self, d4):
        engine = PavingEngine(1)
        m = direct_sum_of(d4, {(0, 1, 0, 0): 2})
        engine.pave(m, (0, 1, 0, 0))
        rows = engine.strata(m, (0, 1, 0, 0))
        assert sum(row["f"][1] for row in rows) == 1
        assert {row["image"] for row in rows} == {"product"}
