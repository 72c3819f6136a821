"""
Tests for brute-force enumeration over finite fields.

Tests cover:
- Subspace enumeration against Gaussian binomials
- Quiver Grassmannians and flags of the same module agree
- The image and fiber description of Psi on split and nonsplit sequences (A3, D4, E6)
- Polynomial interpolation of point counts
- The enumeration budget, shared by parallel work units
"""

import pytest

from flagpave.artheory import find_minimal_sectional_mono
from flagpave.errors import BudgetExceededError, DimensionMismatchError, InsufficientSamplesError
from flagpave.exactlinalg import GF
from flagpave.extended import build_extended, phi
from flagpave.grassmann import (
    Budget,
    all_dimvecs,
    count_flags_directly,
    count_strata,
    count_submodules,
    count_subspaces,
    counting_records,
    degree_bound,
    enumerate_submodules,
    image_formula_holds,
    interpolate_polynomial,
    stratum_table,
    subspaces,
)
from flagpave.quiver import classify, parse_stacked
from flagpave.rep import Representation, ShortExactSequence, Subrep, build_indecomposable, reduce_mod


class TestSubspaces:
    @pytest.mark.parametrize("p,n,k,expected", [(2, 2, 1, 3), (3, 4, 2, 130), (2, 3, 0, 1), (5, 2, 3, 0)])
    def test_gaussian_binomial(self, p, n, k, expected):
        assert count_subspaces(p, n, k) == expected

    def test_enumeration_matches_count(self):
        found = list(subspaces(GF(2), 3, 1))
        assert len(found) == 7
        assert len(set(found)) == 7

    def test_bounded_enumeration(self):
        field = GF(3)
        from flagpave.exactlinalg import span

        line = span(field, 3, [[1, 0, 0]])
        # planes through a fixed line in F_3^3
        assert len(list(subspaces(field, 3, 2, lower=line))) == 4


class TestQuiverGrassmannians:
    def test_simple_modules(self, a2):
        s1 = Representation.simple(a2, "1", GF(3))
        assert count_submodules(s1, (1, 0)) == 1
        assert count_submodules(s1, (0, 0)) == 1

    def test_projective_of_a2(self, a2):
        p1 = Representation.projective(a2, "1", GF(2))
        assert count_submodules(p1, (0, 1)) == 1
        # the top alone is not a submodule
        assert count_submodules(p1, (1, 0)) == 0

    def test_semisimple_counts_lines(self, a2):
        m = Representation.simple(a2, "2", GF(3)).direct_sum(Representation.simple(a2, "2", GF(3)))
        assert count_submodules(m, (0, 1)) == 4

    def test_bad_target(self, a2):
        with pytest.raises(DimensionMismatchError):
            list(enumerate_submodules(Representation.simple(a2, "1", GF(2)), (2, 0)))

    def test_all_dimvecs(self):
        assert all_dimvecs((1, 2)) == [(0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (1, 2)]

    def test_degree_bound(self, a2):
        field = GF(2)
        t = Representation.simple(a2, "2", field).direct_sum(Representation.simple(a2, "2", field))
        assert degree_bound(t, (0, 1)) == 1
        assert degree_bound(t, (0, 2)) == 0


class TestFlags:
    @pytest.mark.parametrize("strict", [False, True])
    def test_flags_match_submodules(self, a3, strict):
        m = Representation.projective(a3, "1", GF(2))
        eq = build_extended(a3, 2, strict)
        t = phi(m, eq)
        for f in all_dimvecs(t.dims):
            assert count_flags_directly(m, 2, strict, f) == count_submodules(t, f)

    def test_d4_flags_match_submodules(self, d4):
        m = reduce_mod(build_indecomposable(d4, (1, 2, 1, 1)), 3)
        eq = build_extended(d4, 2)
        t = phi(m, eq)
        for f in [(0, 1, 0, 0, 0, 1, 0, 0), (0, 1, 0, 0, 1, 1, 0, 0), (0, 1, 0, 1, 0, 2, 1, 1)]:
            assert count_flags_directly(m, 2, False, f) == count_submodules(t, f)

    def test_flag_length_checked(self, a2):
        m = Representation.simple(a2, "1", GF(2))
        with pytest.raises(DimensionMismatchError):
            count_flags_directly(m, 2, False, (1, 0))


class TestPsiImage:
    def test_split_sequence(self, a3):
        field = GF(2)
        m = Representation.simple(a3, "1", field).direct_sum(Representation.simple(a3, "3", field))
        ses = ShortExactSequence.from_submodule(m, Subrep.from_vectors(m, [[], [], [[1]]]))
        eq = build_extended(a3, 2)
        for h in all_dimvecs(phi(m, eq).dims):
            assert image_formula_holds(ses, eq, h).ok

    def test_nonsplit_sequence(self, a3):
        p1 = Representation.projective(a3, "1", GF(2))
        ses = ShortExactSequence.from_submodule(p1, Subrep.from_vectors(p1, [[], [], [[1]]]))
        assert not ses.splits()
        eq = build_extended(a3, 2)
        for h in all_dimvecs(phi(p1, eq).dims):
            check = image_formula_holds(ses, eq, h)
            assert check.ok, (h, check.mismatches, check.fiber_mismatches)

    def test_strata_add_up(self, a3):
        p1 = Representation.projective(a3, "1", GF(2))
        ses = ShortExactSequence.from_submodule(p1, Subrep.from_vectors(p1, [[], [], [[1]]]))
        eq = build_extended(a3, 2)
        h = (0, 0, 1, 0, 1, 1)
        table = stratum_table(ses, eq, h)
        assert sum(table.values()) == count_submodules(phi(p1, eq), h)
        for (f, g), n in table.items():
            assert count_strata(ses, eq, f, g) == n

    @pytest.mark.slow
    def test_minimal_sectional_mono_of_d4(self, d4):
        y = reduce_mod(build_indecomposable(d4, (1, 2, 1, 1)), 2)
        x, embedding = find_minimal_sectional_mono(y)
        ses = ShortExactSequence.from_submodule(y, embedding.image_subrep())
        assert not ses.splits()
        eq = build_extended(d4, 2)
        for h in [(0, 1, 0, 0, 0, 1, 0, 0), (0, 1, 0, 0, 1, 1, 0, 0), (0, 1, 0, 0, 1, 2, 1, 1)]:
            assert image_formula_holds(ses, eq, h).ok

    @pytest.mark.slow
    def test_minimal_sectional_mono_of_e6(self, e6):
        shape = classify(e6)
        root = shape.to_quiver_order(e6, parse_stacked(shape, "(1;12211)"))
        y = reduce_mod(build_indecomposable(e6, root), 2)
        x, embedding = find_minimal_sectional_mono(y)
        ses = ShortExactSequence.from_submodule(y, embedding.image_subrep())
        assert not ses.splits()
        eq = build_extended(e6, 1)
        for h in all_dimvecs(phi(y, eq).dims):
            check = image_formula_holds(ses, eq, h)
            assert check.ok, (h, check.mismatches, check.fiber_mismatches)


class TestInterpolation:
    def test_line(self):
        fit = interpolate_polynomial([(2, 3), (3, 4)], 1)
        assert fit.coefficients == (1, 1)
        assert fit.integral and fit.nonnegative
        assert fit.evaluate(5) == 6

    def test_projective_plane_with_extra_sample(self):
        fit = interpolate_polynomial([(2, 7), (3, 13), (5, 31), (7, 57)], 2)
        assert fit.coefficients == (1, 1, 1)

    def test_disagreeing_extra_sample(self):
        with pytest.raises(InsufficientSamplesError):
            interpolate_polynomial([(2, 3), (3, 4), (5, 7)], 1)

    def test_too_few_samples(self):
        with pytest.raises(InsufficientSamplesError):
            interpolate_polynomial([(2, 3)], 1)

    def test_counting_records(self, a2):
        eq = build_extended(a2, 1)
        p1 = Representation.projective(a2, "1")
        records = counting_records(p1, eq, [(0, 1)], [2, 3], module="P(1)")
        assert [(r.p, r.count) for r in records] == [(2, 1), (3, 1)]
        assert records[0].to_dict()["rep"] == "P(1)"


class TestBudget:
    def test_tick_limit(self):
        budget = Budget(2)
        budget.tick()
        budget.tick()
        with pytest.raises(BudgetExceededError):
            budget.tick()

    def test_enumeration_stops(self, a3):
        m = Representation.projective(a3, "1", GF(2))
        with pytest.raises(BudgetExceededError) as info:
            count_submodules(m, (1, 1, 1), budget=1)
        assert info.value.exit_code == 4

    def test_work_units_share_the_budget(self, a2):
        field = GF(2)
        m = Representation.simple(a2, "1", field).direct_sum(Representation.simple(a2, "1", field))
        # three lines at vertex 1, two nodes each: 6 visits in all, 2 per unit
        assert count_submodules(m, (1, 0), budget=6, workers=2) == 3
        with pytest.raises(BudgetExceededError):
            count_submodules(m, (1, 0), budget=5, workers=2)

    def test_parallel_visits_match_serial(self, a2):
        field = GF(3)
        m = Representation.simple(a2, "1", field).direct_sum(Representation.simple(a2, "1", field))
        serial, parallel = Budget(100), Budget(100)
        assert count_submodules(m, (1, 0), budget=serial) == count_submodules(m, (1, 0), budget=parallel, workers=2)
        assert serial.visited == parallel.visited

    def test_default_from_environment(self, monkeypatch):
        from flagpave.config import reset_settings

        monkeypatch.setenv("QP_MAX_NODES", "5")
        reset_settings()
        assert Budget().limit == 5
