"""Solver tests: fixed-multiplier behavior, target solves against closed
forms, surfaces, and the degenerate/edge paths.

The frozen solver references below were double-checked during development
against an independent disciplined-convex-programming formulation of the same
minimization; the two agreed to ~1e-6 on every point, including the ones the
closed forms do not cover.
"""

import math

import numpy as np
import pytest

import semrd.sources as sources
from semrd.closed_form import rate_conditionally_independent, rate_correlated
from semrd.errors import BracketingError, InfeasibleDistortionError, ProbabilityError
from semrd.prob import Alphabet, BinarySourceSpec, DistortionMatrix, JointPMF, binary_entropy
from semrd.solver import (
    RDProblem,
    RDQuery,
    SolverOptions,
    ba_fixed_multipliers,
    semantic_rd,
    solve_rd_point,
    sweep_surface,
)

SPEC_IND = BinarySourceSpec.conditionally_independent(0.25, 0.25, 0.25)
SPEC_COR = BinarySourceSpec.correlated(0.25, 0.25, 0.25)


@pytest.fixture(scope="module")
def prob_ind():
    return sources.conditionally_independent_problem(SPEC_IND)


@pytest.fixture(scope="module")
def prob_cor():
    return sources.correlated_problem(SPEC_COR)


def single_source_problem():
    """Uniform bit, Hamming, no side information, semantic axis inert."""
    x1 = Alphabet.binary("x1")
    bg = Alphabet("x2", 1, ("*",))
    si = Alphabet("y", 1, ("*",))
    h1 = Alphabet.binary("x1_hat")
    h2 = Alphabet("x2_hat", 1, ("*",))
    hs = Alphabet("s_hat", 1, ("*",))
    source = JointPMF((x1, bg, si), np.array([0.5, 0.5]).reshape(2, 1, 1))
    return RDProblem(
        source=source,
        repro_alphabets=(h1, h2, hs),
        d1=DistortionMatrix.hamming(x1, h1),
        d2=DistortionMatrix.zero(bg, h2),
        ds_mod=DistortionMatrix.zero(x1, hs),
    )


class TestFixedMultipliers:
    def test_zero_multipliers_zero_rate(self, prob_cor):
        pt = ba_fixed_multipliers(prob_cor, 0.0, 0.0, 0.0)
        assert pt.rate == pytest.approx(0.0, abs=1e-9)
        assert pt.converged

    def test_classical_binary_slope(self):
        # at multiplier ln 9 the uniform-bit Hamming problem sits at D = 0.1
        pt = ba_fixed_multipliers(single_source_problem(), math.log(9.0), 0.0, 0.0)
        assert pt.achieved[0] == pytest.approx(0.1, abs=1e-6)
        assert pt.rate == pytest.approx(1.0 - binary_entropy(0.1), abs=1e-4)

    def test_lossless_limit(self):
        pt = ba_fixed_multipliers(single_source_problem(), 40.0, 0.0, 0.0)
        assert pt.achieved[0] == pytest.approx(0.0, abs=1e-9)
        assert pt.rate == pytest.approx(1.0, abs=1e-6)

    def test_negative_multiplier_rejected(self, prob_cor):
        with pytest.raises(ProbabilityError):
            ba_fixed_multipliers(prob_cor, -1.0, 0.0, 0.0)

    def test_channel_consistent_with_reported_values(self, prob_cor):
        pt = ba_fixed_multipliers(prob_cor, 2.0, 1.0, 0.5)
        joint = pt.channel
        d1 = joint.expected_distortion(prob_cor.d1, "x1", "x1_hat")
        assert d1 == pytest.approx(pt.achieved[0], abs=1e-12)


class TestSolveRdPoint:
    def test_independent_parts_example(self, prob_ind):
        pt = solve_rd_point(prob_ind, RDQuery(0.1, 0.1, 0.5))
        assert pt.rate == pytest.approx(0.684565061739704, abs=1e-3)
        assert pt.converged

    def test_correlated_example(self, prob_cor):
        pt = solve_rd_point(prob_cor, RDQuery(0.05, 0.1, 0.3))
        assert pt.rate == pytest.approx(0.867163698213028, abs=1e-3)
        assert pt.converged

    def test_achieved_satisfies_query(self, prob_cor):
        q = RDQuery(0.2, 0.1, 0.26)
        pt = solve_rd_point(prob_cor, q)
        assert pt.achieved[0] <= q.d1 + 1e-7
        assert pt.achieved[1] <= q.d2 + 1e-7
        assert pt.achieved[2] <= q.ds + 1e-7
        # the semantic target is the binding one here; the observation
        # constraint rides along at the transformed value
        assert pt.achieved[0] == pytest.approx(0.02, abs=1e-6)

    def test_achieved_matches_channel_recomputation(self, prob_cor):
        pt = solve_rd_point(prob_cor, RDQuery(0.05, 0.1, 0.3))
        joint = pt.channel
        names = ("x1", "x2", "y", "x1_hat", "x2_hat", "s_hat")
        recomputed = (
            joint.expected_distortion(prob_cor.d1, names[0], names[3]),
            joint.expected_distortion(prob_cor.d2, names[1], names[4]),
            joint.expected_distortion(prob_cor.ds_mod, names[0], names[5]),
        )
        assert np.allclose(recomputed, pt.achieved, atol=1e-10)
        rate = joint.conditional_mutual_information(
            ("x1", "x2"), ("x1_hat", "x2_hat", "s_hat"), ("y",)
        )
        assert rate == pytest.approx(pt.rate, abs=1e-12)

    def test_zero_rate_when_targets_slack(self, prob_cor):
        pt = solve_rd_point(prob_cor, RDQuery(0.6, 0.6, 0.55))
        assert pt.rate == pytest.approx(0.0, abs=1e-12)
        assert pt.multipliers == (0.0, 0.0, 0.0)
        assert pt.converged

    def test_infeasible_semantic_target(self, prob_cor):
        with pytest.raises(InfeasibleDistortionError, match="floor"):
            solve_rd_point(prob_cor, RDQuery(0.1, 0.1, 0.1))

    def test_boundary_target_zero(self, prob_cor):
        pt = solve_rd_point(prob_cor, RDQuery(0.0, 0.1, 0.5))
        expect = 2 * binary_entropy(0.25) - binary_entropy(0.1)
        assert pt.rate == pytest.approx(expect, abs=1e-3)

    def test_tie_between_constraints(self, prob_cor):
        # observation target equals the transformed semantic target exactly
        pt = solve_rd_point(prob_cor, RDQuery(0.02, 0.5, 0.26))
        expect = binary_entropy(0.25) - binary_entropy(0.02)
        assert pt.rate == pytest.approx(expect, abs=1e-3)
        assert pt.converged

    def test_support_threshold_point(self, prob_cor):
        # hard point: a reproduction atom sits at its support threshold; the
        # reference value is from the independent convex-program cross-check
        pt = solve_rd_point(prob_cor, RDQuery(0.05, 0.23, 0.45))
        assert pt.rate == pytest.approx(0.5626384, abs=2e-5)
        assert pt.converged

    def test_rate_nonnegative_and_multipliers_nonnegative(self, prob_ind):
        pt = solve_rd_point(prob_ind, RDQuery(0.3, 0.4, 0.45))
        assert pt.rate >= 0.0
        assert all(l >= 0.0 for l in pt.multipliers)

    def test_determinism(self, prob_cor):
        a = solve_rd_point(prob_cor, RDQuery(0.05, 0.1, 0.3))
        b = solve_rd_point(prob_cor, RDQuery(0.05, 0.1, 0.3))
        assert a.rate == b.rate
        assert np.array_equal(a.channel.probs, b.channel.probs)

    def test_jitter_initialization_changes_nothing_material(self, prob_ind):
        base = solve_rd_point(prob_ind, RDQuery(0.1, 0.1, 0.5))
        jit = solve_rd_point(prob_ind, RDQuery(0.1, 0.1, 0.5), SolverOptions(init_seed=7))
        assert jit.rate == pytest.approx(base.rate, abs=1e-6)


class TestSemanticRd:
    DS = DistortionMatrix.hamming(Alphabet.binary("s"), Alphabet.binary("s_hat"))

    def test_lemma_value(self):
        pt = semantic_rd(sources.semantic_observation_joint(0.1), self.DS, 0.2)
        assert pt.rate == pytest.approx(0.456435556800032, abs=1e-3)

    def test_half_target_free(self):
        pt = semantic_rd(sources.semantic_observation_joint(0.1), self.DS, 0.5)
        assert pt.rate == pytest.approx(0.0, abs=1e-9)

    def test_floor_target_costs_full_bit(self):
        pt = semantic_rd(sources.semantic_observation_joint(0.1), self.DS, 0.1)
        assert pt.rate == pytest.approx(1.0, abs=1e-3)

    def test_below_floor_infeasible(self):
        with pytest.raises(InfeasibleDistortionError):
            semantic_rd(sources.semantic_observation_joint(0.1), self.DS, 0.05)


class TestSweepSurface:
    def test_single_cell(self, prob_cor):
        surf = sweep_surface(prob_cor, {"d1": [0.05], "d2": [0.1], "ds": [0.3]})
        assert len(surf.points) == 1
        cell = surf.points[0]
        assert cell.error is None
        assert cell.point.rate == pytest.approx(0.867163698213028, abs=1e-3)

    def test_empty_grid_rejected(self, prob_cor):
        with pytest.raises(ProbabilityError, match="empty grid"):
            sweep_surface(prob_cor, {"d1": [], "d2": [0.1], "ds": [0.3]})

    def test_unknown_axis_rejected(self, prob_cor):
        with pytest.raises(ProbabilityError):
            sweep_surface(prob_cor, {"d1": [0.1], "d2": [0.1], "dz": [0.3]})

    def test_monotone_in_d1(self, prob_cor):
        grid = {"d1": list(np.linspace(0.01, 0.06, 5)), "d2": [0.1], "ds": [0.45]}
        surf = sweep_surface(prob_cor, grid)
        rates = [c.point.rate for c in surf.points]
        for lo, hi in zip(rates, rates[1:]):
            assert hi <= lo + 1e-6

    def test_failures_flagged_not_raised(self, prob_cor):
        surf = sweep_surface(prob_cor, {"d1": [0.05], "d2": [0.1], "ds": [0.1, 0.3]})
        by_ds = {c.query.ds: c for c in surf.points}
        assert by_ds[0.1].point is None
        assert "Infeasible" in by_ds[0.1].error
        assert by_ds[0.3].point is not None

    def test_parallel_matches_serial(self, prob_cor):
        grid = {"d1": [0.02, 0.05], "d2": [0.1], "ds": [0.3, 0.45]}
        serial = sweep_surface(prob_cor, grid)
        parallel = sweep_surface(prob_cor, grid, workers=2)
        for a, b in zip(serial.points, parallel.points):
            assert a.index == b.index
            assert a.point.rate == b.point.rate
            assert np.array_equal(a.point.channel.probs, b.point.channel.probs)


class TestClassicalForms:
    def test_uniform_binary_no_side_info(self):
        # R(D) = 1 - h(D) for the uniform bit under Hamming distortion
        prob = single_source_problem()
        for d in (0.05, 0.1, 0.2, 0.35):
            pt = solve_rd_point(prob, RDQuery(d, 0.0, 0.0))
            assert pt.rate == pytest.approx(1.0 - binary_entropy(d), abs=1e-4)

    def test_symmetric_pair_with_side_info(self, prob_cor):
        # conditional rate h(p0) - h(D) when the pair is doubly symmetric
        p0 = 0.25
        reduced = sources.observation_side_problem(prob_cor)
        for d in (0.05, 0.1, 0.2):
            pt = solve_rd_point(reduced, RDQuery(d, 0.0, 0.5))
            assert pt.rate == pytest.approx(
                binary_entropy(p0) - binary_entropy(d), abs=1e-4
            )


class TestSeparability:
    def test_reduced_problems_sum_to_joint(self, prob_ind):
        # the independent-parts source satisfies the observation-side chain,
        # so the joint solve splits exactly
        q = RDQuery(0.08, 0.15, 0.4)
        joint = solve_rd_point(prob_ind, q).rate
        obs = solve_rd_point(
            sources.observation_side_problem(prob_ind), RDQuery(q.d1, 0.0, q.ds)
        ).rate
        bg = solve_rd_point(
            sources.background_side_problem(prob_ind), RDQuery(0.0, q.d2, 0.0)
        ).rate
        assert joint == pytest.approx(obs + bg, abs=2e-3)


class TestProblemValidation:
    def test_alphabet_mismatch_detected(self):
        x1 = Alphabet.binary("x1")
        src = JointPMF(
            (x1, Alphabet.binary("x2"), Alphabet.binary("y")), np.full((2, 2, 2), 0.125)
        )
        h1, h2, hs = Alphabet.binary("x1_hat"), Alphabet.binary("x2_hat"), Alphabet.binary("s_hat")
        wrong = DistortionMatrix.hamming(Alphabet.binary("other"), h1)
        with pytest.raises(ProbabilityError, match="d1"):
            RDProblem(src, (h1, h2, hs), wrong, DistortionMatrix.hamming(src.axes[1], h2),
                      DistortionMatrix.hamming(x1, hs))

    def test_name_collision_rejected(self):
        x1 = Alphabet.binary("x1")
        src = JointPMF(
            (x1, Alphabet.binary("x2"), Alphabet.binary("y")), np.full((2, 2, 2), 0.125)
        )
        h1 = Alphabet.binary("x1")  # collides with the source axis
        h2, hs = Alphabet.binary("x2_hat"), Alphabet.binary("s_hat")
        with pytest.raises(ProbabilityError, match="distinct"):
            RDProblem(src, (h1, h2, hs), DistortionMatrix.hamming(x1, h1),
                      DistortionMatrix.hamming(src.axes[1], h2),
                      DistortionMatrix.hamming(x1, hs))

    def test_query_validation(self):
        with pytest.raises(ProbabilityError):
            RDQuery(-0.1, 0.1, 0.1)
        with pytest.raises(ProbabilityError):
            RDQuery(0.1, math.inf, 0.1)
