"""Semantic-distortion transform tests."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from semrd.errors import InfeasibleDistortionError, ProbabilityError
from semrd.prob import Alphabet, DistortionMatrix, JointPMF, make_dsbs
from semrd.semantic import check_distortion_equivalence, ds0, modified_distortion


def hamming_ss():
    return DistortionMatrix.hamming(Alphabet.binary("s"), Alphabet.binary("s_hat"))


class TestModifiedDistortion:
    @pytest.mark.parametrize("p", [0.05, 0.1, 0.25, 0.4])
    def test_dsbs_gives_p_table(self, p):
        # posterior-averaged Hamming table for the symmetric pair: p on the
        # diagonal, 1-p off it
        d = modified_distortion(make_dsbs(p, "s", "x1"), hamming_ss())
        assert np.allclose(d.values, [[p, 1 - p], [1 - p, p]], atol=1e-15)

    def test_deterministic_latent_reduces_to_hamming(self):
        d = modified_distortion(make_dsbs(0.0, "s", "x1"), hamming_ss())
        assert np.allclose(d.values, [[0.0, 1.0], [1.0, 0.0]], atol=1e-15)

    def test_independent_latent_gives_constant(self):
        d = modified_distortion(make_dsbs(0.5, "s", "x1"), hamming_ss())
        assert np.allclose(d.values, 0.5, atol=1e-15)

    def test_axis_order_flexible(self):
        j = make_dsbs(0.2, "x1", "s")  # latent second
        d = modified_distortion(j, hamming_ss())
        assert d.source_axis.name == "x1"
        assert np.allclose(d.values, [[0.2, 0.8], [0.8, 0.2]], atol=1e-15)

    def test_zero_mass_observation_rejected(self):
        j = JointPMF(
            (Alphabet.binary("s"), Alphabet.binary("x1")),
            np.array([[0.6, 0.0], [0.4, 0.0]]),
        )
        with pytest.raises(ProbabilityError, match="zero probability"):
            modified_distortion(j, hamming_ss())

    def test_latent_axis_must_match(self):
        j = make_dsbs(0.2, "w", "x1")
        with pytest.raises(ProbabilityError, match="latent"):
            modified_distortion(j, hamming_ss())

    def test_relabeling_latent_invariant(self):
        # permuting the latent symbols together with the table rows changes nothing
        p = 0.15
        j = make_dsbs(p, "s", "x1")
        flipped = JointPMF(j.axes, j.probs[::-1, :])
        ds = hamming_ss()
        ds_flipped = DistortionMatrix(ds.source_axis, ds.repro_axis, ds.values[::-1, :])
        d1 = modified_distortion(j, ds)
        d2 = modified_distortion(flipped, ds_flipped)
        assert np.allclose(d1.values, d2.values, atol=1e-15)

    @given(st.integers(0, 2**32 - 1))
    @settings(max_examples=40, deadline=None)
    def test_entries_within_table_range(self, seed):
        rng = np.random.default_rng(seed)
        n_x1 = int(rng.integers(2, 6))
        joint = rng.dirichlet(np.ones(2 * n_x1)).reshape(2, n_x1)
        while joint.sum(axis=0).min() <= 1e-9:
            joint = rng.dirichlet(np.ones(2 * n_x1)).reshape(2, n_x1)
        j = JointPMF((Alphabet.binary("s"), Alphabet("x1", n_x1)), joint / joint.sum())
        ds = DistortionMatrix(
            Alphabet.binary("s"), Alphabet("s_hat", 3), rng.uniform(0.0, 2.0, (2, 3))
        )
        d = modified_distortion(j, ds)
        assert d.values.min() >= ds.values.min() - 1e-12
        assert d.values.max() <= ds.values.max() + 1e-12


class TestExpectedModifiedDistortionIdentity:
    @given(st.integers(0, 2**32 - 1))
    @settings(max_examples=40, deadline=None)
    def test_affine_in_error_probability(self, seed):
        # for the symmetric binary pair: E d'(X1, Sh) = P(X1 != Sh)(1-2p) + p
        rng = np.random.default_rng(seed)
        p = float(rng.uniform(0.0, 0.49))
        d = modified_distortion(make_dsbs(p, "s", "x1"), hamming_ss())
        channel = rng.uniform(0.05, 0.95, size=(2, 2))
        channel /= channel.sum(axis=1, keepdims=True)
        pair = 0.5 * channel  # uniform observation
        j = JointPMF((Alphabet.binary("x1"), Alphabet.binary("s_hat")), pair)
        e_mod = j.expected_distortion(d, "x1", "s_hat")
        p_err = pair[0, 1] + pair[1, 0]
        assert e_mod == pytest.approx(p_err * (1 - 2 * p) + p, abs=1e-12)


class TestDs0:
    def test_floor(self):
        assert ds0(0.25, 0.25) == 0.0

    @pytest.mark.parametrize("p", [0.0, 0.1, 0.3, 0.49])
    def test_half_is_fixed_point(self, p):
        assert ds0(0.5, p) == pytest.approx(0.5, abs=1e-12)

    def test_arithmetic(self):
        assert ds0(0.3, 0.25) == pytest.approx(0.1, abs=1e-15)

    def test_below_floor_infeasible(self):
        with pytest.raises(InfeasibleDistortionError, match="floor"):
            ds0(0.2, 0.25)

    def test_half_p_rejected(self):
        with pytest.raises(ProbabilityError):
            ds0(0.6, 0.5)

    def test_p_out_of_range(self):
        with pytest.raises(ProbabilityError):
            ds0(0.3, 0.6)


def _chain_joint(p, channel, seed=0):
    """p(s|x1) latent chain over (s, x1, w, s_hat) with p(x1, w, s_hat) drawn
    from `channel` (x1 uniform)."""
    rng = np.random.default_rng(seed)
    rest = rng.dirichlet(np.ones(2 * 2 * 2)).reshape(2, 2, 2) if channel is None else channel
    post = np.array([[1 - p, p], [p, 1 - p]])  # p(s|x1)
    probs = np.einsum("xws,lx->lxws", rest, post.T)
    return JointPMF(
        (
            Alphabet.binary("s"),
            Alphabet.binary("x1"),
            Alphabet.binary("w"),
            Alphabet.binary("s_hat"),
        ),
        probs / probs.sum(),
    )


class TestDistortionEquivalence:
    @pytest.mark.parametrize("seed", range(5))
    def test_product_chain_residual_tiny(self, seed):
        j = _chain_joint(0.2, None, seed)
        assert check_distortion_equivalence(j, hamming_ss()) < 1e-12

    def test_copy_reconstruction(self):
        # Sh = X1 deterministically: both expectations equal p
        p = 0.15
        rest = np.zeros((2, 2, 2))
        rest[0, :, 0] = 0.25
        rest[1, :, 1] = 0.25
        j = _chain_joint(p, rest)
        ds = hamming_ss()
        assert j.expected_distortion(ds, "s", "s_hat") == pytest.approx(p, abs=1e-12)
        assert check_distortion_equivalence(j, ds) < 1e-12

    def test_degenerate_latent(self):
        j = _chain_joint(0.0, None, seed=3)
        assert check_distortion_equivalence(j, hamming_ss()) < 1e-12

    def test_markov_violation_detected(self):
        # couple s_hat to s directly: S - X1 - Sh fails
        probs = np.zeros((2, 2, 2, 2))
        for s in range(2):
            for x1 in range(2):
                for w in range(2):
                    probs[s, x1, w, s] = 0.125  # s_hat = s exactly
        j = JointPMF(
            (
                Alphabet.binary("s"),
                Alphabet.binary("x1"),
                Alphabet.binary("w"),
                Alphabet.binary("s_hat"),
            ),
            probs,
        )
        with pytest.raises(ProbabilityError, match="Markov"):
            check_distortion_equivalence(j, hamming_ss())
