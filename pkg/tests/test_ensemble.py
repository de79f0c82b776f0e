"""Tests for ensemble membership, sampling and the transformation laws."""

import math

import numpy as np
import pytest

from eqcoin.coins import (
    HADAMARD,
    HYBRID,
    INVARIANT,
    balanced_coin,
    is_invariant_family,
    random_balanced_coin,
)
from eqcoin.ensemble import (
    apply_and_verify,
    closed_form_inner_products,
    constraint_residuals,
    sample_ensemble,
    satisfies_constraint,
    verify_inner_products,
)
from eqcoin.exceptions import EqcoinParameterError, EqcoinPreconditionError
from eqcoin.models import EnsembleState

H = 1 / math.sqrt(2)

HADAMARD_MEMBER = EnsembleState.from_amplitudes(H, H)
INVARIANT_MEMBER = EnsembleState.from_amplitudes(1j * H, H)
HYBRID_MEMBER = EnsembleState.from_amplitudes((1 + 1j) / 2, (1 - 1j) / 2)
SPIN_UP = EnsembleState.from_amplitudes(1.0, 0.0)


def _grid(values):
    x, y, u, v = np.meshgrid(values, values, values, values, indexing="ij")
    return x.ravel(), y.ravel(), u.ravel(), v.ravel()


class TestSatisfiesConstraint:
    """Test the membership decision."""

    @pytest.mark.parametrize(
        "coin,state",
        [(HADAMARD, HADAMARD_MEMBER), (INVARIANT, INVARIANT_MEMBER), (HYBRID, HYBRID_MEMBER)],
    )
    def test_known_members(self, coin, state):
        """Each named coin accepts its textbook member."""
        check = satisfies_constraint(state, coin)
        assert check.satisfied
        assert check.max_residual < 1e-10

    def test_spin_up_rejected_by_hadamard(self):
        """|0> is not in the Hadamard ensemble; Re a != u."""
        check = satisfies_constraint(SPIN_UP, HADAMARD)
        assert not check.satisfied
        assert check.residual_real == pytest.approx(2.0)
        assert check.residual_b == pytest.approx(0.0)

    def test_hadamard_member_family(self):
        """Any a = x + iy, b = x with 2x^2 + y^2 = 1 is a Hadamard member."""
        state = EnsembleState.from_amplitudes(complex(0.6, math.sqrt(0.28)), 0.6)
        assert satisfies_constraint(state, HADAMARD).satisfied

    def test_hadamard_grid_classification(self):
        """On a grid the Hadamard ensemble is exactly v = 0 and u = x."""
        x, y, u, v = _grid(np.arange(-5, 6) / 5 * 0.7)
        residual_b, residual_real = constraint_residuals(HADAMARD, x + 1j * y, u + 1j * v)
        accepted = (residual_b < 1e-10) & (residual_real < 1e-10)
        np.testing.assert_array_equal(accepted, (v == 0) & (u == x))

    def test_invariant_grid_classification(self):
        """On a grid the invariant ensemble is exactly v = 0 and x = 0."""
        x, y, u, v = _grid(np.arange(-5, 6) / 5 * 0.7)
        residual_b, residual_real = constraint_residuals(INVARIANT, x + 1j * y, u + 1j * v)
        np.testing.assert_allclose(residual_real, np.abs(2 * x - 2 * v), atol=1e-12)
        accepted = (residual_b < 1e-10) & (residual_real < 1e-10)
        np.testing.assert_array_equal(accepted, (v == 0) & (x == 0))

    def test_scalar_residuals_are_floats(self):
        """Scalar inputs give plain floats."""
        residual_b, residual_real = constraint_residuals(HADAMARD, 1.0, 0.0)
        assert isinstance(residual_b, float)
        assert isinstance(residual_real, float)

    @pytest.mark.parametrize("sign,theta", [(1, math.pi / 2), (-1, 3 * math.pi / 2)])
    def test_invariant_family_shares_one_ensemble(self, sign, theta):
        """Every gamma = +-i alpha member accepts exactly the invariant coin's grid points."""
        x, y, u, v = _grid(np.arange(-5, 6) / 5 * 0.7)
        a, b = x + 1j * y, u + 1j * v
        expected = np.maximum(*constraint_residuals(INVARIANT, a, b)) < 1e-10
        for phase in np.linspace(0, 2 * math.pi, 7, endpoint=False):
            alpha = H * complex(np.exp(1j * phase))
            coin = balanced_coin(alpha, sign * 1j * alpha, theta)
            assert is_invariant_family(coin)
            accepted = np.maximum(*constraint_residuals(coin, a, b)) < 1e-10
            np.testing.assert_array_equal(accepted, expected)

    def test_common_phase_leaves_verdict_unchanged(self):
        """Multiplying alpha and gamma by one phase changes neither residual."""
        rng = np.random.default_rng(31)
        for _ in range(20):
            coin = random_balanced_coin(rng)
            shifted = balanced_coin(
                coin.alpha * np.exp(1j * 0.9), coin.gamma * np.exp(1j * 0.9), coin.theta
            )
            states = sample_ensemble(coin, seed=0, count=3) + [SPIN_UP, HADAMARD_MEMBER]
            for state in states:
                original = satisfies_constraint(state, coin)
                moved = satisfies_constraint(state, shifted)
                assert moved.satisfied == original.satisfied
                assert moved.max_residual == pytest.approx(original.max_residual, abs=1e-12)


class TestSampleEnsemble:
    """Test the seeded ensemble sampler."""

    @pytest.mark.parametrize("coin", [HADAMARD, INVARIANT, HYBRID])
    def test_samples_are_members(self, coin):
        """Every sample satisfies the constraint."""
        for state in sample_ensemble(coin, seed=1, count=50):
            assert satisfies_constraint(state, coin).satisfied

    def test_random_coins(self):
        """Sampling works for arbitrary balanced coins."""
        rng = np.random.default_rng(8)
        for _ in range(10):
            coin = random_balanced_coin(rng)
            for state in sample_ensemble(coin, seed=3, count=5):
                assert satisfies_constraint(state, coin).satisfied

    def test_reproducible(self):
        """The same seed gives the same states."""
        assert sample_ensemble(HYBRID, 42, 10) == sample_ensemble(HYBRID, 42, 10)

    def test_different_seeds_differ(self):
        """Different seeds give different states."""
        assert sample_ensemble(HADAMARD, 1, 3) != sample_ensemble(HADAMARD, 2, 3)

    def test_count(self):
        """Exactly count states are returned."""
        assert len(sample_ensemble(INVARIANT, 0, 7)) == 7

    def test_rejects_zero_count(self):
        """count < 1 is rejected."""
        with pytest.raises(EqcoinParameterError) as exc_info:
            sample_ensemble(HADAMARD, 0, 0)
        assert exc_info.value.parameter == "count"


class TestApplyAndVerify:
    """Test the superposition laws of the coin on psi and psi_bar."""

    @pytest.mark.parametrize("coin", [HADAMARD, INVARIANT, HYBRID])
    def test_holds_on_samples(self, coin):
        """The laws hold on every sampled member."""
        for state in sample_ensemble(coin, seed=9, count=20):
            report = apply_and_verify(coin, state)
            assert report.holds
            assert report.max_deviation < 1e-10

    def test_fails_off_ensemble(self):
        """At |0> the Hadamard psi law is off by sqrt(2)."""
        report = apply_and_verify(HADAMARD, SPIN_UP)
        assert not report.holds
        assert report.psi_deviation == pytest.approx(math.sqrt(2))


class TestInnerProducts:
    """Test that the coin preserves inner products within the ensemble."""

    @pytest.mark.parametrize("coin", [HADAMARD, INVARIANT, HYBRID])
    def test_relations_hold(self, coin):
        """All inner-product relations hold for pairs of samples."""
        states = sample_ensemble(coin, seed=4, count=6)
        for first, second in zip(states, states[1:]):
            assert verify_inner_products(coin, first, second)

    def test_closed_forms_match_direct_overlaps(self):
        """Closed-form overlaps agree with numpy.vdot."""
        rng = np.random.default_rng(12)
        coin = random_balanced_coin(rng)
        first, second = sample_ensemble(coin, seed=6, count=2)
        overlap, overlap_bar = closed_form_inner_products(coin, first, second)
        assert overlap == pytest.approx(complex(np.vdot(first.psi, second.psi)), abs=1e-10)
        assert overlap_bar == pytest.approx(
            complex(np.vdot(first.psi, second.psi_bar)), abs=1e-10
        )

    def test_requires_members(self):
        """Non-members are rejected."""
        with pytest.raises(EqcoinPreconditionError, match="state2"):
            verify_inner_products(HADAMARD, HADAMARD_MEMBER, SPIN_UP)
