"""Tests for the discrete-time quantum walk."""

import math

import numpy as np
import pytest

from eqcoin.coins import HADAMARD, HYBRID, INVARIANT, random_balanced_coin, unbalanced_coin
from eqcoin.exceptions import EqcoinMatrixError, EqcoinParameterError
from eqcoin.models import EnsembleState, InitialCoinState, WalkState
from eqcoin.walk import (
    UP,
    asymmetry_witness,
    balanced_symmetry_condition,
    classical_reference,
    coin_basis_distribution,
    dense_evolution,
    run,
    run_state,
    step,
    symmetric_initial_state,
    theta_independence_check,
    unbalanced_symmetry_condition,
)

H = 1 / math.sqrt(2)
HYBRID_START = InitialCoinState(c_up=H, c_down=-1j * H)
UNBALANCED = unbalanced_coin(math.sqrt(3) / 2, 0.5)
UNBALANCED_START = InitialCoinState(c_up=H, c_down=1j * H)


def assert_distribution(distribution, expected, tol=1e-12):
    """Compare a distribution with expected {z: P_z} on its whole support."""
    assert set(distribution.probabilities) == set(expected)
    for z, p in expected.items():
        assert distribution.get(z) == pytest.approx(p, abs=tol), f"P({z})"


class TestHadamardWalk:
    """Test the Hadamard walk from |up>."""

    def test_zero_steps(self):
        """With no steps the particle stays at the origin."""
        assert_distribution(run(UP, HADAMARD, 0), {0: 1.0})

    def test_three_steps(self):
        """Three steps from |up> lean to the right."""
        assert_distribution(run(UP, HADAMARD, 3), {3: 1 / 8, 1: 5 / 8, -1: 1 / 8, -3: 1 / 8})

    def test_four_steps(self):
        """Four steps from |up>."""
        assert_distribution(
            run(UP, HADAMARD, 4), {4: 1 / 16, 2: 5 / 8, 0: 1 / 8, -2: 1 / 8, -4: 1 / 16}
        )

    def test_parity_support(self):
        """Only sites with z = T (mod 2) are listed."""
        distribution = run(UP, HADAMARD, 5)
        assert all(z % 2 == 1 for z in distribution.probabilities)

    def test_explicit_matrix(self):
        """A raw 2x2 array works as a coin."""
        m = np.array([[H, H], [H, -H]])
        assert run(UP, m, 6).max_difference(run(UP, HADAMARD, 6)) < 1e-12

    def test_every_balanced_coin_gives_the_same_walk(self):
        """100 random balanced coins reproduce the Hadamard walk from |up> for T <= 4."""
        rng = np.random.default_rng(2024)
        reference = {steps: run(UP, HADAMARD, steps) for steps in range(1, 5)}
        for _ in range(100):
            coin = random_balanced_coin(rng)
            for steps, expected in reference.items():
                assert run(UP, coin, steps).max_difference(expected) < 1e-12


class TestSymmetricWalks:
    """Test the hybrid and unbalanced symmetric walks."""

    def test_hybrid_matches_classical_up_to_three_steps(self):
        """The hybrid walk is binomial for T <= 3."""
        for steps in range(4):
            distribution = run(HYBRID_START, HYBRID, steps)
            assert distribution.max_difference(classical_reference(steps)) < 1e-12

    def test_hybrid_four_steps(self):
        """At T = 4 the hybrid walk departs from the binomial."""
        distribution = run(HYBRID_START, HYBRID, 4)
        assert_distribution(distribution, {4: 1 / 16, 2: 3 / 8, 0: 1 / 8, -2: 3 / 8, -4: 1 / 16})
        assert distribution.max_difference(classical_reference(4)) > 0.1

    def test_hybrid_symmetric_up_to_ten_steps(self):
        """P_z = P_{-z} at every T <= 10."""
        for steps in range(11):
            assert run(HYBRID_START, HYBRID, steps).symmetry_deviation() < 1e-12

    def test_unbalanced_hadamard_point_is_classical(self):
        """p = q = 1/sqrt(2) from (1, i)/sqrt(2) is binomial for T <= 3."""
        coin = unbalanced_coin(H, H)
        assert unbalanced_symmetry_condition(UNBALANCED_START, coin)
        for steps in range(4):
            distribution = run(UNBALANCED_START, coin, steps)
            assert distribution.max_difference(classical_reference(steps)) < 1e-12

    def test_unbalanced_two_steps(self):
        """Unbalanced coin, two steps."""
        assert_distribution(run(UNBALANCED_START, UNBALANCED, 2), {2: 3 / 8, 0: 1 / 4, -2: 3 / 8})

    def test_unbalanced_three_steps(self):
        """Unbalanced coin, three steps."""
        assert_distribution(
            run(UNBALANCED_START, UNBALANCED, 3),
            {3: 9 / 32, 1: 7 / 32, -1: 7 / 32, -3: 9 / 32},
        )

    def test_symmetry_conditions(self):
        """Both symmetry predicates accept their starting states."""
        assert balanced_symmetry_condition(HYBRID_START, HYBRID)
        assert unbalanced_symmetry_condition(UNBALANCED_START, UNBALANCED)
        assert not balanced_symmetry_condition(UP, HADAMARD)
        assert not unbalanced_symmetry_condition(UP, UNBALANCED)

    @pytest.mark.parametrize("seed", range(5))
    def test_symmetric_initial_state_gives_symmetric_walk(self, seed):
        """The constructed initial state yields P_z = P_{-z}."""
        coin = random_balanced_coin(np.random.default_rng(seed))
        start = symmetric_initial_state(coin)
        assert balanced_symmetry_condition(start, coin)
        assert run(start, coin, 20).symmetry_deviation() < 1e-12

    def test_symmetric_initial_state_unbalanced(self):
        """The unbalanced construction satisfies its condition too."""
        coin = unbalanced_coin(0.6, 0.8j)
        start = symmetric_initial_state(coin)
        assert unbalanced_symmetry_condition(start, coin)
        assert run(start, coin, 15).symmetry_deviation() < 1e-12


class TestWalkProperties:
    """Test invariants of the evolution."""

    def test_probability_conserved_on_long_walk(self):
        """Total probability stays one over many steps."""
        state = run_state(UP, HADAMARD, 1000)
        assert state.total_probability() == pytest.approx(1.0, abs=1e-9)

    @pytest.mark.parametrize("seed", range(5))
    def test_matches_dense_operator(self, seed):
        """The sparse evolution agrees with the explicit S (U x I) operator."""
        rng = np.random.default_rng(seed)
        coin = random_balanced_coin(rng)
        start = InitialCoinState(c_up=0.6, c_down=0.8j)
        sparse = run(start, coin, 12)
        dense = dense_evolution(start, coin, 12)
        assert sparse.max_difference(dense) < 1e-12

    def test_step_matches_run_state(self):
        """Repeated single steps agree with run_state."""
        state = WalkState.initial(HYBRID_START)
        for _ in range(7):
            state = step(state, HYBRID)
        expected = run_state(HYBRID_START, HYBRID, 7)
        np.testing.assert_allclose(state.up, expected.up, atol=1e-14)
        np.testing.assert_allclose(state.down, expected.down, atol=1e-14)

    def test_theta_independence(self):
        """The distribution does not depend on theta."""
        thetas = np.linspace(0, 2 * math.pi, 9)
        assert theta_independence_check(H, 1j * H, thetas, 10)
        assert theta_independence_check((1 + 1j) / 2, H, thetas, 7, initial=HYBRID_START)

    def test_rejects_negative_steps(self):
        """Negative step counts are rejected."""
        with pytest.raises(EqcoinParameterError) as exc_info:
            run(UP, HADAMARD, -1)
        assert exc_info.value.parameter == "steps"

    def test_rejects_non_unitary_coin(self):
        """A non-unitary matrix cannot drive a walk."""
        with pytest.raises(EqcoinMatrixError, match="unitary"):
            run(UP, [[1, 1], [0, 1]], 3)


class TestAsymmetryWitness:
    """Test P_1 - P_{-1} after three steps."""

    def test_hadamard(self):
        """The Hadamard walk has P_1 - P_{-1} = 1/2."""
        report = asymmetry_witness(HADAMARD)
        assert report.difference == pytest.approx(0.5)
        assert report.matches

    @pytest.mark.parametrize("seed", range(5))
    def test_every_balanced_coin(self, seed):
        """No balanced coin makes the walk from |up> symmetric."""
        report = asymmetry_witness(random_balanced_coin(np.random.default_rng(seed)))
        assert report.predicted == pytest.approx(0.5)
        assert report.matches


def test_classical_reference():
    """Binomial distribution of the classical walk."""
    assert_distribution(
        classical_reference(4), {4: 1 / 16, 2: 1 / 4, 0: 3 / 8, -2: 1 / 4, -4: 1 / 16}
    )


def test_coin_basis_distribution_marginal():
    """Measuring the coin in an ensemble basis keeps the position marginal."""
    state = run_state(UP, INVARIANT, 6)
    basis = EnsembleState.from_amplitudes(1j * H, H)
    joint = coin_basis_distribution(state, basis)
    assert joint.marginal().max_difference(state.distribution()) < 1e-12
    assert set(joint.psi) == set(state.distribution().probabilities)


def test_coin_basis_distribution_single_step():
    """After no steps |up> splits |a|^2 : |b|^2 between psi and psi_bar."""
    state = run_state(UP, HADAMARD, 0)
    joint = coin_basis_distribution(state, EnsembleState.from_amplitudes(0.6, 0.8))
    assert joint.psi[0] == pytest.approx(0.36)
    assert joint.psi_bar[0] == pytest.approx(0.64)
