"""Discrete-time quantum walk on the integer line.

One step applies the coin to the coin register at every site and then the
conditional shift S: |up>|z> -> |up>|z+1>, |down>|z> -> |down>|z-1>.
Amplitudes live in two arrays indexed by z + T over the window [-T, T].
"""

import logging
import math
from collections.abc import Iterable
from typing import Optional, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray

from eqcoin.coins import Coin, balanced_coin, coin_matrix
from eqcoin.exceptions import EqcoinMatrixError, EqcoinParameterError
from eqcoin.linalg import TOLERANCE, is_unitary, kron
from eqcoin.models import (
    AsymmetryReport,
    BalancedCoin,
    CoinBasisDistribution,
    Distribution,
    EnsembleState,
    InitialCoinState,
    UnbalancedCoin,
    WalkState,
)

__all__ = [
    "UP",
    "step",
    "run",
    "run_state",
    "dense_evolution",
    "theta_independence_check",
    "balanced_symmetry_condition",
    "unbalanced_symmetry_condition",
    "symmetric_initial_state",
    "asymmetry_witness",
    "classical_reference",
    "coin_basis_distribution",
]

logger = logging.getLogger("eqcoin")

UP = InitialCoinState(c_up=1.0, c_down=0.0)


def _unitary_coin(coin: Union[Coin, ArrayLike]) -> NDArray[np.complex128]:
    m = coin_matrix(coin)
    if m.shape != (2, 2) or not is_unitary(m):
        raise EqcoinMatrixError("walk coin must be a 2x2 unitary matrix", "unitary")
    return m


def _check_steps(steps: int) -> None:
    if steps < 0:
        raise EqcoinParameterError(f"steps must be non-negative, got {steps}", "steps")


def step(state: WalkState, coin: Union[Coin, ArrayLike]) -> WalkState:
    """Apply one coin toss and conditional shift; the window grows by one site per side.

    Args:
        state: Walk state after T steps.
        coin: Coin model or explicit 2x2 unitary.

    Returns:
        Walk state after T + 1 steps.

    Raises:
        EqcoinMatrixError: If the coin is not a 2x2 unitary.
    """
    m = _unitary_coin(coin)
    tossed_up = m[0, 0] * state.up + m[0, 1] * state.down
    tossed_down = m[1, 0] * state.up + m[1, 1] * state.down

    width = state.up.shape[0] + 2
    up = np.zeros(width, dtype=np.complex128)
    down = np.zeros(width, dtype=np.complex128)
    # Index i holds z = i - T; in the new window z + 1 sits at i + 2 and z - 1 at i.
    up[2:] = tossed_up
    down[:-2] = tossed_down
    return WalkState(steps=state.steps + 1, up=up, down=down)


def _evolve(
    initial: InitialCoinState, m: NDArray[np.complex128], steps: int
) -> tuple[NDArray[np.complex128], NDArray[np.complex128]]:
    """Evolve in a fixed [-steps, steps] window without rebuilding models per step.

    After k steps only sites z = -k, -k + 2, ..., k are occupied, so each
    step touches that strided slice alone.
    """
    width = 2 * steps + 1
    up = np.zeros(width, dtype=np.complex128)
    down = np.zeros(width, dtype=np.complex128)
    up[steps] = initial.c_up
    down[steps] = initial.c_down
    u00, u01, u10, u11 = m[0, 0], m[0, 1], m[1, 0], m[1, 1]
    for k in range(steps):
        lo, hi = steps - k, steps + k + 1
        occupied_up = up[lo:hi:2]
        occupied_down = down[lo:hi:2]
        tossed_up = u00 * occupied_up + u01 * occupied_down
        tossed_down = u10 * occupied_up + u11 * occupied_down
        up[lo:hi:2] = 0.0
        down[lo:hi:2] = 0.0
        up[lo + 1 : hi + 1 : 2] = tossed_up
        down[lo - 1 : hi - 1 : 2] = tossed_down
    return up, down


def run_state(
    initial: InitialCoinState, coin: Union[Coin, ArrayLike], steps: int
) -> WalkState:
    """Walk state after ``steps`` steps from initial coin state at the origin.

    Raises:
        EqcoinParameterError: If steps is negative.
        EqcoinMatrixError: If the coin is not a 2x2 unitary.
    """
    _check_steps(steps)
    m = _unitary_coin(coin)
    up, down = _evolve(initial, m, steps)
    state = WalkState(steps=steps, up=up, down=down)
    logger.debug(f"Walk of {steps} steps, total probability {state.total_probability():.15f}")
    return state


def run(initial: InitialCoinState, coin: Union[Coin, ArrayLike], steps: int) -> Distribution:
    """Position distribution after ``steps`` steps.

    Example:
        distribution = run(UP, HADAMARD, 3)
        print(distribution.get(1))  # 0.625
    """
    return run_state(initial, coin, steps).distribution()


def dense_evolution(
    initial: InitialCoinState, coin: Union[Coin, ArrayLike], steps: int
) -> Distribution:
    """Reference evolution with the explicit 2(2T+1)-dimensional operator S (U x I).

    Basis ordering is coin (x) position, index c * (2T + 1) + (z + T). The
    shift wraps around the window edge, which is never reached within T steps.
    """
    _check_steps(steps)
    m = _unitary_coin(coin)
    width = 2 * steps + 1
    shift = np.zeros((2 * width, 2 * width), dtype=np.complex128)
    for i in range(width):
        shift[(i + 1) % width, i] = 1.0
        shift[width + (i - 1) % width, width + i] = 1.0
    operator = shift @ kron(m, np.eye(width))

    vector = np.zeros(2 * width, dtype=np.complex128)
    vector[steps] = initial.c_up
    vector[width + steps] = initial.c_down
    for _ in range(steps):
        vector = operator @ vector
    state = WalkState(steps=steps, up=vector[:width], down=vector[width:])
    return state.distribution()


def theta_independence_check(
    alpha: complex,
    gamma: complex,
    thetas: Iterable[float],
    steps: int,
    initial: Optional[InitialCoinState] = None,
) -> bool:
    """True iff the walks of U(alpha, gamma, theta) agree for every theta within 1e-12.

    Args:
        alpha: Coin amplitude shared by all walks.
        gamma: Coin amplitude shared by all walks.
        thetas: Relative phases to compare.
        steps: Walk length.
        initial: Initial coin state; defaults to |up>.
    """
    start = initial if initial is not None else UP
    distributions = [run(start, balanced_coin(alpha, gamma, theta), steps) for theta in thetas]
    if not distributions:
        return True
    worst = max((distributions[0].max_difference(d) for d in distributions[1:]), default=0.0)
    logger.debug(f"theta independence: max deviation {worst:.3e}")
    return worst < TOLERANCE


def balanced_symmetry_condition(initial: InitialCoinState, coin: BalancedCoin) -> bool:
    """Check |c_up|^2 = 1/2 and that c_up c_down* alpha gamma* is purely imaginary.

    When both hold the walk distribution is symmetric, P_z = P_{-z}.
    """
    cross = initial.c_up * initial.c_down.conjugate() * coin.alpha * coin.gamma.conjugate()
    return abs(cross.real) < TOLERANCE and abs(abs(initial.c_up) ** 2 - 0.5) < TOLERANCE


def unbalanced_symmetry_condition(initial: InitialCoinState, coin: UnbalancedCoin) -> bool:
    """Check r s* p q + r* s p* q* = 0 and |r| = |s| for initial state (r, s)."""
    r, s = initial.c_up, initial.c_down
    cross = r * s.conjugate() * coin.p * coin.q
    equal_weights = abs(abs(r) ** 2 - abs(s) ** 2) < TOLERANCE
    return abs(cross + cross.conjugate()) < TOLERANCE and equal_weights


def symmetric_initial_state(coin: Coin) -> InitialCoinState:
    """Equal-weight initial coin state satisfying the coin's symmetry condition.

    The relative phase is arg(alpha gamma*) - pi/2 for balanced coins and
    arg(p q) - pi/2 for unbalanced coins.
    """
    if isinstance(coin, BalancedCoin):
        reference = coin.alpha * coin.gamma.conjugate()
    else:
        reference = coin.p * coin.q
    sigma = math.atan2(reference.imag, reference.real) - math.pi / 2
    weight = 1.0 / math.sqrt(2.0)
    return InitialCoinState(c_up=weight, c_down=weight * complex(np.exp(1j * sigma)))


def asymmetry_witness(coin: BalancedCoin) -> AsymmetryReport:
    """P_1 - P_{-1} after three steps from |up>, against its closed form.

    The closed form is |alpha|^2 [|alpha|^4 + 4|alpha|^2|gamma|^2 - |gamma|^4],
    which is 1/2 for every balanced coin, so no balanced coin makes the
    three-step walk from |up> symmetric.
    """
    distribution = run(UP, coin, 3)
    p_plus, p_minus = distribution.get(1), distribution.get(-1)
    aa = abs(coin.alpha) ** 2
    gg = abs(coin.gamma) ** 2
    predicted = aa * (aa**2 + 4 * aa * gg - gg**2)
    difference = p_plus - p_minus
    return AsymmetryReport(
        p_plus_one=p_plus,
        p_minus_one=p_minus,
        difference=difference,
        predicted=predicted,
        matches=abs(difference - predicted) < TOLERANCE,
    )


def classical_reference(steps: int) -> Distribution:
    """Symmetric classical random walk: P_z = C(T, (T + z)/2) / 2^T."""
    _check_steps(steps)
    return Distribution(
        steps=steps,
        probabilities={
            z: math.comb(steps, (steps + z) // 2) / 2**steps
            for z in range(-steps, steps + 1, 2)
        },
    )


def coin_basis_distribution(state: WalkState, basis: EnsembleState) -> CoinBasisDistribution:
    """Measure position and the coin in the {|psi>, |psi_bar>} basis of an ensemble state.

    Returns:
        Joint probabilities P(z, psi) = |a* up_z + b* down_z|^2 and
        P(z, psi_bar) = |b up_z - a down_z|^2 on the parity support.
    """
    a, b = basis.a, basis.b
    psi_amp = a.conjugate() * state.up + b.conjugate() * state.down
    psi_bar_amp = b * state.up - a * state.down
    psi_probs = np.abs(psi_amp) ** 2
    psi_bar_probs = np.abs(psi_bar_amp) ** 2
    sites = range(-state.steps, state.steps + 1, 2)
    return CoinBasisDistribution(
        steps=state.steps,
        basis=basis,
        psi={z: float(psi_probs[z + state.steps]) for z in sites},
        psi_bar={z: float(psi_bar_probs[z + state.steps]) for z in sites},
    )
