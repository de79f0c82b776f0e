"""Membership, sampling and transformation laws of a balanced coin's state ensemble.

A qubit |psi> = a|0> + b|1> with complement |psi_bar> = b*|0> - a*|1> is a
member of the ensemble of U(alpha, gamma, theta) when

    b = e^{i theta} (alpha/gamma) b*   and   a + a* = e^{-i theta} b + e^{i theta} b*,

which is exactly the condition for U|psi> = alpha(|psi> + e^{i theta}|psi_bar>)
and U|psi_bar> = gamma(|psi> - e^{i theta}|psi_bar>).
"""

import logging
from typing import Any

import numpy as np

from eqcoin.exceptions import EqcoinParameterError, EqcoinPreconditionError
from eqcoin.models import BalancedCoin, ConstraintCheck, EnsembleState, TransformationReport

__all__ = [
    "CONSTRAINT_TOLERANCE",
    "MIN_SAMPLE_B",
    "constraint_residuals",
    "satisfies_constraint",
    "sample_ensemble",
    "target_images",
    "apply_and_verify",
    "closed_form_inner_products",
    "verify_inner_products",
]

logger = logging.getLogger("eqcoin")

CONSTRAINT_TOLERANCE = 1e-10
# Draws whose projected |b| falls below this are discarded and redrawn.
MIN_SAMPLE_B = 1e-3


def constraint_residuals(coin: BalancedCoin, a: Any, b: Any) -> tuple[Any, Any]:
    """Residuals of both constraint equations; broadcasts over numpy arrays.

    Returns:
        ``(|b - e^{i theta}(alpha/gamma) b*|, |(a + a*) - (e^{-i theta} b + e^{i theta} b*)|)``
    """
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    e = coin.phase
    ratio = coin.alpha / coin.gamma
    residual_b = np.abs(b - e * ratio * np.conj(b))
    residual_real = np.abs((a + np.conj(a)) - (np.conj(e) * b + e * np.conj(b)))
    if residual_b.ndim == 0:
        return float(residual_b), float(residual_real)
    return residual_b, residual_real


def satisfies_constraint(state: EnsembleState, coin: BalancedCoin) -> ConstraintCheck:
    """Decide ensemble membership; both residuals must be below CONSTRAINT_TOLERANCE."""
    residual_b, residual_real = constraint_residuals(coin, state.a, state.b)
    check = ConstraintCheck(
        satisfied=residual_b < CONSTRAINT_TOLERANCE and residual_real < CONSTRAINT_TOLERANCE,
        residual_b=residual_b,
        residual_real=residual_real,
    )
    logger.debug(
        f"Constraint residuals for a={state.a:.6g}, b={state.b:.6g}: "
        f"{residual_b:.3e}, {residual_real:.3e}"
    )
    return check


def sample_ensemble(coin: BalancedCoin, seed: int, count: int) -> list[EnsembleState]:
    """Draw ensemble members from a seeded generator.

    Each draw takes (u, v, y) uniformly from [-1, 1]^3, projects b = u + iv
    onto the line of phases allowed by the first constraint, sets
    a = (1/2)(e^{-i theta} + gamma/alpha) b + iy and rescales (a, b) to unit
    norm. Both constraints are real-homogeneous, so the rescaling keeps the
    state in the ensemble.

    Args:
        coin: Balanced coin whose ensemble is sampled.
        seed: Seed for ``numpy.random.default_rng``.
        count: Number of states to return.

    Returns:
        ``count`` states; the same (seed, count) always gives the same list.

    Raises:
        EqcoinParameterError: If count < 1.
    """
    if count < 1:
        raise EqcoinParameterError(f"count must be at least 1, got {count}", "count")

    rng = np.random.default_rng(seed)
    e = coin.phase
    # Unit phase with line^2 = e^{i theta} alpha/gamma; b must be a real multiple of it.
    line = complex(np.sqrt(e * coin.alpha / coin.gamma))
    mix = 0.5 * (e.conjugate() + coin.gamma / coin.alpha)

    samples: list[EnsembleState] = []
    redraws = 0
    while len(samples) < count:
        u, v, y = rng.uniform(-1.0, 1.0, size=3)
        radius = (complex(u, v) * line.conjugate()).real
        if abs(radius) < MIN_SAMPLE_B:
            redraws += 1
            continue
        b = radius * line
        a = complex((mix * b).real, y)
        norm = float(np.sqrt(abs(a) ** 2 + abs(b) ** 2))
        samples.append(EnsembleState.from_amplitudes(a / norm, b / norm))

    if redraws:
        logger.debug(f"sample_ensemble redrew {redraws} degenerate draws")
    return samples


def target_images(
    coin: BalancedCoin, state: EnsembleState
) -> tuple[np.ndarray, np.ndarray]:
    """Return alpha(psi + e^{i theta} psi_bar) and gamma(psi - e^{i theta} psi_bar)."""
    e = coin.phase
    psi, psi_bar = state.psi, state.psi_bar
    return coin.alpha * (psi + e * psi_bar), coin.gamma * (psi - e * psi_bar)


def apply_and_verify(coin: BalancedCoin, state: EnsembleState) -> TransformationReport:
    """Compare the coin's matrix action on psi and psi_bar with the target superpositions.

    Returns:
        TransformationReport with both deviation norms; ``holds`` is True when
        both are below CONSTRAINT_TOLERANCE.
    """
    u = coin.matrix()
    target_psi, target_psi_bar = target_images(coin, state)
    psi_deviation = float(np.linalg.norm(u @ state.psi - target_psi))
    psi_bar_deviation = float(np.linalg.norm(u @ state.psi_bar - target_psi_bar))
    logger.debug(f"Transformation deviations: {psi_deviation:.3e}, {psi_bar_deviation:.3e}")
    return TransformationReport(
        psi_deviation=psi_deviation,
        psi_bar_deviation=psi_bar_deviation,
        holds=max(psi_deviation, psi_bar_deviation) < CONSTRAINT_TOLERANCE,
    )


def _require_members(coin: BalancedCoin, *states: EnsembleState) -> None:
    for index, state in enumerate(states, start=1):
        check = satisfies_constraint(state, coin)
        if not check.satisfied:
            raise EqcoinPreconditionError(
                f"state{index} is not in the coin's ensemble "
                f"(residuals {check.residual_b:.3e}, {check.residual_real:.3e})"
            )


def closed_form_inner_products(
    coin: BalancedCoin, state1: EnsembleState, state2: EnsembleState
) -> tuple[complex, complex]:
    """<psi1|psi2> and <psi1|psi2_bar> for two ensemble members, written in b and y only.

    Inside the ensemble b* = e^{-i theta}(gamma/alpha) b and
    x = (1/2)(e^{-i theta} + gamma/alpha) b, which gives

        <psi1|psi2>     = (1/4)(6 + e^{i theta} gamma/alpha + e^{-i theta} gamma*/alpha*)
                          e^{-i theta} (gamma/alpha) b1 b2 + y1 y2
                          + (i/2)(e^{-i theta} + gamma/alpha)(b1 y2 - b2 y1)
        <psi1|psi2_bar> = i e^{-i theta} (gamma/alpha)(b1 y2 - b2 y1)

    Raises:
        EqcoinPreconditionError: If either state is not a member.
    """
    _require_members(coin, state1, state2)
    e = coin.phase
    g = coin.gamma / coin.alpha
    b1, b2 = state1.b, state2.b
    y1, y2 = state1.y, state2.y
    cross = b1 * y2 - b2 * y1
    overlap = (
        0.25 * (6 + e * g + (e * g).conjugate()) * e.conjugate() * g * b1 * b2
        + y1 * y2
        + 0.5j * (e.conjugate() + g) * cross
    )
    overlap_bar = 1j * e.conjugate() * g * cross
    return complex(overlap), complex(overlap_bar)


def verify_inner_products(
    coin: BalancedCoin, state1: EnsembleState, state2: EnsembleState
) -> bool:
    """Check that the coin preserves <psi1|psi2>, <psi1_bar|psi2_bar> and <psi1|psi2_bar>.

    The left-hand sides are expanded through the target superpositions, e.g.
    <U psi1|U psi2> = |alpha|^2 [<psi1|psi2> + e^{i theta}<psi1|psi2_bar>
    + e^{-i theta}<psi1_bar|psi2> + <psi1_bar|psi2_bar>]. The closed forms of
    ``closed_form_inner_products`` must agree with the direct overlaps too.

    Returns:
        True when every relation holds within CONSTRAINT_TOLERANCE.

    Raises:
        EqcoinPreconditionError: If either state is not a member.
    """
    _require_members(coin, state1, state2)
    e = coin.phase
    alpha, gamma = coin.alpha, coin.gamma
    psi1, psi1_bar = state1.psi, state1.psi_bar
    psi2, psi2_bar = state2.psi, state2.psi_bar

    pp = complex(np.vdot(psi1, psi2))
    bb = complex(np.vdot(psi1_bar, psi2_bar))
    pb = complex(np.vdot(psi1, psi2_bar))
    bp = complex(np.vdot(psi1_bar, psi2))

    image_pp = abs(alpha) ** 2 * (pp + e * pb + e.conjugate() * bp + bb)
    image_bb = abs(gamma) ** 2 * (pp - e * pb - e.conjugate() * bp + bb)
    image_pb = alpha.conjugate() * gamma * (pp - e * pb + e.conjugate() * bp - bb)
    closed_pp, closed_pb = closed_form_inner_products(coin, state1, state2)

    deviations = [
        abs(image_pp - pp),
        abs(image_bb - bb),
        abs(image_pb - pb),
        abs(closed_pp - pp),
        abs(closed_pb - pb),
    ]
    logger.debug(f"Inner product deviations: {[f'{d:.3e}' for d in deviations]}")
    return max(deviations) < CONSTRAINT_TOLERANCE
