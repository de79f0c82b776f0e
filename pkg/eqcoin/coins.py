"""Coin operators: the balanced (alpha, gamma, theta) family and the unbalanced (p, q) coin.

Available coins
---------------
- balanced_coin(alpha, gamma, theta): validated member of the balanced family
- unbalanced_coin(p, q): validated [[p, q*], [q, -p*]] coin
- HADAMARD, INVARIANT, HYBRID: named balanced coins (see NAMED_COINS)
- random_balanced_coin(rng): uniformly random phases for alpha, gamma and theta
"""

import logging
import math
from typing import Union

import numpy as np
from numpy.typing import ArrayLike, NDArray

from eqcoin.exceptions import EqcoinParameterError
from eqcoin.linalg import IDENTITY_2, PAULI_X, PAULI_Z, TOLERANCE
from eqcoin.models import BalancedCoin, SpecialProperties, UnbalancedCoin

__all__ = [
    "Coin",
    "balanced_coin",
    "unbalanced_coin",
    "random_balanced_coin",
    "coin_matrix",
    "named_coin",
    "is_invariant_family",
    "special_property_checks",
    "HADAMARD",
    "INVARIANT",
    "HYBRID",
    "NAMED_COINS",
]

logger = logging.getLogger("eqcoin")

Coin = Union[BalancedCoin, UnbalancedCoin]

INV_SQRT2 = 1.0 / math.sqrt(2.0)


def balanced_coin(alpha: complex, gamma: complex, theta: float) -> BalancedCoin:
    """Construct U(alpha, gamma, theta) = [[alpha, gamma], [e^{i theta} alpha, -e^{i theta} gamma]].

    Args:
        alpha: Upper-left amplitude, modulus 1/sqrt(2).
        gamma: Upper-right amplitude, modulus 1/sqrt(2).
        theta: Relative phase in radians; normalized into [0, 2*pi).

    Returns:
        Validated BalancedCoin.

    Raises:
        EqcoinParameterError: If |alpha|^2 or |gamma|^2 differs from 1/2 by more
            than 1e-12; the error's ``parameter`` names the offending amplitude.
    """
    return BalancedCoin(alpha=complex(alpha), gamma=complex(gamma), theta=float(theta))


def unbalanced_coin(p: complex, q: complex) -> UnbalancedCoin:
    """Construct [[p, q*], [q, -p*]] with |p|^2 + |q|^2 = 1.

    Raises:
        EqcoinParameterError: If the normalization is violated.
    """
    return UnbalancedCoin(p=complex(p), q=complex(q))


def random_balanced_coin(rng: np.random.Generator) -> BalancedCoin:
    """Draw a balanced coin with independent uniform phases for alpha, gamma and theta."""
    phi_alpha, phi_gamma, theta = rng.uniform(0.0, 2.0 * math.pi, size=3)
    return balanced_coin(
        INV_SQRT2 * complex(np.exp(1j * phi_alpha)),
        INV_SQRT2 * complex(np.exp(1j * phi_gamma)),
        float(theta),
    )


def coin_matrix(coin: Union[Coin, ArrayLike]) -> NDArray[np.complex128]:
    """Return the 2x2 matrix of a coin model, or pass an explicit matrix through."""
    if isinstance(coin, (BalancedCoin, UnbalancedCoin)):
        return coin.matrix()
    return np.asarray(coin, dtype=np.complex128)


HADAMARD = balanced_coin(INV_SQRT2, INV_SQRT2, 0.0)
INVARIANT = balanced_coin(INV_SQRT2, 1j * INV_SQRT2, math.pi / 2)
HYBRID = balanced_coin((1 + 1j) / 2, (1 + 1j) / 2, 3 * math.pi / 2)

NAMED_COINS: dict[str, BalancedCoin] = {
    "hadamard": HADAMARD,
    "invariant": INVARIANT,
    "hybrid": HYBRID,
}


def named_coin(name: str) -> BalancedCoin:
    """Look up a named coin (case-insensitive).

    Raises:
        EqcoinParameterError: If the name is not registered.
    """
    try:
        return NAMED_COINS[name.lower()]
    except KeyError as e:
        known = ", ".join(sorted(NAMED_COINS))
        raise EqcoinParameterError(
            f"unknown coin {name!r}; expected one of {known}", "coin"
        ) from e


def is_invariant_family(coin: BalancedCoin) -> bool:
    """True iff the coin is unchanged by relabeling |0> <-> |1>, i.e. sigma_x U sigma_x = U.

    Entrywise this is gamma = e^{i theta} alpha together with
    alpha = -e^{i theta} gamma, which forces gamma = +-i alpha with
    theta = pi/2 or 3*pi/2 respectively.
    """
    e = coin.phase
    return (
        abs(coin.gamma - e * coin.alpha) < TOLERANCE
        and abs(coin.alpha + e * coin.gamma) < TOLERANCE
    )


def _close(m1: NDArray[np.complex128], m2: NDArray[np.complex128]) -> bool:
    return bool(np.all(np.abs(m1 - m2) < TOLERANCE))


def special_property_checks(coin: Union[Coin, ArrayLike]) -> SpecialProperties:
    """Compare M and M^2 against the Hadamard and NOT-root identities.

    Returns:
        SpecialProperties recording whether M^2 = I, M^2 = i sigma_x,
        M = (sigma_x + sigma_z)/sqrt(2) and M = (I + i sigma_x)/sqrt(2).
    """
    m = coin_matrix(coin)
    square = m @ m
    report = SpecialProperties(
        squares_to_identity=_close(square, IDENTITY_2),
        squares_to_i_sigma_x=_close(square, 1j * PAULI_X),
        equals_hadamard_form=_close(m, (PAULI_X + PAULI_Z) * INV_SQRT2),
        equals_identity_plus_i_sigma_x=_close(m, (IDENTITY_2 + 1j * PAULI_X) * INV_SQRT2),
    )
    logger.debug(f"Special properties: {report}")
    return report
