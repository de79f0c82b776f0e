"""Pydantic models for coins, qubit states, walks and verification reports."""

import math
from typing import Annotated, Any, Literal, Optional

import numpy as np
from numpy.typing import NDArray
from pydantic import (
    BaseModel,
    BeforeValidator,
    ConfigDict,
    field_serializer,
    field_validator,
    model_validator,
)

from eqcoin.exceptions import EqcoinDimensionError, EqcoinParameterError
from eqcoin.linalg import DERIVED_TOLERANCE, TOLERANCE

__all__ = [
    # Coins
    "BalancedCoin",
    "UnbalancedCoin",
    # States
    "EnsembleState",
    "InitialCoinState",
    "WalkState",
    "Distribution",
    "CoinBasisDistribution",
    "ResourceState",
    # Reports
    "ConstraintCheck",
    "TransformationReport",
    "SpecialProperties",
    "AsymmetryReport",
    "SignallingReport",
    "ConstraintReport",
    "SweepReport",
    # CLI
    "RunConfig",
]

HALF = 0.5
TWO_PI = 2.0 * math.pi


def _to_complex(value: Any) -> Any:
    """Coerce real and numpy scalars to Python complex before validation."""
    if isinstance(value, (int, float, complex, np.number)) and not isinstance(value, bool):
        return complex(value)
    return value


ComplexScalar = Annotated[complex, BeforeValidator(_to_complex)]


def _matrix_payload(m: NDArray[np.complex128]) -> dict[str, list[list[float]]]:
    return {"re": m.real.tolist(), "im": m.imag.tolist()}


class BalancedCoin(BaseModel):
    """Equal-superposition coin U = [[alpha, gamma], [e^{i theta} alpha, -e^{i theta} gamma]].

    Both alpha and gamma have modulus 1/sqrt(2). The phase of the second
    column's lower entry is theta + pi and is not stored separately.
    """

    model_config = ConfigDict(frozen=True)

    alpha: ComplexScalar
    gamma: ComplexScalar
    theta: float  # radians, normalized into [0, 2*pi)

    @field_validator("theta")
    @classmethod
    def _normalize_theta(cls, value: float) -> float:
        theta = math.fmod(value, TWO_PI)
        if theta < 0.0:
            theta += TWO_PI
        if theta >= TWO_PI:
            theta = 0.0
        return theta

    @model_validator(mode="after")
    def _check_moduli(self) -> "BalancedCoin":
        for name in ("alpha", "gamma"):
            modulus_sq = abs(getattr(self, name)) ** 2
            if abs(modulus_sq - HALF) > TOLERANCE:
                raise EqcoinParameterError(
                    f"|{name}|^2 must equal 1/2, got {modulus_sq:.15g}", name
                )
        return self

    @property
    def phase(self) -> complex:
        """e^{i theta}."""
        return complex(np.exp(1j * self.theta))

    def matrix(self) -> NDArray[np.complex128]:
        """Return the 2x2 unitary matrix of the coin."""
        e = self.phase
        return np.array(
            [[self.alpha, self.gamma], [e * self.alpha, -e * self.gamma]], dtype=np.complex128
        )


class UnbalancedCoin(BaseModel):
    """General real-weighted coin [[p, q*], [q, -p*]] with |p|^2 + |q|^2 = 1."""

    model_config = ConfigDict(frozen=True)

    p: ComplexScalar
    q: ComplexScalar

    @model_validator(mode="after")
    def _check_normalization(self) -> "UnbalancedCoin":
        total = abs(self.p) ** 2 + abs(self.q) ** 2
        if abs(total - 1.0) > TOLERANCE:
            raise EqcoinParameterError(f"|p|^2 + |q|^2 must equal 1, got {total:.15g}", "p")
        return self

    def matrix(self) -> NDArray[np.complex128]:
        """Return the 2x2 unitary matrix of the coin."""
        return np.array(
            [[self.p, self.q.conjugate()], [self.q, -self.p.conjugate()]], dtype=np.complex128
        )


class EnsembleState(BaseModel):
    """Qubit |psi> = a|0> + b|1> with a = x + iy, b = u + iv.

    Serialized as ``{re_a, im_a, re_b, im_b}``. The orthogonal complement is
    fixed to |psi_bar> = b*|0> - a*|1>.
    """

    model_config = ConfigDict(frozen=True)

    re_a: float
    im_a: float
    re_b: float
    im_b: float

    @model_validator(mode="after")
    def _check_normalization(self) -> "EnsembleState":
        norm_sq = self.re_a**2 + self.im_a**2 + self.re_b**2 + self.im_b**2
        if abs(norm_sq - 1.0) > TOLERANCE:
            raise EqcoinParameterError(
                f"|a|^2 + |b|^2 must equal 1, got {norm_sq:.15g}", "state"
            )
        return self

    @classmethod
    def from_amplitudes(cls, a: complex, b: complex) -> "EnsembleState":
        """Build a state from its complex amplitudes."""
        a, b = complex(a), complex(b)
        return cls(re_a=a.real, im_a=a.imag, re_b=b.real, im_b=b.imag)

    @property
    def a(self) -> complex:
        return complex(self.re_a, self.im_a)

    @property
    def b(self) -> complex:
        return complex(self.re_b, self.im_b)

    @property
    def x(self) -> float:
        return self.re_a

    @property
    def y(self) -> float:
        return self.im_a

    @property
    def u(self) -> float:
        return self.re_b

    @property
    def v(self) -> float:
        return self.im_b

    @property
    def psi(self) -> NDArray[np.complex128]:
        return np.array([self.a, self.b], dtype=np.complex128)

    @property
    def psi_bar(self) -> NDArray[np.complex128]:
        return np.array([self.b.conjugate(), -self.a.conjugate()], dtype=np.complex128)


class InitialCoinState(BaseModel):
    """Coin register c_up|up> + c_down|down> at the start of a walk."""

    model_config = ConfigDict(frozen=True)

    c_up: ComplexScalar
    c_down: ComplexScalar

    @model_validator(mode="after")
    def _check_normalization(self) -> "InitialCoinState":
        norm_sq = abs(self.c_up) ** 2 + abs(self.c_down) ** 2
        if abs(norm_sq - 1.0) > TOLERANCE:
            raise EqcoinParameterError(
                f"|c_up|^2 + |c_down|^2 must equal 1, got {norm_sq:.15g}", "initial"
            )
        return self

    @property
    def vector(self) -> NDArray[np.complex128]:
        return np.array([self.c_up, self.c_down], dtype=np.complex128)


class WalkState(BaseModel):
    """Coin-position amplitudes after ``steps`` steps over the window [-steps, steps].

    ``up[z + steps]`` and ``down[z + steps]`` hold the amplitudes of
    |up>|z> and |down>|z>. Arrays are read-only once the state is built.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    steps: int
    up: np.ndarray
    down: np.ndarray

    @model_validator(mode="after")
    def _check_window(self) -> "WalkState":
        if self.steps < 0:
            raise EqcoinParameterError(f"steps must be non-negative, got {self.steps}", "steps")
        width = 2 * self.steps + 1
        for name in ("up", "down"):
            arr = getattr(self, name)
            if arr.shape != (width,):
                raise EqcoinDimensionError(
                    f"{name} amplitudes must have shape ({width},), got {arr.shape}"
                )
            arr.setflags(write=False)
        return self

    @classmethod
    def initial(cls, coin_state: InitialCoinState) -> "WalkState":
        """Particle at the origin with the given coin state."""
        return cls(
            steps=0,
            up=np.array([coin_state.c_up], dtype=np.complex128),
            down=np.array([coin_state.c_down], dtype=np.complex128),
        )

    @property
    def positions(self) -> NDArray[np.int64]:
        return np.arange(-self.steps, self.steps + 1)

    def probabilities(self) -> NDArray[np.float64]:
        """|up|^2 + |down|^2 per window position."""
        return np.abs(self.up) ** 2 + np.abs(self.down) ** 2

    def total_probability(self) -> float:
        return float(np.sum(self.probabilities()))

    def distribution(self) -> "Distribution":
        """Position distribution on the parity support z = steps (mod 2)."""
        probs = self.probabilities()
        return Distribution(
            steps=self.steps,
            probabilities={
                int(z): float(probs[z + self.steps])
                for z in range(-self.steps, self.steps + 1, 2)
            },
        )


class Distribution(BaseModel):
    """Position probabilities P_z after ``steps`` steps.

    Only sites with z = steps (mod 2) are listed; every other site has
    probability exactly zero.
    """

    model_config = ConfigDict(frozen=True)

    steps: int
    probabilities: dict[int, float]

    @model_validator(mode="after")
    def _check_probabilities(self) -> "Distribution":
        if any(p < 0.0 for p in self.probabilities.values()):
            raise EqcoinParameterError("probabilities must be non-negative", "probabilities")
        total = math.fsum(self.probabilities.values())
        if abs(total - 1.0) > DERIVED_TOLERANCE:
            raise EqcoinParameterError(
                f"probabilities must sum to 1, got {total:.15g}", "probabilities"
            )
        return self

    def get(self, z: int) -> float:
        """P_z, zero off the support."""
        return self.probabilities.get(z, 0.0)

    def total(self) -> float:
        return math.fsum(self.probabilities.values())

    def max_difference(self, other: "Distribution") -> float:
        """Largest |P_z - Q_z| over the union of both supports."""
        sites = set(self.probabilities) | set(other.probabilities)
        return max((abs(self.get(z) - other.get(z)) for z in sites), default=0.0)

    def symmetry_deviation(self) -> float:
        """max_z |P_z - P_{-z}|."""
        return max((abs(p - self.get(-z)) for z, p in self.probabilities.items()), default=0.0)

    def sorted_items(self) -> list[tuple[int, float]]:
        """(z, P_z) pairs with z ascending."""
        return sorted(self.probabilities.items())


class CoinBasisDistribution(BaseModel):
    """Joint probabilities of position z and coin outcome psi / psi_bar."""

    model_config = ConfigDict(frozen=True)

    steps: int
    basis: EnsembleState
    psi: dict[int, float]
    psi_bar: dict[int, float]

    @model_validator(mode="after")
    def _check_total(self) -> "CoinBasisDistribution":
        total = math.fsum(self.psi.values()) + math.fsum(self.psi_bar.values())
        if abs(total - 1.0) > DERIVED_TOLERANCE:
            raise EqcoinParameterError(
                f"joint probabilities must sum to 1, got {total:.15g}", "probabilities"
            )
        return self

    def marginal(self) -> Distribution:
        """Position distribution, summed over the coin outcome."""
        return Distribution(
            steps=self.steps,
            probabilities={z: self.psi[z] + self.psi_bar[z] for z in self.psi},
        )


class ResourceState(BaseModel):
    """Shared state vector for the nonlocality checks."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    kind: Literal["signalling", "locc_psi", "locc_psibar"]
    dims: tuple[int, ...]  # (3, 2) for signalling, (2, 2, 2) for locc
    vector: np.ndarray
    a: ComplexScalar
    b: ComplexScalar

    @model_validator(mode="after")
    def _check_vector(self) -> "ResourceState":
        size = int(np.prod(self.dims))
        if self.vector.shape != (size,):
            raise EqcoinDimensionError(
                f"{self.kind} vector must have shape ({size},), got {self.vector.shape}"
            )
        norm_sq = float(np.vdot(self.vector, self.vector).real)
        if abs(norm_sq - 1.0) > TOLERANCE:
            raise EqcoinParameterError(f"resource vector norm^2 is {norm_sq:.15g}", "vector")
        self.vector.setflags(write=False)
        return self


class ConstraintCheck(BaseModel):
    """Membership verdict with the two residuals of the ensemble constraint."""

    satisfied: bool
    residual_b: float  # |b - e^{i theta}(alpha/gamma) b*|
    residual_real: float  # |(a + a*) - (e^{-i theta} b + e^{i theta} b*)|

    @property
    def max_residual(self) -> float:
        return max(self.residual_b, self.residual_real)


class TransformationReport(BaseModel):
    """Deviation between the matrix action of a coin and the target superposition forms."""

    psi_deviation: float  # ||U psi - alpha(psi + e^{i theta} psi_bar)||
    psi_bar_deviation: float  # ||U psi_bar - gamma(psi - e^{i theta} psi_bar)||
    holds: bool

    @property
    def max_deviation(self) -> float:
        return max(self.psi_deviation, self.psi_bar_deviation)


class SpecialProperties(BaseModel):
    squares_to_identity: bool
    squares_to_i_sigma_x: bool
    equals_hadamard_form: bool  # M = (sigma_x + sigma_z)/sqrt(2)
    equals_identity_plus_i_sigma_x: bool  # M = (I + i sigma_x)/sqrt(2)


class AsymmetryReport(BaseModel):
    """P_1 - P_{-1} after three steps from |up>|0>."""

    p_plus_one: float
    p_minus_one: float
    difference: float
    predicted: float
    matches: bool


class SignallingReport(BaseModel):
    """Alice's reduced matrices before and after Bob's coin on the shared qutrit-qubit state."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    rho_a: np.ndarray
    rho_a_prime: np.ndarray
    eigenvalues_before: list[float]
    eigenvalues_after: list[float]
    max_deviation: float
    no_signalling: bool

    @field_serializer("rho_a", "rho_a_prime")
    def _serialize_matrix(self, m: NDArray[np.complex128]) -> dict[str, list[list[float]]]:
        return _matrix_payload(m)


class ConstraintReport(BaseModel):
    """LOCC entanglement check for one branch of the separable resource.

    ``n``/``dd`` are the normalization and squared coherence of the psi
    resource, ``cal_n``/``cal_dd`` those of the psi_bar resource; the pair
    belonging to ``branch`` is also read off the reduced matrix numerically.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    branch: Literal["psi", "psibar"]
    n: float
    dd: float
    cal_n: float
    cal_dd: float
    numeric_n: float
    numeric_dd: float
    lambda_minus: float
    lambda_plus: float
    numeric_eigenvalues: list[float]
    closed_form_agrees: bool
    rho_a: np.ndarray
    entropy_before: float
    entropy: float
    product_residual: float  # |DD* - (N - 1)| for the chosen branch
    compact_residual_psi: float
    compact_residual_psibar: float

    @model_validator(mode="after")
    def _check_eigenvalue_sum(self) -> "ConstraintReport":
        total = self.lambda_minus + self.lambda_plus
        if abs(total - 1.0) > DERIVED_TOLERANCE:
            raise EqcoinParameterError(f"lambda_+ + lambda_- = {total:.15g}", "lambda_pm")
        return self

    @field_serializer("rho_a")
    def _serialize_matrix(self, m: NDArray[np.complex128]) -> dict[str, list[list[float]]]:
        return _matrix_payload(m)


class SweepReport(BaseModel):
    """Grid sweep of both LOCC branches against the ensemble constraint.

    Index lists refer to rows of ``nonlocality.sweep_table`` for the same
    coin and resolution.
    """

    resolution: int
    grid_points: int
    psi_set: list[int]
    psibar_set: list[int]
    intersection: list[int]
    constraint_set: list[int]
    psi_only_count: int
    intersection_outside_constraint: list[int]
    constraint_outside_intersection: list[int]
    contract_holds: bool


class RunConfig(BaseModel):
    """Parsed command line for one CLI invocation."""

    model_config = ConfigDict(frozen=True)

    command: Literal["walk", "ensemble-check", "ensemble-sample", "nosignal", "locc", "sweep"]
    coin: BalancedCoin | UnbalancedCoin
    initial: Optional[InitialCoinState] = None
    state: Optional[EnsembleState] = None
    basis: Optional[EnsembleState] = None
    branch: Optional[Literal["psi", "psibar"]] = None  # None runs both LOCC branches
    steps: int = 0
    seed: int = 0
    count: int = 1
    resolution: int = 50
    output_format: Literal["json", "csv", "plot"] = "json"
    out: Optional[str] = None  # None writes to standard output
    use_cache: bool = True
