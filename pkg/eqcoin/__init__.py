"""eqcoin - equal-superposition quantum coins, their state ensembles and quantum walks.

Builds the balanced coin family U(alpha, gamma, theta) and the unbalanced
(p, q) coin, decides and samples the ensemble of qubits on which a balanced
coin acts as an equal superposition, checks that ensemble through
no-signalling and LOCC arguments, and simulates discrete-time quantum walks
on the integer line.
"""

from eqcoin.coins import (
    HADAMARD,
    HYBRID,
    INVARIANT,
    NAMED_COINS,
    balanced_coin,
    coin_matrix,
    is_invariant_family,
    named_coin,
    random_balanced_coin,
    special_property_checks,
    unbalanced_coin,
)
from eqcoin.config import cache_enabled, get_cache_dir, get_default_seed
from eqcoin.ensemble import (
    apply_and_verify,
    closed_form_inner_products,
    constraint_residuals,
    sample_ensemble,
    satisfies_constraint,
    verify_inner_products,
)
from eqcoin.exceptions import (
    EqcoinConfigError,
    EqcoinConvergenceError,
    EqcoinDimensionError,
    EqcoinError,
    EqcoinMatrixError,
    EqcoinParameterError,
    EqcoinPreconditionError,
)
from eqcoin.linalg import hermitian_eigenvalues, partial_trace, von_neumann_entropy
from eqcoin.models import (
    AsymmetryReport,
    BalancedCoin,
    CoinBasisDistribution,
    ConstraintCheck,
    ConstraintReport,
    Distribution,
    EnsembleState,
    InitialCoinState,
    ResourceState,
    RunConfig,
    SignallingReport,
    SpecialProperties,
    SweepReport,
    TransformationReport,
    UnbalancedCoin,
    WalkState,
)
from eqcoin.nonlocality import (
    build_resource,
    compact_residuals,
    locc_test,
    signalling_test,
    sweep_table,
    uniqueness_sweep,
)
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

try:
    from importlib.metadata import version

    __version__ = version("eqcoin")
except Exception:
    __version__ = "0.0.0"  # Not installed

__all__ = [
    # Coins
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
    # Ensemble
    "constraint_residuals",
    "satisfies_constraint",
    "sample_ensemble",
    "apply_and_verify",
    "closed_form_inner_products",
    "verify_inner_products",
    # Walks
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
    # Nonlocality
    "build_resource",
    "signalling_test",
    "compact_residuals",
    "locc_test",
    "sweep_table",
    "uniqueness_sweep",
    # Linear algebra
    "partial_trace",
    "hermitian_eigenvalues",
    "von_neumann_entropy",
    # Models
    "BalancedCoin",
    "UnbalancedCoin",
    "EnsembleState",
    "InitialCoinState",
    "WalkState",
    "Distribution",
    "CoinBasisDistribution",
    "ResourceState",
    "ConstraintCheck",
    "TransformationReport",
    "SpecialProperties",
    "AsymmetryReport",
    "SignallingReport",
    "ConstraintReport",
    "SweepReport",
    "RunConfig",
    # Exceptions
    "EqcoinError",
    "EqcoinParameterError",
    "EqcoinDimensionError",
    "EqcoinMatrixError",
    "EqcoinConvergenceError",
    "EqcoinPreconditionError",
    "EqcoinConfigError",
    # Config
    "get_default_seed",
    "get_cache_dir",
    "cache_enabled",
]
