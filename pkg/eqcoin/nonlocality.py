"""No-signalling and LOCC checks of a balanced coin's ensemble constraint.

Bob's coin is applied to his qubit through the substitution rules
U|0> = first column, U|1> = second column and
U|psi> = alpha(|psi> + e^{i theta}|psi_bar>) (U|psi_bar> = gamma(|psi> - e^{i theta}|psi_bar>)
on the psi_bar branch), never as a matrix acting on psi. Alice's reduced
matrix is unchanged, and the separable resources stay separable, exactly
when the substitution agrees with the matrix, i.e. when (a, b) is in the
coin's ensemble.
"""

import logging
import math
from pathlib import Path
from typing import Any, Literal, Optional

import numpy as np
import pandas as pd
from numpy.typing import NDArray

from eqcoin.cache import get_cached, make_cache_key, set_cached
from eqcoin.ensemble import CONSTRAINT_TOLERANCE, constraint_residuals, target_images
from eqcoin.exceptions import EqcoinParameterError
from eqcoin.linalg import (
    DERIVED_TOLERANCE,
    TOLERANCE,
    entropy_bits,
    hermitian_eigenvalues,
    hermitian_eigenvalues_2x2,
    kron,
    partial_trace,
    projector,
    von_neumann_entropy,
)
from eqcoin.models import (
    BalancedCoin,
    ConstraintReport,
    EnsembleState,
    ResourceState,
    SignallingReport,
    SweepReport,
)

__all__ = [
    "ENTROPY_TOLERANCE",
    "SWEEP_TOLERANCE",
    "MIN_RESOLUTION",
    "build_resource",
    "signalling_test",
    "compact_residuals",
    "locc_test",
    "sweep_grid",
    "sweep_table",
    "uniqueness_sweep",
]

logger = logging.getLogger("eqcoin")

ResourceKind = Literal["signalling", "locc_psi", "locc_psibar"]
Branch = Literal["psi", "psibar"]

ENTROPY_TOLERANCE = 1e-9
# Residual below which a grid point counts as on the constraint set for the sweep contract.
SWEEP_TOLERANCE = 1e-5
MIN_RESOLUTION = 10


def _ket(dim: int, index: int) -> NDArray[np.complex128]:
    vec = np.zeros(dim, dtype=np.complex128)
    vec[index] = 1.0
    return vec


E0, E1 = _ket(2, 0), _ket(2, 1)
# Unnormalized singlet |0>|1> - |1>|0> on Bob's two qubits.
SINGLET = kron(E0, E1) - kron(E1, E0)


def _antisymmetrized(phi: NDArray[np.complex128]) -> NDArray[np.complex128]:
    """|0>|phi> - |phi>|0> on Bob's two qubits."""
    return kron(E0, phi) - kron(phi, E0)


def build_resource(kind: ResourceKind, a: complex, b: complex) -> ResourceState:
    """Build one of the three shared resource states for the qubit (a, b).

    - ``signalling``: qutrit-qubit state (|0>|0> + |1>|psi> + |2>|1>)/sqrt(3).
    - ``locc_psi``: [|0>(|01> - |10>) + |1>(|0>|psi> - |psi>|0>)] / sqrt(2(1 + |b|^2)).
    - ``locc_psibar``: same with psi_bar, normalized by sqrt(2(1 + |a|^2)).

    The locc vectors are ordered A (x) B1 (x) B2 and equal
    (|0> + b|1>) (x) singlet and (|0> - a*|1>) (x) singlet respectively.

    Raises:
        EqcoinParameterError: If (a, b) is not normalized, or b = 0 for
            ``locc_psi``, or a = 0 for ``locc_psibar``, or kind is unknown.
    """
    state = EnsembleState.from_amplitudes(a, b)
    a, b = state.a, state.b

    if kind == "signalling":
        vector = (kron(_ket(3, 0), E0) + kron(_ket(3, 1), state.psi) + kron(_ket(3, 2), E1))
        return ResourceState(kind=kind, dims=(3, 2), vector=vector / math.sqrt(3.0), a=a, b=b)

    if kind == "locc_psi":
        if abs(b) < TOLERANCE:
            raise EqcoinParameterError("locc_psi needs a nonzero b", "b")
        vector = kron(E0, SINGLET) + kron(E1, _antisymmetrized(state.psi))
        norm = math.sqrt(2.0 * (1.0 + abs(b) ** 2))
    elif kind == "locc_psibar":
        if abs(a) < TOLERANCE:
            raise EqcoinParameterError("locc_psibar needs a nonzero a", "a")
        vector = kron(E0, SINGLET) + kron(E1, _antisymmetrized(state.psi_bar))
        norm = math.sqrt(2.0 * (1.0 + abs(a) ** 2))
    else:
        raise EqcoinParameterError(f"unknown resource kind {kind!r}", "kind")
    return ResourceState(kind=kind, dims=(2, 2, 2), vector=vector / norm, a=a, b=b)


def signalling_test(coin: BalancedCoin, a: complex, b: complex) -> SignallingReport:
    """Compare Alice's qutrit before and after Bob applies the coin to his qubit.

    Returns:
        SignallingReport; ``no_signalling`` is True when the largest entrywise
        change of Alice's reduced matrix is below 1e-10, which happens exactly
        for ensemble members.
    """
    resource = build_resource("signalling", a, b)
    state = EnsembleState.from_amplitudes(a, b)
    u = coin.matrix()
    image_psi, _ = target_images(coin, state)

    after = (
        kron(_ket(3, 0), u[:, 0]) + kron(_ket(3, 1), image_psi) + kron(_ket(3, 2), u[:, 1])
    ) / math.sqrt(3.0)
    rho_a = partial_trace(projector(resource.vector), [3, 2], keep=0)
    rho_a_prime = partial_trace(projector(after), [3, 2], keep=0)
    max_deviation = float(np.max(np.abs(rho_a - rho_a_prime)))
    logger.debug(f"Signalling deviation for a={a}, b={b}: {max_deviation:.3e}")

    return SignallingReport(
        rho_a=rho_a,
        rho_a_prime=rho_a_prime,
        eigenvalues_before=hermitian_eigenvalues(rho_a).tolist(),
        eigenvalues_after=hermitian_eigenvalues(rho_a_prime).tolist(),
        max_deviation=max_deviation,
        no_signalling=max_deviation < CONSTRAINT_TOLERANCE,
    )


def compact_residuals(coin: BalancedCoin, a: Any, b: Any) -> tuple[Any, Any]:
    """Left minus right side of the factored purity conditions of both LOCC branches.

    With X = a + a*, c = e^{-i theta} b + e^{i theta} b* and
    z = e^{-i theta/2} sqrt(gamma/alpha) b, the psi branch is pure iff

        (X - c)(-3X/4 + c/4 + Re(gamma/alpha b)) + (z - z*)^2 = 0

    and the psi_bar branch iff the same holds with -3X/8 - c/8. Both
    residuals vanish on the ensemble. Broadcasts over numpy arrays.
    """
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    e = coin.phase
    g = coin.gamma / coin.alpha
    big_x = 2.0 * a.real
    c = 2.0 * (np.conj(e) * b).real
    mixed = (g * b).real
    # sqrt(alpha/gamma) is taken as 1/sqrt(gamma/alpha) so both roots share one branch.
    z = np.exp(-0.5j * coin.theta) * np.sqrt(g) * b
    square = ((z - np.conj(z)) ** 2).real
    gap = big_x - c
    residual_psi = gap * (-0.75 * big_x + 0.25 * c + mixed) + square
    residual_psibar = gap * (-0.375 * big_x - 0.125 * c + mixed) + square
    if residual_psi.ndim == 0:
        return float(residual_psi), float(residual_psibar)
    return residual_psi, residual_psibar


def _closed_forms(coin: BalancedCoin, a: complex, b: complex) -> tuple[float, float, float, float]:
    """(N, |D|^2, calN, |calD|^2) of the psi and psi_bar resources after Bob's coin."""
    e = coin.phase
    alpha, gamma = coin.alpha, coin.gamma
    big_x = (a + a.conjugate()).real
    c = (e.conjugate() * b + e * b.conjugate()).real

    n = 2.0 + 0.25 * (((a - a.conjugate()) ** 2).real - c * big_x)
    d = 0.5 * (
        alpha * gamma.conjugate() * (big_x - e.conjugate() * b + e * b.conjugate()) + b
    )
    # The two terms are complex conjugates, so calN = 2 - Re(second term).
    bracket = big_x - e.conjugate() * b + e * b.conjugate()
    cal_n = 2.0 - 0.5 * (
        gamma * alpha.conjugate() * b * bracket.conjugate()
        + alpha * gamma.conjugate() * b.conjugate() * bracket
    ).real
    cal_d = 0.25 * (a - a.conjugate() - e.conjugate() * b - e * b.conjugate()) - 0.5 * a.conjugate()
    return float(n), abs(d) ** 2, float(cal_n), abs(cal_d) ** 2


def _bob_blocks(
    coin: BalancedCoin, state: EnsembleState, branch: Branch
) -> tuple[NDArray[np.complex128], NDArray[np.complex128]]:
    """Bob's two-qubit vectors paired with |0>_A and |1>_A after the coin acts on B2."""
    u = coin.matrix()
    u0, u1 = u[:, 0], u[:, 1]
    image_psi, image_psi_bar = target_images(coin, state)
    block0 = kron(E0, u1) - kron(E1, u0)
    if branch == "psi":
        block1 = kron(E0, image_psi) - kron(state.psi, u0)
    else:
        block1 = kron(E0, image_psi_bar) - kron(state.psi_bar, u0)
    return block0, block1


def locc_test(coin: BalancedCoin, a: complex, b: complex, branch: Branch) -> ConstraintReport:
    """Check whether Bob's local coin entangles Alice with Bob on one separable resource.

    Builds the post-operation state |0>_A|block0> + |1>_A|block1>, reduces it
    to Alice's qubit, and computes its spectrum two ways: from the closed form
    lambda_pm = 1/2 +- sqrt(N^2 - 4(N - 1 - |D|^2))/(2N) and from the generic
    eigensolver. The state stays a product state (zero entropy) exactly when
    |D|^2 = N - 1.

    Args:
        coin: Bob's balanced coin.
        a: Amplitude of |0> in psi.
        b: Amplitude of |1> in psi.
        branch: ``"psi"`` or ``"psibar"`` selects which resource is used.

    Returns:
        ConstraintReport with both branches' closed-form quantities, the
        numeric values for the chosen branch, entropies before and after,
        and the compact residuals of both branches.

    Raises:
        EqcoinParameterError: If the branch is unknown, (a, b) is not
            normalized, or the chosen resource needs a nonzero amplitude.
    """
    if branch not in ("psi", "psibar"):
        raise EqcoinParameterError(f"branch must be 'psi' or 'psibar', got {branch!r}", "branch")
    state = EnsembleState.from_amplitudes(a, b)
    a, b = state.a, state.b
    resource = build_resource("locc_psi" if branch == "psi" else "locc_psibar", a, b)
    entropy_before = von_neumann_entropy(partial_trace(projector(resource.vector), [2, 4], keep=0))

    block0, block1 = _bob_blocks(coin, state, branch)
    vector = kron(E0, block0) + kron(E1, block1)
    vector = vector / np.linalg.norm(vector)
    rho_a = partial_trace(projector(vector), [2, 4], keep=0)

    n, dd, cal_n, cal_dd = _closed_forms(coin, a, b)
    branch_n, branch_dd = (n, dd) if branch == "psi" else (cal_n, cal_dd)
    discriminant = max(0.0, branch_n**2 - 4.0 * (branch_n - 1.0 - branch_dd))
    spread = math.sqrt(discriminant) / (2.0 * branch_n)
    lambda_minus, lambda_plus = 0.5 - spread, 0.5 + spread

    numeric_n = 1.0 / float(rho_a[0, 0].real)
    numeric_dd = abs(complex(rho_a[0, 1])) ** 2 * numeric_n**2
    numeric_eigenvalues = hermitian_eigenvalues(rho_a)
    closed_form_agrees = (
        abs(lambda_minus - numeric_eigenvalues[0]) < DERIVED_TOLERANCE
        and abs(lambda_plus - numeric_eigenvalues[1]) < DERIVED_TOLERANCE
        and abs(branch_n - numeric_n) < DERIVED_TOLERANCE
        and abs(branch_dd - numeric_dd) < DERIVED_TOLERANCE
    )
    if not closed_form_agrees:
        logger.warning(
            f"Closed-form spectrum disagrees with eigensolver for a={a}, b={b}, branch={branch}"
        )
    residual_psi, residual_psibar = compact_residuals(coin, a, b)

    return ConstraintReport(
        branch=branch,
        n=n,
        dd=dd,
        cal_n=cal_n,
        cal_dd=cal_dd,
        numeric_n=numeric_n,
        numeric_dd=numeric_dd,
        lambda_minus=lambda_minus,
        lambda_plus=lambda_plus,
        numeric_eigenvalues=numeric_eigenvalues.tolist(),
        closed_form_agrees=closed_form_agrees,
        rho_a=rho_a,
        entropy_before=entropy_before,
        entropy=von_neumann_entropy(rho_a),
        product_residual=abs(branch_dd - (branch_n - 1.0)),
        compact_residual_psi=residual_psi,
        compact_residual_psibar=residual_psibar,
    )


def sweep_grid(resolution: int) -> pd.DataFrame:
    """Grid of normalized qubits (cos chi e^{i phi_a}, sin chi e^{i phi_b}).

    With M = 4 ceil(resolution / 4), chi_k = (pi/2) k / M for k = 1..M-1 and
    phi_j = 2 pi j / M for j = 0..M-1, so chi = pi/4 and every quarter turn
    lie on the grid while a = 0 and b = 0 are excluded. Rows are ordered by
    (chi index, phase_a index, phase_b index).

    Raises:
        EqcoinParameterError: If resolution < MIN_RESOLUTION.
    """
    if resolution < MIN_RESOLUTION:
        raise EqcoinParameterError(
            f"resolution must be at least {MIN_RESOLUTION}, got {resolution}", "resolution"
        )
    m = 4 * math.ceil(resolution / 4)
    k, ja, jb = np.meshgrid(
        np.arange(1, m), np.arange(m), np.arange(m), indexing="ij"
    )
    k, ja, jb = k.ravel(), ja.ravel(), jb.ravel()
    chi = 0.5 * np.pi * k / m
    a = np.cos(chi) * np.exp(2j * np.pi * ja / m)
    b = np.sin(chi) * np.exp(2j * np.pi * jb / m)
    return pd.DataFrame(
        {
            "chi_index": k,
            "phase_a_index": ja,
            "phase_b_index": jb,
            "re_a": a.real,
            "im_a": a.imag,
            "re_b": b.real,
            "im_b": b.imag,
        }
    )


def _branch_entropies(coin: BalancedCoin, a: NDArray[Any], b: NDArray[Any], branch: Branch) -> Any:
    """Entanglement entropy of one LOCC branch for many (a, b) at once."""
    e = coin.phase
    u = coin.matrix()
    u0, u1 = u[:, 0], u[:, 1]
    psi = np.stack([a, b], axis=-1)
    psi_bar = np.stack([np.conj(b), -np.conj(a)], axis=-1)
    if branch == "psi":
        image = coin.alpha * (psi + e * psi_bar)
        partner = psi
    else:
        image = coin.gamma * (psi - e * psi_bar)
        partner = psi_bar

    block0 = kron(E0, u1) - kron(E1, u0)
    block1 = np.zeros((a.shape[0], 4), dtype=np.complex128)
    block1[:, :2] = image
    block1 -= np.einsum("ni,j->nij", partner, u0).reshape(-1, 4)

    g00 = float(np.vdot(block0, block0).real)
    g11 = np.einsum("ni,ni->n", np.conj(block1), block1).real
    g01 = np.einsum("i,ni->n", np.conj(block0), block1)
    trace = g00 + g11
    rho = np.empty((a.shape[0], 2, 2), dtype=np.complex128)
    rho[:, 0, 0] = g00 / trace
    rho[:, 1, 1] = g11 / trace
    rho[:, 0, 1] = np.conj(g01) / trace
    rho[:, 1, 0] = g01 / trace
    return entropy_bits(hermitian_eigenvalues_2x2(rho))


def sweep_table(coin: BalancedCoin, resolution: int) -> pd.DataFrame:
    """Per grid point: constraint residuals, membership and both branch entropies."""
    table = sweep_grid(resolution)
    a = table["re_a"].to_numpy() + 1j * table["im_a"].to_numpy()
    b = table["re_b"].to_numpy() + 1j * table["im_b"].to_numpy()
    residual_b, residual_real = constraint_residuals(coin, a, b)
    table["residual_b"] = residual_b
    table["residual_real"] = residual_real
    table["in_constraint"] = (residual_b < CONSTRAINT_TOLERANCE) & (
        residual_real < CONSTRAINT_TOLERANCE
    )
    table["entropy_psi"] = _branch_entropies(coin, a, b, "psi")
    table["entropy_psibar"] = _branch_entropies(coin, a, b, "psibar")
    return table


def _sweep_cache_key(coin: BalancedCoin, resolution: int) -> str:
    return make_cache_key(
        {
            "operation": "uniqueness_sweep",
            "alpha": coin.alpha,
            "gamma": coin.gamma,
            "theta": coin.theta,
            "resolution": resolution,
        }
    )


def uniqueness_sweep(
    coin: BalancedCoin,
    grid_resolution: int,
    use_cache: bool = False,
    cache_dir: Optional[Path] = None,
    table: Optional[pd.DataFrame] = None,
) -> SweepReport:
    """Compare the zero-entropy sets of both LOCC branches with the constraint set.

    Args:
        coin: Bob's balanced coin.
        grid_resolution: Grid resolution, at least MIN_RESOLUTION.
        use_cache: Read and write the report through the on-disk cache.
        cache_dir: Cache directory; defaults to ``get_cache_dir()``.
        table: Precomputed ``sweep_table(coin, grid_resolution)`` to reuse.

    Returns:
        SweepReport. ``contract_holds`` is True when every point in both
        zero-entropy sets lies within SWEEP_TOLERANCE of the constraint and
        every constraint point is in both sets.

    Raises:
        EqcoinParameterError: If grid_resolution < MIN_RESOLUTION.
    """
    key = _sweep_cache_key(coin, grid_resolution)
    if use_cache:
        try:
            cached = get_cached(key, cache_dir=cache_dir)
        except Exception as e:
            logger.warning(f"Sweep cache read failed: {e}")
            cached = None
        if cached:
            logger.debug("Returning cached sweep report")
            return SweepReport(**cached)
        logger.debug(f"No cached sweep report found for key {key}")

    if table is None:
        table = sweep_table(coin, grid_resolution)
    psi_mask = table["entropy_psi"].to_numpy() < ENTROPY_TOLERANCE
    psibar_mask = table["entropy_psibar"].to_numpy() < ENTROPY_TOLERANCE
    both = psi_mask & psibar_mask
    constraint_mask = table["in_constraint"].to_numpy()
    near_mask = np.maximum(table["residual_b"], table["residual_real"]).to_numpy() < SWEEP_TOLERANCE

    def indices(mask: NDArray[np.bool_]) -> list[int]:
        return [int(i) for i in np.flatnonzero(mask)]

    report = SweepReport(
        resolution=grid_resolution,
        grid_points=len(table),
        psi_set=indices(psi_mask),
        psibar_set=indices(psibar_mask),
        intersection=indices(both),
        constraint_set=indices(constraint_mask),
        psi_only_count=int(np.count_nonzero(psi_mask & ~psibar_mask)),
        intersection_outside_constraint=indices(both & ~near_mask),
        constraint_outside_intersection=indices(constraint_mask & ~both),
        contract_holds=not np.any(both & ~near_mask) and not np.any(constraint_mask & ~both),
    )
    logger.debug(
        f"Sweep over {report.grid_points} points: psi {len(report.psi_set)}, "
        f"psibar {len(report.psibar_set)}, both {len(report.intersection)}, "
        f"constraint {len(report.constraint_set)}"
    )

    if use_cache:
        try:
            set_cached(key, report.model_dump(), cache_dir=cache_dir)
        except Exception as e:
            logger.warning(f"Sweep cache write failed: {e}")
    return report
