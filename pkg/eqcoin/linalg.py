"""Dense complex linear algebra for qubit and qutrit systems.

Vectors and matrices are numpy ``complex128`` arrays. Everything here works
on dimensions of at most a dozen, so no sparse structures are used.

Two tolerances are used throughout the package: ``TOLERANCE`` for
construction-level checks (unitarity, normalization, Hermiticity) and
``DERIVED_TOLERANCE`` for quantities that pass through an iterative
eigensolver (eigenvalues, entropies, traces of reduced matrices).
"""

import logging
from collections.abc import Sequence
from typing import Any

import numpy as np
from numpy.typing import ArrayLike, NDArray

from eqcoin.exceptions import (
    EqcoinConvergenceError,
    EqcoinDimensionError,
    EqcoinMatrixError,
)

__all__ = [
    "TOLERANCE",
    "DERIVED_TOLERANCE",
    "PSD_CLAMP",
    "JACOBI_OFF_DIAGONAL_TOL",
    "JACOBI_MAX_SWEEPS",
    "MAX_EIGEN_DIMENSION",
    "IDENTITY_2",
    "PAULI_X",
    "PAULI_Z",
    "as_matrix",
    "as_vector",
    "is_unitary",
    "is_hermitian",
    "is_normalized",
    "kron",
    "projector",
    "partial_trace",
    "hermitian_eigenvalues",
    "hermitian_eigenvalues_2x2",
    "entropy_bits",
    "von_neumann_entropy",
]

logger = logging.getLogger("eqcoin")

TOLERANCE = 1e-12
DERIVED_TOLERANCE = 1e-9
PSD_CLAMP = 1e-9
JACOBI_OFF_DIAGONAL_TOL = 1e-14
JACOBI_MAX_SWEEPS = 100
MAX_EIGEN_DIMENSION = 8

IDENTITY_2: NDArray[np.complex128] = np.eye(2, dtype=np.complex128)
PAULI_X: NDArray[np.complex128] = np.array([[0, 1], [1, 0]], dtype=np.complex128)
PAULI_Z: NDArray[np.complex128] = np.array([[1, 0], [0, -1]], dtype=np.complex128)
for _constant in (IDENTITY_2, PAULI_X, PAULI_Z):
    _constant.setflags(write=False)


def as_matrix(m: ArrayLike) -> NDArray[np.complex128]:
    """Convert input to a 2-D complex128 array.

    Raises:
        EqcoinDimensionError: If the input is not two-dimensional.
    """
    arr = np.asarray(m, dtype=np.complex128)
    if arr.ndim != 2:
        raise EqcoinDimensionError(f"Expected a matrix, got array of shape {arr.shape}")
    return arr


def as_vector(v: ArrayLike) -> NDArray[np.complex128]:
    """Convert input to a 1-D complex128 array.

    Raises:
        EqcoinDimensionError: If the input is not one-dimensional.
    """
    arr = np.asarray(v, dtype=np.complex128)
    if arr.ndim != 1:
        raise EqcoinDimensionError(f"Expected a vector, got array of shape {arr.shape}")
    return arr


def is_unitary(m: ArrayLike, tol: float = TOLERANCE) -> bool:
    """Check M†M = I elementwise within tol."""
    arr = as_matrix(m)
    if arr.shape[0] != arr.shape[1]:
        return False
    identity = np.eye(arr.shape[0], dtype=np.complex128)
    return bool(np.all(np.abs(arr.conj().T @ arr - identity) < tol))


def is_hermitian(m: ArrayLike, tol: float = TOLERANCE) -> bool:
    """Check M = M† elementwise within tol."""
    arr = as_matrix(m)
    if arr.shape[0] != arr.shape[1]:
        return False
    return bool(np.all(np.abs(arr - arr.conj().T) < tol))


def is_normalized(v: ArrayLike, tol: float = TOLERANCE) -> bool:
    """Check that a state vector has unit norm, i.e. sum |v_i|^2 = 1 within tol."""
    arr = as_vector(v)
    return bool(abs(float(np.vdot(arr, arr).real) - 1.0) < tol)


def kron(a: ArrayLike, b: ArrayLike) -> NDArray[np.complex128]:
    """Kronecker product of two matrices (or two vectors)."""
    return np.kron(np.asarray(a, dtype=np.complex128), np.asarray(b, dtype=np.complex128))


def projector(v: ArrayLike) -> NDArray[np.complex128]:
    """Return the density matrix |v><v| of a pure state."""
    arr = as_vector(v)
    return np.outer(arr, arr.conj())


def partial_trace(rho: ArrayLike, dims: Sequence[int], keep: int) -> NDArray[np.complex128]:
    """Reduce a density matrix to one subsystem by tracing out all others.

    The matrix is reshaped into a tensor with one row index and one column
    index per subsystem; every subsystem except ``keep`` has its row and
    column indices contracted.

    Args:
        rho: Square Hermitian matrix over the product space.
        dims: Subsystem dimensions, in the order of the Kronecker product.
        keep: Index into ``dims`` of the subsystem to keep.

    Returns:
        The reduced density matrix of shape ``(dims[keep], dims[keep])``.

    Raises:
        EqcoinDimensionError: If dims do not multiply to the size of rho, or
            keep is out of range.
        EqcoinMatrixError: If rho is not Hermitian.

    Example:
        >>> singlet = np.array([0, 1, -1, 0]) / np.sqrt(2)
        >>> partial_trace(projector(singlet), [2, 2], keep=0)
        array([[0.5+0.j, 0. +0.j],
               [0. +0.j, 0.5+0.j]])
    """
    arr = as_matrix(rho)
    dims = [int(d) for d in dims]
    if any(d < 1 for d in dims):
        raise EqcoinDimensionError(f"Subsystem dimensions must be positive, got {dims}")
    total = int(np.prod(dims))
    if arr.shape != (total, total):
        raise EqcoinDimensionError(
            f"Subsystem dimensions {dims} imply a {total}x{total} matrix, got {arr.shape}"
        )
    if not 0 <= keep < len(dims):
        raise EqcoinDimensionError(f"keep={keep} is out of range for {len(dims)} subsystems")
    if not is_hermitian(arr):
        raise EqcoinMatrixError("partial_trace requires a Hermitian matrix", "hermitian")

    n = len(dims)
    tensor = arr.reshape(dims + dims)
    row_indices = list(range(n))
    col_indices = [n if k == keep else k for k in range(n)]
    reduced: NDArray[np.complex128] = np.einsum(tensor, row_indices + col_indices, [keep, n])
    return reduced


def hermitian_eigenvalues_2x2(h: ArrayLike) -> NDArray[np.float64]:
    """Closed-form eigenvalues of (a stack of) 2x2 Hermitian matrices.

    Works on any array of shape ``(..., 2, 2)`` and returns shape ``(..., 2)``
    in ascending order:
    lambda = (h00 + h11)/2 -+ sqrt(((h00 - h11)/2)^2 + |h01|^2).
    """
    arr = np.asarray(h, dtype=np.complex128)
    h00 = arr[..., 0, 0].real
    h11 = arr[..., 1, 1].real
    h01 = arr[..., 0, 1]
    mean = 0.5 * (h00 + h11)
    radius = np.sqrt((0.5 * (h00 - h11)) ** 2 + np.abs(h01) ** 2)
    return np.stack([mean - radius, mean + radius], axis=-1)


def _jacobi_symmetric(a: NDArray[np.float64]) -> NDArray[np.float64]:
    """Cyclic Jacobi rotations on a real symmetric matrix; returns its diagonal."""
    a = a.copy()
    n = a.shape[0]
    scale = max(1.0, float(np.linalg.norm(a)))
    # Entries below this floor cannot keep the off-diagonal norm above tolerance.
    floor = JACOBI_OFF_DIAGONAL_TOL * scale / (2 * n)
    for sweep in range(JACOBI_MAX_SWEEPS + 1):
        off = float(np.linalg.norm(a - np.diag(np.diag(a))))
        if off < JACOBI_OFF_DIAGONAL_TOL * scale:
            logger.debug(f"Jacobi converged after {sweep} sweeps (off-diagonal {off:.3e})")
            return np.diag(a).copy()
        if sweep == JACOBI_MAX_SWEEPS:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) < floor:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                sign = 1.0 if theta >= 0.0 else -1.0
                t = sign / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                a[p, q] = 0.0
                a[q, p] = 0.0
    raise EqcoinConvergenceError(
        f"Jacobi eigensolver did not converge within {JACOBI_MAX_SWEEPS} sweeps",
        JACOBI_MAX_SWEEPS,
    )


def hermitian_eigenvalues(m: ArrayLike) -> NDArray[np.float64]:
    """Real eigenvalues of a Hermitian matrix in ascending order.

    2x2 matrices use the closed form. Larger matrices H = A + iB are embedded
    as the real symmetric matrix [[A, -B], [B, A]], whose spectrum is that of
    H with every eigenvalue doubled, and diagonalized by cyclic Jacobi
    rotations.

    Args:
        m: Hermitian matrix of dimension at most MAX_EIGEN_DIMENSION.

    Returns:
        Ascending array of eigenvalues.

    Raises:
        EqcoinMatrixError: If m is not Hermitian.
        EqcoinDimensionError: If m is not square or too large.
        EqcoinConvergenceError: If Jacobi needs more than JACOBI_MAX_SWEEPS sweeps.
    """
    arr = as_matrix(m)
    n = arr.shape[0]
    if arr.shape != (n, n):
        raise EqcoinDimensionError(f"Eigenvalues need a square matrix, got {arr.shape}")
    if n > MAX_EIGEN_DIMENSION:
        raise EqcoinDimensionError(
            f"Matrix dimension {n} exceeds the supported maximum of {MAX_EIGEN_DIMENSION}"
        )
    if not is_hermitian(arr):
        raise EqcoinMatrixError("hermitian_eigenvalues requires a Hermitian matrix", "hermitian")

    if n == 1:
        return np.array([arr[0, 0].real])
    if n == 2:
        return hermitian_eigenvalues_2x2(arr)

    real, imag = arr.real, arr.imag
    embedded = np.block([[real, -imag], [imag, real]])
    doubled = np.sort(_jacobi_symmetric(embedded))
    return doubled[::2].copy()


def entropy_bits(eigenvalues: Any) -> Any:
    """Shannon entropy in bits along the last axis, with 0 log 0 = 0.

    Negative values are treated as zero; callers validate them first.
    """
    lam = np.clip(np.asarray(eigenvalues, dtype=np.float64), 0.0, None)
    safe = np.where(lam > 0.0, lam, 1.0)
    return -np.sum(lam * np.log2(safe), axis=-1)


def von_neumann_entropy(rho: ArrayLike) -> float:
    """Von Neumann entropy -sum(lambda log2 lambda) of a density matrix, in bits.

    Raises:
        EqcoinMatrixError: If rho is not Hermitian, its trace differs from 1 by
            more than DERIVED_TOLERANCE, or an eigenvalue is below -PSD_CLAMP.
    """
    arr = as_matrix(rho)
    trace = complex(np.trace(arr))
    if abs(trace - 1.0) > DERIVED_TOLERANCE:
        raise EqcoinMatrixError(f"Density matrix trace is {trace:.12g}, expected 1", "trace")
    eigenvalues = hermitian_eigenvalues(arr)
    if eigenvalues[0] < -PSD_CLAMP:
        raise EqcoinMatrixError(
            f"Density matrix has negative eigenvalue {eigenvalues[0]:.3e}", "positive"
        )
    return float(entropy_bits(eigenvalues))
