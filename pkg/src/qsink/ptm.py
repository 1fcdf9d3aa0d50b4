"""Pauli transfer matrix representation of qubit maps.

A linear map L on qubit operators is stored as the real 4x4 matrix

    m[i, j] = tr[sigma_i L[sigma_j]] / 2,

with Pauli index order (identity, x, y, z).  States stay plain complex
numpy arrays; the polarization basis |H>, |V> is identified with |0>, |1>.
For a two-qubit product map the correlation matrix R_ij = tr[(sigma_i x
sigma_j) rho] transforms as R -> m1 R m2^T, which is what apply_two_qubit
implements.
"""

from __future__ import annotations

import numpy as np

from .linalg import hermitian_part, kron

SIGMA = (
    np.eye(2, dtype=complex),
    np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
    np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex),
    np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex),
)
_SIG = np.stack(SIGMA)
# Two-qubit Pauli products, index 4*i + j  <->  sigma_i (x) sigma_j.
SIGMA2 = tuple(kron(a, b) for a in SIGMA for b in SIGMA)
_SIG2 = np.stack(SIGMA2)

# How negative an eigenvalue may get before a "positive semidefinite" claim fails.
PSD_TOL = 1e-9
_FLAT_TOL = 1e-9  # tolerance for the trace-preserving / unital row and column


def identity_ptm() -> np.ndarray:
    return np.eye(4)


def _check_ptm(m: np.ndarray) -> np.ndarray:
    m = np.asarray(m, dtype=float)
    if m.shape != (4, 4):
        raise ValueError(f"expected a 4x4 transfer matrix, got shape {m.shape}")
    return m


def _apply_linear(m: np.ndarray, rho: np.ndarray) -> np.ndarray:
    # Linear extension to arbitrary 2x2 inputs; used for matrix units too.
    coeffs = np.einsum("kab,ba->k", _SIG, np.asarray(rho, dtype=complex))
    return 0.5 * np.einsum("k,kab->ab", m @ coeffs, _SIG)


def apply(m: np.ndarray, rho: np.ndarray) -> np.ndarray:
    """Apply the map with transfer matrix m to a Hermitian 2x2 operator."""
    m = _check_ptm(m)
    rho = hermitian_part(rho)
    return _apply_linear(m, rho)


def apply_two_qubit(m1: np.ndarray, m2: np.ndarray, rho: np.ndarray) -> np.ndarray:
    """Apply the product map (first qubit m1, second m2) to a 4x4 operator."""
    m1 = _check_ptm(m1)
    m2 = _check_ptm(m2)
    rho = hermitian_part(rho)
    if rho.shape != (4, 4):
        raise ValueError(f"expected a 4x4 state, got shape {rho.shape}")
    corr = np.einsum("kab,ba->k", _SIG2, rho).reshape(4, 4)
    corr = m1 @ corr @ m2.T
    return 0.25 * np.einsum("k,kab->ab", corr.reshape(-1), _SIG2)


def dual(m: np.ndarray) -> np.ndarray:
    """Transfer matrix of the adjoint map (transpose in the Pauli basis)."""
    return _check_ptm(m).T.copy()


def compose(outer: np.ndarray, inner: np.ndarray) -> np.ndarray:
    """Transfer matrix of outer . inner (inner acts first)."""
    return _check_ptm(outer) @ _check_ptm(inner)


def sandwich(x: np.ndarray) -> np.ndarray:
    """Transfer matrix of rho -> x rho x^dag for an arbitrary 2x2 operator x."""
    x = np.asarray(x, dtype=complex)
    if x.shape != (2, 2):
        raise ValueError(f"expected a 2x2 operator, got shape {x.shape}")
    m = 0.5 * np.einsum("iab,bc,jcd,ad->ij", _SIG, x, _SIG, x.conj())
    return np.ascontiguousarray(m.real)


def choi(m: np.ndarray) -> np.ndarray:
    """Choi operator sum_ij |i><j| (x) L[|i><j|], trace 2 for trace-preserving L."""
    m = _check_ptm(m)
    c = np.zeros((4, 4), dtype=complex)
    for i in range(2):
        for j in range(2):
            unit = np.zeros((2, 2), dtype=complex)
            unit[i, j] = 1.0
            c += kron(unit, _apply_linear(m, unit))
    return c


def is_cp(m: np.ndarray) -> bool:
    """Complete positivity: the Choi operator is PSD up to PSD_TOL."""
    return float(np.linalg.eigvalsh(choi(m))[0]) >= -PSD_TOL


def is_trace_preserving(m: np.ndarray) -> bool:
    m = _check_ptm(m)
    return float(np.max(np.abs(m[0] - np.array([1.0, 0, 0, 0])))) <= _FLAT_TOL


def is_unital(m: np.ndarray) -> bool:
    m = _check_ptm(m)
    return float(np.max(np.abs(m[:, 0] - np.array([1.0, 0, 0, 0])))) <= _FLAT_TOL


def is_trace_nonincreasing(m: np.ndarray) -> bool:
    """Whether identity minus the adjoint image of the identity is PSD."""
    gap = np.eye(2, dtype=complex) - _apply_linear(_check_ptm(m).T, np.eye(2, dtype=complex))
    return float(np.linalg.eigvalsh(gap)[0]) >= -PSD_TOL
