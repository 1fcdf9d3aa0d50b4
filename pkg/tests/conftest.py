"""Shared oracles and random-input helpers.

The oracles here deliberately take a different route from the package: maps
are lifted to explicit superoperator matrices acting on row-major vec'd
states, so the package's Pauli-coefficient contractions get checked against
plain matrix multiplication in a different representation.
"""

from __future__ import annotations

import numpy as np
import pytest

from qsink.ptm import SIGMA


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20260822)


def vec(op: np.ndarray) -> np.ndarray:
    return np.asarray(op, dtype=complex).reshape(-1)


def unvec(v: np.ndarray, dim: int = 2) -> np.ndarray:
    return np.asarray(v, dtype=complex).reshape(dim, dim)


def ptm_to_superop(m: np.ndarray) -> np.ndarray:
    """Lift a transfer matrix to the 4x4 superoperator on vec'd 2x2 operators."""
    m = np.asarray(m, dtype=float)
    sup = np.zeros((4, 4), dtype=complex)
    for i in range(4):
        for j in range(4):
            # tr[sigma_j rho] = vec(sigma_j^T) . vec(rho)
            sup += 0.5 * m[i, j] * np.outer(vec(SIGMA[i]), vec(SIGMA[j].T))
    return sup


def two_qubit_superop(m1: np.ndarray, m2: np.ndarray) -> np.ndarray:
    """16x16 superoperator of the product map on vec'd 4x4 operators."""
    t1 = ptm_to_superop(m1).reshape(2, 2, 2, 2)
    t2 = ptm_to_superop(m2).reshape(2, 2, 2, 2)
    # row index (a c b d) <-> output entry [(a,c),(b,d)], column likewise
    return np.einsum("abij,cdkl->acbdikjl", t1, t2).reshape(16, 16)


def apply_two_qubit_oracle(
    m1: np.ndarray, m2: np.ndarray, rho: np.ndarray
) -> np.ndarray:
    return unvec(two_qubit_superop(m1, m2) @ vec(rho), 4)


def random_hermitian(rng: np.random.Generator, dim: int = 2) -> np.ndarray:
    x = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return x + x.conj().T


def random_density(rng: np.random.Generator, dim: int = 2) -> np.ndarray:
    x = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = x @ x.conj().T
    return rho / np.trace(rho).real


def random_pure_density(rng: np.random.Generator, dim: int = 4) -> np.ndarray:
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    v /= np.linalg.norm(v)
    return np.outer(v, v.conj())


def random_separable(rng: np.random.Generator, terms: int = 4) -> np.ndarray:
    """Random convex mixture of product states, separable by construction."""
    weights = rng.dirichlet(np.ones(terms))
    rho = np.zeros((4, 4), dtype=complex)
    for w in weights:
        rho += w * np.kron(random_density(rng, 2), random_density(rng, 2))
    return rho


def random_pd(
    rng: np.random.Generator, dim: int = 2, log_condition: float = 3.0
) -> np.ndarray:
    """Random positive definite matrix with condition number 10**log_condition."""
    x = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, _ = np.linalg.qr(x)
    return (q * 10.0 ** np.linspace(0.0, -log_condition, dim)) @ q.conj().T


def read_csv_columns(text: str) -> dict[str, list[float]]:
    lines = text.strip().split("\n")
    header = lines[0].split(",")
    cols: dict[str, list[float]] = {h: [] for h in header}
    for line in lines[1:]:
        for name, value in zip(header, line.split(",")):
            cols[name].append(float(value))
    return cols
