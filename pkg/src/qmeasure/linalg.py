"""Dense complex linear algebra shared by the qubit and Fock-space layers.

Operators are plain numpy arrays with complex dtype. Everything handled here
is small (2x2 up to a few thousand rows for truncated oscillator bases), so
all routines are dense and eager.
"""
from __future__ import annotations

import numpy as np
import scipy.linalg

DEFAULT_TOL = 1e-10

# Largest matrix the exponential will accept; anything bigger is a usage bug.
MAX_EXP_DIM = 10_000

ID2 = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def _as_matrix(m) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {m.shape}")
    return m


def matmul(a, b) -> np.ndarray:
    """Matrix product with an explicit dimension check."""
    a, b = _as_matrix(a), _as_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"dimension mismatch: {a.shape} @ {b.shape}")
    return a @ b


def tensor_product(a, b) -> np.ndarray:
    """Kronecker product, first factor major.

    The convention throughout the package is system (x) factor first,
    probe (y) factor second.
    """
    return np.kron(_as_matrix(a), _as_matrix(b))


def is_unitary(u, tol: float = DEFAULT_TOL) -> bool:
    u = _as_matrix(u)
    if u.shape[0] != u.shape[1]:
        return False
    return np.abs(u.conj().T @ u - np.eye(u.shape[0])).max() < tol


def is_normalized(v, tol: float = DEFAULT_TOL) -> bool:
    v = np.asarray(v, dtype=complex)
    return abs(np.linalg.norm(v) - 1.0) < tol


def matrix_exponential(generator, scale: complex = 1.0) -> np.ndarray:
    """exp(scale * generator) for a square matrix.

    Hermitian generators go through an eigendecomposition, other normal
    matrices through a complex Schur form, and the general case falls back
    to scaling-and-squaring. The spectral paths verify their reconstruction
    residual and raise ArithmeticError if the factorization is unusable.
    """
    g = _as_matrix(generator)
    n, m = g.shape
    if n != m:
        raise ValueError(f"matrix exponential needs a square matrix, got {g.shape}")
    if n > MAX_EXP_DIM:
        raise ValueError(f"dimension {n} exceeds the supported maximum {MAX_EXP_DIM}")

    mag = max(np.abs(g).max(), 1.0)
    if np.abs(g - g.conj().T).max() <= 1e-12 * mag:
        w, v = np.linalg.eigh(g)
        resid = np.abs((v * w) @ v.conj().T - g).max()
        if resid > DEFAULT_TOL * mag:
            raise ArithmeticError(f"eigendecomposition residual {resid:.3e} too large")
        return (v * np.exp(scale * w)) @ v.conj().T

    t, q = scipy.linalg.schur(g, output="complex")
    off = np.abs(np.triu(t, 1)).max() if n > 1 else 0.0
    if off <= 1e-12 * mag:
        # Normal matrix: the Schur form is diagonal.
        w = np.diag(t)
        return (q * np.exp(scale * w)) @ q.conj().T

    result = scipy.linalg.expm(scale * g)
    inverse = scipy.linalg.expm(-scale * g)
    resid = np.abs(result @ inverse - np.eye(n)).max()
    if not np.isfinite(resid) or resid > 1e-8:
        raise ArithmeticError(f"matrix exponential did not converge, residual {resid:.3e}")
    return result


def equal_up_to_global_phase(u, v, tol: float = DEFAULT_TOL) -> tuple[bool, float]:
    """Whether u == exp(i*phase) * v for some real phase, plus that phase.

    The phase is read off the largest-magnitude entry of v, so it is
    meaningful even when the match fails.
    """
    u, v = _as_matrix(u), _as_matrix(v)
    if u.shape != v.shape:
        raise ValueError(f"shape mismatch: {u.shape} vs {v.shape}")
    vmax = np.abs(v).max()
    if vmax == 0.0 or np.abs(u).max() == 0.0:
        raise ValueError("global-phase comparison is undefined for a zero matrix")
    k = np.unravel_index(np.argmax(np.abs(v)), v.shape)
    ratio = u[k] / v[k]
    if abs(ratio) < tol:
        return False, 0.0
    phase = float(np.angle(ratio))
    ok = bool(np.abs(u - np.exp(1j * phase) * v).max() < tol)
    return ok, phase
