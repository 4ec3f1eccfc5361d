"""Harmonic-oscillator (Fock) basis tools.

Grid states are expanded over the orthonormal Hermite functions of a unit
oscillator (hbar = 1, x = (a + a^dag)/sqrt(2)). That expansion turns the
wavefunction parity into a diagonal sign flip and lets quadratic
generators over (x, p_x, y, p_y) be exponentiated exactly as finite
Hermitian matrices on the truncated two-mode basis.
"""
from __future__ import annotations

import numpy as np

from .cvgates import QuadraticForm
from .gridsim import JointWaveFunction, WaveFunction

# Cost guard for the two-mode evolution (matrices of size n_fock^2).
MAX_FOCK = 64

PARITY_RESIDUAL_TOL = 1e-6
JOINT_RESIDUAL_TOL = 1e-5


class TruncationError(Exception):
    """The state is not representable in the requested number of basis states."""

    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = residual


def hermite_functions(x, n_max: int) -> np.ndarray:
    """Orthonormal oscillator eigenfunctions phi_0..phi_{n_max-1} at points x.

    Uses the stable three-term recurrence on the normalized functions.
    Returns an array of shape (len(x), n_max).
    """
    x = np.asarray(x, dtype=float)
    if n_max < 1:
        raise ValueError("need at least one basis function")
    out = np.empty((len(x), n_max))
    out[:, 0] = np.pi**-0.25 * np.exp(-(x**2) / 2)
    if n_max > 1:
        out[:, 1] = np.sqrt(2.0) * x * out[:, 0]
    for n in range(2, n_max):
        out[:, n] = np.sqrt(2.0 / n) * x * out[:, n - 1] - np.sqrt((n - 1) / n) * out[:, n - 2]
    return out


def project_onto_basis(wf: WaveFunction, n_max: int) -> tuple[np.ndarray, float]:
    """Expansion coefficients of a grid state and the L2 norm left behind."""
    basis = hermite_functions(wf.grid.points, n_max)
    coeffs = basis.T @ (wf.grid.trapezoid_weights * wf.samples)
    captured = float(np.sum(np.abs(coeffs) ** 2))
    residual = max(wf.norm() ** 2 - captured, 0.0)
    return coeffs, np.sqrt(residual)


def parity_via_fock(wf: WaveFunction, n_fock: int) -> WaveFunction:
    """Reflect a wavefunction by flipping the sign of its odd basis modes.

    Equivalent to evolving a half turn of the oscillator phase, which
    multiplies mode n by (-1)^n. Raises TruncationError when the input is
    not captured by n_fock modes.
    """
    coeffs, residual = project_onto_basis(wf, n_fock)
    if residual > PARITY_RESIDUAL_TOL:
        raise TruncationError(
            f"projection residual {residual:.3e} exceeds {PARITY_RESIDUAL_TOL:g}; "
            f"raise n_fock above {n_fock}",
            residual=residual,
        )
    signs = (-1.0) ** np.arange(n_fock)
    basis = hermite_functions(wf.grid.points, n_fock)
    return WaveFunction(wf.grid, basis @ (signs * coeffs))


def ladder_operator(n: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, n)), 1).astype(complex)


def position_operator(n: int) -> np.ndarray:
    a = ladder_operator(n)
    return (a + a.conj().T) / np.sqrt(2.0)


def momentum_operator(n: int) -> np.ndarray:
    a = ladder_operator(n)
    return 1j * (a.conj().T - a) / np.sqrt(2.0)


def quadratic_generator_matrix(form: QuadraticForm, n_fock: int) -> np.ndarray:
    """Hermitian matrix of (1/2) z^T Q z + const on the two-mode Fock basis.

    Mode ordering is system-major: z = (x, p_x, y, p_y) maps to
    (X (x) I, P (x) I, I (x) X, I (x) P).
    """
    eye = np.eye(n_fock, dtype=complex)
    x = position_operator(n_fock)
    p = momentum_operator(n_fock)
    ops = [np.kron(x, eye), np.kron(p, eye), np.kron(eye, x), np.kron(eye, p)]
    dim = n_fock * n_fock
    h = form.constant * np.eye(dim, dtype=complex)
    q = form.matrix
    for i in range(4):
        for j in range(4):
            if q[i, j] != 0.0:
                h += 0.5 * q[i, j] * (ops[i] @ ops[j])
    return (h + h.conj().T) / 2


def evolve_quadratic_fock(
    form: QuadraticForm,
    angle: float,
    psi: WaveFunction,
    phi: WaveFunction,
    n_fock: int,
) -> JointWaveFunction:
    """Apply exp(-i * angle * H) to the product state psi(x) phi(y).

    H is the quadratic form assembled on the truncated two-mode basis and
    exponentiated spectrally; the evolved coefficients are resynthesized on
    the input grids. Raises TruncationError if the inputs are not captured
    by the basis and ValueError above the MAX_FOCK cost guard.
    """
    if n_fock > MAX_FOCK:
        raise ValueError(f"n_fock = {n_fock} exceeds the cost guard {MAX_FOCK}")
    c_sys, r_sys = project_onto_basis(psi, n_fock)
    c_probe, r_probe = project_onto_basis(phi, n_fock)
    captured = float(np.sum(np.abs(c_sys) ** 2) * np.sum(np.abs(c_probe) ** 2))
    residual = max(1.0 - captured, 0.0)
    if residual > JOINT_RESIDUAL_TOL:
        raise TruncationError(
            f"joint projection residual {residual:.3e} exceeds {JOINT_RESIDUAL_TOL:g}",
            residual=residual,
        )
    h = quadratic_generator_matrix(form, n_fock)
    w, v = np.linalg.eigh(h)
    u = (v * np.exp(-1j * angle * w)) @ v.conj().T
    evolved = (u @ np.outer(c_sys, c_probe).ravel()).reshape(n_fock, n_fock)
    basis_x = hermite_functions(psi.grid.points, n_fock)
    basis_y = hermite_functions(phi.grid.points, n_fock)
    samples = basis_x @ evolved @ basis_y.T
    return JointWaveFunction(psi.grid, phi.grid, samples)
