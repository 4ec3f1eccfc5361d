"""Two-outcome indirect measurements on a qubit pair.

A measured system qubit interacts with a probe qubit through one of three
entangling circuits (controlled-NOT, double controlled-NOT, or state swap);
the probe is then read out in the sigma-z basis. This module builds the
4x4 circuit unitaries, extracts the per-outcome measurement operators, and
exposes the interaction generators and pulse-level compilations of each
circuit.

Basis conventions: |+> and |-> are the sigma-z eigenstates with eigenvalues
+1 and -1, stored as (1,0) and (0,1). Joint kets are system-major, i.e.
index 2*s + p over s, p in {0: +, 1: -}.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .linalg import (
    DEFAULT_TOL,
    ID2,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    equal_up_to_global_phase,
    matrix_exponential,
    tensor_product,
)

# Outcome probabilities below this are treated as exactly zero; the
# conditional post-state is then undefined and reported as absent.
ZERO_PROBABILITY = 1e-12

HADAMARD = (PAULI_X + PAULI_Z) / np.sqrt(2.0)

# Heisenberg exchange generator sigma.sigma between the two qubits.
_EXCHANGE = (
    tensor_product(PAULI_X, PAULI_X)
    + tensor_product(PAULI_Y, PAULI_Y)
    + tensor_product(PAULI_Z, PAULI_Z)
)


class Scheme(enum.Enum):
    """The three probe-coupling circuits."""

    CNOT = "cnot"
    DCNOT = "dcnot"
    SWAP = "swap"


@dataclass(frozen=True)
class QubitState:
    """Normalized single-qubit state a|+> + b|->."""

    amp_plus: complex
    amp_minus: complex

    def __post_init__(self):
        norm = abs(self.amp_plus) ** 2 + abs(self.amp_minus) ** 2
        if abs(norm - 1.0) > DEFAULT_TOL:
            raise ValueError(f"state is not normalized: |a|^2+|b|^2 = {norm}")

    @classmethod
    def from_vector(cls, v) -> "QubitState":
        v = np.asarray(v, dtype=complex)
        n = np.linalg.norm(v)
        if n == 0:
            raise ValueError("cannot normalize the zero vector")
        return cls(complex(v[0] / n), complex(v[1] / n))

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.amp_plus, self.amp_minus], dtype=complex)

    def same_ray(self, other: "QubitState", tol: float = DEFAULT_TOL) -> bool:
        """Phase-insensitive state equality."""
        overlap = abs(np.vdot(self.vector, other.vector))
        return abs(overlap - 1.0) < tol


@dataclass(frozen=True)
class KrausPair:
    """Measurement operators for the two probe outcomes."""

    m_plus: np.ndarray
    m_minus: np.ndarray

    def completeness_residual(self) -> float:
        total = (
            self.m_plus.conj().T @ self.m_plus
            + self.m_minus.conj().T @ self.m_minus
        )
        return float(np.abs(total - ID2).max())

    def probabilities(self, system: QubitState) -> tuple[float, float]:
        v = system.vector
        return (
            float(np.linalg.norm(self.m_plus @ v) ** 2),
            float(np.linalg.norm(self.m_minus @ v) ** 2),
        )


@dataclass(frozen=True)
class MeasurementResult:
    prob_plus: float
    prob_minus: float
    post_plus: QubitState | None
    post_minus: QubitState | None


def build_unitary(scheme: Scheme) -> np.ndarray:
    """4x4 circuit unitary for the given scheme."""
    cnot_sp = tensor_product((ID2 + PAULI_Z) / 2, ID2) + tensor_product(
        (ID2 - PAULI_Z) / 2, PAULI_X
    )
    if scheme is Scheme.CNOT:
        return cnot_sp
    if scheme is Scheme.DCNOT:
        cnot_ps = tensor_product(ID2, (ID2 + PAULI_Z) / 2) + tensor_product(
            PAULI_X, (ID2 - PAULI_Z) / 2
        )
        # Probe-controlled gate acts first.
        return cnot_sp @ cnot_ps
    if scheme is Scheme.SWAP:
        u = np.zeros((4, 4), dtype=complex)
        for s in range(2):
            for p in range(2):
                u[2 * p + s, 2 * s + p] = 1.0
        return u
    raise ValueError(f"unknown scheme {scheme!r}")


def measure(scheme: Scheme, system: QubitState, probe: QubitState) -> MeasurementResult:
    """Outcome probabilities and conditional post-states of the system.

    The joint state is evolved through the circuit and the probe is
    projected onto |+> and |->; each surviving branch is renormalized.
    """
    u = build_unitary(scheme)
    out = u @ np.kron(system.vector, probe.vector)
    result = {}
    for label, idx in (("plus", [0, 2]), ("minus", [1, 3])):
        branch = out[idx]
        prob = float(np.linalg.norm(branch) ** 2)
        post = None
        if prob > ZERO_PROBABILITY:
            post = QubitState.from_vector(branch)
        result[label] = (prob, post)
    return MeasurementResult(
        prob_plus=result["plus"][0],
        prob_minus=result["minus"][0],
        post_plus=result["plus"][1],
        post_minus=result["minus"][1],
    )


def kraus_operators(scheme: Scheme, probe: QubitState) -> KrausPair:
    """Measurement operators M_m = (I (x) <m|) U (I (x) |probe>)."""
    u = build_unitary(scheme).reshape(2, 2, 2, 2)  # [s_out, p_out, s_in, p_in]
    phi = probe.vector
    m = np.einsum("sqtp,p->qst", u, phi)  # [outcome, s_out, s_in]
    return KrausPair(m_plus=m[0], m_minus=m[1])


def hamiltonian_generator(scheme: Scheme) -> tuple[np.ndarray, float]:
    """Hermitian generator G and angle t with exp(i*t*G) = circuit unitary.

    The identity is exact for CNOT and DCNOT; for SWAP it holds up to a
    global phase. The coupling strength and interaction time are folded
    into the single dimensionless angle.
    """
    if scheme is Scheme.CNOT:
        gen = tensor_product(ID2 - PAULI_Z, ID2 - PAULI_X) / 4
        return gen, float(np.pi)
    if scheme is Scheme.DCNOT:
        gen = (
            tensor_product(PAULI_Y, ID2 - PAULI_X - PAULI_Z)
            - tensor_product(ID2 - PAULI_X - PAULI_Z, PAULI_Y)
        ) / (2 * np.sqrt(3.0))
        return gen, float(2 * np.pi / 3)
    if scheme is Scheme.SWAP:
        return _EXCHANGE, float(np.pi / 4)
    raise ValueError(f"unknown scheme {scheme!r}")


def sqrt_swap(alpha: float) -> np.ndarray:
    """Fractional power of the swap circuit, exp(alpha * i*pi/4 * sigma.sigma)."""
    return matrix_exponential(_EXCHANGE, 1j * alpha * np.pi / 4)


class PulseKind(enum.Enum):
    Z_ROT_SYSTEM = "z_rot_system"
    Z_ROT_PROBE = "z_rot_probe"
    HADAMARD_SYSTEM = "hadamard_system"
    HADAMARD_PROBE = "hadamard_probe"
    SWAP_POWER = "swap_power"


@dataclass(frozen=True)
class Pulse:
    """One step of a pulse-level compilation; parameter units are radians
    for rotations and a dimensionless exponent for swap powers."""

    kind: PulseKind
    parameter: float = 0.0

    def matrix(self) -> np.ndarray:
        if self.kind is PulseKind.Z_ROT_SYSTEM:
            return matrix_exponential(tensor_product(PAULI_Z, ID2), 1j * self.parameter)
        if self.kind is PulseKind.Z_ROT_PROBE:
            return matrix_exponential(tensor_product(ID2, PAULI_Z), 1j * self.parameter)
        if self.kind is PulseKind.HADAMARD_SYSTEM:
            return tensor_product(HADAMARD, ID2)
        if self.kind is PulseKind.HADAMARD_PROBE:
            return tensor_product(ID2, HADAMARD)
        if self.kind is PulseKind.SWAP_POWER:
            return sqrt_swap(self.parameter)
        raise ValueError(f"unknown pulse kind {self.kind!r}")


def pulse_sequence(scheme: Scheme) -> list[Pulse]:
    """Compile CNOT or DCNOT into z rotations, Hadamards and swap powers.

    Pulses are listed in application order (first entry acts first) and
    reproduce the circuit unitary up to a global phase. No pulse-level
    compilation is available for the SWAP circuit itself.
    """
    if scheme is Scheme.CNOT:
        return [
            Pulse(PulseKind.HADAMARD_PROBE),
            Pulse(PulseKind.SWAP_POWER, 0.5),
            Pulse(PulseKind.Z_ROT_SYSTEM, np.pi / 2),
            Pulse(PulseKind.SWAP_POWER, 0.5),
            Pulse(PulseKind.Z_ROT_PROBE, -np.pi / 4),
            Pulse(PulseKind.Z_ROT_SYSTEM, np.pi / 4),
            Pulse(PulseKind.HADAMARD_PROBE),
        ]
    if scheme is Scheme.DCNOT:
        return [
            Pulse(PulseKind.HADAMARD_PROBE),
            Pulse(PulseKind.SWAP_POWER, -0.5),
            Pulse(PulseKind.Z_ROT_SYSTEM, np.pi / 2),
            Pulse(PulseKind.SWAP_POWER, 0.5),
            Pulse(PulseKind.Z_ROT_PROBE, -np.pi / 4),
            Pulse(PulseKind.Z_ROT_SYSTEM, np.pi / 4),
            Pulse(PulseKind.HADAMARD_SYSTEM),
        ]
    raise ValueError(f"no pulse sequence available for scheme {scheme!r}")


def compose_pulses(pulses) -> np.ndarray:
    """Total unitary of a pulse list; the empty list composes to identity."""
    u = np.eye(4, dtype=complex)
    for pulse in pulses:
        u = pulse.matrix() @ u
    return u


def pulse_sequence_matches(scheme: Scheme, tol: float = DEFAULT_TOL) -> tuple[bool, float]:
    """Convenience check: composed pulse sequence vs circuit unitary."""
    composed = compose_pulses(pulse_sequence(scheme))
    return equal_up_to_global_phase(composed, build_unitary(scheme), tol)
