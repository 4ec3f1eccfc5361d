"""Named identity-check suites behind the ``verify`` CLI command.

Each suite re-derives a family of operator identities numerically and
reports the worst residual per identity together with the tolerance it
must meet. Suites are deterministic (fixed seeds for randomized checks).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import cvgates, fockspace, qubit
from .gridsim import GaussianSpec, Grid1D, apply_transform, sample_gaussian
from .linalg import matrix_exponential


@dataclass(frozen=True)
class CheckResult:
    name: str
    residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.residual < self.tolerance

    def as_dict(self) -> dict:
        return {
            "residual": self.residual,
            "tolerance": self.tolerance,
            "passed": self.passed,
        }


def _phase_aligned_residual(u: np.ndarray, v: np.ndarray) -> float:
    k = np.unravel_index(np.argmax(np.abs(v)), v.shape)
    phase = u[k] / v[k]
    phase /= abs(phase)
    return float(np.abs(u - phase * v).max())


def verify_qubit_hamiltonians() -> list[CheckResult]:
    """Interaction generators reproduce the three qubit circuits."""
    checks = []
    gen, angle = qubit.hamiltonian_generator(qubit.Scheme.CNOT)
    checks.append(
        CheckResult(
            "cnot_generator_idempotent",
            float(np.abs(gen @ gen - gen).max()),
            1e-12,
        )
    )
    checks.append(
        CheckResult(
            "exp_cnot_generator",
            float(
                np.abs(
                    matrix_exponential(gen, 1j * angle) - qubit.build_unitary(qubit.Scheme.CNOT)
                ).max()
            ),
            1e-10,
        )
    )
    gen, angle = qubit.hamiltonian_generator(qubit.Scheme.DCNOT)
    checks.append(
        CheckResult(
            "dcnot_generator_cubic",
            float(np.abs(gen @ gen @ gen - gen).max()),
            1e-12,
        )
    )
    checks.append(
        CheckResult(
            "exp_dcnot_generator",
            float(
                np.abs(
                    matrix_exponential(gen, 1j * angle) - qubit.build_unitary(qubit.Scheme.DCNOT)
                ).max()
            ),
            1e-10,
        )
    )
    gen, angle = qubit.hamiltonian_generator(qubit.Scheme.SWAP)
    checks.append(
        CheckResult(
            "exp_exchange_generator_vs_swap",
            _phase_aligned_residual(
                matrix_exponential(gen, 1j * angle), qubit.build_unitary(qubit.Scheme.SWAP)
            ),
            1e-10,
        )
    )
    return checks


def verify_pulse_sequences() -> list[CheckResult]:
    """Pulse compilations reach the circuit unitaries up to global phase."""
    checks = []
    for scheme in (qubit.Scheme.CNOT, qubit.Scheme.DCNOT):
        composed = qubit.compose_pulses(qubit.pulse_sequence(scheme))
        checks.append(
            CheckResult(
                f"pulse_sequence_{scheme.value}",
                _phase_aligned_residual(composed, qubit.build_unitary(scheme)),
                1e-10,
            )
        )
    return checks


def verify_ozawa() -> list[CheckResult]:
    """Single-generator coefficients and their closed-form re-exponentiation."""
    checks = []
    base = np.pi / (3 * np.sqrt(3.0))
    for lam in (1.0, 2.0):
        params = cvgates.hamiltonian_params(cvgates.csm_transform(lam))
        resid = max(
            abs(params.u - base),
            abs(params.v + 2 * base / lam),
            abs(params.w - 2 * base * lam),
        )
        checks.append(CheckResult(f"csm_coefficients_lam_{lam:g}", float(resid), 1e-10))
        params = cvgates.hamiltonian_params(cvgates.ssm_transform(lam, 0))
        resid = max(
            abs(params.u),
            abs(params.v + np.pi / (2 * lam)),
            abs(params.w - np.pi * lam / 2),
        )
        checks.append(CheckResult(f"ssm_coefficients_lam_{lam:g}", float(resid), 1e-10))
    rng = np.random.default_rng(2024)
    worst = 0.0
    for _ in range(100):
        u = rng.uniform(-2, 2)
        v = rng.uniform(0.1, 2) * (1 if rng.random() < 0.5 else -1)
        dd = rng.uniform(0.1, np.pi - 0.1)
        source = cvgates.HamiltonianParams(u, v, -(u * u + dd * dd) / v)
        target = source.transform()
        again = cvgates.hamiltonian_params(target).transform()
        worst = max(worst, np.abs(again.matrix - target.matrix).max())
    checks.append(CheckResult("reexponentiation_round_trip", float(worst), 1e-10))
    return checks


def verify_appendix_b() -> list[CheckResult]:
    """Normal-mode structure of the parity-swap generator, plus its
    truncated-basis quarter-turn against the substitution engine."""
    checks = []
    comm_resid = 0.0
    recon_resid = 0.0
    for lam in (0.5, 1.0, 3.0):
        modes = cvgates.ssm_normal_modes(lam)
        comm_resid = max(
            comm_resid,
            abs(cvgates.linear_commutator(modes["X"], modes["PX"]) - 1j),
            abs(cvgates.linear_commutator(modes["Y"], modes["PY"]) - 1j),
            abs(cvgates.linear_commutator(modes["X"], modes["PY"])),
            abs(cvgates.linear_commutator(modes["Y"], modes["PX"])),
        )
        q = 2 * (np.outer(modes["X"], modes["X"]) + np.outer(modes["PX"], modes["PX"]))
        recon_resid = max(
            recon_resid,
            np.abs(q - cvgates.ssm_parity_quadratic_form(lam).matrix).max(),
        )
    checks.append(CheckResult("normal_mode_commutators", float(comm_resid), 1e-12))
    checks.append(CheckResult("normal_mode_reconstruction", float(recon_resid), 1e-12))

    lam = 1.5
    grid = Grid1D.default(512)
    psi = sample_gaussian(GaussianSpec(0.0, 0.6), grid)
    phi = sample_gaussian(GaussianSpec(0.0, 0.9), grid)
    evolved = fockspace.evolve_quadratic_fock(
        cvgates.ssm_parity_quadratic_form(lam), np.pi / 2, psi, phi, 24
    )
    target = apply_transform(cvgates.ssm_transform(lam, 1), psi, phi)
    checks.append(
        CheckResult(
            "fock_quarter_turn_vs_substitution",
            evolved.l2_distance(target, align_phase=True),
            1e-4,
        )
    )
    return checks


def verify_parity() -> list[CheckResult]:
    """Basis-expansion parity against direct sample reflection."""
    grid = Grid1D.default()
    wf = sample_gaussian(GaussianSpec(0.7, 1.0), grid)
    reflected = fockspace.parity_via_fock(wf, 48)
    checks = [
        CheckResult(
            "offset_gaussian_reflection",
            reflected.l2_distance(wf.reflected()),
            1e-6,
        ),
        CheckResult(
            "parity_involution",
            fockspace.parity_via_fock(reflected, 48).l2_distance(wf),
            2e-6,
        ),
    ]
    return checks


SUITES = {
    "qubit-hamiltonians": verify_qubit_hamiltonians,
    "pulse-sequences": verify_pulse_sequences,
    "ozawa": verify_ozawa,
    "appendix-b": verify_appendix_b,
    "parity": verify_parity,
}


def run_suites(names) -> dict[str, list[CheckResult]]:
    return {name: SUITES[name]() for name in names}
