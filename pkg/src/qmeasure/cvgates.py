"""Coordinate-substitution algebra for two-mode continuous-variable circuits.

Every gate considered here acts on a product wavefunction f(x)g(y) by a
linear substitution of the coordinates,

    U f(x) g(y) = sqrt(|det|) * f(a*x + b*y) g(c*x + d*y),

so a circuit is fully described by the real 2x2 matrix [[a, b], [c, d]].
Composition follows application order: if M1 acts first and M2 second, the
combined substitution matrix is M1 @ M2.

The module provides the gate set (coordinate shears, parities, rotation,
two-mode squeeze, single-mode squeezes), sequence composition, and solvers
that re-express an arbitrary |det| = 1 transform in three gate families
plus the inverse problem of finding a single bilinear generator.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

ANGLE_TOL = 1e-10
DET_TOL = 1e-12


class NotDecomposableError(Exception):
    """The target transform is outside the range of the requested gate family."""


class UnsupportedRegimeError(Exception):
    """Single-generator inversion only covers elliptic targets (|trace| < 2)."""

    def __init__(self, message: str, trace: float):
        super().__init__(message)
        self.trace = trace


def normalize_angle(theta: float) -> float:
    """Reduce an angle to the canonical branch (-pi, pi]."""
    t = math.fmod(theta, 2 * math.pi)
    if t <= -math.pi:
        t += 2 * math.pi
    elif t > math.pi:
        t -= 2 * math.pi
    return t


@dataclass(frozen=True)
class CoordTransform:
    """Real 2x2 coordinate-substitution matrix with nonzero determinant."""

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        if not all(map(math.isfinite, (self.a, self.b, self.c, self.d))):
            raise ValueError("transform entries must be finite")
        if self.det == 0.0:
            raise ValueError("transform is singular (det = 0)")

    @property
    def det(self) -> float:
        return self.a * self.d - self.b * self.c

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]], dtype=float)

    @classmethod
    def from_matrix(cls, m) -> "CoordTransform":
        m = np.asarray(m, dtype=float)
        return cls(float(m[0, 0]), float(m[0, 1]), float(m[1, 0]), float(m[1, 1]))

    def is_circuit_unitary(self, tol: float = DET_TOL) -> bool:
        """Unit-modulus determinant, the norm-preserving case."""
        return abs(abs(self.det) - 1.0) < tol

    def require_circuit_unitary(self, tol: float = DET_TOL):
        if not self.is_circuit_unitary(tol):
            raise ValueError(
                f"transform must satisfy |ad - bc| = 1, got det = {self.det!r}"
            )

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.a, self.b, self.c, self.d)


class GateKind(enum.Enum):
    VXPY = "vxpy"                 # f(x)g(y) -> f(x) g(y - alpha*x)
    VYPX = "vypx"                 # f(x)g(y) -> f(x - beta*y) g(y)
    PARITY_X = "parity_x"         # f(x) -> f(-x)
    PARITY_Y = "parity_y"         # g(y) -> g(-y)
    ROTATE = "rotate"             # beam-splitter style mixing of x and y
    TWO_MODE_SQUEEZE = "two_mode_squeeze"
    SQUEEZE_X = "squeeze_x"       # f(x) -> e^{r/2} f(e^r x)
    SQUEEZE_Y = "squeeze_y"


_PARAMETRIC = {
    GateKind.VXPY,
    GateKind.VYPX,
    GateKind.ROTATE,
    GateKind.TWO_MODE_SQUEEZE,
    GateKind.SQUEEZE_X,
    GateKind.SQUEEZE_Y,
}


@dataclass(frozen=True)
class CVGate:
    kind: GateKind
    parameter: float = 0.0

    def __post_init__(self):
        if not math.isfinite(self.parameter):
            raise ValueError("gate parameter must be finite")


def vxpy(alpha: float) -> CVGate:
    return CVGate(GateKind.VXPY, float(alpha))


def vypx(beta: float) -> CVGate:
    return CVGate(GateKind.VYPX, float(beta))


def parity_x() -> CVGate:
    return CVGate(GateKind.PARITY_X)


def parity_y() -> CVGate:
    return CVGate(GateKind.PARITY_Y)


def rotate(theta: float) -> CVGate:
    return CVGate(GateKind.ROTATE, float(theta))


def two_mode_squeeze(r: float) -> CVGate:
    return CVGate(GateKind.TWO_MODE_SQUEEZE, float(r))


def squeeze_x(r: float) -> CVGate:
    return CVGate(GateKind.SQUEEZE_X, float(r))


def squeeze_y(r: float) -> CVGate:
    return CVGate(GateKind.SQUEEZE_Y, float(r))


def gate_matrix(gate: CVGate) -> np.ndarray:
    """Substitution matrix of a single gate."""
    t = gate.parameter
    if gate.kind is GateKind.VXPY:
        return np.array([[1.0, 0.0], [-t, 1.0]])
    if gate.kind is GateKind.VYPX:
        return np.array([[1.0, -t], [0.0, 1.0]])
    if gate.kind is GateKind.PARITY_X:
        return np.diag([-1.0, 1.0])
    if gate.kind is GateKind.PARITY_Y:
        return np.diag([1.0, -1.0])
    if gate.kind is GateKind.ROTATE:
        c, s = math.cos(t), math.sin(t)
        return np.array([[c, s], [-s, c]])
    if gate.kind is GateKind.TWO_MODE_SQUEEZE:
        ch, sh = math.cosh(t), math.sinh(t)
        return np.array([[ch, sh], [sh, ch]])
    if gate.kind is GateKind.SQUEEZE_X:
        return np.diag([math.exp(t), 1.0])
    if gate.kind is GateKind.SQUEEZE_Y:
        return np.diag([1.0, math.exp(t)])
    raise ValueError(f"unknown gate kind {gate.kind!r}")


def compose(sequence) -> CoordTransform:
    """Total transform of a gate list, first entry applied first."""
    gates = list(sequence)
    if not gates:
        raise ValueError("cannot compose an empty gate sequence")
    m = np.eye(2)
    for gate in gates:
        m = m @ gate_matrix(gate)
    return CoordTransform.from_matrix(m)


def sequence_to_json(sequence) -> list[dict]:
    """Wire format: one object per gate, name string plus parameter array."""
    out = []
    for gate in sequence:
        params = [gate.parameter] if gate.kind in _PARAMETRIC else []
        out.append({"gate": gate.kind.value, "params": params})
    return out


def sequence_from_json(items) -> list[CVGate]:
    gates = []
    for item in items:
        kind = GateKind(item["gate"])
        params = item.get("params", [])
        if kind in _PARAMETRIC:
            if len(params) != 1:
                raise ValueError(f"gate {kind.value!r} takes exactly one parameter")
            gates.append(CVGate(kind, float(params[0])))
        else:
            if params:
                raise ValueError(f"gate {kind.value!r} takes no parameters")
            gates.append(CVGate(kind))
    return gates


# ---------------------------------------------------------------------------
# Measurement-circuit presets
# ---------------------------------------------------------------------------

def vnm_transform(lam: float) -> CoordTransform:
    """Position readout that shifts the probe by lam times the system coordinate."""
    _check_scaling(lam)
    return CoordTransform(1.0, 0.0, -lam, 1.0)


def csm_transform(lam: float) -> CoordTransform:
    """Contractive-state readout; the post-state follows the outcome."""
    _check_scaling(lam)
    return CoordTransform(0.0, 1.0 / lam, -lam, 1.0)


def ssm_transform(lam: float, parity: int = 0) -> CoordTransform:
    """State-swapping readout; the post-state is outcome independent."""
    _check_scaling(lam)
    _check_parity(parity)
    return CoordTransform(0.0, 1.0 / lam, lam if parity == 1 else -lam, 0.0)


def _check_scaling(lam: float):
    if not (lam > 0 and math.isfinite(lam)):
        raise ValueError(f"scaling parameter must be positive and finite, got {lam!r}")


def _check_parity(parity: int):
    if parity not in (0, 1):
        raise ValueError(f"parity flag must be 0 or 1, got {parity!r}")


# ---------------------------------------------------------------------------
# Decomposers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class VonNeumannDecomposition:
    """Shear-gate factorization: Vxpy(gamma) Vypx(beta) Vxpy(alpha) Parity^p."""

    parity: int
    alpha: float
    beta: float
    gamma: float

    def sequence(self) -> list[CVGate]:
        seq = [parity_y()] if self.parity else []
        seq += [vxpy(self.alpha), vypx(self.beta), vxpy(self.gamma)]
        return seq


@dataclass(frozen=True)
class TwoModeDecomposition:
    """Rotation / two-mode-squeeze / rotation factorization."""

    r: float
    theta1: float
    theta2: float
    parity: int

    def sequence(self) -> list[CVGate]:
        seq = [parity_y()] if self.parity else []
        seq += [rotate(self.theta1), two_mode_squeeze(-self.r), rotate(self.theta2)]
        return seq


@dataclass(frozen=True)
class SingleModeDecomposition:
    """Rotation / opposed single-mode squeezes / rotation factorization."""

    r: float
    theta1: float
    theta2: float
    parity: int

    def sequence(self) -> list[CVGate]:
        seq = [parity_y()] if self.parity else []
        seq += [
            rotate(self.theta1),
            squeeze_x(-self.r),
            squeeze_y(self.r),
            rotate(self.theta2),
        ]
        return seq


def decompose_von_neumann(target: CoordTransform) -> VonNeumannDecomposition:
    """Solve for the three-shear factorization of a |det| = 1 transform.

    Targets with b = 0 are only reachable when a = 1; anything else in that
    family raises NotDecomposableError rather than silently substituting a
    different gate set.
    """
    target.require_circuit_unitary(1e-9)
    a, b, c, d = target.as_tuple()
    par = 0 if target.det > 0 else 1
    sign = -1.0 if par else 1.0
    if abs(b) > DET_TOL:
        beta = -b
        gamma = (a - 1.0) / beta
        alpha = (sign * d - 1.0) / beta
        resid = abs(c - (-sign) * (alpha + gamma + alpha * beta * gamma))
        if resid > ANGLE_TOL:
            raise NotDecomposableError(
                f"shear-equation residual {resid:.3e} exceeds tolerance"
            )
        return VonNeumannDecomposition(par, alpha, beta, gamma)
    if abs(a - 1.0) <= ANGLE_TOL:
        return VonNeumannDecomposition(par, 0.0, 0.0, -sign * c)
    raise NotDecomposableError(
        f"no three-shear factorization exists for b = 0 with a = {a!r} (need a = 1)"
    )


def decompose_two_mode(target: CoordTransform) -> TwoModeDecomposition:
    """Invert the rotation/squeeze/rotation parameterization.

    With p fixed by the determinant sign and Sigma/Delta the sum and
    difference of the two rotation angles, the target entries split into

        cosh(r) cos(Sigma) = (a + s*d)/2      cosh(r) sin(Sigma) = (b - s*c)/2
        sinh(r) sin(Delta) = (s*d - a)/2      sinh(r) cos(Delta) = (-s*c - b)/2

    with s = (-1)^p. The squeeze amplitude is taken non-negative; the
    branch ambiguity (r, Delta) vs (-r, Delta + pi) is resolved that way.
    """
    target.require_circuit_unitary(1e-9)
    a, b, c, d = target.as_tuple()
    par = 0 if target.det > 0 else 1
    s = -1.0 if par else 1.0
    ch_cos = (a + s * d) / 2.0
    ch_sin = (b - s * c) / 2.0
    sh_sin = (s * d - a) / 2.0
    sh_cos = (-s * c - b) / 2.0
    ch = math.hypot(ch_cos, ch_sin)
    sh = math.hypot(sh_cos, sh_sin)
    resid = abs(ch * ch - sh * sh - 1.0)
    if resid > 1e-8:
        raise NotDecomposableError(f"inconsistent target, residual {resid:.3e}")
    sigma = math.atan2(ch_sin, ch_cos)
    delta = math.atan2(sh_sin, sh_cos) if sh > 0.0 else 0.0
    r = math.asinh(sh)
    return TwoModeDecomposition(
        r=r,
        theta1=normalize_angle((sigma + delta) / 2.0),
        theta2=normalize_angle((sigma - delta) / 2.0),
        parity=par,
    )


def decompose_single_mode(target: CoordTransform) -> SingleModeDecomposition:
    """Single-mode-squeeze variant, a quarter-turn shift of the two-mode one."""
    two = decompose_two_mode(target)
    return SingleModeDecomposition(
        r=two.r,
        theta1=normalize_angle(two.theta1 - math.pi / 4),
        theta2=normalize_angle(two.theta2 + math.pi / 4),
        parity=two.parity,
    )


def ssm_alternative_sequence(lam: float, parity: int = 0) -> list[CVGate]:
    """Swap-scheme circuit that avoids squeezing the system mode:
    SqueezeY(ln 1/lam) Rotate(pi/2) SqueezeY(ln lam) Parity^p, listed in
    application order."""
    _check_scaling(lam)
    _check_parity(parity)
    seq = [parity_y()] if parity else []
    seq += [
        squeeze_y(math.log(lam)),
        rotate(math.pi / 2),
        squeeze_y(-math.log(lam)),
    ]
    return seq


# ---------------------------------------------------------------------------
# Single-generator inversion
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HamiltonianParams:
    """Coefficients (u, v, w) of the bilinear generator
    u*(x p_x - y p_y) + v*(y p_x) + w*(x p_y) whose flow reaches the target
    in unit time. Only the elliptic regime u^2 + v*w < 0 is representable.
    """

    u: float
    v: float
    w: float

    def __post_init__(self):
        if self.u * self.u + self.v * self.w >= 0.0:
            raise ValueError("coefficients must satisfy u^2 + v*w < 0")

    @property
    def angle(self) -> float:
        """Elliptic rotation rate D = sqrt(-(u^2 + v*w))."""
        return math.sqrt(-(self.u * self.u + self.v * self.w))

    def transform(self) -> CoordTransform:
        """Closed-form matrix exp: cos(D) I - sin(D)/D * [[u, v], [w, -u]]."""
        dd = self.angle
        k = math.sin(dd) / dd
        return CoordTransform(
            math.cos(dd) - self.u * k,
            -self.v * k,
            -self.w * k,
            math.cos(dd) + self.u * k,
        )


def hamiltonian_params(target: CoordTransform) -> HamiltonianParams:
    """Recover (u, v, w) from a det = +1 elliptic target.

    D = arccos((a + d)/2) fixes the rotation rate, after which the three
    coefficients follow linearly. Hyperbolic and parabolic targets
    (|a + d| >= 2) have no representation in this family and are rejected.
    """
    a, b, c, d = target.as_tuple()
    if abs(target.det - 1.0) > 1e-10:
        raise ValueError(f"generator inversion needs det = +1, got {target.det!r}")
    trace = a + d
    if abs(trace) >= 2.0:
        raise UnsupportedRegimeError(
            f"target with trace {trace!r} is outside the elliptic regime |a + d| < 2",
            trace=trace,
        )
    dd = math.acos(trace / 2.0)
    k = math.sin(dd) / dd
    return HamiltonianParams(u=(math.cos(dd) - a) / k, v=-b / k, w=-c / k)


# ---------------------------------------------------------------------------
# Quadratic form of the parity-included swap generator
# ---------------------------------------------------------------------------

QUAD_VARS = ("x", "px", "y", "py")

# Symplectic pairing for linear forms over (x, px, y, py): [u.z, v.z] = i u^T O v.
_SYMPLECTIC = np.array(
    [
        [0.0, 1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [0.0, 0.0, -1.0, 0.0],
    ]
)


@dataclass(frozen=True)
class QuadraticForm:
    """Operator (1/2) z^T Q z + const over z = (x, p_x, y, p_y), Q symmetric."""

    matrix: np.ndarray
    constant: float = 0.0

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        if m.shape != (4, 4):
            raise ValueError("quadratic form needs a 4x4 coefficient matrix")
        if np.abs(m - m.T).max() > 1e-12:
            raise ValueError("coefficient matrix must be symmetric")
        object.__setattr__(self, "matrix", m)


def ssm_parity_quadratic_form(lam: float) -> QuadraticForm:
    """Quadratic generator of the parity-included swap circuit.

    Represents (lam x^2 + p_x^2/lam)/2 + (y^2/lam + lam p_y^2)/2
    - (x y + p_x p_y) - 1/2. Its unit-time flow at angle pi/2 swaps the
    modes while rescaling them by lam and 1/lam.
    """
    _check_scaling(lam)
    q = np.zeros((4, 4))
    q[0, 0] = lam
    q[1, 1] = 1.0 / lam
    q[2, 2] = 1.0 / lam
    q[3, 3] = lam
    q[0, 2] = q[2, 0] = -1.0
    q[1, 3] = q[3, 1] = -1.0
    return QuadraticForm(matrix=q, constant=-0.5)


def ssm_normal_modes(lam: float) -> dict[str, np.ndarray]:
    """Normal-mode linear forms diagonalizing the parity-swap generator.

    Returns coefficient vectors over (x, p_x, y, p_y). In these variables
    the generator is X^2 + P_X^2 - 1/2, with the (Y, P_Y) pair decoupled.
    """
    _check_scaling(lam)
    s = math.sqrt(lam / 2.0)
    t = 1.0 / math.sqrt(2.0 * lam)
    return {
        "X": np.array([s, 0.0, -t, 0.0]),
        "PX": np.array([0.0, t, 0.0, -s]),
        "Y": np.array([s, 0.0, t, 0.0]),
        "PY": np.array([0.0, t, 0.0, s]),
    }


def linear_commutator(u, v) -> complex:
    """Commutator of two linear forms u.z and v.z, equal to i * u^T O v."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    return 1j * float(u @ _SYMPLECTIC @ v)
