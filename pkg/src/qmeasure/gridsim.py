"""Grid-sampled wavefunction engine for the continuous-variable circuits.

States live on uniform 1-D grids as complex samples in units of
1/sqrt(length); a coordinate-substitution circuit turns a product state
into a joint two-mode state by resampling each factor at the substituted
arguments with cubic (Catmull-Rom) interpolation. Probe readout reduces
the joint state to an outcome density over the probe coordinate and to
conditional post-measurement states of the system.

Numerical policy: arguments that fall outside a factor's grid contribute
zero amplitude and are counted; the resulting probability-mass deficit is
tracked, and transforms that lose more than ``MAX_MASS_DEFICIT`` of the
norm raise GridLeakageError instead of silently denormalizing.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .cvgates import CoordTransform

DEFAULT_EXTENT = 16.0
DEFAULT_POINTS = 1024
MAX_POINTS = 4096
MAX_MASS_DEFICIT = 1e-3

# A sampled Gaussian must put at least this many grid steps under one
# standard deviation, and must decay to this fraction at the box edges.
MIN_STEPS_PER_WIDTH = 4
EDGE_DECAY = 1e-6


class GridSupportError(Exception):
    """The grid cannot represent the requested state (extent or resolution)."""


class GridLeakageError(Exception):
    """Too much probability mass mapped outside the grid box."""

    def __init__(self, message: str, deficit: float):
        super().__init__(message)
        self.deficit = deficit


@dataclass(frozen=True)
class Grid1D:
    x_min: float
    x_max: float
    n_points: int

    def __post_init__(self):
        if not self.x_min < self.x_max:
            raise ValueError("grid needs x_min < x_max")
        if self.n_points < 16:
            raise ValueError("grid needs at least 16 points")

    @property
    def spacing(self) -> float:
        return (self.x_max - self.x_min) / (self.n_points - 1)

    @cached_property
    def points(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.n_points)

    @cached_property
    def trapezoid_weights(self) -> np.ndarray:
        w = np.full(self.n_points, self.spacing)
        w[0] = w[-1] = self.spacing / 2
        return w

    @classmethod
    def default(cls, n_points: int = DEFAULT_POINTS) -> "Grid1D":
        return cls(-DEFAULT_EXTENT, DEFAULT_EXTENT, n_points)

    @classmethod
    def centered(cls, extent: float, n_points: int) -> "Grid1D":
        return cls(-extent, extent, n_points)


def _catmull_rom(samples: np.ndarray, grid: Grid1D, queries: np.ndarray):
    """Cubic interpolation at arbitrary points; outside the box -> 0.

    Returns (values, offgrid_mask). The two-cell border of the box falls
    back to zero as well, which is harmless for states that satisfy the
    edge-decay invariant.
    """
    t = (queries - grid.x_min) / grid.spacing
    i = np.floor(t).astype(np.int64)
    u = t - i
    ok = (i >= 1) & (i <= grid.n_points - 3)
    offgrid = (t < 0) | (t > grid.n_points - 1)
    ic = np.clip(i, 1, grid.n_points - 3)
    f0 = samples[ic - 1]
    f1 = samples[ic]
    f2 = samples[ic + 1]
    f3 = samples[ic + 2]
    u2 = u * u
    u3 = u2 * u
    vals = 0.5 * (
        (-u3 + 2 * u2 - u) * f0
        + (3 * u3 - 5 * u2 + 2) * f1
        + (-3 * u3 + 4 * u2 + u) * f2
        + (u3 - u2) * f3
    )
    return np.where(ok, vals, 0.0), offgrid


class WaveFunction:
    """Complex samples of a one-mode state on a uniform grid."""

    def __init__(self, grid: Grid1D, samples):
        samples = np.asarray(samples, dtype=complex)
        if samples.shape != (grid.n_points,):
            raise ValueError(
                f"samples shape {samples.shape} does not match grid ({grid.n_points},)"
            )
        self.grid = grid
        self.samples = samples

    def norm(self) -> float:
        return float(
            np.sqrt(np.sum(self.grid.trapezoid_weights * np.abs(self.samples) ** 2))
        )

    def is_normalized(self, tol: float = 1e-6) -> bool:
        return abs(self.norm() - 1.0) < tol

    def normalized(self) -> "WaveFunction":
        n = self.norm()
        if n == 0.0:
            raise ValueError("cannot normalize the zero wavefunction")
        return WaveFunction(self.grid, self.samples / n)

    def boundary_decay_ok(self, ratio: float = EDGE_DECAY) -> bool:
        peak = np.abs(self.samples).max()
        if peak == 0.0:
            return False
        edge = max(abs(self.samples[0]), abs(self.samples[-1]))
        return edge < ratio * peak

    def probability_density(self) -> np.ndarray:
        return np.abs(self.samples) ** 2

    def mean_position(self) -> float:
        w = self.grid.trapezoid_weights
        return float(np.sum(w * self.grid.points * self.probability_density()))

    def position_variance(self) -> float:
        w = self.grid.trapezoid_weights
        m = self.mean_position()
        return float(np.sum(w * (self.grid.points - m) ** 2 * self.probability_density()))

    def at(self, queries) -> np.ndarray:
        """Interpolated amplitudes at arbitrary coordinates."""
        vals, _ = _catmull_rom(self.samples, self.grid, np.asarray(queries, dtype=float))
        return vals

    def reflected(self) -> "WaveFunction":
        """Samples of psi(-x) on the same (symmetric) grid."""
        if abs(self.grid.x_min + self.grid.x_max) > 1e-12:
            raise ValueError("reflection needs a grid symmetric about zero")
        return WaveFunction(self.grid, self.samples[::-1].copy())

    def l2_distance(self, other: "WaveFunction", align_phase: bool = False) -> float:
        if other.grid != self.grid:
            raise ValueError("wavefunctions live on different grids")
        a, b = self.samples, other.samples
        if align_phase:
            k = np.argmax(np.abs(b))
            if abs(a[k]) > 0 and abs(b[k]) > 0:
                a = a * np.exp(-1j * np.angle(a[k] / b[k]))
        return float(np.sqrt(np.sum(self.grid.trapezoid_weights * np.abs(a - b) ** 2)))


@dataclass(frozen=True)
class GaussianSpec:
    """Gaussian state: |psi|^2 has the given center and standard deviation,
    with an optional plane-wave momentum factor."""

    center: float = 0.0
    width: float = 1.0
    momentum: float = 0.0

    def __post_init__(self):
        if not (self.width > 0 and math.isfinite(self.width)):
            raise ValueError(f"width must be positive, got {self.width!r}")

    def amplitude(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        envelope = (2 * np.pi * self.width**2) ** -0.25 * np.exp(
            -((x - self.center) ** 2) / (4 * self.width**2)
        )
        return envelope * np.exp(1j * self.momentum * x)

    def density(self, x) -> np.ndarray:
        return np.abs(self.amplitude(x)) ** 2


def sample_gaussian(spec: GaussianSpec, grid: Grid1D) -> WaveFunction:
    """Sample a Gaussian onto a grid, renormalized on that grid.

    Raises GridSupportError when the grid is too narrow (edge decay) or
    too coarse (fewer than MIN_STEPS_PER_WIDTH steps per standard
    deviation, or an unresolvable momentum phase).
    """
    if spec.width < MIN_STEPS_PER_WIDTH * grid.spacing:
        raise GridSupportError(
            f"grid spacing {grid.spacing:.4g} too coarse for width {spec.width:.4g}"
        )
    if abs(spec.momentum) * grid.spacing > np.pi / 2:
        raise GridSupportError(
            f"grid spacing {grid.spacing:.4g} cannot resolve momentum {spec.momentum:.4g}"
        )
    wf = WaveFunction(grid, spec.amplitude(grid.points))
    if not wf.boundary_decay_ok():
        raise GridSupportError(
            f"grid [{grid.x_min}, {grid.x_max}] too narrow for a Gaussian at "
            f"{spec.center} with width {spec.width}"
        )
    return wf.normalized()


class JointWaveFunction:
    """Two-mode state on the product of a system and a probe grid."""

    def __init__(
        self,
        grid_x: Grid1D,
        grid_y: Grid1D,
        samples,
        offgrid_points: int = 0,
        mass_deficit: float = 0.0,
    ):
        samples = np.asarray(samples, dtype=complex)
        if samples.shape != (grid_x.n_points, grid_y.n_points):
            raise ValueError("joint samples do not match the grids")
        self.grid_x = grid_x
        self.grid_y = grid_y
        self.samples = samples
        self.offgrid_points = offgrid_points
        self.mass_deficit = mass_deficit

    def norm(self) -> float:
        wx = self.grid_x.trapezoid_weights
        wy = self.grid_y.trapezoid_weights
        return float(
            np.sqrt(np.sum(wx[:, None] * wy[None, :] * np.abs(self.samples) ** 2))
        )

    def l2_distance(self, other: "JointWaveFunction", align_phase: bool = False) -> float:
        if other.grid_x != self.grid_x or other.grid_y != self.grid_y:
            raise ValueError("joint states live on different grids")
        a, b = self.samples, other.samples
        if align_phase:
            k = np.unravel_index(np.argmax(np.abs(b)), b.shape)
            if abs(a[k]) > 0 and abs(b[k]) > 0:
                a = a * np.exp(-1j * np.angle(a[k] / b[k]))
        wx = self.grid_x.trapezoid_weights
        wy = self.grid_y.trapezoid_weights
        return float(np.sqrt(np.sum(wx[:, None] * wy[None, :] * np.abs(a - b) ** 2)))

    def schmidt_ratio(self) -> float:
        """Second-to-first singular value ratio of the sample matrix;
        ~0 for product states."""
        s = np.linalg.svd(self.samples, compute_uv=False)
        return float(s[1] / s[0]) if s[0] > 0 else 0.0


def apply_transform(
    transform: CoordTransform,
    psi: WaveFunction,
    phi: WaveFunction,
    max_mass_deficit: float = MAX_MASS_DEFICIT,
) -> JointWaveFunction:
    """Joint state sqrt(|det|) psi(a x + b y) phi(c x + d y).

    The output axes are the input grids: rows follow the system grid,
    columns the probe grid. Arguments outside a factor's grid contribute
    zero; if that (plus interpolation error) removes more than
    ``max_mass_deficit`` of the squared norm, GridLeakageError is raised.
    """
    for name, wf in (("system", psi), ("probe", phi)):
        if not wf.is_normalized(1e-5):
            raise ValueError(f"{name} state is not normalized (norm {wf.norm():.6g})")
    x = psi.grid.points[:, None]
    y = phi.grid.points[None, :]
    u = transform.a * x + transform.b * y
    v = transform.c * x + transform.d * y
    su, off_u = _catmull_rom(psi.samples, psi.grid, u)
    sv, off_v = _catmull_rom(phi.samples, phi.grid, v)
    samples = math.sqrt(abs(transform.det)) * su * sv
    joint = JointWaveFunction(
        psi.grid,
        phi.grid,
        samples,
        offgrid_points=int(np.count_nonzero(off_u | off_v)),
    )
    deficit = 1.0 - joint.norm() ** 2
    joint.mass_deficit = max(deficit, 0.0)
    if deficit > max_mass_deficit:
        raise GridLeakageError(
            f"transform mapped {deficit:.3%} of the probability mass off-grid "
            "(enlarge the grids or reduce the scaling)",
            deficit=deficit,
        )
    return joint


@dataclass(frozen=True)
class OutcomeDistribution:
    """Probability density of the probe-coordinate readout."""

    positions: np.ndarray
    density: np.ndarray

    def __post_init__(self):
        positions = np.asarray(self.positions, dtype=float)
        density = np.asarray(self.density, dtype=float)
        if positions.shape != density.shape or positions.ndim != 1:
            raise ValueError("positions and density must be matching 1-D arrays")
        object.__setattr__(self, "positions", positions)
        object.__setattr__(self, "density", density)

    @cached_property
    def _weights(self) -> np.ndarray:
        h = self.positions[1] - self.positions[0]
        w = np.full(len(self.positions), h)
        w[0] = w[-1] = h / 2
        return w

    def integral(self) -> float:
        return float(np.sum(self._weights * self.density))

    def mean(self) -> float:
        return float(np.sum(self._weights * self.positions * self.density))

    def variance(self) -> float:
        m = self.mean()
        return float(np.sum(self._weights * (self.positions - m) ** 2 * self.density))

    def l1_distance(self, other) -> float:
        q = other.density if isinstance(other, OutcomeDistribution) else np.asarray(other)
        return float(np.sum(self._weights * np.abs(self.density - q)))

    def sample(self, rng: np.random.Generator, size: int | None = None):
        """Draw outcomes at grid resolution."""
        p = self._weights * self.density
        p = np.clip(p, 0.0, None)
        p /= p.sum()
        return rng.choice(self.positions, size=size, p=p)


def outcome_distribution(joint: JointWaveFunction) -> OutcomeDistribution:
    """Marginal density over the probe coordinate, P(y) = int |Psi(x, y)|^2 dx."""
    wx = joint.grid_x.trapezoid_weights
    density = np.sum(wx[:, None] * np.abs(joint.samples) ** 2, axis=0)
    return OutcomeDistribution(joint.grid_y.points.copy(), density)


def postmeasurement_state(joint: JointWaveFunction, outcome: float) -> WaveFunction:
    """Normalized system state conditioned on reading the probe at ``outcome``.

    The joint samples are interpolated along the probe axis at the exact
    outcome value. Raises ValueError when the outcome carries no
    probability density.
    """
    grid_y = joint.grid_y
    t = (outcome - grid_y.x_min) / grid_y.spacing
    i = int(np.floor(t))
    if not (1 <= i <= grid_y.n_points - 3):
        raise ValueError(f"outcome {outcome!r} lies outside the probe grid")
    uu = t - i
    w = 0.5 * np.array(
        [
            -uu**3 + 2 * uu**2 - uu,
            3 * uu**3 - 5 * uu**2 + 2,
            -3 * uu**3 + 4 * uu**2 + uu,
            uu**3 - uu**2,
        ]
    )
    slice_ = joint.samples[:, i - 1 : i + 3] @ w
    wx = joint.grid_x.trapezoid_weights
    prob = float(np.sum(wx * np.abs(slice_) ** 2))
    if prob <= 1e-12:
        raise ValueError(f"outcome {outcome!r} has vanishing probability density")
    return WaveFunction(joint.grid_x, slice_ / math.sqrt(prob))


def snr(probe: GaussianSpec, lam: float, alpha: float) -> tuple[float, float]:
    """Signal-to-noise ratio of a scaled position readout of a point-like
    system at ``alpha``.

    Returns (analytic, simulated): the closed form lam^2 alpha^2 / width^2
    and the moment ratio mean^2 / variance of the outcome density
    |phi(a - lam*alpha)|^2 evaluated on a 2048-point grid.
    """
    if probe.center != 0.0:
        raise ValueError("probe must be centered at zero (choose the coordinate origin)")
    if not (lam > 0 and math.isfinite(lam)):
        raise ValueError(f"scaling parameter must be positive, got {lam!r}")
    analytic = lam**2 * alpha**2 / probe.width**2
    shift = lam * alpha
    grid = Grid1D(shift - 12 * probe.width, shift + 12 * probe.width, 2048)
    density = probe.density(grid.points - shift)
    dist = OutcomeDistribution(grid.points, density / np.sum(grid.trapezoid_weights * density))
    mean = dist.mean()
    simulated = mean**2 / dist.variance()
    return float(analytic), float(simulated)


def choose_grids(
    transform: CoordTransform,
    system: GaussianSpec,
    probe: GaussianSpec,
    base_points: int = DEFAULT_POINTS,
    max_points: int = MAX_POINTS,
) -> tuple[Grid1D, Grid1D]:
    """Pick grids that contain both the inputs and the transformed output.

    The output support is the preimage of the input support box under the
    substitution, a parallelogram whose axis extents follow from the
    inverse matrix. Point counts start at ``base_points`` and double until
    each width is resolved, up to ``max_points``.
    """
    r_sys = abs(system.center) + 8 * system.width
    r_probe = abs(probe.center) + 8 * probe.width
    det = abs(transform.det)
    x_ext = 1.05 * max((abs(transform.d) * r_sys + abs(transform.b) * r_probe) / det, r_sys)
    y_ext = 1.05 * max((abs(transform.c) * r_sys + abs(transform.a) * r_probe) / det, r_probe)

    def pick(extent: float, width: float) -> Grid1D:
        n = base_points
        while n < max_points and 2 * extent / (n - 1) > width / MIN_STEPS_PER_WIDTH:
            n *= 2
        n = min(n, max_points)
        if 2 * extent / (n - 1) > width / MIN_STEPS_PER_WIDTH:
            raise GridSupportError(
                f"cannot resolve width {width:.4g} over extent {extent:.4g} "
                f"within {max_points} points"
            )
        return Grid1D.centered(extent, n)

    return pick(x_ext, system.width), pick(y_ext, probe.width)
