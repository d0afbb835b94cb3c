"""Stationary states of one-dimensional (double-)well potentials.

The grid Hamiltonian ``-(1/2m) d^2/dx^2 + V(x)`` is discretized with
second-order central differences on ``N`` interior points; the wavefunction
vanishes on the two domain ends. Eigenfunctions are real and normalized so
that ``sum(psi**2) * dx == 1``.

Sign convention: every eigenfunction is positive at its right-most
significant grid value (magnitude at least 1e-3 of its peak). For a
symmetric double well this makes the ground state positive everywhere and
the first excited state positive in the right well, i.e.
``psi_2 = (phi_right - phi_left) / sqrt(2)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import (
    DegenerateDoublet,
    GridMismatch,
    InvalidParameters,
    NotConfined,
)
from .qsys import SystemParams

KINDS = ("quartic_double_well", "biased_quartic", "square_double_well", "harmonic", "box", "custom")
DEFAULT_POINTS = 2000
EDGE_FRACTION = 0.05
EDGE_NORM_LIMIT = 1e-6
DEGENERACY_LIMIT = 1e-12
PARITY_TOL = 1e-6
SIGN_THRESHOLD = 1e-3


@dataclass(frozen=True)
class PotentialSpec:
    """A potential family with its parameters, the solver domain and the mass.

    ``kind`` is one of

    - ``quartic_double_well``: ``a (x^2 - b^2)^2``
    - ``biased_quartic``: ``a (x^2 - b^2)^2 + tilt * x``
    - ``square_double_well``: piecewise constant; ``depth`` outside the two
      wells, ``0`` in the left well, ``bias`` in the right well and
      ``barrier_height`` in the central barrier. Each well has width ``width``
      and the barrier ``barrier_width``; the arrangement is centered on 0.
    - ``harmonic``: ``omega^2 x^2 / 2`` (uses ``mass``)
    - ``box``: ``V = 0`` with hard walls at the domain ends
    - ``custom``: linear interpolation of a sample table ``(x, V)``
    """

    kind: str
    params: dict = field(default_factory=dict)
    x_min: float = -5.0
    x_max: float = 5.0
    mass: float = 1.0
    table: tuple | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidParameters(f"unknown potential kind {self.kind!r}; expected one of {KINDS}")
        if not self.x_min < self.x_max:
            raise InvalidParameters(f"need x_min < x_max, got ({self.x_min!r}, {self.x_max!r})")
        if not self.mass > 0:
            raise InvalidParameters(f"mass must be positive, got {self.mass!r}")
        if self.kind == "custom":
            if self.table is None:
                raise InvalidParameters("custom potential needs a sample table")
            x, v = (np.asarray(c, dtype=float) for c in self.table)
            if x.ndim != 1 or x.shape != v.shape or x.size < 2:
                raise InvalidParameters("potential table needs two equal-length columns")
            if np.any(np.diff(x) <= 0):
                raise InvalidParameters("potential table x values must increase strictly")
            if not np.all(np.isfinite(v)):
                raise InvalidParameters("potential table contains non-finite values")
            if self.x_min < x[0] or self.x_max > x[-1]:
                raise InvalidParameters(
                    f"domain ({self.x_min}, {self.x_max}) exceeds the table range ({x[0]}, {x[-1]})"
                )
            object.__setattr__(self, "table", (x, v))

    @property
    def hard_walls(self) -> bool:
        return self.kind == "box"

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        p = self.params
        if self.kind in ("quartic_double_well", "biased_quartic"):
            a, b = float(p["a"]), float(p["b"])
            v = a * (x * x - b * b) ** 2
            if self.kind == "biased_quartic":
                v = v + float(p["tilt"]) * x
        elif self.kind == "square_double_well":
            half_barrier = 0.5 * float(p["barrier_width"])
            outer = half_barrier + float(p["width"])
            v = np.full_like(x, float(p["depth"]))
            v[(x >= -outer) & (x < -half_barrier)] = 0.0
            v[(x > half_barrier) & (x <= outer)] = float(p.get("bias", 0.0))
            v[np.abs(x) <= half_barrier] = float(p["barrier_height"])
        elif self.kind == "harmonic":
            w = float(p.get("omega", 1.0))
            v = 0.5 * self.mass * w * w * x * x
        elif self.kind == "box":
            v = np.zeros_like(x)
        else:
            tx, tv = self.table
            v = np.interp(x, tx, tv)
        if not np.all(np.isfinite(v)):
            raise InvalidParameters("potential evaluates to non-finite values on the grid")
        return v


def quartic_double_well(a: float, b: float, half_width: float | None = None) -> PotentialSpec:
    h = 2.0 * b + 2.0 if half_width is None else half_width
    return PotentialSpec("quartic_double_well", {"a": a, "b": b}, -h, h)


def biased_quartic(a: float, b: float, tilt: float, half_width: float | None = None) -> PotentialSpec:
    h = 2.0 * b + 2.0 if half_width is None else half_width
    return PotentialSpec("biased_quartic", {"a": a, "b": b, "tilt": tilt}, -h, h)


def read_potential_table(path) -> tuple[np.ndarray, np.ndarray]:
    """Read a whitespace-separated ``x V(x)`` table; ``#`` starts a comment."""
    data = np.loadtxt(path, comments="#", ndmin=2)
    if data.shape[1] != 2:
        raise InvalidParameters(f"{path}: expected 2 columns, found {data.shape[1]}")
    return data[:, 0], data[:, 1]


@dataclass(frozen=True)
class WellSolution:
    grid: np.ndarray
    potential: np.ndarray
    eigenvalues: np.ndarray
    eigenfunctions: np.ndarray  # shape (n_states, n_points)
    parity_flags: tuple
    spec: PotentialSpec

    @property
    def dx(self) -> float:
        return float(self.grid[1] - self.grid[0])

    @property
    def delta(self) -> float:
        """Splitting of the lowest doublet."""
        return float(self.eigenvalues[1] - self.eigenvalues[0])

    @property
    def center(self) -> float:
        return 0.5 * (self.spec.x_min + self.spec.x_max)

    def overlap(self, f: np.ndarray, g: np.ndarray) -> float:
        return float(np.dot(f, g) * self.dx)

    def left_fraction(self, f: np.ndarray) -> float:
        """Share of ``sum(f**2)`` lying left of the domain center."""
        w = f * f
        return float(np.sum(w[self.grid < self.center]) / np.sum(w))


def make_grid(x_min: float, x_max: float, n_points: int) -> np.ndarray:
    # built about the center so that a symmetric domain gives an exactly mirrored grid
    dx = (x_max - x_min) / (n_points + 1)
    return 0.5 * (x_min + x_max) + (np.arange(n_points) - 0.5 * (n_points - 1)) * dx


def _fix_sign(psi: np.ndarray) -> np.ndarray:
    significant = np.nonzero(np.abs(psi) >= SIGN_THRESHOLD * np.max(np.abs(psi)))[0]
    return -psi if psi[significant[-1]] < 0 else psi


def _parity(psi: np.ndarray, dx: float) -> str:
    mirrored = psi[::-1]
    if math.sqrt(np.sum((psi - mirrored) ** 2) * dx) < PARITY_TOL:
        return "S"
    if math.sqrt(np.sum((psi + mirrored) ** 2) * dx) < PARITY_TOL:
        return "A"
    return "N"


def solve_well(spec: PotentialSpec, n_points: int = DEFAULT_POINTS, n_states: int = 2) -> WellSolution:
    """Lowest ``n_states`` eigenpairs of the finite-difference Hamiltonian.

    Raises
    ------
    NotConfined
        A returned state keeps more than 1e-6 of its norm in the outer 5% of
        the domain on either side (skipped for the hard-wall ``box``).
    DegenerateDoublet
        Two consecutive eigenvalues closer than 1e-12.
    """
    if n_points < 200:
        raise InvalidParameters(f"n_points must be >= 200, got {n_points!r}")
    if n_states < 2 or n_states > n_points:
        raise InvalidParameters(f"n_states must be in [2, n_points], got {n_states!r}")
    x = make_grid(spec.x_min, spec.x_max, n_points)
    dx = float(x[1] - x[0])
    v = spec.evaluate(x)
    kinetic = 1.0 / (2.0 * spec.mass * dx * dx)
    energies, vecs = eigh_tridiagonal(
        v + 2.0 * kinetic,
        np.full(n_points - 1, -kinetic),
        select="i",
        select_range=(0, n_states - 1),
    )
    gaps = np.diff(energies)
    if np.any(gaps < DEGENERACY_LIMIT):
        k = int(np.argmin(gaps))
        raise DegenerateDoublet(
            f"eigenvalues {k} and {k + 1} differ by {gaps[k]:.3g} < {DEGENERACY_LIMIT}"
        )

    psi = vecs.T / math.sqrt(dx)
    psi = np.array([_fix_sign(p) for p in psi])

    if not spec.hard_walls:
        edge = max(1, int(math.ceil(EDGE_FRACTION * n_points)))
        for k, p in enumerate(psi):
            outer = (np.sum(p[:edge] ** 2) + np.sum(p[-edge:] ** 2)) * dx
            if outer > EDGE_NORM_LIMIT:
                raise NotConfined(
                    f"state {k} has {outer:.3g} of its norm in the outer 5% of the domain; "
                    "widen the domain"
                )

    flags = tuple(_parity(p, dx) for p in psi)
    return WellSolution(x, v, energies, psi, flags, spec)


def localized_states(sol: WellSolution) -> tuple[np.ndarray, np.ndarray]:
    """Right- and left-localized combinations ``(psi1 +- psi2) / sqrt(2)`` of the lowest doublet."""
    if sol.eigenfunctions.shape[0] < 2:
        raise InvalidParameters("need at least two states")
    if sol.delta < DEGENERACY_LIMIT:
        raise DegenerateDoublet(f"doublet splitting {sol.delta:.3g} is unresolved")
    if sol.parity_flags[:2] != ("S", "A"):
        raise InvalidParameters(
            f"lowest doublet parity is {sol.parity_flags[:2]}, expected ('S', 'A')"
        )
    psi1, psi2 = sol.eigenfunctions[0], sol.eigenfunctions[1]
    out = []
    for f in ((psi1 + psi2), (psi1 - psi2)):
        out.append(f / math.sqrt(sol.overlap(f, f)))
    return out[0], out[1]


def rabi_overlaps(ground: WellSolution, excited: WellSolution, mu_E: float,
                  excited_index: int = 0) -> tuple[float, float]:
    """Rabi frequencies ``-mu_E * <psi_i|psi_3>`` for the two lowest ground states.

    The wavefunctions vanish at both domain ends, so the trapezoidal rule
    reduces to a plain sum times ``dx``. The result flips sign with the
    (conventional) sign of ``psi_3``; the ratio ``omega2 / omega1`` does not.
    """
    if ground.grid.shape != excited.grid.shape or not np.array_equal(ground.grid, excited.grid):
        raise GridMismatch("ground and excited solutions use different grids")
    if not 0 <= excited_index < excited.eigenfunctions.shape[0]:
        raise InvalidParameters(f"excited_index {excited_index} out of range")
    psi3 = excited.eigenfunctions[excited_index]
    o1 = -mu_E * ground.overlap(ground.eigenfunctions[0], psi3)
    o2 = -mu_E * ground.overlap(ground.eigenfunctions[1], psi3)
    return o1, o2


def derive_system_params(ground: WellSolution, excited: WellSolution, mu_E: float,
                         excited_index: int = 0, delta1: float = 0.0, gamma: float = 0.0,
                         resonant: bool = True) -> SystemParams:
    """Build :class:`SystemParams` from well solutions.

    With ``resonant`` the two-photon condition ``delta2 = delta1`` is imposed;
    otherwise ``delta2 = delta1 + delta`` with the computed doublet splitting.
    """
    o1, o2 = rabi_overlaps(ground, excited, mu_E, excited_index)
    delta2 = delta1 if resonant else delta1 + ground.delta
    return SystemParams(o1, o2, delta1, delta2, gamma)
