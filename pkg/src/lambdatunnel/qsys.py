"""Parameters, amplitudes and the rotating-frame Hamiltonian of the Lambda system.

Units are hbar = 1; every frequency is expressed in one arbitrary angular
frequency unit and times are in its inverse. For example a doublet splitting
of 1e-4 eV corresponds to 1e-4 / 6.582119569e-16 s^-1 ~ 1.52e11 rad/s.

The amplitudes ``b1, b2, b3`` live in the rotating frame. The bare-state
amplitudes differ from them only by time-dependent phases common to the two
lower levels (``a_i = b_i exp(-i(w3 - w)t)`` for i = 1, 2 and
``a_3 = b_3 exp(-i w3 t)``), so every probability computed here is
independent of that convention and the bare amplitudes are never exposed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameters, NotNormalized, ZeroCoupling

SQRT_HALF = 1.0 / math.sqrt(2.0)
NORM_TOL = 1e-12


@dataclass(frozen=True)
class SystemParams:
    """Rabi frequencies, detunings and excited-state decay rate."""

    omega1_rabi: float
    omega2_rabi: float
    delta1: float
    delta2: float
    gamma: float = 0.0

    def __post_init__(self):
        for name in ("omega1_rabi", "omega2_rabi", "delta1", "delta2", "gamma"):
            value = getattr(self, name)
            if isinstance(value, complex):
                raise InvalidParameters(f"{name} must be real, got {value!r}")
            value = float(value)
            if not math.isfinite(value):
                raise InvalidParameters(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, value)
        if self.gamma < 0:
            raise InvalidParameters(f"gamma must be >= 0, got {self.gamma!r}")

    @property
    def omega(self) -> float:
        """Effective coupling sqrt(omega1**2 + omega2**2)."""
        return math.hypot(self.omega1_rabi, self.omega2_rabi)

    @property
    def delta(self) -> float:
        """Lower-doublet splitting, delta2 - delta1."""
        return self.delta2 - self.delta1

    @property
    def max_frequency(self) -> float:
        return max(self.omega, abs(self.delta1), abs(self.delta2), self.gamma)

    def mixing(self) -> tuple[float, float]:
        """Return ``(omega1/omega, omega2/omega)``; raises if both couplings vanish."""
        om = self.omega
        if om == 0.0:
            raise ZeroCoupling("dark/bright basis undefined: omega1 = omega2 = 0")
        return self.omega1_rabi / om, self.omega2_rabi / om

    def replace(self, **changes) -> "SystemParams":
        fields = dict(
            omega1_rabi=self.omega1_rabi,
            omega2_rabi=self.omega2_rabi,
            delta1=self.delta1,
            delta2=self.delta2,
            gamma=self.gamma,
        )
        fields.update(changes)
        return SystemParams(**fields)


@dataclass(frozen=True)
class Amplitudes:
    """Rotating-frame amplitudes ``(b1, b2, b3)`` at time ``t``."""

    b1: complex
    b2: complex
    b3: complex
    t: float = 0.0

    def __post_init__(self):
        for name in ("b1", "b2", "b3"):
            object.__setattr__(self, name, complex(getattr(self, name)))
        object.__setattr__(self, "t", float(self.t))

    @classmethod
    def from_vector(cls, vec, t: float = 0.0) -> "Amplitudes":
        b1, b2, b3 = (complex(v) for v in vec)
        return cls(b1, b2, b3, t)

    def as_vector(self) -> np.ndarray:
        return np.array([self.b1, self.b2, self.b3], dtype=complex)

    @property
    def norm2(self) -> float:
        return abs(self.b1) ** 2 + abs(self.b2) ** 2 + abs(self.b3) ** 2


def build_hamiltonian(params: SystemParams) -> np.ndarray:
    """Return the 3x3 rotating-frame Hamiltonian.

    The excited level carries the non-Hermitian loss term ``-i gamma / 2``;
    the matrix is Hermitian only for ``gamma == 0``.
    """
    o1, o2 = params.omega1_rabi, params.omega2_rabi
    return np.array(
        [
            [params.delta1, 0.0, o1],
            [0.0, params.delta2, o2],
            [o1, o2, -0.5j * params.gamma],
        ],
        dtype=complex,
    )


def initial_state(kind, params: SystemParams | None = None) -> Amplitudes:
    """Build a normalized state at ``t = 0``.

    Parameters
    ----------
    kind : str or sequence of complex
        One of ``"left"``, ``"right"``, ``"dark"``, ``"bright"``, or the bare
        coefficients ``(c1, c2[, c3])`` (``c3`` defaults to zero).
    params : SystemParams, optional
        Required for ``"dark"`` and ``"bright"``.

    Raises
    ------
    NotNormalized
        Explicit coefficients are off unit norm by more than 1e-12.
    ZeroCoupling
        Dark or bright state requested with both Rabi frequencies zero.
    """
    if isinstance(kind, str):
        key = kind.strip().lower()
        if key == "left":
            return Amplitudes(SQRT_HALF, -SQRT_HALF, 0.0)
        if key == "right":
            return Amplitudes(SQRT_HALF, SQRT_HALF, 0.0)
        if key in ("dark", "bright"):
            if params is None:
                raise ZeroCoupling(f"{key} state needs system parameters")
            u1, u2 = params.mixing()
            if key == "dark":
                return Amplitudes(u2, -u1, 0.0)
            return Amplitudes(u1, u2, 0.0)
        raise InvalidParameters(f"unknown initial state {kind!r}")
    coeffs = [complex(c) for c in kind]
    if len(coeffs) == 2:
        coeffs.append(0.0j)
    if len(coeffs) != 3:
        raise InvalidParameters("bare initial state needs two or three coefficients")
    norm2 = sum(abs(c) ** 2 for c in coeffs)
    if abs(norm2 - 1.0) > NORM_TOL:
        raise NotNormalized(f"|c1|^2 + |c2|^2 + |c3|^2 = {norm2!r}, expected 1")
    return Amplitudes(*coeffs)


def localization_probabilities(state) -> tuple[float, float, float]:
    """Project onto the left/right localized well states.

    Returns ``(P_L, P_R, P3)`` with ``P_L = |b1 - b2|^2 / 2``,
    ``P_R = |b1 + b2|^2 / 2`` and ``P3 = |b3|^2``.
    """
    if isinstance(state, Amplitudes):
        b1, b2, b3 = state.b1, state.b2, state.b3
    else:
        b1, b2, b3 = state
    return abs(b1 - b2) ** 2 / 2.0, abs(b1 + b2) ** 2 / 2.0, abs(b3) ** 2
