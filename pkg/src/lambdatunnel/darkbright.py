"""Dark/bright basis for the two lower levels.

With ``u = (omega1, omega2) / omega`` the bright state is
``|+> = u1|1> + u2|2>`` and the dark state ``|-> = u2|1> - u1|2>``. The sign
of ``|->`` follows this definition exactly; its global sign is unobservable
but fixes the sign of ``b_minus``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .qsys import Amplitudes, SystemParams


@dataclass(frozen=True)
class DarkBrightAmplitudes:
    b_plus: complex
    b_minus: complex
    b3: complex
    t: float = 0.0

    def as_vector(self) -> np.ndarray:
        return np.array([self.b_plus, self.b_minus, self.b3], dtype=complex)


def mixing_matrix(params: SystemParams) -> np.ndarray:
    """Real orthogonal ``M`` with ``(b+, b-, b3) = M @ (b1, b2, b3)``."""
    u1, u2 = params.mixing()
    return np.array([[u1, u2, 0.0], [u2, -u1, 0.0], [0.0, 0.0, 1.0]])


def to_dark_bright(state: Amplitudes, params: SystemParams) -> DarkBrightAmplitudes:
    u1, u2 = params.mixing()
    return DarkBrightAmplitudes(
        u1 * state.b1 + u2 * state.b2,
        u2 * state.b1 - u1 * state.b2,
        state.b3,
        state.t,
    )


def from_dark_bright(state: DarkBrightAmplitudes, params: SystemParams) -> Amplitudes:
    # M restricted to the lower pair is symmetric and orthogonal, hence its own inverse
    u1, u2 = params.mixing()
    return Amplitudes(
        u1 * state.b_plus + u2 * state.b_minus,
        u2 * state.b_plus - u1 * state.b_minus,
        state.b3,
        state.t,
    )


def dark_bright_rhs(state: DarkBrightAmplitudes, params: SystemParams) -> np.ndarray:
    """Time derivatives ``(db+/dt, db-/dt, db3/dt)`` written in the dark/bright basis."""
    u1, u2 = params.mixing()
    d1, d2 = params.delta1, params.delta2
    om = params.omega
    e_plus = d1 * u1 * u1 + d2 * u2 * u2
    e_minus = d1 * u2 * u2 + d2 * u1 * u1
    leak = (d1 - d2) * u1 * u2
    bp, bm, b3 = state.b_plus, state.b_minus, state.b3
    return np.array(
        [
            -1j * (e_plus * bp + leak * bm + om * b3),
            -1j * (leak * bp + e_minus * bm),
            -1j * om * bp - 0.5 * params.gamma * b3,
        ],
        dtype=complex,
    )


def dark_state_condition_error(params: SystemParams) -> float:
    """Magnitude of the dark-bright coupling ``|(delta1 - delta2) omega1 omega2| / omega^2``.

    Zero exactly when the two-photon resonance ``delta1 == delta2`` holds or
    one of the couplings is off.
    """
    u1, u2 = params.mixing()
    return abs((params.delta1 - params.delta2) * u1 * u2)


def dark_population(state: Amplitudes, params: SystemParams) -> float:
    u1, u2 = params.mixing()
    return abs(u2 * state.b1 - u1 * state.b2) ** 2


def bright_population(state: Amplitudes, params: SystemParams) -> float:
    """``|b+|^2 + |b3|^2``: the part of the population that can decay."""
    u1, u2 = params.mixing()
    return abs(u1 * state.b1 + u2 * state.b2) ** 2 + abs(state.b3) ** 2
