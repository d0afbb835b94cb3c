"""Closed-form localization results.

Field-free tunneling between the wells and the long-time left/right
localization probabilities reached once the bright state has decayed. The
asymptotic formulas assume two-photon resonance (``delta1 == delta2``)
exactly, and the functions that need it refuse parameters that violate it.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import DetuningMismatch, GammaZero, NotNormalized
from .qsys import NORM_TOL, SQRT_HALF, SystemParams


@dataclass(frozen=True)
class TwoLevelInit:
    """Initial superposition ``c1|1> + c2|2>`` of the lower doublet."""

    c1: complex
    c2: complex

    def __post_init__(self):
        c1, c2 = complex(self.c1), complex(self.c2)
        norm2 = abs(c1) ** 2 + abs(c2) ** 2
        if abs(norm2 - 1.0) > NORM_TOL:
            raise NotNormalized(f"|c1|^2 + |c2|^2 = {norm2!r}, expected 1")
        object.__setattr__(self, "c1", c1)
        object.__setattr__(self, "c2", c2)

    @classmethod
    def left(cls) -> "TwoLevelInit":
        return cls(SQRT_HALF, -SQRT_HALF)

    @classmethod
    def right(cls) -> "TwoLevelInit":
        return cls(SQRT_HALF, SQRT_HALF)


@dataclass(frozen=True)
class AsymptoticLocalization:
    p_left_inf: float
    p_right_inf: float

    @property
    def survival(self) -> float:
        return self.p_left_inf + self.p_right_inf


def _require_resonant(params: SystemParams):
    if params.delta1 != params.delta2:
        raise DetuningMismatch(
            f"asymptotic formulas need delta1 == delta2, got {params.delta1!r} and {params.delta2!r}"
        )
    if params.gamma <= 0.0:
        raise GammaZero("asymptotic localization needs gamma > 0")


def free_tunneling(init: TwoLevelInit, delta: float, t: float) -> tuple[float, float]:
    """Left/right probabilities of the field-free doublet at time ``t``.

    The doublet components pick up phases ``exp(+-i delta t / 2)`` relative
    to their mean; the result is then projected onto the localized states.
    """
    a1 = init.c1 * cmath.exp(0.5j * delta * t)
    a2 = init.c2 * cmath.exp(-0.5j * delta * t)
    return abs(a1 - a2) ** 2 / 2.0, abs(a1 + a2) ** 2 / 2.0


def asymptotic_right_trapping(init: TwoLevelInit) -> AsymptoticLocalization:
    """Long-time result for ``omega2 = -omega1``, where the dark state is the right well.

    Only the right-localized component survives; it does not evolve at all,
    so this value also holds at every finite time.
    """
    p_right = 0.5 * (1.0 + 2.0 * (init.c1 * init.c2.conjugate()).real)
    return AsymptoticLocalization(0.0, p_right)


def dark_init_localization(params: SystemParams) -> tuple[float, float]:
    """Time-independent ``(P_L, P_R)`` when the system starts in the dark state."""
    u1, u2 = params.mixing()
    return (u1 + u2) ** 2 / 2.0, (u1 - u2) ** 2 / 2.0


def dark_overlap(init: TwoLevelInit, params: SystemParams) -> float:
    """``|<-|init>|^2``, the fraction of the initial state that never decays."""
    u1, u2 = params.mixing()
    return abs(u2 * init.c1 - u1 * init.c2) ** 2


def general_init_localization(init: TwoLevelInit, params: SystemParams) -> AsymptoticLocalization:
    """Surviving left/right probabilities for an arbitrary lower-doublet start.

    Everything outside the dark state decays; the dark fraction then splits
    between the wells like a dark-state start.
    """
    _require_resonant(params)
    weight = dark_overlap(init, params)
    p_left, p_right = dark_init_localization(params)
    return AsymptoticLocalization(weight * p_left, weight * p_right)


def left_init_localization(params: SystemParams) -> AsymptoticLocalization:
    """Surviving probabilities after damped tunneling from the left well."""
    _require_resonant(params)
    params.mixing()
    o1, o2 = params.omega1_rabi, params.omega2_rabi
    om4 = params.omega ** 4
    return AsymptoticLocalization(
        (o1 + o2) ** 4 / (4.0 * om4),
        (o1 * o1 - o2 * o2) ** 2 / (4.0 * om4),
    )


def tunneling_period(delta: float) -> float:
    return 2.0 * math.pi / abs(delta)
