"""Time evolution of the rotating-frame amplitudes.

:func:`integrate` advances ``i db/dt = H b`` with a fixed-step classical RK4
scheme (the stepping loop lives in :mod:`lambdatunnel._core`).
:func:`propagator` computes ``exp(-i H t)`` independently by scaling and
squaring, and is used to cross-check the integrator.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _core
from .errors import GammaZero, InvalidParameters, NormBlowup, NotSettled, StepTooLarge
from .qsys import Amplitudes, SystemParams, build_hamiltonian

STABILITY_LIMIT = 0.1
DEFAULT_STEP_FRACTION = 0.005
NORM_BLOWUP = 1e-6
DEFAULT_EPS = 1e-12
MAX_SAMPLES = 20000


@dataclass(frozen=True)
class Trajectory:
    """Sampled solution of the amplitude equations.

    ``states[k]`` holds ``(b1, b2, b3)`` at ``times[k]``; the derived
    probabilities are computed on demand from the stored amplitudes.
    """

    times: np.ndarray
    states: np.ndarray
    params: SystemParams
    dt_effective: float
    n_steps: int
    settled: bool = False

    def __len__(self):
        return len(self.times)

    @property
    def p_left(self) -> np.ndarray:
        return np.abs(self.states[:, 0] - self.states[:, 1]) ** 2 / 2.0

    @property
    def p_right(self) -> np.ndarray:
        return np.abs(self.states[:, 0] + self.states[:, 1]) ** 2 / 2.0

    @property
    def p3(self) -> np.ndarray:
        return np.abs(self.states[:, 2]) ** 2

    @property
    def norm2(self) -> np.ndarray:
        return np.sum(np.abs(self.states) ** 2, axis=1)

    def amplitudes(self, index: int) -> Amplitudes:
        return Amplitudes.from_vector(self.states[index], self.times[index])

    @property
    def final(self) -> Amplitudes:
        return self.amplitudes(-1)

    def samples(self):
        """Yield ``(t, Amplitudes, P_L, P_R, P3, norm2)`` for every stored sample."""
        pl, pr, p3, n2 = self.p_left, self.p_right, self.p3, self.norm2
        for k in range(len(self.times)):
            yield self.times[k], self.amplitudes(k), pl[k], pr[k], p3[k], n2[k]


def default_dt(params: SystemParams) -> float:
    """Step size giving ``|lambda| dt <= 0.005`` for every eigenvalue of ``H``.

    The infinity norm of ``H`` bounds its spectral radius. RK4 then loses
    less than ``1e-15`` of norm per step on the Hermitian part, which keeps
    the drift over a million steps well below ``1e-9``.
    """
    bound = float(np.max(np.sum(np.abs(build_hamiltonian(params)), axis=1)))
    if bound == 0.0:
        return math.inf
    return DEFAULT_STEP_FRACTION / bound


def _resolve_grid(params, t_end, dt):
    if not t_end > 0:
        raise InvalidParameters(f"t_end must be positive, got {t_end!r}")
    if dt is None:
        dt = min(default_dt(params), t_end)
    if not dt > 0:
        raise InvalidParameters(f"dt must be positive, got {dt!r}")
    if dt > t_end:
        raise InvalidParameters(f"dt={dt!r} exceeds t_end={t_end!r}")
    if dt * params.max_frequency > STABILITY_LIMIT * (1 + 1e-12):
        raise StepTooLarge(
            f"dt * max(omega, |delta1|, |delta2|, gamma) = "
            f"{dt * params.max_frequency:.3g} exceeds {STABILITY_LIMIT}"
        )
    n_steps = max(1, math.ceil(t_end / dt - 1e-9))
    return n_steps, t_end / n_steps


def _run(params, b0, n_steps, dt, sample_every, bright=(0.0, 0.0), eps=0.0):
    if sample_every < 1:
        raise InvalidParameters(f"sample_every must be >= 1, got {sample_every!r}")
    b0 = np.ascontiguousarray(b0, dtype=np.complex128)
    n0 = float(np.vdot(b0, b0).real)
    h = np.ascontiguousarray(build_hamiltonian(params))
    samples, steps, n_done, status = _core.rk4_run(
        h, b0, float(dt), int(n_steps), int(sample_every),
        float(bright[0]), float(bright[1]), float(eps), n0 * (1.0 + NORM_BLOWUP),
    )
    if status == 2:
        raise NormBlowup(
            f"norm^2 exceeded {1 + NORM_BLOWUP} times its initial value at t = {n_done * dt:.6g}"
        )
    return samples, steps * dt, status


def integrate_vector(params: SystemParams, b0, t_end: float, dt: float | None = None,
                     sample_every: int = 1) -> Trajectory:
    """Integrate from an arbitrary (possibly unnormalized) complex 3-vector.

    This is the linear-map entry point behind :func:`integrate`; the
    norm-growth check is relative to ``|b0|^2``.
    """
    n_steps, dt_eff = _resolve_grid(params, t_end, dt)
    samples, times, _ = _run(params, b0, n_steps, dt_eff, sample_every)
    return Trajectory(times, samples, params, dt_eff, n_steps)


def integrate(params: SystemParams, init: Amplitudes, t_end: float,
              dt: float | None = None, sample_every: int = 1) -> Trajectory:
    """Integrate ``i db/dt = H b`` from ``init`` over ``[0, t_end]``.

    Parameters
    ----------
    params : SystemParams
    init : Amplitudes
    t_end : float
        Final time, relative to the start.
    dt : float, optional
        Requested step. The effective step is ``t_end / ceil(t_end / dt)`` so
        the run ends exactly at ``t_end``. Defaults to :func:`default_dt`.
    sample_every : int
        Store every ``sample_every``-th step; the final step is always stored.

    Raises
    ------
    StepTooLarge
        ``dt * max(omega, |delta1|, |delta2|, gamma) > 0.1``.
    NormBlowup
        ``|b|^2`` grew by more than ``1e-6`` over its initial value.
    """
    traj = integrate_vector(params, init.as_vector(), t_end, dt, sample_every)
    if init.t != 0.0:
        traj = Trajectory(traj.times + init.t, traj.states, params, traj.dt_effective, traj.n_steps)
    return traj


def bright_decay_rate(params: SystemParams) -> float:
    """Slowest population decay rate of the bright/excited pair.

    Exact when ``delta1 == delta2``; otherwise it ignores the dark-bright
    leak and is only a time-scale estimate.
    """
    u1, u2 = params.mixing()
    h_bright = np.array(
        [
            [params.delta1 * u1 * u1 + params.delta2 * u2 * u2, params.omega],
            [params.omega, -0.5j * params.gamma],
        ]
    )
    return float(np.min(-2.0 * np.linalg.eigvals(h_bright).imag))


def default_t_max(params: SystemParams, eps: float = DEFAULT_EPS) -> float:
    heuristic = 50.0 / params.gamma + 50.0 / params.omega
    rate = bright_decay_rate(params)
    if rate <= 0.0:
        return heuristic
    return max(heuristic, 2.0 * (math.log(1.0 / eps) + 10.0) / rate)


def integrate_until_settled(params: SystemParams, init: Amplitudes, eps: float = DEFAULT_EPS,
                            t_max: float | None = None, dt: float | None = None,
                            sample_every: int | None = None) -> Trajectory:
    """Integrate until the bright and excited populations have drained.

    Stops at the first step where ``|b_+|^2 + |b3|^2 < eps``. The left/right
    probabilities of the last sample then differ from their ``t -> inf``
    limits by at most about ``2 sqrt(eps)`` (interference between the
    surviving dark amplitude and the residual bright amplitude).

    Raises
    ------
    GammaZero
        ``gamma == 0``: nothing decays, so there is no limit to reach.
    ZeroCoupling
        Both Rabi frequencies vanish and the bright state is undefined.
    NotSettled
        ``t_max`` was reached first.
    """
    if params.gamma == 0.0:
        raise GammaZero("integrate_until_settled needs gamma > 0")
    if not 0.0 < eps < 1.0:
        raise InvalidParameters(f"eps must lie in (0, 1), got {eps!r}")
    bright = params.mixing()
    if t_max is None:
        t_max = default_t_max(params, eps)
    if not (math.isfinite(t_max) and t_max > 0):
        raise InvalidParameters(f"t_max must be finite and positive, got {t_max!r}")
    n_steps, dt_eff = _resolve_grid(params, t_max, dt)
    if sample_every is None:
        sample_every = max(1, n_steps // MAX_SAMPLES)
    samples, times, status = _run(params, init.as_vector(), n_steps, dt_eff,
                                  sample_every, bright, eps)
    if status != 1:
        raise NotSettled(f"bright population still >= {eps:g} at t_max = {t_max:.6g}")
    return Trajectory(times + init.t, samples, params, dt_eff, n_steps, settled=True)


def _taylor_expm(a: np.ndarray, degree: int = 18) -> np.ndarray:
    norm = np.max(np.sum(np.abs(a), axis=0))
    squarings = max(0, math.ceil(math.log2(norm / 0.5))) if norm > 0 else 0
    a = a / 2.0 ** squarings
    eye = np.eye(a.shape[0], dtype=complex)
    result = eye.copy()
    term = eye
    for k in range(1, degree + 1):
        term = term @ a / k
        result = result + term
    for _ in range(squarings):
        result = result @ result
    return result


def propagator(params: SystemParams, t: float) -> np.ndarray:
    """Exact evolution matrix ``exp(-i H t)`` by scaling and squaring.

    The argument is halved until its 1-norm is at most 1/2, so the
    degree-18 Taylor kernel is accurate to machine precision.
    """
    if t < 0:
        raise InvalidParameters(f"t must be >= 0, got {t!r}")
    return _taylor_expm(-1j * t * build_hamiltonian(params))


def propagate(params: SystemParams, init, times) -> np.ndarray:
    """Apply :func:`propagator` to ``init`` at each of ``times``; returns (n, 3)."""
    b0 = init.as_vector() if isinstance(init, Amplitudes) else np.asarray(init, dtype=complex)
    return np.array([propagator(params, float(t)) @ b0 for t in np.atleast_1d(times)])
