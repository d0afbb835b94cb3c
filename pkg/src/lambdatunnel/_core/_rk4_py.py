"""Pure-Python fallback for the RK4 loop; same contract as the compiled module."""
import numpy as np


def rk4_run(hamiltonian, b0, dt, n_steps, sample_every, bright1, bright2, eps, norm_limit):
    """Integrate ``i db/dt = H b`` with ``n_steps`` classical RK4 steps.

    Parameters
    ----------
    hamiltonian : (3, 3) complex array
    b0 : (3,) complex array
    dt : float
    n_steps, sample_every : int
    bright1, bright2 : float
        Bright-state coefficients; only used when ``eps > 0``.
    eps : float
        Stop as soon as ``|bright1*b1 + bright2*b2|**2 + |b3|**2 < eps``.
        Disabled when ``eps <= 0``.
    norm_limit : float
        Stop with status 2 once ``|b|**2`` exceeds this value (or is NaN).

    Returns
    -------
    samples : (m, 3) complex array
    steps : (m,) int64 array
        Step index of every sample; the first is 0 and the last is the final step.
    n_done : int
    status : int
        0 ran to ``n_steps``, 1 settled, 2 norm limit exceeded.
    """
    m = [[complex(-1j * h) for h in row] for row in np.asarray(hamiltonian)]
    m00, m01, m02 = m[0]
    m10, m11, m12 = m[1]
    m20, m21, m22 = m[2]
    x0, x1, x2 = (complex(v) for v in b0)
    half = 0.5 * dt
    sixth = dt / 6.0
    settle = eps > 0.0

    samples = [(x0, x1, x2)]
    steps = [0]
    if settle and abs(bright1 * x0 + bright2 * x1) ** 2 + abs(x2) ** 2 < eps:
        return np.array(samples, dtype=complex), np.array(steps, dtype=np.int64), 0, 1

    step = 0
    status = 0
    while step < n_steps:
        a0 = m00 * x0 + m01 * x1 + m02 * x2
        a1 = m10 * x0 + m11 * x1 + m12 * x2
        a2 = m20 * x0 + m21 * x1 + m22 * x2
        y0, y1, y2 = x0 + half * a0, x1 + half * a1, x2 + half * a2
        c0 = m00 * y0 + m01 * y1 + m02 * y2
        c1 = m10 * y0 + m11 * y1 + m12 * y2
        c2 = m20 * y0 + m21 * y1 + m22 * y2
        y0, y1, y2 = x0 + half * c0, x1 + half * c1, x2 + half * c2
        d0 = m00 * y0 + m01 * y1 + m02 * y2
        d1 = m10 * y0 + m11 * y1 + m12 * y2
        d2 = m20 * y0 + m21 * y1 + m22 * y2
        y0, y1, y2 = x0 + dt * d0, x1 + dt * d1, x2 + dt * d2
        e0 = m00 * y0 + m01 * y1 + m02 * y2
        e1 = m10 * y0 + m11 * y1 + m12 * y2
        e2 = m20 * y0 + m21 * y1 + m22 * y2
        x0 = x0 + sixth * (a0 + 2.0 * c0 + 2.0 * d0 + e0)
        x1 = x1 + sixth * (a1 + 2.0 * c1 + 2.0 * d1 + e1)
        x2 = x2 + sixth * (a2 + 2.0 * c2 + 2.0 * d2 + e2)
        step += 1

        n2 = abs(x0) ** 2 + abs(x1) ** 2 + abs(x2) ** 2
        if n2 > norm_limit or n2 != n2:
            status = 2
        elif settle and abs(bright1 * x0 + bright2 * x1) ** 2 + abs(x2) ** 2 < eps:
            status = 1
        if status or step % sample_every == 0 or step == n_steps:
            samples.append((x0, x1, x2))
            steps.append(step)
        if status:
            break

    return np.array(samples, dtype=complex), np.array(steps, dtype=np.int64), step, status
