# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled fixed-step RK4 loop for ``i db/dt = H b`` with a constant 3x3 ``H``."""
import numpy as np
cimport numpy as cnp

cnp.import_array()

ctypedef double complex cplx


cdef inline void _rhs(const cplx[:, ::1] m, cplx x0, cplx x1, cplx x2,
                      cplx* out) noexcept nogil:
    # m already holds -i*H
    out[0] = m[0, 0] * x0 + m[0, 1] * x1 + m[0, 2] * x2
    out[1] = m[1, 0] * x0 + m[1, 1] * x1 + m[1, 2] * x2
    out[2] = m[2, 0] * x0 + m[2, 1] * x1 + m[2, 2] * x2


cdef inline double _abs2(cplx z) noexcept nogil:
    return z.real * z.real + z.imag * z.imag


def rk4_run(cplx[:, ::1] hamiltonian, cplx[::1] b0, double dt, long n_steps,
            long sample_every, double bright1, double bright2, double eps,
            double norm_limit):
    """See :func:`lambdatunnel._core._rk4_py.rk4_run`."""
    cdef cplx[:, ::1] m = np.ascontiguousarray(-1j * np.asarray(hamiltonian))
    cdef long capacity = n_steps // sample_every + 2
    samples_np = np.empty((capacity, 3), dtype=np.complex128)
    steps_np = np.empty(capacity, dtype=np.int64)
    cdef cplx[:, ::1] samples = samples_np
    cdef long long[::1] steps = steps_np
    cdef bint settle = eps > 0.0
    cdef cplx b[3]
    cdef cplx k1[3]
    cdef cplx k2[3]
    cdef cplx k3[3]
    cdef cplx k4[3]
    cdef double half = 0.5 * dt, sixth = dt / 6.0
    cdef long step = 0, count = 0
    cdef int status = 0
    cdef double n2
    cdef int j

    for j in range(3):
        b[j] = b0[j]
        samples[0, j] = b[j]
    steps[0] = 0
    count = 1
    if settle and _abs2(bright1 * b[0] + bright2 * b[1]) + _abs2(b[2]) < eps:
        return samples_np[:1], steps_np[:1], 0, 1

    with nogil:
        while step < n_steps:
            _rhs(m, b[0], b[1], b[2], k1)
            _rhs(m, b[0] + half * k1[0], b[1] + half * k1[1], b[2] + half * k1[2], k2)
            _rhs(m, b[0] + half * k2[0], b[1] + half * k2[1], b[2] + half * k2[2], k3)
            _rhs(m, b[0] + dt * k3[0], b[1] + dt * k3[1], b[2] + dt * k3[2], k4)
            for j in range(3):
                b[j] = b[j] + sixth * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j])
            step += 1
            n2 = _abs2(b[0]) + _abs2(b[1]) + _abs2(b[2])
            if n2 > norm_limit or n2 != n2:
                status = 2
            elif settle and _abs2(bright1 * b[0] + bright2 * b[1]) + _abs2(b[2]) < eps:
                status = 1
            if status != 0 or step % sample_every == 0 or step == n_steps:
                for j in range(3):
                    samples[count, j] = b[j]
                steps[count] = step
                count += 1
            if status != 0:
                break

    return samples_np[:count], steps_np[:count], step, status
