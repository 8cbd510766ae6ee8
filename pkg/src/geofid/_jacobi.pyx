# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled cyclic Jacobi sweep for dense complex Hermitian matrices."""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, hypot

cnp.import_array()


cdef inline double cabs2(double complex z) noexcept nogil:
    return z.real * z.real + z.imag * z.imag


def jacobi_eigh(double complex[:, ::1] A, int max_sweeps, double tol):
    """Diagonalize ``A`` in place; return ``(w, V, sweeps, off)``.

    ``w`` is unsorted. ``off`` is the Frobenius norm of the off-diagonal
    part when the loop stopped, relative to ``||A||_F``.
    """
    cdef Py_ssize_t n = A.shape[0]
    cdef Py_ssize_t p, q, k
    cdef int sweep = 0
    cdef double fro2 = 0.0, off2, absh, a, b, tau, t, c, s, thresh
    cdef double complex h, d, akp, akq, vkp, vkq
    V_arr = np.eye(n, dtype=np.complex128)
    cdef double complex[:, ::1] V = V_arr

    for p in range(n):
        for q in range(n):
            fro2 += cabs2(A[p, q])
    if fro2 == 0.0:
        return np.zeros(n), V_arr, 0, 0.0

    thresh = 1e-17 * sqrt(fro2)
    with nogil:
        while True:
            off2 = 0.0
            for p in range(n):
                for q in range(p + 1, n):
                    off2 += 2.0 * cabs2(A[p, q])
            if off2 <= tol * tol * fro2 or sweep >= max_sweeps:
                break
            sweep += 1
            for p in range(n - 1):
                for q in range(p + 1, n):
                    h = A[p, q]
                    absh = hypot(h.real, h.imag)
                    if absh <= thresh:
                        continue
                    a = A[p, p].real
                    b = A[q, q].real
                    d = h.conjugate() / absh
                    tau = (b - a) / (2.0 * absh)
                    if tau >= 0:
                        t = 1.0 / (tau + sqrt(1.0 + tau * tau))
                    else:
                        t = -1.0 / (-tau + sqrt(1.0 + tau * tau))
                    c = 1.0 / sqrt(1.0 + t * t)
                    s = t * c
                    for k in range(n):
                        if k == p or k == q:
                            continue
                        akp = A[k, p]
                        akq = A[k, q]
                        A[k, p] = c * akp - s * d * akq
                        A[k, q] = s * akp + c * d * akq
                        A[p, k] = A[k, p].conjugate()
                        A[q, k] = A[k, q].conjugate()
                    A[p, p] = a - t * absh
                    A[q, q] = b + t * absh
                    A[p, q] = 0.0
                    A[q, p] = 0.0
                    for k in range(n):
                        vkp = V[k, p]
                        vkq = V[k, q]
                        V[k, p] = c * vkp - s * d * vkq
                        V[k, q] = s * vkp + c * d * vkq

    w = np.empty(n)
    for p in range(n):
        w[p] = A[p, p].real
    return w, V_arr, sweep, sqrt(off2 / fro2)
