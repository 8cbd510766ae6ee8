"""Pure-Python cyclic Jacobi sweep, used when the compiled kernel is absent.

Same rotation sequence and stopping rule as ``_jacobi.pyx``; results agree
with the compiled kernel to rounding.
"""

import math

import numpy as np


def jacobi_eigh(A, max_sweeps, tol):
    """Diagonalize ``A`` in place; return ``(w, V, sweeps, off)``."""
    n = A.shape[0]
    V = np.eye(n, dtype=np.complex128)
    fro2 = float(np.sum(A.real**2 + A.imag**2))
    if fro2 == 0.0:
        return np.zeros(n), V, 0, 0.0
    thresh = 1e-17 * math.sqrt(fro2)
    iu = np.triu_indices(n, 1)

    sweep = 0
    while True:
        upper = A[iu]
        off2 = 2.0 * float(np.sum(upper.real**2 + upper.imag**2))
        if off2 <= tol * tol * fro2 or sweep >= max_sweeps:
            break
        sweep += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                h = A[p, q]
                absh = abs(h)
                if absh <= thresh:
                    continue
                a = A[p, p].real
                b = A[q, q].real
                d = h.conjugate() / absh
                tau = (b - a) / (2.0 * absh)
                if tau >= 0:
                    t = 1.0 / (tau + math.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c

                colp = A[:, p].copy()
                colq = A[:, q]
                A[:, p] = c * colp - s * d * colq
                A[:, q] = s * colp + c * d * colq
                A[p, :] = A[:, p].conj()
                A[q, :] = A[:, q].conj()
                A[p, p] = a - t * absh
                A[q, q] = b + t * absh
                A[p, q] = 0.0
                A[q, p] = 0.0

                vp = V[:, p].copy()
                vq = V[:, q]
                V[:, p] = c * vp - s * d * vq
                V[:, q] = s * vp + c * d * vq

    return A.diagonal().real.copy(), V, sweep, math.sqrt(off2 / fro2)
