"""Matrix geometric mean ``A # B`` of positive semidefinite matrices.

For positive definite inputs the closed form
``A^1/2 (A^-1/2 B A^-1/2)^1/2 A^1/2`` is used. For singular inputs the mean
is the limit of ``(A + eps I) # (B + eps I)``; it equals the largest
Hermitian ``W`` with ``[[A, W], [W, B]] >= 0``, which we compute exactly:

* zero when the images of ``A`` and ``B`` meet only in ``{0}``;
* otherwise, restricted to the image of ``A``, the mean of ``A`` with the
  generalized Schur complement of ``B`` onto that image.

:func:`geometric_mean_limit` evaluates the regularized path directly and is
kept as an independent cross-check.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError
from .linalg import (
    PD_TOL,
    RANK_TOL,
    as_hermitian,
    dagger,
    eig_herm,
    hermitize,
    image_intersection_trivial,
    is_pd,
    norm,
    psd_check,
)


@dataclass(frozen=True)
class RegularizationSchedule:
    """Descending ``eps`` values and the Cauchy stop for the limit path."""

    eps_values: tuple = (1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8, 1e-9)
    convergence_tol: float = 1e-7

    def __post_init__(self):
        eps = tuple(float(e) for e in self.eps_values)
        if not eps:
            raise ValueError("schedule needs at least one eps value")
        if any(b >= a for a, b in zip(eps, eps[1:])):
            raise ValueError("eps values must be strictly decreasing")
        if eps[-1] < 1e-12:
            raise ValueError("smallest eps must be >= 1e-12")
        if eps[0] <= 0:
            raise ValueError("eps values must be positive")
        object.__setattr__(self, "eps_values", eps)


def _pd_mean(A, B):
    # Work in the eigenbasis of A and factor B = L L^dagger. Then
    # A^-1/2 B A^-1/2 = M M^dagger with M = A^-1/2 L, and its square root
    # comes from an SVD of M. Squaring into M M^dagger first would square
    # the condition number and lose ~1e-3 relative on near-pure qubits.
    wa, Va = eig_herm(A)
    wb, Vb = eig_herm(B)
    L = dagger(Va) @ (Vb * np.sqrt(np.clip(wb, 0.0, None)))
    M = L / np.sqrt(wa)[:, None]
    Um, sv, _ = np.linalg.svd(M)
    inner = (Um * sv) @ dagger(Um)
    a_half = np.sqrt(wa)
    W1 = a_half[:, None] * inner * a_half[None, :]
    return hermitize(Va @ W1 @ dagger(Va))


def _split_support(A, rank_tol):
    w, V = eig_herm(A)
    keep = w > rank_tol * max(float(np.max(np.abs(w))), 0.0)
    return w[keep], V[:, keep], V[:, ~keep]


def _compressed_mean(A, B, rank_tol=RANK_TOL):
    # Compress onto the image of A; W must live there. The block condition
    # reduces to W1 A1^-1 W1 <= S with S the short of B onto that image.
    wa, U, K = _split_support(A, rank_tol)
    B11 = U.conj().T @ B @ U
    if K.shape[1]:
        B12 = U.conj().T @ B @ K
        B22 = hermitize(K.conj().T @ B @ K)
        w22, V22 = eig_herm(B22)
        scale = max(float(np.max(np.abs(w22))), float(np.max(np.abs(eig_herm(B)[0]))))
        inv = np.where(w22 > rank_tol * scale, 1.0 / np.where(w22 > 0, w22, 1.0), 0.0)
        B22_pinv = (V22 * inv) @ dagger(V22)
        S = hermitize(B11 - B12 @ B22_pinv @ dagger(B12))
    else:
        S = hermitize(B11)
    # Factor S = L L^dagger over its numerical range so the inner square root
    # becomes an SVD; a plain sqrt would lift rounding noise to ~1e-8.
    ws, Vs = eig_herm(S)
    keep = ws > rank_tol * max(float(np.max(np.abs(eig_herm(B)[0]))), 1e-300)
    if not np.any(keep):
        return np.zeros_like(B)
    L = Vs[:, keep] * np.sqrt(ws[keep])
    M = L / np.sqrt(wa)[:, None]
    Um, sv, _ = np.linalg.svd(M, full_matrices=False)
    inner = (Um * sv) @ dagger(Um)
    a_half = np.sqrt(wa)
    W1 = a_half[:, None] * inner * a_half[None, :]
    return hermitize(U @ W1 @ dagger(U))


def geometric_mean(A, B):
    """Matrix geometric mean of two PSD matrices of equal size.

    Examples
    --------
    >>> import numpy as np
    >>> np.round(geometric_mean(np.diag([1.0, 4.0]), np.diag([4.0, 1.0])).real, 12)
    array([[2., 0.],
           [0., 2.]])
    """
    A = as_hermitian(A)
    B = as_hermitian(B)
    if A.shape != B.shape:
        raise ValueError(f"dimension mismatch: {A.shape} vs {B.shape}")
    if is_pd(A, PD_TOL) and is_pd(B, PD_TOL):
        return _pd_mean(A, B)
    if image_intersection_trivial(A, B):
        return np.zeros_like(A)
    # compress onto the smaller support; the result is symmetric in A, B
    rank_a = _split_support(A, RANK_TOL)[0].size
    rank_b = _split_support(B, RANK_TOL)[0].size
    if rank_b < rank_a:
        return _compressed_mean(B, A)
    return _compressed_mean(A, B)


def geometric_mean_limit(A, B, schedule=None):
    """Evaluate ``(A + eps I) # (B + eps I)`` along a decreasing schedule.

    Returns the iterate at the first ``eps`` whose Frobenius distance to the
    previous iterate is below ``schedule.convergence_tol``.

    Raises
    ------
    ConvergenceError
        If the schedule is exhausted first; ``residual`` is the gap between
        the last two iterates. The regularized mean approaches a singular
        limit like ``sqrt(eps)``, so the default schedule only stops early
        for inputs whose singular directions carry no mean.
    """
    schedule = schedule or RegularizationSchedule()
    A = as_hermitian(A)
    B = as_hermitian(B)
    eye = np.eye(A.shape[0])
    prev = None
    gap = None
    for eps in schedule.eps_values:
        cur = _pd_mean(A + eps * eye, B + eps * eye)
        if prev is not None:
            gap = norm(cur - prev, "frobenius")
            if gap < schedule.convergence_tol:
                return cur
        prev = cur
    raise ConvergenceError(
        f"eps path did not settle by eps={schedule.eps_values[-1]:g}", residual=gap
    )


def maximality_witness(A, B, W, tol=None):
    """Whether ``[[A, W], [W, B]] >= 0`` (full block eigenvalue test)."""
    W = as_hermitian(W)
    blk = np.block([[as_hermitian(A), W], [W, as_hermitian(B)]])
    if tol is None:
        return bool(psd_check(blk))
    return bool(psd_check(blk, tol))
