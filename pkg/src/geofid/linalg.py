"""Dense complex Hermitian linear algebra.

Matrices are plain ``numpy`` complex arrays. Anything meant to be Hermitian
is passed through :func:`hermitize` before further use so that rounding
drift never breaks a downstream PSD test.

Tolerances are scale-relative: ``PSD_TOL``, ``PD_TOL`` multiply
``max(1, ||H||_op)`` and ``RANK_TOL`` multiplies the largest singular value.
"""

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import ConvergenceError, InvalidStateError, NotHermitianError, SingularInputError

PSD_TOL = 1e-10
PD_TOL = 1e-9
RANK_TOL = 1e-9
HERMITIAN_INPUT_TOL = 1e-9

JACOBI_MAX_SWEEPS = 100
JACOBI_TOL = 1e-15


def dagger(M):
    return np.conj(np.swapaxes(M, -1, -2))


def hermitize(M):
    """Return ``(M + M^dagger) / 2`` as a complex array."""
    M = np.asarray(M, dtype=np.complex128)
    return 0.5 * (M + dagger(M))


def as_hermitian(M, tol=HERMITIAN_INPUT_TOL):
    """Validate a square, Hermitian-within-``tol`` matrix and hermitize it."""
    M = np.asarray(M, dtype=np.complex128)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] < 1:
        raise NotHermitianError(f"expected a square matrix, got shape {M.shape}")
    asym = float(np.max(np.abs(M - dagger(M))))
    if asym > tol:
        raise NotHermitianError(f"matrix is not Hermitian (max entrywise asymmetry {asym:.3e})")
    return hermitize(M)


def as_density(M, trace_tol=1e-12, psd_tol=PSD_TOL):
    """Validate a density matrix: Hermitian, PSD within ``psd_tol``, unit trace."""
    H = as_hermitian(M)
    tr = float(np.trace(H).real)
    if abs(tr - 1.0) > trace_tol:
        raise InvalidStateError(f"trace is {tr!r}, expected 1")
    report = psd_check(H, psd_tol)
    if not report:
        raise InvalidStateError(f"matrix is not PSD (min eigenvalue {report.min_eigenvalue:.3e})")
    return H


def as_unitary(U, tol=1e-12):
    U = np.asarray(U, dtype=np.complex128)
    if U.ndim != 2 or U.shape[0] != U.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {U.shape}")
    n = U.shape[0]
    err = np.linalg.norm(dagger(U) @ U - np.eye(n))
    if err > tol * n:
        raise ValueError(f"matrix is not unitary (||U^dag U - I||_F = {err:.3e})")
    return U


def as_prob_vector(p, tol=1e-12):
    p = np.asarray(p, dtype=float)
    if p.ndim != 1:
        raise ValueError("probability vector must be one-dimensional")
    if np.any(p < 0):
        raise ValueError("probability vector has negative entries")
    if abs(p.sum() - 1.0) > tol:
        raise ValueError(f"probability vector sums to {p.sum()!r}")
    return p


def eig_herm(H):
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Parameters
    ----------
    H : array_like, shape (n, n)
        Hermitian matrix. Only its Hermitian part is used.

    Returns
    -------
    w : ndarray, shape (n,)
        Eigenvalues in ascending order.
    V : ndarray, shape (n, n)
        Unitary matrix whose columns are the matching eigenvectors, so that
        ``H = V @ diag(w) @ V^dagger``.

    Raises
    ------
    ConvergenceError
        If the off-diagonal mass is still above tolerance after
        ``JACOBI_MAX_SWEEPS`` sweeps.
    """
    A = np.ascontiguousarray(hermitize(H))
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise NotHermitianError(f"expected a square matrix, got shape {A.shape}")
    w, V, sweeps, off = _kernels.jacobi_eigh(A, JACOBI_MAX_SWEEPS, JACOBI_TOL)
    if sweeps >= JACOBI_MAX_SWEEPS and off > JACOBI_TOL:
        raise ConvergenceError(f"Jacobi did not converge in {sweeps} sweeps", residual=off)
    order = np.argsort(w, kind="stable")
    return w[order], V[:, order]


def eigvalsh(H):
    return eig_herm(H)[0]


def _scale(H):
    return max(1.0, norm(H, "operator"))


def _denoise(w):
    # eigenvalues within rounding of zero are zero; sqrt would lift 1e-17 to 3e-9
    floor = w.size * np.finfo(float).eps * float(np.max(np.abs(w)))
    return np.where(w > floor, w, 0.0)


_FUNCS = {
    "sqrt": lambda w, t: np.sqrt(_denoise(w)),
    "inv_sqrt": lambda w, t: 1.0 / np.sqrt(w),
    "log": lambda w, t: np.log(w),
    "inv": lambda w, t: 1.0 / w,
    "exp": lambda w, t: np.exp(w),
    "power": lambda w, t: np.power(_denoise(w), t),
}
_NEEDS_PD = {"inv_sqrt", "log", "inv"}


def matrix_function(H, f, t=None):
    """Apply a scalar function to a Hermitian matrix through its spectrum.

    ``f`` is one of ``"sqrt"``, ``"inv_sqrt"``, ``"log"``, ``"inv"``,
    ``"exp"`` or ``"power"`` (with exponent ``t``). Negative rounding noise
    in the spectrum, and any eigenvalue within ``n * machine eps`` of zero
    relative to the largest, is set to zero for ``sqrt`` and non-negative powers;
    ``inv``, ``inv_sqrt``, ``log`` and negative powers require a positive
    definite input and raise :class:`SingularInputError` otherwise.
    """
    if f not in _FUNCS:
        raise ValueError(f"unknown matrix function {f!r}")
    if f == "power" and t is None:
        raise ValueError("power needs an exponent t")
    w, V = eig_herm(H)
    needs_pd = f in _NEEDS_PD or (f == "power" and t < 0)
    if needs_pd and w[0] <= PD_TOL * max(1.0, float(np.max(np.abs(w)))):
        raise SingularInputError(f"{f} needs a positive definite matrix", float(w[0]))
    if f == "power" and t < 0:
        fw = np.power(w, t)
    else:
        fw = _FUNCS[f](w, t)
    return hermitize((V * fw) @ dagger(V))


def sqrtm(H):
    return matrix_function(H, "sqrt")


def inv_sqrtm(H):
    return matrix_function(H, "inv_sqrt")


def logm(H):
    return matrix_function(H, "log")


def invm(H):
    return matrix_function(H, "inv")


def powm(H, t):
    return matrix_function(H, "power", t)


@dataclass(frozen=True)
class PsdReport:
    """Outcome of :func:`psd_check`; truthy iff the matrix passed."""

    ok: bool
    min_eigenvalue: float
    threshold: float

    def __bool__(self):
        return self.ok


def psd_check(H, tol=PSD_TOL):
    """PSD test: min eigenvalue >= ``-tol * max(1, ||H||_op)``."""
    w = eigvalsh(H)
    threshold = -tol * max(1.0, float(np.max(np.abs(w))))
    return PsdReport(bool(w[0] >= threshold), float(w[0]), threshold)


def is_pd(H, tol=PD_TOL):
    w = eigvalsh(H)
    return bool(w[0] > tol * max(1.0, float(np.max(np.abs(w)))))


def block(A, X, B):
    """The block matrix ``[[A, X], [X^dagger, B]]``."""
    X = np.asarray(X, dtype=np.complex128)
    return np.block([[np.asarray(A, dtype=np.complex128), X], [dagger(X), np.asarray(B, dtype=np.complex128)]])


def schur_feasibility(A, X, B, tol=PSD_TOL):
    """Decide ``[[A, X], [X^dagger, B]] >= 0``.

    For positive definite ``B`` this uses the Schur complement
    ``A - X B^-1 X^dagger >= 0``; otherwise it falls back to the full
    block eigenvalue test.
    """
    if is_pd(B):
        X = np.asarray(X, dtype=np.complex128)
        comp = hermitize(A - X @ invm(B) @ dagger(X))
        return bool(psd_check(comp, tol))
    return bool(psd_check(block(A, X, B), tol))


def norm(M, kind="trace"):
    """Trace, Frobenius or operator norm of a (not necessarily square) matrix."""
    M = np.asarray(M, dtype=np.complex128)
    if kind == "frobenius":
        return float(np.sqrt(np.sum(M.real**2 + M.imag**2)))
    if kind == "trace":
        return float(np.sum(np.linalg.svd(M, compute_uv=False)))
    if kind == "operator":
        if M.size == 0:
            return 0.0
        return float(np.linalg.svd(M, compute_uv=False)[0])
    raise ValueError(f"unknown norm kind {kind!r}")


def compose(A, B, mode="kron"):
    """Tensor product (``"kron"``) or direct sum (``"dirsum"``)."""
    A = np.asarray(A, dtype=np.complex128)
    B = np.asarray(B, dtype=np.complex128)
    if mode == "kron":
        return np.kron(A, B)
    if mode == "dirsum":
        out = np.zeros((A.shape[0] + B.shape[0], A.shape[1] + B.shape[1]), dtype=np.complex128)
        out[: A.shape[0], : A.shape[1]] = A
        out[A.shape[0] :, A.shape[1] :] = B
        return out
    raise ValueError(f"unknown composition mode {mode!r}")


def support_basis(A, rank_tol=RANK_TOL):
    """Orthonormal basis (columns) of the image of a PSD matrix."""
    w, V = eig_herm(A)
    wmax = float(np.max(np.abs(w))) if w.size else 0.0
    if wmax == 0.0:
        return V[:, :0]
    return V[:, w > rank_tol * wmax]


def numerical_rank(M, rank_tol=RANK_TOL):
    s = np.linalg.svd(np.asarray(M, dtype=np.complex128), compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > rank_tol * s[0]))


def image_intersection_trivial(A, B, rank_tol=RANK_TOL):
    """True iff ``Image(A) & Image(B) == {0}`` for PSD ``A`` and ``B``."""
    UA = support_basis(A, rank_tol)
    UB = support_basis(B, rank_tol)
    ra, rb = UA.shape[1], UB.shape[1]
    if ra == 0 or rb == 0:
        return True
    if ra + rb > UA.shape[0]:
        return False
    return numerical_rank(np.hstack([UA, UB]), rank_tol) == ra + rb
