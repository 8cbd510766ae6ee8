"""Invariant Riemannian geometry of the positive-definite cone.

The metric ``<H1, H2>_M = tr(M^-1 H1 M^-1 H2)`` is invariant under every
congruence ``M -> X M X^dagger``. Its geodesic distance is
``||log(A^-1/2 B A^-1/2)||_F`` and the geodesic midpoint is ``A # B``.

Qubit chart
-----------
``qubit_from_coords`` writes a 2x2 PD matrix as ``U D U^dagger`` with
``U = exp(i phi sz) exp(i theta sy)`` and
``D = diag(exp(-(alpha + r)/sqrt2), exp(-(alpha - r)/sqrt2))``. The
eigenvector of the smaller eigenvalue points along the Bloch direction with
polar angle ``2 theta`` and azimuth ``2 phi + pi``, so ``theta`` in
``[0, pi/2]`` and ``phi`` in ``[0, pi)`` already cover every matrix and
``phi`` is void at ``theta = 0`` and ``theta = pi/2``.

In this chart the metric is ``d alpha^2 + dr^2 + 2 sinh^2(r/sqrt2) dOmega^2``
with ``dOmega`` the round metric of the Bloch direction, a hyperbolic
3-space of curvature ``-1/2``. On the chart equator ``theta = pi/4`` with
``R = r/sqrt2`` and ``Psi = 2 phi`` the fixed-``alpha`` slice reads
``2 (dR^2 + sinh^2 R dPsi^2)``: twice the unit hyperbolic plane in polar
coordinates. :func:`hyperbolic_geodesic_r` and :func:`midpoint_radius` are
stated in those unit-curvature coordinates ``(R, Psi)``.
"""

from dataclasses import dataclass

import numpy as np

from .errors import SingularInputError
from .linalg import (
    PD_TOL,
    as_hermitian,
    dagger,
    eig_herm,
    eigvalsh,
    hermitize,
    is_pd,
)

SQRT2 = np.sqrt(2.0)
ATANH_GUARD = 1.0 - 1e-15


def _pd(M, name="matrix"):
    M = as_hermitian(M)
    if not is_pd(M, PD_TOL):
        raise SingularInputError(f"{name} must be positive definite", float(eigvalsh(M)[0]))
    return M


def _spectral(M, f):
    w, V = eig_herm(M)
    return hermitize((V * f(w)) @ dagger(V))


def metric_inner(M, H1, H2):
    """``tr(M^-1 H1 M^-1 H2)`` at base point ``M``."""
    M = _pd(M, "base point")
    H1 = as_hermitian(H1)
    H2 = as_hermitian(H2)
    Minv = _spectral(M, lambda w: 1.0 / w)
    return float(np.trace(Minv @ H1 @ Minv @ H2).real)


@dataclass(frozen=True)
class TangentVector:
    base: np.ndarray
    direction: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "base", _pd(self.base, "base point"))
        object.__setattr__(self, "direction", as_hermitian(self.direction))

    def norm(self):
        return float(np.sqrt(max(0.0, metric_inner(self.base, self.direction, self.direction))))


def _whiten(A, B):
    # A^-1/2 B A^-1/2 together with A^1/2 and A^-1/2
    w, V = eig_herm(A)
    a_half = (V * np.sqrt(w)) @ dagger(V)
    a_ihalf = (V / np.sqrt(w)) @ dagger(V)
    return hermitize(a_ihalf @ B @ a_ihalf), a_half


def spd_distance(A, B):
    """Geodesic distance ``||log(A^-1/2 B A^-1/2)||_F``.

    >>> round(spd_distance(np.eye(2), 4 * np.eye(2)), 4)
    1.9605
    """
    A = _pd(A, "A")
    B = _pd(B, "B")
    C, _ = _whiten(A, B)
    w = eigvalsh(C)
    return float(np.sqrt(np.sum(np.log(w) ** 2)))


def geodesic_point(A, B, t):
    """Point ``A^1/2 (A^-1/2 B A^-1/2)^t A^1/2`` on the geodesic from A to B."""
    A = _pd(A, "A")
    B = _pd(B, "B")
    C, a_half = _whiten(A, B)
    Ct = _spectral(C, lambda w: np.power(w, t))
    return hermitize(a_half @ Ct @ a_half)


def path_length(curve, t0=0.0, t1=1.0, samples=1000, h=1e-6):
    """Length of a PD-valued curve ``t -> curve(t)`` under the invariant metric.

    The speed is taken from central differences and integrated with the
    trapezoidal rule on ``samples`` points.
    """
    ts = np.linspace(t0, t1, samples)
    speed = np.empty(samples)
    for k, t in enumerate(ts):
        dM = hermitize((np.asarray(curve(t + h)) - np.asarray(curve(t - h))) / (2 * h))
        speed[k] = np.sqrt(max(0.0, metric_inner(curve(t), dM, dM)))
    return float(np.trapezoid(speed, ts)) if hasattr(np, "trapezoid") else float(np.trapz(speed, ts))


@dataclass(frozen=True)
class QubitCoords:
    alpha: float
    r: float
    theta: float
    phi: float
    degenerate: bool = False

    def __post_init__(self):
        if self.r < 0:
            raise ValueError("r must be >= 0")


def _chart_unitary(theta, phi):
    ez = np.diag([np.exp(1j * phi), np.exp(-1j * phi)])
    c, s = np.cos(theta), np.sin(theta)
    ey = np.array([[c, s], [-s, c]], dtype=np.complex128)
    return ez @ ey


def qubit_from_coords(c):
    U = _chart_unitary(c.theta, c.phi)
    d = np.exp(-np.array([c.alpha + c.r, c.alpha - c.r]) / SQRT2)
    return hermitize((U * d) @ dagger(U))


def alpha_q(r):
    """``alpha`` giving unit trace at radius ``r``: ``sqrt2 log(2 cosh(r/sqrt2))``."""
    return float(SQRT2 * np.log(2.0 * np.cosh(r / SQRT2)))


def unit_trace_qubit(r, theta, phi):
    return qubit_from_coords(QubitCoords(alpha_q(r), r, theta, phi))


def coords_from_qubit(rho, degenerate_tol=1e-10):
    """Inverse chart with ``theta`` in ``[0, pi/2]`` and ``phi`` in ``[0, pi)``.

    A scalar matrix has ``r = 0`` and no defined angles; they are returned as
    zero with ``degenerate=True``. At the poles ``theta = 0, pi/2`` the
    angle ``phi`` is void and returned as zero.
    """
    rho = _pd(rho, "rho")
    if rho.shape != (2, 2):
        raise ValueError("coords_from_qubit needs a 2x2 matrix")
    w, V = eig_herm(rho)
    l0, l1 = np.log(w)
    alpha = float(-(l0 + l1) / SQRT2)
    r = float((l1 - l0) / SQRT2)
    if r <= degenerate_tol:
        return QubitCoords(alpha, 0.0, 0.0, 0.0, degenerate=True)
    u = V[:, 0]
    P = np.outer(u, u.conj())
    z = float((P[0, 0] - P[1, 1]).real)
    off = complex(P[0, 1])
    theta = 0.5 * float(np.arctan2(2.0 * abs(off), z))
    if abs(off) <= 1e-14:
        return QubitCoords(alpha, r, theta, 0.0)
    phi = 0.5 * float(np.angle(-off)) % np.pi
    return QubitCoords(alpha, r, theta, phi)


def _arctanh_ratio(num, den_minus_num):
    # arctanh(x) = log((1 + x) / (1 - x)) / 2 given x = n / d through n and
    # d - n, which callers form without cancellation
    num = np.asarray(num, dtype=float)
    dmn = np.asarray(den_minus_num, dtype=float)
    den = num + dmn
    if np.any(dmn <= (1.0 - ATANH_GUARD) * den) or np.any(num <= -ATANH_GUARD * den):
        raise ValueError("arctanh argument outside (-1, 1)")
    return 0.5 * np.log((den + num) / dmn)


def _one_minus_tanh(r0):
    return 2.0 / (np.exp(2.0 * r0) + 1.0)


def hyperbolic_geodesic_r(phi, r0, dphi):
    """Radius along the geodesic joining ``(r0, 0)`` and ``(r0, dphi)``.

    ``r(phi) = arctanh(tanh(r0) / D(phi))`` with
    ``D = cos(phi) - sin(phi) (cos(dphi) - 1) / sin(dphi)``, in polar
    coordinates of the unit-curvature hyperbolic plane. ``phi`` may be a
    scalar or an array in ``[0, dphi]``.

    ``D = cos(phi - dphi/2) / cos(dphi/2)``, so
    ``D - 1 = 2 sin(phi/2) sin((dphi - phi)/2) / cos(dphi/2)``; using that
    form keeps ``r(dphi) = r0`` to rounding even when ``tanh(r0)`` is 1 - 1e-9.
    """
    if r0 <= 0:
        raise ValueError("r0 must be positive")
    phi = np.asarray(phi, dtype=float)
    h = 0.5 * dphi
    D = np.cos(phi - h) / np.cos(h)
    d_minus_1 = 2.0 * np.sin(0.5 * phi) * np.sin(0.5 * (dphi - phi)) / np.cos(h)
    if np.any(D <= 0):
        raise ValueError("arctanh argument outside (-1, 1)")
    # x = tanh(r0) / D, so D - tanh(r0) = (D - 1) + (1 - tanh(r0))
    out = _arctanh_ratio(np.tanh(r0), d_minus_1 + _one_minus_tanh(r0))
    return float(out) if out.ndim == 0 else out


def midpoint_radius(r0, dphi):
    """Radius of the geodesic midpoint: ``arctanh(tanh(r0) cos(dphi/2))``."""
    if r0 <= 0:
        raise ValueError("r0 must be positive")
    c = np.cos(0.5 * dphi)
    one_minus_c = 2.0 * np.sin(0.25 * dphi) ** 2
    # 1 - tanh(r0) c = (1 - c) + c (1 - tanh(r0))
    return float(_arctanh_ratio(np.tanh(r0) * c, one_minus_c + c * _one_minus_tanh(r0)))


def equal_purity_fgm(r0, dphi):
    """Exact ``F_GM`` of two unit-trace qubits on the chart equator.

    Both states sit at chart radius ``r0`` with ``theta = pi/4`` and azimuths
    ``dphi`` apart.
    """
    R0 = r0 / SQRT2
    return float(np.cosh(midpoint_radius(R0, 2.0 * dphi)) / np.cosh(R0))


def fgm_asymptotic(r0, dphi):
    """Leading large-``r0`` term of :func:`equal_purity_fgm`.

    ``2 cosh(arctanh(cos dphi)) exp(-r0/sqrt2) = 2 exp(-r0/sqrt2) / sin(dphi)``.
    """
    if r0 <= 0:
        raise ValueError("r0 must be positive")
    if not 0 < dphi < np.pi:
        raise ValueError("dphi must lie in (0, pi)")
    return float(2.0 * np.cosh(_arctanh_ratio(np.cos(dphi), 2.0 * np.sin(0.5 * dphi) ** 2)) * np.exp(-r0 / SQRT2))


def least_squares_objective(rho, sigma, tau):
    return spd_distance(rho, tau) ** 2 + spd_distance(tau, sigma) ** 2


__all__ = [
    "QubitCoords",
    "TangentVector",
    "alpha_q",
    "coords_from_qubit",
    "equal_purity_fgm",
    "fgm_asymptotic",
    "geodesic_point",
    "hyperbolic_geodesic_r",
    "least_squares_objective",
    "metric_inner",
    "midpoint_radius",
    "path_length",
    "qubit_from_coords",
    "spd_distance",
    "unit_trace_qubit",
]
