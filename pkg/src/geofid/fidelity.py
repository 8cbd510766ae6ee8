"""Fidelity measures between density matrices and their closed-form companions.

Three quantizations of the classical fidelity are provided, ordered
``matsumoto <= holevo <= uhlmann``:

* Uhlmann   ``||rho^1/2 sigma^1/2||_1``
* Holevo    ``tr(rho^1/4 sigma^1/2 rho^1/4)``
* Matsumoto ``tr(rho # sigma)``
"""

from dataclasses import dataclass

import numpy as np

from .errors import SingularInputError
from .geomean import geometric_mean
from .linalg import (
    PD_TOL,
    as_density,
    as_hermitian,
    as_prob_vector,
    dagger,
    eig_herm,
    eigvalsh,
    hermitize,
    inv_sqrtm,
    invm,
    is_pd,
    norm,
    sqrtm,
)

PURE_OVERLAP_TOL = 1e-12


def _clip01(x, slack=1e-12):
    # absorb rounding just outside [0, 1]; larger excursions are bugs and pass through
    x = float(x)
    if -slack <= x < 0.0:
        return 0.0
    if 1.0 < x <= 1.0 + slack:
        return 1.0
    return x


def _pair(rho, sigma):
    rho = as_density(rho)
    sigma = as_density(sigma)
    if rho.shape != sigma.shape:
        raise ValueError(f"dimension mismatch: {rho.shape} vs {sigma.shape}")
    return rho, sigma


def _require_pd(M, name):
    if not is_pd(M, PD_TOL):
        raise SingularInputError(f"{name} must be positive definite", float(eigvalsh(M)[0]))


def classical_fidelity(p, q):
    """Bhattacharyya coefficient ``sum_i sqrt(p_i q_i)``.

    >>> round(classical_fidelity([0.5, 0.5], [0.25, 0.75]), 7)
    0.9659258
    """
    p = as_prob_vector(p)
    q = as_prob_vector(q)
    if p.shape != q.shape:
        raise ValueError(f"length mismatch: {p.size} vs {q.size}")
    return _clip01(np.sum(np.sqrt(p * q)))


def uhlmann_fidelity(rho, sigma):
    """Sum of singular values of ``rho^1/2 sigma^1/2``."""
    rho, sigma = _pair(rho, sigma)
    return _clip01(norm(sqrtm(rho) @ sqrtm(sigma), "trace"))


def holevo_fidelity(rho, sigma):
    # tr(rho^1/4 sigma^1/2 rho^1/4) = tr(rho^1/2 sigma^1/2) by cyclicity
    rho, sigma = _pair(rho, sigma)
    return _clip01(np.trace(sqrtm(rho) @ sqrtm(sigma)).real)


def matsumoto_fidelity(rho, sigma):
    """Trace of the matrix geometric mean; zero when supports meet only at 0."""
    rho, sigma = _pair(rho, sigma)
    return _clip01(np.trace(geometric_mean(rho, sigma)).real)


def trace_distance(rho, sigma):
    rho, sigma = _pair(rho, sigma)
    return _clip01(0.5 * np.sum(np.abs(eigvalsh(rho - sigma))))


def pure_state_fidelities(psi, phi):
    """Exact ``(F, F_H, F_GM)`` for two pure states given as vectors.

    ``F = |<psi|phi>|``, ``F_H = F**2`` and ``F_GM`` is 1 for parallel
    vectors and 0 otherwise.
    """
    psi = _unit(psi)
    phi = _unit(phi)
    if psi.shape != phi.shape:
        raise ValueError("dimension mismatch")
    o = float(min(1.0, abs(np.vdot(psi, phi))))
    return o, o * o, 1.0 if o >= 1.0 - PURE_OVERLAP_TOL else 0.0


def _unit(v):
    v = np.asarray(v, dtype=np.complex128).reshape(-1)
    n = np.linalg.norm(v)
    if abs(n - 1.0) > 1e-10:
        raise ValueError(f"state vector has norm {n!r}, expected 1")
    return v


def pure_mixed_fidelities(rho, psi):
    """``(F, F_H, F_GM)`` between a PD state and a pure state ``psi``."""
    rho = as_density(rho)
    psi = _unit(psi)
    _require_pd(rho, "rho")
    f = np.sqrt(max(0.0, np.vdot(psi, rho @ psi).real))
    fh = np.vdot(psi, sqrtm(rho) @ psi).real
    fgm = np.vdot(psi, invm(rho) @ psi).real ** -0.5
    return float(f), float(fh), float(fgm)


def alberti_objective(rho, sigma, tau):
    """``<tau, rho> <tau^-1, sigma>``; its infimum over PD ``tau`` is ``F**2``."""
    rho, sigma = _pair(rho, sigma)
    tau = as_hermitian(tau)
    _require_pd(tau, "tau")
    return float(np.trace(tau @ rho).real * np.trace(invm(tau) @ sigma).real)


def alberti_optimizer(rho, sigma):
    rho, sigma = _pair(rho, sigma)
    _require_pd(rho, "rho")
    return geometric_mean(invm(rho), sigma)


def uhlmann_gradient(rho, sigma):
    """Gradient of ``F(., sigma)`` at ``rho``: ``(rho^-1 # sigma) / 2``."""
    rho, sigma = _pair(rho, sigma)
    _require_pd(rho, "rho")
    _require_pd(sigma, "sigma")
    return 0.5 * geometric_mean(invm(rho), sigma)


@dataclass(frozen=True)
class Povm:
    elements: tuple

    def completeness_error(self):
        n = self.elements[0].shape[0]
        return float(np.max(np.abs(sum(self.elements) - np.eye(n))))

    def probabilities(self, rho):
        p = np.array([np.trace(M @ rho).real for M in self.elements])
        p = np.clip(p, 0.0, None)
        return p / p.sum()


def optimal_povm(rho, sigma):
    """Projective measurement in the eigenbasis of ``rho^-1 # sigma``.

    Returns ``(povm, p, q)`` with ``classical_fidelity(p, q)`` equal to the
    Uhlmann fidelity.
    """
    rho, sigma = _pair(rho, sigma)
    _require_pd(rho, "rho")
    _require_pd(sigma, "sigma")
    _, V = eig_herm(geometric_mean(invm(rho), sigma))
    elements = tuple(np.outer(V[:, i], V[:, i].conj()) for i in range(V.shape[1]))
    povm = Povm(elements)
    return povm, povm.probabilities(rho), povm.probabilities(sigma)


def matsumoto_via_rotation(rho, sigma):
    """Unitary ``U`` with ``F(rho, U sigma U^dagger) = F_GM(rho, sigma)``.

    ``U = rho^-1/2 (sigma # rho) sigma^-1/2``. Returns ``(U, value)``.
    """
    rho, sigma = _pair(rho, sigma)
    _require_pd(rho, "rho")
    _require_pd(sigma, "sigma")
    U = inv_sqrtm(rho) @ geometric_mean(sigma, rho) @ inv_sqrtm(sigma)
    value = uhlmann_fidelity(rho, hermitize(U @ sigma @ dagger(U)))
    return U, value


@dataclass(frozen=True)
class FidelityReport:
    uhlmann: float
    holevo: float
    matsumoto: float
    trace_distance: float

    def ordering_ok(self, tol=1e-8):
        return self.matsumoto <= self.holevo + tol and self.holevo <= self.uhlmann + tol

    def as_dict(self):
        return {
            "uhlmann": self.uhlmann,
            "holevo": self.holevo,
            "matsumoto": self.matsumoto,
            "trace_distance": self.trace_distance,
        }


def fidelity_report(rho, sigma):
    rho, sigma = _pair(rho, sigma)
    return FidelityReport(
        uhlmann=uhlmann_fidelity(rho, sigma),
        holevo=holevo_fidelity(rho, sigma),
        matsumoto=matsumoto_fidelity(rho, sigma),
        trace_distance=trace_distance(rho, sigma),
    )
