"""Primal-dual interior-point solver for the two fidelity SDPs.

Primal (``kind="matsumoto"``)::

    max tr W   s.t.  [[rho, W], [W, sigma]] >= 0,  W Hermitian

Primal (``kind="uhlmann"``)::

    max Re tr X   s.t.  [[rho, X], [X^dagger, sigma]] >= 0

Both share the dual::

    min  <Y, rho>/2 + <Z, sigma>/2   s.t.  [[Y, -X], [-X^dagger, Z]] >= 0

with ``X = I + A``, ``A`` anti-Hermitian (matsumoto), or ``X = I`` (uhlmann).

The primal is written as ``S(x) = F0 + sum_i x_i F_i`` over a real basis of
the off-diagonal variable. The dual variable is ``G = [[Y, -X], [-X^dagger,
Z]] / 2``. Each iteration takes an HKM Newton step towards ``S G = mu I``
from a strictly feasible start, and keeps dual feasibility exact by
projecting the dual step onto the constraint subspace.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import SolverError
from .linalg import PD_TOL, as_density, dagger, eig_herm, hermitize, is_pd

KINDS = ("matsumoto", "uhlmann")


@dataclass(frozen=True)
class FidelitySdp:
    kind: str
    rho: np.ndarray
    sigma: np.ndarray

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")
        rho = as_density(self.rho)
        sigma = as_density(self.sigma)
        if rho.shape != sigma.shape:
            raise ValueError(f"dimension mismatch: {rho.shape} vs {sigma.shape}")
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "sigma", sigma)

    @property
    def dim(self):
        return self.rho.shape[0]


@dataclass(frozen=True)
class SolverOptions:
    gap_tol: float = 1e-8
    max_iter: int = 200
    regularize: float = 1e-7
    step_fraction: float = 0.95
    damping: float = 1e-12
    centering: float = 0.1

    def __post_init__(self):
        if not self.gap_tol > 0:
            raise ValueError("gap_tol must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        if self.regularize < 0:
            raise ValueError("regularize must be >= 0")
        if not 0 < self.step_fraction < 1:
            raise ValueError("step_fraction must lie in (0, 1)")


@dataclass
class SdpSolution:
    kind: str
    primal: np.ndarray  # W (matsumoto) or X (uhlmann)
    dual_Y: np.ndarray
    dual_Z: np.ndarray
    dual_A: np.ndarray
    primal_value: float
    dual_value: float
    gap: float
    iterations: int
    epsilon: float = 0.0
    trace_log: list = field(default_factory=list)

    @property
    def dual_X(self):
        return np.eye(self.dual_A.shape[0]) + self.dual_A


def regularize_state(rho, eps):
    """``(rho + eps I) / (1 + n eps)``: a PD state at distance O(eps)."""
    n = rho.shape[0]
    return hermitize((rho + eps * np.eye(n)) / (1.0 + n * eps))


def effective_states(problem, opts):
    """The pair actually solved and the ``eps`` applied (0 when both are PD)."""
    rho, sigma = problem.rho, problem.sigma
    if is_pd(rho, PD_TOL) and is_pd(sigma, PD_TOL):
        return rho, sigma, 0.0
    eps = opts.regularize
    if eps == 0.0:
        return rho, sigma, 0.0
    return regularize_state(rho, eps), regularize_state(sigma, eps), eps


def _hermitian_basis(n):
    out = []
    for k in range(n):
        E = np.zeros((n, n), dtype=np.complex128)
        E[k, k] = 1.0
        out.append(E)
    s = 1.0 / np.sqrt(2.0)
    for k in range(n):
        for l in range(k + 1, n):
            E = np.zeros((n, n), dtype=np.complex128)
            E[k, l] = E[l, k] = s
            out.append(E)
            E = np.zeros((n, n), dtype=np.complex128)
            E[k, l] = -1j * s
            E[l, k] = 1j * s
            out.append(E)
    return out


def _complex_basis(n):
    out = []
    for k in range(n):
        for l in range(n):
            for phase in (1.0, 1j):
                E = np.zeros((n, n), dtype=np.complex128)
                E[k, l] = phase
                out.append(E)
    return out


def _lift(E):
    n = E.shape[0]
    F = np.zeros((2 * n, 2 * n), dtype=np.complex128)
    F[:n, n:] = E
    F[n:, :n] = dagger(E)
    return F


def _inv_and_isqrt(S):
    w, V = eig_herm(S)
    if w[0] <= 0:
        return None, None
    return (V / w) @ dagger(V), (V / np.sqrt(w)) @ dagger(V)


def _max_step(S_isqrt, dS):
    # largest alpha with S + alpha dS >= 0, via the spectrum of S^-1/2 dS S^-1/2
    lam = eig_herm(hermitize(S_isqrt @ dS @ S_isqrt))[0][0]
    return np.inf if lam >= 0 else -1.0 / lam


def _project_dual_step(dG, n, kind):
    dG = hermitize(dG)
    off = dG[:n, n:]
    off = 0.5 * (off - dagger(off)) if kind == "matsumoto" else np.zeros_like(off)
    dG[:n, n:] = off
    dG[n:, :n] = dagger(off)
    return dG


def solve(problem, opts=None):
    """Solve a fidelity SDP; see the module docstring for the programs.

    Raises
    ------
    SolverError
        If the start point is not strictly feasible (the message names the
        offending block) or the iteration cap is reached; ``trace_log``
        holds one ``(mu, gap)`` pair per iteration.
    """
    opts = opts or SolverOptions()
    rho, sigma, eps = effective_states(problem, opts)
    n = problem.dim
    basis = _hermitian_basis(n) if problem.kind == "matsumoto" else _complex_basis(n)
    b = np.array([np.trace(E).real for E in basis])
    Fs = np.array([_lift(E) for E in basis])
    Fflat = Fs.reshape(len(basis), -1)

    S = np.zeros((2 * n, 2 * n), dtype=np.complex128)
    S[:n, :n] = rho
    S[n:, n:] = sigma
    F0 = S.copy()
    eye = np.eye(n)
    G = 0.5 * np.block([[2 * eye, -eye], [-eye, 2 * eye]]).astype(np.complex128)
    x = np.zeros(len(basis))

    S_inv, S_isqrt = _inv_and_isqrt(S)
    if S_inv is None:
        raise SolverError(
            "infeasible start: primal block diag(rho, sigma) is not positive definite",
            block="primal",
        )
    G_inv, G_isqrt = _inv_and_isqrt(G)
    if G_inv is None:  # pragma: no cover - G0 is PD by construction
        raise SolverError("infeasible start: dual block", block="dual")

    log = []
    dim2 = 2 * n
    it = 0
    while True:
        gap = float(np.trace(S @ G).real)
        if gap <= opts.gap_tol:
            break
        if it >= opts.max_iter:
            raise SolverError(
                f"no convergence in {opts.max_iter} iterations (gap {gap:.3e})",
                trace_log=log,
            )
        it += 1
        mu = opts.centering * gap / dim2

        T = G @ Fs @ S_inv
        M = (Fflat.conj() @ T.reshape(len(basis), -1).T).real
        M = 0.5 * (M + M.T) + opts.damping * np.eye(len(basis))
        R = mu * S_inv - G
        r = (Fflat.conj() @ R.reshape(-1)).real
        dx = np.linalg.solve(M, r)
        dS = np.tensordot(dx, Fs, axes=1)
        dG = R - 0.5 * (G @ dS @ S_inv + S_inv @ dS @ G)
        dG = _project_dual_step(dG, n, problem.kind)

        ap = min(1.0, opts.step_fraction * _max_step(S_isqrt, dS))
        ad = min(1.0, opts.step_fraction * _max_step(G_isqrt, dG))
        x = x + ap * dx
        S = hermitize(F0 + np.tensordot(x, Fs, axes=1))
        G = hermitize(G + ad * dG)
        log.append((mu, gap))

        S_inv, S_isqrt = _inv_and_isqrt(S)
        G_inv, G_isqrt = _inv_and_isqrt(G)
        if S_inv is None or G_inv is None:
            which = "primal" if S_inv is None else "dual"
            raise SolverError(f"lost strict feasibility in the {which} block", trace_log=log, block=which)

    log.append((opts.centering * gap / dim2, gap))
    primal = sum(xi * E for xi, E in zip(x, basis))
    Y = hermitize(2 * G[:n, :n])
    Z = hermitize(2 * G[n:, n:])
    X = -2 * G[:n, n:]
    if problem.kind == "matsumoto":
        A = X - eye
        A = 0.5 * (A - dagger(A))
        primal = hermitize(primal)
    else:
        A = np.zeros((n, n), dtype=np.complex128)
    primal_value = float(b @ x)
    dual_value = dual_objective(rho, sigma, Y, Z)
    return SdpSolution(
        kind=problem.kind,
        primal=primal,
        dual_Y=Y,
        dual_Z=Z,
        dual_A=A,
        primal_value=primal_value,
        dual_value=dual_value,
        gap=dual_value - primal_value,
        iterations=it,
        epsilon=eps,
        trace_log=log,
    )


def dual_objective(rho, sigma, Y, Z):
    return float(0.5 * np.trace(Y @ rho).real + 0.5 * np.trace(Z @ sigma).real)


@dataclass(frozen=True)
class VerificationReport:
    primal_residual: float
    dual_residual: float
    constraint_residual: float
    weak_duality_slack: float
    gap: float
    tol: float = 1e-8

    @property
    def primal_feasible(self):
        return self.primal_residual <= self.tol

    @property
    def dual_feasible(self):
        return self.dual_residual <= self.tol and self.constraint_residual <= 1e-10

    @property
    def ok(self):
        return self.primal_feasible and self.dual_feasible and self.weak_duality_slack >= -self.tol

    def __bool__(self):
        return self.ok


def _neg_part(M):
    return max(0.0, -float(eig_herm(M)[0][0]))


def _dual_block(Y, Z, X):
    return np.block([[Y, X], [dagger(X), Z]])


def verify_solution(problem, sol, opts=None, tol=1e-8):
    """Recheck a solution with full eigenvalue tests; never raises."""
    opts = opts or SolverOptions()
    rho, sigma = problem.rho, problem.sigma
    if sol.epsilon:
        rho = regularize_state(rho, sol.epsilon)
        sigma = regularize_state(sigma, sol.epsilon)
    n = problem.dim
    P = np.asarray(sol.primal, dtype=np.complex128)
    if problem.kind == "matsumoto":
        herm_err = float(np.max(np.abs(P - dagger(P))))
        primal_block = np.block([[rho, P], [P, sigma]])
    else:
        herm_err = 0.0
        primal_block = np.block([[rho, P], [dagger(P), sigma]])
    primal_res = max(_neg_part(hermitize(primal_block)), herm_err)
    primal_value = float(np.trace(P).real)

    X = np.eye(n) + sol.dual_A
    if problem.kind == "matsumoto":
        cons = float(np.max(np.abs(X + dagger(X) - 2 * np.eye(n))))
    else:
        cons = float(np.max(np.abs(sol.dual_A)))
    dual_res = _neg_part(hermitize(_dual_block(sol.dual_Y, sol.dual_Z, X)))
    dual_val = dual_objective(rho, sigma, sol.dual_Y, sol.dual_Z)
    return VerificationReport(
        primal_residual=primal_res,
        dual_residual=dual_res,
        constraint_residual=cons,
        weak_duality_slack=dual_val - primal_value,
        gap=dual_val - primal_value,
        tol=tol,
    )


def verify_dual_candidate(problem, Y, Z, A=None, tol=1e-8):
    """Feasibility and objective of a dual point ``(Y, Z, A)``.

    Returns ``(feasible, value)``. ``A`` defaults to zero.
    """
    n = problem.dim
    A = np.zeros((n, n), dtype=np.complex128) if A is None else np.asarray(A, dtype=np.complex128)
    X = np.eye(n) + A
    if problem.kind == "matsumoto":
        cons = float(np.max(np.abs(X + dagger(X) - 2 * np.eye(n))))
    else:
        cons = float(np.max(np.abs(A)))
    Y = np.asarray(Y, dtype=np.complex128)
    Z = np.asarray(Z, dtype=np.complex128)
    res = _neg_part(hermitize(_dual_block(Y, Z, X)))
    return bool(cons <= 1e-10 and res <= tol), dual_objective(problem.rho, problem.sigma, Y, Z)
