"""Property suite: every fidelity, mean, solver and geometry invariant as a
randomized check with a worst-case record.

A check is a pair of functions. ``sample(rng, dim)`` draws an instance (a
flat dict of arrays and numbers) and ``evaluate(instance)`` returns its
violation, ``0`` when the property holds exactly. A check passes when the
largest violation over all trials is at most its tolerance. Instances are
plain data, so the worst one is serialized into the report and can be
re-evaluated with :func:`replay`.

The fourteen rows of the fidelity property table are ``TABLE_ROWS``; the
suite refuses to run if one of them has no check.
"""

import json
from dataclasses import dataclass, field

import numpy as np

from . import ensembles as ens
from .fidelity import (
    alberti_objective,
    alberti_optimizer,
    classical_fidelity,
    holevo_fidelity,
    matsumoto_fidelity,
    matsumoto_via_rotation,
    optimal_povm,
    pure_mixed_fidelities,
    trace_distance,
    uhlmann_fidelity,
    uhlmann_gradient,
)
from .geomean import geometric_mean, maximality_witness
from .geometry import (
    QubitCoords,
    SQRT2,
    geodesic_point,
    least_squares_objective,
    metric_inner,
    path_length,
    qubit_from_coords,
    spd_distance,
)
from .linalg import (
    compose,
    dagger,
    eigvalsh,
    hermitize,
    image_intersection_trivial,
    inv_sqrtm,
    invm,
    norm,
    sqrtm,
)
from .sdp import FidelitySdp, SolverOptions, solve, verify_solution

TABLE_ROWS = (
    "Symmetry",
    "Bounds",
    "Orthogonality",
    "Distinct image",
    "Unity condition",
    "Additivity",
    "Multiplicativity",
    "Unitary invariance",
    "Monotonicity",
    "Joint concavity",
    "First F-vdG",
    "Second F-vdG",
    "Classical limit",
    "Pure states",
)

TOL = 1e-8


@dataclass(frozen=True)
class Check:
    name: str
    sample: object
    evaluate: object
    tol: float = TOL
    table_row: bool = False
    counterexample: bool = False
    max_trials: int = None
    dims: tuple = None
    description: str = ""


@dataclass
class CheckResult:
    name: str
    table_row: bool
    counterexample: bool
    trials: int
    max_violation: float
    tol: float
    passed: bool
    worst: dict = None

    def as_dict(self):
        return {
            "name": self.name,
            "table_row": self.table_row,
            "counterexample": self.counterexample,
            "trials": self.trials,
            "max_violation": self.max_violation,
            "tol": self.tol,
            "passed": self.passed,
            "worst": self.worst,
        }


@dataclass
class SuiteReport:
    seed: int
    trials: int
    dims: tuple
    results: list = field(default_factory=list)

    @property
    def passed(self):
        return all(r.passed for r in self.results)

    def failures(self):
        return [r for r in self.results if not r.passed]

    def as_dict(self):
        return {
            "seed": self.seed,
            "trials": self.trials,
            "dims": list(self.dims),
            "passed": self.passed,
            "checks": [r.as_dict() for r in self.results],
        }

    def to_json(self):
        return json.dumps(self.as_dict(), sort_keys=True, indent=2)

    def table(self):
        lines = [f"{'check':34s} {'trials':>6s} {'max violation':>14s} {'tol':>8s}  result"]
        for r in self.results:
            tag = "PASS" if r.passed else "FAIL"
            mark = "*" if r.table_row else " "
            lines.append(f"{mark}{r.name:33s} {r.trials:6d} {r.max_violation:14.3e} {r.tol:8.0e}  {tag}")
        lines.append("(* = property table row)")
        return "\n".join(lines)


# --- serialization -----------------------------------------------------------


def _encode(v):
    if isinstance(v, np.ndarray):
        return {"shape": list(v.shape), "re": v.real.ravel().tolist(), "im": v.imag.ravel().tolist()}
    if isinstance(v, (list, tuple)):
        return [_encode(x) for x in v]
    if isinstance(v, (np.floating, np.integer, np.bool_)):
        return v.item()
    return v


def _decode(v):
    if isinstance(v, dict) and set(v) == {"shape", "re", "im"}:
        return (np.asarray(v["re"]) + 1j * np.asarray(v["im"])).reshape(v["shape"])
    if isinstance(v, list):
        return [_decode(x) for x in v]
    return v


def encode_instance(inst):
    return {k: _encode(v) for k, v in sorted(inst.items())}


def decode_instance(data):
    return {k: _decode(v) for k, v in data.items()}


# --- helpers -------------------------------------------------------------------

F = uhlmann_fidelity
FH = holevo_fidelity
FGM = matsumoto_fidelity


def _pair(rng, dim, rank_mix=False):
    r1 = r2 = dim
    if rank_mix and rng.random() < 0.25:
        r1 = int(rng.integers(1, dim + 1))
        r2 = int(rng.integers(1, dim + 1))
    return ens.random_density(dim, r1, rng), ens.random_density(dim, r2, rng)


def _pd_matrix(rng, dim):
    # Wishart-type PD matrix with an O(1) spread of scales
    G = ens.ginibre(dim, dim, rng)
    return hermitize(G @ dagger(G) + 0.1 * np.eye(dim))


def _rel(lhs, rhs):
    return norm(lhs - rhs, "frobenius") / max(1.0, norm(rhs, "frobenius"))


def _neg(M):
    """How far ``M`` is from PSD, relative to its size."""
    w = eigvalsh(hermitize(M))
    return max(0.0, -float(w[0])) / max(1.0, float(np.max(np.abs(w))))


def _pure(psi):
    return np.outer(psi, psi.conj())


def _channel(inst):
    return ens.KrausChannel(tuple(np.asarray(K) for K in inst["kraus"]), bool(inst["ptp"]))


def _pair_sampler(rank_mix=False):
    def sample(rng, dim):
        rho, sigma = _pair(rng, dim, rank_mix)
        return {"rho": rho, "sigma": sigma}

    return sample


CHECKS = []


def check(name, sample, **kw):
    def deco(fn):
        CHECKS.append(Check(name=name, sample=sample, evaluate=fn, description=(fn.__doc__ or "").strip(), **kw))
        return fn

    return deco


# --- property table rows ------------------------------------------------------


@check("Symmetry", _pair_sampler(rank_mix=True), table_row=True)
def _symmetry(inst):
    """All three fidelities are symmetric in their arguments."""
    r, s = inst["rho"], inst["sigma"]
    return max(abs(f(r, s) - f(s, r)) for f in (F, FH, FGM))


@check("Bounds", _pair_sampler(rank_mix=True), table_row=True)
def _bounds(inst):
    """0 <= F_GM <= F <= 1 (and F_H in [0, 1])."""
    r, s = inst["rho"], inst["sigma"]
    vals = [F(r, s), FH(r, s), FGM(r, s)]
    out = max(max(0.0, -v, v - 1.0) for v in vals)
    return max(out, vals[2] - vals[0])


def _orth_sample(rng, dim):
    # distinct, non-orthogonal pure states
    psi = ens.random_pure_state(dim, rng)
    phi = ens.random_pure_state(dim, rng)
    return {"psi": psi, "phi": phi}


@check("Orthogonality", _orth_sample, tol=1e-12, table_row=True, counterexample=True)
def _orthogonality(inst):
    """Counterexample: F_GM = 0 for non-orthogonal distinct pure states, while F > 0."""
    psi, phi = inst["psi"], inst["phi"]
    rho, sigma = _pure(psi), _pure(phi)
    overlap = abs(np.vdot(psi, phi))
    if overlap < 1e-3 or overlap > 1 - 1e-3:  # pragma: no cover - measure zero
        return 0.0
    viol = FGM(rho, sigma)
    # F must stay strictly positive, F_GM must vanish
    return max(viol, max(0.0, 1e-6 - F(rho, sigma)))


def _distinct_sample(rng, dim):
    dim = 4
    r1 = int(rng.integers(1, 4))
    r2 = int(rng.integers(1, 4))
    share = bool(rng.random() < 0.5) or r1 + r2 > dim
    U = ens.random_unitary(dim, rng)
    if share:
        # both supports contain the first column of U
        cols_a = [0] + list(range(1, r1))
        cols_b = [0] + list(range(dim - r2 + 1, dim))
    else:
        cols_a = list(range(r1))
        cols_b = list(range(r1, r1 + r2))
    A = U[:, cols_a] @ ens.ginibre(len(cols_a), len(cols_a), rng)
    B = U[:, cols_b] @ ens.ginibre(len(cols_b), len(cols_b), rng)
    rho = A @ dagger(A)
    sigma = B @ dagger(B)
    return {"rho": rho / np.trace(rho).real, "sigma": sigma / np.trace(sigma).real}


@check("Distinct image", _distinct_sample, table_row=True, dims=(4,))
def _distinct_image(inst):
    """F_GM = 0 exactly when the images meet only in {0} (rank-deficient dim-4 pairs)."""
    r, s = hermitize(inst["rho"]), hermitize(inst["sigma"])
    v = FGM(r, s)
    if image_intersection_trivial(r, s):
        return v
    # nonzero side: F_GM must be clearly positive
    return max(0.0, 1e-6 - v)


def _unity_sample(rng, dim):
    rho, sigma = _pair(rng, dim, rank_mix=True)
    return {"rho": rho, "sigma": sigma}


@check("Unity condition", _unity_sample, table_row=True)
def _unity(inst):
    """F(rho, rho) = 1 and F(rho, sigma) < 1 - 1e-9 for ||rho - sigma||_F > 1e-3."""
    r, s = inst["rho"], inst["sigma"]
    out = max(abs(f(r, r) - 1.0) for f in (F, FH, FGM))
    if norm(r - s, "frobenius") > 1e-3:
        out = max(out, max(max(0.0, f(r, s) - (1.0 - 1e-9)) for f in (F, FH, FGM)))
    return out


def _additivity_sample(rng, dim):
    d1 = int(rng.integers(1, dim)) if dim > 1 else 1
    d2 = max(1, dim - d1)
    lam = float(rng.random())
    r1, s1 = _pair(rng, d1)
    r2, s2 = _pair(rng, d2)
    return {"lam": lam, "r1": r1, "s1": s1, "r2": r2, "s2": s2}


@check("Additivity", _additivity_sample, table_row=True)
def _additivity(inst):
    """F(l r1 + (1-l) r2, l s1 + (1-l) s2) over a direct sum splits linearly."""
    lam = inst["lam"]
    r1, s1, r2, s2 = inst["r1"], inst["s1"], inst["r2"], inst["s2"]
    rho = compose(lam * r1, (1 - lam) * r2, "dirsum")
    sigma = compose(lam * s1, (1 - lam) * s2, "dirsum")
    return max(
        abs(f(rho, sigma) - lam * f(r1, s1) - (1 - lam) * f(r2, s2)) for f in (F, FH, FGM)
    )


def _mult_sample(rng, dim):
    d1, d2 = [(2, 2), (2, 3), (3, 2)][int(rng.integers(0, 3))]
    r1, s1 = _pair(rng, d1)
    r2, s2 = _pair(rng, d2)
    return {"r1": r1, "s1": s1, "r2": r2, "s2": s2}


@check("Multiplicativity", _mult_sample, table_row=True)
def _multiplicativity(inst):
    """F(r1 (x) r2, s1 (x) s2) = F(r1, s1) F(r2, s2); composite dim <= 6."""
    r1, s1, r2, s2 = inst["r1"], inst["s1"], inst["r2"], inst["s2"]
    rho, sigma = np.kron(r1, r2), np.kron(s1, s2)
    return max(abs(f(rho, sigma) - f(r1, s1) * f(r2, s2)) for f in (F, FH, FGM))


def _unitary_sample(rng, dim):
    rho, sigma = _pair(rng, dim, rank_mix=True)
    return {"rho": rho, "sigma": sigma, "U": ens.random_unitary(dim, rng)}


@check("Unitary invariance", _unitary_sample, table_row=True)
def _unitary_invariance(inst):
    """F(U rho U^dagger, U sigma U^dagger) = F(rho, sigma) for Haar U."""
    r, s, U = inst["rho"], inst["sigma"], inst["U"]
    r2 = hermitize(U @ r @ dagger(U))
    s2 = hermitize(U @ s @ dagger(U))
    return max(abs(f(r2, s2) - f(r, s)) for f in (F, FH, FGM))


def _mono_sample(rng, dim):
    rho, sigma = _pair(rng, dim)
    ptp = bool(rng.random() < 0.5)
    ch = ens.random_channel(dim, int(rng.integers(1, 4)), ptp_only=ptp, seed=rng)
    return {"rho": rho, "sigma": sigma, "kraus": list(ch.kraus_ops), "ptp": ptp}


@check("Monotonicity", _mono_sample, table_row=True)
def _monotonicity(inst):
    """F(Phi(rho), Phi(sigma)) >= F(rho, sigma) for CPTP and transpose-composed PTP Phi.

    F_H is only checked on CPTP maps.
    """
    r, s = inst["rho"], inst["sigma"]
    ch = _channel(inst)
    r2, s2 = ch(r), ch(s)
    fs = (F, FGM) if ch.pre_transpose else (F, FH, FGM)
    return max(max(0.0, f(r, s) - f(r2, s2)) for f in fs)


def _concavity_sample(rng, dim):
    k = int(rng.integers(2, 4))
    p = ens.random_probabilities(k, rng)
    pairs = [_pair(rng, dim) for _ in range(k)]
    return {"p": p.astype(complex), "rhos": [a for a, _ in pairs], "sigmas": [b for _, b in pairs]}


@check("Joint concavity", _concavity_sample, table_row=True)
def _joint_concavity(inst):
    """F(sum p_i rho_i, sum p_i sigma_i) >= sum p_i F(rho_i, sigma_i)."""
    p = np.real(np.asarray(inst["p"]))
    rhos, sigmas = inst["rhos"], inst["sigmas"]
    rho = hermitize(sum(pi * r for pi, r in zip(p, rhos)))
    sigma = hermitize(sum(pi * s for pi, s in zip(p, sigmas)))
    rho, sigma = rho / np.trace(rho).real, sigma / np.trace(sigma).real
    out = 0.0
    for f in (F, FH, FGM):
        rhs = sum(pi * f(r, s) for pi, r, s in zip(p, rhos, sigmas))
        out = max(out, rhs - f(rho, sigma))
    return max(0.0, out)


@check("First F-vdG", _pair_sampler(rank_mix=True), table_row=True)
def _fvdg1(inst):
    """F^2 + Delta^2 <= 1."""
    r, s = inst["rho"], inst["sigma"]
    d = trace_distance(r, s)
    return max(max(0.0, f(r, s) ** 2 + d * d - 1.0) for f in (F, FH, FGM))


def _fvdg2_sample(rng, dim):
    U = ens.random_unitary(dim, rng)
    psi = U[:, 0]
    phi = np.cos(0.05) * U[:, 0] + np.sin(0.05) * U[:, 1]
    return {"psi": psi, "phi": phi}


@check("Second F-vdG", _fvdg2_sample, table_row=True, counterexample=True)
def _fvdg2(inst):
    """Counterexample: F_GM + Delta = sin(0.05) < 1 for pure states with overlap cos(0.05)."""
    rho, sigma = _pure(inst["psi"]), _pure(inst["phi"])
    total = FGM(rho, sigma) + trace_distance(rho, sigma)
    # F + Delta >= 1 still holds for Uhlmann
    return max(abs(total - np.sin(0.05)), max(0.0, 1.0 - F(rho, sigma) - trace_distance(rho, sigma) - TOL))


def _classical_sample(rng, dim):
    rho, sigma, p, q = ens.random_commuting_pair_with_spectra(dim, rng)
    return {"rho": rho, "sigma": sigma, "p": p.astype(complex), "q": q.astype(complex)}


@check("Classical limit", _classical_sample, table_row=True)
def _classical_limit(inst):
    """Commuting states: all three fidelities equal the classical fidelity of their spectra."""
    p = np.real(np.asarray(inst["p"]))
    q = np.real(np.asarray(inst["q"]))
    fc = classical_fidelity(p / p.sum(), q / q.sum())
    r, s = inst["rho"], inst["sigma"]
    return max(abs(f(r, s) - fc) for f in (F, FH, FGM))


def _pure_sample(rng, dim):
    psi = ens.random_pure_state(dim, rng)
    same = bool(rng.random() < 0.2)
    phi = psi * np.exp(1j * rng.uniform(0, 2 * np.pi)) if same else ens.random_pure_state(dim, rng)
    return {"psi": psi, "phi": phi}


@check("Pure states", _pure_sample, table_row=True)
def _pure_states(inst):
    """General paths give |<psi|phi>|, |<psi|phi>|^2 and 1 or 0 on pure states."""
    psi, phi = inst["psi"], inst["phi"]
    o = min(1.0, abs(np.vdot(psi, phi)))
    rho, sigma = _pure(psi), _pure(phi)
    gm = 1.0 if o >= 1 - 1e-12 else 0.0
    return max(abs(F(rho, sigma) - o), abs(FH(rho, sigma) - o * o), abs(FGM(rho, sigma) - gm))


# --- further fidelity invariants ------------------------------------------------


@check("Ordering", _pair_sampler(rank_mix=True))
def _ordering(inst):
    """F_GM <= F_H <= F."""
    r, s = inst["rho"], inst["sigma"]
    a, b, c = FGM(r, s), FH(r, s), F(r, s)
    return max(0.0, a - b, b - c)


def _pd_pair_sampler(rng, dim):
    return {"rho": ens.random_density(dim, seed=rng), "sigma": ens.random_density(dim, seed=rng)}


def _pure_mixed_sample(rng, dim):
    return {"rho": ens.random_density(dim, seed=rng), "psi": ens.random_pure_state(dim, rng)}


@check("Pure-mixed forms", _pure_mixed_sample, dims=(2, 3))
def _pure_mixed(inst):
    """Closed forms for (PD rho, pure psi) agree with the general paths."""
    rho, psi = inst["rho"], inst["psi"]
    f, fh, fgm = pure_mixed_fidelities(rho, psi)
    sigma = _pure(psi)
    return max(abs(f - F(rho, sigma)), abs(fh - FH(rho, sigma)), abs(fgm - FGM(rho, sigma)))


@check("Rotation identity", _pd_pair_sampler)
def _rotation(inst):
    """F(rho, U sigma U^dagger) = F_GM(rho, sigma) with U = rho^-1/2 (sigma # rho) sigma^-1/2."""
    _, v = matsumoto_via_rotation(inst["rho"], inst["sigma"])
    return abs(v - FGM(inst["rho"], inst["sigma"]))


@check("Rotation unitarity", _pd_pair_sampler, tol=1e-10)
def _rotation_unitary(inst):
    """The rotation U is unitary."""
    U, _ = matsumoto_via_rotation(inst["rho"], inst["sigma"])
    return float(np.max(np.abs(dagger(U) @ U - np.eye(U.shape[0]))))


def _alberti_sample(rng, dim):
    inst = _pd_pair_sampler(rng, dim)
    inst["P"] = _pd_matrix(rng, dim)
    inst["scale"] = float(rng.uniform(0.01, 1.0))
    return inst


@check("Alberti optimum", _alberti_sample)
def _alberti(inst):
    """<tau, rho><tau^-1, sigma> equals F^2 at tau = rho^-1 # sigma and is never below it."""
    r, s = inst["rho"], inst["sigma"]
    f2 = F(r, s) ** 2
    tau = alberti_optimizer(r, s)
    out = abs(alberti_objective(r, s, tau) - f2)
    other = hermitize(tau + inst["scale"] * inst["P"])
    return max(out, max(0.0, f2 - alberti_objective(r, s, other)))


def _povm_sample(rng, dim):
    inst = _pd_pair_sampler(rng, dim)
    inst["U"] = ens.random_unitary(dim, rng)
    return inst


@check("Optimal measurement", _povm_sample)
def _povm(inst):
    """Measuring in the eigenbasis of rho^-1 # sigma attains F; other bases never go below it."""
    r, s, U = inst["rho"], inst["sigma"], inst["U"]
    povm, p, q = optimal_povm(r, s)
    f = F(r, s)
    out = max(abs(classical_fidelity(p, q) - f), povm.completeness_error() * 1e-2)
    pr = np.clip([np.vdot(U[:, i], r @ U[:, i]).real for i in range(U.shape[0])], 0, None)
    qr = np.clip([np.vdot(U[:, i], s @ U[:, i]).real for i in range(U.shape[0])], 0, None)
    return max(out, max(0.0, f - classical_fidelity(pr / pr.sum(), qr / qr.sum())))


def _grad_sample(rng, dim):
    inst = _pd_pair_sampler(rng, dim)
    G = ens.ginibre(dim, dim, rng)
    H = hermitize(G)
    H = H - np.trace(H).real / dim * np.eye(dim)
    inst["H"] = H / norm(H, "frobenius")
    return inst


@check("Uhlmann gradient", _grad_sample, tol=1e-5, dims=(2, 3))
def _gradient(inst):
    """(rho^-1 # sigma)/2 matches a central difference of F(., sigma)."""
    r, s, H = inst["rho"], inst["sigma"], inst["H"]
    # keep rho + tH a state
    t = 1e-5 * min(1.0, float(eigvalsh(r)[0]) * 10)
    fd = (F(hermitize(r + t * H), s) - F(hermitize(r - t * H), s)) / (2 * t)
    return abs(fd - float(np.trace(uhlmann_gradient(r, s) @ H).real))


# --- geometric mean ----------------------------------------------------------------


def _pd_ab(rng, dim):
    return {"A": _pd_matrix(rng, dim), "B": _pd_matrix(rng, dim)}


@check("Mean: symmetry", _pd_ab)
def _gm_sym(inst):
    """A # B = B # A."""
    return _rel(geometric_mean(inst["A"], inst["B"]), geometric_mean(inst["B"], inst["A"]))


@check("Mean: positive definite", _pd_ab)
def _gm_pd(inst):
    """A # B is Hermitian and positive definite."""
    W = geometric_mean(inst["A"], inst["B"])
    return 1.0 if eigvalsh(W)[0] <= 0 else float(np.max(np.abs(W - dagger(W))))


def _gm_commuting_sample(rng, dim):
    U = ens.random_unitary(dim, rng)
    a = rng.uniform(0.1, 3.0, dim)
    b = rng.uniform(0.1, 3.0, dim)
    return {"U": U, "a": a.astype(complex), "b": b.astype(complex)}


@check("Mean: commuting", _gm_commuting_sample)
def _gm_commuting(inst):
    """Shared eigenbasis: A # B = A^1/2 B^1/2."""
    U = inst["U"]
    a, b = np.real(inst["a"]), np.real(inst["b"])
    A = hermitize((U * a) @ dagger(U))
    B = hermitize((U * b) @ dagger(U))
    return _rel(geometric_mean(A, B), sqrtm(A) @ sqrtm(B))


def _gm_congruence_sample(rng, dim):
    inst = _pd_ab(rng, dim)
    inst["X"] = ens.ginibre(dim, dim, rng) + np.eye(dim)
    return inst


@check("Mean: congruence", _gm_congruence_sample)
def _gm_congruence(inst):
    """X (A # B) X^dagger = (X A X^dagger) # (X B X^dagger)."""
    A, B, X = inst["A"], inst["B"], inst["X"]
    lhs = X @ geometric_mean(A, B) @ dagger(X)
    rhs = geometric_mean(hermitize(X @ A @ dagger(X)), hermitize(X @ B @ dagger(X)))
    return _rel(lhs, rhs)


@check("Mean: inverses", _pd_ab)
def _gm_inverse(inst):
    """(A # B)^-1 = A^-1 # B^-1."""
    A, B = inst["A"], inst["B"]
    return _rel(invm(geometric_mean(A, B)), geometric_mean(invm(A), invm(B)))


def _gm_mono_sample(rng, dim):
    B, D = _pd_matrix(rng, dim), _pd_matrix(rng, dim)
    G1 = ens.ginibre(dim, int(rng.integers(1, dim + 1)), rng)
    G2 = ens.ginibre(dim, int(rng.integers(1, dim + 1)), rng)
    return {"B": B, "D": D, "P": G1 @ dagger(G1), "Q": G2 @ dagger(G2)}


@check("Mean: monotonicity", _gm_mono_sample)
def _gm_mono(inst):
    """A >= B > 0 and C >= D > 0 imply A # C >= B # D."""
    B, D = inst["B"], inst["D"]
    A = hermitize(B + inst["P"])
    C = hermitize(D + inst["Q"])
    return _neg(geometric_mean(A, C) - geometric_mean(B, D))


@check("Mean: AM-GM", _pd_ab)
def _gm_agm(inst):
    """(A + B)/2 >= A # B."""
    A, B = inst["A"], inst["B"]
    return _neg((A + B) / 2 - geometric_mean(A, B))


def _gm_kron_sample(rng, dim):
    d1, d2 = [(2, 2), (2, 3), (3, 2)][int(rng.integers(0, 3))]
    return {
        "A": _pd_matrix(rng, d1),
        "C": _pd_matrix(rng, d1),
        "B": _pd_matrix(rng, d2),
        "D": _pd_matrix(rng, d2),
    }


@check("Mean: tensor products", _gm_kron_sample)
def _gm_kron(inst):
    """(A (x) B) # (C (x) D) = (A # C) (x) (B # D)."""
    A, B, C, D = inst["A"], inst["B"], inst["C"], inst["D"]
    lhs = geometric_mean(np.kron(A, B), np.kron(C, D))
    return _rel(lhs, np.kron(geometric_mean(A, C), geometric_mean(B, D)))


def _gm_map_sample(rng, dim):
    inst = _pd_ab(rng, dim)
    ptp = bool(rng.random() < 0.5)
    ch = ens.random_channel(dim, int(rng.integers(1, 4)), ptp_only=ptp, seed=rng)
    inst.update(kraus=list(ch.kraus_ops), ptp=ptp)
    return inst


@check("Mean: positive maps", _gm_map_sample)
def _gm_map(inst):
    """Phi(A) # Phi(B) >= Phi(A # B) for CPTP and transpose-composed maps."""
    A, B = inst["A"], inst["B"]
    ch = _channel(inst)
    return _neg(geometric_mean(ch(A), ch(B)) - ch(geometric_mean(A, B)))


def _gm_max_sample(rng, dim):
    inst = _pd_ab(rng, dim)
    inst["H"] = hermitize(ens.ginibre(dim, dim, rng))
    inst["u"] = float(rng.uniform(0.5, 1.0))
    return inst


@check("Mean: maximality", _gm_max_sample)
def _gm_max(inst):
    """Every Hermitian W with [[A, W], [W, B]] >= 0 satisfies W <= A # B.

    W is a random Hermitian direction scaled to a fraction ``u`` of the
    largest feasible multiple, so ``u = 1`` lands on the boundary.
    """
    A, B, H, u = inst["A"], inst["B"], inst["H"], inst["u"]
    Ai = inv_sqrtm(A)
    lam = float(eigvalsh(hermitize(Ai @ H @ invm(B) @ H @ Ai))[-1])
    W = (u / np.sqrt(lam)) * H
    feasible = maximality_witness(A, B, W)
    M = geometric_mean(A, B)
    over = _neg(M - W)
    # A # B itself is feasible and W must be too
    bad = 0.0 if (feasible and maximality_witness(A, B, M)) else 1.0
    return max(over, bad)


# --- solver ------------------------------------------------------------------------

SDP_TRIALS = 50


def _sdp_sample(rng, dim):
    return {"rho": ens.random_density(dim, seed=rng), "sigma": ens.random_density(dim, seed=rng)}


@check("SDP: closed-form optimum", _sdp_sample, tol=1e-6, max_trials=SDP_TRIALS, dims=(2, 3, 4, 5, 6, 7, 8))
def _sdp_oracle(inst):
    """Solver optimum matches tr(rho # sigma) and ||rho^1/2 sigma^1/2||_1."""
    r, s = inst["rho"], inst["sigma"]
    a = solve(FidelitySdp("matsumoto", r, s)).primal_value
    b = solve(FidelitySdp("uhlmann", r, s)).primal_value
    return max(abs(a - FGM(r, s)), abs(b - F(r, s)))


@check("SDP: certificates", _sdp_sample, max_trials=SDP_TRIALS)
def _sdp_cert(inst):
    """Both programs end with a verified primal-dual pair and gap <= gap_tol."""
    r, s = inst["rho"], inst["sigma"]
    opts = SolverOptions()
    out = 0.0
    for kind in ("matsumoto", "uhlmann"):
        prob = FidelitySdp(kind, r, s)
        sol = solve(prob, opts)
        rep = verify_solution(prob, sol)
        out = max(out, rep.primal_residual, rep.dual_residual, max(0.0, -rep.weak_duality_slack))
        out = max(out, max(0.0, sol.gap - opts.gap_tol), rep.constraint_residual)
    return out


@check("SDP: Hermitian restriction", _sdp_sample, max_trials=SDP_TRIALS)
def _sdp_order(inst):
    """The Hermitian-restricted optimum never exceeds the unrestricted one."""
    r, s = inst["rho"], inst["sigma"]
    a = solve(FidelitySdp("matsumoto", r, s)).primal_value
    b = solve(FidelitySdp("uhlmann", r, s)).primal_value
    return max(0.0, a - b)


def _sdp_commuting_sample(rng, dim):
    rho, sigma, p, q = ens.random_commuting_pair_with_spectra(dim, rng)
    return {"rho": rho, "sigma": sigma, "p": p.astype(complex), "q": q.astype(complex)}


@check("SDP: commuting inputs", _sdp_commuting_sample, tol=1e-6, max_trials=SDP_TRIALS)
def _sdp_commuting(inst):
    """For commuting inputs both programs give the classical fidelity."""
    r, s = inst["rho"], inst["sigma"]
    p, q = np.real(inst["p"]), np.real(inst["q"])
    fc = classical_fidelity(p / p.sum(), q / q.sum())
    a = solve(FidelitySdp("matsumoto", r, s)).primal_value
    b = solve(FidelitySdp("uhlmann", r, s)).primal_value
    return max(abs(a - fc), abs(b - fc))


# --- geometry ----------------------------------------------------------------------


@check("Geodesic midpoint trace", _pd_pair_sampler)
def _geo_mid(inst):
    """tr(midpoint of the geodesic) = F_GM."""
    r, s = inst["rho"], inst["sigma"]
    return abs(np.trace(geodesic_point(r, s, 0.5)).real - FGM(r, s))


@check("Geodesic midpoint equidistant", _pd_pair_sampler)
def _geo_equi(inst):
    """delta(rho, rho # sigma) = delta(rho # sigma, sigma) = delta(rho, sigma)/2."""
    r, s = inst["rho"], inst["sigma"]
    m = geometric_mean(r, s)
    a, b, d = spd_distance(r, m), spd_distance(m, s), spd_distance(r, s)
    return max(abs(a - b), abs(a - d / 2))


def _congruence_sample(rng, dim):
    inst = _pd_pair_sampler(rng, dim)
    inst["X"] = ens.ginibre(dim, dim, rng) + np.eye(dim)
    inst["H1"] = hermitize(ens.ginibre(dim, dim, rng))
    inst["H2"] = hermitize(ens.ginibre(dim, dim, rng))
    return inst


@check("Distance congruence invariance", _congruence_sample)
def _geo_cong(inst):
    """delta and the metric are unchanged under M -> X M X^dagger."""
    r, s, X = inst["rho"], inst["sigma"], inst["X"]
    c = lambda M: hermitize(X @ M @ dagger(X))  # noqa: E731
    d = abs(spd_distance(c(r), c(s)) - spd_distance(r, s))
    g0 = metric_inner(r, inst["H1"], inst["H2"])
    g1 = metric_inner(c(r), c(inst["H1"]), c(inst["H2"]))
    return max(d, abs(g1 - g0) / max(1.0, abs(g0)))


def _ls_sample(rng, dim):
    inst = _pd_pair_sampler(rng, 2)
    inst["dirs"] = [hermitize(ens.ginibre(2, 2, rng)) for _ in range(4)]
    return inst


@check("Least-squares midpoint", _ls_sample, tol=1e-12, dims=(2,))
def _geo_ls(inst):
    """delta^2(rho, tau) + delta^2(tau, sigma) is smallest at tau = rho # sigma."""
    r, s = inst["rho"], inst["sigma"]
    m = geometric_mean(r, s)
    base = least_squares_objective(r, s, m)
    scale = float(eigvalsh(m)[0])
    out = 0.0
    for H in inst["dirs"]:
        H = H / norm(H, "operator")
        for step in (-1e-2, -1e-3, 1e-3, 1e-2):
            out = max(out, base - least_squares_objective(r, s, hermitize(m + step * scale * H)))
    return max(0.0, out)


def _metric_sample(rng, dim):
    r0 = float(rng.uniform(0.2, 2.0))
    return {
        "alpha": float(rng.uniform(-1, 1)),
        "r0": r0,
        "dr": float(rng.uniform(max(-0.5, 0.1 - r0), 0.5)),
        "phi0": float(rng.uniform(0, np.pi)),
        "dphi": float(rng.uniform(-0.5, 0.5)),
        "theta": float(rng.uniform(0.1, np.pi / 2 - 0.1)),
    }


def qubit_curve(inst):
    """Fixed-alpha, fixed-theta curve ``t -> (r0 + dr t, phi0 + dphi t)``."""
    a, r0, dr, p0, dp, th = (inst[k] for k in ("alpha", "r0", "dr", "phi0", "dphi", "theta"))
    return lambda t: qubit_from_coords(QubitCoords(a, r0 + dr * t, th, p0 + dp * t))


def qubit_reduced_length(inst, samples=20001):
    """Length of :func:`qubit_curve` from ``dr^2 + 2 sinh^2(r/sqrt2) sin^2(2 theta) (2 dphi)^2``."""
    t = np.linspace(0.0, 1.0, samples)
    r = inst["r0"] + inst["dr"] * t
    speed = np.sqrt(inst["dr"] ** 2 + 8.0 * np.sinh(r / SQRT2) ** 2 * np.sin(2 * inst["theta"]) ** 2 * inst["dphi"] ** 2)
    return float(np.trapezoid(speed, t)) if hasattr(np, "trapezoid") else float(np.trapz(speed, t))


@check("Qubit metric reduction", _metric_sample, tol=1e-4, max_trials=20, dims=(2,))
def _geo_qubit(inst):
    """Numerical path length under the invariant metric matches the hyperbolic reduction."""
    return abs(path_length(qubit_curve(inst)) - qubit_reduced_length(inst))


# --- driver --------------------------------------------------------------------------


def _missing_rows(checks):
    names = [c.name for c in checks if c.table_row]
    missing = [r for r in TABLE_ROWS if names.count(r) != 1]
    extra = [n for n in names if n not in TABLE_ROWS]
    return missing, extra


def select_checks(names=None):
    if names is None:
        return list(CHECKS)
    by_name = {c.name: c for c in CHECKS}
    unknown = [n for n in names if n not in by_name]
    if unknown:
        raise KeyError(f"unknown checks: {unknown}")
    return [by_name[n] for n in names]


def _stream(seed, index):
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), index])))


def run_check(chk, seed, trials, dims, index=0):
    rng = _stream(seed, index)
    n = trials if chk.max_trials is None else min(trials, chk.max_trials)
    use_dims = chk.dims or tuple(dims)
    worst_v, worst = -1.0, None
    for k in range(n):
        dim = use_dims[k % len(use_dims)]
        inst = chk.sample(rng, dim)
        try:
            v = float(chk.evaluate(inst))
        except Exception as exc:  # a crash is a violation, recorded with its instance
            v = float("inf")
            inst = dict(inst, error=f"{type(exc).__name__}: {exc}")
        if not np.isfinite(v):
            v = float("inf")
        if v > worst_v:
            worst_v, worst = v, {"trial": k, "dim": dim, "instance": encode_instance(inst)}
    max_v = max(worst_v, 0.0) if n else 0.0
    return CheckResult(
        name=chk.name,
        table_row=chk.table_row,
        counterexample=chk.counterexample,
        trials=n,
        max_violation=max_v,
        tol=chk.tol,
        passed=bool(max_v <= chk.tol),
        worst=worst,
    )


def run_suite(seed=0, trials=200, dims=(2, 3, 4, 5, 6), names=None):
    """Run the selected checks; raises if a property table row has no check."""
    checks = select_checks(names)
    if names is None:
        missing, extra = _missing_rows(checks)
        if missing or extra:
            raise RuntimeError(f"property table rows without exactly one check: {missing}; unknown rows: {extra}")
    report = SuiteReport(seed=int(seed), trials=int(trials), dims=tuple(dims))
    if trials <= 0:
        return report
    index = {c.name: i for i, c in enumerate(CHECKS)}
    for chk in checks:
        report.results.append(run_check(chk, seed, trials, dims, index[chk.name]))
    return report


def replay(name, record):
    """Re-evaluate a serialized worst instance; returns its violation."""
    chk = select_checks([name])[0]
    inst = decode_instance(record["instance"] if "instance" in record else record)
    inst.pop("error", None)
    return float(chk.evaluate(inst))
