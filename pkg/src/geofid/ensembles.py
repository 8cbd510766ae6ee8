"""Seeded random test objects: states, unitaries, channels, commuting pairs.

Every generator takes ``seed``: either an integer (a fresh Philox stream is
created from it) or an existing :class:`numpy.random.Generator`, which lets
a trial loop draw many objects from one stream.
"""

from dataclasses import dataclass, field

import numpy as np

from .linalg import dagger, hermitize


def make_rng(seed):
    """Return a Philox-backed generator for an integer seed (or pass one through)."""
    if isinstance(seed, np.random.Generator):
        return seed
    if seed is None:
        raise ValueError("seed is required for reproducible ensembles")
    seed = int(seed)
    if not 0 <= seed < 2**64:
        raise ValueError("seed must be a 64-bit unsigned integer")
    return np.random.Generator(np.random.Philox(seed))


def ginibre(rows, cols, seed):
    rng = make_rng(seed)
    return (rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))) / np.sqrt(2)


def random_density(dim, rank=None, seed=0):
    """``G G^dagger / tr(G G^dagger)`` for a ``dim x rank`` complex Ginibre ``G``."""
    rank = dim if rank is None else rank
    if not 1 <= rank <= dim:
        raise ValueError(f"rank must be in [1, {dim}], got {rank}")
    G = ginibre(dim, rank, seed)
    rho = G @ dagger(G)
    return hermitize(rho / np.trace(rho).real)


def random_pure_state(dim, seed=0):
    """Haar-random unit vector."""
    v = ginibre(dim, 1, seed)[:, 0]
    return v / np.linalg.norm(v)


def random_unitary(dim, seed=0):
    """Haar unitary: QR of a Ginibre matrix with the phases of ``diag(R)`` removed."""
    Z = ginibre(dim, dim, seed)
    Q, R = np.linalg.qr(Z)
    d = np.diagonal(R)
    return Q * (d / np.abs(d))


def random_probabilities(n, seed=0):
    """Uniform point on the probability simplex (normalized exponentials)."""
    rng = make_rng(seed)
    e = rng.standard_exponential(n)
    return e / e.sum()


@dataclass(frozen=True)
class KrausChannel:
    """Trace-preserving map ``X -> sum_i K_i X K_i^dagger``.

    With ``pre_transpose`` the input is transposed first, giving a positive,
    trace-preserving map that is not completely positive.
    """

    kraus_ops: tuple = field(default_factory=tuple)
    pre_transpose: bool = False

    @property
    def dim_in(self):
        return self.kraus_ops[0].shape[1]

    @property
    def dim_out(self):
        return self.kraus_ops[0].shape[0]

    def __call__(self, X):
        X = np.asarray(X, dtype=np.complex128)
        if self.pre_transpose:
            X = X.T
        out = sum(K @ X @ dagger(K) for K in self.kraus_ops)
        return hermitize(out) if np.allclose(X, dagger(X)) else out

    def completeness_error(self):
        S = sum(dagger(K) @ K for K in self.kraus_ops)
        return float(np.linalg.norm(S - np.eye(self.dim_in)))

    def choi(self):
        """Choi matrix ``sum_ij |i><j| (x) Phi(|i><j|)``."""
        d = self.dim_in
        blocks = np.zeros((d * self.dim_out, d * self.dim_out), dtype=np.complex128)
        for i in range(d):
            for j in range(d):
                E = np.zeros((d, d), dtype=np.complex128)
                E[i, j] = 1.0
                blocks[i * self.dim_out : (i + 1) * self.dim_out, j * self.dim_out : (j + 1) * self.dim_out] = self._apply_raw(E)
        return blocks

    def _apply_raw(self, X):
        if self.pre_transpose:
            X = X.T
        return sum(K @ X @ dagger(K) for K in self.kraus_ops)


def random_channel(dim, kraus_count=2, ptp_only=False, seed=0):
    """Random channel whose Kraus operators partition a Haar isometry.

    The first ``dim`` columns of a Haar unitary of size ``kraus_count * dim``
    form an isometry ``V``; its row blocks are the Kraus operators, so
    ``sum K^dagger K = V^dagger V = I``.
    """
    if kraus_count < 1:
        raise ValueError("kraus_count must be >= 1")
    U = random_unitary(kraus_count * dim, seed)
    V = U[:, :dim]
    ops = tuple(np.ascontiguousarray(V[i * dim : (i + 1) * dim, :]) for i in range(kraus_count))
    return KrausChannel(ops, pre_transpose=bool(ptp_only))


def random_commuting_pair(dim, seed=0):
    """Two density matrices diagonal in one shared Haar-random basis."""
    rng = make_rng(seed)
    U = random_unitary(dim, rng)
    p = random_probabilities(dim, rng)
    q = random_probabilities(dim, rng)
    rho = hermitize((U * p) @ dagger(U))
    sigma = hermitize((U * q) @ dagger(U))
    return rho, sigma


def random_commuting_pair_with_spectra(dim, seed=0):
    """Like :func:`random_commuting_pair` but also returns the eigenvalue vectors."""
    rng = make_rng(seed)
    U = random_unitary(dim, rng)
    p = random_probabilities(dim, rng)
    q = random_probabilities(dim, rng)
    return hermitize((U * p) @ dagger(U)), hermitize((U * q) @ dagger(U)), p, q


def maximally_entangled(dim):
    """Density matrix of ``sum_i |ii> / sqrt(dim)``."""
    v = np.zeros(dim * dim, dtype=np.complex128)
    v[:: dim + 1] = 1.0 / np.sqrt(dim)
    return np.outer(v, v.conj())


def apply_on_second(channel, X, dim_first):
    """``(id (x) channel)(X)`` for ``X`` on ``C^dim_first (x) C^dim_in``."""
    d = channel.dim_in
    out_d = channel.dim_out
    out = np.zeros((dim_first * out_d, dim_first * out_d), dtype=np.complex128)
    for i in range(dim_first):
        for j in range(dim_first):
            blk = X[i * d : (i + 1) * d, j * d : (j + 1) * d]
            out[i * out_d : (i + 1) * out_d, j * out_d : (j + 1) * out_d] = channel._apply_raw(blk)
    return out
