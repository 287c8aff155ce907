"""Locking states, their unlocked counterparts and reference states."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .mub import MubFamily, mub_family
from .qmath import DensityMatrix, Ensemble, partial_trace, random_density_matrix, tensor


@dataclass(frozen=True)
class LockingInstance:
    """Bob dimension ``d`` (a prime power) and ``L`` mutually unbiased bases.

    Alice holds ``|k>|t>`` (dimension ``L d``, ``k`` major); Bob holds ``U_t|k>``.
    """

    d: int
    L: int
    mubs: MubFamily = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.mubs is None:
            object.__setattr__(self, "mubs", mub_family(self.d, self.L))
        elif self.mubs.d != self.d or self.mubs.L != self.L:
            raise ValueError("MUB family does not match (d, L)")

    @property
    def key_bits(self) -> float:
        return float(np.log2(self.L))

    @property
    def dim_alice(self) -> int:
        return self.L * self.d

    def bob_states(self) -> np.ndarray:
        """Rows ordered by Alice's label ``k * L + t``."""
        us = np.array(self.mubs.unitaries)  # (L, d, d)
        return us.transpose(2, 0, 1).reshape(self.L * self.d, self.d)


def locking_state(inst: LockingInstance) -> DensityMatrix:
    """``(1/Ld) sum_{k,t} |k,t><k,t| (x) U_t|k><k|U_t^dagger``."""
    n = inst.dim_alice
    states = inst.bob_states()
    d = inst.d
    rho = np.zeros((n, d, n, d), dtype=complex)
    for a in range(n):
        rho[a, :, a, :] = np.outer(states[a], states[a].conj())
    return DensityMatrix(rho.reshape(n * d, n * d) / n, n, d)


def bob_ensemble(inst: LockingInstance) -> Ensemble:
    """Uniform ensemble ``{1/(Ld), U_t|k>}`` that Bob holds."""
    return Ensemble.uniform(inst.bob_states())


def unlocked_state(inst: LockingInstance) -> DensityMatrix:
    """State after Alice sends ``t`` and Bob undoes ``U_t``.

    Bob's register holds ``|t>|k>``; the result is classical and perfectly
    correlated on ``(k, t)``.
    """
    n = inst.dim_alice
    diag = np.zeros((n, n))
    for k in range(inst.d):
        for t in range(inst.L):
            diag[k * inst.L + t, t * inst.d + k] = 1.0 / n
    return DensityMatrix(np.diag(diag.ravel()).astype(complex), n, n)


def product_of_marginals(rho: DensityMatrix) -> DensityMatrix:
    ra, rb = partial_trace(rho, "A"), partial_trace(rho, "B")
    return DensityMatrix(tensor(ra, rb), rho.dim_a, rho.dim_b)


def bell_state(d: int = 2) -> DensityMatrix:
    """Maximally entangled ``sum_j |jj> / sqrt(d)``."""
    psi = np.eye(d).ravel() / np.sqrt(d)
    return DensityMatrix.from_vector(psi, d, d)


def embed(rho: DensityMatrix, dim_a: int, dim_b: int) -> DensityMatrix:
    """Pad ``rho`` with zeros into ``C^dim_a (x) C^dim_b``."""
    if dim_a < rho.dim_a or dim_b < rho.dim_b:
        raise ValueError("embedding dimensions must not shrink the state")
    t = rho.matrix.reshape(rho.dim_a, rho.dim_b, rho.dim_a, rho.dim_b)
    out = np.zeros((dim_a, dim_b, dim_a, dim_b), dtype=complex)
    out[: rho.dim_a, : rho.dim_b, : rho.dim_a, : rho.dim_b] = t
    n = dim_a * dim_b
    return DensityMatrix(out.reshape(n, n), dim_a, dim_b)


def random_bipartite_state(dim_a: int, dim_b: int, rng: np.random.Generator, rank: int | None = None) -> DensityMatrix:
    return DensityMatrix(random_density_matrix(dim_a * dim_b, rng, rank), dim_a, dim_b)


def random_separable_state(dim_a: int, dim_b: int, rng: np.random.Generator, terms: int = 4) -> DensityMatrix:
    w = rng.dirichlet(np.ones(terms))
    m = sum(wi * np.kron(random_density_matrix(dim_a, rng), random_density_matrix(dim_b, rng)) for wi in w)
    m = (m + m.conj().T) / 2
    return DensityMatrix(m / np.trace(m).real, dim_a, dim_b)
