"""Density-matrix algebra: entropies, distances, partial traces and measurement statistics.

All logarithms are base 2, so every information quantity is in bits.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

HERMITIAN_TOL = 1e-10
PSD_TOL = 1e-10
TRACE_TOL = 1e-10
POVM_SUM_TOL = 1e-8
SUPPORT_TOL = 1e-12


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, positive semidefinite, unit-trace matrix on C^dim_a (x) C^dim_b.

    ``dim_b == 1`` marks a unipartite state.  The matrix is stored dense with
    the A index major, matching ``np.kron(a, b)``.
    """

    matrix: np.ndarray
    dim_a: int
    dim_b: int = 1

    def __post_init__(self):
        m = _frozen(self.matrix)
        object.__setattr__(self, "matrix", m)
        n = self.dim_a * self.dim_b
        if m.shape != (n, n):
            raise ValueError(f"matrix shape {m.shape} does not match dims ({self.dim_a}, {self.dim_b})")
        if np.max(np.abs(m - m.conj().T), initial=0.0) > HERMITIAN_TOL:
            raise ValueError("density matrix is not Hermitian")
        if abs(np.trace(m) - 1.0) > TRACE_TOL:
            raise ValueError(f"density matrix has trace {np.trace(m).real:.3g}, expected 1")
        if np.linalg.eigvalsh(m)[0] < -PSD_TOL:
            raise ValueError("density matrix is not positive semidefinite")

    @property
    def dim(self) -> int:
        return self.dim_a * self.dim_b

    @property
    def is_bipartite(self) -> bool:
        return self.dim_b > 1

    @classmethod
    def from_vector(cls, psi, dim_a: int | None = None, dim_b: int = 1) -> "DensityMatrix":
        psi = np.asarray(psi, dtype=complex).ravel()
        psi = psi / np.linalg.norm(psi)
        if dim_a is None:
            dim_a = psi.size // dim_b
        return cls(np.outer(psi, psi.conj()), dim_a, dim_b)

    @classmethod
    def maximally_mixed(cls, dim_a: int, dim_b: int = 1) -> "DensityMatrix":
        n = dim_a * dim_b
        return cls(np.eye(n) / n, dim_a, dim_b)


@dataclass(frozen=True)
class Povm:
    """Positive operators summing to the identity."""

    elements: tuple

    def __post_init__(self):
        els = tuple(_frozen(e) for e in self.elements)
        object.__setattr__(self, "elements", els)
        if not els:
            raise ValueError("POVM needs at least one element")
        d = els[0].shape[0]
        total = np.zeros((d, d), dtype=complex)
        for e in els:
            if e.shape != (d, d):
                raise ValueError("POVM elements have mismatched shapes")
            if np.max(np.abs(e - e.conj().T)) > HERMITIAN_TOL or np.linalg.eigvalsh(e)[0] < -PSD_TOL:
                raise ValueError("POVM element is not positive semidefinite")
            total += e
        if np.max(np.abs(total - np.eye(d))) > POVM_SUM_TOL:
            raise ValueError("POVM elements do not sum to the identity")

    @property
    def dim(self) -> int:
        return self.elements[0].shape[0]

    def __len__(self):
        return len(self.elements)

    @classmethod
    def from_basis(cls, unitary) -> "Povm":
        """Projective measurement onto the columns of ``unitary``."""
        u = np.asarray(unitary, dtype=complex)
        return cls(tuple(np.outer(u[:, j], u[:, j].conj()) for j in range(u.shape[1])))

    @classmethod
    def computational(cls, d: int) -> "Povm":
        return cls.from_basis(np.eye(d))


@dataclass(frozen=True)
class Ensemble:
    """Pure-state ensemble ``{(p_i, |eta_i>)}``."""

    probs: np.ndarray
    states: np.ndarray  # shape (n_items, dim), one state per row

    def __post_init__(self):
        p = np.array(self.probs, dtype=float)
        s = np.array(self.states, dtype=complex)
        if s.ndim != 2 or s.shape[0] != p.size:
            raise ValueError("ensemble needs one state vector per probability")
        if np.any(p < 0) or abs(p.sum() - 1.0) > 1e-10:
            raise ValueError("ensemble probabilities must be nonnegative and sum to 1")
        if np.max(np.abs(np.linalg.norm(s, axis=1) - 1.0)) > 1e-10:
            raise ValueError("ensemble states must be unit vectors")
        p.setflags(write=False)
        s.setflags(write=False)
        object.__setattr__(self, "probs", p)
        object.__setattr__(self, "states", s)

    @classmethod
    def from_items(cls, items: Sequence[tuple]) -> "Ensemble":
        probs = [p for p, _ in items]
        states = [np.asarray(v, dtype=complex).ravel() for _, v in items]
        return cls(np.array(probs), np.array(states))

    @classmethod
    def uniform(cls, states) -> "Ensemble":
        s = np.array(states, dtype=complex)
        return cls(np.full(len(s), 1.0 / len(s)), s)

    @property
    def dim(self) -> int:
        return self.states.shape[1]

    def __len__(self):
        return self.probs.size

    def average_state(self) -> np.ndarray:
        return np.einsum("i,ia,ib->ab", self.probs, self.states, self.states.conj())

    def tensor(self, other: "Ensemble") -> "Ensemble":
        """Product ensemble; item ``(i, j)`` sits at index ``i * len(other) + j``."""
        probs = np.outer(self.probs, other.probs).ravel()
        states = np.einsum("ia,jb->ijab", self.states, other.states).reshape(len(probs), -1)
        return Ensemble(probs, states)


@dataclass(frozen=True)
class JointDistribution:
    """Joint outcome distribution indexed ``(a-outcome, b-outcome)``."""

    probs: np.ndarray

    def __post_init__(self):
        p = np.array(self.probs, dtype=float)
        if p.ndim != 2:
            raise ValueError("joint distribution must be a matrix")
        if np.any(p < 0) or abs(p.sum() - 1.0) > 1e-10:
            raise ValueError("joint distribution must be nonnegative and sum to 1")
        p.setflags(write=False)
        object.__setattr__(self, "probs", p)

    @property
    def marginal_a(self) -> np.ndarray:
        return self.probs.sum(axis=1)

    @property
    def marginal_b(self) -> np.ndarray:
        return self.probs.sum(axis=0)


def _as_matrix(x) -> np.ndarray:
    return x.matrix if isinstance(x, DensityMatrix) else np.asarray(x, dtype=complex)


def tensor(a, b) -> np.ndarray:
    """Kronecker product with the first factor's index major."""
    return np.kron(_as_matrix(a), _as_matrix(b))


def tensor_states(rho: DensityMatrix, sigma: DensityMatrix) -> DensityMatrix:
    """``rho (x) sigma`` regrouped as (A_rho A_sigma : B_rho B_sigma)."""
    da1, db1, da2, db2 = rho.dim_a, rho.dim_b, sigma.dim_a, sigma.dim_b
    t = np.kron(rho.matrix, sigma.matrix).reshape(da1, db1, da2, db2, da1, db1, da2, db2)
    t = t.transpose(0, 2, 1, 3, 4, 6, 5, 7)
    n = da1 * db1 * da2 * db2
    return DensityMatrix(t.reshape(n, n), da1 * da2, db1 * db2)


def partial_trace(rho: DensityMatrix, keep: str) -> DensityMatrix:
    """Reduced state on subsystem ``keep`` (``"A"`` or ``"B"``)."""
    if not rho.is_bipartite:
        raise ValueError("partial trace needs a bipartite state")
    da, db = rho.dim_a, rho.dim_b
    t = rho.matrix.reshape(da, db, da, db)
    if keep == "A":
        return DensityMatrix(np.einsum("ajbj->ab", t), da)
    if keep == "B":
        return DensityMatrix(np.einsum("iaib->ab", t), db)
    raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")


def _clamped_eigvalsh(m: np.ndarray) -> np.ndarray:
    w = np.linalg.eigvalsh(m)
    if w[0] < -PSD_TOL:
        raise ValueError(f"matrix has eigenvalue {w[0]:.3g} below -{PSD_TOL}")
    return np.clip(w, 0.0, None)


def _entropy_of(p: np.ndarray) -> float:
    p = p[p > 0]
    return float(max(0.0, -np.sum(p * np.log2(p))))


def von_neumann_entropy(rho) -> float:
    return _entropy_of(_clamped_eigvalsh(_as_matrix(rho)))


def shannon_entropy(p) -> float:
    return _entropy_of(np.asarray(p, dtype=float).ravel())


def quantum_relative_entropy(nu, mu) -> float:
    """``S(nu||mu) = Tr nu log nu - Tr nu log mu``; ``inf`` when supp(nu) is not in supp(mu)."""
    a, b = _as_matrix(nu), _as_matrix(mu)
    if a.shape != b.shape:
        raise ValueError("relative entropy needs states of equal dimension")
    wa = _clamped_eigvalsh(a)
    wb, vb = np.linalg.eigh(b)
    if wb[0] < -PSD_TOL:
        raise ValueError("second argument is not positive semidefinite")
    kernel = vb[:, wb <= SUPPORT_TOL]
    if kernel.size and np.real(np.trace(kernel.conj().T @ a @ kernel)) > SUPPORT_TOL:
        return float("inf")
    support = wb > SUPPORT_TOL
    # diagonal of nu in mu's eigenbasis
    nu_diag = np.real(np.einsum("ai,ab,bi->i", vb.conj(), a, vb))
    cross = float(np.sum(nu_diag[support] * np.log2(wb[support])))
    pos = wa[wa > 0]
    return float(np.sum(pos * np.log2(pos)) - cross)


def trace_distance(a, b) -> float:
    """Trace norm ``Tr|a - b|`` (no factor 1/2)."""
    diff = _as_matrix(a) - _as_matrix(b)
    if np.max(np.abs(diff - diff.conj().T), initial=0.0) > 1e-8:
        raise ValueError("trace distance needs Hermitian arguments")
    return float(np.sum(np.abs(np.linalg.eigvalsh((diff + diff.conj().T) / 2))))


def classical_relative_entropy(p, q) -> float:
    p = np.asarray(p, dtype=float).ravel()
    q = np.asarray(q, dtype=float).ravel()
    if p.shape != q.shape:
        raise ValueError("distributions must have equal length")
    mask = p > 0
    if np.any(q[mask] <= 0):
        return float("inf")
    return float(max(0.0, np.sum(p[mask] * np.log2(p[mask] / q[mask]))))


def classical_mutual_info(j) -> float:
    """``H(p_A) + H(p_B) - H(p_AB)`` for a joint distribution."""
    p = j.probs if isinstance(j, JointDistribution) else np.asarray(j, dtype=float)
    pa, pb = p.sum(axis=1), p.sum(axis=0)
    mask = p > 0
    outer = np.outer(pa, pb)
    return float(max(0.0, np.sum(p[mask] * np.log2(p[mask] / outer[mask]))))


def measurement_joint_distribution(rho: DensityMatrix, ma: Povm, mb: Povm) -> JointDistribution:
    """``p(i, j) = Tr((A_i (x) B_j) rho)``, clamped at zero and renormalized."""
    if ma.dim != rho.dim_a or mb.dim != rho.dim_b:
        raise ValueError(
            f"POVM dimensions ({ma.dim}, {mb.dim}) do not match state dims ({rho.dim_a}, {rho.dim_b})"
        )
    da, db = rho.dim_a, rho.dim_b
    t = rho.matrix.reshape(da, db, da, db)
    A = np.array(ma.elements)
    B = np.array(mb.elements)
    p = np.real(np.einsum("iyx,jwv,xvyw->ij", A, B, t))
    if p.min() < -1e-12:
        raise ValueError("measurement produced a negative probability")
    p = np.clip(p, 0.0, None)
    return JointDistribution(p / p.sum())


def holevo_chi(e: Ensemble) -> float:
    """Holevo quantity of a pure-state ensemble, ``S(sum_i p_i eta_i)``."""
    return von_neumann_entropy(e.average_state())


def random_density_matrix(dim: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    """Hilbert-Schmidt random state (Ginibre ``G G^dagger``) of the given rank."""
    rank = dim if rank is None else rank
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    m = g @ g.conj().T
    m = (m + m.conj().T) / 2
    return m / np.trace(m).real


def random_pure_state(dim: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)
