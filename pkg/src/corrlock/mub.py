"""Generalized Pauli operators, their maximal commuting classes and mutually unbiased bases.

For ``d = p^n`` the computational basis is labelled by field elements ``x`` of
GF(p^n).  Displacements act as ``X(a)|x> = |x + a>`` and
``Z(b)|x> = w^tr(b x) |x>`` with ``w = exp(2 pi i / p)``.  The ``d + 1``
commuting classes are ``{Z(b)}`` and ``{X(a) Z(lam a)}`` for each field
element ``lam``; for prime ``d`` they reduce to ``{Z^a}`` and ``{(X Z^r)^a}``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .field import GaloisField, field_for, prime_power

UNITARY_TOL = 1e-10


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class MubFamily:
    """Unitaries ``U_0 = I, U_1, ...`` whose columns are the bases."""

    d: int
    unitaries: tuple

    def __post_init__(self):
        us = tuple(_frozen(u) for u in self.unitaries)
        object.__setattr__(self, "unitaries", us)
        eye = np.eye(self.d)
        for u in us:
            if u.shape != (self.d, self.d):
                raise ValueError("unitary has the wrong shape")
            if np.max(np.abs(u.conj().T @ u - eye)) > UNITARY_TOL:
                raise ValueError("basis matrix is not unitary")

    @property
    def L(self) -> int:
        return len(self.unitaries)


@dataclass(frozen=True)
class OperatorBasis:
    """Traceless operator basis split into ``d + 1`` commuting classes of ``d - 1`` members."""

    d: int
    classes: tuple  # classes[k] has shape (d - 1, d, d)
    class_eigenbasis: tuple  # unitary diagonalizing classes[k]

    def members(self):
        for k, cls in enumerate(self.classes):
            for i, m in enumerate(cls):
                yield k, i, m

    def coefficients(self, x) -> tuple[complex, np.ndarray]:
        """Expansion ``x = c0 I + sum_ki c[k, i] M_k^i``."""
        x = np.asarray(x, dtype=complex)
        allm = np.array(self.classes)
        c = np.einsum("kiab,ab->ki", allm.conj(), x) / self.d
        return np.trace(x) / self.d, c

    def reconstruct(self, c0, c) -> np.ndarray:
        return c0 * np.eye(self.d) + np.einsum("ki,kiab->ab", c, np.array(self.classes))


def clock_shift(d: int) -> tuple[np.ndarray, np.ndarray]:
    """Shift ``X|j> = |j+1>`` and clock ``Z|j> = w^j |j>``."""
    if d < 2:
        raise ValueError("d must be at least 2")
    X = np.roll(np.eye(d, dtype=complex), 1, axis=0)
    Z = np.diag(np.exp(2j * np.pi * np.arange(d) / d))
    return X, Z


def _field_displacement(f: GaloisField, a: int, b: int) -> np.ndarray:
    d = f.order
    omega = np.exp(2j * np.pi / f.p)
    m = np.zeros((d, d), dtype=complex)
    for x in range(d):
        m[f.add(x, a), x] = omega ** f.trace(f.mul(b, x))
    return m


def _class_operators(d: int, f: GaloisField | None) -> list[np.ndarray]:
    if f is None or f.n == 1:
        X, Z = clock_shift(d)
        gens = [Z] + [X @ np.linalg.matrix_power(Z, r) for r in range(d)]
        return [np.array([np.linalg.matrix_power(g, a) for a in range(1, d)]) for g in gens]
    out = [np.array([_field_displacement(f, 0, b) for b in range(1, d)])]
    for lam in range(d):
        out.append(np.array([_field_displacement(f, a, f.mul(lam, a)) for a in range(1, d)]))
    return out


def _normalize_columns(u: np.ndarray) -> np.ndarray:
    u = u.copy()
    for j in range(u.shape[1]):
        col = u[:, j]
        i = int(np.argmax(np.abs(col) > 1e-8))
        u[:, j] = col * (abs(col[i]) / col[i])
    return u


def _phase_key(z: complex) -> float:
    a = float(np.angle(z)) % (2 * np.pi)
    return 0.0 if a > 2 * np.pi - 1e-9 else round(a, 9)


def _joint_eigenbasis(members: np.ndarray, generator_idx: list[int], seed: int) -> np.ndarray:
    """Common eigenbasis of a commuting class, columns sorted by generator eigenphases."""
    d = members.shape[1]
    rng = np.random.default_rng(seed)
    c = rng.normal(size=len(members)) + 1j * rng.normal(size=len(members))
    h = np.einsum("i,iab->ab", c, members)
    h = h + h.conj().T
    w, v = np.linalg.eigh(h)
    if np.min(np.diff(w)) < 1e-6:
        raise ArithmeticError("degenerate combination while diagonalizing a commuting class")
    eig = np.einsum("aj,iab,bj->ij", v.conj(), members[generator_idx], v)
    keys = [tuple(_phase_key(eig[g, j]) for g in range(len(generator_idx))) for j in range(d)]
    order = sorted(range(d), key=lambda j: keys[j])
    return _normalize_columns(v[:, order])


@lru_cache(maxsize=None)
def _pauli_classes_cached(d: int) -> OperatorBasis:
    p, n = prime_power(d)
    f = field_for(d) if n > 1 else None
    classes = _class_operators(d, f)
    bases = [np.eye(d, dtype=complex)]
    # generators: X(e_i) Z(lam e_i) for the n coefficient unit vectors e_i = p^i
    gen_idx = [p**i - 1 for i in range(n)]
    for k, cls in enumerate(classes[1:], start=1):
        bases.append(_joint_eigenbasis(cls, gen_idx, seed=1000 * d + k))
    for cls in classes:
        cls.setflags(write=False)
    return OperatorBasis(d, tuple(classes), tuple(_frozen(b) for b in bases))


def pauli_classes(d: int, f: GaloisField | None = None) -> OperatorBasis:
    """Partition the ``d^2 - 1`` non-identity Pauli operators into ``d + 1`` commuting classes.

    Class 0 is the diagonal (Z) class, class 1 the shift (X) class, followed by
    ``X Z^r`` (prime ``d``) or ``X(a) Z(lam a)`` (``d = p^n``) in label order.
    """
    if prime_power(d) is None:
        raise ValueError(f"{d} is not a prime power")
    if f is not None and f.order != d:
        raise ValueError("field order does not match d")
    if f is not None and f.n > 1 and f.modulus != field_for(d).modulus:
        # a non-default modulus relabels the field; build without the cache
        classes = _class_operators(d, f)
        gen_idx = [f.p**i - 1 for i in range(f.n)]
        bases = [np.eye(d, dtype=complex)] + [
            _joint_eigenbasis(c, gen_idx, seed=1000 * d + k) for k, c in enumerate(classes[1:], start=1)
        ]
        return OperatorBasis(d, tuple(classes), tuple(_frozen(b) for b in bases))
    if f is None and prime_power(d)[1] > 1:
        field_for(d)  # raises for unsupported extension degrees
    return _pauli_classes_cached(d)


def mub_family(d: int, L: int) -> MubFamily:
    """First ``L`` class eigenbases, starting with the computational basis."""
    if prime_power(d) is None:
        raise ValueError(f"{d} is not a prime power")
    if not 2 <= L <= d + 1:
        raise ValueError(f"L must lie in [2, {d + 1}], got {L}")
    ob = pauli_classes(d)
    return MubFamily(d, ob.class_eigenbasis[:L])


def verify_mub(m: MubFamily) -> float:
    """Largest deviation of ``|<u|v>|^2`` from ``1/d`` over cross-basis column pairs."""
    dev = 0.0
    us = m.unitaries
    for s in range(len(us)):
        for t in range(s + 1, len(us)):
            ov = np.abs(us[s].conj().T @ us[t]) ** 2
            dev = max(dev, float(np.max(np.abs(ov - 1.0 / m.d))))
    return dev


def trace_orthogonality_error(ob: OperatorBasis) -> float:
    """``max |Tr(M_k^i^dagger M_l^j) - d delta|`` over the whole basis."""
    allm = np.array(ob.classes).reshape(-1, ob.d * ob.d)
    gram = allm.conj() @ allm.T
    return float(np.max(np.abs(gram - ob.d * np.eye(len(allm)))))


def commutation_error(ob: OperatorBasis) -> float:
    err = 0.0
    for cls in ob.classes:
        for i in range(len(cls)):
            for j in range(i + 1, len(cls)):
                err = max(err, float(np.max(np.abs(cls[i] @ cls[j] - cls[j] @ cls[i]))))
    return err


def diagonalization_error(ob: OperatorBasis) -> float:
    err = 0.0
    for u, cls in zip(ob.class_eigenbasis, ob.classes):
        t = np.einsum("ai,kab,bj->kij", u.conj(), cls, u)
        off = t - np.einsum("kii->ki", t)[:, :, None] * np.eye(ob.d)
        err = max(err, float(np.max(np.abs(off))))
    return err
