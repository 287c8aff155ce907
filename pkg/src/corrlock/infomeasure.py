"""Classical and quantum mutual information of locking states.

Lower bounds come from explicit measurements found by multi-restart ascent
over POVMs; upper bounds come from the Holevo quantity, entropic uncertainty
relations or the quantum mutual information.

POVMs are parameterized by matrices ``B_j`` with ``P_j = B_j^dagger B_j`` and
``A_j = S^{-1/2} P_j S^{-1/2}``, ``S = sum_j P_j``.  Stacking ``V_j = B_j S^{-1/2}``
gives an isometry ``V`` (``sum_j V_j^dagger V_j = I``), so each ascent step moves
``V`` along the projected gradient and renormalizes through ``S^{-1/2}`` again.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.optimize import minimize

from .mub import MubFamily
from .qmath import (
    DensityMatrix,
    Ensemble,
    JointDistribution,
    Povm,
    classical_mutual_info,
    holevo_chi,
    partial_trace,
    shannon_entropy,
    von_neumann_entropy,
)
from .states import LockingInstance, bob_ensemble

CERTIFICATE_KINDS = ("holevo", "maassen-uffink", "sanchez-ruiz", "analytic", "quantum-mutual-info")
ESTIMATE = "numerical-estimate"
SANDWICH_TOL = 1e-7
CERTIFIED_GAP = 1e-10
_PLATEAU = 5


@dataclass(frozen=True)
class OptimizerConfig:
    num_outcomes: int | None = None  # None means d**2
    restarts: int = 32
    max_iters: int = 2000
    rel_tol: float = 1e-9
    step_init: float = 0.1
    seed: int = 0
    threads: int = 1

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be at least 1")
        if self.max_iters < 1:
            raise ValueError("max_iters must be at least 1")

    def outcomes_for(self, d: int) -> int:
        n = d * d if self.num_outcomes is None else self.num_outcomes
        if n < d:
            raise ValueError(f"num_outcomes={n} is smaller than the dimension {d}")
        return n


@dataclass(frozen=True)
class OptResult:
    value: float
    upper_bound: float
    certificate_kind: str
    best_povm: Povm = field(repr=False)
    per_restart: tuple
    converged: bool
    partner_povm: Povm | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.value > self.upper_bound + SANDWICH_TOL:
            raise ArithmeticError(
                f"lower bound {self.value!r} exceeds certificate {self.upper_bound!r} ({self.certificate_kind})"
            )

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "upper_bound": self.upper_bound,
            "certificate_kind": self.certificate_kind,
            "converged": self.converged,
            "per_restart": list(self.per_restart),
        }


# ---------------------------------------------------------------------------
# POVM ascent
# ---------------------------------------------------------------------------


class _Problem:
    """Maximize ``I(label : outcome)`` for labelled operators ``tau_i = sum_r c_ir c_ir^dagger``."""

    def __init__(self, factors: np.ndarray, labels: np.ndarray, n_labels: int):
        self.C = np.asarray(factors, dtype=complex)  # (d, K)
        self.dim = self.C.shape[0]
        self.E = np.zeros((self.C.shape[1], n_labels))
        self.E[np.arange(len(labels)), labels] = 1.0
        col = np.sum(np.abs(self.C) ** 2, axis=0)
        self.prior = col @ self.E

    @classmethod
    def from_ensemble(cls, e: Ensemble) -> "_Problem":
        return cls((np.sqrt(e.probs)[:, None] * e.states).T, np.arange(len(e)), len(e))

    @classmethod
    def from_operators(cls, ops) -> "_Problem":
        cols, labels = [], []
        for i, op in enumerate(ops):
            w, v = np.linalg.eigh((op + op.conj().T) / 2)
            for r in np.nonzero(w > 1e-15)[0]:
                cols.append(np.sqrt(w[r]) * v[:, r])
                labels.append(i)
        return cls(np.array(cols).T, np.array(labels), len(ops))

    def joint(self, V: np.ndarray):
        W = V @ self.C  # (outcome, row, column)
        P = np.sum(W.real**2 + W.imag**2, axis=1) @ self.E  # (outcome, label)
        return W, P

    def _info_terms(self, P):
        q = P.sum(axis=1)
        denom = np.outer(q, self.prior)
        mask = P > 0
        logs = np.zeros_like(P)
        logs[mask] = np.log2(P[mask] / denom[mask])
        return float(np.sum(P[mask] * logs[mask])), logs

    def value(self, V) -> float:
        return max(0.0, self._info_terms(self.joint(V)[1])[0])

    def value_and_grad(self, V):
        """Mutual information and ``V_j G_j`` with ``G_j = dI/dA_j``."""
        W, P = self.joint(V)
        val, logs = self._info_terms(P)
        grad = (W * (logs @ self.E.T)[:, None, :]) @ self.C.conj().T
        return max(0.0, val), grad


def _polar(V: np.ndarray) -> np.ndarray:
    S = np.einsum("nab,nac->bc", V.conj(), V)
    w, u = np.linalg.eigh((S + S.conj().T) / 2)
    return V @ ((u / np.sqrt(w)) @ u.conj().T)


def _random_isometry(n: int, d: int, rng: np.random.Generator) -> np.ndarray:
    V = rng.normal(size=(n, d, d)) + 1j * rng.normal(size=(n, d, d))
    return _polar(V)


def _projective_isometry(u: np.ndarray, n: int) -> np.ndarray:
    d = u.shape[0]
    V = np.zeros((n, d, d), dtype=complex)
    for j in range(d):
        V[j, 0, :] = u[:, j].conj()
    return V


def _negated_objective(x: np.ndarray, problem: _Problem, shape) -> tuple[float, np.ndarray]:
    """``-I`` and its gradient in the real coordinates of the unconstrained ``B``.

    ``V = B T`` with ``T = S^{-1/2}``; the derivative of ``T`` uses the divided
    differences of ``s -> s^{-1/2}`` in the eigenbasis of ``S``.
    """
    h = x.size // 2
    B = (x[:h] + 1j * x[h:]).reshape(shape)
    S = np.einsum("nab,nac->bc", B.conj(), B)
    s, U = np.linalg.eigh((S + S.conj().T) / 2)
    r = np.sqrt(s)
    T = (U / r) @ U.conj().T
    val, E = problem.value_and_grad(B @ T)
    M = np.einsum("nab,nac->bc", B.conj(), E)
    H = -1.0 / (np.outer(r, r) * (r[:, None] + r[None, :]))
    N = U @ (H * (U.conj().T @ M @ U)) @ U.conj().T
    g = 2 * (E @ T + B @ (N + N.conj().T)).ravel()
    return -val, -np.concatenate([g.real, g.imag])


class _Plateau:
    """Stops L-BFGS once the relative change stays below ``rel_tol`` for ``_PLATEAU`` iterations."""

    def __init__(self, rel_tol: float):
        self.rel_tol = rel_tol
        self.last = None
        self.quiet = 0
        self.hit = False

    def __call__(self, intermediate_result):
        f = float(intermediate_result.fun)
        if self.last is not None and abs(f - self.last) <= self.rel_tol * max(abs(f), 1e-12):
            self.quiet += 1
        else:
            self.quiet = 0
        self.last = f
        if self.quiet >= _PLATEAU:
            self.hit = True
            raise StopIteration


def _ascend(problem: _Problem, V: np.ndarray, cfg: OptimizerConfig):
    """Quasi-Newton ascent from ``V``; returns ``(V, value, converged)``."""
    shape = V.shape
    x0 = np.concatenate([V.real.ravel(), V.imag.ravel()])
    plateau = _Plateau(cfg.rel_tol)
    res = minimize(
        _negated_objective, x0, args=(problem, shape), jac=True, method="L-BFGS-B", callback=plateau,
        options={"maxiter": cfg.max_iters, "ftol": 0.0, "gtol": 1e-12, "maxcor": 10},
    )
    h = res.x.size // 2
    Vout = _polar((res.x[:h] + 1j * res.x[h:]).reshape(shape))
    val = problem.value(Vout)
    start = problem.value(V)
    if start > val:
        return V, start, True
    return Vout, val, bool(plateau.hit or res.nit < cfg.max_iters)


def _povm_from_isometry(V: np.ndarray) -> Povm:
    A = np.einsum("nab,nac->nbc", V.conj(), V)
    keep = np.real(np.einsum("naa->n", A)) > 1e-15
    A = A[keep]
    A = (A + A.conj().transpose(0, 2, 1)) / 2
    return Povm(tuple(A))


def _run_restarts(task, count: int, threads: int):
    if threads > 1 and count > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(task, range(count)))
    return [task(i) for i in range(count)]


def _best_index(values) -> int:
    best = 0
    for i, v in enumerate(values):
        if v > values[best]:
            best = i
    return best


# ---------------------------------------------------------------------------
# Ensembles
# ---------------------------------------------------------------------------


def _orthonormal_groups(states: np.ndarray, tol: float = 1e-9) -> list[list[int]]:
    """Greedy split of the states into mutually orthogonal groups."""
    groups: list[list[int]] = []
    for i, s in enumerate(states):
        for g in groups:
            if len(g) < states.shape[1] and np.all(np.abs(states[g].conj() @ s) < tol):
                g.append(i)
                break
        else:
            groups.append([i])
    return groups


def basis_decomposition(e: Ensemble) -> list[np.ndarray]:
    """Complete orthonormal bases (as unitaries) formed by the ensemble members."""
    d = e.dim
    out = []
    for g in _orthonormal_groups(e.states):
        if len(g) == d:
            out.append(e.states[g].T.copy())
    return out


def entropic_certificate(e: Ensemble) -> tuple[float, str] | None:
    """Entropic upper bound on the accessible information of a uniform MUB ensemble.

    Applies when the members are exactly ``L >= 2`` complete, mutually unbiased
    bases with equal weights.  ``L = d + 1`` uses the complete-set relation;
    otherwise the two-basis relation applied pairwise caps the value at
    ``(1/2) log d``.
    """
    d = e.dim
    n = len(e)
    if n % d or n // d < 2 or np.max(np.abs(e.probs - 1.0 / n)) > 1e-12:
        return None
    bases = basis_decomposition(e)
    if len(bases) * d != n:
        return None
    for s in range(len(bases)):
        for t in range(s + 1, len(bases)):
            if np.max(np.abs(np.abs(bases[s].conj().T @ bases[t]) ** 2 - 1.0 / d)) > 1e-9:
                return None
    L = len(bases)
    if L == d + 1:
        return 1.0 - math.log2(1.0 + 1.0 / d), "sanchez-ruiz"
    return 0.5 * math.log2(d), "maassen-uffink"


def mutual_info_of_povm(e: Ensemble, m: Povm) -> float:
    """Mutual information between the ensemble label and the outcome of ``m``."""
    if m.dim != e.dim:
        raise ValueError(f"POVM dimension {m.dim} does not match ensemble dimension {e.dim}")
    A = np.array(m.elements)
    p = np.real(np.einsum("ia,jab,ib->ij", e.states.conj(), A, e.states)) * e.probs[:, None]
    p = np.clip(p, 0.0, None)
    return classical_mutual_info(JointDistribution(p / p.sum()))


def optimize_accessible_info(e: Ensemble, cfg: OptimizerConfig = OptimizerConfig(), warm_starts=None) -> OptResult:
    """Lower-bound the accessible information of ``e`` by multi-restart POVM ascent.

    Deterministic warm starts (the computational basis, any complete bases
    found among the members, and ``warm_starts``) run first, followed by
    ``cfg.restarts`` random starts whose generators derive from
    ``(cfg.seed, index)``.  The random starts are skipped when a warm start
    already meets the upper bound, since the value is then optimal.
    """
    d = e.dim
    n_out = cfg.outcomes_for(d)
    problem = _Problem.from_ensemble(e)

    starts = [np.eye(d, dtype=complex)]
    for u in list(warm_starts or []) + basis_decomposition(e):
        u = np.asarray(u, dtype=complex)
        if not any(np.allclose(u, s) for s in starts):
            starts.append(u)
    n_warm = len(starts)

    def task(i):
        if i < n_warm:
            V0 = _projective_isometry(starts[i], n_out)
        else:
            V0 = _random_isometry(n_out, d, np.random.default_rng([cfg.seed, i - n_warm]))
        return _ascend(problem, V0, cfg)

    upper, kind = holevo_chi(e), "holevo"
    ent = entropic_certificate(e)
    if ent is not None and ent[0] < upper:
        upper, kind = ent

    runs = _run_restarts(task, n_warm, cfg.threads)
    # a warm start meeting the certificate is optimal; random restarts cannot improve it
    if max(r[1] for r in runs) < upper - CERTIFIED_GAP:
        runs += _run_restarts(lambda i: task(n_warm + i), cfg.restarts, cfg.threads)
    values = [r[1] for r in runs]
    best = _best_index(values)
    return OptResult(
        value=values[best],
        upper_bound=upper,
        certificate_kind=kind,
        best_povm=_povm_from_isometry(runs[best][0]),
        per_restart=tuple(values),
        converged=bool(runs[best][2]),
    )


def icc_locking(inst: LockingInstance, cfg: OptimizerConfig = OptimizerConfig()) -> OptResult:
    """``I_c`` of the locking state: Alice measures ``|k>|t>``, so this is Bob's accessible information."""
    return optimize_accessible_info(bob_ensemble(inst), cfg, warm_starts=inst.mubs.unitaries)


def icc_locking_upper_bound(inst: LockingInstance, cfg: OptimizerConfig | None = None,
                            hint: OptResult | None = None) -> tuple[float, str]:
    """Entropic upper bound on ``I_c`` of the locking state.

    ``L = 2`` and ``L = d + 1`` are certified.  Intermediate ``L`` return
    ``log d - min_phi sum_t H_t / L`` with a numerically minimized entropy sum,
    tagged ``"numerical-estimate"``.  Passing the optimizer result as ``hint``
    seeds the minimization with its measurement directions.
    """
    d, L = inst.d, inst.L
    if L == 2:
        return 0.5 * math.log2(d), "maassen-uffink"
    if L == d + 1:
        return 1.0 - math.log2(1.0 + 1.0 / d), "sanchez-ruiz"
    cfg = OptimizerConfig() if cfg is None else cfg
    extra = []
    if hint is not None and hint.best_povm is not None:
        for a in hint.best_povm.elements:
            w, v = np.linalg.eigh(a)
            extra.append(v[:, -1])
    return math.log2(d) - entropy_sum_min(inst.mubs, cfg, extra) / L, ESTIMATE


def is_certified(kind: str) -> bool:
    return kind in CERTIFICATE_KINDS


def unlocked_icc_analytic(inst: LockingInstance) -> float:
    return math.log2(inst.L) + math.log2(inst.d)


# ---------------------------------------------------------------------------
# Entropic uncertainty
# ---------------------------------------------------------------------------


def entropy_sum(m: MubFamily, phi) -> float:
    """Sum over bases of the Shannon entropy of measuring ``phi``."""
    phi = np.asarray(phi, dtype=complex)
    phi = phi / np.linalg.norm(phi)
    return sum(shannon_entropy(np.abs(u.conj().T @ phi) ** 2) for u in m.unitaries)


def _entropy_sum_and_grad(x: np.ndarray, us: np.ndarray):
    d = us.shape[1]
    z = x[:d] + 1j * x[d:]
    amps = np.einsum("tak,a->tk", us.conj(), z)  # <u_tk|z>
    q = np.abs(amps) ** 2
    n = float(np.sum(np.abs(z) ** 2))
    p = q / n
    logp = np.where(p > 0, np.log2(np.where(p > 0, p, 1.0)), 0.0)
    H = -np.sum(p * logp, axis=1)
    coef = -(logp + H[:, None]) / n
    g = 2 * np.einsum("tk,tak,tk->a", coef, us, amps)
    return float(H.sum()), np.concatenate([g.real, g.imag])


def entropy_sum_min(m: MubFamily, cfg: OptimizerConfig = OptimizerConfig(), extra_starts=()) -> float:
    """Minimize the summed measurement entropy over unit vectors.

    Every basis vector of the family and every vector in ``extra_starts`` is a
    warm start; ``cfg.restarts`` random vectors follow.
    """
    us = np.array(m.unitaries)
    d = m.d
    starts = [us[t][:, k] for t in range(len(us)) for k in range(d)]
    starts += [np.asarray(z, dtype=complex) for z in extra_starts]
    n_warm = len(starts)

    def task(i):
        if i < n_warm:
            z0 = starts[i]
        else:
            rng = np.random.default_rng([cfg.seed, i - n_warm])
            z0 = rng.normal(size=d) + 1j * rng.normal(size=d)
        z0 = z0 / np.linalg.norm(z0)
        x0 = np.concatenate([z0.real, z0.imag])
        res = minimize(
            _entropy_sum_and_grad, x0, args=(us,), jac=True, method="L-BFGS-B",
            options={"maxiter": cfg.max_iters, "ftol": 1e-15, "gtol": 1e-12},
        )
        best = min(res.fun, _entropy_sum_and_grad(x0, us)[0])
        return best

    return float(min(_run_restarts(task, n_warm + cfg.restarts, cfg.threads)))


# ---------------------------------------------------------------------------
# Bipartite states
# ---------------------------------------------------------------------------


def quantum_mutual_info(rho: DensityMatrix) -> float:
    sa = von_neumann_entropy(partial_trace(rho, "A"))
    sb = von_neumann_entropy(partial_trace(rho, "B"))
    return max(0.0, sa + sb - von_neumann_entropy(rho))


def _conditional_operators(rho: DensityMatrix, povm_elements: np.ndarray, side: str) -> list[np.ndarray]:
    da, db = rho.dim_a, rho.dim_b
    t = rho.matrix.reshape(da, db, da, db)
    if side == "B":  # measure B, leave operators on A
        ops = np.einsum("jwv,xvyw->jxy", povm_elements, t)
    else:
        ops = np.einsum("iyx,xvyw->ivw", povm_elements, t)
    return [op for op in ops if np.real(np.trace(op)) > 1e-15]


def _isometry_elements(V: np.ndarray) -> np.ndarray:
    return np.einsum("nab,nac->nbc", V.conj(), V)


def icc_general_lower_bound(rho: DensityMatrix, cfg: OptimizerConfig = OptimizerConfig()) -> OptResult:
    """Seesaw lower bound on ``I_c(rho)`` over local POVMs, capped by ``I_q(rho)``.

    Each restart fixes Bob's POVM, ascends Alice's, then ascends Bob's against
    Alice's, alternating until the value plateaus.  Restart 0 starts both
    sides in the computational basis.
    """
    if not rho.is_bipartite:
        raise ValueError("I_c needs a bipartite state")
    da, db = rho.dim_a, rho.dim_b
    na, nb = cfg.outcomes_for(da), cfg.outcomes_for(db)
    max_rounds = 100

    def task(i):
        if i == 0:
            Va = _projective_isometry(np.eye(da), na)
            Vb = _projective_isometry(np.eye(db), nb)
        else:
            rng = np.random.default_rng([cfg.seed, i - 1])
            Va = _random_isometry(na, da, rng)
            Vb = _random_isometry(nb, db, rng)
        val, conv = -1.0, False
        for _ in range(max_rounds):
            pa = _Problem.from_operators(_conditional_operators(rho, _isometry_elements(Vb), "B"))
            Va, _, _ = _ascend(pa, Va, cfg)
            pb = _Problem.from_operators(_conditional_operators(rho, _isometry_elements(Va), "A"))
            Vb, new, _ = _ascend(pb, Vb, cfg)
            if abs(new - val) <= cfg.rel_tol * max(abs(new), 1.0):
                val, conv = new, True
                break
            val = new
        return Va, Vb, val, conv

    runs = _run_restarts(task, 1 + cfg.restarts, cfg.threads)
    values = [r[2] for r in runs]
    best = _best_index(values)
    return OptResult(
        value=values[best],
        upper_bound=quantum_mutual_info(rho),
        certificate_kind="quantum-mutual-info",
        best_povm=_povm_from_isometry(runs[best][0]),
        partner_povm=_povm_from_isometry(runs[best][1]),
        per_restart=tuple(values),
        converged=bool(runs[best][3]),
    )


def with_seed(cfg: OptimizerConfig, seed: int) -> OptimizerConfig:
    return replace(cfg, seed=seed)
