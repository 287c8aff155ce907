"""Evaluators for the correlation-unlocking inequalities.

Every evaluator computes both sides and reports whether its precondition
holds instead of assuming it, so sweeps can chart where a bound applies.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .field import least_prime_power
from .mub import OperatorBasis
from .qmath import (
    DensityMatrix,
    classical_relative_entropy,
    partial_trace,
    tensor,
    trace_distance,
    von_neumann_entropy,
)

LN2 = math.log(2.0)
CHAIN_TOL = 1e-8


@dataclass(frozen=True)
class BoundReport:
    name: str
    lhs: float
    rhs: float
    precondition_met: bool = True
    details: dict = field(default_factory=dict)

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs

    def holds(self, tol: float = 0.0) -> bool:
        """True when the precondition fails or ``lhs <= rhs + tol``."""
        return (not self.precondition_met) or self.slack >= -tol

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "slack": self.slack,
            "precondition_met": self.precondition_met,
            "details": self.details,
        }


@dataclass(frozen=True)
class MeritFigures:
    r1: float  # amplification I_c(rho') / I_c(rho)
    r2: float  # unlocked bits per key bit


def eta(x: float) -> float:
    """``-x log2 x`` on ``[0, 1]``."""
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"eta is defined on [0, 1], got {x}")
    return _xlog(x)


def _xlog(x: float) -> float:
    return 0.0 if x == 0 else -x * math.log2(x)


def theorem1_requirement(ic_after: float, l: float) -> float:
    """Smallest ``I_c(rho)`` compatible with reaching ``ic_after`` using ``l`` one-way bits."""
    if l < 0:
        raise ValueError("l must be nonnegative")
    return 2.0 ** (-l) * (ic_after - l)


def theorem1_delta_cap(ic_before: float, l: float) -> float:
    """Largest gain ``I_c^(l) - I_c`` allowed with ``l`` one-way bits."""
    if l < 0 or ic_before < 0:
        raise ValueError("l and ic_before must be nonnegative")
    return l + (2.0**l - 1.0) * ic_before


def theorem1_check(ic: float, ic_after: float, l: float, name: str = "theorem1") -> BoundReport:
    """``lhs = 2^-l (ic_after - l)`` must not exceed ``rhs = ic``."""
    return BoundReport(
        name, theorem1_requirement(ic_after, l), ic, True,
        {"ic_after": ic_after, "l": l, "delta_cap": theorem1_delta_cap(max(ic, 0.0), l)},
    )


def lemma1_rhs(ic: float, d: int) -> float:
    if ic < 0:
        raise ValueError("ic must be nonnegative")
    return (least_prime_power(d) + 1) ** 2 * math.sqrt(2 * LN2 * ic)


def _basis_distributions(rho: np.ndarray, da: int, db: int, bases_a, bases_b) -> np.ndarray:
    """``p[k, l, a, b]`` for measuring in ``U_k (x) V_l``."""
    t = rho.reshape(da, db, da, db)
    out = np.empty((len(bases_a), len(bases_b), da, db))
    for k, u in enumerate(bases_a):
        # rotate A into basis k and keep its diagonal: m[a, y, y']
        m = np.einsum("xa,xyzw,za->ayw", u.conj(), t, u)
        for l, v in enumerate(bases_b):
            out[k, l] = np.real(np.einsum("yb,ayw,wb->ab", v.conj(), m, v))
    return out


def lemma1_decomposition_check(rho: DensityMatrix, ob: OperatorBasis, ob_b: OperatorBasis | None = None) -> BoundReport:
    """Chain ``Tr|rho - rho_A (x) rho_B| <= sum_kl |p_kl - q_kl|_1 <= (d_A+1)(d_B+1) sqrt(2 ln2 max S(p_kl||q_kl))``.

    ``p_kl`` and ``q_kl`` are outcome distributions of ``rho`` and of the product
    of its marginals measured in the class eigenbases ``U_k (x) U_l``.  With a
    single operator basis both factors are ``d + 1``.
    """
    ob_b = ob if ob_b is None else ob_b
    if rho.dim_a != ob.d or rho.dim_b != ob_b.d:
        raise ValueError(f"state dims ({rho.dim_a}, {rho.dim_b}) do not match operator bases ({ob.d}, {ob_b.d})")
    ra, rb = partial_trace(rho, "A"), partial_trace(rho, "B")
    prod = tensor(ra, rb)
    lhs = trace_distance(rho.matrix, prod)
    p = _basis_distributions(rho.matrix, ob.d, ob_b.d, ob.class_eigenbasis, ob_b.class_eigenbasis)
    p = np.clip(p, 0.0, None)
    pa, pb = p.sum(axis=3), p.sum(axis=2)
    q = pa[:, :, :, None] * pb[:, :, None, :]
    l1 = np.abs(p - q).sum(axis=(2, 3))
    mid = float(l1.sum())
    rel = np.array([[classical_relative_entropy(p[k, l], q[k, l]) for l in range(p.shape[1])] for k in range(p.shape[0])])
    smax = float(rel.max())
    factor = (ob.d + 1) * (ob_b.d + 1)
    rhs = factor * math.sqrt(2 * LN2 * smax)
    pinsker_ok = bool(np.all(l1**2 / (2 * LN2) <= rel + 1e-10))
    return BoundReport(
        "lemma1",
        lhs,
        rhs,
        True,
        {
            "mid": mid,
            "max_relative_entropy": smax,
            "chain_ok": bool(lhs <= mid + CHAIN_TOL and mid <= rhs + CHAIN_TOL),
            "pinsker_per_pair_ok": pinsker_ok,
            "factor": factor,
            "main_text_factor": (2 * max(ob.d, ob_b.d)) ** 2,
        },
    )


def theorem2_cap(ic: float, l: float, d: int, gain: float | None = None) -> BoundReport:
    """Cap on ``I_c(rho') - I_c(rho)`` for ``l`` qubits of two-way communication.

    ``rhs`` is the full cap; the simplified form is in ``details``.  ``lhs``
    defaults to ``2 l``, the gain allowed without any violation.
    """
    dp = least_prime_power(d)
    s = math.sqrt(2 * LN2 * max(ic, 0.0))
    x = (dp + 1) ** 2 * s
    full = 2 * l + 2 * x * math.log2(d) + _xlog(x)
    simplified = 2 * l - (dp + 1) ** 2 * s * (math.log2(s) if s > 0 else 0.0)
    main_text = 2 * l - (2 * d) ** 2 * s * (math.log2(s) if s > 0 else 0.0)
    threshold = 1.0 / (6 * LN2 * (dp + 1) ** 2)
    return BoundReport(
        "theorem2",
        2 * l if gain is None else gain,
        full,
        ic <= threshold,
        {
            "d_prime": dp,
            "threshold": threshold,
            "trace_distance_cap": x,
            "fannes_applicable": x <= 1 / math.e,
            "simplified_cap": simplified,
            "main_text_cap": main_text,
        },
    )


def fannes_bound(t: float, d0: int) -> float:
    """``log2(d0) t + eta(t)`` for trace norm ``t``."""
    if t < 0:
        raise ValueError("trace distance must be nonnegative")
    return math.log2(d0) * t + _xlog(t)


def fannes_check(nu, mu) -> BoundReport:
    nu = np.asarray(nu.matrix if isinstance(nu, DensityMatrix) else nu)
    mu = np.asarray(mu.matrix if isinstance(mu, DensityMatrix) else mu)
    t = trace_distance(nu, mu)
    diff = abs(von_neumann_entropy(nu) - von_neumann_entropy(mu))
    return BoundReport("fannes", diff, fannes_bound(t, nu.shape[0]), t <= 1 / math.e, {"trace_distance": t})


def pinsker_gap(p, q) -> BoundReport:
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if p.shape != q.shape:
        raise ValueError("distributions must have equal length")
    l1 = float(np.abs(p - q).sum())
    return BoundReport("pinsker", l1**2 / (2 * LN2), classical_relative_entropy(p, q), True, {"l1": l1})


def merit_figures(ic: float, ic_after: float, l: float) -> MeritFigures:
    if l <= 0:
        raise ValueError("key length must be positive")
    if ic <= 0:
        if ic_after > 0:
            return MeritFigures(math.inf, (ic_after - ic) / l)
        raise ValueError("amplification undefined when both I_c values vanish")
    return MeritFigures(ic_after / ic, (ic_after - ic) / l)


def complete_locking_check(alpha: float, l: float, d: int, delta: float) -> BoundReport:
    """Test ``I_c(rho) = 2^(-alpha l)`` with ``I_c(rho') - l = delta log2 d`` against the one-way bound.

    ``precondition_met`` is False (infeasible) when the initial correlation is
    below the minimum the one-way bound allows.
    """
    required = theorem1_requirement(delta * math.log2(d) + l, l)
    claimed = 2.0 ** (-alpha * l)
    return BoundReport(
        "complete_locking",
        required,
        claimed,
        True,
        {"alpha": alpha, "l": l, "d": d, "delta": delta, "feasible": claimed >= required},
    )


def iq_fannes_check(rho: DensityMatrix, iq: float) -> BoundReport:
    """``I_q <= log2(d_A d_B) T + eta(T)`` with ``T = Tr|rho - rho_A (x) rho_B|`` when ``T <= 1/e``."""
    prod = tensor(partial_trace(rho, "A"), partial_trace(rho, "B"))
    t = trace_distance(rho.matrix, prod)
    return BoundReport("theorem2_step3", iq, fannes_bound(t, rho.dim), t <= 1 / math.e, {"trace_distance": t})
