"""Verification suites: each check yields a ``BoundReport`` and a pass flag."""
from __future__ import annotations

import math
from typing import Iterator

import numpy as np

from . import bounds
from .bounds import BoundReport
from .field import least_prime_power, prime_power
from .infomeasure import (
    OptimizerConfig,
    icc_general_lower_bound,
    icc_locking_upper_bound,
    quantum_mutual_info,
    unlocked_icc_analytic,
)
from .mub import (
    commutation_error,
    diagonalization_error,
    mub_family,
    pauli_classes,
    trace_orthogonality_error,
    verify_mub,
)
from .qmath import DensityMatrix, random_density_matrix, trace_distance
from .states import (
    LockingInstance,
    bell_state,
    embed,
    locking_state,
    random_bipartite_state,
    random_separable_state,
)

SUITES = ("mub", "lemma1", "theorem1", "theorem2", "fannes", "pinsker")
MUB_TOL = 1e-9
PINSKER_TOL = 1e-10
FANNES_TOL = 1e-9
SANDWICH_TOL = 1e-7

Check = tuple[BoundReport, bool]


def prime_powers_upto(n: int) -> list[int]:
    return [q for q in range(2, n + 1) if prime_power(q) is not None]


def _rng(seed: int, suite: str, i: int) -> np.random.Generator:
    return np.random.default_rng([seed, SUITES.index(suite), i])


def mub_suite(max_d: int = 16) -> Iterator[Check]:
    for d in prime_powers_upto(max_d):
        ob = pauli_classes(d)
        fam = mub_family(d, d + 1)
        for name, err in (
            ("mub_unbiasedness", verify_mub(fam)),
            ("operator_trace_orthogonality", trace_orthogonality_error(ob)),
            ("operator_class_commutation", commutation_error(ob)),
            ("operator_class_diagonalization", diagonalization_error(ob)),
        ):
            rep = BoundReport(name, err, MUB_TOL, True, {"d": d})
            yield rep, rep.slack >= 0


def pinsker_suite(seed: int, draws: int) -> Iterator[Check]:
    for i in range(draws):
        rng = _rng(seed, "pinsker", i)
        n = int(rng.integers(2, 17))
        p, q = rng.dirichlet(np.ones(n)), rng.dirichlet(np.ones(n))
        rep = bounds.pinsker_gap(p, q)
        yield rep, rep.slack >= -PINSKER_TOL


def fannes_pair(rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Random state pair at trace norm at most ``1/e``."""
    d0 = int(rng.integers(2, 7))
    nu = random_density_matrix(d0, rng, rank=int(rng.integers(1, d0 + 1)))
    sigma = random_density_matrix(d0, rng, rank=int(rng.integers(1, d0 + 1)))
    full = trace_distance(nu, sigma)
    s = min(1.0, rng.uniform(0, 1) * (1 / math.e) / max(full, 1e-300))
    mu = (1 - s) * nu + s * sigma
    return nu, (mu + mu.conj().T) / 2


def fannes_suite(seed: int, draws: int) -> Iterator[Check]:
    for i in range(draws):
        nu, mu = fannes_pair(_rng(seed, "fannes", i))
        rep = bounds.fannes_check(nu, mu)
        yield rep, rep.precondition_met and rep.slack >= -FANNES_TOL


def _lemma1_report(rho: DensityMatrix, label: str) -> Check:
    da, db = least_prime_power(rho.dim_a), least_prime_power(rho.dim_b)
    if (da, db) != (rho.dim_a, rho.dim_b):
        rho = embed(rho, da, db)
    rep = bounds.lemma1_decomposition_check(rho, pauli_classes(da), pauli_classes(db))
    rep.details["state"] = label
    return rep, rep.details["chain_ok"]


def lemma1_suite(seed: int, draws: int, locking_max_d: int = 9) -> Iterator[Check]:
    yield _lemma1_report(bell_state(2), "bell")
    for d in (2, 3):
        for i in range(draws):
            rng = _rng(seed, "lemma1", 2 * i + d)
            if i % 2:
                rho = random_separable_state(d, d, rng)
            else:
                rho = random_bipartite_state(d, d, rng, rank=int(rng.integers(1, d * d + 1)))
            yield _lemma1_report(rho, f"random d={d} #{i}")
    for d in prime_powers_upto(locking_max_d):
        yield _lemma1_report(locking_state(LockingInstance(d, 2)), f"locking d={d} L=2")


def theorem1_suite(max_d: int = 16) -> Iterator[Check]:
    for d in prime_powers_upto(max_d):
        for L in sorted({2, d + 1}):
            inst = LockingInstance(d, L)
            upper, kind = icc_locking_upper_bound(inst)
            after = unlocked_icc_analytic(inst)
            rep = bounds.theorem1_check(upper, after, inst.key_bits)
            rep.details.update({"d": d, "L": L, "certificate": kind})
            if L == 2:
                yield rep, abs(rep.slack) <= 1e-9
            else:
                yield rep, rep.slack >= -1e-9
                gain = BoundReport(
                    "unlocking_gain_full_mub", 2 * math.log2(d + 1) - 1, after - upper, True, {"d": d}
                )
                yield gain, gain.slack >= -1e-9


def theorem2_suite(seed: int, draws: int, cfg: OptimizerConfig | None = None) -> Iterator[Check]:
    cfg = OptimizerConfig(restarts=2, max_iters=300, seed=seed) if cfg is None else cfg
    states = [(f"locking d={d} L=2", locking_state(LockingInstance(d, 2))) for d in (2, 3)]
    for i in range(draws):
        rng = _rng(seed, "theorem2", i)
        d = int(rng.integers(2, 4))
        eps = float(rng.uniform(0.0, 0.2))
        base = random_separable_state(d, d, rng, terms=1)
        mix = (1 - eps) * base.matrix + eps * random_density_matrix(d * d, rng)
        states.append((f"near-product d={d} #{i}", DensityMatrix((mix + mix.conj().T) / 2, d, d)))
    for label, rho in states:
        res = icc_general_lower_bound(rho, cfg)
        iq = quantum_mutual_info(rho)
        step1 = BoundReport("theorem2_step1", res.value, iq, True, {"state": label})
        yield step1, step1.slack >= -SANDWICH_TOL
        step3 = bounds.iq_fannes_check(rho, iq)
        step3.details["state"] = label
        yield step3, step3.holds(1e-9)
        cap = bounds.theorem2_cap(res.value, 1.0, max(rho.dim_a, rho.dim_b))
        cap.details["state"] = label
        yield cap, math.isfinite(cap.rhs)


def run_suite(name: str, seed: int = 0, draws: int = 100) -> Iterator[Check]:
    if name == "all":
        for s in SUITES:
            yield from run_suite(s, seed, draws)
        return
    if name == "mub":
        yield from mub_suite()
    elif name == "pinsker":
        yield from pinsker_suite(seed, draws)
    elif name == "fannes":
        yield from fannes_suite(seed, draws)
    elif name == "lemma1":
        yield from lemma1_suite(seed, draws)
    elif name == "theorem1":
        yield from theorem1_suite()
    elif name == "theorem2":
        yield from theorem2_suite(seed, draws)
    else:
        raise ValueError(f"unknown suite {name!r}")
