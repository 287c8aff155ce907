import math

import numpy as np
import pytest

from corrlock.bounds import (
    complete_locking_check,
    eta,
    fannes_bound,
    fannes_check,
    iq_fannes_check,
    lemma1_decomposition_check,
    lemma1_rhs,
    merit_figures,
    pinsker_gap,
    theorem1_check,
    theorem1_delta_cap,
    theorem1_requirement,
    theorem2_cap,
)
from corrlock.mub import pauli_classes
from corrlock.qmath import DensityMatrix, random_density_matrix
from corrlock.states import LockingInstance, bell_state, embed, locking_state, random_separable_state

LN2 = math.log(2)


@pytest.mark.parametrize("x, expected", [(0, 0), (0.5, 0.5), (1 / math.e, math.log2(math.e) / math.e)])
def test_eta(x, expected):
    assert eta(x) == pytest.approx(expected, abs=1e-12)


def test_eta_domain():
    with pytest.raises(ValueError):
        eta(1.5)


@pytest.mark.parametrize("d", [2, 4, 16])
def test_theorem1_requirement_two_bases(d):
    assert theorem1_requirement(math.log2(d) + 1, 1) == pytest.approx(0.5 * math.log2(d), abs=1e-15)


def test_theorem1_requirement_examples():
    assert theorem1_requirement(2.0, 2.0) == 0
    assert theorem1_requirement(3.0, 1.0) == 1.0
    with pytest.raises(ValueError):
        theorem1_requirement(1.0, -1)


@pytest.mark.parametrize("ic, l, expected", [(0, 1, 1.0), (0.3, 2, 2.9), (1.5, 1, 2.5)])
def test_theorem1_delta_cap(ic, l, expected):
    assert theorem1_delta_cap(ic, l) == pytest.approx(expected, abs=1e-12)


def test_theorem1_check_saturated():
    rep = theorem1_check(1.0, 3.0, 1.0)
    assert rep.slack == 0 and rep.holds()
    assert not theorem1_check(0.5, 3.0, 1.0).holds(1e-9)


def test_lemma1_rhs():
    assert lemma1_rhs(0, 2) == 0
    assert lemma1_rhs(1, 2) == pytest.approx(9 * math.sqrt(2 * LN2), abs=1e-12)
    assert lemma1_rhs(1, 2) == pytest.approx(10.594, abs=5e-3)
    assert lemma1_rhs(1, 6) / lemma1_rhs(1, 7) == 1.0
    assert lemma1_rhs(1, 6) == pytest.approx(64 * math.sqrt(2 * LN2))


def test_lemma1_product_state(rng):
    rho = DensityMatrix(np.kron(random_density_matrix(3, rng), random_density_matrix(3, rng)), 3, 3)
    rep = lemma1_decomposition_check(rho, pauli_classes(3))
    assert rep.lhs == pytest.approx(0, abs=1e-12)
    assert rep.details["mid"] == pytest.approx(0, abs=1e-12)
    assert rep.details["chain_ok"]


def test_lemma1_bell():
    rep = lemma1_decomposition_check(bell_state(2), pauli_classes(2))
    assert rep.lhs == pytest.approx(1.5, abs=1e-12)
    assert rep.details["chain_ok"] and rep.details["pinsker_per_pair_ok"]
    assert rep.details["factor"] == 9


def test_lemma1_random_separable_qutrits(rng):
    ob = pauli_classes(3)
    for _ in range(100):
        rep = lemma1_decomposition_check(random_separable_state(3, 3, rng), ob)
        assert rep.details["chain_ok"]


def test_lemma1_locking_state_with_embedding():
    rho = locking_state(LockingInstance(2, 2))  # 4 x 2
    rep = lemma1_decomposition_check(rho, pauli_classes(4), pauli_classes(2))
    assert rep.details["chain_ok"]
    assert rep.details["factor"] == 15
    rho3 = embed(locking_state(LockingInstance(3, 2)), 7, 3)
    assert lemma1_decomposition_check(rho3, pauli_classes(7), pauli_classes(3)).details["chain_ok"]


def test_lemma1_dimension_mismatch():
    with pytest.raises(ValueError):
        lemma1_decomposition_check(bell_state(2), pauli_classes(3))


def test_theorem2_cap_examples():
    rep = theorem2_cap(0.0, 1.0, 2)
    assert rep.rhs == 2.0 and rep.precondition_met
    rep = theorem2_cap(1e-4, 1.0, 2)
    x = 9 * math.sqrt(2e-4 * LN2)
    assert rep.precondition_met
    assert rep.details["threshold"] == pytest.approx(1 / (6 * LN2 * 9))
    assert rep.rhs == pytest.approx(2 + 2 * x + eta(x), abs=1e-12)
    assert not theorem2_cap(0.5, 1.0, 2).precondition_met


@pytest.mark.parametrize("t, d0, expected", [(0, 4, 0), (0.1, 4, 0.5321928094887363)])
def test_fannes_bound(t, d0, expected):
    assert fannes_bound(t, d0) == pytest.approx(expected, abs=1e-12)


def test_fannes_precondition_flag():
    nu = np.diag([1.0, 0.0])
    mu = np.diag([0.75, 0.25])  # trace norm 0.5 > 1/e
    rep = fannes_check(nu, mu)
    assert not rep.precondition_met and rep.details["trace_distance"] == pytest.approx(0.5)


def test_fannes_random_pairs(rng):
    for _ in range(50):
        nu = random_density_matrix(3, rng)
        mu = 0.9 * nu + 0.1 * random_density_matrix(3, rng)
        rep = fannes_check(nu, mu)
        assert rep.precondition_met and rep.holds(1e-12)


def test_pinsker_examples():
    assert pinsker_gap([0.3, 0.7], [0.3, 0.7]).slack == pytest.approx(0, abs=1e-15)
    rep = pinsker_gap([1, 0], [0.5, 0.5])
    assert rep.lhs == pytest.approx(1 / (2 * LN2)) and rep.rhs == pytest.approx(1.0)
    with pytest.raises(ValueError):
        pinsker_gap([1], [0.5, 0.5])


def test_merit_figures_examples():
    m = merit_figures(2.0, 5.0, 1.0)
    assert (m.r1, m.r2) == (2.5, 3.0)
    m = merit_figures(1.0, 1.0, 2.0)
    assert (m.r1, m.r2) == (1.0, 0.0)
    ic = 1 - math.log2(8 / 7)
    assert merit_figures(ic, math.log2(56), 3.0).r2 == pytest.approx(5 / 3, abs=1e-12)
    assert merit_figures(0.0, 1.0, 1.0).r1 == math.inf
    with pytest.raises(ValueError):
        merit_figures(1.0, 2.0, 0.0)


def test_complete_locking_feasibility():
    assert complete_locking_check(0.5, 4, 16, 0.5).details["feasible"]
    assert not complete_locking_check(5.0, 4, 16, 0.5).details["feasible"]


def test_iq_fannes_on_near_product(rng):
    base = np.kron(random_density_matrix(2, rng), random_density_matrix(2, rng))
    m = 0.98 * base + 0.02 * random_density_matrix(4, rng)
    from corrlock.infomeasure import quantum_mutual_info
    rho = DensityMatrix(m, 2, 2)
    rep = iq_fannes_check(rho, quantum_mutual_info(rho))
    assert rep.precondition_met and rep.holds(1e-12)
