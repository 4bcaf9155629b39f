import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ergogap import linalg
from ergogap.ergotropy import GapEngine, all_gaps, ergotropy, group_energies, k_gap, passive_energy
from ergogap.errors import DimensionMismatch, LengthMismatch, NotAProbabilityVector
from ergogap.model import Partition, validate_density, validate_hamiltonian, validate_state
from ergogap.partitions import bipartitions, k_partitions
from ergogap.states import ghz, random_state, w_state


def brute_passive(lam, e):
    return min(sum(l * e[i] for l, i in zip(lam, perm)) for perm in itertools.permutations(range(len(e))))


def test_passive_energy_oracle():
    rng = np.random.default_rng(0)
    for _ in range(200):
        d = rng.integers(2, 7)
        lam = rng.dirichlet(np.ones(d))
        e = np.sort(rng.uniform(0, 3, size=d))
        assert abs(passive_energy(lam, e) - brute_passive(lam, e)) < 1e-12


def test_passive_energy_ties():
    lam = [0.4, 0.4, 0.2]
    e = [0, 1, 1]
    assert passive_energy(lam, e) == pytest.approx(brute_passive(lam, e), abs=1e-15)
    assert passive_energy([0.2, 0.4, 0.4], [1, 0, 1]) == pytest.approx(0.6)


def test_passive_energy_validation():
    with pytest.raises(LengthMismatch):
        passive_energy([1.0], [0, 1])
    with pytest.raises(NotAProbabilityVector):
        passive_energy([0.7, 0.7], [0, 1])
    with pytest.raises(NotAProbabilityVector):
        passive_energy([1.1, -0.1], [0, 1])


def test_group_energies_basis_order():
    h = validate_hamiltonian([[0, 1], [0, 2, 5]])
    assert list(group_energies(h, (0, 1))) == [0, 2, 5, 1, 3, 6]


def test_ergotropy_simple_cases():
    excited = validate_state([0, 1], (2,)).density()
    assert ergotropy(excited) == pytest.approx(1.0)
    mixed = validate_density(np.diag([0.3, 0.7]), (2,))
    assert ergotropy(mixed) == pytest.approx(0.4)
    assert ergotropy(validate_density(np.eye(2) / 2, (2,))) == 0.0
    with pytest.raises(DimensionMismatch):
        ergotropy(excited, validate_hamiltonian([[0, 1], [0, 1]]))


def test_ghz_gaps():
    g = ghz(3)
    assert all(r.gap == pytest.approx(1.0) for r in all_gaps(g, None, 2))
    assert all_gaps(g, None, 3)[0].gap == pytest.approx(1.5)


def test_w_gaps():
    gaps = [r.gap for r in all_gaps(w_state(3), None, 2)]
    assert np.allclose(gaps, 2 / 3)


def test_product_state_has_zero_gaps():
    psi = np.kron(np.kron([0.6, 0.8], [1, 0]), [0.8, 0.6j])
    s = validate_state(psi, (2, 2, 2))
    for k in (2, 3):
        assert all(abs(r.gap) < 1e-12 for r in all_gaps(s, None, k))


def test_gap_equals_passive_sum_for_pure():
    rng = np.random.default_rng(1)
    h = validate_hamiltonian([[0, 1], [0, 0.5, 2], [0, 3]])
    s = random_state((2, 3, 2), rng)
    eng = GapEngine(s, h)
    for p in bipartitions(3):
        direct = 0.0
        for b in p.blocks:
            rho = linalg.reduce_pure(s.amplitudes, s.dims, b)
            lam = np.linalg.eigvalsh(rho)
            direct += brute_passive(lam, group_energies(h, b))
        assert eng.gap(p).gap == pytest.approx(direct, abs=1e-12)


def test_classically_correlated_mixture():
    # energy 1, passive energy 0.5, maximally mixed marginals
    rho = validate_density(np.diag([0.5, 0, 0, 0.5]), (2, 2))
    g = k_gap(rho, None, Partition.of([[0], [1]]))
    assert g.global_ergotropy == pytest.approx(0.5)
    assert g.partitioned_ergotropy == pytest.approx(0.0, abs=1e-12)
    assert g.gap == pytest.approx(0.5)


def test_jacobi_pipeline_agrees():
    rng = np.random.default_rng(2)
    s = random_state((2, 2, 2, 2), rng)
    ref = [r.gap for r in all_gaps(s, None, 2)]
    with linalg.eigen_method("jacobi"):
        ours = [r.gap for r in all_gaps(s, None, 2)]
    assert np.allclose(ours, ref, atol=1e-11)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_identity_total_gap_is_half_sum_for_three_qubits(seed):
    s = random_state((2, 2, 2), np.random.default_rng(seed))
    bi = sum(r.gap for r in all_gaps(s, None, 2))
    assert all_gaps(s, None, 3)[0].gap == pytest.approx(bi / 2, abs=1e-12)


def test_nonuniform_ladder_partition_order():
    h = validate_hamiltonian([[0, 1], [0, 1], [0, 1], [0, 1]])
    s = random_state((2,) * 4, np.random.default_rng(3))
    eng = GapEngine(s, h)
    for k in range(2, 4):
        for p in k_partitions(4, k):
            assert eng.gap(p).gap >= -1e-12
