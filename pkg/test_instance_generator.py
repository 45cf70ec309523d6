"""
Tests for instance_generator: seeded reproducibility and the properties each family promises
"""
import numpy as np
import pytest

from instance_generator import (
    biorthogonal_mixture,
    intermediary_instance,
    make_rng,
    padded_twin_instance,
    random_density,
    random_observable,
    random_pure_bipartite,
    random_spectra,
    random_unitary,
    refinement_chain,
    schmidt_ensemble_instance,
)
from observable_relation import RefinementVerdict, refinement_relation
from operator_core import InputError, spectral_norm
from twin_observables import schmidt_decompose, verify_pto


def test_same_seed_same_instance():
    print("\n[TEST 1] Reproducibility")
    first = random_density(4, 2, seed=123)
    second = random_density(4, 2, seed=123)
    assert np.array_equal(first.matrix, second.matrix)
    assert not np.array_equal(first.matrix, random_density(4, 2, seed=124).matrix)

    a = make_rng(5, 0, 3).standard_normal(4)
    b = make_rng(5, 0, 3).standard_normal(4)
    c = make_rng(5, 1, 3).standard_normal(4)
    assert np.array_equal(a, b) and not np.array_equal(a, c)
    print("  ✓ PASS: streams depend only on (seed, keys)")


def test_random_unitary_is_unitary():
    U = random_unitary(5, 9)
    assert spectral_norm(U.conj().T @ U - np.eye(5)) < 1e-12


def test_random_density_rank():
    rho = random_density(5, 2, seed=1)
    assert int(np.sum(rho.eigenvalues() > 1e-10)) == 2
    with pytest.raises(InputError):
        random_density(3, 4, seed=1)


def test_random_observable_levels():
    A = random_observable(6, seed=2, levels=3)
    assert len(A.branches) == 3
    assert sum(b.projector.rank for b in A.branches) == 6
    assert A.is_resolution_of_identity()


def test_schmidt_rank_is_respected():
    phi = random_pure_bipartite(3, 4, seed=4, schmidt_rank=2)
    assert schmidt_decompose(phi, (3, 4)).rank == 2


def test_intermediary_instance_is_block_diagonal():
    A, rho = intermediary_instance(3, weak_dim=2, strong_dim=1)
    assert rho.dim == 3
    assert np.allclose(rho.matrix[:2, 2], 0.0)
    assert len(A.branches) == 3


def test_refinement_chain_is_nested():
    state, observables = refinement_chain(8, 4, depth=3)
    assert len(observables) == 3
    for fine, coarse in zip(observables, observables[1:]):
        assert len(fine.branches) == len(coarse.branches) + 1
        relation = refinement_relation(fine, coarse, state)
        assert relation.verdict != RefinementVerdict.NOT_COMPARABLE


def test_padded_twins_verify():
    state, A1, A2, _ = padded_twin_instance(6, 2, 2)
    assert state.require_dims() == (3, 3)
    assert verify_pto(A1, A2, state).is_pto


def test_random_spectra_are_positive():
    spectra, weights = random_spectra(10, 3, 4)
    assert spectra.shape == (4, 3)
    assert np.all(spectra > 0)
    assert np.allclose(spectra.sum(axis=1), 1.0)
    assert abs(weights.sum() - 1.0) < 1e-12


def test_rotated_ensemble_keeps_twins():
    state, A1, A2, components = schmidt_ensemble_instance(12, 2, 2, dims=(3, 2), rotate=True)
    assert state.require_dims() == (3, 2)
    assert len(components) == 2
    assert verify_pto(A1, A2, state).is_pto


def test_biorthogonal_mixture_components_are_confined():
    mixture = biorthogonal_mixture(14, 3, 3, 2)
    assert len(mixture.components) == 2
    assert abs(sum(p for p, _ in mixture.components) - 1.0) < 1e-12
    with pytest.raises(InputError):
        biorthogonal_mixture(14, 2, 3, 3)


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v", "-s"]))
