"""
Tests for operator_core: spectral forms, partial traces and certainty events
"""
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from instance_generator import random_certainty_pair, random_density, random_observable
from operator_core import (
    DensityOperator,
    DimensionError,
    InputError,
    PreconditionError,
    Projector,
    SpectralForm,
    commutator_norm,
    detectable_indices,
    embed_operator,
    is_certain_event,
    partial_trace,
    range_projector,
    spectral_decompose,
    spectral_norm,
)


def test_spectral_decompose_clusters_degenerate_eigenvalues():
    print("\n[TEST 1] Spectral decomposition groups repeated eigenvalues")
    H = np.diag([1.0, 1.0 + 1e-12, 2.0])
    form = spectral_decompose(H)

    print(f"  Eigenvalues: {form.eigenvalues}")
    assert len(form.branches) == 2, "Near-equal eigenvalues should share one branch"
    assert [b.projector.rank for b in form.branches] == [2, 1]
    assert np.allclose(form.to_matrix(), H, atol=1e-10)
    assert form.is_resolution_of_identity()
    print("  ✓ PASS: Two branches, ranks 2 and 1")


def test_spectral_decompose_rejects_bad_input():
    print("\n[TEST 2] Non-Hermitian and non-square input")
    with pytest.raises(InputError):
        spectral_decompose(np.array([[0.0, 1.0], [0.0, 0.0]]))
    with pytest.raises(DimensionError):
        spectral_decompose(np.ones((2, 3)))
    print("  ✓ PASS: Both rejected")


def test_spectral_form_rejects_overlapping_projectors():
    P = Projector.from_vectors([np.array([1.0, 0.0])])
    Q = Projector.from_vectors([np.array([1.0, 1.0]) / np.sqrt(2)])
    with pytest.raises(InputError):
        SpectralForm.from_branches([(1.0, P), (2.0, Q)])


def test_density_operator_validation():
    print("\n[TEST 3] Density operator checks trace and positivity")
    with pytest.raises(InputError):
        DensityOperator.from_matrix(np.diag([0.6, 0.6]))
    with pytest.raises(InputError):
        DensityOperator.from_matrix(np.diag([1.2, -0.2]))
    with pytest.raises(DimensionError):
        DensityOperator.from_matrix(np.eye(4) / 4, (3, 2))
    rho = DensityOperator.from_matrix(np.eye(4) / 4, (2, 2))
    assert rho.require_dims() == (2, 2)
    print("  ✓ PASS: Invalid states rejected, dims recorded")


def test_partial_trace_of_bell_state_is_maximally_mixed():
    bell = np.array([1.0, 0.0, 0.0, 1.0]) / np.sqrt(2)
    rho = DensityOperator.from_vector(bell, (2, 2))
    for side in (1, 2):
        reduced = partial_trace(rho, side)
        assert np.allclose(reduced.matrix, np.eye(2) / 2)


def test_partial_trace_of_product_state():
    a = np.diag([0.7, 0.3])
    b = np.array([[0.5, 0.2], [0.2, 0.5]])
    rho = DensityOperator.from_matrix(np.kron(a, b), (2, 2))
    assert np.allclose(partial_trace(rho, 1).matrix, a)
    assert np.allclose(partial_trace(rho, 2).matrix, b)


def test_embedded_observables_commute():
    A = np.array([[1.0, 2.0], [2.0, -1.0]])
    B = np.array([[0.0, 1j], [-1j, 0.0]])
    left = embed_operator(A, 1, (2, 2))
    right = embed_operator(B, 2, (2, 2))
    assert commutator_norm(left, right) < 1e-12


def test_certainty_event_three_criteria_agree():
    print("\n[TEST 4] Certainty of an event, three criteria")
    rho = DensityOperator.from_matrix(np.diag([0.5, 0.5, 0.0]))
    P = Projector.from_vectors([np.eye(3)[0], np.eye(3)[1]])
    report = is_certain_event(P, rho)

    print(f"  Probability: {report.probability:.12f}")
    assert report.certain
    assert report.algebraic_criterion and report.range_criterion
    assert report.consistent

    Q = Projector.from_vectors([np.eye(3)[0]])
    other = is_certain_event(Q, rho)
    assert not other.certain
    assert abs(other.deficit - 0.5) < 1e-12
    assert other.consistent
    print("  ✓ PASS: Certain and uncertain events classified consistently")


def test_range_projector_rank():
    rho = DensityOperator.from_matrix(np.diag([0.25, 0.75, 0.0, 0.0]))
    Q = range_projector(rho)
    assert Q.rank == 2
    assert spectral_norm(Q.matrix @ rho.matrix - rho.matrix) < 1e-12


def test_detectable_indices_requires_discreteness():
    print("\n[TEST 5] Detectable branches")
    A = SpectralForm.from_branches([
        (1.0, Projector.from_vectors([np.eye(3)[0]])),
        (2.0, Projector.from_vectors([np.eye(3)[1]])),
        (3.0, Projector.from_vectors([np.eye(3)[2]])),
    ])
    rho = DensityOperator.from_matrix(np.diag([0.4, 0.6, 0.0]))
    indices, probs = detectable_indices(A, rho)
    assert indices == [0, 1]
    assert np.allclose(probs, [0.4, 0.6, 0.0])

    partial = SpectralForm.from_branches([(1.0, Projector.from_vectors([np.eye(3)[0]]))])
    with pytest.raises(PreconditionError) as info:
        detectable_indices(partial, rho)
    assert abs(info.value.deficit - 0.6) < 1e-12
    print("  ✓ PASS: Undetectable branch excluded, missing mass reported")


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(min_value=0, max_value=10_000), dim=st.integers(min_value=2, max_value=5))
def test_random_observable_reconstructs(seed, dim):
    A = random_observable(dim, seed)
    assert A.is_resolution_of_identity()
    again = spectral_decompose(A.to_matrix())
    assert np.allclose(again.to_matrix(), A.to_matrix(), atol=1e-9)


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(min_value=0, max_value=10_000))
def test_certainty_criteria_are_consistent_on_random_pairs(seed):
    pair = random_certainty_pair(seed, 4)
    report = is_certain_event(pair.projector, pair.state)
    assert report.certain == pair.certain
    assert report.consistent


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(min_value=0, max_value=10_000))
def test_random_density_is_valid_state(seed):
    rho = random_density(4, seed=seed, bipartite_dims=(2, 2))
    values = rho.eigenvalues()
    assert values.min() > -1e-12
    assert abs(values.sum() - 1.0) < 1e-10
    assert rho.bipartite_dims == (2, 2)


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v", "-s"]))
