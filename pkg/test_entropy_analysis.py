"""
Tests for entropy_analysis: Shannon/von Neumann entropy, coherence entropy and the entropy balance
"""
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from entropy_analysis import (
    LN2,
    coherence_entropy,
    coherence_witness_search,
    entropy_balance,
    luders_state,
    mixture_average_check,
    mutual_information,
    observable_entropy,
    sandwich_equalities,
    shannon_entropy,
    von_neumann_entropy,
)
from instance_generator import random_observable_instance, random_unitary
from operator_core import (
    DensityOperator,
    DomainError,
    InputError,
    PreconditionError,
    Projector,
    SpectralForm,
    spectral_decompose,
)

PLUS = np.array([1.0, 1.0]) / np.sqrt(2)
SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]])
SIGMA_Z = spectral_decompose(np.diag([1.0, -1.0]))


def test_shannon_entropy_values():
    print("\n[TEST 1] Shannon entropy in nats")
    assert shannon_entropy([1.0, 0.0]) == 0.0
    assert abs(shannon_entropy([0.5, 0.5]) - LN2) < 1e-12
    assert abs(shannon_entropy([0.8, 0.2]) - 0.500402) < 1e-6
    print("  ✓ PASS: H(1,0)=0, H(1/2,1/2)=ln 2, H(0.8,0.2)=0.500402")


def test_shannon_entropy_rejects_invalid_vectors():
    with pytest.raises(DomainError):
        shannon_entropy([1.2, -0.2])
    with pytest.raises(DomainError):
        shannon_entropy([0.5, 0.6])


def test_von_neumann_entropy_values():
    assert von_neumann_entropy(DensityOperator.from_vector(PLUS)) < 1e-12
    assert abs(von_neumann_entropy(DensityOperator.maximally_mixed(2)) - LN2) < 1e-12
    assert abs(von_neumann_entropy(DensityOperator.from_matrix(np.diag([0.8, 0.2]))) - 0.500402) < 1e-6


def test_von_neumann_entropy_is_basis_invariant():
    rho = DensityOperator.from_matrix(np.diag([0.5, 0.3, 0.2]))
    U = random_unitary(3, 11)
    rotated = DensityOperator.from_matrix(U @ rho.matrix @ U.conj().T)
    assert abs(von_neumann_entropy(rotated) - von_neumann_entropy(rho)) < 1e-9


def test_luders_state_of_plus_is_maximally_mixed():
    print("\n[TEST 2] Lüders state")
    rho = DensityOperator.from_vector(PLUS)
    after = luders_state(rho, SIGMA_Z.projectors)
    assert np.allclose(after.matrix, np.eye(2) / 2)

    bell = DensityOperator.from_vector(np.array([1.0, 0.0, 0.0, 1.0]) / np.sqrt(2), (2, 2))
    side_1 = [P.embed(1, (2, 2)) for P in SIGMA_Z.projectors]
    collapsed = luders_state(bell, side_1)
    assert np.allclose(collapsed.matrix, np.diag([0.5, 0.0, 0.0, 0.5]))
    print("  ✓ PASS: Off-diagonal coherence removed")


def test_luders_state_preconditions():
    rho = DensityOperator.maximally_mixed(2)
    P0 = Projector.from_vectors([np.eye(2)[0]])
    with pytest.raises(PreconditionError) as info:
        luders_state(rho, [P0])
    assert abs(info.value.deficit - 0.5) < 1e-12

    tilted = Projector.from_vectors([PLUS])
    with pytest.raises(InputError):
        luders_state(rho, [P0, tilted])


def test_coherence_entropy_values():
    print("\n[TEST 3] Coherence entropy")
    assert abs(coherence_entropy(SIGMA_Z, DensityOperator.from_vector(PLUS)) - LN2) < 1e-10
    assert abs(coherence_entropy(SIGMA_Z, DensityOperator.from_matrix(np.diag([0.3, 0.7])))) < 1e-12

    mixed = 0.5 * np.outer(PLUS, PLUS) + 0.5 * np.diag([1.0, 0.0])
    rho = DensityOperator.from_matrix(mixed)
    luders = np.diag(np.diag(mixed))
    expected = von_neumann_entropy(DensityOperator.from_matrix(luders)) - von_neumann_entropy(rho)
    assert abs(coherence_entropy(SIGMA_Z, rho) - expected) < 1e-10
    assert expected > 0
    print(f"  E_C on the half-coherent mixture: {expected:.6f}")
    print("  ✓ PASS")


def test_observable_entropy_values():
    assert abs(observable_entropy(SIGMA_Z, DensityOperator.from_vector(PLUS)) - LN2) < 1e-12
    assert observable_entropy(SIGMA_Z, DensityOperator.from_vector([1.0, 0.0])) < 1e-12
    A = spectral_decompose(np.diag([1.0, 1.0, 2.0]))
    assert abs(observable_entropy(A, DensityOperator.maximally_mixed(3)) - 0.636514) < 1e-6


def test_entropy_balance_on_compatible_pair():
    print("\n[TEST 4] Entropy balance, compatible observable")
    rho = DensityOperator.from_matrix(np.diag([0.5, 0.3, 0.2]))
    A = spectral_decompose(np.diag([1.0, 1.0, 2.0]))
    ledger = entropy_balance(A, rho)

    assert abs(ledger.coherence_entropy) < 1e-12
    assert abs(ledger.observable_entropy - (ledger.state_entropy - ledger.avg_component_entropy)) < 1e-10
    assert ledger.check_invariants() == []
    print(ledger.diagram())
    print("  ✓ PASS: E_C = 0 and S(A) = S(rho) - sum p_i S_i")


def test_entropy_balance_on_pure_state():
    rho = DensityOperator.from_vector(np.array([0.6, 0.0, 0.8j]))
    A = spectral_decompose(np.diag([1.0, 2.0, 3.0]))
    ledger = entropy_balance(A, rho)
    assert ledger.state_entropy < 1e-12
    assert ledger.avg_component_entropy < 1e-12
    assert abs(ledger.observable_entropy - ledger.coherence_entropy) < 1e-10
    assert ledger.branch_probabilities == pytest.approx((0.36, 0.64))


def test_ledger_scaling_to_bits():
    ledger = entropy_balance(SIGMA_Z, DensityOperator.from_vector(PLUS))
    as_bits = ledger.to_dict(scale=1.0 / LN2)
    assert abs(as_bits["observable_entropy"] - 1.0) < 1e-12
    assert abs(as_bits["coherence_entropy"] - 1.0) < 1e-10


def test_sandwich_equality_predictions():
    commuting = sandwich_equalities(SIGMA_Z, DensityOperator.from_matrix(np.diag([0.4, 0.6])))
    assert commuting.upper_tight and commuting.upper_predicted
    coherent = sandwich_equalities(SIGMA_Z, DensityOperator.from_vector(PLUS))
    assert not coherent.upper_tight and not coherent.upper_predicted
    assert coherent.consistent


def test_mutual_information_values():
    print("\n[TEST 5] Mutual information")
    bell = DensityOperator.from_vector(np.array([1.0, 0.0, 0.0, 1.0]) / np.sqrt(2), (2, 2))
    classical = DensityOperator.from_matrix(np.diag([0.5, 0.0, 0.0, 0.5]), (2, 2))
    product = DensityOperator.from_matrix(np.kron(np.diag([0.7, 0.3]), np.eye(2) / 2), (2, 2))

    assert abs(mutual_information(bell) - 2 * LN2) < 1e-10
    assert abs(mutual_information(classical) - LN2) < 1e-10
    assert abs(mutual_information(product)) < 1e-10
    print("  ✓ PASS: 2 ln 2, ln 2 and 0")


def test_mixture_average_check_detects_coherence():
    print("\n[TEST 6] Mixture average")
    rho = DensityOperator.from_vector(PLUS)
    check = mixture_average_check(SIGMA_Z, rho, SIGMA_X)
    assert abs(check.lhs - 1.0) < 1e-12
    assert abs(check.rhs) < 1e-12
    assert not check.equal

    compatible = mixture_average_check(SIGMA_Z, rho, np.diag([2.0, -3.0]))
    assert compatible.equal
    print("  ✓ PASS: sigma_x reveals coherence, diagonal B does not")


def test_witness_search_agrees_with_commutation():
    commuting_state = DensityOperator.from_matrix(np.diag([0.25, 0.75]))
    assert coherence_witness_search(SIGMA_Z, commuting_state, samples=20, seed=3).equal
    coherent_state = DensityOperator.from_vector(PLUS)
    assert not coherence_witness_search(SIGMA_Z, coherent_state, samples=20, seed=3).equal


def test_coherence_entropy_requires_discreteness():
    partial = SpectralForm.from_branches([(1.0, Projector.from_vectors([np.eye(2)[0]]))])
    with pytest.raises(PreconditionError):
        coherence_entropy(partial, DensityOperator.maximally_mixed(2))


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(min_value=0, max_value=10_000), dim=st.integers(min_value=2, max_value=6))
def test_entropy_balance_holds_on_random_instances(seed, dim):
    A, rho = random_observable_instance(seed, dim)
    ledger = entropy_balance(A, rho)
    assert ledger.balance_residual < 1e-8
    assert ledger.check_invariants() == []
    assert ledger.observable_entropy >= ledger.coherence_entropy - 1e-10


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v", "-s"]))
