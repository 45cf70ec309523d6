"""
Generate seeded random and constructed instances for analysis and self-testing
Covers random states and observables, certainty pairs, intermediary-regime states,
refinement chains, twin-observable families, biorthogonal mixtures and Schmidt ensembles.
Every generator takes an integer seed (or a numpy Generator) and is bit-reproducible.
"""

from pathlib import Path
from typing import List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.linalg as sla
from scipy.stats import unitary_group

from operator_core import (
    DensityOperator,
    InputError,
    Projector,
    SpectralBranch,
    SpectralForm,
    frozen_matrix,
    range_projector,
)
from state_io import StateFile, save_state_file
from twin_observables import construct_pto_pure, construct_schmidt_ensemble, schmidt_ensemble_vectors

SeedLike = Union[int, np.random.Generator]


def make_rng(seed: int, *keys: int) -> np.random.Generator:
    """PCG64 generator for (seed, *keys); trial streams use make_rng(seed, trial_index)"""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(seed), *map(int, keys)])))


def _generator(seed: SeedLike) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else make_rng(seed)


def _complex_normal(rng: np.random.Generator, shape) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


# ============================================================================
# CATEGORY 1: RANDOM STATES AND OBSERVABLES
# ============================================================================

def random_unitary(dim: int, seed: SeedLike) -> np.ndarray:
    """Haar-random unitary"""
    rng = _generator(seed)
    if dim == 1:
        return np.exp(2j * np.pi * rng.random()) * np.ones((1, 1))
    return unitary_group.rvs(dim, random_state=rng)


def random_density(dim: int, rank: Optional[int] = None, seed: SeedLike = 0,
                   bipartite_dims: Optional[Sequence[int]] = None) -> DensityOperator:
    """rho = G G^dagger / Tr(G G^dagger) with G a dim x rank complex Gaussian matrix"""
    rank = dim if rank is None else rank
    if not 1 <= rank <= dim:
        raise InputError(f"rank {rank} outside 1..{dim}")
    G = _complex_normal(_generator(seed), (dim, rank))
    M = G @ G.conj().T
    M = M / np.trace(M).real
    rho = DensityOperator(frozen_matrix((M + M.conj().T) / 2))
    return rho.with_dims(bipartite_dims) if bipartite_dims is not None else rho


def random_pure_bipartite(d1: int, d2: int, seed: SeedLike = 0,
                          schmidt_rank: Optional[int] = None) -> np.ndarray:
    """Unit vector in C^d1 (x) C^d2; with schmidt_rank, exactly that many Schmidt coefficients"""
    rng = _generator(seed)
    if schmidt_rank is None:
        vec = _complex_normal(rng, d1 * d2)
        return vec / np.linalg.norm(vec)
    if not 1 <= schmidt_rank <= min(d1, d2):
        raise InputError(f"Schmidt rank {schmidt_rank} outside 1..{min(d1, d2)}")
    coefficients = rng.uniform(0.2, 1.0, schmidt_rank)
    coefficients = coefficients / np.linalg.norm(coefficients)
    U1 = random_unitary(d1, rng)
    U2 = random_unitary(d2, rng)
    C = (U1[:, :schmidt_rank] * coefficients) @ U2[:, :schmidt_rank].T
    return C.reshape(d1 * d2)


def random_projector(dim: int, rank: int, seed: SeedLike = 0) -> Projector:
    if not 0 <= rank <= dim:
        raise InputError(f"rank {rank} outside 0..{dim}")
    U = random_unitary(dim, seed)
    return Projector.from_vectors(U[:, :rank], dim)


def _random_blocks(size: int, parts: int, rng: np.random.Generator) -> List[List[int]]:
    cuts = np.sort(rng.choice(np.arange(1, size), size=parts - 1, replace=False)) if parts > 1 else []
    return [block.tolist() for block in np.split(np.arange(size), cuts)]


def random_observable(dim: int, seed: SeedLike = 0, levels: Optional[int] = None) -> SpectralForm:
    """Observable in a Haar-random eigenbasis with `levels` distinct integer eigenvalues"""
    rng = _generator(seed)
    levels = dim if levels is None else levels
    if not 1 <= levels <= dim:
        raise InputError(f"levels {levels} outside 1..{dim}")
    U = random_unitary(dim, rng)
    values = np.sort(rng.choice(np.arange(-2 * dim, 2 * dim + 1), size=levels, replace=False))
    blocks = _random_blocks(dim, levels, rng)
    return SpectralForm(tuple(SpectralBranch(float(v), Projector.from_vectors(U[:, block], dim))
                              for v, block in zip(values, blocks)))


class ObservableInstance(NamedTuple):
    observable: SpectralForm
    state: DensityOperator


def random_observable_instance(seed: SeedLike, dim: int) -> ObservableInstance:
    rng = _generator(seed)
    state = random_density(dim, int(rng.integers(1, dim + 1)), rng)
    observable = random_observable(dim, rng, int(rng.integers(1, dim + 1)))
    return ObservableInstance(observable, state)


# ============================================================================
# CATEGORY 2: CERTAINTY PAIRS
# ============================================================================

class CertaintyPair(NamedTuple):
    projector: Projector
    state: DensityOperator
    certain: bool


def random_certainty_pair(seed: SeedLike, dim: int) -> CertaintyPair:
    """Half the draws contain the range of a rank-deficient state, half are generic projectors"""
    if dim < 2:
        raise InputError("certainty pairs need dim >= 2")
    rng = _generator(seed)
    rank = int(rng.integers(1, dim))
    state = random_density(dim, rank, rng)
    if rng.random() < 0.5:
        Q = range_projector(state)
        extra = int(rng.integers(0, dim - rank + 1))
        complement = sla.null_space(Q.matrix)
        mixer = random_unitary(complement.shape[1], rng)
        vectors = np.hstack([sla.orth(Q.matrix), (complement @ mixer)[:, :extra]])
        return CertaintyPair(Projector.from_vectors(vectors, dim), state, True)
    P = random_projector(dim, int(rng.integers(1, dim)), rng)
    return CertaintyPair(P, state, False)


def random_nonsingular_pair(seed: SeedLike, dim: int) -> Tuple[Projector, DensityOperator]:
    """Full-rank state and a nonzero projector; the event always has positive probability"""
    rng = _generator(seed)
    state = random_density(dim, dim, rng)
    return random_projector(dim, int(rng.integers(1, dim + 1)), rng), state


# ============================================================================
# CATEGORY 3: WEAK / STRONG AND REFINEMENT INSTANCES
# ============================================================================

def intermediary_instance(seed: SeedLike, weak_dim: int = 2, strong_dim: int = 2) -> ObservableInstance:
    """
    Block-diagonal state p_w rho_w (+) (1 - p_w) rho_s with an observable whose branches
    on the first block are a random basis (weak) and on the second block the eigenbasis
    of rho_s (strong), so 0 < p_w < 1.
    """
    if weak_dim < 2 or strong_dim < 1:
        raise InputError("an intermediary instance needs weak_dim >= 2 and strong_dim >= 1")
    rng = _generator(seed)
    p_w = float(rng.uniform(0.2, 0.8))
    rho_w = random_density(weak_dim, weak_dim, rng).matrix
    rho_s = random_density(strong_dim, strong_dim, rng).matrix
    dim = weak_dim + strong_dim
    state = DensityOperator(frozen_matrix(sla.block_diag(p_w * rho_w, (1.0 - p_w) * rho_s)))

    V = random_unitary(weak_dim, rng)
    _, W = sla.eigh(rho_s)
    basis = sla.block_diag(V, W)
    return ObservableInstance(
        SpectralForm(tuple(SpectralBranch(float(k + 1), Projector.from_vectors(basis[:, [k]], dim))
                           for k in range(dim))),
        state,
    )


def _grouped_form(basis: np.ndarray, groups: Sequence[Sequence[int]]) -> SpectralForm:
    dim = basis.shape[0]
    return SpectralForm(tuple(SpectralBranch(float(k + 1), Projector.from_vectors(basis[:, list(g)], dim))
                              for k, g in enumerate(groups)))


def _coarsen(groups: List[List[int]], rng: np.random.Generator) -> List[List[int]]:
    """Merge one random pair of neighbouring groups"""
    k = int(rng.integers(0, len(groups) - 1))
    return groups[:k] + [groups[k] + groups[k + 1]] + groups[k + 2:]


class RefinementChain(NamedTuple):
    state: DensityOperator
    observables: Tuple[SpectralForm, ...]


def refinement_chain(seed: SeedLike, dim: int, depth: int = 3) -> RefinementChain:
    """Observables from finest to coarsest, each coarsening one merge of the previous"""
    if dim < 2:
        raise InputError("refinement chains need dim >= 2")
    rng = _generator(seed)
    state = random_density(dim, int(rng.integers(1, dim + 1)), rng)
    basis = random_unitary(dim, rng)
    groups = [[k] for k in range(dim)]
    observables = [_grouped_form(basis, groups)]
    for _ in range(min(depth, dim) - 1):
        groups = _coarsen(groups, rng)
        observables.append(_grouped_form(basis, groups))
    return RefinementChain(state, tuple(observables))


def compatible_refinement_instance() -> RefinementChain:
    """Fine diagonal observable and its {0,1},{2} coarsening; both Lüders states coincide"""
    state = DensityOperator.from_matrix([[0.4, 0.0, 0.2], [0.0, 0.3, 0.0], [0.2, 0.0, 0.3]])
    basis = np.eye(3)
    return RefinementChain(state, (_grouped_form(basis, [[0], [1], [2]]), _grouped_form(basis, [[0, 1], [2]])))


def coherent_refinement_instance() -> RefinementChain:
    """Same observables with the coherence inside the coarse {0,1} block"""
    state = DensityOperator.from_matrix([[0.4, 0.2, 0.0], [0.2, 0.3, 0.0], [0.0, 0.0, 0.3]])
    basis = np.eye(3)
    return RefinementChain(state, (_grouped_form(basis, [[0], [1], [2]]), _grouped_form(basis, [[0, 1], [2]])))


# ============================================================================
# CATEGORY 4: TWIN OBSERVABLE FAMILIES
# ============================================================================

class TwinInstance(NamedTuple):
    state: DensityOperator
    A1: SpectralForm
    A2: SpectralForm
    components: Tuple[np.ndarray, ...] = ()


def bell_state() -> np.ndarray:
    return np.array([1.0, 0.0, 0.0, 1.0], dtype=complex) / np.sqrt(2.0)


def bell_instance() -> TwinInstance:
    phi = bell_state()
    A1, A2 = construct_pto_pure(phi, (2, 2))
    return TwinInstance(DensityOperator.from_vector(phi, (2, 2)), A1, A2, (phi,))


def pure_twin_instance(seed: SeedLike, d1: int, d2: int, schmidt_rank: Optional[int] = None) -> TwinInstance:
    phi = random_pure_bipartite(d1, d2, seed, schmidt_rank)
    A1, A2 = construct_pto_pure(phi, (d1, d2))
    return TwinInstance(DensityOperator.from_vector(phi, (d1, d2)), A1, A2, (phi,))


def padded_twin_instance(seed: SeedLike, d1: int, d2: int, pad: Tuple[int, int] = (1, 1)) -> TwinInstance:
    """Pure state on d1 x d2 embedded into larger local spaces, twins built on the padded space"""
    rng = _generator(seed)
    phi = random_pure_bipartite(d1, d2, rng)
    D1, D2 = d1 + pad[0], d2 + pad[1]
    C = np.zeros((D1, D2), dtype=complex)
    C[:d1, :d2] = phi.reshape(d1, d2)
    padded = C.reshape(D1 * D2)
    A1, A2 = construct_pto_pure(padded, (D1, D2))
    return TwinInstance(DensityOperator.from_vector(padded, (D1, D2)), A1, A2, (padded,))


def _rotate_form(A: SpectralForm, U: np.ndarray) -> SpectralForm:
    return SpectralForm(tuple(
        SpectralBranch(b.eigenvalue, Projector(frozen_matrix(U @ b.projector.matrix @ U.conj().T), b.projector.rank))
        for b in A.branches))


def random_spectra(seed: SeedLike, levels: int, count: int) -> Tuple[np.ndarray, np.ndarray]:
    """`count` strictly positive, pairwise distinct spectra of length `levels` and mixing weights"""
    rng = _generator(seed)
    spectra = rng.dirichlet(np.ones(levels), size=count) * 0.9 + 0.1 / levels
    weights = rng.dirichlet(np.ones(count))
    return spectra, weights


def schmidt_ensemble_instance(seed: SeedLike, levels: int, count: int,
                              dims: Optional[Sequence[int]] = None, rotate: bool = False) -> TwinInstance:
    """
    Mixture of states sharing Schmidt bases with its twins; with rotate, local
    unitaries move the bases away from the computational ones.
    """
    rng = _generator(seed)
    spectra, weights = random_spectra(rng, levels, count)
    state, A1, A2 = construct_schmidt_ensemble(spectra, weights, dims)
    vectors = schmidt_ensemble_vectors(spectra, dims)
    if rotate:
        d1, d2 = state.require_dims()
        U1, U2 = random_unitary(d1, rng), random_unitary(d2, rng)
        U = np.kron(U1, U2)
        rotated = U @ state.matrix @ U.conj().T
        state = DensityOperator(frozen_matrix((rotated + rotated.conj().T) / 2), (d1, d2))
        A1, A2 = _rotate_form(A1, U1), _rotate_form(A2, U2)
        vectors = [U @ v for v in vectors]
    return TwinInstance(state, A1, A2, tuple(vectors))


# ============================================================================
# CATEGORY 5: BIORTHOGONAL MIXTURES
# ============================================================================

class BiorthogonalMixture(NamedTuple):
    components: Tuple[Tuple[float, DensityOperator], ...]
    P1_set: Tuple[Projector, ...]
    Q2_set: Tuple[Projector, ...]


def biorthogonal_mixture(seed: SeedLike, d1: int, d2: int, count: int) -> BiorthogonalMixture:
    """Random components confined to orthogonal sectors P1^k (x) Q2^k, then locally rotated"""
    if not 1 <= count <= min(d1, d2):
        raise InputError(f"{count} sectors do not fit into {d1}x{d2}")
    rng = _generator(seed)
    blocks1 = _random_blocks(d1, count, rng)
    blocks2 = _random_blocks(d2, count, rng)
    weights = rng.dirichlet(np.ones(count))
    U1, U2 = random_unitary(d1, rng), random_unitary(d2, rng)
    U = np.kron(U1, U2)

    components, P1_set, Q2_set = [], [], []
    for w, b1, b2 in zip(weights, blocks1, blocks2):
        columns = [i1 * d2 + i2 for i1 in b1 for i2 in b2]
        B = np.eye(d1 * d2)[:, columns]
        local = random_density(len(columns), int(rng.integers(1, len(columns) + 1)), rng).matrix
        full = U @ B @ local @ B.T @ U.conj().T
        components.append((float(w), DensityOperator(frozen_matrix((full + full.conj().T) / 2), (d1, d2))))
        P1_set.append(Projector.from_vectors(U1[:, b1], d1))
        Q2_set.append(Projector.from_vectors(U2[:, b2], d2))
    return BiorthogonalMixture(tuple(components), tuple(P1_set), tuple(Q2_set))


def write_fixtures(directory: Union[str, Path] = "fixtures") -> List[Path]:
    """Write the Bell and Schmidt-ensemble instances as JSON state files"""
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    bell = bell_instance()
    ensemble = schmidt_ensemble_instance(20240601, 2, 2)
    mixed_state, mixed_A1, mixed_A2 = construct_schmidt_ensemble([[0.8, 0.2], [0.6, 0.4]], [0.5, 0.5])
    files = [
        (StateFile.from_vector(bell_state(), (2, 2), {"name": "bell"}), "bell_pure.json"),
        (StateFile.from_density(bell.state, {"name": "bell"}), "bell_density.json"),
        (StateFile.from_observable(bell.A1, meta={"side": 1}), "bell_A1.json"),
        (StateFile.from_observable(bell.A2, meta={"side": 2}), "bell_A2.json"),
        (StateFile.from_density(mixed_state, {"name": "schmidt_ensemble_08_06"}), "ensemble_density.json"),
        (StateFile.from_observable(mixed_A1, meta={"side": 1}), "ensemble_A1.json"),
        (StateFile.from_observable(mixed_A2, meta={"side": 2}), "ensemble_A2.json"),
        (StateFile.from_density(ensemble.state, {"seed": 20240601}), "random_ensemble_density.json"),
    ]
    written = [save_state_file(state_file, out / name) for state_file, name in files]
    refinement = compatible_refinement_instance()
    written.append(save_state_file(StateFile.from_density(refinement.state), out / "refinement_state.json"))
    written.append(save_state_file(StateFile.from_observable(refinement.observables[0]), out / "refinement_fine.json"))
    written.append(save_state_file(StateFile.from_observable(refinement.observables[1]), out / "refinement_coarse.json"))
    return written


if __name__ == "__main__":
    print("Writing fixture files...")
    for path in write_fixtures():
        print(f"✓ {path}")
