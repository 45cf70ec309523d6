"""
Operator Core Module
Dense complex linear algebra for finite-dimensional quantum states and observables:
- Hermitian validation and spectral decomposition with eigenvalue clustering
- Tensor products, subsystem embedding and partial traces
- Range projectors and commutator norms
- Certainty-event checks (probability one, P rho = rho, PQ = Q)
"""

from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.linalg as sla

from config import DEFAULT_TOLERANCES, Tolerances


# ---------------------------------------------------------------------------
# Errors
# ---------------------------------------------------------------------------

class TwinObsError(Exception):
    """Base class for every error raised by the library"""


class DimensionError(TwinObsError, ValueError):
    """Non-square input or mismatched operator dimensions"""


class InputError(TwinObsError, ValueError):
    """Malformed user data (overlapping projectors, bad normalisation, ...)"""


class DomainError(InputError):
    """Value outside the mathematical domain (e.g. negative probability)"""


class ConfigurationError(TwinObsError):
    """Required metadata missing, e.g. bipartite dimensions"""


class PreconditionError(TwinObsError):
    """A documented precondition of an operation does not hold"""

    def __init__(self, message: str, deficit: Optional[float] = None,
                 residual: Optional[float] = None):
        super().__init__(message)
        self.deficit = deficit
        self.residual = residual


class NumericalError(TwinObsError):
    """Eigensolver failure or a reconstruction residual beyond tolerance"""

    def __init__(self, message: str, residual: Optional[float] = None):
        super().__init__(message)
        self.residual = residual


# ---------------------------------------------------------------------------
# Matrix helpers
# ---------------------------------------------------------------------------

def frozen_matrix(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=complex, copy=True)
    arr.setflags(write=False)
    return arr


def as_matrix(M) -> np.ndarray:
    """Coerce an operator-like value to a finite square complex array"""
    arr = np.asarray(getattr(M, "matrix", M), dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {arr.shape}")
    if arr.shape[0] == 0:
        raise DimensionError("empty matrix")
    if not np.all(np.isfinite(arr)):
        raise InputError("matrix contains NaN or Inf entries")
    return arr


def spectral_norm(M) -> float:
    return float(np.linalg.norm(np.asarray(getattr(M, "matrix", M)), 2))


def frobenius_norm(M) -> float:
    return float(np.linalg.norm(np.asarray(getattr(M, "matrix", M)), "fro"))


def _same_dim(*matrices: np.ndarray) -> int:
    dims = {m.shape[0] for m in matrices}
    if len(dims) != 1:
        raise DimensionError(f"dimension mismatch: {sorted(dims)}")
    return dims.pop()


def _check_dims(dims: Optional[Sequence[int]], dim: int) -> Optional[Tuple[int, int]]:
    if dims is None:
        return None
    if len(dims) != 2:
        raise DimensionError(f"bipartite dims must be a pair, got {dims}")
    d1, d2 = int(dims[0]), int(dims[1])
    if d1 < 1 or d2 < 1 or d1 * d2 != dim:
        raise DimensionError(f"bipartite dims {d1}x{d2} do not match dimension {dim}")
    return (d1, d2)


def subsystem_index(label) -> int:
    """Normalise a subsystem label (1, 2, '1', '2') to an int"""
    try:
        side = int(label)
    except (TypeError, ValueError):
        raise InputError(f"unknown subsystem label {label!r}")
    if side not in (1, 2):
        raise InputError(f"unknown subsystem label {label!r}")
    return side


def hermitian_check(M, tol: Optional[float] = None) -> bool:
    """True iff the largest entrywise |M - M^dagger| is within tol"""
    tol = DEFAULT_TOLERANCES.hermitian_tol if tol is None else tol
    arr = as_matrix(M)
    return bool(np.max(np.abs(arr - arr.conj().T)) <= tol)


# ---------------------------------------------------------------------------
# Domain types
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class HermitianOperator:
    """Dense Hermitian matrix (observable or state component)"""

    matrix: np.ndarray

    @classmethod
    def from_matrix(cls, M, tol: Optional[float] = None) -> "HermitianOperator":
        arr = as_matrix(M)
        if not hermitian_check(arr, tol):
            raise InputError("matrix is not Hermitian within tolerance")
        return cls(frozen_matrix((arr + arr.conj().T) / 2))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def norm(self) -> float:
        return spectral_norm(self.matrix)


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """Unit-trace positive semidefinite Hermitian matrix with optional bipartite dims"""

    matrix: np.ndarray
    bipartite_dims: Optional[Tuple[int, int]] = None

    @classmethod
    def from_matrix(cls, M, bipartite_dims: Optional[Sequence[int]] = None,
                    tolerances: Tolerances = DEFAULT_TOLERANCES) -> "DensityOperator":
        arr = as_matrix(M)
        if not hermitian_check(arr, tolerances.hermitian_tol):
            raise InputError("density matrix is not Hermitian")
        arr = (arr + arr.conj().T) / 2
        trace = float(np.trace(arr).real)
        if abs(trace - 1.0) > tolerances.trace_tol:
            raise InputError(f"density matrix trace is {trace!r}, expected 1")
        lowest = float(sla.eigvalsh(arr)[0])
        if lowest < -tolerances.rank_tol:
            raise InputError(f"density matrix has negative eigenvalue {lowest:.3e}")
        return cls(frozen_matrix(arr), _check_dims(bipartite_dims, arr.shape[0]))

    @classmethod
    def from_vector(cls, psi, bipartite_dims: Optional[Sequence[int]] = None,
                    tolerances: Tolerances = DEFAULT_TOLERANCES) -> "DensityOperator":
        vec = np.asarray(psi, dtype=complex).ravel()
        if vec.size == 0 or not np.all(np.isfinite(vec)):
            raise InputError("state vector is empty or not finite")
        norm = float(np.linalg.norm(vec))
        if abs(norm - 1.0) > tolerances.trace_tol:
            raise InputError(f"state vector norm is {norm!r}, expected 1")
        vec = vec / norm
        return cls(frozen_matrix(np.outer(vec, vec.conj())), _check_dims(bipartite_dims, vec.size))

    @classmethod
    def maximally_mixed(cls, dim: int, bipartite_dims: Optional[Sequence[int]] = None) -> "DensityOperator":
        return cls(frozen_matrix(np.eye(dim) / dim), _check_dims(bipartite_dims, dim))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def norm(self) -> float:
        return spectral_norm(self.matrix)

    def eigenvalues(self) -> np.ndarray:
        return sla.eigvalsh(self.matrix)

    def with_dims(self, dims: Sequence[int]) -> "DensityOperator":
        return DensityOperator(self.matrix, _check_dims(dims, self.dim))

    def require_dims(self) -> Tuple[int, int]:
        if self.bipartite_dims is None:
            raise ConfigurationError("state carries no bipartite dimension metadata")
        return self.bipartite_dims


@dataclass(frozen=True, eq=False)
class Projector:
    """Orthogonal projector with its rank"""

    matrix: np.ndarray
    rank: int

    @classmethod
    def from_matrix(cls, M, tol: float = 1e-8) -> "Projector":
        arr = as_matrix(M)
        if not hermitian_check(arr, tol):
            raise InputError("projector is not Hermitian")
        arr = (arr + arr.conj().T) / 2
        if spectral_norm(arr @ arr - arr) > tol:
            raise InputError("projector is not idempotent")
        return cls(frozen_matrix(arr), int(round(float(np.trace(arr).real))))

    @classmethod
    def from_vectors(cls, vectors, dim: Optional[int] = None) -> "Projector":
        """Projector onto the span of the given vectors (columns or a list)"""
        if isinstance(vectors, np.ndarray) and vectors.ndim == 2:
            V = vectors.astype(complex)
        else:
            vectors = list(vectors)
            if not vectors:
                if dim is None:
                    raise InputError("dimension required for an empty vector list")
                return cls.zero(dim)
            V = np.column_stack([np.asarray(v, dtype=complex).ravel() for v in vectors])
        if V.shape[1] == 0:
            return cls.zero(V.shape[0])
        basis = sla.orth(V)
        return cls(frozen_matrix(basis @ basis.conj().T), basis.shape[1])

    @classmethod
    def identity(cls, dim: int) -> "Projector":
        return cls(frozen_matrix(np.eye(dim)), dim)

    @classmethod
    def zero(cls, dim: int) -> "Projector":
        return cls(frozen_matrix(np.zeros((dim, dim))), 0)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def complement(self) -> "Projector":
        return Projector(frozen_matrix(np.eye(self.dim) - self.matrix), self.dim - self.rank)

    def embed(self, side, dims: Sequence[int]) -> "Projector":
        d1, d2 = dims
        other = d2 if subsystem_index(side) == 1 else d1
        return Projector(frozen_matrix(embed_operator(self.matrix, side, dims)), self.rank * other)


def projector_sum(projectors: Iterable[Projector], dim: int) -> Projector:
    total = np.zeros((dim, dim), dtype=complex)
    rank = 0
    for P in projectors:
        total = total + P.matrix
        rank += P.rank
    return Projector(frozen_matrix(total), rank)


def orthogonality_residual(projectors: Sequence[Projector]) -> float:
    """Largest ||P_i P_j|| over distinct pairs"""
    worst = 0.0
    for i in range(len(projectors)):
        for j in range(i + 1, len(projectors)):
            worst = max(worst, spectral_norm(projectors[i].matrix @ projectors[j].matrix))
    return worst


@dataclass(frozen=True)
class SpectralBranch:
    eigenvalue: float
    projector: Projector


@dataclass(frozen=True)
class SpectralForm:
    """Distinct eigenvalues with orthogonal eigenprojectors, plus an optional remainder block"""

    branches: Tuple[SpectralBranch, ...]
    remainder: Optional[HermitianOperator] = None

    def __post_init__(self):
        if not self.branches and self.remainder is None:
            raise InputError("spectral form needs at least one branch or a remainder")

    @classmethod
    def from_branches(cls, pairs: Iterable[Tuple[float, Union[Projector, np.ndarray]]],
                      remainder=None, tol: float = 1e-8) -> "SpectralForm":
        """Validated construction from (eigenvalue, projector) pairs"""
        branches = []
        for value, P in pairs:
            if not isinstance(P, Projector):
                P = Projector.from_matrix(P, tol)
            branches.append(SpectralBranch(float(value), P))
        if branches:
            _same_dim(*[b.projector.matrix for b in branches])
        values = [b.eigenvalue for b in branches]
        for i in range(len(values)):
            for j in range(i + 1, len(values)):
                if abs(values[i] - values[j]) <= tol * max(1.0, abs(values[i]), abs(values[j])):
                    raise InputError(f"eigenvalues {values[i]} and {values[j]} are not distinct")
        overlap = orthogonality_residual([b.projector for b in branches])
        if overlap > tol:
            raise InputError(f"branch projectors overlap (||P_i P_j|| = {overlap:.3e})")
        rem = None
        if remainder is not None:
            rem = remainder if isinstance(remainder, HermitianOperator) else HermitianOperator.from_matrix(remainder)
            for b in branches:
                if spectral_norm(b.projector.matrix @ rem.matrix) > tol:
                    raise InputError("remainder is not supported on the complement of the branches")
        return cls(tuple(branches), rem)

    @classmethod
    def from_eigenpairs(cls, values: Sequence[float], vectors, complement_value: Optional[float] = 0.0,
                        dim: Optional[int] = None) -> "SpectralForm":
        """Observable sum_i values[i] |v_i><v_i| with `complement_value` on the orthocomplement"""
        if isinstance(vectors, np.ndarray) and vectors.ndim == 2:
            columns = [vectors[:, k] for k in range(vectors.shape[1])]
        else:
            columns = [np.asarray(v, dtype=complex).ravel() for v in vectors]
        if len(columns) != len(values):
            raise InputError("one eigenvalue per vector is required")
        if dim is None:
            if not columns:
                raise InputError("dimension required for an empty vector list")
            dim = columns[0].size
        grouped = {}
        for value, vec in zip(values, columns):
            grouped.setdefault(float(value), []).append(vec)
        branches = [SpectralBranch(value, Projector.from_vectors(vecs, dim))
                    for value, vecs in grouped.items()]
        covered = projector_sum([b.projector for b in branches], dim)
        if covered.rank < dim:
            if complement_value is None:
                rest = HermitianOperator(frozen_matrix(np.zeros((dim, dim))))
                return cls(tuple(branches), rest)
            if float(complement_value) in grouped:
                raise InputError("complement eigenvalue collides with a labelled eigenvalue")
            branches.append(SpectralBranch(float(complement_value), covered.complement()))
        return cls(tuple(branches))

    @property
    def dim(self) -> int:
        if self.branches:
            return self.branches[0].projector.dim
        return self.remainder.dim

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.array([b.eigenvalue for b in self.branches], dtype=float)

    @property
    def projectors(self) -> List[Projector]:
        return [b.projector for b in self.branches]

    def covered_projector(self) -> Projector:
        return projector_sum(self.projectors, self.dim)

    def to_matrix(self) -> np.ndarray:
        total = np.zeros((self.dim, self.dim), dtype=complex)
        for b in self.branches:
            total = total + b.eigenvalue * b.projector.matrix
        if self.remainder is not None:
            total = total + self.remainder.matrix
        return total

    def operator(self) -> HermitianOperator:
        return HermitianOperator(frozen_matrix(self.to_matrix()))

    def restrict(self, indices: Iterable[int]) -> "SpectralForm":
        """Spectral form made of the selected branches only"""
        chosen = tuple(self.branches[i] for i in indices)
        if not chosen:
            return SpectralForm((), HermitianOperator(frozen_matrix(np.zeros((self.dim, self.dim)))))
        return SpectralForm(chosen)

    def embed(self, side, dims: Sequence[int]) -> "SpectralForm":
        """A (x) 1 for side 1, 1 (x) A for side 2"""
        d1, d2 = dims
        expected = d1 if subsystem_index(side) == 1 else d2
        if self.dim != expected:
            raise DimensionError(f"observable of dim {self.dim} cannot act on side {side} of {d1}x{d2}")
        branches = tuple(SpectralBranch(b.eigenvalue, b.projector.embed(side, dims)) for b in self.branches)
        rem = None
        if self.remainder is not None:
            rem = HermitianOperator(frozen_matrix(embed_operator(self.remainder.matrix, side, dims)))
        return SpectralForm(branches, rem)

    def is_resolution_of_identity(self, tol: float = 1e-10) -> bool:
        total = self.covered_projector().matrix
        if self.remainder is not None:
            total = total + range_projector_matrix(self.remainder.matrix, tol)
        return spectral_norm(total - np.eye(self.dim)) <= max(tol, 1e-10)


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------

def spectral_decompose(H, cluster_tol: Optional[float] = None,
                       tolerances: Tolerances = DEFAULT_TOLERANCES) -> SpectralForm:
    """
    Spectral form with distinct eigenvalues.
    Sorted eigenvalues closer than cluster_tol (single link) share one branch;
    the branch eigenvalue is the cluster mean.
    """
    arr = as_matrix(H)
    if not hermitian_check(arr, tolerances.hermitian_tol):
        raise InputError("cannot decompose a non-Hermitian matrix")
    herm = (arr + arr.conj().T) / 2
    scale = spectral_norm(herm)
    gap = tolerances.cluster_tol(scale) if cluster_tol is None else cluster_tol

    try:
        values, vectors = sla.eigh(herm)
    except (sla.LinAlgError, ValueError) as exc:
        raise NumericalError(f"eigensolver failed: {exc}")

    groups = np.split(np.arange(values.size), np.flatnonzero(np.diff(values) > gap) + 1)
    branches = []
    spread = 0.0
    for group in groups:
        V = vectors[:, group]
        spread = max(spread, float(values[group[-1]] - values[group[0]]))
        branches.append(SpectralBranch(float(values[group].mean()),
                                       Projector(frozen_matrix(V @ V.conj().T), len(group))))
    form = SpectralForm(tuple(branches))

    residual = spectral_norm(form.to_matrix() - herm)
    allowed = tolerances.reconstruction_tol * max(1.0, scale) + spread
    if residual > allowed:
        raise NumericalError(f"spectral reconstruction residual {residual:.3e} exceeds {allowed:.3e}",
                             residual=residual)
    return form


def tensor_product(A, B) -> np.ndarray:
    """Kronecker product; composite index i = i1*d2 + i2"""
    return np.kron(as_matrix(A), as_matrix(B))


def embed_operator(M, side, dims: Sequence[int]) -> np.ndarray:
    d1, d2 = int(dims[0]), int(dims[1])
    arr = as_matrix(M)
    if subsystem_index(side) == 1:
        if arr.shape[0] != d1:
            raise DimensionError(f"side-1 operator must be {d1}x{d1}")
        return np.kron(arr, np.eye(d2))
    if arr.shape[0] != d2:
        raise DimensionError(f"side-2 operator must be {d2}x{d2}")
    return np.kron(np.eye(d1), arr)


def partial_trace_matrix(M, dims: Sequence[int], keep) -> np.ndarray:
    d1, d2 = int(dims[0]), int(dims[1])
    arr = as_matrix(M)
    if arr.shape[0] != d1 * d2:
        raise DimensionError(f"matrix of dim {arr.shape[0]} is not {d1}x{d2}")
    t = arr.reshape(d1, d2, d1, d2)
    if subsystem_index(keep) == 1:
        return np.einsum("ijkj->ik", t)
    return np.einsum("ijil->jl", t)


def partial_trace(rho12: DensityOperator, keep) -> DensityOperator:
    """Reduced state of subsystem `keep` (the other factor is traced out)"""
    dims = rho12.require_dims()
    reduced = partial_trace_matrix(rho12.matrix, dims, keep)
    return DensityOperator(frozen_matrix((reduced + reduced.conj().T) / 2))


def range_projector_matrix(M, rank_tol: float) -> np.ndarray:
    values, vectors = sla.eigh(as_matrix(M))
    V = vectors[:, np.abs(values) > rank_tol]
    return V @ V.conj().T


def range_projector(rho: DensityOperator, rank_tol: Optional[float] = None) -> Projector:
    """Sum of the eigenprojectors of rho for eigenvalues above rank_tol"""
    rank_tol = DEFAULT_TOLERANCES.rank_tol if rank_tol is None else rank_tol
    values, vectors = sla.eigh(as_matrix(rho))
    V = vectors[:, values > rank_tol]
    return Projector(frozen_matrix(V @ V.conj().T), V.shape[1])


def commutator(A, B) -> np.ndarray:
    a, b = as_matrix(A), as_matrix(B)
    _same_dim(a, b)
    return a @ b - b @ a


def commutator_norm(A, B) -> float:
    """Spectral norm of AB - BA"""
    return spectral_norm(commutator(A, B))


def branch_probabilities(A: SpectralForm, rho) -> np.ndarray:
    """Tr(P_l rho) for every branch, tiny negative round-off clipped to zero"""
    r = as_matrix(rho)
    if r.shape[0] != A.dim:
        raise DimensionError(f"observable dim {A.dim} does not match state dim {r.shape[0]}")
    probs = np.array([float(np.real(np.trace(P.matrix @ r))) for P in A.projectors], dtype=float)
    return np.clip(probs, 0.0, None)


@dataclass(frozen=True)
class CertaintyReport:
    """Three equivalent expressions of 'event P is certain in rho'"""

    probability: float
    algebraic_residual: float
    range_residual: float
    certain: bool
    tolerance: float
    algebraic_residual_fro: float = 0.0
    range_residual_fro: float = 0.0

    @property
    def deficit(self) -> float:
        return 1.0 - self.probability

    @property
    def probability_criterion(self) -> bool:
        return self.probability >= 1.0 - self.tolerance

    @property
    def algebraic_criterion(self) -> bool:
        # ||P_perp rho||^2 <= Tr(P_perp rho), hence the square root
        return self.algebraic_residual <= np.sqrt(self.tolerance)

    @property
    def range_criterion(self) -> bool:
        return self.range_residual <= np.sqrt(self.tolerance)

    @property
    def consistent(self) -> bool:
        return self.probability_criterion == self.algebraic_criterion == self.range_criterion


def is_certain_event(P, rho, tol: Optional[float] = None,
                     rank_tol: Optional[float] = None) -> CertaintyReport:
    """Report Tr(P rho), ||P rho - rho|| and ||PQ - Q|| (Q the range projector of rho)"""
    tol = DEFAULT_TOLERANCES.certainty_tol if tol is None else tol
    p = as_matrix(P)
    r = as_matrix(rho)
    _same_dim(p, r)
    Q = range_projector(r, rank_tol).matrix
    probability = float(np.real(np.trace(p @ r)))
    algebraic = p @ r - r
    ranged = p @ Q - Q
    return CertaintyReport(
        probability=probability,
        algebraic_residual=spectral_norm(algebraic),
        range_residual=spectral_norm(ranged),
        certain=probability >= 1.0 - tol,
        tolerance=tol,
        algebraic_residual_fro=frobenius_norm(algebraic),
        range_residual_fro=frobenius_norm(ranged),
    )


def expectation(rho, B) -> float:
    return float(np.real(np.trace(as_matrix(rho) @ as_matrix(B))))


def detectable_indices(A: SpectralForm, rho, detect_tol: Optional[float] = None,
                       certainty_tol: Optional[float] = None,
                       require_discrete: bool = True) -> Tuple[List[int], np.ndarray]:
    """
    Indices of branches with Tr(P_l rho) > detect_tol, plus all branch probabilities.
    With require_discrete, the detectable branches must carry total probability one.
    """
    detect_tol = DEFAULT_TOLERANCES.detect_tol if detect_tol is None else detect_tol
    certainty_tol = DEFAULT_TOLERANCES.certainty_tol if certainty_tol is None else certainty_tol
    probs = branch_probabilities(A, rho)
    indices = [l for l, p in enumerate(probs) if p > detect_tol]
    if require_discrete:
        total = float(probs[indices].sum()) if indices else 0.0
        if total < 1.0 - certainty_tol:
            raise PreconditionError(
                f"observable is not discrete in relation to the state "
                f"(detectable probability {total:.12f})",
                deficit=1.0 - total,
            )
    return indices, probs
