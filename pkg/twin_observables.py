"""
Twin Observables Module
Bipartite analysis of correlated subsystem observables:
- Schmidt decomposition of pure bipartite states
- Physical / algebraic twin verification with an exact branch matching
- Twin construction for pure states and for Schmidt ensembles
- Correlations incompatibility and biorthogonal mixing of mutual information
- Joint-measurement statistics and the discord decomposition ledger
"""

from dataclasses import dataclass
from typing import Any, Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
import scipy.linalg as sla
from scipy.optimize import linear_sum_assignment

from config import DEFAULT_TOLERANCES, Tolerances
from entropy_analysis import (
    ProbabilityVector,
    _matrix_entropy,
    _mutual_information_matrix,
    _shannon,
    luders_matrix,
)
from observable_relation import SidePair, completeness_report
from operator_core import (
    DensityOperator,
    DimensionError,
    InputError,
    NumericalError,
    PreconditionError,
    Projector,
    SpectralForm,
    TwinObsError,
    as_matrix,
    commutator_norm,
    detectable_indices,
    embed_operator,
    frozen_matrix,
    orthogonality_residual,
    partial_trace,
    spectral_norm,
    subsystem_index,
)


# ---------------------------------------------------------------------------
# Schmidt form
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SchmidtForm:
    """phi = sum_i c_i |u_i> (x) |v_i> with c_1 >= c_2 >= ... > 0"""

    coefficients: np.ndarray
    left_basis: np.ndarray
    right_basis: np.ndarray
    dims: Tuple[int, int]

    @property
    def rank(self) -> int:
        return self.coefficients.size

    def reconstruct(self) -> np.ndarray:
        d1, d2 = self.dims
        C = (self.left_basis * self.coefficients) @ self.right_basis.T
        return C.reshape(d1 * d2)

    def check_invariants(self, phi, tol: float = 1e-9) -> List[str]:
        violations = []
        if abs(float(np.sum(self.coefficients ** 2)) - 1.0) > tol:
            violations.append("squared Schmidt coefficients do not sum to one")
        for name, basis in (("left", self.left_basis), ("right", self.right_basis)):
            gram = basis.conj().T @ basis
            if spectral_norm(gram - np.eye(self.rank)) > tol:
                violations.append(f"{name} Schmidt basis is not orthonormal")
        if np.linalg.norm(self.reconstruct() - np.asarray(phi, dtype=complex).ravel()) > tol:
            violations.append("Schmidt form does not reconstruct the state vector")
        return violations


def _unit_vector(phi, dims: Sequence[int], tol: float) -> np.ndarray:
    vec = np.asarray(phi, dtype=complex).ravel()
    d1, d2 = int(dims[0]), int(dims[1])
    if vec.size != d1 * d2:
        raise DimensionError(f"state vector of length {vec.size} does not match {d1}x{d2}")
    if not np.all(np.isfinite(vec)):
        raise InputError("state vector contains NaN or Inf entries")
    norm = float(np.linalg.norm(vec))
    if abs(norm - 1.0) > tol:
        raise InputError(f"state vector norm is {norm!r}, expected 1")
    return vec


def schmidt_decompose(phi, dims: Sequence[int], tol: float = 1e-10) -> SchmidtForm:
    """Singular value decomposition of the d1 x d2 coefficient matrix (row-major index i1*d2 + i2)"""
    d1, d2 = int(dims[0]), int(dims[1])
    vec = _unit_vector(phi, (d1, d2), DEFAULT_TOLERANCES.trace_tol)
    try:
        U, s, Vh = sla.svd(vec.reshape(d1, d2), full_matrices=False)
    except (sla.LinAlgError, ValueError) as exc:
        raise NumericalError(f"singular value decomposition failed: {exc}")
    keep = s > tol
    coefficients = np.array(s[keep], dtype=float)
    coefficients.setflags(write=False)
    return SchmidtForm(coefficients, frozen_matrix(U[:, keep]), frozen_matrix(Vh[keep, :].T), (d1, d2))


# ---------------------------------------------------------------------------
# Twin verification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TwinPair:
    """Matched detectable branches a_i of A1 and b_i of A2 with their common probability"""

    eigenvalue_1: float
    eigenvalue_2: float
    probability: float
    index_1: int
    index_2: int


@dataclass(frozen=True)
class PtoReport:
    bijection: Tuple[TwinPair, ...]
    algebraic_residuals: Tuple[float, ...]
    measurement_residuals: Tuple[float, ...]
    total_probability_1: float
    total_probability_2: float
    derived_compatibility: Tuple[float, float]
    algebraic_twin_residual: float
    is_pto: bool
    is_algebraic_twin: bool
    tolerance: float
    diagnostics: Tuple[str, ...] = ()

    @property
    def max_residual(self) -> float:
        return max(self.algebraic_residuals, default=0.0)

    def check_invariants(self) -> List[str]:
        violations = []
        if not self.is_pto:
            return violations
        for total in (self.total_probability_1, self.total_probability_2):
            if abs(total - 1.0) > self.tolerance:
                violations.append(f"twin detectable probability {total:.12f} differs from one")
        if self.max_residual > self.tolerance:
            violations.append(f"twin residual {self.max_residual:.3e} above tolerance")
        for side, norm in zip((1, 2), self.derived_compatibility):
            if norm > self.tolerance:
                violations.append(f"side {side} observable does not commute with its reduced state "
                                  f"(||[A, rho]|| = {norm:.3e})")
        return violations

    def to_dict(self) -> Dict[str, Any]:
        return {
            "is_pto": self.is_pto,
            "is_algebraic_twin": self.is_algebraic_twin,
            "bijection": [
                {"a": p.eigenvalue_1, "b": p.eigenvalue_2, "probability": p.probability}
                for p in self.bijection
            ],
            "algebraic_residuals": list(self.algebraic_residuals),
            "measurement_residuals": list(self.measurement_residuals),
            "total_probability_1": self.total_probability_1,
            "total_probability_2": self.total_probability_2,
            "derived_compatibility": list(self.derived_compatibility),
            "algebraic_twin_residual": self.algebraic_twin_residual,
            "tolerance": self.tolerance,
            "diagnostics": list(self.diagnostics),
        }


def _embedded_pair(A1: SpectralForm, A2: SpectralForm,
                   rho12: DensityOperator) -> Tuple[Tuple[int, int], SpectralForm, SpectralForm]:
    dims = rho12.require_dims()
    return dims, A1.embed(1, dims), A2.embed(2, dims)


def _match_branches(residuals: np.ndarray, tol: float) -> Tuple[List[Tuple[int, int]], List[str]]:
    """Minimal-residual assignment, rejected when a pair is above tol or not the unique match"""
    rows, cols = linear_sum_assignment(residuals)
    problems = []
    for a, b in zip(rows, cols):
        if residuals[a, b] > tol:
            problems.append(f"no partner within tolerance for side-1 branch {a} "
                            f"(best residual {residuals[a, b]:.3e})")
            continue
        others_row = np.delete(residuals[a, :], b)
        others_col = np.delete(residuals[:, b], a)
        if (others_row.size and others_row.min() <= tol) or (others_col.size and others_col.min() <= tol):
            problems.append(f"side-1 branch {a} has an ambiguous partner")
    return list(zip(rows.tolist(), cols.tolist())), problems


def verify_pto(A1: SpectralForm, A2: SpectralForm, rho12: DensityOperator, tol: Optional[float] = None,
               tolerances: Tolerances = DEFAULT_TOLERANCES) -> PtoReport:
    """
    Decide whether A1 (side 1) and A2 (side 2) are physical twins in rho12:
    a bijection of detectable branches with P1^i rho12 = P2^i rho12 and
    total detectable probability one on both sides. The reduced-state
    commutators are reported as a derived quantity, not imposed.
    """
    tol = tolerances.identity_tol if tol is None else tol
    dims, E1, E2 = _embedded_pair(A1, A2, rho12)
    r = as_matrix(rho12)
    diagnostics: List[str] = []

    idx1, probs1 = detectable_indices(E1, r, tolerances.detect_tol, require_discrete=False)
    idx2, probs2 = detectable_indices(E2, r, tolerances.detect_tol, require_discrete=False)
    total1 = float(probs1[idx1].sum()) if idx1 else 0.0
    total2 = float(probs2[idx2].sum()) if idx2 else 0.0
    discrete = True
    for side, total in ((1, total1), (2, total2)):
        if total < 1.0 - tolerances.certainty_tol:
            diagnostics.append(f"side {side} observable is not discrete in relation to the state "
                               f"(detectable probability {total:.12f})")
            discrete = False

    rho1 = partial_trace(rho12, 1)
    rho2 = partial_trace(rho12, 2)
    compatibility = (commutator_norm(A1.to_matrix(), rho1), commutator_norm(A2.to_matrix(), rho2))
    twin_residual = spectral_norm(E1.to_matrix() @ r - E2.to_matrix() @ r)

    pairs: List[TwinPair] = []
    algebraic: List[float] = []
    measurement: List[float] = []
    matched = False
    if len(idx1) != len(idx2):
        diagnostics.append(f"detectable branch counts differ ({len(idx1)} vs {len(idx2)})")
    elif idx1:
        left = [E1.projectors[i].matrix @ r for i in idx1]
        right = [E2.projectors[j].matrix @ r for j in idx2]
        residuals = np.array([[spectral_norm(L - R) for R in right] for L in left])
        assignment, problems = _match_branches(residuals, tol)
        diagnostics.extend(problems)
        matched = not problems
        for a, b in assignment:
            i, j = idx1[a], idx2[b]
            P, Q = E1.projectors[i].matrix, E2.projectors[j].matrix
            pairs.append(TwinPair(E1.branches[i].eigenvalue, E2.branches[j].eigenvalue,
                                  float(probs1[i]), i, j))
            algebraic.append(float(residuals[a, b]))
            measurement.append(spectral_norm(P @ r @ P - Q @ r @ Q))

    is_pto = discrete and matched
    return PtoReport(
        bijection=tuple(pairs),
        algebraic_residuals=tuple(algebraic),
        measurement_residuals=tuple(measurement),
        total_probability_1=total1,
        total_probability_2=total2,
        derived_compatibility=compatibility,
        algebraic_twin_residual=twin_residual,
        is_pto=is_pto,
        is_algebraic_twin=is_pto and twin_residual <= tol,
        tolerance=tol,
        diagnostics=tuple(diagnostics),
    )


def _component_state(component, dims: Tuple[int, int]) -> DensityOperator:
    if isinstance(component, DensityOperator):
        return component if component.bipartite_dims is not None else component.with_dims(dims)
    return DensityOperator.from_vector(component, dims)


def verify_pto_components(A1: SpectralForm, A2: SpectralForm, components: Sequence[Any],
                          dims: Sequence[int], tol: Optional[float] = None,
                          tolerances: Tolerances = DEFAULT_TOLERANCES) -> List[PtoReport]:
    """Twin check of one observable pair against every pure component of a decomposition"""
    dims = (int(dims[0]), int(dims[1]))
    return [verify_pto(A1, A2, _component_state(c, dims), tol, tolerances) for c in components]


def subsystem_discreteness_agrees(A: SpectralForm, rho12: DensityOperator, side,
                                  tolerances: Tolerances = DEFAULT_TOLERANCES) -> bool:
    """Discreteness of A (x) 1 in rho12 coincides with discreteness of A in the reduced state"""
    side = subsystem_index(side)
    dims = rho12.require_dims()
    reduced = partial_trace(rho12, side)

    def discrete(form: SpectralForm, state) -> bool:
        indices, probs = detectable_indices(form, state, tolerances.detect_tol, require_discrete=False)
        return float(probs[indices].sum()) >= 1.0 - tolerances.certainty_tol if indices else False

    return discrete(A.embed(side, dims), rho12) == discrete(A, reduced)


# ---------------------------------------------------------------------------
# Constructions
# ---------------------------------------------------------------------------

def _distinct_labels(labels: Optional[Sequence[float]], count: int) -> List[float]:
    if labels is None:
        return [float(i + 1) for i in range(count)]
    labels = [float(a) for a in labels]
    if len(labels) < count:
        raise InputError(f"{count} eigenvalue labels required, got {len(labels)}")
    labels = labels[:count]
    if len(set(labels)) != len(labels):
        raise InputError("twin eigenvalue labels must be distinct")
    return labels


def construct_pto_pure(phi, dims: Sequence[int], labels: Optional[Sequence[float]] = None,
                       tol: float = 1e-10) -> Tuple[SpectralForm, SpectralForm]:
    """
    Twins over the Schmidt vectors of phi: A1 = sum_i a_i |u_i><u_i|, A2 = sum_i a_i |v_i><v_i|,
    eigenvalue 0 on the orthocomplement. Labels default to a_i = i + 1, so the pair is also
    an algebraic twin. Degenerate Schmidt coefficients are fine since labels go by index.
    """
    form = schmidt_decompose(phi, dims, tol)
    values = _distinct_labels(labels, form.rank)
    d1, d2 = form.dims
    A1 = SpectralForm.from_eigenpairs(values, form.left_basis, 0.0, d1)
    A2 = SpectralForm.from_eigenpairs(values, form.right_basis, 0.0, d2)
    return A1, A2


def _validated_spectra(spectra: Sequence[Any]) -> np.ndarray:
    rows = []
    for spectrum in spectra:
        weights = spectrum.weights if isinstance(spectrum, ProbabilityVector) else \
            ProbabilityVector.from_values(spectrum).weights
        rows.append(np.asarray(weights, dtype=float))
    if not rows:
        raise InputError("at least one spectrum is required")
    if len({row.size for row in rows}) != 1:
        raise InputError("all spectra must have the same number of Schmidt levels")
    table = np.vstack(rows)
    if np.any(table <= 0.0):
        raise InputError("Schmidt ensemble spectra must be strictly positive")
    for k in range(len(rows)):
        for l in range(k + 1, len(rows)):
            if np.allclose(np.sort(rows[k]), np.sort(rows[l]), rtol=0.0, atol=1e-12):
                raise InputError(f"spectra {k} and {l} coincide")
    return table


def _ensemble_dims(levels: int, dims: Optional[Sequence[int]]) -> Tuple[int, int]:
    d1, d2 = (levels, levels) if dims is None else (int(dims[0]), int(dims[1]))
    if levels > min(d1, d2):
        raise DimensionError(f"{levels} Schmidt levels do not fit into {d1}x{d2}")
    return d1, d2


def schmidt_ensemble_vectors(spectra: Sequence[Any], dims: Optional[Sequence[int]] = None) -> List[np.ndarray]:
    """|Phi^k> = sum_i sqrt(r_i^k) |i>|i> in the computational bases"""
    table = _validated_spectra(spectra)
    n = table.shape[1]
    d1, d2 = _ensemble_dims(n, dims)
    vectors = []
    for row in table:
        vec = np.zeros(d1 * d2, dtype=complex)
        vec[np.arange(n) * d2 + np.arange(n)] = np.sqrt(row)
        vectors.append(vec)
    return vectors


def construct_schmidt_ensemble(spectra: Sequence[Any], weights, dims: Optional[Sequence[int]] = None,
                               labels_1: Optional[Sequence[float]] = None,
                               labels_2: Optional[Sequence[float]] = None,
                               ) -> Tuple[DensityOperator, SpectralForm, SpectralForm]:
    """
    Mixture rho12 = sum_k w_k |Phi^k><Phi^k| of states sharing computational Schmidt bases,
    with the twins A1 = sum_i a_i |i><i| and A2 = sum_i b_i |i><i| (0 on the complement).
    """
    w = weights if isinstance(weights, ProbabilityVector) else ProbabilityVector.from_values(weights)
    vectors = schmidt_ensemble_vectors(spectra, dims)
    if len(w) != len(vectors):
        raise InputError(f"{len(vectors)} spectra but {len(w)} weights")
    n = _validated_spectra(spectra).shape[1]
    d1, d2 = _ensemble_dims(n, dims)

    matrix = sum(wk * np.outer(v, v.conj()) for wk, v in zip(w.weights, vectors))
    rho12 = DensityOperator(frozen_matrix(matrix), (d1, d2))
    a = _distinct_labels(labels_1, n)
    b = _distinct_labels(labels_2, n)
    A1 = SpectralForm.from_eigenpairs(a, np.eye(d1)[:, :n], 0.0, d1)
    A2 = SpectralForm.from_eigenpairs(b, np.eye(d2)[:, :n], 0.0, d2)
    return rho12, A1, A2


# ---------------------------------------------------------------------------
# Correlations incompatibility and biorthogonal mixtures
# ---------------------------------------------------------------------------

class IncompatibilityNorms(NamedTuple):
    subsystem: float
    composite: float
    tolerance: float

    @property
    def incompatible(self) -> bool:
        return self.subsystem <= self.tolerance < self.composite


def incompatibility_norms(A: SpectralForm, rho12: DensityOperator, side, tol: Optional[float] = None,
                          tolerances: Tolerances = DEFAULT_TOLERANCES) -> IncompatibilityNorms:
    """||[A, rho_side]|| and ||[A (x) 1, rho12]|| (or 1 (x) A for side 2)"""
    side = subsystem_index(side)
    dims = rho12.require_dims()
    reduced = partial_trace(rho12, side)
    if tol is None:
        tol = tolerances.comm_tol(spectral_norm(rho12.matrix))
    full = A.to_matrix()
    return IncompatibilityNorms(
        commutator_norm(full, reduced),
        commutator_norm(embed_operator(full, side, dims), rho12),
        tol,
    )


def correlations_incompatibility(A: SpectralForm, rho12: DensityOperator, side, tol: Optional[float] = None,
                                 tolerances: Tolerances = DEFAULT_TOLERANCES) -> bool:
    """A commutes with its reduced state but its subsystem extension does not commute with rho12"""
    return incompatibility_norms(A, rho12, side, tol, tolerances).incompatible


def biorthogonal_mixture_info(components: Sequence[Tuple[float, DensityOperator]],
                              P1_set: Sequence[Projector], Q2_set: Sequence[Projector],
                              tol: Optional[float] = None,
                              tolerances: Tolerances = DEFAULT_TOLERANCES) -> SidePair:
    """
    I(sum_k p_k rho_k) against H(p_k) + sum_k p_k I(rho_k) for components confined to
    mutually orthogonal sectors P1^k (x) Q2^k.
    """
    tol = tolerances.identity_tol if tol is None else tol
    components = list(components)
    if not components:
        raise InputError("at least one mixture component is required")
    if not (len(components) == len(P1_set) == len(Q2_set)):
        raise InputError("one side-1 and one side-2 projector per component are required")
    for name, projectors in (("side-1", P1_set), ("side-2", Q2_set)):
        overlap = orthogonality_residual(list(projectors))
        if overlap > tolerances.refinement_tol:
            raise InputError(f"{name} sector projectors are not orthogonal (||P_k P_l|| = {overlap:.3e})")

    weights = ProbabilityVector.from_values([p for p, _ in components])
    dims = components[0][1].require_dims()
    worst = 0.0
    for (_, state), P, Q in zip(components, P1_set, Q2_set):
        if state.require_dims() != dims:
            raise DimensionError("mixture components have different bipartite dims")
        r = as_matrix(state)
        confined = embed_operator(P.matrix, 1, dims) @ r @ embed_operator(Q.matrix, 2, dims)
        worst = max(worst, spectral_norm(r - confined))
    if worst > tol:
        raise PreconditionError(f"mixture is not biorthogonal (worst residual {worst:.3e})", residual=worst)

    mixed = sum(p * as_matrix(state) for p, state in components)
    lhs = _mutual_information_matrix(mixed, dims, tolerances.rank_tol)
    rhs = _shannon(weights.weights) + sum(
        p * _mutual_information_matrix(as_matrix(state), dims, tolerances.rank_tol)
        for p, state in components if p > 0
    )
    return SidePair(lhs, float(rhs))


# ---------------------------------------------------------------------------
# Joint measurement statistics
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class JointDistribution:
    """p_{ii'} = Tr[rho12 (P1^i (x) P2^i')] over detectable branches of both sides"""

    matrix: np.ndarray
    marginals: Tuple[np.ndarray, np.ndarray]
    classical_mutual_information: float
    labels_1: Tuple[float, ...] = ()
    labels_2: Tuple[float, ...] = ()

    def check_invariants(self, tol: float = 1e-10) -> List[str]:
        violations = []
        if np.any(self.matrix < 0.0):
            violations.append("negative joint probability")
        if abs(float(self.matrix.sum()) - 1.0) > max(tol, 1e-8):
            violations.append(f"joint probabilities sum to {float(self.matrix.sum()):.12f}")
        if self.classical_mutual_information < -tol:
            violations.append(f"negative classical mutual information {self.classical_mutual_information:.3e}")
        return violations

    def to_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame(
            self.matrix,
            index=pd.Index(self.labels_1, name="a_i"),
            columns=pd.Index(self.labels_2, name="b_i'"),
        )
        return frame


def joint_measurement_distribution(A1: SpectralForm, A2: SpectralForm, rho12: DensityOperator,
                                   tolerances: Tolerances = DEFAULT_TOLERANCES) -> JointDistribution:
    """Outcome statistics of measuring A1 on side 1 and A2 on side 2"""
    dims = rho12.require_dims()
    r = as_matrix(rho12)
    idx1, _ = detectable_indices(A1, partial_trace(rho12, 1), tolerances.detect_tol, tolerances.certainty_tol)
    idx2, _ = detectable_indices(A2, partial_trace(rho12, 2), tolerances.detect_tol, tolerances.certainty_tol)

    table = np.zeros((len(idx1), len(idx2)))
    for a, i in enumerate(idx1):
        P = embed_operator(A1.projectors[i].matrix, 1, dims)
        for b, j in enumerate(idx2):
            Q = embed_operator(A2.projectors[j].matrix, 2, dims)
            table[a, b] = float(np.real(np.trace(r @ P @ Q)))
    table = np.clip(table, 0.0, None)
    table.setflags(write=False)
    p1, p2 = table.sum(axis=1), table.sum(axis=0)
    info = _shannon(p1) + _shannon(p2) - _shannon(table.ravel())
    return JointDistribution(
        matrix=table,
        marginals=(p1, p2),
        classical_mutual_information=info,
        labels_1=tuple(A1.branches[i].eigenvalue for i in idx1),
        labels_2=tuple(A2.branches[j].eigenvalue for j in idx2),
    )


# ---------------------------------------------------------------------------
# Discord decomposition
# ---------------------------------------------------------------------------

class SideTerms(NamedTuple):
    """Information terms of one subsystem observable acting on rho12"""

    observable_entropy: float
    coherence_entropy: float
    luders_info: float
    residual_info: float


def side_terms(A: SpectralForm, rho12: DensityOperator, side,
               tolerances: Tolerances = DEFAULT_TOLERANCES,
               warnings: Optional[List[str]] = None) -> SideTerms:
    """S(A_s, rho12), E_C(A_s, rho12), I(sum_i P^i rho12 P^i) and sum_i p_i I(rho12^i)"""
    dims = rho12.require_dims()
    E = A.embed(side, dims)
    r = as_matrix(rho12)
    indices, probs = detectable_indices(E, r, tolerances.detect_tol, tolerances.certainty_tol)
    projectors = [E.projectors[i] for i in indices]
    L = luders_matrix(r, projectors)
    coherence = (_matrix_entropy(L, tolerances.rank_tol, warnings)
                 - _matrix_entropy(r, tolerances.rank_tol, warnings))
    residual = 0.0
    for i in indices:
        P = E.projectors[i].matrix
        residual += probs[i] * _mutual_information_matrix(P @ r @ P / probs[i], dims,
                                                          tolerances.rank_tol, warnings)
    return SideTerms(
        observable_entropy=_shannon(probs[indices]),
        coherence_entropy=coherence,
        luders_info=_mutual_information_matrix(L, dims, tolerances.rank_tol, warnings),
        residual_info=float(residual),
    )


@dataclass(frozen=True)
class DiscordLedger:
    """Mutual information split into coherence, observable and residual parts"""

    mutual_information: float
    subsystem_entropies: Tuple[float, float]
    coherence_entropy: Optional[float] = None
    luders_info: Optional[float] = None
    observable_entropy: Optional[float] = None
    residual_info: Optional[float] = None
    i_qcl: Optional[float] = None
    discord: Optional[float] = None
    withheld_reason: Optional[str] = None
    side_symmetry_residual: Optional[float] = None
    subsystem_compatible: bool = False
    complete: Tuple[bool, bool] = (False, False)
    classical_mutual_information: Optional[float] = None
    chain_upper_bounds: Optional[Tuple[float, float]] = None
    pto: Optional[PtoReport] = None
    diagnostics: Tuple[str, ...] = ()
    warnings: Tuple[str, ...] = ()

    @property
    def coherence_split_residual(self) -> Optional[float]:
        """|I - (E_C + I(Lüders state))|"""
        if self.coherence_entropy is None or self.luders_info is None:
            return None
        return abs(self.mutual_information - (self.coherence_entropy + self.luders_info))

    @property
    def twin_split_residual(self) -> Optional[float]:
        """|I - (S(A_s) + E_C + sum_i p_i I(rho12^i))|"""
        if self.observable_entropy is None or self.residual_info is None:
            return None
        return abs(self.mutual_information
                   - (self.observable_entropy + self.coherence_entropy + self.residual_info))

    @property
    def collapse_residual(self) -> Optional[float]:
        """Spread of I(m1:m2), S(rho1), S(rho2) and S(A_s, rho12)"""
        if self.classical_mutual_information is None or self.observable_entropy is None:
            return None
        values = [self.classical_mutual_information, *self.subsystem_entropies, self.observable_entropy]
        return max(values) - min(values)

    def check_invariants(self, tol: float = 1e-8) -> List[str]:
        violations = []
        if self.subsystem_compatible and self.coherence_split_residual is not None \
                and self.coherence_split_residual > tol:
            violations.append(f"I != E_C + I(Lüders state) (off by {self.coherence_split_residual:.3e})")
        if self.pto is not None and self.pto.is_pto:
            if self.twin_split_residual is not None and self.twin_split_residual > tol:
                violations.append(f"I != S(A) + E_C + residual (off by {self.twin_split_residual:.3e})")
            if self.side_symmetry_residual is not None and self.side_symmetry_residual > tol:
                violations.append(f"side-1 and side-2 ledgers differ by {self.side_symmetry_residual:.3e}")
            violations.extend(self.pto.check_invariants())
            if self.classical_mutual_information is not None and self.chain_upper_bounds is not None:
                if self.classical_mutual_information > min(self.chain_upper_bounds) + tol:
                    violations.append("classical mutual information exceeds the information chain bounds")
        if self.discord is not None:
            if self.residual_info is not None and self.residual_info > tol:
                violations.append(f"residual information {self.residual_info:.3e} under completeness")
            if abs(self.i_qcl - self.observable_entropy) > tol:
                violations.append("quasi-classical information differs from the observable entropy")
            if abs(self.discord - self.coherence_entropy) > tol:
                violations.append(f"discord {self.discord:.12f} differs from E_C {self.coherence_entropy:.12f}")
            if self.collapse_residual is not None and self.collapse_residual > tol:
                violations.append(f"information chains do not collapse (spread {self.collapse_residual:.3e})")
        return violations

    def to_dict(self, scale: float = 1.0) -> Dict[str, Any]:
        def scaled(value):
            return None if value is None else value * scale

        return {
            "mutual_information": scaled(self.mutual_information),
            "observable_entropy": scaled(self.observable_entropy),
            "coherence_entropy": scaled(self.coherence_entropy),
            "residual_info": scaled(self.residual_info),
            "luders_info": scaled(self.luders_info),
            "i_qcl": scaled(self.i_qcl),
            "discord": scaled(self.discord),
            "withheld_reason": self.withheld_reason,
            "subsystem_entropies": [s * scale for s in self.subsystem_entropies],
            "classical_mutual_information": scaled(self.classical_mutual_information),
            "chain_upper_bounds": None if self.chain_upper_bounds is None
            else [b * scale for b in self.chain_upper_bounds],
            "side_symmetry_residual": scaled(self.side_symmetry_residual),
            "complete": list(self.complete),
            "is_pto": None if self.pto is None else self.pto.is_pto,
            "diagnostics": list(self.diagnostics),
            "warnings": list(self.warnings),
        }


def _withheld_reason(is_pto: bool, complete: Tuple[bool, bool]) -> Optional[str]:
    if not is_pto:
        return "not_twin_observables"
    if not complete[0] and not complete[1]:
        return "incomplete_both_sides"
    if not complete[0]:
        return "incomplete_side_1"
    if not complete[1]:
        return "incomplete_side_2"
    return None


def _complete_on(A: SpectralForm, reduced: DensityOperator, tolerances: Tolerances) -> bool:
    try:
        return completeness_report(A, reduced, tolerances).complete
    except PreconditionError:
        return False


def discord_decomposition(rho12: DensityOperator, A1: SpectralForm, A2: SpectralForm,
                          tol: Optional[float] = None,
                          tolerances: Tolerances = DEFAULT_TOLERANCES) -> DiscordLedger:
    """
    Ledger of I(rho12) for the observable pair (A1, A2).
    The coherence split is always attempted for side 1; the twin split, side symmetry
    and joint statistics need a twin pair; quasi-classical information and discord are
    filled only when both observables are complete in relation to their reduced states.
    """
    tol = tolerances.identity_tol if tol is None else tol
    dims = rho12.require_dims()
    warnings: List[str] = []
    diagnostics: List[str] = []

    r = as_matrix(rho12)
    info = _mutual_information_matrix(r, dims, tolerances.rank_tol, warnings)
    rho1, rho2 = partial_trace(rho12, 1), partial_trace(rho12, 2)
    entropies = (_matrix_entropy(rho1.matrix, tolerances.rank_tol, warnings),
                 _matrix_entropy(rho2.matrix, tolerances.rank_tol, warnings))
    norms = incompatibility_norms(A1, rho12, 1, tolerances=tolerances)
    compatible = norms.subsystem <= norms.tolerance

    try:
        first = side_terms(A1, rho12, 1, tolerances, warnings)
    except PreconditionError as exc:
        diagnostics.append(f"side 1: {exc}")
        return DiscordLedger(info, entropies, withheld_reason="not_discrete",
                             diagnostics=tuple(diagnostics), warnings=tuple(warnings))

    pto = verify_pto(A1, A2, rho12, tol, tolerances)
    if not pto.is_pto:
        diagnostics.extend(pto.diagnostics or ("observables are not physical twins",))
        return DiscordLedger(
            mutual_information=info,
            subsystem_entropies=entropies,
            coherence_entropy=first.coherence_entropy,
            luders_info=first.luders_info,
            withheld_reason="not_twin_observables",
            subsystem_compatible=compatible,
            pto=pto,
            diagnostics=tuple(diagnostics),
            warnings=tuple(warnings),
        )

    second = side_terms(A2, rho12, 2, tolerances, warnings)
    symmetry = float(max(abs(x - y) for x, y in zip(first, second)))
    joint = joint_measurement_distribution(A1, A2, rho12, tolerances)
    complete = (_complete_on(A1, rho1, tolerances), _complete_on(A2, rho2, tolerances))
    reason = _withheld_reason(True, complete)
    i_qcl = first.observable_entropy if reason is None else None
    discord = info - i_qcl if i_qcl is not None else None

    return DiscordLedger(
        mutual_information=info,
        subsystem_entropies=entropies,
        coherence_entropy=first.coherence_entropy,
        luders_info=first.luders_info,
        observable_entropy=first.observable_entropy,
        residual_info=first.residual_info,
        i_qcl=i_qcl,
        discord=discord,
        withheld_reason=reason,
        side_symmetry_residual=symmetry,
        subsystem_compatible=compatible,
        complete=complete,
        classical_mutual_information=joint.classical_mutual_information,
        chain_upper_bounds=(min(info, entropies[1]), min(info, entropies[0])),
        pto=pto,
        diagnostics=tuple(diagnostics),
        warnings=tuple(warnings),
    )


# ---------------------------------------------------------------------------
# Analyzer
# ---------------------------------------------------------------------------

class TwinAnalyzer:
    """Twin verification plus the discord ledger for one bipartite state"""

    def __init__(self, A1: SpectralForm, A2: SpectralForm, state: DensityOperator,
                 tolerances: Tolerances = DEFAULT_TOLERANCES, tol: Optional[float] = None):
        self.A1 = A1
        self.A2 = A2
        self.state = state
        self.tolerances = tolerances
        self.tol = tolerances.identity_tol if tol is None else tol
        self.results: Dict[str, Any] = {}
        self.errors: List[str] = []
        self.warnings: List[str] = []

    def verify(self) -> PtoReport:
        report = verify_pto(self.A1, self.A2, self.state, self.tol, self.tolerances)
        self.results['pto'] = report
        if not report.is_pto:
            self.errors.extend(f"❌ {d}" for d in report.diagnostics)
        for violation in report.check_invariants():
            self.errors.append(f"❌ {violation}")
        return report

    def analyze(self) -> Dict[str, Any]:
        try:
            ledger = discord_decomposition(self.state, self.A1, self.A2, self.tol, self.tolerances)
        except TwinObsError as exc:
            self.errors.append(f"❌ Discord decomposition failed: {exc}")
            return self.results
        self.results['ledger'] = ledger
        if ledger.pto is not None:
            self.results['pto'] = ledger.pto
        self.warnings.extend(ledger.warnings)
        for diagnostic in ledger.diagnostics:
            self.warnings.append(f"⚠ {diagnostic}")
        for violation in ledger.check_invariants(self.tol):
            self.errors.append(f"❌ {violation}")
        if ledger.pto is not None and ledger.pto.is_pto:
            self.results['joint'] = joint_measurement_distribution(self.A1, self.A2, self.state, self.tolerances)
        self.results['incompatibility'] = tuple(
            correlations_incompatibility(A, self.state, side, tolerances=self.tolerances)
            for side, A in ((1, self.A1), (2, self.A2))
        )
        return self.results

    def get_pto_summary(self) -> str:
        report = self.results.get('pto')
        if report is None:
            return "No twin verification has been run"
        summary = ["=== TWIN OBSERVABLE VERIFICATION ===\n"]
        summary.append(f"{'✓' if report.is_pto else '❌'} Physical twins: {'yes' if report.is_pto else 'no'}")
        summary.append(f"{'✓' if report.is_algebraic_twin else '⚠'} Algebraic twins: "
                       f"{'yes' if report.is_algebraic_twin else 'no'} "
                       f"(||A1 rho - A2 rho|| = {report.algebraic_twin_residual:.3e})")
        summary.append(f"Detectable probability: side 1 {report.total_probability_1:.12f}, "
                       f"side 2 {report.total_probability_2:.12f}")
        if report.bijection:
            summary.append("\nMatched branches:")
            for pair, res, meas in zip(report.bijection, report.algebraic_residuals, report.measurement_residuals):
                summary.append(f"  a = {pair.eigenvalue_1:<10.6g} b = {pair.eigenvalue_2:<10.6g} "
                               f"p = {pair.probability:.6f}  residual {res:.2e} / {meas:.2e}")
        summary.append(f"\nReduced-state commutators: ||[A1, rho1]|| = {report.derived_compatibility[0]:.3e}, "
                       f"||[A2, rho2]|| = {report.derived_compatibility[1]:.3e}")
        for diagnostic in report.diagnostics:
            summary.append(f"⚠ {diagnostic}")
        return "\n".join(summary)

    def get_discord_summary(self, scale: float = 1.0, unit: str = "nat") -> str:
        ledger = self.results.get('ledger')
        if ledger is None:
            return "\n".join(["No discord ledger available"] + self.errors)
        summary = ["=== MUTUAL INFORMATION LEDGER ===\n"]
        summary.append(f"I(rho12)          = {ledger.mutual_information * scale:.9f} {unit}")
        summary.append(f"S(rho1), S(rho2)  = {ledger.subsystem_entropies[0] * scale:.9f}, "
                       f"{ledger.subsystem_entropies[1] * scale:.9f} {unit}")
        rows = [
            ("E_C(A1, rho12)", ledger.coherence_entropy),
            ("I(Lüders state)", ledger.luders_info),
            ("S(A1, rho12)", ledger.observable_entropy),
            ("sum p_i I(rho_i)", ledger.residual_info),
            ("I(m1:m2)", ledger.classical_mutual_information),
            ("I_qcl", ledger.i_qcl),
            ("discord", ledger.discord),
        ]
        for label, value in rows:
            if value is not None:
                summary.append(f"{label:<18}= {value * scale:.9f} {unit}")
        if ledger.withheld_reason:
            summary.append(f"\n⚠ Discord withheld: {ledger.withheld_reason}")
        incompatible = self.results.get('incompatibility')
        if incompatible is not None:
            summary.append(f"Correlations incompatibility: side 1 {incompatible[0]}, side 2 {incompatible[1]}")
        for warning in self.warnings:
            summary.append(warning)
        for error in self.errors:
            summary.append(error)
        if not self.errors:
            summary.append("\n✓ All ledger identities hold")
        return "\n".join(summary)

    def to_dict(self, scale: float = 1.0) -> Dict[str, Any]:
        out: Dict[str, Any] = {'errors': list(self.errors), 'warnings': list(self.warnings)}
        if 'pto' in self.results:
            out['pto'] = self.results['pto'].to_dict()
        if 'ledger' in self.results:
            out['ledger'] = self.results['ledger'].to_dict(scale)
        if 'joint' in self.results:
            joint = self.results['joint']
            out['joint_distribution'] = joint.matrix.tolist()
        if 'incompatibility' in self.results:
            out['correlations_incompatibility'] = list(self.results['incompatibility'])
        return out


if __name__ == "__main__":
    bell = np.array([1.0, 0.0, 0.0, 1.0]) / np.sqrt(2.0)
    A1, A2 = construct_pto_pure(bell, (2, 2))
    analyzer = TwinAnalyzer(A1, A2, DensityOperator.from_vector(bell, (2, 2)))
    analyzer.analyze()
    print(analyzer.get_pto_summary())
    print()
    print(analyzer.get_discord_summary())
