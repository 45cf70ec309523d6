"""
Entropy Analysis Module
Entropy functionals of an observable in relation to a state:
- Shannon and von Neumann entropies (natural logarithm, 0 ln 0 = 0)
- Lüders (ideal, non-selective measurement) states
- Coherence entropy and the entropy of an observable
- Entropy balance ledger with its level diagram
- Von Neumann mutual information
- Mixture-average coherence test
"""

from dataclasses import dataclass
from typing import List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg as sla
from scipy.special import xlogy

from config import DEFAULT_TOLERANCES, Tolerances
from operator_core import (
    DensityOperator,
    DomainError,
    InputError,
    PreconditionError,
    Projector,
    SpectralForm,
    as_matrix,
    commutator_norm,
    detectable_indices,
    expectation,
    frozen_matrix,
    is_certain_event,
    orthogonality_residual,
    partial_trace_matrix,
    projector_sum,
    spectral_norm,
)


LN2 = float(np.log(2.0))


@dataclass(frozen=True, eq=False)
class ProbabilityVector:
    """Nonnegative weights summing to one"""

    weights: np.ndarray

    @classmethod
    def from_values(cls, values: Sequence[float], tol: float = 1e-10) -> "ProbabilityVector":
        arr = np.asarray(values, dtype=float).ravel()
        if arr.size == 0:
            raise InputError("empty probability vector")
        if not np.all(np.isfinite(arr)):
            raise DomainError("probability vector contains NaN or Inf")
        if np.any(arr < -tol):
            raise DomainError(f"negative probability {arr.min()!r}")
        if abs(arr.sum() - 1.0) > tol:
            raise DomainError(f"probabilities sum to {arr.sum()!r}, expected 1")
        arr = np.clip(arr, 0.0, None)
        arr.setflags(write=False)
        return cls(arr)

    def __len__(self) -> int:
        return self.weights.size


def _shannon(weights) -> float:
    w = np.clip(np.asarray(weights, dtype=float), 0.0, None)
    return float(-np.sum(xlogy(w, w)))


def shannon_entropy(p) -> float:
    """H(p) = -sum p_i ln p_i"""
    if not isinstance(p, ProbabilityVector):
        p = ProbabilityVector.from_values(p)
    return _shannon(p.weights)


def clamp_spectrum(values, rank_tol: Optional[float] = None,
                   warnings: Optional[List[str]] = None,
                   clamp_warn: Optional[float] = None) -> np.ndarray:
    """Eigenvalues at or below rank_tol become exact zeros"""
    rank_tol = DEFAULT_TOLERANCES.rank_tol if rank_tol is None else rank_tol
    clamp_warn = DEFAULT_TOLERANCES.clamp_warn if clamp_warn is None else clamp_warn
    vals = np.asarray(values, dtype=float)
    lowest = float(vals.min()) if vals.size else 0.0
    if warnings is not None and lowest < -clamp_warn:
        warnings.append(f"⚠ clamped negative eigenvalue {lowest:.3e} to zero")
    return np.where(vals <= rank_tol, 0.0, vals)


def _matrix_entropy(M, rank_tol: Optional[float] = None, warnings: Optional[List[str]] = None) -> float:
    return _shannon(clamp_spectrum(sla.eigvalsh(as_matrix(M)), rank_tol, warnings))


def von_neumann_entropy(rho, rank_tol: Optional[float] = None,
                        warnings: Optional[List[str]] = None) -> float:
    """Shannon entropy of the eigenvalue spectrum"""
    return _matrix_entropy(rho, rank_tol, warnings)


def luders_matrix(rho, projectors: Sequence[Projector]) -> np.ndarray:
    r = as_matrix(rho)
    total = np.zeros_like(r)
    for P in projectors:
        total = total + P.matrix @ r @ P.matrix
    return (total + total.conj().T) / 2


def luders_state(rho: DensityOperator, projectors: Sequence[Projector],
                 tolerances: Tolerances = DEFAULT_TOLERANCES) -> DensityOperator:
    """sum_i P_i rho P_i for an orthogonal projector set that is certain in rho"""
    projectors = list(projectors)
    if not projectors:
        raise InputError("at least one projector is required")
    overlap = orthogonality_residual(projectors)
    if overlap > tolerances.refinement_tol:
        raise InputError(f"projectors are not mutually orthogonal (||P_i P_j|| = {overlap:.3e})")
    report = is_certain_event(projector_sum(projectors, rho.dim), rho, tolerances.certainty_tol,
                              tolerances.rank_tol)
    if not report.certain:
        raise PreconditionError(
            f"projector sum is not certain in the state (probability deficit {report.deficit:.3e})",
            deficit=report.deficit,
        )
    return DensityOperator(frozen_matrix(luders_matrix(rho, projectors)), rho.bipartite_dims)


def coherence_entropy(A: SpectralForm, rho, tolerances: Tolerances = DEFAULT_TOLERANCES,
                      warnings: Optional[List[str]] = None) -> float:
    """E_C(A, rho) = S(sum_i P_i rho P_i) - S(rho) over the detectable branches"""
    indices, _ = detectable_indices(A, rho, tolerances.detect_tol, tolerances.certainty_tol)
    projectors = [A.projectors[i] for i in indices]
    return (_matrix_entropy(luders_matrix(rho, projectors), tolerances.rank_tol, warnings)
            - _matrix_entropy(rho, tolerances.rank_tol, warnings))


def observable_entropy(A: SpectralForm, rho, tolerances: Tolerances = DEFAULT_TOLERANCES) -> float:
    """S(A, rho): Shannon entropy of the detectable outcome distribution"""
    indices, probs = detectable_indices(A, rho, tolerances.detect_tol, tolerances.certainty_tol)
    return _shannon(probs[indices])


@dataclass(frozen=True)
class EntropyLedger:
    """S(A,rho) = E_C(A,rho) + (S(rho) - sum_i p_i S(P_i rho P_i / p_i))"""

    observable_entropy: float
    coherence_entropy: float
    state_entropy: float
    luders_entropy: float
    avg_component_entropy: float
    residual: float
    mixing_residual: float = 0.0
    branch_probabilities: Tuple[float, ...] = ()
    component_entropies: Tuple[float, ...] = ()
    warnings: Tuple[str, ...] = ()

    @property
    def balance_residual(self) -> float:
        return abs(self.observable_entropy - (self.coherence_entropy + self.residual))

    def check_invariants(self, identity_tol: float = 1e-8, slack: float = 1e-10) -> List[str]:
        """Return a list of violated ledger invariants (empty when all hold)"""
        violations = []
        if self.balance_residual > identity_tol:
            violations.append(f"balance off by {self.balance_residual:.3e}")
        if abs(self.mixing_residual) > identity_tol:
            violations.append(f"orthogonal-mixture entropy off by {self.mixing_residual:.3e}")
        if self.coherence_entropy < -slack:
            violations.append(f"negative coherence entropy {self.coherence_entropy:.3e}")
        if self.residual < -slack:
            violations.append(f"negative entropy decrease {self.residual:.3e}")
        if self.luders_entropy < self.state_entropy - slack:
            violations.append("Lüders entropy below state entropy")
        if self.state_entropy < self.avg_component_entropy - slack:
            violations.append("state entropy below average component entropy")
        if self.observable_entropy < self.coherence_entropy - slack:
            violations.append("observable entropy below coherence entropy")
        return violations

    def to_dict(self, scale: float = 1.0) -> dict:
        """Entropy fields multiplied by `scale` (1/ln 2 converts to bits)"""
        return {
            "observable_entropy": self.observable_entropy * scale,
            "coherence_entropy": self.coherence_entropy * scale,
            "state_entropy": self.state_entropy * scale,
            "luders_entropy": self.luders_entropy * scale,
            "avg_component_entropy": self.avg_component_entropy * scale,
            "residual": self.residual * scale,
            "branch_probabilities": list(self.branch_probabilities),
            "warnings": list(self.warnings),
        }

    def diagram(self, width: int = 40, scale: float = 1.0, unit: str = "nat") -> str:
        """Entropy level diagram: vertical order Lüders >= state >= average component >= 0"""
        top = max(self.luders_entropy, 1e-300)

        def bar(value: float) -> str:
            return "─" * max(1, int(round(width * max(value, 0.0) / top)))

        lines = [
            f"{'S(sum P rho P)':<22}{self.luders_entropy * scale:>12.6f} {unit}  {bar(self.luders_entropy)}",
            f"{'':<4}↑ E_C = {self.coherence_entropy * scale:.6f}",
            f"{'S(rho)':<22}{self.state_entropy * scale:>12.6f} {unit}  {bar(self.state_entropy)}",
            f"{'':<4}↓ decrease = {self.residual * scale:.6f}",
            f"{'sum p_i S_i':<22}{self.avg_component_entropy * scale:>12.6f} {unit}  {bar(self.avg_component_entropy)}",
            f"{'0':<22}{0.0:>12.6f} {unit}",
            f"S(A, rho) = E_C + decrease = {self.observable_entropy * scale:.6f} {unit}",
        ]
        return "\n".join(lines)


def entropy_balance(A: SpectralForm, rho, tolerances: Tolerances = DEFAULT_TOLERANCES) -> EntropyLedger:
    """Populate every term of the entropy balance of A in rho"""
    warnings: List[str] = []
    indices, probs = detectable_indices(A, rho, tolerances.detect_tol, tolerances.certainty_tol)
    r = as_matrix(rho)

    components = []
    for i in indices:
        P = A.projectors[i].matrix
        component = P @ r @ P / probs[i]
        components.append(_matrix_entropy(component, tolerances.rank_tol, warnings))
    detect_probs = probs[indices]
    avg_component = float(np.dot(detect_probs, components)) if components else 0.0

    state_entropy = _matrix_entropy(r, tolerances.rank_tol, warnings)
    luders_entropy = _matrix_entropy(luders_matrix(r, [A.projectors[i] for i in indices]),
                                     tolerances.rank_tol, warnings)
    obs_entropy = _shannon(detect_probs)

    return EntropyLedger(
        observable_entropy=obs_entropy,
        coherence_entropy=luders_entropy - state_entropy,
        state_entropy=state_entropy,
        luders_entropy=luders_entropy,
        avg_component_entropy=avg_component,
        residual=state_entropy - avg_component,
        mixing_residual=luders_entropy - (obs_entropy + avg_component),
        branch_probabilities=tuple(float(p) for p in detect_probs),
        component_entropies=tuple(components),
        warnings=tuple(warnings),
    )


@dataclass(frozen=True)
class SandwichEqualities:
    """Observed vs predicted tightness of sum p_i S_i <= S(rho) <= S(sum P_i rho P_i)"""

    lower_tight: bool
    lower_predicted: bool
    upper_tight: bool
    upper_predicted: bool

    @property
    def consistent(self) -> bool:
        return self.lower_tight == self.lower_predicted and self.upper_tight == self.upper_predicted


def sandwich_equalities(A: SpectralForm, rho, tol: float = 1e-8,
                        tolerances: Tolerances = DEFAULT_TOLERANCES) -> SandwichEqualities:
    ledger = entropy_balance(A, rho, tolerances)
    indices, _ = detectable_indices(A, rho, tolerances.detect_tol, tolerances.certainty_tol)
    comm_tol = tolerances.comm_tol(spectral_norm(rho))
    return SandwichEqualities(
        lower_tight=ledger.residual <= tol,
        lower_predicted=all(abs(s - ledger.state_entropy) <= tol for s in ledger.component_entropies),
        upper_tight=ledger.coherence_entropy <= tol,
        upper_predicted=all(commutator_norm(A.projectors[i], rho) <= comm_tol for i in indices),
    )


def _mutual_information_matrix(M, dims: Sequence[int], rank_tol: Optional[float] = None,
                               warnings: Optional[List[str]] = None) -> float:
    rho1 = partial_trace_matrix(M, dims, 1)
    rho2 = partial_trace_matrix(M, dims, 2)
    return (_matrix_entropy(rho1, rank_tol, warnings) + _matrix_entropy(rho2, rank_tol, warnings)
            - _matrix_entropy(M, rank_tol, warnings))


def mutual_information(rho12: DensityOperator, rank_tol: Optional[float] = None,
                       warnings: Optional[List[str]] = None) -> float:
    """I(rho12) = S(rho1) + S(rho2) - S(rho12)"""
    return _mutual_information_matrix(rho12.matrix, rho12.require_dims(), rank_tol, warnings)


class MixtureAverageCheck(NamedTuple):
    lhs: float
    rhs: float
    equal: bool
    discrepancy: float
    witness: np.ndarray


def _resolution_blocks(A: SpectralForm) -> List[np.ndarray]:
    blocks = [P.matrix for P in A.projectors]
    covered = A.covered_projector()
    if covered.rank < A.dim:
        blocks.append(covered.complement().matrix)
    return blocks


def mixture_average_check(A: SpectralForm, rho, B, tol: Optional[float] = None) -> MixtureAverageCheck:
    """Compare Tr(rho B) with sum_l Tr[(P_l rho P_l) B]"""
    tol = DEFAULT_TOLERANCES.identity_tol if tol is None else tol
    r = as_matrix(rho)
    b = as_matrix(B)
    if r.shape != b.shape or r.shape[0] != A.dim:
        raise InputError("observable, state and witness must share one dimension")
    lhs = expectation(r, b)
    rhs = sum(expectation(P @ r @ P, b) for P in _resolution_blocks(A))
    discrepancy = abs(lhs - rhs)
    return MixtureAverageCheck(lhs, float(rhs), discrepancy <= tol, discrepancy, frozen_matrix(b))


def coherence_witness_search(A: SpectralForm, rho, samples: int = 20, seed: int = 0,
                             tol: Optional[float] = None) -> MixtureAverageCheck:
    """Sample random observables B and keep the one with the largest mixture-average discrepancy"""
    rng = np.random.Generator(np.random.PCG64(seed))
    best = None
    for _ in range(samples):
        G = rng.standard_normal((A.dim, A.dim)) + 1j * rng.standard_normal((A.dim, A.dim))
        check = mixture_average_check(A, rho, (G + G.conj().T) / 2, tol)
        if best is None or check.discrepancy > best.discrepancy:
            best = check
    return best
