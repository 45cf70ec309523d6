"""
Observable Relation Module
Classifies how an observable stands in relation to a state:
- Detectable / undetectable eigenvalue split and relative discreteness
- Weak / strong decomposition (weak probability, weak and strong component states)
- Refinement partial order and its entropy monotonicity report
- Completeness in relation to a state, with the range-reducee cross-checks
"""

from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.linalg as sla

from config import DEFAULT_TOLERANCES, Tolerances
from entropy_analysis import (
    EntropyLedger,
    _matrix_entropy,
    _shannon,
    coherence_entropy,
    entropy_balance,
    luders_matrix,
)
from operator_core import (
    CertaintyReport,
    DensityOperator,
    PreconditionError,
    Projector,
    SpectralBranch,
    SpectralForm,
    as_matrix,
    commutator_norm,
    detectable_indices,
    frozen_matrix,
    is_certain_event,
    projector_sum,
    range_projector,
    spectral_decompose,
    spectral_norm,
)


class SidePair(NamedTuple):
    """Two sides of an identity that should agree"""

    lhs: float
    rhs: float

    @property
    def gap(self) -> float:
        return abs(self.lhs - self.rhs)


# ---------------------------------------------------------------------------
# Detectable split and relative discreteness
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DetectableBranch:
    eigenvalue: float
    projector: Projector
    probability: float


@dataclass(frozen=True)
class DetectableSplit:
    """Detectable branches (positive probability) and undetectable ones, never dropped"""

    detectable: Tuple[DetectableBranch, ...]
    undetectable: Tuple[DetectableBranch, ...]
    certain_projector: Projector
    certainty: CertaintyReport

    @property
    def total_probability(self) -> float:
        return float(sum(b.probability for b in self.detectable))

    @property
    def detectable_eigenvalues(self) -> List[float]:
        return [b.eigenvalue for b in self.detectable]

    @property
    def undetectable_eigenvalues(self) -> List[float]:
        return [b.eigenvalue for b in self.undetectable]

    def check_invariants(self, detect_tol: float = 1e-10, tol: float = 1e-9) -> List[str]:
        violations = []
        if any(b.probability <= detect_tol for b in self.detectable):
            violations.append("detectable branch at or below the detection threshold")
        if any(b.probability > detect_tol for b in self.undetectable):
            violations.append("undetectable branch above the detection threshold")
        if abs(self.total_probability - 1.0) > tol:
            violations.append(f"detectable probabilities sum to {self.total_probability:.12f}")
        if not self.certainty.range_criterion:
            violations.append("certain projector does not contain the range of the state")
        return violations


def detectable_split(A: SpectralForm, rho: DensityOperator, detect_tol: Optional[float] = None,
                     tolerances: Tolerances = DEFAULT_TOLERANCES) -> DetectableSplit:
    """Partition the branches of A by Tr(P_l rho) against detect_tol"""
    detect_tol = tolerances.detect_tol if detect_tol is None else detect_tol
    indices, probs = detectable_indices(A, rho, detect_tol, require_discrete=False)
    chosen = set(indices)
    detectable, undetectable = [], []
    for l, branch in enumerate(A.branches):
        item = DetectableBranch(branch.eigenvalue, branch.projector, float(probs[l]))
        (detectable if l in chosen else undetectable).append(item)
    certain = projector_sum([b.projector for b in detectable], A.dim)
    report = is_certain_event(certain, rho, tolerances.certainty_tol, tolerances.rank_tol)
    return DetectableSplit(tuple(detectable), tuple(undetectable), certain, report)


def validate_relative_discreteness(branches: Union[SpectralForm, Iterable[Tuple[float, Any]]],
                                   rho: DensityOperator,
                                   tolerances: Tolerances = DEFAULT_TOLERANCES) -> CertaintyReport:
    """
    Certainty of the detectable part of (possibly partial) spectral data.
    Overlapping projectors raise InputError; the returned report carries the
    probability criterion together with the PQ = Q and P rho = rho residuals.
    """
    form = branches if isinstance(branches, SpectralForm) else SpectralForm.from_branches(
        branches, tol=tolerances.refinement_tol)
    indices, _ = detectable_indices(form, rho, tolerances.detect_tol, require_discrete=False)
    certain = projector_sum([form.projectors[i] for i in indices], form.dim)
    return is_certain_event(certain, rho, tolerances.certainty_tol, tolerances.rank_tol)


# ---------------------------------------------------------------------------
# Weak / strong decomposition
# ---------------------------------------------------------------------------

class Regime(str, Enum):
    STRONG = "strong"
    WEAK = "weak"
    INTERMEDIARY = "intermediary"


@dataclass(frozen=True)
class WeakBranch:
    eigenvalue: float
    projector: Projector
    probability: float
    commutator_norm: float


@dataclass(frozen=True)
class StrongBranch:
    eigenvalue: float
    projector: Projector
    probability: float
    state: DensityOperator
    commutator_norm: float


@dataclass(frozen=True)
class WeakStrongDecomposition:
    weak_branches: Tuple[WeakBranch, ...]
    strong_branches: Tuple[StrongBranch, ...]
    weak_probability: float
    weak_state: Optional[DensityOperator]
    strong_state: Optional[DensityOperator]
    regime: Regime
    comm_tol: float
    undetectable: Tuple[DetectableBranch, ...] = ()

    def weak_observable(self) -> Optional[SpectralForm]:
        """A_w = sum_j a_j P_j, or None when there are no weak branches"""
        if not self.weak_branches:
            return None
        return SpectralForm(tuple(SpectralBranch(b.eigenvalue, b.projector) for b in self.weak_branches))

    def reconstruction_residual(self, rho) -> float:
        r = as_matrix(rho)
        total = np.zeros_like(r)
        if self.weak_state is not None:
            total = total + self.weak_probability * self.weak_state.matrix
        if self.strong_state is not None:
            total = total + (1.0 - self.weak_probability) * self.strong_state.matrix
        return spectral_norm(total - r)

    def check_invariants(self, rho, tol: float = 1e-9) -> List[str]:
        violations = []
        r = as_matrix(rho)
        for b in self.strong_branches:
            if b.commutator_norm > self.comm_tol:
                violations.append(f"strong branch {b.eigenvalue} does not commute with the state")
            cut = b.projector.matrix @ r / b.probability
            if spectral_norm(cut - b.state.matrix) > tol:
                violations.append(f"strong component P rho / p is not Hermitian for {b.eigenvalue}")
        for b in self.weak_branches:
            if b.commutator_norm <= self.comm_tol:
                violations.append(f"weak branch {b.eigenvalue} commutes with the state")
        residual = self.reconstruction_residual(r)
        if residual > tol:
            violations.append(f"weak/strong mixture misses the state by {residual:.3e}")
        if self.regime != _regime(self.weak_probability, tol):
            violations.append("regime does not match the weak probability")
        return violations


def _regime(weak_probability: float, tol: float) -> Regime:
    if weak_probability <= tol:
        return Regime.STRONG
    if weak_probability >= 1.0 - tol:
        return Regime.WEAK
    return Regime.INTERMEDIARY


def weak_strong_decompose(A: SpectralForm, rho: DensityOperator, comm_tol: Optional[float] = None,
                          tolerances: Tolerances = DEFAULT_TOLERANCES) -> WeakStrongDecomposition:
    """Split the detectable branches into strong (commuting with rho) and weak ones"""
    indices, probs = detectable_indices(A, rho, tolerances.detect_tol, tolerances.certainty_tol)
    r = as_matrix(rho)
    comm_tol = tolerances.comm_tol(spectral_norm(r)) if comm_tol is None else comm_tol

    weak, strong = [], []
    for i in indices:
        branch = A.branches[i]
        P = branch.projector.matrix
        c = commutator_norm(P, r)
        if c <= comm_tol:
            component = P @ r @ P / probs[i]
            strong.append(StrongBranch(branch.eigenvalue, branch.projector, float(probs[i]),
                                       DensityOperator(frozen_matrix(component)), c))
        else:
            weak.append(WeakBranch(branch.eigenvalue, branch.projector, float(probs[i]), c))

    P_w = projector_sum([b.projector for b in weak], A.dim).matrix
    p_w = float(np.real(np.trace(P_w @ r))) if weak else 0.0
    weak_state = None
    if weak and p_w > tolerances.detect_tol:
        weak_state = DensityOperator(frozen_matrix(P_w @ r @ P_w / p_w))
    strong_state = None
    if strong and 1.0 - p_w > tolerances.detect_tol:
        mixed = sum(b.probability * b.state.matrix for b in strong) / (1.0 - p_w)
        strong_state = DensityOperator(frozen_matrix(mixed))

    undetectable = tuple(DetectableBranch(b.eigenvalue, b.projector, float(probs[l]))
                         for l, b in enumerate(A.branches) if l not in set(indices))
    return WeakStrongDecomposition(
        weak_branches=tuple(weak),
        strong_branches=tuple(strong),
        weak_probability=p_w,
        weak_state=weak_state,
        strong_state=strong_state,
        regime=_regime(p_w, tolerances.certainty_tol),
        comm_tol=comm_tol,
        undetectable=undetectable,
    )


def weak_coherence_sides(A: SpectralForm, rho: DensityOperator,
                         tolerances: Tolerances = DEFAULT_TOLERANCES,
                         decomposition: Optional[WeakStrongDecomposition] = None) -> SidePair:
    """(E_C(A, rho), p_w * E_C(A_w, rho_w)); the two sides agree"""
    lhs = coherence_entropy(A, rho, tolerances)
    decomposition = decomposition or weak_strong_decompose(A, rho, tolerances=tolerances)
    if decomposition.weak_state is None:
        return SidePair(lhs, 0.0)
    A_w = decomposition.weak_observable()
    rhs = decomposition.weak_probability * coherence_entropy(A_w, decomposition.weak_state, tolerances)
    return SidePair(lhs, rhs)


# ---------------------------------------------------------------------------
# Refinement
# ---------------------------------------------------------------------------

class RefinementVerdict(str, Enum):
    STRICTLY_FINER = "strictly_finer"
    EQUAL = "equal"
    NOT_COMPARABLE = "not_comparable"


@dataclass(frozen=True)
class RefinementRelation:
    """
    mapping[k] lists the fine branch indices contained in the k-th detectable coarse
    branch (coarse_indices[k]); detectable_mapping keeps only the detectable ones.
    """

    verdict: RefinementVerdict
    coarse_indices: Tuple[int, ...]
    mapping: Tuple[Tuple[int, ...], ...]
    detectable_mapping: Tuple[Tuple[int, ...], ...]
    decomposition_residual: float
    reason: str = ""


def refinement_relation(A_fine: SpectralForm, A_coarse: SpectralForm, rho: DensityOperator,
                        tolerances: Tolerances = DEFAULT_TOLERANCES) -> RefinementRelation:
    """Test whether the detectable eigenprojectors of A_fine decompose those of A_coarse"""
    fine_det, _ = detectable_indices(A_fine, rho, tolerances.detect_tol, tolerances.certainty_tol)
    coarse_det, _ = detectable_indices(A_coarse, rho, tolerances.detect_tol, tolerances.certainty_tol)
    fine_det_set = set(fine_det)
    tol = tolerances.refinement_tol

    mapping, detectable_mapping = [], []
    worst = 0.0
    claimed = set()
    for i in coarse_det:
        P_i = A_coarse.projectors[i].matrix
        members = [j for j, P in enumerate(A_fine.projectors)
                   if P.rank > 0 and spectral_norm(P_i @ P.matrix - P.matrix) <= tol]
        total = sum((A_fine.projectors[j].matrix for j in members), np.zeros_like(P_i))
        worst = max(worst, spectral_norm(P_i - total))
        mapping.append(tuple(members))
        detectable_mapping.append(tuple(j for j in members if j in fine_det_set))
        claimed.update(members)

    reason = ""
    if worst > tol:
        reason = f"coarse projectors are not sums of fine ones (residual {worst:.3e})"
    elif not fine_det_set <= claimed:
        reason = "a detectable fine branch lies outside every detectable coarse branch"
    if reason:
        verdict = RefinementVerdict.NOT_COMPARABLE
    elif any(len(members) >= 2 for members in detectable_mapping):
        verdict = RefinementVerdict.STRICTLY_FINER
    else:
        verdict = RefinementVerdict.EQUAL
    return RefinementRelation(verdict, tuple(coarse_det), tuple(mapping), tuple(detectable_mapping),
                              worst, reason)


@dataclass(frozen=True)
class RefinementEntropyReport:
    S_fine: float
    S_coarse: float
    EC_fine: float
    EC_coarse: float
    decrease_fine: float
    decrease_coarse: float
    refined_compatibility_residual: float
    conditional_split_entropy: float
    split_entropy_residual: float
    decrease_equality_predicted: bool
    verdict: RefinementVerdict

    def check_invariants(self, tol: float = 1e-8, comm_tol: float = 1e-8, slack: float = 1e-10) -> List[str]:
        violations = []
        if self.S_fine < self.S_coarse - slack:
            violations.append("fine observable has lower entropy than the coarse one")
        if self.EC_fine < self.EC_coarse - slack:
            violations.append("fine observable has lower coherence entropy than the coarse one")
        if self.decrease_fine < self.decrease_coarse - slack:
            violations.append("fine entropy decrease is smaller than the coarse one")
        if self.split_entropy_residual > tol:
            violations.append(f"entropy split off by {self.split_entropy_residual:.3e}")
        entropy_equal = abs(self.S_fine - self.S_coarse) <= tol
        if entropy_equal != (self.verdict == RefinementVerdict.EQUAL):
            violations.append("entropy equality does not match the refinement verdict")
        coherence_equal = abs(self.EC_fine - self.EC_coarse) <= tol
        if coherence_equal != (self.refined_compatibility_residual <= comm_tol):
            violations.append("coherence-entropy equality does not match the compatibility criterion")
        decrease_equal = abs(self.decrease_fine - self.decrease_coarse) <= tol
        if decrease_equal != self.decrease_equality_predicted:
            violations.append("entropy-decrease equality does not match the component criterion")
        return violations


def _weighted_component_entropy(A: SpectralForm, indices: Sequence[int], probs: np.ndarray, r: np.ndarray,
                                rank_tol: float) -> Tuple[float, Dict[int, float]]:
    entropies = {}
    for i in indices:
        P = A.projectors[i].matrix
        entropies[i] = _matrix_entropy(P @ r @ P / probs[i], rank_tol)
    return float(sum(probs[i] * entropies[i] for i in indices)), entropies


def refinement_entropy_report(A_fine: SpectralForm, A_coarse: SpectralForm, rho: DensityOperator,
                              tolerances: Tolerances = DEFAULT_TOLERANCES) -> RefinementEntropyReport:
    """Entropy, coherence entropy and entropy decrease of a refinement pair"""
    relation = refinement_relation(A_fine, A_coarse, rho, tolerances)
    if relation.verdict == RefinementVerdict.NOT_COMPARABLE:
        raise PreconditionError(f"not a refinement in relation to the state: {relation.reason}",
                                residual=relation.decomposition_residual)
    r = as_matrix(rho)
    fine_det, fine_probs = detectable_indices(A_fine, r, tolerances.detect_tol, tolerances.certainty_tol)
    coarse_det, coarse_probs = detectable_indices(A_coarse, r, tolerances.detect_tol, tolerances.certainty_tol)

    fine_ledger = entropy_balance(A_fine, r, tolerances)
    coarse_ledger = entropy_balance(A_coarse, r, tolerances)

    # conditional Shannon terms sum_m p_m H(p_{m,i'} / p_m)
    conditional = 0.0
    for i, members in zip(relation.coarse_indices, relation.detectable_mapping):
        conditional += coarse_probs[i] * _shannon(fine_probs[list(members)] / coarse_probs[i])

    _, fine_entropies = _weighted_component_entropy(A_fine, fine_det, fine_probs, r, tolerances.rank_tol)
    _, coarse_entropies = _weighted_component_entropy(A_coarse, coarse_det, coarse_probs, r, tolerances.rank_tol)
    decrease_equal = all(
        abs(fine_entropies[j] - coarse_entropies[i]) <= tolerances.identity_tol
        for i, members in zip(relation.coarse_indices, relation.detectable_mapping)
        for j in members
    )

    coarse_luders = luders_matrix(r, [A_coarse.projectors[i] for i in coarse_det])
    fine_detectable = A_fine.restrict(fine_det).to_matrix()
    compat = commutator_norm(fine_detectable, coarse_luders)

    return RefinementEntropyReport(
        S_fine=fine_ledger.observable_entropy,
        S_coarse=coarse_ledger.observable_entropy,
        EC_fine=fine_ledger.coherence_entropy,
        EC_coarse=coarse_ledger.coherence_entropy,
        decrease_fine=fine_ledger.residual,
        decrease_coarse=coarse_ledger.residual,
        refined_compatibility_residual=compat,
        conditional_split_entropy=conditional,
        split_entropy_residual=abs(fine_ledger.observable_entropy - coarse_ledger.observable_entropy - conditional),
        decrease_equality_predicted=decrease_equal,
        verdict=relation.verdict,
    )


# ---------------------------------------------------------------------------
# Completeness
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RangeReducee:
    """Restriction of A to the range of rho"""

    eigenvalues: Tuple[float, ...]
    ranks: Tuple[int, ...]
    commuting: bool
    matches_detectable: bool

    @property
    def nondegenerate(self) -> bool:
        return all(rank == 1 for rank in self.ranks)


def range_reducee(A: SpectralForm, rho: DensityOperator,
                  tolerances: Tolerances = DEFAULT_TOLERANCES) -> RangeReducee:
    """Eigenvalues of Q A Q on range(Q); for [A, rho] = 0 they are the detectable eigenvalues"""
    r = as_matrix(rho)
    values, vectors = sla.eigh(r)
    V = vectors[:, values > tolerances.rank_tol]
    full = A.to_matrix()
    reduced = spectral_decompose(V.conj().T @ full @ V, tolerances=tolerances)
    commuting = commutator_norm(full, r) <= tolerances.comm_tol(spectral_norm(r))

    indices, _ = detectable_indices(A, r, tolerances.detect_tol, require_discrete=False)
    detectable = np.sort([A.branches[i].eigenvalue for i in indices])
    found = np.sort(reduced.eigenvalues)
    scale = max(1.0, float(np.max(np.abs(found))) if found.size else 1.0)
    matches = detectable.size == found.size and bool(
        np.all(np.abs(detectable - found) <= tolerances.refinement_tol * scale))
    return RangeReducee(tuple(float(v) for v in reduced.eigenvalues),
                        tuple(P.rank for P in reduced.projectors), commuting, matches)


@dataclass(frozen=True)
class CompletenessReport:
    complete: bool
    second_eigenvalues: Tuple[float, ...]
    commuting: bool
    range_ranks: Optional[Tuple[int, ...]] = None
    reducee_nondegenerate: Optional[bool] = None

    @property
    def consistent(self) -> bool:
        """Range criteria agree with the component-purity criterion whenever they apply"""
        if not self.commuting:
            return True
        return (all(rank == 1 for rank in self.range_ranks) == self.complete
                and self.reducee_nondegenerate == self.complete)


def completeness_report(A: SpectralForm, rho: DensityOperator,
                        tolerances: Tolerances = DEFAULT_TOLERANCES) -> CompletenessReport:
    """Purity of every normalized detectable component P_i rho P_i / p_i"""
    r = as_matrix(rho)
    indices, probs = detectable_indices(A, r, tolerances.detect_tol, tolerances.certainty_tol)
    seconds = []
    for i in indices:
        P = A.projectors[i].matrix
        eigs = sla.eigvalsh(P @ r @ P / probs[i])
        seconds.append(float(eigs[-2]) if eigs.size > 1 else 0.0)
    complete = all(s <= tolerances.purity_tol for s in seconds)

    commuting = commutator_norm(A.to_matrix(), r) <= tolerances.comm_tol(spectral_norm(r))
    if not commuting:
        return CompletenessReport(complete, tuple(seconds), False)
    Q = range_projector(r, tolerances.rank_tol).matrix
    ranks = tuple(int(round(float(np.real(np.trace(A.projectors[i].matrix @ Q))))) for i in indices)
    reducee = range_reducee(A, rho, tolerances)
    return CompletenessReport(complete, tuple(seconds), True, ranks, reducee.nondegenerate)


def is_complete(A: SpectralForm, rho: DensityOperator,
                tolerances: Tolerances = DEFAULT_TOLERANCES) -> bool:
    """True iff A admits no nontrivial refinement in relation to rho"""
    return completeness_report(A, rho, tolerances).complete


# ---------------------------------------------------------------------------
# Analyzer
# ---------------------------------------------------------------------------

class RelationAnalyzer:
    """Classify one observable in relation to one state"""

    def __init__(self, observable: SpectralForm, state: DensityOperator,
                 tolerances: Tolerances = DEFAULT_TOLERANCES):
        self.observable = observable
        self.state = state
        self.tolerances = tolerances
        self.results: Dict[str, Any] = {}
        self.errors: List[str] = []
        self.warnings: List[str] = []

    def analyze(self) -> Dict[str, Any]:
        split = detectable_split(self.observable, self.state, tolerances=self.tolerances)
        self.results['split'] = split
        if not split.certainty.certain:
            self.errors.append(f"❌ Observable is not discrete in relation to the state "
                               f"(deficit {split.certainty.deficit:.3e})")
            return self.results
        if not split.certainty.consistent:
            self.warnings.append("⚠ Certainty criteria disagree; tolerances may be too tight")

        ledger = entropy_balance(self.observable, self.state, self.tolerances)
        self.results['ledger'] = ledger
        self.warnings.extend(ledger.warnings)
        for violation in ledger.check_invariants(self.tolerances.identity_tol):
            self.warnings.append(f"⚠ Ledger: {violation}")

        decomposition = weak_strong_decompose(self.observable, self.state, tolerances=self.tolerances)
        self.results['decomposition'] = decomposition
        self.results['weak_sides'] = weak_coherence_sides(self.observable, self.state, self.tolerances,
                                                          decomposition)
        self.results['completeness'] = completeness_report(self.observable, self.state, self.tolerances)
        return self.results

    def to_dict(self, scale: float = 1.0) -> Dict[str, Any]:
        out: Dict[str, Any] = {'errors': list(self.errors), 'warnings': list(self.warnings)}
        split = self.results.get('split')
        if split is not None:
            out['detectable_eigenvalues'] = split.detectable_eigenvalues
            out['undetectable_eigenvalues'] = split.undetectable_eigenvalues
            out['detectable_probabilities'] = [b.probability for b in split.detectable]
        if 'ledger' in self.results:
            out['ledger'] = self.results['ledger'].to_dict(scale)
        if 'decomposition' in self.results:
            d = self.results['decomposition']
            out['regime'] = d.regime.value
            out['weak_probability'] = d.weak_probability
            out['weak_eigenvalues'] = [b.eigenvalue for b in d.weak_branches]
            out['strong_eigenvalues'] = [b.eigenvalue for b in d.strong_branches]
            sides = self.results['weak_sides']
            out['weak_coherence_sides'] = [sides.lhs * scale, sides.rhs * scale]
        if 'completeness' in self.results:
            out['complete'] = self.results['completeness'].complete
        return out

    def get_analysis_summary(self, scale: float = 1.0, unit: str = "nat") -> str:
        summary = ["=== OBSERVABLE / STATE ANALYSIS ===\n"]
        split = self.results.get('split')
        if split is not None:
            summary.append(f"Detectable eigenvalues: {', '.join(f'{a:.6g}' for a in split.detectable_eigenvalues)}")
            if split.undetectable:
                summary.append(f"Undetectable eigenvalues: "
                               f"{', '.join(f'{a:.6g}' for a in split.undetectable_eigenvalues)}")
            summary.append(f"Detectable probability: {split.total_probability:.12f}")
        if 'ledger' in self.results:
            summary.append("\nEntropy levels:")
            summary.append(self.results['ledger'].diagram(scale=scale, unit=unit))
        if 'decomposition' in self.results:
            d = self.results['decomposition']
            sides = self.results['weak_sides']
            summary.append(f"\nRegime: {d.regime.value} (weak probability {d.weak_probability:.6f})")
            summary.append(f"  Weak branches: {len(d.weak_branches)}, strong branches: {len(d.strong_branches)}")
            summary.append(f"  E_C = {sides.lhs * scale:.6f} {unit}, p_w E_C(A_w, rho_w) = {sides.rhs * scale:.6f} {unit}")
        if 'completeness' in self.results:
            c = self.results['completeness']
            summary.append(f"\nComplete in relation to the state: {'yes' if c.complete else 'no'}")
        for warning in self.warnings:
            summary.append(warning)
        for error in self.errors:
            summary.append(error)
        return "\n".join(summary)
