"""
Self-Test Application
LangGraph workflow that re-derives every entropy and information identity on
seeded random and constructed instances:
- certainty and detectability properties of projectors
- entropy sandwich and entropy balance
- weak-component coherence and refinement monotonicity
- twin observables, information splits, biorthogonal mixing and discord
Per-trial seeds come from (seed, trial, check), so serial and threaded runs agree.
"""

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, NamedTuple, Optional, Tuple, TypedDict, Union

import numpy as np
import pandas as pd
from langgraph.graph import END, StateGraph

from config import DEFAULT_SEED, DEFAULT_TOLERANCES, SelftestConfig, Tolerances
from entropy_analysis import (
    LN2,
    _matrix_entropy,
    coherence_entropy,
    entropy_balance,
    sandwich_equalities,
)
from instance_generator import (
    biorthogonal_mixture,
    bell_instance,
    coherent_refinement_instance,
    compatible_refinement_instance,
    intermediary_instance,
    make_rng,
    padded_twin_instance,
    pure_twin_instance,
    random_certainty_pair,
    random_nonsingular_pair,
    random_observable,
    random_observable_instance,
    refinement_chain,
    schmidt_ensemble_instance,
)
from observable_relation import (
    Regime,
    detectable_split,
    refinement_entropy_report,
    weak_coherence_sides,
    weak_strong_decompose,
)
from operator_core import is_certain_event, partial_trace
from twin_observables import (
    biorthogonal_mixture_info,
    correlations_incompatibility,
    discord_decomposition,
    joint_measurement_distribution,
    schmidt_decompose,
    side_terms,
    verify_pto,
    verify_pto_components,
)

MISMATCH = 1.0


# ---------------------------------------------------------------------------
# Report types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TheoremRecord:
    name: str
    instances_run: int
    max_residual: float
    tolerance: float
    errors: Tuple[str, ...] = ()

    @property
    def passed(self) -> bool:
        return bool(self.max_residual <= self.tolerance)


@dataclass(frozen=True)
class TheoremReport:
    records: Tuple[TheoremRecord, ...]
    seed: int
    trials: int
    max_dim: int
    wall_time: float = 0.0

    @property
    def passed(self) -> bool:
        return all(record.passed for record in self.records)

    def record(self, name: str) -> TheoremRecord:
        for item in self.records:
            if item.name == name:
                return item
        raise KeyError(name)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            [{
                "check": r.name,
                "instances": r.instances_run,
                "max_residual": r.max_residual,
                "tolerance": r.tolerance,
                "pass": r.passed,
            } for r in self.records],
            columns=["check", "instances", "max_residual", "tolerance", "pass"],
        )

    def to_dict(self) -> Dict[str, Any]:
        def finite(value: float):
            return float(value) if np.isfinite(value) else None

        return {
            "seed": self.seed,
            "trials": self.trials,
            "max_dim": self.max_dim,
            "wall_time": self.wall_time,
            "passed": self.passed,
            "records": [{
                "name": r.name,
                "instances_run": r.instances_run,
                "max_residual": finite(r.max_residual),
                "tolerance": r.tolerance,
                "pass": r.passed,
                "errors": list(r.errors),
            } for r in self.records],
        }

    def get_report_summary(self) -> str:
        summary = ["=== SELF-TEST REPORT ===\n"]
        summary.append(f"Seed: {self.seed}, trials: {self.trials}, max dim: {self.max_dim}")
        summary.append(f"Wall time: {self.wall_time:.2f} s\n")
        for r in self.records:
            mark = "✓" if r.passed else "❌"
            summary.append(f"{mark} {r.name:<28} {r.instances_run:>6} instances  "
                           f"max residual {r.max_residual:.3e}  (tol {r.tolerance:.0e})")
            for error in r.errors[:3]:
                summary.append(f"    ⚠ {error}")
            if len(r.errors) > 3:
                summary.append(f"    ⚠ ... {len(r.errors) - 3} more")
        passed = sum(r.passed for r in self.records)
        summary.append(f"\n{passed}/{len(self.records)} checks passed")
        return "\n".join(summary)


# ---------------------------------------------------------------------------
# Checks: each takes a trial generator and returns one residual per instance;
# twin-family checks also return the instances that raised
# ---------------------------------------------------------------------------

def _dim(rng: np.random.Generator, max_dim: int, low: int = 2) -> int:
    return int(rng.integers(low, max(low, max_dim) + 1))


def check_certainty_equivalence(rng, trial: int, max_dim: int, tol: Tolerances) -> List[float]:
    pair = random_certainty_pair(rng, _dim(rng, max_dim))
    report = is_certain_event(pair.projector, pair.state, tol.certainty_tol, tol.rank_tol)
    if not report.consistent or report.certain != pair.certain:
        return [MISMATCH]
    return [abs(report.deficit) if pair.certain else 0.0]


def check_nonsingular_detectability(rng, trial: int, max_dim: int, tol: Tolerances) -> List[float]:
    dim = _dim(rng, max_dim)
    P, state = random_nonsingular_pair(rng, dim)
    probability = float(np.real(np.trace(P.matrix @ state.matrix)))
    observable = random_observable(dim, rng, int(rng.integers(1, dim + 1)))
    split = detectable_split(observable, state, tolerances=tol)
    finer = detectable_split(observable, state, detect_tol=tol.detect_tol / 10, tolerances=tol)
    stable = split.detectable_eigenvalues == finer.detectable_eigenvalues
    ok = probability > tol.detect_tol and not split.undetectable and stable
    return [0.0 if ok else MISMATCH]


def check_entropy_sandwich(rng, trial: int, max_dim: int, tol: Tolerances) -> List[float]:
    A, state = random_observable_instance(rng, _dim(rng, max_dim))
    ledger = entropy_balance(A, state, tol)
    if not sandwich_equalities(A, state, tol.identity_tol, tol).consistent:
        return [MISMATCH]
    return [max(0.0, -ledger.coherence_entropy, -ledger.residual,
                ledger.avg_component_entropy - ledger.state_entropy)]


def check_entropy_balance(rng, trial: int, max_dim: int, tol: Tolerances) -> List[float]:
    A, state = random_observable_instance(rng, _dim(rng, max_dim))
    ledger = entropy_balance(A, state, tol)
    return [max(ledger.balance_residual, abs(ledger.mixing_residual))]


def check_weak_component_coherence(rng, trial: int, max_dim: int, tol: Tolerances) -> List[float]:
    residuals = []
    A, state = random_observable_instance(rng, _dim(rng, max_dim))
    residuals.append(weak_coherence_sides(A, state, tol).gap)

    weak_dim = int(rng.integers(2, max(2, max_dim - 1) + 1))
    strong_dim = int(rng.integers(1, max(1, max_dim - weak_dim) + 1))
    A, state = intermediary_instance(rng, weak_dim, strong_dim)
    decomposition = weak_strong_decompose(A, state, tolerances=tol)
    if decomposition.regime != Regime.INTERMEDIARY or decomposition.check_invariants(state):
        residuals.append(MISMATCH)
    else:
        residuals.append(weak_coherence_sides(A, state, tol, decomposition).gap)
    return residuals


def _refinement_residual(fine, coarse, state, tol: Tolerances) -> float:
    report = refinement_entropy_report(fine, coarse, state, tol)
    if report.check_invariants(tol.identity_tol):
        return MISMATCH
    return report.split_entropy_residual


def check_refinement_monotonicity(rng, trial: int, max_dim: int, tol: Tolerances) -> List[float]:
    state, observables = refinement_chain(rng, _dim(rng, max_dim), depth=3)
    residuals = [_refinement_residual(fine, coarse, state, tol)
                 for fine, coarse in zip(observables, observables[1:])]
    if trial == 0:
        state, (fine, coarse) = compatible_refinement_instance()
        report = refinement_entropy_report(fine, coarse, state, tol)
        strict = report.S_fine - report.S_coarse > tol.identity_tol
        constant = abs(report.EC_fine - report.EC_coarse) <= tol.identity_tol
        residuals.append(report.split_entropy_residual if strict and constant else MISMATCH)

        state, (fine, coarse) = coherent_refinement_instance()
        report = refinement_entropy_report(fine, coarse, state, tol)
        grows = report.EC_fine - report.EC_coarse > tol.identity_tol
        residuals.append(report.split_entropy_residual if grows else MISMATCH)
    return residuals


def check_pure_twin_coherence(rng, trial: int, max_dim: int, tol: Tolerances) -> List[float]:
    d1, d2 = _dim(rng, min(max_dim, 6)), _dim(rng, min(max_dim, 6))
    instance = pure_twin_instance(rng, d1, d2)
    phi = instance.components[0]
    if schmidt_decompose(phi, (d1, d2)).check_invariants(phi):
        return [MISMATCH]
    ec = coherence_entropy(instance.A1.embed(1, (d1, d2)), instance.state, tol)
    return [abs(ec - _matrix_entropy(partial_trace(instance.state, 1).matrix, tol.rank_tol))]


class TrialResult(NamedTuple):
    """Residuals of one trial plus the instances that raised"""
    residuals: List[float]
    errors: List[str]


def _twin_family(rng, max_dim: int) -> List[Tuple[str, Callable[[], Any]]]:
    """Builders for pure, padded, Schmidt-ensemble and locally rotated Schmidt-ensemble twins"""
    d1, d2 = _dim(rng, max_dim), _dim(rng, max_dim)
    p1, p2 = _dim(rng, max_dim - 1, 1), _dim(rng, max_dim - 1, 1)
    levels = _dim(rng, min(max_dim, 4))
    dims = (_dim(rng, max_dim, levels), _dim(rng, max_dim, levels))
    count, rotated_count = (int(c) for c in rng.integers(1, 4, size=2))
    seeds = [int(s) for s in rng.integers(0, 2 ** 32, size=4)]
    return [
        ("pure", lambda: pure_twin_instance(seeds[0], d1, d2)),
        ("padded", lambda: padded_twin_instance(seeds[1], p1, p2)),
        ("ensemble", lambda: schmidt_ensemble_instance(seeds[2], levels, count, dims)),
        ("rotated ensemble", lambda: schmidt_ensemble_instance(seeds[3], levels, rotated_count, dims, rotate=True)),
    ]


def _over_twin_family(rng, max_dim: int, measure: Callable[[Any], List[float]]) -> TrialResult:
    result = TrialResult([], [])
    for label, build in _twin_family(rng, max_dim):
        try:
            result.residuals.extend(measure(build()))
        except Exception as exc:
            result.residuals.append(float("inf"))
            result.errors.append(f"{label} instance: {type(exc).__name__}: {exc}")
    return result


def check_twin_compatibility(rng, trial: int, max_dim: int, tol: Tolerances) -> TrialResult:
    def measure(instance) -> List[float]:
        report = verify_pto(instance.A1, instance.A2, instance.state, tolerances=tol)
        if not report.is_pto:
            return [MISMATCH]
        dims = instance.state.require_dims()
        components = verify_pto_components(instance.A1, instance.A2, instance.components, dims, tolerances=tol)
        return [max(report.derived_compatibility), 0.0 if all(c.is_pto for c in components) else MISMATCH]

    return _over_twin_family(rng, max_dim, measure)


def check_twin_information_split(rng, trial: int, max_dim: int, tol: Tolerances) -> TrialResult:
    def measure(instance) -> List[float]:
        ledger = discord_decomposition(instance.state, instance.A1, instance.A2, tolerances=tol)
        if ledger.twin_split_residual is None:
            return [MISMATCH]
        return [max(ledger.twin_split_residual, ledger.side_symmetry_residual)]

    return _over_twin_family(rng, max_dim, measure)


def check_coherence_information_split(rng, trial: int, max_dim: int, tol: Tolerances) -> TrialResult:
    def measure(instance) -> List[float]:
        residuals = []
        for side, A in ((1, instance.A1), (2, instance.A2)):
            if not correlations_incompatibility(A, instance.state, side, tolerances=tol):
                continue
            terms = side_terms(A, instance.state, side, tol)
            info = _matrix_entropy(partial_trace(instance.state, 1).matrix, tol.rank_tol) \
                + _matrix_entropy(partial_trace(instance.state, 2).matrix, tol.rank_tol) \
                - _matrix_entropy(instance.state.matrix, tol.rank_tol)
            residuals.append(abs(info - (terms.coherence_entropy + terms.luders_info)))
        return residuals

    return _over_twin_family(rng, max_dim, measure)


def check_biorthogonal_mixing(rng, trial: int, max_dim: int, tol: Tolerances) -> List[float]:
    d1, d2 = _dim(rng, max_dim), _dim(rng, max_dim)
    count = int(rng.integers(1, min(d1, d2, 4) + 1))
    mixture = biorthogonal_mixture(rng, d1, d2, count)
    return [biorthogonal_mixture_info(mixture.components, mixture.P1_set, mixture.Q2_set, tolerances=tol).gap]


def _ensemble(rng, max_dim: int):
    levels = _dim(rng, min(max_dim, 4))
    return schmidt_ensemble_instance(rng, levels, int(rng.integers(1, 4)), rotate=bool(rng.random() < 0.5))


def check_complete_twin_discord(rng, trial: int, max_dim: int, tol: Tolerances) -> List[float]:
    instance = _ensemble(rng, max_dim)
    ledger = discord_decomposition(instance.state, instance.A1, instance.A2, tolerances=tol)
    if ledger.discord is None:
        return [MISMATCH]
    return [max(abs(ledger.residual_info), abs(ledger.discord - ledger.coherence_entropy),
                abs(ledger.i_qcl - ledger.observable_entropy))]


def check_joint_distribution_collapse(rng, trial: int, max_dim: int, tol: Tolerances) -> List[float]:
    instance = _ensemble(rng, max_dim)
    joint = joint_measurement_distribution(instance.A1, instance.A2, instance.state, tol)
    ledger = discord_decomposition(instance.state, instance.A1, instance.A2, tolerances=tol)
    if ledger.collapse_residual is None or joint.check_invariants():
        return [MISMATCH]
    off_diagonal = float(joint.matrix.sum() - np.trace(joint.matrix))
    return [max(off_diagonal, ledger.collapse_residual)]


def check_bell_golden(rng, trial: int, max_dim: int, tol: Tolerances) -> List[float]:
    if trial != 0:
        return []
    state, A1, A2, _ = bell_instance()
    ledger = discord_decomposition(state, A1, A2, tolerances=tol)
    if ledger.discord is None:
        return [MISMATCH]
    return [max(abs(ledger.mutual_information - 2 * LN2), abs(ledger.observable_entropy - LN2),
                abs(ledger.coherence_entropy - LN2), abs(ledger.residual_info), abs(ledger.discord - LN2))]


CheckFn = Callable[[np.random.Generator, int, int, Tolerances], Union[List[float], TrialResult]]

CHECKS: Dict[str, CheckFn] = {
    "certainty_equivalence": check_certainty_equivalence,
    "nonsingular_detectability": check_nonsingular_detectability,
    "entropy_sandwich": check_entropy_sandwich,
    "entropy_balance": check_entropy_balance,
    "weak_component_coherence": check_weak_component_coherence,
    "refinement_monotonicity": check_refinement_monotonicity,
    "pure_twin_coherence": check_pure_twin_coherence,
    "twin_compatibility": check_twin_compatibility,
    "twin_information_split": check_twin_information_split,
    "coherence_information_split": check_coherence_information_split,
    "biorthogonal_mixing": check_biorthogonal_mixing,
    "complete_twin_discord": check_complete_twin_discord,
    "joint_distribution_collapse": check_joint_distribution_collapse,
    "bell_golden": check_bell_golden,
}
CHECK_KEYS = {name: k for k, name in enumerate(CHECKS)}
GOLDEN_TOLERANCE = 1e-9


def check_tolerance(name: str, tolerances: Tolerances) -> float:
    return GOLDEN_TOLERANCE if name == "bell_golden" else tolerances.identity_tol


def run_check(name: str, trial: int, config: SelftestConfig) -> Tuple[List[float], List[str]]:
    """One trial of one check; exceptions become an infinite residual and an error line"""
    rng = make_rng(config.seed, trial, CHECK_KEYS[name])
    try:
        outcome = CHECKS[name](rng, trial, config.max_dim, config.tolerances)
    except Exception as exc:
        return [float("inf")], [f"trial {trial}: {type(exc).__name__}: {exc}"]
    if isinstance(outcome, TrialResult):
        return list(outcome.residuals), [f"trial {trial}: {error}" for error in outcome.errors]
    return list(outcome), []


def evaluate_check(name: str, config: SelftestConfig) -> TheoremRecord:
    trials = range(config.trials)
    if config.workers > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            outcomes = list(pool.map(lambda t: run_check(name, t, config), trials))
    else:
        outcomes = [run_check(name, t, config) for t in trials]
    residuals = [r for values, _ in outcomes for r in values]
    errors = tuple(e for _, errs in outcomes for e in errs)
    return TheoremRecord(
        name=name,
        instances_run=len(residuals),
        max_residual=float(max(residuals, default=0.0)),
        tolerance=check_tolerance(name, config.tolerances),
        errors=errors,
    )


# ---------------------------------------------------------------------------
# Workflow
# ---------------------------------------------------------------------------

class SelftestState(TypedDict):
    """State that flows through the self-test workflow"""
    config: SelftestConfig
    records: Dict[str, TheoremRecord]
    report: Optional[TheoremReport]
    started: float

    status: str
    errors: List[str]
    logs: List[str]


NODE_CHECKS = [
    ("certainty", "CERTAINTY AND DETECTABILITY", ["certainty_equivalence", "nonsingular_detectability"]),
    ("entropy", "ENTROPY SANDWICH AND BALANCE", ["entropy_sandwich", "entropy_balance"]),
    ("relations", "WEAK COMPONENTS AND REFINEMENTS", ["weak_component_coherence", "refinement_monotonicity"]),
    ("twins", "TWIN OBSERVABLES", ["pure_twin_coherence", "twin_compatibility",
                                   "twin_information_split", "coherence_information_split"]),
    ("mixtures", "BIORTHOGONAL MIXTURES", ["biorthogonal_mixing"]),
    ("discord", "DISCORD AND JOINT STATISTICS", ["complete_twin_discord", "joint_distribution_collapse",
                                                 "bell_golden"]),
]


class SelftestWorkflow:
    """LangGraph workflow running every check family in sequence"""

    def __init__(self, verbose: bool = True):
        self.verbose = verbose
        self.graph = self._build_graph()

    def _say(self, message: str = "") -> None:
        if self.verbose:
            print(message)

    def _header(self, title: str) -> None:
        self._say("\n" + "=" * 70)
        self._say(title)
        self._say("=" * 70)

    def _check_node(self, number: int, title: str, names: List[str]):
        def node(state: SelftestState) -> SelftestState:
            self._header(f"NODE {number}: {title}")
            for name in names:
                try:
                    record = evaluate_check(name, state['config'])
                    state['records'][name] = record
                    mark = "✓" if record.passed else "❌"
                    self._say(f"{mark} {name}: {record.instances_run} instances, "
                              f"max residual {record.max_residual:.3e}")
                    state['logs'].append(f"{name}: {record.instances_run} instances")
                    for error in record.errors:
                        state['errors'].append(f"{name}: {error}")
                except Exception as e:
                    error_msg = f"Error in {name}: {str(e)}"
                    state['errors'].append(error_msg)
                    state['records'][name] = TheoremRecord(name, 0, float("inf"),
                                                           check_tolerance(name, state['config'].tolerances),
                                                           (error_msg,))
                    self._say(f"❌ {error_msg}")
            state['status'] = f'{title.lower()} checked'
            return state

        return node

    def prepare_node(self, state: SelftestState) -> SelftestState:
        """Node 0: log the run configuration"""
        config = state['config']
        self._header("NODE 0: PREPARING SELF-TEST")
        self._say(f"Seed {config.seed}, {config.trials} trials, dims up to {config.max_dim}, "
                  f"{config.workers} worker(s)")
        state['logs'].append(f"seed={config.seed} trials={config.trials} max_dim={config.max_dim}")
        state['started'] = time.perf_counter()
        state['status'] = 'prepared'
        return state

    def report_node(self, state: SelftestState) -> SelftestState:
        """Final node: assemble the report in check order"""
        config = state['config']
        records = tuple(state['records'][name] for name in CHECKS if name in state['records'])
        report = TheoremReport(records, config.seed, config.trials, config.max_dim,
                               time.perf_counter() - state['started'])
        state['report'] = report
        state['status'] = 'passed' if report.passed else 'failed'
        return state

    def _build_graph(self) -> StateGraph:
        """Build the LangGraph workflow"""
        workflow = StateGraph(SelftestState)

        workflow.add_node("prepare", self.prepare_node)
        for number, (key, title, names) in enumerate(NODE_CHECKS, start=1):
            workflow.add_node(f"check_{key}", self._check_node(number, title, names))
        workflow.add_node("report", self.report_node)

        workflow.set_entry_point("prepare")
        previous = "prepare"
        for key, _, _ in NODE_CHECKS:
            workflow.add_edge(previous, f"check_{key}")
            previous = f"check_{key}"
        workflow.add_edge(previous, "report")
        workflow.add_edge("report", END)

        return workflow.compile()

    def run(self, config: SelftestConfig) -> SelftestState:
        """Execute every check family and return the final state"""
        self._header("TWIN OBSERVABLE SELF-TEST")
        initial_state = SelftestState(
            config=config,
            records={},
            report=None,
            started=time.perf_counter(),
            status="initializing",
            errors=[],
            logs=[],
        )
        final_state = self.graph.invoke(initial_state)

        self._header("SELF-TEST SUMMARY")
        self._say(f"Status: {final_state['status']}")
        if final_state['report'] is not None:
            self._say(final_state['report'].get_report_summary())
        if final_state['errors']:
            self._say("\nErrors:")
            for error in final_state['errors'][:20]:
                self._say(f"  ❌ {error}")
        return final_state


def run_selftest(seed: int = DEFAULT_SEED, trials: int = 100, max_dim: int = 8,
                 tolerances: Tolerances = DEFAULT_TOLERANCES, workers: int = 1,
                 verbose: bool = False) -> TheoremReport:
    """Run the full self-test and return its report"""
    config = SelftestConfig(seed=seed, trials=trials, max_dim=max_dim, workers=workers, tolerances=tolerances)
    return SelftestWorkflow(verbose=verbose).run(config)['report']


if __name__ == "__main__":
    report = run_selftest(trials=5, verbose=True)
    print(report.to_frame().to_string(index=False))
