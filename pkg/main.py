"""
Main Entry Point
Command-line interface for the twin-observable analysis toolkit

Usage:
    python main.py analyze --state rho.json --observable A.json [--side 1]
    python main.py pto verify --state rho.json --a1 A1.json --a2 A2.json
    python main.py pto construct --state phi.json [--out-a1 A1.json --out-a2 A2.json]
    python main.py discord --state rho.json --a1 A1.json --a2 A2.json
    python main.py selftest --seed 7 --trials 100 [--max-dim 8]

Exit codes: 0 success, 1 a check or identity failed (or a numerical failure), 2 invalid input.
"""

import argparse
import json
import sys
import traceback
from typing import Any, Dict, Optional, Sequence

import numpy as np

from config import DEFAULT_TOLERANCES, SelftestConfig, Tolerances, resolve_seed
from entropy_analysis import LN2
from observable_relation import RelationAnalyzer
from operator_core import DensityOperator, NumericalError, TwinObsError
from selftest_app import SelftestWorkflow
from state_io import StateFile, load_state_file, save_state_file
from twin_observables import TwinAnalyzer, construct_pto_pure

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INPUT = 2

BANNER = """
    ╔═══════════════════════════════════════════════════════════════════╗
    ║                                                                   ║
    ║         TWIN OBSERVABLE ANALYSIS TOOLKIT                          ║
    ║                                                                   ║
    ║  • Coherence entropy and entropy balance of observables           ║
    ║  • Weak / strong decomposition, refinement, completeness          ║
    ║  • Physical twin observables and the discord ledger               ║
    ║  • Seeded self-test of every identity                             ║
    ║                                                                   ║
    ╚═══════════════════════════════════════════════════════════════════╝
"""


def _units(args: argparse.Namespace):
    """Display scale and unit name for --log-base"""
    return (1.0 / LN2, "bit") if args.log_base == "bits" else (1.0, "nat")


def _tolerances(args: argparse.Namespace) -> Tolerances:
    return DEFAULT_TOLERANCES.with_comparison_tol(args.tol)


def _emit(args: argparse.Namespace, payload: Dict[str, Any], text: str) -> None:
    if args.format == "json":
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text)


def _load_state(path: str, tolerances: Tolerances) -> DensityOperator:
    return load_state_file(path).to_density(tolerances)


def command_analyze(args: argparse.Namespace) -> int:
    tolerances = _tolerances(args)
    state = _load_state(args.state, tolerances)
    observable = load_state_file(args.observable).to_observable(tolerances)
    if args.side is not None:
        observable = observable.embed(args.side, state.require_dims())

    analyzer = RelationAnalyzer(observable, state, tolerances)
    analyzer.analyze()
    scale, unit = _units(args)
    _emit(args, analyzer.to_dict(scale), analyzer.get_analysis_summary(scale, unit))
    return EXIT_FAILED if analyzer.errors else EXIT_OK


def command_pto_verify(args: argparse.Namespace) -> int:
    tolerances = _tolerances(args)
    state = _load_state(args.state, tolerances)
    analyzer = TwinAnalyzer(load_state_file(args.a1).to_observable(tolerances),
                            load_state_file(args.a2).to_observable(tolerances),
                            state, tolerances)
    report = analyzer.verify()
    _emit(args, report.to_dict(), analyzer.get_pto_summary())
    return EXIT_OK if report.is_pto and not analyzer.errors else EXIT_FAILED


def command_pto_construct(args: argparse.Namespace) -> int:
    tolerances = _tolerances(args)
    state_file = load_state_file(args.state)
    if state_file.bipartite_dims is None:
        raise TwinObsError("twin construction needs a state file with two subsystem dims")
    phi = state_file.to_vector()
    dims = state_file.bipartite_dims
    A1, A2 = construct_pto_pure(phi, dims)

    written = []
    for A, side, path in ((A1, 1, args.out_a1), (A2, 2, args.out_a2)):
        if path:
            save_state_file(StateFile.from_observable(A, meta={"side": side, "source": args.state}), path)
            written.append(path)

    analyzer = TwinAnalyzer(A1, A2, DensityOperator.from_vector(phi, dims, tolerances), tolerances)
    report = analyzer.verify()
    payload = {
        "A1": [{"eigenvalue": b.eigenvalue, "rank": b.projector.rank} for b in A1.branches],
        "A2": [{"eigenvalue": b.eigenvalue, "rank": b.projector.rank} for b in A2.branches],
        "pto": report.to_dict(),
        "written": written,
    }
    lines = ["=== CONSTRUCTED TWINS ===\n"]
    for name, A in (("A1", A1), ("A2", A2)):
        lines.append(f"{name}: " + ", ".join(f"{b.eigenvalue:g} (rank {b.projector.rank})" for b in A.branches))
    lines.append("")
    lines.append(analyzer.get_pto_summary())
    for path in written:
        lines.append(f"✓ Wrote {path}")
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK if report.is_pto else EXIT_FAILED


def command_discord(args: argparse.Namespace) -> int:
    tolerances = _tolerances(args)
    state = _load_state(args.state, tolerances)
    analyzer = TwinAnalyzer(load_state_file(args.a1).to_observable(tolerances),
                            load_state_file(args.a2).to_observable(tolerances),
                            state, tolerances)
    analyzer.analyze()
    scale, unit = _units(args)
    _emit(args, analyzer.to_dict(scale), analyzer.get_discord_summary(scale, unit))
    return EXIT_FAILED if analyzer.errors else EXIT_OK


def command_selftest(args: argparse.Namespace) -> int:
    config = SelftestConfig(
        seed=resolve_seed(args.seed),
        trials=args.trials,
        max_dim=args.max_dim,
        workers=args.workers,
        tolerances=_tolerances(args),
    )
    final_state = SelftestWorkflow(verbose=args.format == "text").run(config)
    report = final_state['report']
    if args.format == "json":
        print(json.dumps(report.to_dict(), indent=2, sort_keys=True))
    else:
        print()
        print(report.to_frame().to_string(index=False))
    return EXIT_OK if report.passed else EXIT_FAILED


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None,
                        help="Comparison tolerance for identities and certainty (default 1e-8).")
    common.add_argument("--format", choices=["text", "json"], default="text", help="Output format.")
    common.add_argument("--log-base", choices=["nat", "bits"], default="nat",
                        help="Display entropies in nats or bits.")

    parser = argparse.ArgumentParser(prog="twinobs", description="Twin observable analysis toolkit.")
    subparsers = parser.add_subparsers(dest="command", required=True)

    analyze = subparsers.add_parser("analyze", parents=[common],
                                    help="Entropy ledger, weak/strong split and completeness.")
    analyze.add_argument("--state", required=True, help="Density or pure state file.")
    analyze.add_argument("--observable", required=True, help="Observable file.")
    analyze.add_argument("--side", type=int, choices=[1, 2], default=None,
                         help="Apply a subsystem observable to side 1 or 2 of a bipartite state.")
    analyze.set_defaults(func=command_analyze)

    pto = subparsers.add_parser("pto", help="Physical twin observables.")
    pto_sub = pto.add_subparsers(dest="pto_command", required=True)
    verify = pto_sub.add_parser("verify", parents=[common], help="Check a pair of subsystem observables.")
    verify.add_argument("--state", required=True)
    verify.add_argument("--a1", required=True, help="Side-1 observable file.")
    verify.add_argument("--a2", required=True, help="Side-2 observable file.")
    verify.set_defaults(func=command_pto_verify)
    construct = pto_sub.add_parser("construct", parents=[common], help="Build twins from a pure state.")
    construct.add_argument("--state", required=True, help="Pure bipartite state file.")
    construct.add_argument("--out-a1", default=None)
    construct.add_argument("--out-a2", default=None)
    construct.set_defaults(func=command_pto_construct)

    discord = subparsers.add_parser("discord", parents=[common], help="Mutual information ledger.")
    discord.add_argument("--state", required=True)
    discord.add_argument("--a1", required=True)
    discord.add_argument("--a2", required=True)
    discord.set_defaults(func=command_discord)

    selftest = subparsers.add_parser("selftest", parents=[common], help="Seeded self-test of every identity.")
    selftest.add_argument("--seed", type=int, default=None, help="Global seed (TWINOBS_SEED overrides).")
    selftest.add_argument("--trials", type=int, default=100)
    selftest.add_argument("--max-dim", type=int, default=8)
    selftest.add_argument("--workers", type=int, default=1)
    selftest.set_defaults(func=command_selftest)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main execution function"""
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.format == "text":
        print(BANNER)
    try:
        return args.func(args)
    except (NumericalError, np.linalg.LinAlgError) as e:
        print(f"❌ Numerical failure: {str(e)}", file=sys.stderr)
        return EXIT_FAILED
    except (TwinObsError, ValueError) as e:
        print(f"❌ Error: {str(e)}", file=sys.stderr)
        return EXIT_INPUT
    except Exception as e:
        print(f"❌ Unexpected error: {type(e).__name__}: {str(e)}", file=sys.stderr)
        traceback.print_exc()
        return EXIT_FAILED


if __name__ == "__main__":
    exit_code = main()
    sys.exit(exit_code)
