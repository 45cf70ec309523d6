"""
Tests for the self-test workflow: every check passes, runs are reproducible,
and failures are reported rather than raised
"""
import math

import pytest

import selftest_app
from config import DEFAULT_TOLERANCES, SelftestConfig
from selftest_app import (
    CHECKS,
    GOLDEN_TOLERANCE,
    MISMATCH,
    SelftestWorkflow,
    TheoremRecord,
    TheoremReport,
    evaluate_check,
    run_check,
    run_selftest,
)


@pytest.fixture(scope="module")
def small_report():
    return run_selftest(seed=7, trials=3, max_dim=3)


def test_all_checks_pass_on_small_run(small_report):
    print("\n[TEST 1] Small self-test run")
    print(small_report.get_report_summary())
    assert [r.name for r in small_report.records] == list(CHECKS)
    failing = [r.name for r in small_report.records if not r.passed]
    assert small_report.passed, f"Failing checks: {failing}"
    print("  ✓ PASS: every check within tolerance")


def test_every_check_ran_instances(small_report):
    for record in small_report.records:
        assert record.instances_run > 0, f"{record.name} produced no instances"
        assert not record.errors, f"{record.name}: {record.errors}"


def test_bell_golden_runs_once_with_tight_tolerance(small_report):
    record = small_report.record("bell_golden")
    assert record.instances_run == 1
    assert record.tolerance == GOLDEN_TOLERANCE


def test_serial_and_threaded_runs_agree():
    print("\n[TEST 2] Thread pool determinism")
    serial = SelftestConfig(seed=11, trials=4, max_dim=3, workers=1)
    threaded = SelftestConfig(seed=11, trials=4, max_dim=3, workers=3)
    for name in ("entropy_balance", "twin_information_split", "refinement_monotonicity"):
        a = evaluate_check(name, serial)
        b = evaluate_check(name, threaded)
        assert a.instances_run == b.instances_run
        assert a.max_residual == b.max_residual
    print("  ✓ PASS: identical residuals with 1 and 3 workers")


def test_same_seed_same_trial_residuals():
    config = SelftestConfig(seed=3, trials=1, max_dim=4)
    first, _ = run_check("entropy_sandwich", 0, config)
    second, _ = run_check("entropy_sandwich", 0, config)
    assert first == second


def test_failing_check_becomes_infinite_residual(monkeypatch):
    print("\n[TEST 3] Exceptions inside a check")

    def broken(rng, trial, max_dim, tol):
        raise RuntimeError("boom")

    monkeypatch.setitem(CHECKS, "entropy_balance", broken)
    record = evaluate_check("entropy_balance", SelftestConfig(seed=1, trials=2, max_dim=2))
    assert math.isinf(record.max_residual)
    assert not record.passed
    assert len(record.errors) == 2 and "boom" in record.errors[0]
    print("  ✓ PASS: recorded as a failure with an error line")


def test_report_serialisation_handles_infinite_residuals():
    records = (
        TheoremRecord("entropy_balance", 3, 1e-12, 1e-8),
        TheoremRecord("bell_golden", 1, float("inf"), GOLDEN_TOLERANCE, ("trial 0: boom",)),
    )
    report = TheoremReport(records, seed=1, trials=3, max_dim=2)
    out = report.to_dict()
    assert out["passed"] is False
    assert out["records"][1]["max_residual"] is None
    frame = report.to_frame()
    assert list(frame["pass"]) == [True, False]


def test_failing_twin_instance_does_not_hide_the_others(monkeypatch):
    print("\n[TEST 4] One twin instance raising inside a trial")

    def broken(seed, d1, d2, pad=(1, 1)):
        raise RuntimeError("padding failed")

    monkeypatch.setattr(selftest_app, "padded_twin_instance", broken)
    config = SelftestConfig(seed=2, trials=1, max_dim=3)
    residuals, errors = run_check("twin_compatibility", 0, config)

    assert sum(math.isinf(r) for r in residuals) == 1
    assert len([r for r in residuals if not math.isinf(r)]) == 6
    assert errors == ["trial 0: padded instance: RuntimeError: padding failed"]
    print("  ✓ PASS: remaining instances still contribute residuals")


def test_default_dimension_range_reaches_eight():
    assert SelftestConfig().max_dim == 8


def test_mismatch_marker_fails_any_tolerance():
    assert TheoremRecord("x", 1, MISMATCH, DEFAULT_TOLERANCES.identity_tol).passed is False


def test_workflow_state(capsys):
    config = SelftestConfig(seed=5, trials=1, max_dim=2)
    final_state = SelftestWorkflow(verbose=True).run(config)
    out = capsys.readouterr().out
    assert "NODE 0: PREPARING SELF-TEST" in out
    assert final_state['status'] == 'passed'
    assert final_state['report'].passed


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v", "-s"]))
