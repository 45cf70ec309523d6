"""
Tests for the command-line interface
"""
import json

import numpy as np
import pytest

import main as main_module
from config import SEED_ENV_VAR
from entropy_analysis import LN2
from instance_generator import write_fixtures
from main import EXIT_FAILED, EXIT_INPUT, EXIT_OK, main
from operator_core import NumericalError
from state_io import StateFile, load_state_file, save_state_file


@pytest.fixture
def fixtures(tmp_path):
    write_fixtures(tmp_path)
    return tmp_path


def _json(capsys):
    return json.loads(capsys.readouterr().out)


def test_discord_command_json(fixtures, capsys):
    print("\n[TEST 1] discord --format json")
    code = main(["discord", "--state", str(fixtures / "bell_density.json"),
                 "--a1", str(fixtures / "bell_A1.json"), "--a2", str(fixtures / "bell_A2.json"),
                 "--format", "json"])
    out = _json(capsys)
    assert code == EXIT_OK
    assert abs(out['ledger']['discord'] - LN2) < 1e-9
    assert abs(out['ledger']['mutual_information'] - 2 * LN2) < 1e-9


def test_discord_command_in_bits(fixtures, capsys):
    code = main(["discord", "--state", str(fixtures / "ensemble_density.json"),
                 "--a1", str(fixtures / "ensemble_A1.json"), "--a2", str(fixtures / "ensemble_A2.json"),
                 "--format", "json", "--log-base", "bits"])
    out = _json(capsys)
    assert code == EXIT_OK
    assert abs(out['ledger']['observable_entropy'] - 0.610864 / LN2) < 1e-5


def test_discord_text_output(fixtures, capsys):
    code = main(["discord", "--state", str(fixtures / "bell_density.json"),
                 "--a1", str(fixtures / "bell_A1.json"), "--a2", str(fixtures / "bell_A2.json")])
    out = capsys.readouterr().out
    assert code == EXIT_OK
    assert "TWIN OBSERVABLE ANALYSIS TOOLKIT" in out
    assert "MUTUAL INFORMATION LEDGER" in out


def test_pto_verify_command(fixtures, capsys):
    code = main(["pto", "verify", "--state", str(fixtures / "ensemble_density.json"),
                 "--a1", str(fixtures / "ensemble_A1.json"), "--a2", str(fixtures / "ensemble_A2.json"),
                 "--format", "json"])
    out = _json(capsys)
    assert code == EXIT_OK
    assert out['is_pto'] is True


def test_pto_verify_rejects_swapped_sides(fixtures, capsys):
    code = main(["pto", "verify", "--state", str(fixtures / "bell_density.json"),
                 "--a1", str(fixtures / "refinement_fine.json"), "--a2", str(fixtures / "bell_A2.json")])
    assert code == EXIT_INPUT


def test_pto_construct_writes_observables(fixtures, capsys):
    print("\n[TEST 2] pto construct")
    out_a1, out_a2 = fixtures / "c_A1.json", fixtures / "c_A2.json"
    code = main(["pto", "construct", "--state", str(fixtures / "bell_pure.json"),
                 "--out-a1", str(out_a1), "--out-a2", str(out_a2), "--format", "json"])
    out = _json(capsys)
    assert code == EXIT_OK
    assert out['pto']['is_pto'] is True
    assert out_a1.exists() and out_a2.exists()

    code = main(["discord", "--state", str(fixtures / "bell_pure.json"),
                 "--a1", str(out_a1), "--a2", str(out_a2), "--format", "json"])
    assert code == EXIT_OK
    assert abs(_json(capsys)['ledger']['coherence_entropy'] - LN2) < 1e-9


@pytest.mark.parametrize("dims, nonzero", [((2, 3), [1, 5]), ((3, 2), [2, 5])])
def test_pto_construct_on_unequal_dims(tmp_path, capsys, dims, nonzero):
    print(f"\n[TEST 2b] pto construct on {dims[0]}x{dims[1]}")
    phi = np.zeros(dims[0] * dims[1], dtype=complex)
    phi[nonzero] = [np.sqrt(0.7), np.sqrt(0.3)]
    state_path = save_state_file(StateFile.from_vector(phi, dims), tmp_path / "phi.json")
    out_a1, out_a2 = tmp_path / "A1.json", tmp_path / "A2.json"

    code = main(["pto", "construct", "--state", str(state_path),
                 "--out-a1", str(out_a1), "--out-a2", str(out_a2), "--format", "json"])
    out = _json(capsys)
    assert code == EXIT_OK
    assert out['pto']['is_pto'] is True
    assert load_state_file(out_a1).to_array().shape == (dims[0], dims[0])
    assert load_state_file(out_a2).to_array().shape == (dims[1], dims[1])
    print("  ✓ PASS: twins written with subsystem-sized matrices")


def test_numerical_and_unexpected_failures_exit_cleanly(fixtures, capsys, monkeypatch):
    args = ["discord", "--state", str(fixtures / "bell_density.json"),
            "--a1", str(fixtures / "bell_A1.json"), "--a2", str(fixtures / "bell_A2.json")]

    def numerical(_):
        raise NumericalError("eigensolver failed")

    def unexpected(_):
        raise IndexError("out of range")

    monkeypatch.setattr(main_module, "command_discord", numerical)
    assert main(args) == EXIT_FAILED
    assert "Numerical failure" in capsys.readouterr().err

    monkeypatch.setattr(main_module, "command_discord", unexpected)
    assert main(args) == EXIT_FAILED
    assert "Unexpected error: IndexError" in capsys.readouterr().err


def test_analyze_command(fixtures, capsys):
    code = main(["analyze", "--state", str(fixtures / "refinement_state.json"),
                 "--observable", str(fixtures / "refinement_coarse.json"), "--format", "json"])
    out = _json(capsys)
    assert code == EXIT_OK
    assert out['regime'] in ("weak", "strong", "intermediary")
    assert abs(out['ledger']['observable_entropy'] - 0.610864) < 1e-6


def test_analyze_subsystem_observable(fixtures, capsys):
    code = main(["analyze", "--state", str(fixtures / "bell_density.json"),
                 "--observable", str(fixtures / "bell_A1.json"), "--side", "1", "--format", "json"])
    out = _json(capsys)
    assert code == EXIT_OK
    assert abs(out['ledger']['coherence_entropy'] - LN2) < 1e-9


def test_selftest_command(capsys, monkeypatch):
    print("\n[TEST 3] selftest")
    monkeypatch.delenv(SEED_ENV_VAR, raising=False)
    code = main(["selftest", "--seed", "3", "--trials", "1", "--max-dim", "2", "--format", "json"])
    out = _json(capsys)
    assert code == EXIT_OK
    assert out['seed'] == 3
    assert out['passed'] is True


def test_selftest_seed_from_environment(capsys, monkeypatch):
    monkeypatch.setenv(SEED_ENV_VAR, "9")
    code = main(["selftest", "--seed", "3", "--trials", "1", "--max-dim", "2", "--format", "json"])
    assert code == EXIT_OK
    assert _json(capsys)['seed'] == 9

    monkeypatch.setenv(SEED_ENV_VAR, "nine")
    assert main(["selftest", "--trials", "1", "--format", "json"]) == EXIT_INPUT


def test_invalid_input_exit_codes(fixtures, capsys):
    assert main(["discord", "--state", str(fixtures / "missing.json"),
                 "--a1", str(fixtures / "bell_A1.json"), "--a2", str(fixtures / "bell_A2.json")]) == EXIT_INPUT
    assert main(["selftest", "--trials", "0", "--format", "json"]) == EXIT_INPUT


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v", "-s"]))
