"""
Tests for state_io: JSON state and observable files
"""
import json

import numpy as np
import pytest

from instance_generator import bell_state, write_fixtures
from operator_core import InputError
from state_io import StateFile, StateKind, load_state_file, save_state_file


def test_bell_pure_file_loads_as_density():
    print("\n[TEST 1] Pure state file")
    sf = StateFile.from_vector(bell_state(), (2, 2), {"name": "bell"})
    rho = StateFile.from_json(sf.to_json()).to_density()

    assert rho.bipartite_dims == (2, 2)
    assert np.allclose(rho.matrix, np.outer(bell_state(), bell_state().conj()))
    print("  ✓ PASS: dims and matrix restored")


def test_complex_entries_survive_exactly(tmp_path):
    value = 1.0 / 3.0 + 1j * np.pi / 10.0
    M = np.array([[0.5, value], [np.conj(value), -0.5]])
    path = save_state_file(StateFile.from_observable(M), tmp_path / "obs.json")

    loaded = load_state_file(path)
    assert loaded.kind == StateKind.OBSERVABLE
    assert loaded.to_array()[0, 1] == value
    raw = json.loads(path.read_text(encoding="utf-8"))
    assert raw["data"][0][1] == [value.real, value.imag]


def test_observable_file_gives_spectral_form():
    sf = StateFile.from_observable(np.diag([1.0, 1.0, 2.0]))
    form = sf.to_observable()
    assert [b.projector.rank for b in form.branches] == [2, 1]


def test_validation_errors():
    print("\n[TEST 2] Invalid files")
    with pytest.raises(InputError):
        StateFile.from_json("{not json")
    bad_shape = {"kind": "density", "dims": [2], "data": [[[1.0, 0.0]]]}
    with pytest.raises(InputError):
        StateFile.from_json(json.dumps(bad_shape))
    non_hermitian = {"kind": "observable", "dims": [2],
                     "data": [[[0.0, 0.0], [1.0, 0.0]], [[0.0, 0.0], [0.0, 0.0]]]}
    with pytest.raises(InputError):
        StateFile.from_json(json.dumps(non_hermitian))
    too_many_dims = {"kind": "pure", "dims": [2, 2, 1], "data": [[1.0, 0.0]] + [[0.0, 0.0]] * 3}
    with pytest.raises(InputError):
        StateFile.from_json(json.dumps(too_many_dims))
    print("  ✓ PASS: malformed JSON, wrong shape, non-Hermitian and bad dims rejected")


def test_kind_mismatch_is_reported():
    sf = StateFile.from_observable(np.eye(2))
    with pytest.raises(InputError):
        sf.to_density()
    with pytest.raises(InputError):
        StateFile.from_vector(bell_state(), (2, 2)).to_observable()


def test_missing_file(tmp_path):
    with pytest.raises(InputError):
        load_state_file(tmp_path / "absent.json")


def test_write_fixtures(tmp_path):
    written = write_fixtures(tmp_path)
    names = {p.name for p in written}
    assert {"bell_pure.json", "bell_A1.json", "ensemble_density.json", "refinement_coarse.json"} <= names
    ensemble = load_state_file(tmp_path / "ensemble_density.json").to_density()
    assert ensemble.bipartite_dims == (2, 2)


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v", "-s"]))
