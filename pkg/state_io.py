"""
State I/O Module
JSON fixtures for states and observables:
- density matrices, pure state vectors and observables in one file schema
- complex entries stored as [re, im] pairs with full binary64 precision
- shape and Hermiticity validated on load
"""

import json
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PositiveInt, ValidationError, field_validator, model_validator

from config import DEFAULT_TOLERANCES, Tolerances
from operator_core import (
    DensityOperator,
    InputError,
    SpectralForm,
    hermitian_check,
    spectral_decompose,
)


class StateKind(str, Enum):
    DENSITY = "density"
    PURE = "pure"
    OBSERVABLE = "observable"


def _encode(arr: np.ndarray) -> List[Any]:
    arr = np.asarray(arr, dtype=complex)
    return np.stack([arr.real, arr.imag], axis=-1).tolist()


def _decode(data: Sequence[Any]) -> np.ndarray:
    arr = np.asarray(data, dtype=float)
    if arr.ndim == 0 or arr.shape[-1] != 2:
        raise ValueError("complex entries must be [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


class StateFile(BaseModel):
    """On-disk form of a density matrix, state vector or observable"""

    model_config = ConfigDict(frozen=True)

    kind: StateKind
    dims: List[PositiveInt] = Field(min_length=1, max_length=2)
    data: List[Any]
    meta: Dict[str, Any] = Field(default_factory=dict)

    @field_validator("data")
    @classmethod
    def _finite(cls, value: List[Any]) -> List[Any]:
        arr = np.asarray(value, dtype=float)
        if not np.all(np.isfinite(arr)):
            raise ValueError("data contains NaN or Inf")
        return value

    @model_validator(mode="after")
    def _shape_matches_kind(self) -> "StateFile":
        arr = _decode(self.data)
        total = int(np.prod(self.dims))
        expected = (total,) if self.kind == StateKind.PURE else (total, total)
        if arr.shape != expected:
            raise ValueError(f"{self.kind.value} data has shape {arr.shape}, expected {expected} for dims {self.dims}")
        if self.kind != StateKind.PURE and not hermitian_check(arr, DEFAULT_TOLERANCES.hermitian_tol):
            raise ValueError(f"{self.kind.value} matrix is not Hermitian")
        return self

    @property
    def bipartite_dims(self) -> Optional[tuple]:
        return tuple(self.dims) if len(self.dims) == 2 else None

    def to_array(self) -> np.ndarray:
        return _decode(self.data)

    def to_density(self, tolerances: Tolerances = DEFAULT_TOLERANCES) -> DensityOperator:
        """Density operator for kind 'density' or 'pure'"""
        if self.kind == StateKind.OBSERVABLE:
            raise InputError("file holds an observable, not a state")
        if self.kind == StateKind.PURE:
            return DensityOperator.from_vector(self.to_array(), self.bipartite_dims, tolerances)
        return DensityOperator.from_matrix(self.to_array(), self.bipartite_dims, tolerances)

    def to_vector(self) -> np.ndarray:
        if self.kind != StateKind.PURE:
            raise InputError(f"file holds a {self.kind.value} matrix, not a state vector")
        return self.to_array()

    def to_observable(self, tolerances: Tolerances = DEFAULT_TOLERANCES) -> SpectralForm:
        if self.kind != StateKind.OBSERVABLE:
            raise InputError(f"file holds a {self.kind.value} state, not an observable")
        return spectral_decompose(self.to_array(), tolerances=tolerances)

    @classmethod
    def from_density(cls, rho: DensityOperator, meta: Optional[Dict[str, Any]] = None) -> "StateFile":
        dims = list(rho.bipartite_dims) if rho.bipartite_dims is not None else [rho.dim]
        return cls(kind=StateKind.DENSITY, dims=dims, data=_encode(rho.matrix), meta=meta or {})

    @classmethod
    def from_vector(cls, psi, dims: Sequence[int], meta: Optional[Dict[str, Any]] = None) -> "StateFile":
        return cls(kind=StateKind.PURE, dims=list(dims), data=_encode(np.ravel(psi)), meta=meta or {})

    @classmethod
    def from_observable(cls, A: Union[SpectralForm, np.ndarray], dims: Optional[Sequence[int]] = None,
                        meta: Optional[Dict[str, Any]] = None) -> "StateFile":
        matrix = A.to_matrix() if isinstance(A, SpectralForm) else np.asarray(A, dtype=complex)
        dims = list(dims) if dims is not None else [matrix.shape[0]]
        return cls(kind=StateKind.OBSERVABLE, dims=dims, data=_encode(matrix), meta=meta or {})

    def to_json(self) -> str:
        return json.dumps(self.model_dump(mode="json"), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "StateFile":
        try:
            return cls.model_validate(json.loads(text))
        except json.JSONDecodeError as exc:
            raise InputError(f"state file is not valid JSON: {exc}") from exc
        except ValidationError as exc:
            raise InputError(f"invalid state file: {exc}") from exc


def load_state_file(path: Union[str, Path]) -> StateFile:
    path = Path(path)
    if not path.exists():
        raise InputError(f"state file not found: {path}")
    return StateFile.from_json(path.read_text(encoding="utf-8"))


def save_state_file(state_file: StateFile, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.write_text(state_file.to_json(), encoding="utf-8")
    return path
