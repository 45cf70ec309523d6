"""
Configuration Module
Central place for every numerical threshold and run setting:
- Tolerances used by the operator, entropy, relation and twin modules
- Self-test run settings (seed, trials, dimensions, workers)
- Environment overrides (TWINOBS_SEED)
"""

import os
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator


SEED_ENV_VAR = "TWINOBS_SEED"
DEFAULT_SEED = 20240601


class Tolerances(BaseModel):
    """Numerical thresholds; every public operation falls back to these defaults"""

    model_config = ConfigDict(frozen=True)

    hermitian_tol: float = 1e-10
    rank_tol: float = 1e-10
    detect_tol: float = 1e-10
    # cluster_tol = cluster_rel * ||H||, comm_tol = comm_rel * ||rho||
    cluster_rel: float = 1e-8
    comm_rel: float = 1e-8
    reconstruction_tol: float = 1e-10
    certainty_tol: float = 1e-8
    identity_tol: float = 1e-8
    refinement_tol: float = 1e-8
    purity_tol: float = 1e-8
    trace_tol: float = 1e-8
    clamp_warn: float = 1e-12

    @field_validator("*")
    @classmethod
    def _positive(cls, value: float) -> float:
        if value <= 0:
            raise ValueError("tolerances must be positive")
        return value

    def cluster_tol(self, scale: float) -> float:
        """Absolute eigenvalue-clustering gap for an operator of norm `scale`"""
        return self.cluster_rel * scale if scale > 0 else self.cluster_rel

    def comm_tol(self, scale: float) -> float:
        """Absolute commutation threshold for a state of norm `scale`"""
        return self.comm_rel * scale if scale > 0 else self.comm_rel

    def with_overrides(self, **overrides: float) -> "Tolerances":
        values = self.model_dump()
        values.update({k: v for k, v in overrides.items() if v is not None})
        return Tolerances(**values)

    def with_comparison_tol(self, tol: Optional[float]) -> "Tolerances":
        """Apply the CLI --tol flag to the identity/certainty/comparison thresholds"""
        if tol is None:
            return self
        return self.with_overrides(
            certainty_tol=tol,
            identity_tol=tol,
            refinement_tol=tol,
            purity_tol=tol,
        )


DEFAULT_TOLERANCES = Tolerances()


class SelftestConfig(BaseModel):
    """Settings for one self-test run"""

    model_config = ConfigDict(frozen=True)

    seed: int = DEFAULT_SEED
    trials: int = Field(default=100, ge=1)
    max_dim: int = Field(default=8, ge=2, le=8)
    workers: int = Field(default=1, ge=1)
    tolerances: Tolerances = DEFAULT_TOLERANCES


def resolve_seed(cli_seed: Optional[int]) -> int:
    """TWINOBS_SEED wins over --seed; fall back to the default seed"""
    env_value = os.environ.get(SEED_ENV_VAR)
    if env_value is not None and env_value.strip():
        try:
            return int(env_value.strip())
        except ValueError:
            raise ValueError(f"{SEED_ENV_VAR} must be an integer, got {env_value!r}")
    if cli_seed is not None:
        return int(cli_seed)
    return DEFAULT_SEED
