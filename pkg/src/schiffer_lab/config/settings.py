import json
from functools import lru_cache
from pathlib import Path
from typing import List, Union

from pydantic import Field, ValidationError, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from ..utils.exceptions import ConfigurationError


class RunConfig(BaseSettings):
    """Numerical tolerances, experiment grids and output settings for a run"""

    model_config = SettingsConfigDict(
        env_prefix="SCHIFFER_LAB_",
        env_file=".env",
        extra="ignore",
        frozen=True,
    )

    # Precision
    prec: int = Field(15, ge=15, le=200,
                      description="Digits for mpmath branch-point refinement; above 15 also halves the theta "
                                  "vanishing threshold. Quadrature and theta sums stay in float64")
    quad_tol: float = Field(1e-12, description="Quadrature convergence tolerance")
    certificate_factor: float = Field(100.0, description="Riemann certificate threshold in units of quad_tol")
    max_quad_nodes: int = Field(2 ** 14, ge=8)
    clearance: float = Field(1e-6, description="Branch point clearance, relative to the branch point scale")
    detour_offset: float = Field(1e-3, description="Detour midpoint offset as a fraction of path length")
    max_jet_order: int = Field(64, ge=1)

    # Decisions
    hyperelliptic_threshold: float = 1e-8
    theta_threshold: float = 1e-8
    theta_tail_rel: float = 1e-12
    theta_max_points: int = 2_000_000
    rationality_tol: float = 1e-8
    rationality_bound: int = 10 ** 6
    lll_delta: float = 0.99

    # Experiments
    eps_grid_theta: List[float] = [1e-5, 1e-4, 1e-3]
    eps_grid_soliton: List[float] = [0.0, 1e-4, 1e-3]
    seed: int = 7
    output_dir: str = "out"

    # Logging
    log_level: str = "INFO"
    log_json: bool = False

    @field_validator(
        "quad_tol", "certificate_factor", "clearance", "detour_offset",
        "hyperelliptic_threshold", "theta_threshold", "theta_tail_rel",
        "rationality_tol",
    )
    @classmethod
    def _positive(cls, value: float) -> float:
        if not value > 0:
            raise ValueError("tolerances must be positive")
        return value

    @field_validator("lll_delta")
    @classmethod
    def _lovasz_range(cls, value: float) -> float:
        if not 0.25 < value < 1:
            raise ValueError("lll_delta must lie in (0.25, 1)")
        return value

    @property
    def certificate_tol(self) -> float:
        return self.certificate_factor * self.quad_tol

    @property
    def extended_precision(self) -> bool:
        return self.prec > 15

    @property
    def effective_theta_threshold(self) -> float:
        return self.theta_threshold / 2 if self.extended_precision else self.theta_threshold

    @classmethod
    def from_file(cls, path: Union[str, Path], **overrides) -> "RunConfig":
        """Load a structured-text config file; keyword overrides win"""
        try:
            data = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigurationError(f"Cannot read config file: {e}", config_key="config",
                                     config_value=path, cause=e)
        data.update({k: v for k, v in overrides.items() if v is not None})
        return build_config(**data)


def build_config(**values) -> RunConfig:
    """Create a RunConfig, turning validation failures into ConfigurationError"""
    try:
        return RunConfig(**{k: v for k, v in values.items() if v is not None})
    except ValidationError as e:
        first = e.errors()[0]
        key = ".".join(str(part) for part in first.get("loc", ()))
        raise ConfigurationError(f"Invalid configuration: {first.get('msg')}",
                                 config_key=key, config_value=first.get("input"), cause=e)


_active: List[RunConfig] = []


@lru_cache()
def _default_settings() -> RunConfig:
    return RunConfig()


def get_settings() -> RunConfig:
    """Return the active run configuration"""
    return _active[-1] if _active else _default_settings()


def use_settings(config: RunConfig) -> None:
    """Install a configuration as the active one for this process"""
    _active.clear()
    _active.append(config)


def reset_settings() -> None:
    _active.clear()
    _default_settings.cache_clear()
