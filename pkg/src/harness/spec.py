"""
Frozen description of one Monte-Carlo run
"""
import hashlib
from typing import List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, validator

from ..utils.config import SCHEME_NAMES, Config, LinkConfig, SolverOptions


class SchemeSpec(BaseModel):
    """One transmit scheme and its radius parameters"""
    model_config = ConfigDict(frozen=True)

    name: str
    R: float = 0.5
    R1: float = 0.0
    radii: Optional[Tuple[float, ...]] = None
    allow_unsafe_r1: bool = False

    @validator("name")
    def validate_name(cls, v):
        if v not in SCHEME_NAMES:
            raise ValueError(f"Scheme must be one of: {', '.join(SCHEME_NAMES)}")
        return v


class RunSpec(BaseModel):
    """Everything that determines the numbers a run produces"""
    model_config = ConfigDict(frozen=True)

    system: LinkConfig
    schemes: Tuple[SchemeSpec, ...]
    trials: int
    seed: int
    snr_grid: Tuple[float, ...]
    ccdf_grid: Tuple[float, ...]
    solver: SolverOptions
    denominator: str = "ensemble"
    ensemble_reference: str = "scheme"
    oversample: int = 1
    detector_fallback: str = "max-power"
    min_errors: int = 200
    max_bits: int = 1_000_000
    batch_blocks: int = 256
    calibration_trials: int = 1000
    constellation_blocks: int = 200

    @validator("trials")
    def validate_trials(cls, v):
        if v < 1:
            raise ValueError("Trials must be at least 1")
        return v

    @validator("schemes")
    def validate_schemes(cls, v):
        if not v:
            raise ValueError("At least one scheme is required")
        return v

    @validator("snr_grid", "ccdf_grid")
    def validate_grid(cls, v):
        if not v:
            raise ValueError("Grid must not be empty")
        if any(b <= a for a, b in zip(v, v[1:])):
            raise ValueError("Grid must be strictly ascending")
        return v

    @classmethod
    def from_config(cls, config: Config) -> "RunSpec":
        """Freeze a loaded configuration into a run specification"""
        run = config.run
        schemes = tuple(
            SchemeSpec(
                name=name,
                R=config.scheme.R,
                R1=config.scheme.R1,
                radii=tuple(config.scheme.radii) if config.scheme.radii else None,
                allow_unsafe_r1=config.scheme.allow_unsafe_r1,
            )
            for name in config.scheme.names()
        )
        return cls(
            system=config.system,
            schemes=schemes,
            trials=run.trials,
            seed=run.seed,
            snr_grid=tuple(run.snr_grid),
            ccdf_grid=tuple(run.ccdf_grid()),
            solver=config.solver,
            denominator=run.denominator,
            ensemble_reference=run.ensemble_reference,
            oversample=run.oversample,
            detector_fallback=run.detector_fallback,
            min_errors=run.min_errors,
            max_bits=run.max_bits,
            batch_blocks=run.batch_blocks,
            calibration_trials=run.calibration_trials,
            constellation_blocks=run.constellation_blocks,
        )

    def scheme(self, name: str) -> SchemeSpec:
        for scheme in self.schemes:
            if scheme.name == name:
                return scheme
        raise KeyError(name)

    def canonical_json(self) -> str:
        return self.model_dump_json()

    def digest(self) -> str:
        """Short content hash naming the run directory"""
        return hashlib.sha256(self.canonical_json().encode("utf-8")).hexdigest()[:12]

    def scheme_names(self) -> List[str]:
        return [s.name for s in self.schemes]
