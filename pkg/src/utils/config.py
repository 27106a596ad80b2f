"""
Configuration management for the OFDM-IM dither toolkit
"""
import os
import yaml
from typing import List, Optional
from pathlib import Path
from pydantic import BaseModel, ConfigDict, Field, validator
from pydantic_settings import BaseSettings


SCHEME_NAMES = ("original", "single-level", "multilevel")


class LinkConfig(BaseModel):
    """OFDM-IM system parameters"""
    N: int = 128
    n: int = 4
    k: int = 2
    M: int = 16


class SchemeConfig(BaseModel):
    """Dither scheme selection"""
    name: str = "all"  # original, single-level, multilevel or all
    R: float = 0.5  # single-level radius
    R1: float = 0.0  # multilevel base radius
    radii: Optional[List[float]] = None  # explicit per-level radii, overrides the criterion
    allow_unsafe_r1: bool = False

    @validator("name")
    def validate_name(cls, v):
        if v != "all" and v not in SCHEME_NAMES:
            raise ValueError(f"Scheme must be 'all' or one of: {', '.join(SCHEME_NAMES)}")
        return v

    @validator("R", "R1")
    def validate_radius(cls, v):
        if v < 0:
            raise ValueError("Radius must be nonnegative")
        return v

    def names(self) -> List[str]:
        """Expand 'all' into the three schemes"""
        return list(SCHEME_NAMES) if self.name == "all" else [self.name]


class SolverOptions(BaseModel):
    """Options of the smoothed projected-gradient dither solver"""
    model_config = ConfigDict(frozen=True)

    max_iterations: int = 2000
    tolerance: float = 1e-6  # relative gain of the best peak per iteration
    patience: int = 10  # consecutive iterations below tolerance
    smoothing_initial: float = 0.1  # relative to the undithered peak modulus
    smoothing_final: float = 1e-4
    smoothing_decay: float = 0.98
    armijo: float = 1e-4
    max_backtracks: int = 40
    restarts: int = 1
    restart_seed: int = 0

    @validator("max_iterations", "patience", "restarts", "max_backtracks")
    def validate_positive(cls, v):
        if v < 1:
            raise ValueError("Must be at least 1")
        return v

    @validator("smoothing_decay")
    def validate_decay(cls, v):
        if not 0.0 < v <= 1.0:
            raise ValueError("Smoothing decay must lie in (0, 1]")
        return v


class RunConfig(BaseModel):
    """Monte-Carlo run configuration"""
    trials: int = 10000
    seed: int = 20240101
    snr_grid: List[float] = [0.0, 2.0, 4.0, 6.0, 8.0, 10.0]
    ccdf_start: float = 4.0  # dB
    ccdf_stop: float = 13.0  # dB
    ccdf_step: float = 0.25  # dB
    denominator: str = "ensemble"  # ensemble or per-block
    ensemble_reference: str = "scheme"  # scheme or original
    oversample: int = 1
    detector_fallback: str = "max-power"  # max-power or hamming
    min_errors: int = 200
    max_bits: int = 1_000_000
    batch_blocks: int = 256
    calibration_trials: int = 1000
    constellation_blocks: int = 200

    @validator("trials", "oversample", "min_errors", "max_bits", "batch_blocks",
               "calibration_trials", "constellation_blocks")
    def validate_positive(cls, v):
        if v < 1:
            raise ValueError("Must be at least 1")
        return v

    @validator("ccdf_step")
    def validate_step(cls, v):
        if v <= 0:
            raise ValueError("CCDF step must be positive")
        return v

    @validator("seed")
    def validate_seed(cls, v):
        if not 0 <= v < 2 ** 64:
            raise ValueError("Seed must be a 64-bit unsigned integer")
        return v

    @validator("snr_grid")
    def validate_grid(cls, v):
        if not v:
            raise ValueError("SNR grid must not be empty")
        if any(b <= a for a, b in zip(v, v[1:])):
            raise ValueError("SNR grid must be strictly ascending")
        return v

    @validator("denominator")
    def validate_denominator(cls, v):
        if v not in ("ensemble", "per-block"):
            raise ValueError("Denominator must be 'ensemble' or 'per-block'")
        return v

    @validator("ensemble_reference")
    def validate_reference(cls, v):
        if v not in ("scheme", "original"):
            raise ValueError("Ensemble reference must be 'scheme' or 'original'")
        return v

    @validator("detector_fallback")
    def validate_fallback(cls, v):
        if v not in ("max-power", "hamming"):
            raise ValueError("Detector fallback must be 'max-power' or 'hamming'")
        return v

    def ccdf_grid(self) -> List[float]:
        """Threshold grid in dB, inclusive of both ends"""
        count = int(round((self.ccdf_stop - self.ccdf_start) / self.ccdf_step)) + 1
        return [round(self.ccdf_start + i * self.ccdf_step, 10) for i in range(count)]


class OutputConfig(BaseModel):
    """Output configuration"""
    directory: str = "runs"
    write_timing: bool = True


class LoggingConfig(BaseModel):
    """Logging configuration"""
    level: str = "INFO"
    file: Optional[str] = None
    max_file_size: int = 10  # MB
    backup_count: int = 5
    format: str = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
    json_format: bool = False
    console_enabled: bool = True

    @validator("level")
    def validate_log_level(cls, v):
        valid_levels = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]
        if v.upper() not in valid_levels:
            raise ValueError(f"Log level must be one of: {', '.join(valid_levels)}")
        return v.upper()


class PerformanceConfig(BaseModel):
    """Performance configuration"""
    workers: Optional[int] = None  # None: all available cores

    @validator("workers")
    def validate_workers(cls, v):
        if v is not None and v < 1:
            raise ValueError("Worker count must be at least 1")
        return v

    def resolved_workers(self) -> int:
        return self.workers or os.cpu_count() or 1


class Config(BaseSettings):
    """Main configuration class"""
    system: LinkConfig = Field(default_factory=LinkConfig)
    scheme: SchemeConfig = Field(default_factory=SchemeConfig)
    solver: SolverOptions = Field(default_factory=SolverOptions)
    run: RunConfig = Field(default_factory=RunConfig)
    output: OutputConfig = Field(default_factory=OutputConfig)
    logging: LoggingConfig = Field(default_factory=LoggingConfig)
    performance: PerformanceConfig = Field(default_factory=PerformanceConfig)

    class Config:
        env_prefix = "OFDMIM_"
        env_nested_delimiter = "__"

    @classmethod
    def load_from_yaml(cls, config_path: str) -> "Config":
        """Load configuration from YAML file"""
        path = Path(config_path)
        if not path.exists():
            raise FileNotFoundError(f"Configuration file not found: {config_path}")

        with open(path, "r") as f:
            config_dict = yaml.safe_load(f) or {}

        return cls(**config_dict)

    @classmethod
    def load_from_env(cls) -> "Config":
        """Load configuration from environment variables"""
        return cls()

    def save_to_yaml(self, config_path: str):
        """Save configuration to YAML file"""
        path = Path(config_path)
        path.parent.mkdir(parents=True, exist_ok=True)

        config_dict = self.model_dump()
        with open(path, "w") as f:
            yaml.dump(config_dict, f, default_flow_style=False)


# Global configuration instance
_config: Optional[Config] = None


def load_config(config_path: Optional[str] = None) -> Config:
    """
    Load configuration from file or environment

    Args:
        config_path: Path to YAML configuration file. If None, searches the
            standard locations and falls back to defaults plus environment.

    Returns:
        Config instance
    """
    global _config

    if config_path:
        _config = Config.load_from_yaml(config_path)
    else:
        search_paths = [
            "config/config.yaml",
            "config.yaml",
        ]

        for path in search_paths:
            if Path(path).exists():
                _config = Config.load_from_yaml(path)
                return _config

        _config = Config.load_from_env()

    return _config


def get_config() -> Config:
    """
    Get the global configuration instance

    Raises:
        RuntimeError: If configuration has not been loaded
    """
    if _config is None:
        raise RuntimeError("Configuration not loaded. Call load_config() first.")
    return _config


def reload_config(config_path: Optional[str] = None) -> Config:
    """Reload configuration"""
    return load_config(config_path)
