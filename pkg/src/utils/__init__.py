"""
Utility modules for the OFDM-IM dither toolkit
"""

from .config import (
    Config, LinkConfig, SchemeConfig, SolverOptions, RunConfig, LoggingConfig,
    load_config, get_config, reload_config,
)
from .logger import setup_logger, get_logger, log_performance, log_exceptions

__all__ = [
    'Config',
    'LinkConfig',
    'SchemeConfig',
    'SolverOptions',
    'RunConfig',
    'LoggingConfig',
    'load_config',
    'get_config',
    'reload_config',
    'setup_logger',
    'get_logger',
    'log_performance',
    'log_exceptions',
]
