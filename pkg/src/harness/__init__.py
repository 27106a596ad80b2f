"""
Monte-Carlo harness: run specifications, seeding, worker pool, runners, reports
"""

from .rng import RNG_ALGORITHM, Stream, block_rng
from .spec import RunSpec, SchemeSpec
from .workers import BlockExecutor
from .report import RunReport, SchemeReport, BerRow, CcdfRow, write_run, write_json
from .runner import (
    RunOutcome, run_directory, run_papr, run_ber, dump_super_constellation, solve_one,
)

__all__ = [
    'RNG_ALGORITHM',
    'Stream',
    'block_rng',
    'RunSpec',
    'SchemeSpec',
    'BlockExecutor',
    'RunReport',
    'SchemeReport',
    'BerRow',
    'CcdfRow',
    'write_run',
    'write_json',
    'RunOutcome',
    'run_directory',
    'run_papr',
    'run_ber',
    'dump_super_constellation',
    'solve_one',
]
