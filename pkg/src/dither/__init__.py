"""
Dither planning and minimax solving for idle-subcarrier PAPR reduction
"""

from .plan import (
    DitherPlan, UnsafeRadiusError, derive_mu, criterion_radii,
    build_plan, build_single_level_plan,
)
from .optimizer import DitherSolution, solve, project

__all__ = [
    'DitherPlan',
    'UnsafeRadiusError',
    'derive_mu',
    'criterion_radii',
    'build_plan',
    'build_single_level_plan',
    'DitherSolution',
    'solve',
    'project',
]
