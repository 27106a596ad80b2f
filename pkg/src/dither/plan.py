"""
Idle-index grouping and per-group dither radii

A multilevel plan puts the idle subcarriers of every subblock whose minimum
active amplitude is A_l into group U_l, bounded by R_l = A_l - A_1 + R_1.
A single-level plan is one group with one radius.
"""
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from ..core.model import (
    MODULUS_TOLERANCE, Constellation, FrequencyBlock, ParameterError, SystemConfig,
)
from ..utils import get_logger

logger = get_logger(__name__)


class UnsafeRadiusError(ParameterError):
    """R1 >= A_1: dither could exceed the weakest active symbol"""


@dataclass(frozen=True, eq=False)
class DitherPlan:
    """
    Groups U_1..U_L of idle indices with radii R_1..R_L

    `subblock_levels[beta]` is the 0-based level index of subblock beta.
    """
    groups: Tuple[np.ndarray, ...]
    radii: Tuple[float, ...]
    subblock_levels: np.ndarray
    subblock_size: int
    N: int

    def __post_init__(self):
        if len(self.groups) != len(self.radii):
            raise ParameterError("radii", "one radius per group is required")
        if any(r < 0 for r in self.radii):
            raise ParameterError("radii", "radii must be nonnegative")
        groups = tuple(_readonly(np.asarray(g, dtype=int)) for g in self.groups)
        object.__setattr__(self, "groups", groups)
        object.__setattr__(self, "radii", tuple(float(r) for r in self.radii))
        object.__setattr__(self, "subblock_levels",
                           _readonly(np.asarray(self.subblock_levels, dtype=int)))

    @property
    def L(self) -> int:
        return len(self.groups)

    @property
    def idle_indices(self) -> np.ndarray:
        """U as the concatenation U_1, U_2, ..., U_L"""
        if not self.groups:
            return np.zeros(0, dtype=int)
        return np.concatenate(self.groups)

    @property
    def index_radii(self) -> np.ndarray:
        """Radius bound aligned with idle_indices"""
        if not self.groups:
            return np.zeros(0)
        return np.concatenate([np.full(g.size, r) for g, r in zip(self.groups, self.radii)])

    @property
    def group_sizes(self) -> Tuple[int, ...]:
        return tuple(int(g.size) for g in self.groups)

    def scaled(self, factor: float) -> "DitherPlan":
        """Same grouping with every radius multiplied by `factor`"""
        return DitherPlan(
            groups=self.groups,
            radii=tuple(r * factor for r in self.radii),
            subblock_levels=self.subblock_levels,
            subblock_size=self.subblock_size,
            N=self.N,
        )


def _readonly(array: np.ndarray) -> np.ndarray:
    array = np.array(array, copy=True)
    array.setflags(write=False)
    return array


def derive_mu(X: FrequencyBlock, cfg: SystemConfig, cons: Constellation) -> np.ndarray:
    """
    Per-subblock minimum active amplitude mu_beta, as 0-based level indices

    Raises:
        ConsistencyError: an active modulus matches no amplitude level
    """
    magnitudes = np.abs(X.values).reshape(cfg.g, cfg.n)
    active = X.activation.reshape(cfg.g, cfg.n)
    mu = np.where(active, magnitudes, np.inf).min(axis=1)
    return np.array([cons.level_index(value) for value in mu], dtype=int)


def criterion_radii(cons: Constellation, R1: float) -> Tuple[float, ...]:
    """R_l = A_l - A_1 + R1, so every level keeps the margin A_1 - R1"""
    base = float(cons.levels[0])
    return tuple(float(a) - base + R1 for a in cons.levels)


def build_plan(
    X: FrequencyBlock,
    cfg: SystemConfig,
    cons: Constellation,
    R1: float,
    radii: Optional[Sequence[float]] = None,
    allow_unsafe: bool = False,
) -> DitherPlan:
    """
    Multilevel plan for block X

    Args:
        R1: radius of the lowest level; the others follow the criterion
        radii: explicit R_1..R_L overriding the criterion
        allow_unsafe: accept R1 >= A_1 (gives up the nu >= A_1 - R1 margin)

    Raises:
        UnsafeRadiusError: R1 >= A_1 without allow_unsafe
        ParameterError: negative R1 or wrong number of override radii
    """
    if R1 < 0:
        raise ParameterError("R1", f"radius must be nonnegative, got {R1}")
    A1 = float(cons.levels[0])
    if R1 >= A1 - MODULUS_TOLERANCE:
        if not allow_unsafe:
            raise UnsafeRadiusError(
                "R1", f"R1={R1} must stay below A_1={A1:.6f} to keep index detection safe"
            )
        logger.warning(f"R1={R1} >= A_1={A1:.4f}: the nu lower bound no longer holds")

    if radii is None:
        radii = criterion_radii(cons, R1)
    elif len(radii) != cons.L:
        raise ParameterError("radii", f"expected {cons.L} radii, got {len(radii)}")

    levels = derive_mu(X, cfg, cons)
    idle = ~X.activation.reshape(cfg.g, cfg.n)
    owner = np.repeat(levels, cfg.n).reshape(cfg.g, cfg.n)
    all_indices = np.arange(cfg.N).reshape(cfg.g, cfg.n)
    groups = tuple(all_indices[idle & (owner == level)] for level in range(cons.L))

    return DitherPlan(
        groups=groups,
        radii=tuple(radii),
        subblock_levels=levels,
        subblock_size=cfg.n,
        N=cfg.N,
    )


def build_single_level_plan(X: FrequencyBlock, cfg: SystemConfig, R: float) -> DitherPlan:
    """All N-K idle indices in one group bounded by R"""
    if R < 0:
        raise ParameterError("R", f"radius must be nonnegative, got {R}")
    return DitherPlan(
        groups=(X.idle_indices,),
        radii=(R,),
        subblock_levels=np.zeros(cfg.g, dtype=int),
        subblock_size=cfg.n,
        N=cfg.N,
    )
