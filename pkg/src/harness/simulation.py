"""
Per-block transmit/receive pipeline and the worker entry points

Worker functions take the frozen RunSpec plus a chunk of block indices and
return plain per-block results; all randomness comes from block_rng, so a
block's outcome is independent of the chunk it lands in.
"""
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..core.index_mapper import LegalPatternSet, build_legal_set, modulate_block
from ..core.model import (
    Constellation, FrequencyBlock, SystemConfig, TimeSignal, make_config, make_qam,
)
from ..core.transform import idft, oversampled_peak
from ..dither.optimizer import DitherSolution, solve
from ..dither.plan import DitherPlan, build_plan, build_single_level_plan, criterion_radii
from ..link.channel import awgn
from ..link.metrics import BerTally, realized_nu
from ..link.receiver import receive_block
from ..utils import SolverOptions, get_logger, log_exceptions
from .rng import Stream, block_rng
from .spec import RunSpec, SchemeSpec

logger = get_logger(__name__)


@dataclass(frozen=True)
class LinkContext:
    """System tables shared by every block of a run"""
    cfg: SystemConfig
    cons: Constellation
    legal: LegalPatternSet


@lru_cache(maxsize=8)
def link_context(N: int, n: int, k: int, M: int) -> LinkContext:
    cfg = make_config(N, n, k, M)
    return LinkContext(cfg=cfg, cons=make_qam(M), legal=build_legal_set(n, k))


def context_for(spec: RunSpec) -> LinkContext:
    system = spec.system
    return link_context(system.N, system.n, system.k, system.M)


def nominal_radii(scheme: SchemeSpec, cons: Constellation) -> Tuple[float, ...]:
    """Radii the scheme applies (empty for the undithered original)"""
    if scheme.name == "original":
        return ()
    if scheme.name == "single-level":
        return (scheme.R,)
    if scheme.radii is not None:
        return tuple(scheme.radii)
    return criterion_radii(cons, scheme.R1)


def nu_bound(scheme: SchemeSpec, cons: Constellation) -> float:
    """Guaranteed lower bound on the demodulation margin nu"""
    A1 = float(cons.levels[0])
    if scheme.name == "original":
        return A1
    if scheme.name == "single-level":
        return A1 - scheme.R
    radii = nominal_radii(scheme, cons)
    return min(float(a) - r for a, r in zip(cons.levels, radii))


def make_plan(X: FrequencyBlock, ctx: LinkContext, scheme: SchemeSpec) -> Optional[DitherPlan]:
    if scheme.name == "original":
        return None
    if scheme.name == "single-level":
        return build_single_level_plan(X, ctx.cfg, scheme.R)
    return build_plan(X, ctx.cfg, ctx.cons, scheme.R1, radii=scheme.radii,
                      allow_unsafe=scheme.allow_unsafe_r1)


@dataclass(frozen=True, eq=False)
class Transmission:
    """One block through the transmitter"""
    bits: np.ndarray
    block: FrequencyBlock
    dithered: FrequencyBlock
    signal: TimeSignal
    solution: Optional[DitherSolution]


def random_bits(rng: np.random.Generator, m: int) -> np.ndarray:
    return rng.integers(0, 2, size=m, dtype=np.uint8)


def transmit(
    bits: np.ndarray,
    ctx: LinkContext,
    scheme: SchemeSpec,
    solver: SolverOptions,
    restart_rng: Optional[np.random.Generator] = None,
) -> Transmission:
    """Modulate, then dither the idle tones according to the scheme"""
    X = modulate_block(bits, ctx.cfg, ctx.cons, ctx.legal)
    x = idft(X)
    plan = make_plan(X, ctx, scheme)
    if plan is None:
        return Transmission(bits=bits, block=X, dithered=X, signal=x, solution=None)

    solution = solve(x, plan, solver, rng=restart_rng)
    return Transmission(bits=bits, block=X, dithered=solution.apply(X),
                        signal=solution.signal, solution=solution)


def transmit_block(spec: RunSpec, scheme: SchemeSpec, index: int,
                   stream: Stream = Stream.BITS) -> Transmission:
    """Transmit block `index` of the run's bit stream"""
    ctx = context_for(spec)
    bits = random_bits(block_rng(spec.seed, stream, index), ctx.cfg.m)
    restart_rng = block_rng(spec.seed, Stream.RESTARTS, int(stream), index)
    return transmit(bits, ctx, scheme, spec.solver, restart_rng)


@dataclass(frozen=True)
class TrialRecord:
    """Per-block measurements of a PAPR run"""
    block_index: int
    energy: float
    peak_power: float
    initial_peak_power: float
    nu: float
    iterations: int
    converged: bool


def trial_record(tx: Transmission, index: int, spec: RunSpec) -> TrialRecord:
    """Measurements of one transmitted block"""
    ctx = context_for(spec)
    if spec.oversample > 1:
        peak = oversampled_peak(tx.dithered, spec.oversample)
        initial_peak = oversampled_peak(tx.block, spec.oversample)
    else:
        peak = tx.signal.peak_power
        initial_peak = tx.solution.initial_objective if tx.solution else peak
    return TrialRecord(
        block_index=index,
        energy=tx.signal.energy,
        peak_power=peak,
        initial_peak_power=initial_peak,
        nu=realized_nu(tx.dithered, ctx.cfg, ctx.cons),
        iterations=tx.solution.iterations if tx.solution else 0,
        converged=tx.solution.converged if tx.solution else True,
    )


@log_exceptions(logger)
def simulate_papr_chunk(spec: RunSpec, scheme: SchemeSpec,
                        indices: Sequence[int]) -> List[TrialRecord]:
    return [trial_record(transmit_block(spec, scheme, index), index, spec) for index in indices]


@log_exceptions(logger)
def simulate_energy_chunk(spec: RunSpec, scheme: SchemeSpec,
                          indices: Sequence[int]) -> List[float]:
    """Block energies of the calibration stream"""
    return [transmit_block(spec, scheme, index, Stream.CALIBRATION_BITS).signal.energy
            for index in indices]


@log_exceptions(logger)
def simulate_ber_chunk(spec: RunSpec, scheme: SchemeSpec, snr_points: Tuple[int, ...],
                       eb: float, indices: Sequence[int]) -> List[BerTally]:
    """
    Error tallies of a chunk, one per requested SNR point

    Each block is transmitted once and reused for every SNR point.
    """
    ctx = context_for(spec)
    tallies = [BerTally() for _ in snr_points]
    for index in indices:
        tx = transmit_block(spec, scheme, index)
        for tally, point in zip(tallies, snr_points):
            noise_rng = block_rng(spec.seed, Stream.NOISE, index, point)
            y = awgn(tx.signal, eb, spec.snr_grid[point], noise_rng)
            result = receive_block(y, ctx.cfg, ctx.cons, ctx.legal, reference=tx.block,
                                   fallback=spec.detector_fallback)
            tally.bits += ctx.cfg.m
            tally.errors += int(np.count_nonzero(result.detected_bits != tx.bits))
            tally.index_errors += result.index_errors
            tally.symbol_errors += result.symbol_errors
            tally.blocks += 1
    return tallies


@log_exceptions(logger)
def simulate_constellation_chunk(spec: RunSpec, scheme: SchemeSpec,
                                 indices: Sequence[int]
                                 ) -> List[Tuple[float, float, str, int, int]]:
    """
    Super-constellation points (re, im, kind, group, subblock)

    Active tones are tagged group 0; idle tones carry their 1-based dither
    group (1 for the single-level and original schemes).
    """
    ctx = context_for(spec)
    n = ctx.cfg.n
    rows = []
    for index in indices:
        tx = transmit_block(spec, scheme, index)
        group_of = np.ones(ctx.cfg.N, dtype=int)
        if tx.solution is not None:
            for number, members in enumerate(
                    make_plan(tx.block, ctx, scheme).groups, start=1):
                group_of[members] = number
        for position, value in enumerate(tx.dithered.values):
            active = bool(tx.dithered.activation[position])
            rows.append((float(value.real), float(value.imag),
                         "active" if active else "idle",
                         0 if active else int(group_of[position]),
                         position // n))
    return rows
