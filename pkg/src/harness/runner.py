"""
Monte-Carlo runners behind the CLI subcommands
"""
import math
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import numpy as np

from ..core.index_mapper import modulate_block
from ..core.model import MODULUS_TOLERANCE, level_structure
from ..core.transform import idft
from ..link.metrics import BerTally, ccdf, papr
from ..utils import get_logger, log_performance
from .report import BerRow, CcdfRow, ConstellationRow, RunReport, SchemeReport, SystemSummary
from .rng import RNG_ALGORITHM, Stream, block_rng
from .simulation import (
    LinkContext, TrialRecord, context_for, make_plan, nominal_radii, nu_bound,
    random_bits, simulate_ber_chunk, simulate_constellation_chunk, simulate_energy_chunk,
    simulate_papr_chunk, trial_record, transmit_block,
)
from .spec import RunSpec, SchemeSpec
from .workers import BlockExecutor

logger = get_logger(__name__)


@dataclass
class RunOutcome:
    """What a runner hands back for writing"""
    report: RunReport
    timing: Dict[str, float] = field(default_factory=dict)
    clouds: Dict[str, List[ConstellationRow]] = field(default_factory=dict)
    extra: Optional[dict] = None


def run_directory(root: Path, command: str, spec: RunSpec) -> Path:
    """<root>/<command>-<spec digest>"""
    return Path(root) / f"{command}-{spec.digest()}"


def base_report(command: str, spec: RunSpec) -> RunReport:
    ctx = context_for(spec)
    cfg = ctx.cfg
    return RunReport(
        command=command,
        spec=spec.model_dump(mode="json"),
        spec_digest=spec.digest(),
        rng_algorithm=RNG_ALGORITHM,
        system=SystemSummary(N=cfg.N, n=cfg.n, k=cfg.k, g=cfg.g, M=cfg.M, K=cfg.K,
                             p1=cfg.p1, p2=cfg.p2, p=cfg.p, m=cfg.m),
        amplitude_levels=list(level_structure(ctx.cons)),
        legal_patterns=ctx.legal.as_table(),
        detector_fallback=spec.detector_fallback,
    )


def _check_scheme(spec: RunSpec, scheme: SchemeSpec) -> None:
    """Fail fast on radius errors before any work is dispatched"""
    ctx = context_for(spec)
    bits = random_bits(block_rng(spec.seed, Stream.BITS, 0), ctx.cfg.m)
    make_plan(modulate_block(bits, ctx.cfg, ctx.cons, ctx.legal), ctx, scheme)


def original_eb(ctx: LinkContext) -> float:
    """Analytic energy per bit of the undithered signal, K * E|S|^2 / m"""
    return ctx.cfg.K * ctx.cons.average_energy / ctx.cfg.m


def _eb_shift_db(eb: float, ctx: LinkContext) -> float:
    return 10.0 * math.log10(eb / original_eb(ctx))


def _scheme_report(spec: RunSpec, scheme: SchemeSpec) -> SchemeReport:
    ctx = context_for(spec)
    return SchemeReport(
        name=scheme.name,
        radii=list(nominal_radii(scheme, ctx.cons)),
        nu_bound=nu_bound(scheme, ctx.cons),
    )


def calibrate_energy(spec: RunSpec, scheme: SchemeSpec, executor: BlockExecutor) -> float:
    """Mean block energy over the calibration stream"""
    energies = executor.map_blocks(simulate_energy_chunk, range(spec.calibration_trials),
                                   spec, scheme)
    return math.fsum(energies) / len(energies)


def calibrate_eb(spec: RunSpec, scheme: SchemeSpec, executor: BlockExecutor) -> float:
    """Energy per bit over the calibration stream"""
    return calibrate_energy(spec, scheme, executor) / context_for(spec).cfg.m


def summarize_records(spec: RunSpec, scheme: SchemeSpec, records: Sequence[TrialRecord],
                      calibrated_power: Optional[float] = None) -> SchemeReport:
    """
    Energy, nu and solver statistics plus the PAPR CCDF of one scheme

    The ensemble denominator of the scheme itself is `calibrated_power` when
    given, otherwise the mean power of `records`.
    """
    ctx = context_for(spec)
    cfg = ctx.cfg
    summary = _scheme_report(spec, scheme)

    energies = [r.energy for r in records]
    total_energy = math.fsum(energies)
    summary.blocks = len(records)
    summary.eb = total_energy / len(records) / cfg.m
    summary.eb_shift_db = _eb_shift_db(summary.eb, ctx)
    summary.mean_power = total_energy / (len(records) * cfg.N)

    nus = np.array([r.nu for r in records])
    summary.mean_nu = float(math.fsum(nus) / nus.size)
    summary.min_nu = float(nus.min())
    summary.nu_violations = int(np.count_nonzero(nus < summary.nu_bound - MODULUS_TOLERANCE))
    if summary.nu_violations:
        logger.error(f"{scheme.name}: {summary.nu_violations} blocks below the nu bound "
                     f"{summary.nu_bound:.6f}")

    iterations = [r.iterations for r in records]
    summary.mean_iterations = math.fsum(iterations) / len(records)
    summary.max_iterations = max(iterations)
    summary.nonconverged_fraction = sum(not r.converged for r in records) / len(records)
    if summary.nonconverged_fraction > 0:
        logger.warning(f"{scheme.name}: {summary.nonconverged_fraction:.2%} of solves "
                       f"hit the iteration budget")

    if spec.denominator == "per-block":
        denominators = [r.energy / cfg.N for r in records]
    else:
        if spec.ensemble_reference == "original":
            mean_power = cfg.K * ctx.cons.average_energy / cfg.N
        elif calibrated_power is not None:
            mean_power = calibrated_power
        else:
            mean_power = summary.mean_power
        summary.reference_power = mean_power
        denominators = [mean_power] * len(records)

    papr_db = [10.0 * math.log10(r.peak_power / denominator)
               for r, denominator in zip(records, denominators)]
    table = ccdf(papr_db, spec.ccdf_grid)
    summary.ccdf = [CcdfRow(threshold_db=t, ccdf=p) for t, p in table.rows()]
    summary.papr_at_1e2_db = table.threshold_at(1e-2)
    summary.papr_at_1e3_db = table.threshold_at(1e-3)
    summary.mean_papr_reduction_db = math.fsum(
        10.0 * math.log10(r.initial_peak_power / r.peak_power) for r in records
    ) / len(records)
    return summary


@log_performance(logger, threshold_ms=1000)
def run_papr(spec: RunSpec, workers: int = 1) -> RunOutcome:
    """
    PAPR CCDF of every scheme in the run

    Blocks use the same bit stream for all schemes, so the curves are
    compared on matched data. The ensemble denominator comes from a
    calibration pass over a separate bit stream.
    """
    outcome = RunOutcome(report=base_report("papr", spec))
    ctx = context_for(spec)
    with BlockExecutor(workers) as executor:
        for scheme in spec.schemes:
            _check_scheme(spec, scheme)
            start = time.perf_counter()
            calibrated_power = None
            if spec.denominator == "ensemble" and spec.ensemble_reference == "scheme":
                calibrated_power = calibrate_energy(spec, scheme, executor) / ctx.cfg.N
            records = executor.map_blocks(simulate_papr_chunk, range(spec.trials), spec, scheme)
            summary = summarize_records(spec, scheme, records, calibrated_power)
            outcome.report.schemes.append(summary)
            outcome.timing[scheme.name] = time.perf_counter() - start
            logger.info(
                f"{scheme.name}: {len(records)} blocks, Eb shift {summary.eb_shift_db:+.3f} dB, "
                f"PAPR@1e-2 {summary.papr_at_1e2_db} dB, mean nu {summary.mean_nu:.4f}"
            )
    return outcome


@log_performance(logger, threshold_ms=1000)
def run_ber(spec: RunSpec, workers: int = 1) -> RunOutcome:
    """
    BER versus Eb/N0 of every scheme in the run

    Eb comes from a separate calibration pass. Blocks are simulated in fixed
    batches; an SNR point stops once it has min_errors bit errors or
    max_bits bits.
    """
    outcome = RunOutcome(report=base_report("ber", spec))
    ctx = context_for(spec)
    with BlockExecutor(workers) as executor:
        for scheme in spec.schemes:
            _check_scheme(spec, scheme)
            start = time.perf_counter()
            summary = _scheme_report(spec, scheme)
            eb = calibrate_eb(spec, scheme, executor)
            summary.eb = eb
            summary.eb_shift_db = _eb_shift_db(eb, ctx)
            logger.info(f"{scheme.name}: calibrated Eb = {eb:.6f} ({summary.eb_shift_db:+.3f} dB)")

            tallies = [BerTally() for _ in spec.snr_grid]
            active = list(range(len(spec.snr_grid)))
            next_block = 0
            while active:
                batch = range(next_block, next_block + spec.batch_blocks)
                for chunk in executor.map_chunks(simulate_ber_chunk, batch, spec, scheme,
                                                 tuple(active), eb):
                    for point, tally in zip(active, chunk):
                        tallies[point] = tallies[point].merge(tally)
                next_block += spec.batch_blocks

                still_active = []
                for point in active:
                    tally = tallies[point]
                    if tally.errors >= spec.min_errors or tally.bits >= spec.max_bits:
                        logger.info(f"{scheme.name} @ {spec.snr_grid[point]:g} dB: "
                                    f"BER {tally.ber:.3e} ({tally.errors}/{tally.bits})")
                    else:
                        still_active.append(point)
                active = still_active

            summary.blocks = next_block
            summary.ber = [
                BerRow(snr_db=snr, ber=t.ber, bits=t.bits, errors=t.errors,
                       index_errors=t.index_errors, symbol_errors=t.symbol_errors,
                       blocks=t.blocks)
                for snr, t in zip(spec.snr_grid, tallies)
            ]
            outcome.report.schemes.append(summary)
            outcome.timing[scheme.name] = time.perf_counter() - start
    return outcome


@log_performance(logger, threshold_ms=1000)
def dump_super_constellation(spec: RunSpec, workers: int = 1) -> RunOutcome:
    """Frequency-domain point clouds (active symbols and dither) per scheme"""
    outcome = RunOutcome(report=base_report("constellation", spec))
    with BlockExecutor(workers) as executor:
        for scheme in spec.schemes:
            _check_scheme(spec, scheme)
            start = time.perf_counter()
            rows = executor.map_blocks(simulate_constellation_chunk,
                                       range(spec.constellation_blocks), spec, scheme)
            outcome.clouds[scheme.name] = rows
            summary = _scheme_report(spec, scheme)
            summary.blocks = spec.constellation_blocks
            outcome.report.schemes.append(summary)
            outcome.timing[scheme.name] = time.perf_counter() - start
            idle = [math.hypot(re, im) for re, im, kind, _, _ in rows if kind == "idle"]
            logger.info(f"{scheme.name}: {len(rows)} points, largest dither modulus "
                        f"{max(idle, default=0.0):.4f}")
    return outcome


def solve_one(spec: RunSpec, block_index: int = 0) -> RunOutcome:
    """Single-block inspection of every scheme"""
    outcome = RunOutcome(report=base_report("solve-one", spec), extra={"block": block_index,
                                                                          "schemes": {}})
    ctx = context_for(spec)
    for scheme in spec.schemes:
        start = time.perf_counter()
        tx = transmit_block(spec, scheme, block_index)
        before = papr(idft(tx.block), mode="per-block")
        after = papr(tx.signal, mode="per-block")
        plan = make_plan(tx.block, ctx, scheme)
        records = [trial_record(tx, block_index, spec)]
        outcome.report.schemes.append(summarize_records(spec, scheme, records))
        outcome.extra["schemes"][scheme.name] = {
            "papr_before_db": before.papr_db,
            "papr_after_db": after.papr_db,
            "peak_before": before.peak_power,
            "peak_after": after.peak_power,
            "energy": tx.signal.energy,
            "radii": list(plan.radii) if plan else [],
            "group_sizes": list(plan.group_sizes) if plan else [],
            "subblock_levels": plan.subblock_levels.tolist() if plan else [],
            "nu": records[0].nu,
            "iterations": tx.solution.iterations if tx.solution else 0,
            "converged": tx.solution.converged if tx.solution else True,
        }
        outcome.timing[scheme.name] = time.perf_counter() - start
    return outcome

