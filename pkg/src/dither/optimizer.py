"""
Minimax dither solver

Minimizes the peak modulus max_j |x_j + (F_U^H zeta)_j| subject to
|zeta_i| <= R_{l(i)} by projected gradient descent on a log-sum-exp
smoothing of the peak. The smoothing temperature is annealed towards a
small fraction of the undithered peak, steps come from Armijo backtracking,
and projection onto the disks is radial clipping.
"""
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
from scipy import fft as sp_fft
from scipy.special import logsumexp, softmax

from ..core.model import ConsistencyError, FrequencyBlock, TimeSignal
from ..core.transform import sparse_ifft, synthesize_from_indices
from ..utils import SolverOptions, get_logger
from .plan import DitherPlan

logger = get_logger(__name__)

FEASIBILITY_TOLERANCE = 1e-9


@dataclass(frozen=True, eq=False)
class DitherSolution:
    """
    Solver result

    `coefficients` are aligned with `plan.idle_indices` (groups in order);
    `objective` is the peak power of the dithered signal recomputed from
    scratch.
    """
    coefficients: np.ndarray
    indices: np.ndarray
    group_sizes: Tuple[int, ...]
    objective: float
    initial_objective: float
    iterations: int
    converged: bool
    lambda_per_subblock: np.ndarray
    signal: TimeSignal

    def grouped(self) -> List[np.ndarray]:
        """zeta_1..zeta_L"""
        bounds = np.cumsum((0,) + self.group_sizes)
        return [self.coefficients[a:b] for a, b in zip(bounds[:-1], bounds[1:])]

    def apply(self, X: FrequencyBlock) -> FrequencyBlock:
        """Dithered frequency block; active entries are untouched"""
        return X.with_dither(self.indices, self.coefficients)


def project(z: np.ndarray, radius: np.ndarray) -> np.ndarray:
    """Radial clipping onto the disks |z_i| <= radius_i"""
    magnitude = np.abs(z)
    scale = np.minimum(1.0, np.divide(radius, magnitude, out=np.ones_like(magnitude),
                                      where=magnitude > radius))
    return z * scale


class _SmoothedPeak:
    """log-sum-exp peak of |x + F_U^H z| and its gradient in z"""

    def __init__(self, samples: np.ndarray, indices: np.ndarray):
        self.samples = samples
        self.indices = indices
        self.N = samples.size

    def signal(self, z: np.ndarray) -> np.ndarray:
        return self.samples + sparse_ifft(self.indices, z, self.N)

    @staticmethod
    def value(y: np.ndarray, tau: float) -> float:
        return float(tau * logsumexp(np.abs(y) / tau))

    def gradient(self, y: np.ndarray, tau: float) -> np.ndarray:
        magnitude = np.abs(y)
        weights = softmax(magnitude / tau)
        phase = np.divide(y, magnitude, out=np.zeros_like(y), where=magnitude > 0)
        return sp_fft.fft(weights * phase, norm="ortho")[self.indices]


def _descend(
    peak: _SmoothedPeak,
    radius: np.ndarray,
    z0: np.ndarray,
    scale: float,
    options: SolverOptions,
) -> Tuple[np.ndarray, float, int, bool]:
    """One projected-gradient run; returns the best iterate by true peak"""
    z = project(z0, radius)
    y = peak.signal(z)
    best_z, best_peak = z, float(np.max(np.abs(y)))
    previous_best = best_peak
    tau_floor = options.smoothing_final * scale
    step = scale
    calm = 0

    for iteration in range(1, options.max_iterations + 1):
        tau = max(tau_floor, options.smoothing_initial * scale
                  * options.smoothing_decay ** (iteration - 1))
        f = peak.value(y, tau)
        g = peak.gradient(y, tau)

        accepted = False
        trial_step = step
        for _ in range(options.max_backtracks):
            candidate = project(z - step * g, radius)
            move = candidate - z
            decrease = float(np.vdot(g, move).real)
            y_candidate = peak.signal(candidate)
            if peak.value(y_candidate, tau) <= f + options.armijo * decrease:
                accepted = True
                break
            step *= 0.5

        if accepted:
            z, y = candidate, y_candidate
            step *= 2.0
        else:
            # stationary for this temperature; keep a usable step for the next one
            step = 0.5 * trial_step

        current_peak = float(np.max(np.abs(y)))
        if current_peak < best_peak:
            best_z, best_peak = z, current_peak

        # the current iterate keeps oscillating under backtracking; the best one only falls
        if tau <= tau_floor:
            gain = (previous_best - best_peak) / max(previous_best, np.finfo(float).tiny)
            calm = calm + 1 if gain < options.tolerance else 0
            if calm >= options.patience:
                return best_z, best_peak, iteration, True
        previous_best = best_peak

    return best_z, best_peak, options.max_iterations, False


def _random_feasible(radius: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    r = radius * np.sqrt(rng.random(radius.size))
    return r * np.exp(2j * np.pi * rng.random(radius.size))


def solve(
    x: TimeSignal,
    plan: DitherPlan,
    options: Optional[SolverOptions] = None,
    initial: Optional[np.ndarray] = None,
    rng: Optional[np.random.Generator] = None,
) -> DitherSolution:
    """
    Minimize the peak power of x + F_U^H zeta over the plan's disks

    Args:
        x: undithered time signal
        plan: idle-index groups and radii
        options: solver options (defaults when None)
        initial: starting point aligned with plan.idle_indices (zero when None)
        rng: generator for extra random restarts (options.restarts > 1)

    Never raises on an exhausted iteration budget: the best feasible iterate
    is returned with converged=False.
    """
    options = options or SolverOptions()
    samples = np.asarray(x.samples, dtype=np.complex128)
    indices = plan.idle_indices
    radius = plan.index_radii
    coefficients = np.zeros(indices.size, dtype=np.complex128)
    initial_objective = float(np.max(np.abs(samples) ** 2))

    # Zero-radius groups are pinned; the free set is searched in ascending
    # index order so equal plans yield identical arithmetic.
    free = np.flatnonzero(radius > 0)
    free = free[np.argsort(indices[free], kind="stable")]
    scale = float(np.sqrt(initial_objective))
    iterations, converged = 0, True

    if free.size and scale > 0:
        peak = _SmoothedPeak(samples, indices[free])
        free_radius = radius[free]
        if initial is not None:
            z0 = np.asarray(initial, dtype=np.complex128)[free]
        else:
            z0 = np.zeros(free.size, dtype=np.complex128)
        starts = [z0]
        if options.restarts > 1:
            rng = rng or np.random.default_rng(options.restart_seed)
            starts += [_random_feasible(free_radius, rng) for _ in range(options.restarts - 1)]

        best = None
        for start in starts:
            z, peak_value, used, done = _descend(peak, free_radius, start, scale, options)
            iterations += used
            if best is None or peak_value < best[1]:
                best = (z, peak_value, done)
        coefficients[free] = best[0]
        converged = best[2]

    dithered = samples + synthesize_from_indices(indices, coefficients, samples.size).samples
    objective = float(np.max(np.abs(dithered) ** 2))

    excess = np.abs(coefficients) - radius
    if excess.size and excess.max() > FEASIBILITY_TOLERANCE:
        raise ConsistencyError(f"dither exceeds its radius by {excess.max():.3e}")
    if objective > initial_objective + FEASIBILITY_TOLERANCE:
        # best-iterate tracking starts at the projected start point; fall back to zero
        coefficients[:] = 0
        dithered = samples
        objective = initial_objective

    if not converged:
        logger.debug(f"Dither solve stopped at the iteration budget ({iterations} iterations)")

    return DitherSolution(
        coefficients=coefficients,
        indices=indices,
        group_sizes=plan.group_sizes,
        objective=objective,
        initial_objective=initial_objective,
        iterations=iterations,
        converged=converged,
        lambda_per_subblock=_lambda_per_subblock(indices, coefficients, plan),
        signal=TimeSignal(samples=dithered),
    )


def _lambda_per_subblock(indices: np.ndarray, coefficients: np.ndarray,
                         plan: DitherPlan) -> np.ndarray:
    """Largest dither modulus in each subblock"""
    lam = np.zeros(plan.N // plan.subblock_size)
    np.maximum.at(lam, indices // plan.subblock_size, np.abs(coefficients))
    return lam
