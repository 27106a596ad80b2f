"""
PAPR, CCDF, demodulation-margin and energy accounting

Tallies (CcdfAccumulator, EnergyTally, BerTally) merge associatively so
Monte-Carlo workers can be combined in any grouping.
"""
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..core.model import Constellation, FrequencyBlock, ParameterError, SystemConfig, TimeSignal


@dataclass(frozen=True)
class PaprSample:
    """papr_linear = peak_power / denominator"""
    papr_linear: float
    papr_db: float
    peak_power: float
    denominator: float


def papr(
    x: Union[TimeSignal, np.ndarray],
    mode: str = "per-block",
    mean_power: Optional[float] = None,
    peak_power: Optional[float] = None,
) -> PaprSample:
    """
    Peak-to-average power ratio of one time signal

    Args:
        x: time signal
        mode: "per-block" divides by ||x||^2/N; "ensemble" by `mean_power`
        mean_power: run-level mean power per sample (ensemble mode)
        peak_power: externally measured peak (e.g. oversampled); defaults
            to the Nyquist-rate peak of x

    Raises:
        ParameterError: zero signal, or ensemble mode without a positive mean power
    """
    samples = x.samples if isinstance(x, TimeSignal) else np.asarray(x, dtype=np.complex128)
    power = np.abs(samples) ** 2
    if not np.any(power > 0):
        raise ParameterError("x", "PAPR of a zero signal is undefined")

    if mode == "per-block":
        denominator = float(power.mean())
    elif mode == "ensemble":
        if mean_power is None or mean_power <= 0:
            raise ParameterError("mean_power", "ensemble mode needs a positive mean power")
        denominator = float(mean_power)
    else:
        raise ParameterError("mode", f"unknown denominator mode {mode!r}")

    peak = float(power.max()) if peak_power is None else float(peak_power)
    ratio = peak / denominator
    return PaprSample(papr_linear=ratio, papr_db=10.0 * np.log10(ratio),
                      peak_power=peak, denominator=denominator)


@dataclass(frozen=True)
class CcdfTable:
    """Estimated P(PAPR > threshold) on an ascending dB grid"""
    thresholds: Tuple[float, ...]
    probabilities: Tuple[float, ...]
    sample_count: int

    def rows(self) -> List[Tuple[float, float]]:
        return list(zip(self.thresholds, self.probabilities))

    def threshold_at(self, probability: float) -> Optional[float]:
        """Smallest grid threshold whose exceedance is at or below `probability`"""
        for threshold, p in zip(self.thresholds, self.probabilities):
            if p <= probability:
                return threshold
        return None


@dataclass
class CcdfAccumulator:
    """Exceedance counts per threshold"""
    thresholds: Tuple[float, ...]
    exceed: np.ndarray = None
    count: int = 0

    def __post_init__(self):
        self.thresholds = tuple(float(t) for t in self.thresholds)
        if any(b <= a for a, b in zip(self.thresholds, self.thresholds[1:])):
            raise ParameterError("thresholds", "threshold grid must be strictly ascending")
        if self.exceed is None:
            self.exceed = np.zeros(len(self.thresholds), dtype=np.int64)

    def add(self, papr_db: Iterable[float]) -> "CcdfAccumulator":
        values = np.asarray(list(papr_db), dtype=float)
        grid = np.asarray(self.thresholds)
        self.exceed += (values[:, None] > grid[None, :]).sum(axis=0)
        self.count += values.size
        return self

    def merge(self, other: "CcdfAccumulator") -> "CcdfAccumulator":
        if other.thresholds != self.thresholds:
            raise ParameterError("thresholds", "cannot merge tallies on different grids")
        return CcdfAccumulator(self.thresholds, self.exceed + other.exceed,
                               self.count + other.count)

    def table(self) -> CcdfTable:
        if self.count == 0:
            raise ParameterError("samples", "CCDF needs at least one sample")
        return CcdfTable(
            thresholds=self.thresholds,
            probabilities=tuple(float(c) / self.count for c in self.exceed),
            sample_count=self.count,
        )


def ccdf(samples: Sequence[Union[PaprSample, float]], thresholds: Sequence[float]) -> CcdfTable:
    """
    Empirical CCDF of PAPR samples (PaprSample or plain dB values)

    Raises:
        ParameterError: empty sample list
    """
    if len(samples) == 0:
        raise ParameterError("samples", "CCDF needs at least one sample")
    values = [s.papr_db if isinstance(s, PaprSample) else float(s) for s in samples]
    return CcdfAccumulator(tuple(thresholds)).add(values).table()


def subblock_margins(
    X: FrequencyBlock, cfg: SystemConfig
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    (mu, lambda, delta) per subblock of a (possibly dithered) block

    mu is the smallest active modulus, lambda the largest idle modulus.
    """
    magnitudes = np.abs(X.values).reshape(cfg.g, cfg.n)
    active = X.activation.reshape(cfg.g, cfg.n)
    mu = np.where(active, magnitudes, np.inf).min(axis=1)
    lam = np.where(active, 0.0, magnitudes).max(axis=1)
    return mu, lam, mu - lam


def realized_nu(X: FrequencyBlock, cfg: SystemConfig, cons: Constellation) -> float:
    """
    nu = min_beta (mu_beta - lambda_beta)

    mu_beta is snapped to its amplitude level, so an active entry that is
    not a constellation point raises ConsistencyError.
    """
    mu, lam, _ = subblock_margins(X, cfg)
    levels = cons.levels[[cons.level_index(value) for value in mu]]
    return float((levels - lam).min())


@dataclass
class EnergyTally:
    """Running sum of block energies"""
    total: float = 0.0
    blocks: int = 0

    def add(self, energy: float) -> "EnergyTally":
        self.total += float(energy)
        self.blocks += 1
        return self

    def merge(self, other: "EnergyTally") -> "EnergyTally":
        return EnergyTally(self.total + other.total, self.blocks + other.blocks)

    @property
    def mean(self) -> float:
        if self.blocks == 0:
            raise ParameterError("blocks", "no blocks tallied")
        return self.total / self.blocks


def energy_per_bit(blocks: Iterable[Union[TimeSignal, float]], m: int) -> float:
    """Mean block energy ||x||^2 divided by the bits per block"""
    tally = EnergyTally()
    for block in blocks:
        tally.add(block.energy if isinstance(block, TimeSignal) else block)
    return tally.mean / m


@dataclass
class BerTally:
    """Bit and decision error counts at one SNR point"""
    bits: int = 0
    errors: int = 0
    index_errors: int = 0
    symbol_errors: int = 0
    blocks: int = 0

    def merge(self, other: "BerTally") -> "BerTally":
        return BerTally(
            bits=self.bits + other.bits,
            errors=self.errors + other.errors,
            index_errors=self.index_errors + other.index_errors,
            symbol_errors=self.symbol_errors + other.symbol_errors,
            blocks=self.blocks + other.blocks,
        )

    @property
    def ber(self) -> float:
        return self.errors / self.bits if self.bits else float("nan")
