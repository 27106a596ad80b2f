"""
OFDM-IM system model

System parameters, the QAM constellation with its amplitude-level structure,
and the frequency/time vector types shared by every other module.
"""
from dataclasses import dataclass, field
from math import comb, isqrt, log2
from typing import Tuple

import numpy as np

MODULUS_TOLERANCE = 1e-9


class ParameterError(ValueError):
    """Invalid system or scheme parameter; `field` names the offending one"""

    def __init__(self, field_name: str, message: str):
        super().__init__(f"{field_name}: {message}")
        self.field = field_name
        self.message = message

    def __reduce__(self):
        # keeps the two-argument signature across process boundaries
        return (type(self), (self.field, self.message))


class ConsistencyError(RuntimeError):
    """Internal-consistency failure (e.g. a symbol modulus matching no level)"""


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, copy=True)
    array.setflags(write=False)
    return array


def _is_power_of_two(value: int) -> bool:
    return value >= 1 and value & (value - 1) == 0


@dataclass(frozen=True)
class SystemConfig:
    """
    OFDM-IM parameters with derived bit widths

    N subcarriers are split into g subblocks of n; k are active per subblock.
    Each subblock carries p1 index bits and p2 symbol bits.
    """
    N: int
    n: int
    k: int
    g: int
    M: int
    p1: int
    p2: int
    p: int
    m: int

    @property
    def K(self) -> int:
        """Active subcarriers per block"""
        return self.k * self.g

    @property
    def bits_per_symbol(self) -> int:
        return int(log2(self.M))

    @property
    def idle_count(self) -> int:
        return self.N - self.K


def make_config(N: int, n: int, k: int, M: int) -> SystemConfig:
    """
    Build a SystemConfig and compute its derived fields

    Raises:
        ParameterError: n does not divide N, k outside [1, n), M not a power of two
    """
    if N < 1:
        raise ParameterError("N", f"subcarrier count must be positive, got {N}")
    if n < 2 or N % n != 0:
        raise ParameterError("n", f"subblock length {n} must divide N={N}")
    if not 1 <= k < n:
        raise ParameterError("k", f"active count must satisfy 1 <= k < n={n}, got {k}")
    if M < 2 or not _is_power_of_two(M):
        raise ParameterError("M", f"constellation order must be a power of two >= 2, got {M}")

    g = N // n
    p1 = comb(n, k).bit_length() - 1
    p2 = k * int(log2(M))
    p = p1 + p2
    return SystemConfig(N=N, n=n, k=k, g=g, M=M, p1=p1, p2=p2, p=p, m=p * g)


def bits_to_int(bits) -> int:
    """MSB-first bit sequence to integer"""
    value = 0
    for bit in bits:
        value = (value << 1) | int(bit)
    return value


def int_to_bits(value: int, width: int) -> np.ndarray:
    """Integer to MSB-first bit array of the given width"""
    return np.array([(value >> shift) & 1 for shift in range(width - 1, -1, -1)], dtype=np.uint8)


def _gray_decode(word: int) -> int:
    value = word
    shift = word >> 1
    while shift:
        value ^= shift
        shift >>= 1
    return value


@dataclass(frozen=True, eq=False)
class Constellation:
    """
    Unnormalized M-QAM point set

    `points[w]` is the point for the log2(M)-bit word with integer value w,
    so the array order is the bit map. `levels` holds the distinct moduli
    A_1 < ... < A_L.
    """
    points: np.ndarray
    levels: np.ndarray
    _level_of_point: np.ndarray = field(repr=False)

    @property
    def M(self) -> int:
        return len(self.points)

    @property
    def L(self) -> int:
        return len(self.levels)

    @property
    def bits_per_symbol(self) -> int:
        return int(log2(self.M))

    @property
    def average_energy(self) -> float:
        """E|S|^2 over equiprobable points"""
        return float(np.mean(np.abs(self.points) ** 2))

    def map(self, bits) -> complex:
        """Map one log2(M)-bit word to its point"""
        bits = np.asarray(bits)
        if bits.size != self.bits_per_symbol:
            raise ParameterError("bits", f"expected {self.bits_per_symbol} bits, got {bits.size}")
        return complex(self.points[bits_to_int(bits)])

    def demap(self, point: complex) -> np.ndarray:
        """Exact inverse of map for a member point"""
        matches = np.flatnonzero(np.abs(self.points - point) <= MODULUS_TOLERANCE)
        if matches.size != 1:
            raise ParameterError("point", f"{point} is not a constellation point")
        return int_to_bits(int(matches[0]), self.bits_per_symbol)

    def level_index(self, modulus: float) -> int:
        """0-based index l of the level equal to `modulus`"""
        hits = np.flatnonzero(np.abs(self.levels - modulus) <= MODULUS_TOLERANCE)
        if hits.size == 0:
            raise ConsistencyError(f"modulus {modulus!r} matches no amplitude level")
        return int(hits[0])

    def level_of_word(self, word: int) -> int:
        return int(self._level_of_point[word])


def _distinct_levels(moduli: np.ndarray) -> np.ndarray:
    levels = []
    for value in np.sort(moduli):
        if not levels or value - levels[-1] > MODULUS_TOLERANCE:
            levels.append(float(value))
    return np.array(levels)


def _axis_coordinates(bits_per_axis: int) -> np.ndarray:
    """Per-axis reflected Gray map: word -> coordinate in {±1, ±3, ...}"""
    side = 1 << bits_per_axis
    return np.array([2 * _gray_decode(word) - (side - 1) for word in range(side)], dtype=float)


def make_qam(M: int) -> Constellation:
    """
    Build the unnormalized square M-QAM constellation (M=2: BPSK, M=4: QPSK)

    Per-axis coordinates are {±1, ±3, ..., ±(sqrt(M)-1)} with reflected Gray
    coding on each axis, in-phase bits first.

    Raises:
        ParameterError: M not a power of two, or non-square M > 4
    """
    if M < 2 or not _is_power_of_two(M):
        raise ParameterError("M", f"constellation order must be a power of two, got {M}")

    if M == 2:
        points = np.array([-1.0 + 0j, 1.0 + 0j])
    else:
        side = isqrt(M)
        if side * side != M:
            raise ParameterError("M", f"only square QAM is supported, got M={M}")
        bits_per_axis = int(log2(side))
        axis = _axis_coordinates(bits_per_axis)
        words = np.arange(M)
        in_phase = axis[words >> bits_per_axis]
        quadrature = axis[words & (side - 1)]
        points = in_phase + 1j * quadrature

    moduli = np.abs(points)
    levels = _distinct_levels(moduli)
    level_of_point = np.array(
        [int(np.flatnonzero(np.abs(levels - r) <= MODULUS_TOLERANCE)[0]) for r in moduli]
    )
    return Constellation(
        points=_frozen(points),
        levels=_frozen(levels),
        _level_of_point=_frozen(level_of_point),
    )


@dataclass(frozen=True, eq=False)
class FrequencyBlock:
    """
    Length-N frequency-domain block X with its activation mask

    Inactive entries of a freshly modulated block are exactly zero; a
    dithered block carries the dither values there and keeps the mask.
    """
    values: np.ndarray
    activation: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.complex128)
        activation = np.asarray(self.activation, dtype=bool)
        if values.ndim != 1 or values.shape != activation.shape:
            raise ParameterError("activation", "mask must match the block length")
        object.__setattr__(self, "values", _frozen(values))
        object.__setattr__(self, "activation", _frozen(activation))

    @property
    def N(self) -> int:
        return len(self.values)

    @property
    def active_indices(self) -> np.ndarray:
        return np.flatnonzero(self.activation)

    @property
    def idle_indices(self) -> np.ndarray:
        return np.flatnonzero(~self.activation)

    @property
    def energy(self) -> float:
        return float(np.vdot(self.values, self.values).real)

    def with_dither(self, indices: np.ndarray, coefficients: np.ndarray) -> "FrequencyBlock":
        """Copy of the block with `coefficients` placed on idle `indices`"""
        indices = np.asarray(indices, dtype=int)
        if np.any(self.activation[indices]):
            raise ParameterError("indices", "dither may only touch idle subcarriers")
        values = np.array(self.values, copy=True)
        values[indices] = coefficients
        return FrequencyBlock(values=values, activation=self.activation)


@dataclass(frozen=True, eq=False)
class TimeSignal:
    """Length-N time-domain samples x"""
    samples: np.ndarray

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=np.complex128)
        if samples.ndim != 1:
            raise ParameterError("samples", "time signal must be one-dimensional")
        object.__setattr__(self, "samples", _frozen(samples))

    @property
    def N(self) -> int:
        return len(self.samples)

    @property
    def energy(self) -> float:
        return float(np.vdot(self.samples, self.samples).real)

    @property
    def peak_power(self) -> float:
        return float(np.max(np.abs(self.samples) ** 2))


def level_structure(cons: Constellation) -> Tuple[float, ...]:
    """Amplitude levels as a plain tuple (report-friendly)"""
    return tuple(float(a) for a in cons.levels)
