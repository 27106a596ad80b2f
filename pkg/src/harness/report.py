"""
Run report models and output writers

report.json holds only values derived from the RunSpec, so it is
byte-identical across reruns; wall-clock figures go to timing.json.
"""
import csv
import json
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

from pydantic import BaseModel, Field

from ..utils import get_logger

logger = get_logger(__name__)


class CcdfRow(BaseModel):
    threshold_db: float
    ccdf: float


class BerRow(BaseModel):
    snr_db: float
    ber: float
    bits: int
    errors: int
    index_errors: int = 0
    symbol_errors: int = 0
    blocks: int = 0


class SchemeReport(BaseModel):
    """Per-scheme results"""
    name: str
    radii: List[float] = Field(default_factory=list)
    eb: Optional[float] = None
    eb_shift_db: Optional[float] = None
    mean_power: Optional[float] = None
    reference_power: Optional[float] = None
    nu_bound: float
    mean_nu: Optional[float] = None
    min_nu: Optional[float] = None
    nu_violations: int = 0
    blocks: int = 0
    nonconverged_fraction: float = 0.0
    mean_iterations: float = 0.0
    max_iterations: int = 0
    mean_papr_reduction_db: Optional[float] = None
    papr_at_1e2_db: Optional[float] = None
    papr_at_1e3_db: Optional[float] = None
    ccdf: List[CcdfRow] = Field(default_factory=list)
    ber: List[BerRow] = Field(default_factory=list)


class SystemSummary(BaseModel):
    N: int
    n: int
    k: int
    g: int
    M: int
    K: int
    p1: int
    p2: int
    p: int
    m: int


class RunReport(BaseModel):
    """Self-describing record of one run"""
    command: str
    spec: Dict[str, Any]
    spec_digest: str
    rng_algorithm: str
    system: SystemSummary
    amplitude_levels: List[float]
    legal_patterns: List[List[int]]
    detector_fallback: str
    schemes: List[SchemeReport] = Field(default_factory=list)

    def scheme(self, name: str) -> SchemeReport:
        for scheme in self.schemes:
            if scheme.name == name:
                return scheme
        raise KeyError(name)


ConstellationRow = Tuple[float, float, str, int, int]


def _write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    with open(path, "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([repr(v) if isinstance(v, float) else v for v in row])
    return path


def write_ccdf_csv(directory: Path, scheme: SchemeReport) -> Path:
    return _write_csv(directory / f"papr_{scheme.name}.csv", ("threshold_db", "ccdf"),
                      ((row.threshold_db, row.ccdf) for row in scheme.ccdf))


def write_ber_csv(directory: Path, scheme: SchemeReport) -> Path:
    return _write_csv(directory / f"ber_{scheme.name}.csv", ("snr_db", "ber", "bits", "errors"),
                      ((row.snr_db, row.ber, row.bits, row.errors) for row in scheme.ber))


def write_constellation_csv(directory: Path, name: str, rows: List[ConstellationRow]) -> Path:
    return _write_csv(directory / f"constellation_{name}.csv",
                      ("re", "im", "kind", "group", "subblock"), rows)


def write_json(path: Path, payload: Any) -> Path:
    with open(path, "w") as f:
        if isinstance(payload, BaseModel):
            f.write(payload.model_dump_json(indent=2))
        else:
            json.dump(payload, f, indent=2, sort_keys=True)
        f.write("\n")
    return path


def write_run(
    directory: Path,
    report: RunReport,
    timing: Optional[Dict[str, float]] = None,
    clouds: Optional[Dict[str, List[ConstellationRow]]] = None,
) -> List[Path]:
    """
    Write every artifact of a run into `directory`

    Raises:
        OSError: directory cannot be created or written
    """
    directory.mkdir(parents=True, exist_ok=True)
    written = [write_json(directory / "report.json", report)]
    for scheme in report.schemes:
        if scheme.ccdf:
            written.append(write_ccdf_csv(directory, scheme))
        if scheme.ber:
            written.append(write_ber_csv(directory, scheme))
    for name, rows in (clouds or {}).items():
        written.append(write_constellation_csv(directory, name, rows))
    if timing is not None:
        written.append(write_json(directory / "timing.json", timing))
    logger.info(f"Wrote {len(written)} files to {directory}")
    return written
