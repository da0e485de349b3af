"""Wind observation ingestion and direction/speed probability models.

Hourly observations are parsed from NDBC, NCEI or generic CSV files,
extrapolated to a common reference height with the logarithmic profile,
and binned into a direction-sector x speed-bin probability table.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import Sequence

import numpy as np

# Roughness lengths (m): open sea / open land defaults.
ROUGHNESS_OFFSHORE = 0.0002
ROUGHNESS_ONSHORE = 0.03

# NDBC missing-value sentinels.
_NDBC_MISSING_SPEED = (99.0, 999.0)
_NDBC_MISSING_DIR = (999.0,)

GENERIC_CSV_HEADER = ["timestamp", "speed_mps", "direction_deg", "height_m"]


class ParseError(ValueError):
    """Raised when an observation file cannot be parsed.

    Carries the 1-based line number of the offending row when known.
    """

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class EmptyDatasetError(ValueError):
    """Raised when parsing or binning is left with zero usable samples."""


@dataclass(frozen=True)
class WindSample:
    """One hourly observation: speed/direction at a measurement height."""

    timestamp: datetime
    speed: float  # m/s
    direction: float  # degrees, wind-from, [0, 360)
    measurement_height: float  # m above surface

    def __post_init__(self):
        if not self.speed >= 0.0:
            raise ValueError(f"speed must be >= 0, got {self.speed}")
        if not 0.0 <= self.direction < 360.0:
            raise ValueError(f"direction must be in [0, 360), got {self.direction}")
        if not self.measurement_height > 0.0:
            raise ValueError(f"measurement height must be > 0, got {self.measurement_height}")


@dataclass(frozen=True)
class SurfaceRoughness:
    """Roughness length z0 in metres (0.0002 open sea, 0.03 open land)."""

    z0: float

    def __post_init__(self):
        if not self.z0 > 0.0:
            raise ValueError(f"roughness length must be > 0, got {self.z0}")


@dataclass(frozen=True)
class ColumnMapping:
    """Maps CSV column names onto sample fields (used for NCEI-style files).

    speed_scale converts the file's speed unit to m/s (NCEI LCD reports mph).
    Values that fail to parse as numbers are treated as missing and dropped.
    """

    timestamp: str = "DATE"
    speed: str = "HourlyWindSpeed"
    direction: str = "HourlyWindDirection"
    speed_scale: float = 0.44704  # mph -> m/s
    missing: tuple[str, ...] = ("", "NA", "VRB", "*", "999", "9999")


@dataclass(frozen=True)
class WindDistribution:
    """Discrete direction-sector x speed-bin probability model.

    Sector s is centred on s * sector_width degrees and covers
    [s*w - w/2, s*w + w/2), wrapping at 360.  The top speed bin is
    open-ended; bin representatives are midpoints of the edge pairs.
    In "product" mode the joint probability is p_theta[s] * p_u[b];
    in "joint" mode the stored table is used directly.
    """

    reference_height: float  # m
    sector_count: int
    speed_bin_edges: tuple[float, ...]  # ascending, len = bins + 1
    p_theta: tuple[float, ...]
    p_u: tuple[float, ...]
    mode: str = "product"  # "product" | "joint"
    p_joint: tuple[tuple[float, ...], ...] | None = None

    def __post_init__(self):
        if self.sector_count < 1:
            raise ValueError("sector_count must be >= 1")
        if self.mode not in ("product", "joint"):
            raise ValueError(f"unknown mode {self.mode!r}")
        edges = np.asarray(self.speed_bin_edges, dtype=float)
        if edges.size < 2 or np.any(np.diff(edges) <= 0):
            raise ValueError("speed bin edges must be strictly increasing")
        pt = np.asarray(self.p_theta, dtype=float)
        pu = np.asarray(self.p_u, dtype=float)
        if pt.size != self.sector_count:
            raise ValueError("p_theta length must equal sector_count")
        if pu.size != edges.size - 1:
            raise ValueError("p_u length must equal number of speed bins")
        if np.any(pt < 0) or np.any(pu < 0):
            raise ValueError("probabilities must be non-negative")
        if abs(pt.sum() - 1.0) > 1e-9 or abs(pu.sum() - 1.0) > 1e-9:
            raise ValueError("marginal probabilities must sum to 1 within 1e-9")
        if self.mode == "joint":
            if self.p_joint is None:
                raise ValueError("joint mode requires p_joint table")
            pj = np.asarray(self.p_joint, dtype=float)
            if pj.shape != (self.sector_count, edges.size - 1):
                raise ValueError("p_joint shape must be (sectors, bins)")
            if np.any(pj < 0) or abs(pj.sum() - 1.0) > 1e-9:
                raise ValueError("joint table must be a probability table")
            if np.max(np.abs(pj.sum(axis=1) - pt)) > 1e-9:
                raise ValueError("joint rows must sum to p_theta within 1e-9")
            if np.max(np.abs(pj.sum(axis=0) - pu)) > 1e-9:
                raise ValueError("joint columns must sum to p_u within 1e-9")

    @property
    def sector_width(self) -> float:
        return 360.0 / self.sector_count

    def sector_centers(self) -> np.ndarray:
        return np.arange(self.sector_count) * self.sector_width

    def bin_midpoints(self) -> np.ndarray:
        edges = np.asarray(self.speed_bin_edges)
        return 0.5 * (edges[:-1] + edges[1:])

    def weights(self) -> np.ndarray:
        """Joint probability table, shape (sectors, bins)."""
        if self.mode == "joint":
            return np.asarray(self.p_joint, dtype=float)
        return np.outer(self.p_theta, self.p_u)

    def to_json(self) -> str:
        doc = {
            "reference_height": self.reference_height,
            "sector_count": self.sector_count,
            "sector_width": self.sector_width,
            "speed_bin_edges": list(self.speed_bin_edges),
            "p_theta": list(self.p_theta),
            "p_u": list(self.p_u),
            "mode": self.mode,
            "p_joint": [list(r) for r in self.p_joint] if self.p_joint else None,
        }
        return json.dumps(doc, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "WindDistribution":
        doc = json.loads(text)
        pj = doc.get("p_joint")
        return cls(
            reference_height=float(doc["reference_height"]),
            sector_count=int(doc["sector_count"]),
            speed_bin_edges=tuple(doc["speed_bin_edges"]),
            p_theta=tuple(doc["p_theta"]),
            p_u=tuple(doc["p_u"]),
            mode=doc.get("mode", "product"),
            p_joint=tuple(tuple(r) for r in pj) if pj else None,
        )


def extrapolate_speed(v_h1: float, h1: float, h2: float, z0: float) -> float:
    """Extrapolate a speed between heights with the logarithmic profile.

    v(h2) = v(h1) * ln(h2/z0) / ln(h1/z0); both heights must exceed z0.
    """
    if h1 <= z0 or h2 <= z0:
        raise ValueError(f"heights must exceed roughness length {z0} m (got {h1}, {h2})")
    if v_h1 < 0:
        raise ValueError("speed must be >= 0")
    return v_h1 * math.log(h2 / z0) / math.log(h1 / z0)


def _require_nonempty(samples: list[WindSample], source: str) -> list[WindSample]:
    if not samples:
        raise EmptyDatasetError(f"no usable samples in {source} input")
    return samples


def _parse_iso_timestamp(text: str, line: int) -> datetime:
    raw = text.strip()
    if raw.endswith(("Z", "z")):
        raw = raw[:-1] + "+00:00"
    try:
        ts = datetime.fromisoformat(raw)
    except ValueError as exc:
        raise ParseError(f"bad timestamp {text!r}: {exc}", line) from None
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    return ts.astimezone(timezone.utc)


def _parse_ndbc(raw_text: str, measurement_height: float) -> list[WindSample]:
    lines = raw_text.splitlines()
    header_tokens: list[str] | None = None
    header_line = 0
    for i, line in enumerate(lines, start=1):
        if line.strip():
            header_tokens = line.lstrip("#").split()
            header_line = i
            break
    if header_tokens is None:
        raise ParseError("empty file")

    def col(*names: str) -> int:
        for name in names:
            if name in header_tokens:
                return header_tokens.index(name)
        raise ParseError(f"missing column {names[0]} in header", header_line)

    i_year = col("YY", "YYYY")
    i_dir = col("WDIR", "WD", "DIR")
    i_spd = col("WSPD")
    has_minute = "mm" in header_tokens

    samples: list[WindSample] = []
    for lineno, line in enumerate(lines[header_line:], start=header_line + 1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue  # units line and comments
        tok = line.split()
        if len(tok) != len(header_tokens):
            raise ParseError(f"expected {len(header_tokens)} columns, got {len(tok)}", lineno)
        if tok[i_dir] == "MM" or tok[i_spd] == "MM":
            continue
        try:
            year = int(tok[i_year])
            month, day, hour = int(tok[1]), int(tok[2]), int(tok[3])
            minute = int(tok[4]) if has_minute else 0
            direction = float(tok[i_dir])
            speed = float(tok[i_spd])
        except ValueError as exc:
            raise ParseError(f"bad value: {exc}", lineno) from None
        if year < 100:
            year += 1900
        if speed in _NDBC_MISSING_SPEED or direction in _NDBC_MISSING_DIR:
            continue
        try:
            ts = datetime(year, month, day, hour, minute, tzinfo=timezone.utc)
            samples.append(WindSample(ts, speed, direction % 360.0, measurement_height))
        except ValueError as exc:
            raise ParseError(str(exc), lineno) from None
    return samples


def _parse_ncei(raw_text: str, measurement_height: float, mapping: ColumnMapping) -> list[WindSample]:
    reader = csv.DictReader(raw_text.splitlines())
    if reader.fieldnames is None:
        raise ParseError("empty file")
    for name in (mapping.timestamp, mapping.speed, mapping.direction):
        if name not in reader.fieldnames:
            raise ParseError(f"missing column {name!r} in header", 1)
    samples: list[WindSample] = []
    for lineno, row in enumerate(reader, start=2):
        raw_speed = (row[mapping.speed] or "").strip()
        raw_dir = (row[mapping.direction] or "").strip()
        if raw_speed in mapping.missing or raw_dir in mapping.missing:
            continue
        try:
            speed = float(raw_speed) * mapping.speed_scale
            direction = float(raw_dir) % 360.0
        except ValueError:
            continue  # quality-flagged or suspect value
        ts = _parse_iso_timestamp(row[mapping.timestamp], lineno)
        samples.append(WindSample(ts, speed, direction, measurement_height))
    return samples


def _parse_generic_csv(raw_text: str) -> list[WindSample]:
    reader = csv.reader(raw_text.splitlines())
    try:
        header = next(reader)
    except StopIteration:
        raise ParseError("empty file") from None
    if [h.strip() for h in header] != GENERIC_CSV_HEADER:
        raise ParseError(f"expected header {','.join(GENERIC_CSV_HEADER)!r}", 1)
    samples: list[WindSample] = []
    for lineno, row in enumerate(reader, start=2):
        if not row or all(not f.strip() for f in row):
            continue
        if len(row) != 4:
            raise ParseError(f"expected 4 fields, got {len(row)}", lineno)
        ts = _parse_iso_timestamp(row[0], lineno)
        try:
            sample = WindSample(ts, float(row[1]), float(row[2]) % 360.0, float(row[3]))
        except ValueError as exc:
            raise ParseError(str(exc), lineno) from None
        samples.append(sample)
    return samples


def parse_observations(
    raw_text: str,
    format: str,
    measurement_height: float | None = None,
    mapping: ColumnMapping | None = None,
) -> list[WindSample]:
    """Parse raw observation text into samples, dropping missing-value rows.

    format is one of "ndbc", "ncei", "generic_csv".  NDBC and NCEI files do
    not carry the anemometer height, so measurement_height is required for
    them; generic CSV rows carry their own height_m column.  Sample order is
    preserved.  Raises ParseError (with line number) on malformed input and
    EmptyDatasetError when every row was filtered out.
    """
    if not raw_text.strip():
        raise ParseError("empty file")
    if format == "ndbc":
        if measurement_height is None:
            raise ValueError("measurement_height is required for NDBC input")
        return _require_nonempty(_parse_ndbc(raw_text, measurement_height), "NDBC")
    if format == "ncei":
        if measurement_height is None:
            raise ValueError("measurement_height is required for NCEI input")
        return _require_nonempty(
            _parse_ncei(raw_text, measurement_height, mapping or ColumnMapping()), "NCEI"
        )
    if format == "generic_csv":
        return _require_nonempty(_parse_generic_csv(raw_text), "CSV")
    raise ValueError(f"unsupported format {format!r}")


def default_speed_bin_edges(bin_width: float = 1.0, max_speed: float = 40.0) -> tuple[float, ...]:
    """Bin edges from 0 to max_speed; the top bin additionally absorbs faster samples."""
    n = int(math.ceil(max_speed / bin_width))
    return tuple(i * bin_width for i in range(n + 1))


def build_distribution(
    samples: Sequence[WindSample],
    sector_count: int = 12,
    speed_bin_width: float = 1.0,
    reference_height: float = 80.0,
    z0: SurfaceRoughness | float = ROUGHNESS_OFFSHORE,
    joint: bool = False,
) -> WindDistribution:
    """Bin samples into the sector/speed probability table.

    Speeds are extrapolated to reference_height before binning; sectors are
    centred on multiples of 360/sector_count; the top speed bin is open.
    """
    if not samples:
        raise EmptyDatasetError("cannot build a distribution from zero samples")
    if sector_count < 1:
        raise ValueError("sector_count must be >= 1")
    if speed_bin_width <= 0:
        raise ValueError("speed_bin_width must be > 0")
    z0_val = z0.z0 if isinstance(z0, SurfaceRoughness) else float(z0)

    edges = default_speed_bin_edges(speed_bin_width)
    n_bins = len(edges) - 1
    width = 360.0 / sector_count

    sector_counts = np.zeros(sector_count, dtype=np.int64)
    joint_counts = np.zeros((sector_count, n_bins), dtype=np.int64)
    bin_counts = np.zeros(n_bins, dtype=np.int64)
    for s in samples:
        v_ref = extrapolate_speed(s.speed, s.measurement_height, reference_height, z0_val)
        sector = int(math.floor((s.direction + width / 2.0) / width)) % sector_count
        b = min(int(np.searchsorted(edges, v_ref, side="right")) - 1, n_bins - 1)
        b = max(b, 0)
        sector_counts[sector] += 1
        bin_counts[b] += 1
        joint_counts[sector, b] += 1

    total = float(len(samples))
    return WindDistribution(
        reference_height=reference_height,
        sector_count=sector_count,
        speed_bin_edges=edges,
        p_theta=tuple(sector_counts / total),
        p_u=tuple(bin_counts / total),
        mode="joint" if joint else "product",
        p_joint=tuple(tuple(r) for r in joint_counts / total) if joint else None,
    )


def mean_speed(dist: WindDistribution) -> float:
    """Probability-weighted mean of the speed-bin midpoints (m/s)."""
    return float(np.dot(dist.p_u, dist.bin_midpoints()))
