"""Line-delimited JSON traces in, FDR records out.

Trace line (one epoch)::

    {"t": 12.0, "rx": [x, y, z],
     "sats": [{"id": "G19", "pos": [x, y, z],
               "bands": {"L1": {"pr_m": 2.1e7, "snr_db": 45.0}, "L5": {...}}}]}

FDR line (one epoch/satellite/band): the fields of InjectionRecord.
Either stream may start with a ``{"format": ..., "version": 1}`` header.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from typing import IO, Any, Iterable, Iterator, Optional, Union

import numpy as np

from .model import (
    Band,
    BandMeasurement,
    Constellation,
    MeasurementEpoch,
    SatelliteId,
    SatelliteObservation,
    Vec3,
    enu_basis,
    geodetic_to_ecef,
)

TRACE_FORMAT = "gts-trace"
FDR_FORMAT = "gts-fdr"
FORMAT_VERSION = 1

GNSS_SHELL_RADIUS_M = 26_560_000.0
# half a sidereal day, the GPS orbital period
_ORBIT_RATE = 2.0 * math.pi / 43_082.05

Stream = Union[IO[str], IO[bytes], Iterable[str], Iterable[bytes]]


class TraceError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        super().__init__(f"{message} at line {line}" if line is not None else message)


def _lines(source: Stream) -> Iterator[tuple[int, str]]:
    for lineno, raw in enumerate(source, start=1):
        text = raw.decode("utf-8") if isinstance(raw, bytes) else raw
        text = text.strip()
        if text:
            yield lineno, text


def _header(obj: dict, expected: str, lineno: int) -> bool:
    if "format" not in obj:
        return False
    if obj.get("format") != expected or obj.get("version") != FORMAT_VERSION:
        raise TraceError(f"expected {expected} v{FORMAT_VERSION} header, got {obj}", lineno)
    return True


def _dumps(obj: Any) -> str:
    return json.dumps(obj, separators=(",", ":"), allow_nan=False)


# ---------------------------------------------------------------- traces

def epoch_to_json(epoch: MeasurementEpoch) -> dict[str, Any]:
    return {
        "t": epoch.t,
        "rx": list(epoch.receiver_position),
        "sats": [
            {
                "id": str(s.id),
                "pos": list(s.position),
                "bands": {b.value: {"pr_m": m.pseudorange, "snr_db": m.snr_db}
                          for b, m in s.bands.items()},
            }
            for s in epoch.satellites
        ],
    }


def epoch_from_json(obj: dict[str, Any]) -> MeasurementEpoch:
    sats = []
    for s in obj["sats"]:
        bands = {}
        for name, m in s["bands"].items():
            band = Band.parse(name)
            if band in bands:
                raise ValueError(f"{s['id']}: band {band.value} given twice")
            bands[band] = BandMeasurement(float(m["pr_m"]), float(m["snr_db"]))
        sats.append(SatelliteObservation(SatelliteId.parse(s["id"]), _vec(s["pos"]), bands))
    return MeasurementEpoch(float(obj["t"]), _vec(obj["rx"]), tuple(sats))


def _vec(v: Any) -> Vec3:
    if not isinstance(v, list) or len(v) != 3:
        raise ValueError("expected a 3-element position")
    return (float(v[0]), float(v[1]), float(v[2]))


def read_trace(source: Stream) -> Iterator[MeasurementEpoch]:
    """Lazily parse and validate epochs, rejecting time regressions."""
    last_t: Optional[float] = None
    for lineno, text in _lines(source):
        try:
            obj = json.loads(text)
            if lineno == 1 and isinstance(obj, dict) and _header(obj, TRACE_FORMAT, lineno):
                continue
            epoch = epoch_from_json(obj)
        except TraceError:
            raise
        except (ValueError, KeyError, TypeError) as exc:
            raise TraceError(f"malformed record ({exc})", lineno) from exc
        if last_t is not None and epoch.t <= last_t:
            raise TraceError("time regression", lineno)
        last_t = epoch.t
        yield epoch


def write_trace(epochs: Iterable[MeasurementEpoch], sink: IO[str]) -> int:
    sink.write(_dumps({"format": TRACE_FORMAT, "version": FORMAT_VERSION}) + "\n")
    n = 0
    for epoch in epochs:
        sink.write(_dumps(epoch_to_json(epoch)) + "\n")
        n += 1
    return n


# ---------------------------------------------------------------- synthetic traces

@dataclass(frozen=True)
class Trajectory:
    """Receiver path in the local horizontal plane around a geodetic origin."""

    kind: str = "straight"  # static | straight | circular
    lat_deg: float = 41.12
    lon_deg: float = 14.18
    height_m: float = 500.0
    speed_mps: float = 50.0
    heading_deg: float = 90.0
    radius_m: float = 2000.0

    def __post_init__(self) -> None:
        if self.kind not in ("static", "straight", "circular"):
            raise ValueError(f"unknown trajectory kind {self.kind!r}")
        if self.kind == "circular" and not self.radius_m > 0.0:
            raise ValueError("circular trajectory needs a positive radius")

    def position(self, t_rel: float) -> Vec3:
        origin = np.array(geodetic_to_ecef(self.lat_deg, self.lon_deg, self.height_m))
        east, north, _ = (np.array(v) for v in enu_basis(self.lat_deg, self.lon_deg))
        if self.kind == "static":
            p = origin
        elif self.kind == "straight":
            h = math.radians(self.heading_deg)
            p = origin + self.speed_mps * t_rel * (math.sin(h) * east + math.cos(h) * north)
        else:
            phi = self.speed_mps / self.radius_m * t_rel
            p = origin + self.radius_m * (math.cos(phi) * east + math.sin(phi) * north)
        return (float(p[0]), float(p[1]), float(p[2]))


@dataclass(frozen=True)
class SynthParams:
    duration: float
    rate: float = 1.0
    n_satellites: int = 8
    seed: int = 0
    start: float = 0.0
    trajectory: Trajectory = Trajectory()
    snr_db: dict[str, float] = field(default_factory=lambda: {"L1": 45.0, "L5": 45.0})
    clock_bias_m: float = 0.0
    prns: Optional[tuple[int, ...]] = None
    satellite_motion: bool = True

    def __post_init__(self) -> None:
        if not (self.duration > 0.0 and self.rate > 0.0):
            raise ValueError("duration and rate must be positive")
        if self.n_satellites < 1:
            raise ValueError("need at least one satellite")
        if self.prns is not None and len(self.prns) != self.n_satellites:
            raise ValueError("prns must list one PRN per satellite")
        if not self.snr_db:
            raise ValueError("at least one band SNR is required")


def _rotate(p: np.ndarray, axis: np.ndarray, angle: float) -> np.ndarray:
    # Rodrigues; axis is a unit vector
    c, s = math.cos(angle), math.sin(angle)
    return p * c + np.cross(axis, p) * s + axis * np.dot(axis, p) * (1.0 - c)


def synth_trace(params: SynthParams) -> Iterator[MeasurementEpoch]:
    """Deterministic synthetic trace for a seed.

    Satellites start above the receiver's horizon on a 26,560 km shell and
    rotate about random axes at the GPS orbital rate. Pseudorange is the
    geometric range plus a constant receiver clock bias; SNR is constant.
    """
    rng = np.random.default_rng(params.seed)
    traj = params.trajectory
    origin = np.array(geodetic_to_ecef(traj.lat_deg, traj.lon_deg, traj.height_m))
    east, north, up = (np.array(v) for v in enu_basis(traj.lat_deg, traj.lon_deg))
    bands = {Band.parse(k): float(v) for k, v in params.snr_db.items()}
    prns = params.prns or tuple(range(1, params.n_satellites + 1))

    starts, axes = [], []
    for _ in range(params.n_satellites):
        el = math.radians(rng.uniform(15.0, 85.0))
        az = math.radians(rng.uniform(0.0, 360.0))
        los = math.cos(el) * (math.sin(az) * east + math.cos(az) * north) + math.sin(el) * up
        # ray origin + s * los meets the shell at |origin + s los| = R
        b = float(np.dot(origin, los))
        s = -b + math.sqrt(b * b - float(np.dot(origin, origin)) + GNSS_SHELL_RADIUS_M ** 2)
        p0 = origin + s * los
        axis = np.cross(p0, rng.normal(size=3))
        starts.append(p0)
        axes.append(axis / np.linalg.norm(axis))

    n_epochs = int(round(params.duration * params.rate))
    rate = _ORBIT_RATE if params.satellite_motion else 0.0
    for k in range(n_epochs):
        t_rel = k / params.rate
        rx = traj.position(t_rel)
        sats = []
        for prn, p0, axis in zip(prns, starts, axes):
            p = _rotate(p0, axis, rate * t_rel) if rate else p0
            pos = (float(p[0]), float(p[1]), float(p[2]))
            rng_m = math.dist(pos, rx) + params.clock_bias_m
            sats.append(SatelliteObservation(
                SatelliteId(Constellation.GPS, prn), pos,
                {b: BandMeasurement(rng_m, snr) for b, snr in bands.items()}))
        yield MeasurementEpoch(params.start + t_rel, rx, tuple(sats))


# ---------------------------------------------------------------- FDR

@dataclass(frozen=True)
class InjectionRecord:
    t: float
    sat: str
    band: str
    gain_db: float
    snr_in_db: float
    snr_out_db: float
    pr_in_m: float
    pr_out_m: float
    combined_pr_m: Optional[float]
    drift_m: float
    delay_s: Optional[float]
    deviation_s: Optional[float]
    ssr_db: Optional[float]
    locked: bool
    obscured: bool
    gated_l1: bool
    gated_l5: bool
    threats: tuple[str, ...] = ()

    def to_json(self) -> dict[str, Any]:
        d = asdict(self)
        d["threats"] = list(self.threats)
        return d

    @classmethod
    def from_json(cls, obj: dict[str, Any]) -> "InjectionRecord":
        obj = dict(obj)
        obj["threats"] = tuple(obj.get("threats", ()))
        return cls(**obj)


def dumps_record(record: InjectionRecord) -> str:
    return _dumps(record.to_json())


def fdr_header() -> str:
    return _dumps({"format": FDR_FORMAT, "version": FORMAT_VERSION})


def write_fdr(records: Iterable[InjectionRecord], sink: IO[str]) -> int:
    """Write records one per line; the header goes out with the first record."""
    n = 0
    for rec in records:
        if n == 0:
            sink.write(fdr_header() + "\n")
        sink.write(dumps_record(rec) + "\n")
        n += 1
    return n


def read_fdr(source: Stream) -> Iterator[InjectionRecord]:
    for lineno, text in _lines(source):
        try:
            obj = json.loads(text)
            if lineno == 1 and _header(obj, FDR_FORMAT, lineno):
                continue
            yield InjectionRecord.from_json(obj)
        except TraceError:
            raise
        except (ValueError, KeyError, TypeError) as exc:
            raise TraceError(f"malformed FDR record ({exc})", lineno) from exc


QUANTITIES = {
    "gain": "gain_db",
    "drift": "drift_m",
    "deviation": "deviation_s",
    "snr": "snr_out_db",
    "pseudorange": "pr_out_m",
    "combined": "combined_pr_m",
}


@dataclass
class PlotSeries:
    t: list[float] = field(default_factory=list)
    value: list[float] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.t)


def export_plot_series(records: Iterable[InjectionRecord], sat: str, band: str,
                       quantity: str) -> PlotSeries:
    """(t, value) columns of one quantity for one satellite and band.

    Missing values (e.g. deviation outside a spoofing window) come out as NaN.
    """
    if quantity not in QUANTITIES:
        raise ValueError(f"unknown quantity {quantity!r}; choose from {sorted(QUANTITIES)}")
    sat_id = str(SatelliteId.parse(sat))
    band_name = Band.parse(band).value
    attr = QUANTITIES[quantity]
    out = PlotSeries()
    seen_any = False
    for rec in records:
        seen_any = True
        if rec.sat == sat_id and rec.band == band_name:
            v = getattr(rec, attr)
            out.t.append(rec.t)
            out.value.append(math.nan if v is None else float(v))
    if seen_any and not out.t:
        raise ValueError(f"no records for satellite {sat_id} on band {band_name}")
    return out
