"""Domain types, physical constants and unit conversions."""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass, field
from typing import Mapping

SPEED_OF_LIGHT = 299_792_458.0  # m/s

Vec3 = tuple[float, float, float]


def db_to_linear(x_db: float) -> float:
    """Convert a power ratio from decibels to linear units."""
    if not math.isfinite(x_db):
        raise ValueError(f"non-finite dB value: {x_db!r}")
    return 10.0 ** (x_db / 10.0)


def linear_to_db(x: float) -> float:
    """Convert a positive linear power ratio to decibels."""
    if not (x > 0.0 and math.isfinite(x)):
        raise ValueError(f"linear ratio must be positive and finite: {x!r}")
    return 10.0 * math.log10(x)


class Band(enum.Enum):
    L1 = "L1"
    L5 = "L5"

    @property
    def carrier_frequency(self) -> float:
        return _CARRIER_HZ[self]

    @property
    def chip_period(self) -> float:
        return 1.0 / _CHIP_RATE_HZ[self]

    @classmethod
    def parse(cls, name: str) -> "Band":
        """Accept L1/L5 and the Galileo/BeiDou aliases of the same carriers."""
        try:
            return _BAND_ALIASES[name.upper()]
        except KeyError:
            raise ValueError(f"unknown band {name!r}") from None


_CARRIER_HZ = {Band.L1: 1575.42e6, Band.L5: 1176.45e6}
_CHIP_RATE_HZ = {Band.L1: 1.023e6, Band.L5: 10.23e6}
_BAND_ALIASES = {
    "L1": Band.L1, "E1": Band.L1, "B1C": Band.L1,
    "L5": Band.L5, "E5A": Band.L5, "B2A": Band.L5,
}


def gamma(first: Band = Band.L1, second: Band = Band.L5) -> float:
    """Squared carrier-frequency ratio used by the dual-frequency combination.

    Raises ValueError when both carriers coincide, since the combination
    coefficients 1/(1 - gamma) are then undefined.
    """
    f1, f2 = first.carrier_frequency, second.carrier_frequency
    if f1 <= 0.0 or f2 <= 0.0:
        raise ValueError("carrier frequencies must be positive")
    if first is second or f1 == f2:
        raise ValueError(f"singular combination: {first.value}/{second.value} gives gamma = 1")
    return (f1 / f2) ** 2


class Constellation(enum.Enum):
    GPS = "G"
    GALILEO = "E"
    BEIDOU = "C"


_SAT_ID_RE = re.compile(r"^([GEC])(\d{1,3})$")


@dataclass(frozen=True, order=True)
class SatelliteId:
    constellation: Constellation = field(compare=False)
    prn: int = field(compare=False)
    # equality, hashing and ordering all go through the textual id
    _key: str = field(init=False, repr=False, compare=True, default="")

    def __post_init__(self) -> None:
        if self.prn <= 0:
            raise ValueError(f"PRN must be positive, got {self.prn}")
        object.__setattr__(self, "_key", f"{self.constellation.value}{self.prn:02d}")

    @classmethod
    def parse(cls, text: str) -> "SatelliteId":
        m = _SAT_ID_RE.match(text.strip().upper())
        if m is None:
            raise ValueError(f"bad satellite id {text!r} (expected e.g. G19, E05, C12)")
        return cls(Constellation(m.group(1)), int(m.group(2)))

    def __str__(self) -> str:
        return self._key


@dataclass(frozen=True)
class BandMeasurement:
    """Authentic pseudorange and SNR of one satellite on one band.

    SNR is held in dB, as it arrives on the wire, so traces round-trip
    exactly; ``snr`` gives the linear ratio used by the math.
    """

    pseudorange: float
    snr_db: float

    def __post_init__(self) -> None:
        if not (self.pseudorange > 0.0 and math.isfinite(self.pseudorange)):
            raise ValueError(f"pseudorange must be positive, got {self.pseudorange!r}")
        if not math.isfinite(self.snr_db):
            raise ValueError(f"snr_db must be finite, got {self.snr_db!r}")

    @property
    def snr(self) -> float:
        return db_to_linear(self.snr_db)


@dataclass(frozen=True)
class SatelliteObservation:
    id: SatelliteId
    position: Vec3
    bands: Mapping[Band, BandMeasurement]

    def __post_init__(self) -> None:
        if not self.bands:
            raise ValueError(f"{self.id}: at least one band is required")
        _check_vec(self.position, f"{self.id} position")


@dataclass(frozen=True)
class MeasurementEpoch:
    t: float
    receiver_position: Vec3
    satellites: tuple[SatelliteObservation, ...]

    def __post_init__(self) -> None:
        if not math.isfinite(self.t):
            raise ValueError("epoch time must be finite")
        _check_vec(self.receiver_position, "receiver position")
        if not self.satellites:
            raise ValueError(f"epoch t={self.t}: no satellites")
        ids = [s.id for s in self.satellites]
        if len(set(ids)) != len(ids):
            dup = sorted({str(i) for i in ids if ids.count(i) > 1})
            raise ValueError(f"epoch t={self.t}: duplicate satellite {', '.join(dup)}")

    def bands(self) -> list[Band]:
        seen = {b for s in self.satellites for b in s.bands}
        return [b for b in Band if b in seen]


def _check_vec(v: Vec3, what: str) -> None:
    if len(v) != 3 or not all(math.isfinite(c) for c in v):
        raise ValueError(f"{what} must be three finite ECEF coordinates")


_WGS84_A = 6_378_137.0
_WGS84_E2 = 6.694_379_990_14e-3


def geodetic_to_ecef(lat_deg: float, lon_deg: float, height_m: float) -> Vec3:
    lat, lon = math.radians(lat_deg), math.radians(lon_deg)
    n = _WGS84_A / math.sqrt(1.0 - _WGS84_E2 * math.sin(lat) ** 2)
    return (
        (n + height_m) * math.cos(lat) * math.cos(lon),
        (n + height_m) * math.cos(lat) * math.sin(lon),
        (n * (1.0 - _WGS84_E2) + height_m) * math.sin(lat),
    )


def enu_basis(lat_deg: float, lon_deg: float) -> tuple[Vec3, Vec3, Vec3]:
    """East, north and up unit vectors (ECEF components) at a geodetic point."""
    lat, lon = math.radians(lat_deg), math.radians(lon_deg)
    sl, cl, so, co = math.sin(lat), math.cos(lat), math.sin(lon), math.cos(lon)
    return (-so, co, 0.0), (-sl * co, -sl * so, cl), (cl * co, cl * so, sl)
