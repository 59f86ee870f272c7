"""Spoofing geometry, pseudorange drift and spoofer power control.

The spoofed signal travels satellite -> spoofer -> receiver, so relative
to the authentic path it arrives late by

    delay = (d_sat,spoofer + d_spoofer,rx - d_sat,rx) / c + dt_proc + dt_ctrl

and the receiver sees rho_s = rho_a + c * (delay - dt_pred), provided the
code-phase deviation (delay - dt_pred) stays within one chip of the band.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Optional, Union

from .model import (
    SPEED_OF_LIGHT,
    Band,
    SatelliteId,
    SatelliteObservation,
    Vec3,
    db_to_linear,
    gamma as gamma_coefficient,
    linear_to_db,
)
from .rfi import Window

# below this a range is treated as a coincident pair
_MIN_RANGE_M = 1e-6


@dataclass(frozen=True)
class NonSmart:
    """Constant spoofing-to-signal ratio for the whole window."""

    ssr: float

    def __post_init__(self) -> None:
        if not self.ssr > 0.0:
            raise ValueError("ssr must be positive")


@dataclass(frozen=True)
class Smart:
    """Ramp from ssr_min to ssr_max (linear in dB), then hold at ssr_max."""

    ssr_min: float
    ssr_max: float
    ramp_duration: float

    def __post_init__(self) -> None:
        if not (self.ssr_min > 0.0 and self.ssr_max > 0.0):
            raise ValueError("ssr_min and ssr_max must be positive")
        if self.ssr_min > self.ssr_max:
            raise ValueError("ssr_min must not exceed ssr_max")
        if not self.ramp_duration > 0.0:
            raise ValueError("ramp_duration must be positive")


SpooferMode = Union[NonSmart, Smart]


@dataclass(frozen=True)
class ReceiverKind:
    """Single-frequency receivers track ``band``; multi-frequency ones combine L1/L5."""

    multi_frequency: bool = True
    band: Band = Band.L1
    pair: tuple[Band, Band] = (Band.L1, Band.L5)

    @classmethod
    def single(cls, band: Band) -> "ReceiverKind":
        return cls(multi_frequency=False, band=band)


@dataclass(frozen=True)
class SpooferConfig:
    window: Window
    position: Vec3
    mode: SpooferMode
    dt_proc: float = 0.0
    dt_ctrl: float = 0.0
    dt_pred: float = 0.0
    targets: frozenset[SatelliteId] = frozenset()
    max_range: Optional[float] = None
    ssr_per_band: Mapping[Band, float] = field(default_factory=dict)
    name: str = "spoofer"

    def __post_init__(self) -> None:
        if not self.dt_proc >= 0.0:
            raise ValueError("dt_proc must be non-negative")
        if self.max_range is not None and not self.max_range > 0.0:
            raise ValueError("max_range must be positive")
        if any(not v > 0.0 for v in self.ssr_per_band.values()):
            raise ValueError("per-band ssr overrides must be positive")

    def targets_satellite(self, sat: SatelliteId) -> bool:
        return not self.targets or sat in self.targets

    def is_active(self, t: float, rx_pos: Vec3) -> bool:
        if not self.window.contains(t):
            return False
        if self.max_range is not None and math.dist(rx_pos, self.position) > self.max_range:
            return False
        return True


@dataclass
class SpooferRuntimeState:
    """Mutable run state of one spoofer; advanced once per epoch, in time order."""

    locked: dict[SatelliteId, bool] = field(default_factory=dict)
    ramp_elapsed: float = 0.0
    current_ssr: dict[Band, float] = field(default_factory=dict)
    last_t: Optional[float] = None

    def is_locked(self, sat: SatelliteId) -> bool:
        return self.locked.get(sat, False)


@dataclass(frozen=True)
class SpoofResult:
    active: bool
    locked: bool
    delay: Optional[float]
    deviation: Optional[float]
    drift: Mapping[Band, float]
    spoofed_pseudorange: Mapping[Band, float]
    gated: Mapping[Band, bool]
    ssr: Mapping[Band, float]
    combined_pseudorange: Optional[float]


def spoof_delay(sat_pos: Vec3, spoofer_pos: Vec3, rx_pos: Vec3,
                dt_proc: float = 0.0, dt_ctrl: float = 0.0) -> float:
    """Extra delay of the relayed signal over the direct one, in seconds."""
    d_ir = math.dist(sat_pos, rx_pos)
    d_is = math.dist(sat_pos, spoofer_pos)
    if d_ir < _MIN_RANGE_M or d_is < _MIN_RANGE_M:
        raise ValueError("satellite coincides with receiver or spoofer")
    d_sr = math.dist(spoofer_pos, rx_pos)
    # triangle inequality; clamp rounding noise on collinear geometries
    excess = max(d_is + d_sr - d_ir, 0.0)
    return excess / SPEED_OF_LIGHT + dt_proc + dt_ctrl


def drift_per_band(delay: float, dt_pred: float, band: Band) -> tuple[float, bool]:
    """Pseudorange drift in metres and whether the band rejects it.

    A deviation of one chip or more cannot pull the code loop, so the drift
    is dropped (gated) on that band.
    """
    deviation = delay - dt_pred
    if abs(deviation) < band.chip_period:
        return SPEED_OF_LIGHT * deviation, False
    return 0.0, True


def combine_dual_frequency(rho_l5: float, rho_l1: float, gamma: float) -> float:
    if gamma == 1.0:
        raise ValueError("singular combination: gamma = 1")
    return rho_l5 / (1.0 - gamma) - gamma / (1.0 - gamma) * rho_l1


def ssr_at(config: SpooferConfig, state: Optional[SpooferRuntimeState], t: float,
           band: Optional[Band] = None) -> float:
    """Spoofing-to-signal ratio radiated at time ``t`` (0 outside the window).

    A per-band override replaces the constant ratio (non-smart) or the ramp
    ceiling (smart) for that band.
    """
    if not config.window.contains(t):
        return 0.0
    mode = config.mode
    if isinstance(mode, NonSmart):
        return config.ssr_per_band.get(band, mode.ssr)
    top = config.ssr_per_band.get(band, mode.ssr_max)
    frac = (t - config.window.start) / mode.ramp_duration
    if frac >= 1.0:
        return top
    lo_db, hi_db = linear_to_db(min(mode.ssr_min, top)), linear_to_db(top)
    return db_to_linear(lo_db + frac * (hi_db - lo_db))


def ramp_complete(config: SpooferConfig, t: float) -> bool:
    mode = config.mode
    if isinstance(mode, NonSmart):
        return True
    return t - config.window.start >= mode.ramp_duration


def update_lock(state: SpooferRuntimeState, config: SpooferConfig, t: float,
                satellites: Optional[list[SatelliteId]] = None,
                rx_pos: Optional[Vec3] = None,
                bands: tuple[Band, ...] = tuple(Band)) -> SpooferRuntimeState:
    """Advance the spoofer state to epoch time ``t`` and return it.

    ``satellites`` are the ids in view; targeted ones become locked once the
    spoofer is at full power. Locks are kept while the spoofer stays active
    and dropped as soon as it is not (window end or out of range).
    """
    if state.last_t is not None and t < state.last_t:
        raise ValueError(f"time regression: {t} after {state.last_t}")
    state.last_t = t
    active = (config.is_active(t, rx_pos) if rx_pos is not None
              else config.window.contains(t))
    if not active:
        state.locked.clear()
        state.current_ssr = {b: 0.0 for b in bands}
        state.ramp_elapsed = 0.0
        return state
    state.ramp_elapsed = t - config.window.start
    state.current_ssr = {b: ssr_at(config, state, t, b) for b in bands}
    if ramp_complete(config, t):
        for sat in satellites or ():
            if config.targets_satellite(sat):
                state.locked[sat] = True
    return state


def unspoofed(obs: SatelliteObservation, kind: ReceiverKind) -> SpoofResult:
    prs = {b: m.pseudorange for b, m in obs.bands.items()}
    return SpoofResult(
        active=False, locked=False, delay=None, deviation=None,
        drift={b: 0.0 for b in obs.bands}, spoofed_pseudorange=prs,
        gated={b: False for b in obs.bands}, ssr={b: 0.0 for b in obs.bands},
        combined_pseudorange=receiver_pseudorange(prs, kind),
    )


def receiver_pseudorange(prs: Mapping[Band, float], kind: ReceiverKind) -> Optional[float]:
    """Pseudorange a receiver of the given kind reports from per-band values."""
    if not kind.multi_frequency:
        return prs.get(kind.band)
    first, second = kind.pair
    if first not in prs or second not in prs:
        return None
    # the dual-frequency formula is written with L5 first, L1 second
    return combine_dual_frequency(prs[second], prs[first], gamma_coefficient(first, second))


def spoof_satellite(obs: SatelliteObservation, rx_pos: Vec3, config: SpooferConfig,
                    state: SpooferRuntimeState, t: float,
                    receiver_kind: ReceiverKind = ReceiverKind()) -> SpoofResult:
    """Spoofed per-band and receiver-level pseudoranges for one satellite."""
    if not (config.targets_satellite(obs.id) and config.is_active(t, rx_pos)):
        return unspoofed(obs, receiver_kind)
    delay = spoof_delay(obs.position, config.position, rx_pos, config.dt_proc, config.dt_ctrl)
    drift: dict[Band, float] = {}
    gated: dict[Band, bool] = {}
    prs: dict[Band, float] = {}
    for band, meas in obs.bands.items():
        drift[band], gated[band] = drift_per_band(delay, config.dt_pred, band)
        prs[band] = meas.pseudorange + drift[band]
    return SpoofResult(
        active=True, locked=state.is_locked(obs.id), delay=delay,
        deviation=delay - config.dt_pred, drift=drift, spoofed_pseudorange=prs,
        gated=gated, ssr={b: ssr_at(config, state, t, b) for b in obs.bands},
        combined_pseudorange=receiver_pseudorange(prs, receiver_kind),
    )
