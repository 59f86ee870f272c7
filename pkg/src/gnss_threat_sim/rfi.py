"""SNR gain under continuous RFI, pulsed RFI and spoofing power.

All ratios here are linear. The gain of satellite i on band f is

    G = (1 - beta) / (1 + INR_c + INR_p + SPNR_i)

with INR_c = SNR_max / SIR_c, INR_p = (1/beta) * sum(SNR_max / SIR_p,n * d_n)
and SPNR_i = SNR_i * SSR_i. Once the spoofer has captured satellite i the
roles of SNR_i and SPNR_i are exchanged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping

from .model import Band, MeasurementEpoch, db_to_linear

DEFAULT_TRACKING_THRESHOLD = db_to_linear(10.0)


@dataclass(frozen=True)
class Window:
    start: float
    end: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.start) and math.isfinite(self.end)):
            raise ValueError("window bounds must be finite")
        if not self.start < self.end:
            raise ValueError(f"window inversion: start {self.start} >= end {self.end}")

    def contains(self, t: float) -> bool:
        return self.start <= t <= self.end


@dataclass(frozen=True)
class ContinuousInterferer:
    window: Window
    sir: Mapping[Band, float]
    name: str = "continuous"

    def __post_init__(self) -> None:
        if any(not v > 0.0 for v in self.sir.values()):
            raise ValueError(f"{self.name}: SIR must be positive")


@dataclass(frozen=True)
class PulsedInterferer:
    window: Window
    sir_peak: Mapping[Band, float]
    duty_cycle: float
    name: str = "pulsed"

    def __post_init__(self) -> None:
        if not 0.0 < self.duty_cycle <= 1.0:
            raise ValueError(f"{self.name}: duty cycle {self.duty_cycle} outside (0, 1]")
        if any(not v > 0.0 for v in self.sir_peak.values()):
            raise ValueError(f"{self.name}: peak SIR must be positive")


@dataclass(frozen=True)
class ReceiverRfConfig:
    blanker_beta: float = 0.0
    tracking_threshold: float = DEFAULT_TRACKING_THRESHOLD

    def __post_init__(self) -> None:
        if not 0.0 <= self.blanker_beta < 1.0:
            raise ValueError(f"blanker duty cycle {self.blanker_beta} outside [0, 1)")
        if not self.tracking_threshold > 0.0:
            raise ValueError("tracking threshold must be positive")


@dataclass(frozen=True)
class GainBreakdown:
    inr_c: float
    inr_p: float
    spnr: float
    gain: float
    output_snr: float
    obscured: bool
    locked: bool = False


def snr_max(epoch: MeasurementEpoch, band: Band) -> float:
    """Largest authentic SNR among the satellites observed on ``band``."""
    values = [s.bands[band].snr for s in epoch.satellites if band in s.bands]
    if not values:
        raise ValueError(f"band {band.value} absent from every satellite at t={epoch.t}")
    return max(values)


def inr_continuous(snr_max: float, active: Iterable[ContinuousInterferer],
                   band: Band, t: float) -> float:
    # independent sources add in power
    return sum(snr_max / c.sir[band] for c in active
               if c.window.contains(t) and band in c.sir)


def inr_pulsed(snr_max: float, active: Iterable[PulsedInterferer], band: Band,
               beta: float, t: float) -> float:
    """Duty-weighted pulsed INR, scaled by 1/beta when the blanker is enabled.

    With beta = 0 the blanker is off and pulses enter with their average
    (duty-weighted) power, unscaled.
    """
    total = sum(snr_max / p.sir_peak[band] * p.duty_cycle for p in active
                if p.window.contains(t) and band in p.sir_peak)
    return total / beta if beta > 0.0 else total


def spnr(snr_i: float, ssr_i: float) -> float:
    return snr_i * ssr_i


def swap_locked(snr_i: float, spnr_i: float) -> tuple[float, float]:
    """Exchange authentic and spoofed power after capture."""
    return spnr_i, snr_i


def snr_gain(inr_c: float, inr_p: float, spnr_i: float, snr_i: float,
             ssr_i: float, beta: float, locked: bool,
             tracking_threshold: float = DEFAULT_TRACKING_THRESHOLD) -> GainBreakdown:
    """Combine the interference terms into the SNR gain of one satellite/band.

    Unlocked, the spoofing power sits in the denominator as extra noise.
    Locked, the tracked signal is the spoofed one: its power SPNR_i is the
    numerator and the authentic SNR_i becomes the interfering term. The
    reported gain is always output_snr / snr_i.
    """
    if min(inr_c, inr_p, spnr_i, snr_i, ssr_i) < 0.0:
        raise ValueError("interference ratios must be non-negative")
    if not 0.0 <= beta < 1.0:
        raise ValueError(f"blanker duty cycle {beta} outside [0, 1)")
    if locked:
        tracked, interfering = swap_locked(snr_i, spnr_i)
        output = (1.0 - beta) * tracked / (1.0 + inr_c + inr_p + interfering)
        gain = (1.0 - beta) * ssr_i / (1.0 + inr_c + inr_p + snr_i)
    else:
        gain = (1.0 - beta) / (1.0 + inr_c + inr_p + spnr_i)
        output = snr_i * gain
    return GainBreakdown(inr_c=inr_c, inr_p=inr_p, spnr=spnr_i, gain=gain,
                         output_snr=output, obscured=output < tracking_threshold,
                         locked=locked)
