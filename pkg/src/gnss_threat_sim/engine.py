"""Per-epoch threat injection, run in fast time or paced against the wall clock."""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from typing import IO, Callable, Iterable, Optional

import numpy as np

from .io import InjectionRecord, dumps_record, fdr_header
from .model import Band, MeasurementEpoch, linear_to_db
from .rfi import inr_continuous, inr_pulsed, snr_gain, snr_max, spnr
from .scenario import ThreatScenario, active_at
from .spoof import (
    SpooferConfig,
    SpooferRuntimeState,
    SpoofResult,
    spoof_satellite,
    unspoofed,
    update_lock,
)

log = logging.getLogger(__name__)

FAST_TIME = "fast_time"
REAL_TIME = "real_time"


@dataclass(frozen=True)
class RunConfig:
    scenario: ThreatScenario
    mode: str = FAST_TIME
    speed_factor: float = 1.0
    # "full": every satellite/band each epoch; "active": only rows touched by a threat
    verbosity: str = "full"

    def __post_init__(self) -> None:
        if self.mode not in (FAST_TIME, REAL_TIME):
            raise ValueError(f"unknown mode {self.mode!r}")
        if not self.speed_factor > 0.0:
            raise ValueError("speed_factor must be positive")
        if self.verbosity not in ("full", "active"):
            raise ValueError(f"unknown verbosity {self.verbosity!r}")


@dataclass
class RunState:
    spoofers: dict[str, SpooferRuntimeState] = field(default_factory=dict)
    last_t: Optional[float] = None

    @classmethod
    def fresh(cls, scenario: ThreatScenario) -> "RunState":
        return cls(spoofers={s.name: SpooferRuntimeState() for s in scenario.spoofers})


class TimeRegressionError(ValueError):
    pass


def step(epoch: MeasurementEpoch, scenario: ThreatScenario,
         state: RunState) -> tuple[list[InjectionRecord], RunState]:
    """Inject every active threat into one epoch.

    Spoofer state is advanced here and only here, once per epoch.
    """
    t, rx = epoch.t, epoch.receiver_position
    if state.last_t is not None and t < state.last_t:
        raise TimeRegressionError(f"time regression: {t} after {state.last_t}")
    state.last_t = t

    active = active_at(scenario, t, rx)
    ids = [s.id for s in epoch.satellites]
    for cfg in scenario.spoofers:
        st = state.spoofers.setdefault(cfg.name, SpooferRuntimeState())
        update_lock(st, cfg, t, ids, rx)

    beta = scenario.receiver.blanker_beta
    threshold = scenario.receiver.tracking_threshold
    inr_c: dict[Band, float] = {}
    inr_p: dict[Band, float] = {}
    tags: dict[Band, list[str]] = {}
    for band in epoch.bands():
        peak = snr_max(epoch, band)
        inr_c[band] = inr_continuous(peak, active.continuous, band, t)
        inr_p[band] = inr_pulsed(peak, active.pulsed, band, beta, t)
        tags[band] = ([c.name for c in active.continuous if band in c.sir]
                      + [p.name for p in active.pulsed if band in p.sir_peak])

    # scenario validation guarantees at most one spoofer per satellite
    assigned: dict[object, SpooferConfig] = {}
    for cfg in active.spoofers:
        for sat_id in ids:
            if cfg.targets_satellite(sat_id):
                assigned.setdefault(sat_id, cfg)

    kind = scenario.receiver_kind
    records: list[InjectionRecord] = []
    for obs in epoch.satellites:
        cfg = assigned.get(obs.id)
        res: SpoofResult = (spoof_satellite(obs, rx, cfg, state.spoofers[cfg.name], t, kind)
                            if cfg is not None else unspoofed(obs, kind))
        for band, meas in obs.bands.items():
            snr_i = meas.snr
            ssr_i = res.ssr[band]
            gb = snr_gain(inr_c[band], inr_p[band], spnr(snr_i, ssr_i), snr_i, ssr_i,
                          beta, res.locked, threshold)
            gain_db = linear_to_db(gb.gain)
            row_tags = tags[band] + ([cfg.name] if res.active else [])
            records.append(InjectionRecord(
                t=t, sat=str(obs.id), band=band.value,
                gain_db=gain_db,
                snr_in_db=meas.snr_db,
                # dB sum keeps the no-threat path exact
                snr_out_db=meas.snr_db + gain_db,
                pr_in_m=meas.pseudorange,
                pr_out_m=res.spoofed_pseudorange[band],
                combined_pr_m=res.combined_pseudorange,
                drift_m=res.drift[band],
                delay_s=res.delay,
                deviation_s=res.deviation,
                ssr_db=linear_to_db(ssr_i) if ssr_i > 0.0 else None,
                locked=res.locked,
                obscured=gb.obscured,
                gated_l1=res.gated.get(Band.L1, False),
                gated_l5=res.gated.get(Band.L5, False),
                threats=tuple(row_tags),
            ))
    return records, state


@dataclass
class PacingStats:
    epochs: int
    mean_lateness_s: float
    p99_lateness_s: float
    max_lateness_s: float

    @classmethod
    def from_samples(cls, lateness: list[float]) -> "PacingStats":
        a = np.asarray(lateness, dtype=float)
        if a.size == 0:
            return cls(0, 0.0, 0.0, 0.0)
        return cls(int(a.size), float(a.mean()), float(np.percentile(a, 99)), float(a.max()))


@dataclass
class RunSummary:
    epochs: int = 0
    records: int = 0
    spans: dict[str, list[list[float]]] = field(default_factory=dict)
    max_abs_drift_m: dict[str, float] = field(default_factory=dict)
    min_gain_db: dict[str, float] = field(default_factory=dict)
    obscured_satellite_epochs: int = 0
    pacing: Optional[PacingStats] = None

    def to_json(self) -> dict:
        out = {
            "epochs": self.epochs,
            "records": self.records,
            "spans": self.spans,
            "max_abs_drift_m": self.max_abs_drift_m,
            "min_gain_db": self.min_gain_db,
            "obscured_satellite_epochs": self.obscured_satellite_epochs,
        }
        if self.pacing is not None:
            out["pacing"] = vars(self.pacing)
        return out


class _SummaryBuilder:
    def __init__(self, scenario: ThreatScenario):
        self.scenario = scenario
        self.summary = RunSummary(spans={n: [] for n in scenario.threat_names()})
        self._open: dict[str, bool] = {n: False for n in scenario.threat_names()}

    def add(self, epoch: MeasurementEpoch, records: list[InjectionRecord], emitted: int) -> None:
        s = self.summary
        s.epochs += 1
        s.records += emitted
        now_active = set(active_at(self.scenario, epoch.t, epoch.receiver_position).tags())
        for name in self._open:
            if name in now_active:
                if self._open[name]:
                    s.spans[name][-1][1] = epoch.t
                else:
                    s.spans[name].append([epoch.t, epoch.t])
                self._open[name] = True
            else:
                self._open[name] = False
        obscured_sats = set()
        for r in records:
            s.max_abs_drift_m[r.sat] = max(s.max_abs_drift_m.get(r.sat, 0.0), abs(r.drift_m))
            s.min_gain_db[r.band] = min(s.min_gain_db.get(r.band, 0.0), r.gain_db)
            if r.obscured:
                obscured_sats.add(r.sat)
        s.obscured_satellite_epochs += len(obscured_sats)


def _keep(rec: InjectionRecord, verbosity: str) -> bool:
    return verbosity == "full" or bool(rec.threats)


def run(trace: Iterable[MeasurementEpoch], config: RunConfig, sink: IO[str],
        clock: Callable[[], float] = time.perf_counter,
        sleep: Callable[[float], None] = time.sleep) -> RunSummary:
    """Process a trace, writing FDR lines to ``sink``.

    In real-time mode the output of each epoch is released no earlier than
    (t - t_first) / speed_factor after the first epoch; lateness is recorded,
    never compensated by dropping epochs. Output is flushed per epoch, and on
    failure whatever was produced so far is flushed before re-raising.
    """
    state = RunState.fresh(config.scenario)
    builder = _SummaryBuilder(config.scenario)
    paced = config.mode == REAL_TIME
    lateness: list[float] = []
    wall0 = first_t = None
    header_done = False
    try:
        for epoch in trace:
            if paced and wall0 is None:
                wall0, first_t = clock(), epoch.t
            records, state = step(epoch, config.scenario, state)
            lines = [dumps_record(r) for r in records if _keep(r, config.verbosity)]
            builder.add(epoch, records, len(lines))
            if paced:
                due = wall0 + (epoch.t - first_t) / config.speed_factor
                while (now := clock()) < due:
                    sleep(due - now)
            if lines:
                if not header_done:
                    sink.write(fdr_header() + "\n")
                    header_done = True
                sink.write("\n".join(lines) + "\n")
            if paced:
                sink.flush()
                lateness.append(clock() - due)
    finally:
        try:
            sink.flush()
        except (OSError, ValueError):
            log.warning("could not flush FDR sink")
    summary = builder.summary
    if paced:
        summary.pacing = PacingStats.from_samples(lateness)
    log.info("run finished: %d epochs, %d records", summary.epochs, summary.records)
    return summary


def run_records(trace: Iterable[MeasurementEpoch],
                config: RunConfig) -> tuple[list[InjectionRecord], RunSummary]:
    """Fast-time run collected in memory (no pacing, no sink)."""
    state = RunState.fresh(config.scenario)
    builder = _SummaryBuilder(config.scenario)
    out: list[InjectionRecord] = []
    for epoch in trace:
        records, state = step(epoch, config.scenario, state)
        kept = [r for r in records if _keep(r, config.verbosity)]
        builder.add(epoch, records, len(kept))
        out.extend(kept)
    return out, builder.summary
