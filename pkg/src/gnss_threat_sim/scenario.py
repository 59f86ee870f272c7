"""Threat scenario files: schema check, semantic validation, scheduling."""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Any, Iterable, Mapping

import jsonschema

from .model import Band, SatelliteId, Vec3, db_to_linear, gamma
from .rfi import ContinuousInterferer, PulsedInterferer, ReceiverRfConfig, Window
from .spoof import NonSmart, ReceiverKind, Smart, SpooferConfig

SCHEMA_VERSION = 1


class ScenarioError(ValueError):
    """Raised with every problem found in a scenario document."""

    def __init__(self, errors: list[str]):
        self.errors = list(errors)
        super().__init__("invalid scenario:\n" + "\n".join(f"  {e}" for e in self.errors))


@dataclass(frozen=True)
class ThreatScenario:
    receiver: ReceiverRfConfig = ReceiverRfConfig()
    receiver_kind: ReceiverKind = ReceiverKind()
    continuous: tuple[ContinuousInterferer, ...] = ()
    pulsed: tuple[PulsedInterferer, ...] = ()
    spoofers: tuple[SpooferConfig, ...] = ()

    def threat_names(self) -> list[str]:
        return [x.name for x in (*self.continuous, *self.pulsed, *self.spoofers)]


@dataclass(frozen=True)
class ActiveThreatSet:
    t: float
    continuous: tuple[ContinuousInterferer, ...] = ()
    pulsed: tuple[PulsedInterferer, ...] = ()
    spoofers: tuple[SpooferConfig, ...] = ()

    @property
    def empty(self) -> bool:
        return not (self.continuous or self.pulsed or self.spoofers)

    def tags(self) -> list[str]:
        return [x.name for x in (*self.continuous, *self.pulsed, *self.spoofers)]


def active_at(scenario: ThreatScenario, t: float, rx_pos: Vec3) -> ActiveThreatSet:
    return ActiveThreatSet(
        t=t,
        continuous=tuple(c for c in scenario.continuous if c.window.contains(t)),
        pulsed=tuple(p for p in scenario.pulsed if p.window.contains(t)),
        spoofers=tuple(s for s in scenario.spoofers if s.is_active(t, rx_pos)),
    )


@lru_cache(maxsize=1)
def schema() -> dict[str, Any]:
    text = resources.files(__package__).joinpath("data/scenario.schema.json").read_text()
    return json.loads(text)


def _path(parts: Iterable[Any]) -> str:
    out = ""
    for p in parts:
        out += f"[{p}]" if isinstance(p, int) else (f".{p}" if out else str(p))
    return out or "<root>"


def _schema_errors(raw: Any) -> list[str]:
    validator = jsonschema.Draft202012Validator(schema())
    errs = sorted(validator.iter_errors(raw), key=lambda e: list(map(str, e.absolute_path)))
    return [f"{_path(e.absolute_path)}: {e.message}" for e in errs]


class _Collector:
    """Builds domain objects, recording errors instead of stopping at the first."""

    def __init__(self) -> None:
        self.errors: list[str] = []

    def build(self, where: str, fn, *args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except ValueError as exc:
            self.errors.append(f"{where}: {exc}")
            return None

    def per_band(self, where: str, values: Mapping[str, float]) -> dict[Band, float]:
        out: dict[Band, float] = {}
        for key, db in values.items():
            band = self.build(f"{where}.{key}", Band.parse, key)
            lin = self.build(f"{where}.{key}", db_to_linear, db)
            if band is not None and lin is not None:
                if band in out:
                    self.errors.append(f"{where}: band {band.value} given twice (aliases)")
                out[band] = lin
        return out

    def window(self, where: str, pair: list[float]):
        return self.build(f"{where}.window", Window, float(pair[0]), float(pair[1]))


def validate(raw: Any) -> ThreatScenario:
    """Turn a parsed scenario document into a ThreatScenario.

    dB quantities are converted to linear here. Every problem is collected
    and raised together as a ScenarioError; nothing is partially accepted.
    """
    errors = _schema_errors(raw)
    if errors:
        raise ScenarioError(errors)
    c = _Collector()

    rx = raw.get("receiver", {})
    threshold_db = rx.get("tracking_threshold_db", 10.0)
    rf = c.build("receiver", lambda: ReceiverRfConfig(
        blanker_beta=float(rx.get("blanker_beta", 0.0)),
        tracking_threshold=db_to_linear(threshold_db)))
    pair = tuple(Band.parse(b) for b in rx.get("iono_free_pair", ["L1", "L5"]))
    if c.build("receiver.iono_free_pair", gamma, *pair) is None:
        pair = (Band.L1, Band.L5)
    if rx.get("kind", "multi_frequency") == "single_frequency":
        kind = ReceiverKind(multi_frequency=False, band=Band.parse(rx.get("band", "L1")), pair=pair)
    else:
        kind = ReceiverKind(multi_frequency=True, pair=pair)

    continuous = []
    for i, item in enumerate(raw.get("continuous", [])):
        where = f"continuous[{i}]"
        win = c.window(where, item["window"])
        sir = c.per_band(f"{where}.sir_db", item["sir_db"])
        obj = c.build(where, ContinuousInterferer, win, sir, item.get("name", f"continuous-{i}")) \
            if win else None
        if obj:
            continuous.append(obj)

    pulsed = []
    for i, item in enumerate(raw.get("pulsed", [])):
        where = f"pulsed[{i}]"
        win = c.window(where, item["window"])
        sir = c.per_band(f"{where}.sir_peak_db", item["sir_peak_db"])
        obj = c.build(where, PulsedInterferer, win, sir, float(item["duty_cycle"]),
                      item.get("name", f"pulsed-{i}")) if win else None
        if obj:
            pulsed.append(obj)

    spoofers = []
    for i, item in enumerate(raw.get("spoofers", [])):
        where = f"spoofers[{i}]"
        win = c.window(where, item["window"])
        mode_raw = item["mode"]
        if mode_raw["type"] == "non_smart":
            mode = c.build(f"{where}.mode", lambda: NonSmart(db_to_linear(mode_raw["ssr_db"])))
        else:
            mode = c.build(f"{where}.mode", lambda: Smart(
                db_to_linear(mode_raw["ssr_min_db"]), db_to_linear(mode_raw["ssr_max_db"]),
                float(mode_raw["ramp_duration_s"])))
        targets = [c.build(f"{where}.targets", SatelliteId.parse, s)
                   for s in item.get("targets", [])]
        overrides = c.per_band(f"{where}.ssr_db_per_band", item.get("ssr_db_per_band", {}))
        if win is None or mode is None or None in targets:
            continue
        max_range = item.get("max_range_m")
        obj = c.build(where, SpooferConfig,
                      window=win, position=tuple(float(x) for x in item["position"]),
                      mode=mode, dt_proc=float(item.get("dt_proc_s", 0.0)),
                      dt_ctrl=float(item.get("dt_ctrl_s", 0.0)),
                      dt_pred=float(item.get("dt_pred_s", 0.0)),
                      targets=frozenset(targets),
                      max_range=None if max_range is None else float(max_range),
                      ssr_per_band=overrides, name=item.get("name", f"spoofer-{i}"))
        if obj:
            spoofers.append(obj)

    c.errors.extend(_spoofer_overlaps(spoofers))
    names = [x.name for x in (*continuous, *pulsed, *spoofers)]
    for dup in sorted({n for n in names if names.count(n) > 1}):
        c.errors.append(f"threat name {dup!r} used more than once")
    if c.errors:
        raise ScenarioError(c.errors)
    return ThreatScenario(receiver=rf, receiver_kind=kind, continuous=tuple(continuous),
                          pulsed=tuple(pulsed), spoofers=tuple(spoofers))


def _spoofer_overlaps(spoofers: list[SpooferConfig]) -> list[str]:
    errs = []
    for a_i, a in enumerate(spoofers):
        for b in spoofers[a_i + 1:]:
            # closed windows: touching endpoints share an epoch
            if a.window.start > b.window.end or b.window.start > a.window.end:
                continue
            if a.targets and b.targets:
                shared = a.targets & b.targets
                if not shared:
                    continue
                what = ", ".join(sorted(map(str, shared)))
            else:
                what = "all satellites"
            errs.append(f"spoofers {a.name!r} and {b.name!r} overlap in time on {what}")
    return errs


def load(path: str | Path) -> ThreatScenario:
    try:
        raw = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ScenarioError([f"{path}: not valid JSON ({exc})"]) from exc
    return validate(raw)

