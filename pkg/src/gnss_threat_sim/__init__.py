"""Measurement-level GNSS jamming and spoofing injection."""

from .engine import RunConfig, RunSummary, run, run_records, step
from .model import Band, MeasurementEpoch, SatelliteId, db_to_linear, gamma, linear_to_db
from .scenario import ScenarioError, ThreatScenario, active_at, load, validate

__all__ = [
    "Band", "MeasurementEpoch", "RunConfig", "RunSummary", "SatelliteId", "ScenarioError",
    "ThreatScenario", "active_at", "db_to_linear", "gamma", "linear_to_db", "load",
    "run", "run_records", "step", "validate",
]
