"""Regenerate the scenario fixtures under scenarios/.

Spoofer positions are expressed in ECEF, so they are derived here from the
default synthetic trajectory (straight east at 50 m/s, 500 m above
41.12N 14.18E) rather than typed by hand.

    python scripts/make_fixtures.py
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from gnss_threat_sim.io import SynthParams, Trajectory, synth_trace
from gnss_threat_sim.model import Band, enu_basis, geodetic_to_ecef
from gnss_threat_sim.spoof import spoof_delay

OUT = Path(__file__).resolve().parent.parent / "scenarios"
LAT, LON = 41.12, 14.18


def local_point(east_m: float, north_m: float, height_m: float) -> list[float]:
    o = np.array(geodetic_to_ecef(LAT, LON, height_m))
    e, n, _ = (np.array(v) for v in enu_basis(LAT, LON))
    return [float(x) for x in o + east_m * e + north_m * n]


def at_distance(rx: tuple, toward: tuple, dist: float) -> list[float]:
    rx, toward = np.array(rx), np.array(toward)
    u = (toward - rx) / np.linalg.norm(toward - rx)
    return [float(x) for x in rx + dist * u]


PULSES = [
    {"name": f"pulse-{d}pct", "window": [190, 200], "sir_peak_db": {"L1": 40, "L5": 45},
     "duty_cycle": d / 100}
    for d in (3, 4, 5)
]


def fast_time_threats() -> dict:
    # spoofer 800 m north of the receiver's position at spoofing onset
    rx_120 = Trajectory().position(120.0)
    spoofer = at_distance(rx_120, local_point(6000.0, 5000.0, 500.0), 800.0)
    return {
        "schema_version": 1,
        "description": (
            "Fast-time campaign: continuous RFI 20-80 s (SIR 50/60 dB L1/L5), non-smart "
            "spoofer on G19 120-160 s (SSR 15 dB), three pulsed sources 190-200 s "
            "(peak SIR 40/45 dB, duty 3/4/5 %), blanker disabled. Pair with a synthetic "
            "trace at 45 dB SNR on both bands (SNR_max = 45 dB)."
        ),
        "receiver": {"blanker_beta": 0.0, "tracking_threshold_db": 10.0,
                     "kind": "multi_frequency"},
        "continuous": [{"name": "cw-jammer", "window": [20, 80],
                        "sir_db": {"L1": 50, "L5": 60}}],
        "pulsed": PULSES,
        "spoofers": [{"name": "spoofer", "window": [120, 160], "position": spoofer,
                      "mode": {"type": "non_smart", "ssr_db": 15}, "targets": ["G19"]}],
    }


def fast_time_spoofing(mode: dict, sat_pos: tuple) -> dict:
    """Spoofing-only run on G20 with a static spoofer 800 m from the receiver.

    The spoofer sits almost on the receiver-to-satellite line so the initial
    relay excess is small; the receiver then flies away from it and the
    deviation crosses the L5 and later the L1 chip period.
    """
    rx_120 = np.array(Trajectory().position(120.0))
    los = (np.array(sat_pos) - rx_120) / np.linalg.norm(np.array(sat_pos) - rx_120)
    east, _, _ = (np.array(v) for v in enu_basis(LAT, LON))
    # tilt the spoofer off the line of sight, back along the flight direction
    u = los * math.cos(math.radians(12.0)) - east * math.sin(math.radians(12.0))
    u /= np.linalg.norm(u)
    spoofer = [float(x) for x in rx_120 + 800.0 * u]
    return {
        "schema_version": 1,
        "description": ("Spoofing-only fast-time run on G20, 120-160 s, static spoofer 800 m "
                        "from the receiver at onset, multi-frequency receiver."),
        "receiver": {"kind": "multi_frequency"},
        "spoofers": [{"name": "spoofer", "window": [120, 160], "position": spoofer,
                      "mode": mode, "targets": ["G20"], "dt_pred_s": 0.0}],
    }


def inflight_spoofing() -> dict:
    return {
        "schema_version": 1,
        "description": ("In-flight meaconing (dt_pred = 0), SSR 45 dB, 1838-2016 s, enabled "
                        "within 4.5 km of a rooftop spoofer."),
        "receiver": {"kind": "multi_frequency"},
        "spoofers": [{"name": "meaconer", "window": [1838, 2016],
                      "position": local_point(3000.0, 0.0, 30.0),
                      "mode": {"type": "non_smart", "ssr_db": 45}, "dt_pred_s": 0.0,
                      "max_range_m": 4500.0}],
    }


def inflight_jamming() -> dict:
    return {
        "schema_version": 1,
        "description": ("In-flight continuous RFI on L1 and L5, 2138-2279 s, strong enough "
                        "to saturate the front end (output SNR far below the 10 dB "
                        "tracking threshold for 45 dB input)."),
        "receiver": {"kind": "multi_frequency", "tracking_threshold_db": 10.0},
        "continuous": [{"name": "saturating-jammer", "window": [2138, 2279],
                        "sir_db": {"L1": -10, "L5": -10}}],
    }


def main() -> None:
    OUT.mkdir(exist_ok=True)
    first = next(synth_trace(SynthParams(duration=1.0, prns=(2, 5, 12, 19, 20, 25, 29, 31),
                                         n_satellites=8)))
    g20 = next(s for s in first.satellites if str(s.id) == "G20").position
    files = {
        "fast_time_threats.json": fast_time_threats(),
        "fast_time_spoofing_nonsmart.json": fast_time_spoofing(
            {"type": "non_smart", "ssr_db": 15}, g20),
        "fast_time_spoofing_smart.json": fast_time_spoofing(
            {"type": "smart", "ssr_min_db": 0, "ssr_max_db": 15, "ramp_duration_s": 20}, g20),
        "inflight_spoofing.json": inflight_spoofing(),
        "inflight_jamming.json": inflight_jamming(),
    }
    for name, doc in files.items():
        (OUT / name).write_text(json.dumps(doc, indent=2) + "\n")
        print("wrote", OUT / name)

    # report how the spoofing deviation evolves against the chip periods
    spoofer = files["fast_time_spoofing_nonsmart.json"]["spoofers"][0]["position"]
    for t in range(120, 161, 5):
        rx = Trajectory().position(float(t))
        d = spoof_delay(g20, spoofer, rx)
        print(f"t={t:3d}s deviation={d * 1e9:8.1f} ns  "
              f"(L5 chip {Band.L5.chip_period * 1e9:.1f}, L1 chip {Band.L1.chip_period * 1e9:.1f})")


if __name__ == "__main__":
    main()
