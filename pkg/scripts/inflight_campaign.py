"""In-flight style campaign: proximity-triggered meaconing, then saturating RFI.

The receiver circles (3 km radius) around a point 3 km from the rooftop
spoofer, so the 4.5 km proximity trigger switches the spoofer on and off.
``--realtime`` paces the run against the wall clock.

    python scripts/inflight_campaign.py --realtime --speed 20
"""

import argparse
import json
import sys
from pathlib import Path

from gnss_threat_sim.engine import FAST_TIME, REAL_TIME, RunConfig, run
from gnss_threat_sim.io import SynthParams, Trajectory, synth_trace
from gnss_threat_sim.scenario import load

ROOT = Path(__file__).resolve().parent.parent


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=ROOT / "results" / "inflight")
    ap.add_argument("--realtime", action="store_true")
    ap.add_argument("--speed", type=float, default=20.0)
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)

    params = SynthParams(duration=600.0, start=1800.0, n_satellites=9, seed=4,
                         trajectory=Trajectory("circular", radius_m=3000.0, speed_mps=50.0))
    for name in ("inflight_spoofing", "inflight_jamming"):
        scen = load(ROOT / "scenarios" / f"{name}.json")
        cfg = RunConfig(scen, mode=REAL_TIME if args.realtime else FAST_TIME,
                        speed_factor=args.speed)
        with (args.out / f"{name}.fdr.jsonl").open("w") as sink:
            summary = run(synth_trace(params), cfg, sink)
        print(name, json.dumps(summary.to_json(), indent=2), file=sys.stderr)


if __name__ == "__main__":
    main()
