"""Fast-time campaign: 10 min synthetic flight with RFI and spoofing windows.

Writes the FDR and a gain-vs-time plot for G19 on L1/L5 (continuous RFI
20-80 s, spoofing 120-160 s, pulsed RFI 190-200 s).

    python scripts/fast_time_campaign.py --out results/fast_time
"""

import argparse
import json
from pathlib import Path

from gnss_threat_sim.engine import RunConfig, run
from gnss_threat_sim.io import SynthParams, export_plot_series, read_fdr, synth_trace
from gnss_threat_sim.scenario import load

ROOT = Path(__file__).resolve().parent.parent
PRNS = (2, 5, 12, 19, 20, 25, 29, 31)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=ROOT / "results" / "fast_time")
    ap.add_argument("--sat", default="G19")
    ap.add_argument("--no-plot", action="store_true")
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)

    scenario = load(ROOT / "scenarios" / "fast_time_threats.json")
    trace = synth_trace(SynthParams(duration=600.0, prns=PRNS, n_satellites=len(PRNS)))
    fdr = args.out / "fdr.jsonl"
    with fdr.open("w") as sink:
        summary = run(trace, RunConfig(scenario), sink)
    print(json.dumps(summary.to_json(), indent=2))

    series = {}
    for band in ("L1", "L5"):
        with fdr.open() as fh:
            series[band] = export_plot_series(read_fdr(fh), args.sat, band, "gain")
    if args.no_plot:
        return
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, axes = plt.subplots(2, 1, sharex=True, figsize=(9, 5))
    for ax, (band, s) in zip(axes, series.items()):
        ax.plot(s.t, s.value, lw=1.2)
        ax.set_ylabel(f"{band} gain [dB]")
        ax.grid(alpha=0.3)
    axes[-1].set_xlabel("time [s]")
    fig.suptitle(f"SNR gain, {args.sat}")
    fig.tight_layout()
    fig.savefig(args.out / f"gain_{args.sat}.png", dpi=120)
    print("wrote", args.out / f"gain_{args.sat}.png")


if __name__ == "__main__":
    main()
