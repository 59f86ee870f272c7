"""Spoofing-signal delay, deviation and pseudorange drift of G20.

Runs the non-smart and smart spoofing fixtures over the same synthetic
trace and checks that the drift curves coincide.

    python scripts/spoofing_drift.py --out results/spoofing
"""

import argparse
from pathlib import Path

from gnss_threat_sim.engine import RunConfig, run_records
from gnss_threat_sim.io import SynthParams, synth_trace
from gnss_threat_sim.model import Band, gamma
from gnss_threat_sim.scenario import load

ROOT = Path(__file__).resolve().parent.parent
PRNS = (2, 5, 12, 19, 20, 25, 29, 31)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=ROOT / "results" / "spoofing")
    ap.add_argument("--no-plot", action="store_true")
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)

    trace = list(synth_trace(SynthParams(duration=200.0, prns=PRNS, n_satellites=len(PRNS))))
    rows = {}
    for mode in ("nonsmart", "smart"):
        scen = load(ROOT / "scenarios" / f"fast_time_spoofing_{mode}.json")
        recs, _ = run_records(trace, RunConfig(scen, verbosity="active"))
        rows[mode] = [r for r in recs if r.sat == "G20"]
    same = [(a.drift_m, a.combined_pr_m) for a in rows["nonsmart"]] == \
           [(b.drift_m, b.combined_pr_m) for b in rows["smart"]]
    print("drift identical across modes:", same)

    g = gamma()
    l1 = [r for r in rows["nonsmart"] if r.band == "L1"]
    l5 = {r.t: r for r in rows["nonsmart"] if r.band == "L5"}
    print(f"{'t':>5} {'delay ns':>10} {'L1 drift':>10} {'L5 drift':>10} {'combined':>10}")
    for r in l1[::2]:
        authentic = l5[r.t].pr_in_m / (1 - g) - g / (1 - g) * r.pr_in_m
        comb = r.combined_pr_m - authentic
        print(f"{r.t:5.0f} {r.delay_s * 1e9:10.1f} {r.drift_m:10.2f} "
              f"{l5[r.t].drift_m:10.2f} {comb:10.2f}")
    if args.no_plot:
        return
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    t = [r.t for r in l1]
    fig, axes = plt.subplots(3, 1, sharex=True, figsize=(9, 7))
    axes[0].plot(t, [r.delay_s * 1e9 for r in l1])
    axes[0].set_ylabel("delay [ns]")
    axes[1].plot(t, [r.deviation_s * 1e9 for r in l1])
    for band in Band:
        axes[1].axhline(band.chip_period * 1e9, ls="--", lw=0.8, label=f"{band.value} chip")
    axes[1].set_yscale("log")
    axes[1].set_ylabel("deviation [ns]")
    axes[1].legend()
    axes[2].plot(t, [r.drift_m for r in l1], label="L1")
    axes[2].plot(t, [l5[x].drift_m for x in t], label="L5")
    axes[2].set_ylabel("drift [m]")
    axes[2].set_xlabel("time [s]")
    axes[2].legend()
    for ax in axes:
        ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(args.out / "drift_G20.png", dpi=120)
    print("wrote", args.out / "drift_G20.png")


if __name__ == "__main__":
    main()
