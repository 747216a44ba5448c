"""Path loss along the street for one urban height realization (H = 50 m, 4 GHz)."""

import argparse

from uavchan import RadioConfig, preset_params, sweep_horizontal
from uavchan.cli import write_samples_csv
from uavchan.stats import summarize_sweep

p = argparse.ArgumentParser(description=__doc__)
p.add_argument("--seed", type=int, default=0)
p.add_argument("--out", default="fig3_horizontal.csv")
args = p.parse_args()

samples = sweep_horizontal((0.0, 100.0), 0.1, 50.0, preset_params("urban"), args.seed, RadioConfig(4e9))
with open(args.out, "w", newline="") as fh:
    write_samples_csv(fh, samples)

summary = summarize_sweep(samples)
print(f"wrote {len(samples)} rows to {args.out}")
print(f"mu = {summary.fit.mu:.2f} dB, sigma = {summary.fit.sigma:.2f} dB, num_wr histogram {summary.wr_histogram}")
# runs of constant num_wr, to eyeball the periodic facade pattern
runs, start = [], 0
for i in range(1, len(samples) + 1):
    if i == len(samples) or samples[i].num_wr != samples[start].num_wr:
        runs.append((samples[start].D, samples[i - 1].D, samples[start].num_wr))
        start = i
for a, b, n in runs:
    print(f"  D {a:6.1f} .. {b:6.1f} m : {n} wall reflection(s)")
