"""Manhattan-scale statistics (gamma = 87.3 m, H = 200 m, D = 0..225 m) over a grid of W, S choices.

The reference run does not state its grid, so this maps how the mean and
spread of the analytical path loss depend on it.
"""

import argparse

from uavchan.cli import RunConfig, manhattan_statistics
from uavchan.scenario import GridLayout

p = argparse.ArgumentParser(description=__doc__)
p.add_argument("--seeds", type=int, default=20)
p.add_argument("--W", type=float, nargs="+", default=[20.0, 40.0, 62.0, 120.0])
p.add_argument("--S", type=float, nargs="+", default=[10.0, 18.3, 30.0, 60.0])
args = p.parse_args()

cfg = RunConfig(manhattan_seeds=args.seeds)
print("reference: mu = 91.87 dB, sigma = 4.21 dB")
print(f"{'W':>6} {'S':>6} {'mu':>7} {'sigma':>7}")
for W in args.W:
    for S in args.S:
        fit, _, _ = manhattan_statistics(cfg, GridLayout(W, S))
        print(f"{W:6.1f} {S:6.1f} {fit.mu:7.2f} {fit.sigma:7.2f}")
