"""Path-loss statistics for suburban, urban and dense urban presets (H = 50 m, D = 0..100 m)."""

import argparse

from uavchan.cli import RunConfig, scenario_pool
from uavchan.scenario import derive_grid, preset_params
from uavchan.stats import normal_fit

REFERENCE_SIGMA = {"dense-urban": 6.15, "urban": 8.03, "suburban": 9.48}

p = argparse.ArgumentParser(description=__doc__)
p.add_argument("--seeds", type=int, default=100)
p.add_argument("--grid-offset", type=float, default=0.0)
args = p.parse_args()

cfg = RunConfig(grid_offset=args.grid_offset)
print(f"{'scenario':<12} {'W':>7} {'S':>7} {'mu':>7} {'sigma':>7} {'ref sigma':>9}  wr0/wr1/wr2")
for name, ref in REFERENCE_SIGMA.items():
    params = preset_params(name)
    layout = derive_grid(params, args.grid_offset)
    pool, hist, clipped = scenario_pool(params, layout, cfg, range(args.seeds), 50.0, 100.0)
    fit = normal_fit(pool)
    print(f"{name:<12} {layout.W:7.2f} {layout.S:7.2f} {fit.mu:7.2f} {fit.sigma:7.2f} {ref:9.2f}  "
          f"{hist[0]}/{hist[1]}/{hist[2]}" + (f"  ({clipped} clipped)" if clipped else ""))
