"""Exit criteria for the package, one test per criterion at its fixed tolerance."""

import math

import numpy as np
import pytest

from uavchan import cli, oracle
from uavchan.geometry import LinkGeometry, analyze_link, facade_hit_test
from uavchan.pathloss import RadioConfig, coherent_path_loss, fspl, path_loss_bu
from uavchan.scenario import (BuiltUpParams, ConstantHeights, GridLayout, HeightField, derive_grid,
                              fit_rayleigh, preset_params, sample_heights)
from uavchan.stats import normal_fit

SEEDS = range(100)
SCENARIOS = {"dense-urban": 6.15, "urban": 8.03, "suburban": 9.48}
# Manhattan blocks: 264 ft pitch along the avenues with 60 ft cross streets
MANHATTAN = GridLayout(62.0, 18.3)


def test_1_urban_grid(record):
    g = derive_grid(preset_params("urban"))
    ok = abs(g.W - 24.5) <= 0.05 and abs(g.S - 20.2) <= 0.05
    assert record("1 urban grid W=24.5, S=20.2 (+-0.05 m)", ok, f"W={g.W:.4f} S={g.S:.4f}")


def test_2_oracle_equivalence(record):
    cfg = cli.RunConfig(seed=2024)
    params = preset_params("urban")
    layout = derive_grid(params)
    n, count_ok, max_err, lengths_ok, wr_seen = 0, 0, 0.0, True, 0
    for g, heights in cli.random_links(cfg, layout, params.gamma, 10_000):
        rep = oracle.verify_against_analytical(g, heights)
        n += 1
        count_ok += rep.counts_match and rep.num_wr_oracle == rep.num_wr_model
        lengths_ok &= rep.lengths_match and not rep.los_blocked
        max_err = max(max_err, rep.max_rel_error)
        wr_seen += rep.num_wr_oracle
    ok = n >= 10_000 and count_ok == n and lengths_ok and max_err < 1e-9
    assert record("2 oracle equivalence (10^4 links, counts 100%, rel err < 1e-9)", ok,
                  f"{count_ok}/{n} counts, max rel err {max_err:.2e}, {wr_seen} wall paths")


def test_3_critical_altitude_bracketing(record):
    rng = np.random.default_rng(3)
    layout = derive_grid(preset_params("urban"))
    failures = 0
    for _ in range(1000):
        h_v = rng.uniform(0.5, 3.0)
        hp = rng.uniform(h_v + 1.0, 120.0, size=2)
        heights = ConstantHeights(hp[0], hp[1])
        for side in (1, 2):
            Hc = 2 * hp[side - 1] - h_v
            for H, expect in ((Hc - 1e-6, True), (Hc + 1e-6, False)):
                g = LinkGeometry(10.0, H, h_v, layout)  # midpoint 5 m is on a facade
                model = analyze_link(g, heights).sides[side - 1].wr
                uav, veh = oracle.link_endpoints(g)
                scene = oracle.build_scene(layout, heights, -50.0, 50.0)
                traced = any(p.kind == "wall" and p.side == side
                             for p in oracle.trace_link(scene, uav, veh))
                failures += (model != expect) + (traced != expect)
    assert record("3 critical altitude bracketing (10^3 draws, +-1e-6 m, per side)", failures == 0,
                  f"{failures} disagreements")


@pytest.fixture(scope="module")
def scenario_fits():
    cfg = cli.RunConfig(freq_hz=4e9, hv=1.5, d_min=0.0, d_max=100.0, d_step=0.1)
    fits = {}
    for name in SCENARIOS:
        params = preset_params(name)
        pool, _, _ = cli.scenario_pool(params, derive_grid(params), cfg, SEEDS, 50.0, 100.0)
        fits[name] = normal_fit(pool)
    return fits


def _fits_text(fits):
    return ", ".join(f"{k}: mu={f.mu:.2f} sigma={f.sigma:.2f}" for k, f in fits.items())


def test_4a_scenario_means(record, scenario_fits):
    ok = all(71.0 <= f.mu <= 76.5 for f in scenario_fits.values())
    assert record("4a scenario mean path loss in [71, 76.5] dB", ok, _fits_text(scenario_fits))


def test_4b_sigma_ordering(record, scenario_fits):
    s = {k: f.sigma for k, f in scenario_fits.items()}
    ok = s["dense-urban"] < s["urban"] < s["suburban"]
    assert record("4b sigma(dense) < sigma(urban) < sigma(suburban)", ok, _fits_text(scenario_fits))


def test_4c_sigma_values(record, scenario_fits):
    ok = all(abs(scenario_fits[k].sigma - ref) <= 1.5 for k, ref in SCENARIOS.items())
    assert record("4c sigma within 1.5 dB of 6.15 / 8.03 / 9.48", ok, _fits_text(scenario_fits))


@pytest.fixture(scope="module")
def manhattan_fit():
    cfg = cli.RunConfig(freq_hz=4e9, hv=1.5, d_min=0.0, d_step=0.1, manhattan_gamma=87.3,
                        manhattan_h=200.0, manhattan_d_max=225.0, manhattan_seeds=len(SEEDS))
    fit, _, _ = cli.manhattan_statistics(cfg, MANHATTAN)
    return fit


def test_5a_manhattan_mean(record, manhattan_fit):
    ok = abs(manhattan_fit.mu - 91.87) <= 2.5
    assert record("5a Manhattan mean within 91.87 +- 2.5 dB", ok,
                  f"mu={manhattan_fit.mu:.2f}, W={MANHATTAN.W} S={MANHATTAN.S}")


def test_5b_manhattan_sigma(record, manhattan_fit):
    ok = abs(manhattan_fit.sigma - 4.21) <= 1.5
    assert record("5b Manhattan sigma within 4.21 +- 1.5 dB", ok,
                  f"sigma={manhattan_fit.sigma:.2f}, W={MANHATTAN.W} S={MANHATTAN.S}")


def test_6_property_suites(record):
    checks = {}
    urban = preset_params("urban")
    layout = derive_grid(urban)
    radio = RadioConfig(4e9)
    lam = radio.wavelength
    rng = np.random.default_rng(6)

    free = RadioConfig(4e9, 0.0, 0.0)
    ok = True
    for _ in range(500):
        g = LinkGeometry(rng.uniform(0, 300), rng.uniform(2, 300), 1.5, layout)
        s = path_loss_bu(g, HeightField(15.0, int(rng.integers(1 << 30))), free)
        ok &= s.pl_db == fspl(s.d_los, lam)
    checks["free-space reduction (exact)"] = ok

    pl, _ = coherent_path_loss(100.0, 0.0, 0.0, 0, radio)
    checks["coherent doubling -6.02 dB"] = abs(pl - (fspl(100.0, lam) - 6.0206)) < 1e-4

    ok = True
    for _ in range(500):
        g = LinkGeometry(rng.uniform(0, 300), rng.uniform(2, 300), 1.5, layout)
        s = path_loss_bu(g, HeightField(15.0, int(rng.integers(1 << 30))), radio)
        ok &= s.dphi_g <= 0 and s.dphi_b <= 0
    checks["phase differences non-positive"] = ok

    xs = rng.uniform(-1000, 1000, 1000)
    checks["facade test period W+S"] = all(
        facade_hit_test(x, layout)[0] == facade_hit_test(x + layout.period, layout)[0] for x in xs)

    tall = ConstantHeights(1e6)
    Ds = rng.uniform(0, 400, 1000)
    checks["WR pattern period 2(W+S) in D"] = all(
        analyze_link(LinkGeometry(D, 50.0, 1.5, layout), tall).num_wr
        == analyze_link(LinkGeometry(D + 2 * layout.period, 50.0, 1.5, layout), tall).num_wr for D in Ds)

    ok = True
    for _ in range(200):
        heights = HeightField(15.0, int(rng.integers(1 << 30)))
        D = rng.uniform(0, 300)
        counts = [analyze_link(LinkGeometry(D, H, 1.5, layout), heights).num_wr
                  for H in np.arange(2.0, 200.0, 0.5)]
        ok &= counts == sorted(counts, reverse=True)
    checks["num_wr non-increasing in H"] = ok

    ok = True
    for gamma in (8.0, 15.0, 20.0, 50.0, 87.3):
        h = sample_heights(gamma, 17, [(1, k) for k in range(100_000)])
        ok &= abs(fit_rayleigh(h) - gamma) <= 0.02 * gamma
    checks["Rayleigh round trip (2% at n=1e5)"] = ok

    x = rng.normal(73.5, 8.03, 100_000)
    f = normal_fit(x)
    se_mu, se_sigma = 8.03 / math.sqrt(x.size), 8.03 / math.sqrt(2 * x.size)
    checks["normal fit round trip (3 s.e.)"] = abs(f.mu - 73.5) < 3 * se_mu and abs(f.sigma - 8.03) < 3 * se_sigma

    failed = [k for k, v in checks.items() if not v]
    assert record("6 property suites", not failed, "failed: " + ", ".join(failed) if failed else
                  f"{len(checks)} properties")


def test_7_cli_determinism(record, tmp_path):
    runs = {
        "sweep-h": ["sweep-h", "--seed", "5"],
        "sweep-v": ["sweep-v", "--seed", "5"],
        "compare": ["compare", "--seed", "5", "--seeds", "3"],
        "validate": ["validate", "--seed", "5", "--trials", "300", "--manhattan-W", "62",
                     "--manhattan-S", "18.3", "--manhattan-seeds", "3"],
        "sample-heights": ["sample-heights", "--seed", "5", "--n", "5000"],
    }
    differing = []
    for name, args in runs.items():
        blobs = []
        for i in range(2):
            out = tmp_path / f"{name}-{i}.out"
            extra = ["--summary-out", str(tmp_path / f"{name}-{i}.summary")] if name == "compare" else []
            assert cli.main(args + extra + ["--out", str(out)]) == 0
            blobs.append(out.read_bytes() + (tmp_path / f"{name}-{i}.summary").read_bytes()
                         if extra else out.read_bytes())
        if blobs[0] != blobs[1] or not blobs[0]:
            differing.append(name)
    assert record("7 CLI determinism (byte-identical reruns)", not differing,
                  "differs: " + ", ".join(differing) if differing else f"{len(runs)} commands")
