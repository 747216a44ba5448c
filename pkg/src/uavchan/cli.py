"""Command-line entry point: ``uavchan {sweep-h,sweep-v,compare,validate,sample-heights}``.

Settings come from built-in defaults, then an optional ``--config`` file of flat
``key = value`` lines, then command-line flags (flags win). Config keys are the
flag names with dashes replaced by underscores, e.g. ``freq_hz = 4e9``.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import io
import math
import sys
from dataclasses import dataclass, fields
from typing import Optional, Sequence

import numpy as np

from . import oracle
from .geometry import LinkGeometry
from .pathloss import PathLossSample, RadioConfig, sweep_horizontal, sweep_vertical
from .scenario import (BuiltUpParams, GridLayout, HeightField, InvalidParams, derive_grid,
                       fit_rayleigh, preset_params, sample_heights)
from .stats import ecdf_at, normal_fit, summarize_sweep

CSV_COLUMNS = ["D", "H", "d_los", "d_ref_g", "d_ref_b", "num_wr",
               "dphi_g_rad", "dphi_b_rad", "pl_db", "clipped"]

PAPER_MANHATTAN_MU = 91.87
PAPER_MANHATTAN_SIGMA = 4.21


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    scenario: str = "urban"
    alpha: Optional[float] = None
    beta: Optional[float] = None
    gamma: Optional[float] = None
    W: Optional[float] = None
    S: Optional[float] = None
    grid_offset: float = 0.0
    freq_hz: float = 4e9
    hv: float = 1.5
    gamma_b: float = 1.0
    gamma_g: float = 1.0
    seed: int = 0
    x_v: float = 0.0
    # horizontal sweep
    h: float = 50.0
    d_min: float = 0.0
    d_max: float = 100.0
    d_step: float = 0.1
    # vertical sweep
    d: float = 50.0
    h_min: float = 5.0
    h_max: float = 150.0
    h_step: float = 0.1
    # compare
    scenarios: str = "suburban,urban,dense-urban"
    seeds: int = 100
    ecdf_step: float = 0.5
    # validate
    trials: int = 10000
    manhattan_gamma: float = 87.3
    manhattan_h: float = 200.0
    manhattan_d_max: float = 225.0
    manhattan_W: Optional[float] = None
    manhattan_S: Optional[float] = None
    manhattan_alpha: Optional[float] = None
    manhattan_beta: Optional[float] = None
    manhattan_seeds: int = 100
    # sample-heights
    n: int = 1000

    def params(self) -> BuiltUpParams:
        base = preset_params(self.scenario)
        return BuiltUpParams(
            self.alpha if self.alpha is not None else base.alpha,
            self.beta if self.beta is not None else base.beta,
            self.gamma if self.gamma is not None else base.gamma,
        )

    def layout(self, params: Optional[BuiltUpParams] = None) -> GridLayout:
        if (self.W is None) != (self.S is None):
            raise ConfigError("key 'W'/'S': both building width and street width are required")
        if self.W is not None:
            return GridLayout(self.W, self.S, self.grid_offset)
        return derive_grid(params or self.params(), self.grid_offset)

    def radio(self) -> RadioConfig:
        return RadioConfig(self.freq_hz, self.gamma_b, self.gamma_g)

    def check(self):
        positive = ["freq_hz", "hv", "d_step", "h_step", "h", "ecdf_step",
                    "manhattan_gamma", "manhattan_h"]
        for key in positive:
            if not getattr(self, key) > 0:
                raise ConfigError(f"key {key!r}: must be positive, got {getattr(self, key)}")
        for key in ("gamma_b", "gamma_g"):
            if not 0.0 <= getattr(self, key) <= 1.0:
                raise ConfigError(f"key {key!r}: must lie in [0, 1], got {getattr(self, key)}")
        for key in ("d", "d_min"):
            if getattr(self, key) < 0:
                raise ConfigError(f"key {key!r}: must be non-negative, got {getattr(self, key)}")
        if self.d_max < self.d_min:
            raise ConfigError(f"key 'd_max': {self.d_max} is below d_min={self.d_min}")
        if self.h_max < self.h_min:
            raise ConfigError(f"key 'h_max': {self.h_max} is below h_min={self.h_min}")
        if self.seed < 0:
            raise ConfigError(f"key 'seed': must be non-negative, got {self.seed}")
        try:
            self.params()
        except InvalidParams as e:
            raise ConfigError(f"key 'scenario'/'alpha'/'beta'/'gamma': {e}") from None


_FIELD_TYPES = {f.name: f.type for f in fields(RunConfig)}


def _convert(key: str, raw: str):
    kind = _FIELD_TYPES[key]
    try:
        if "int" in kind:
            return int(raw)
        if "float" in kind:
            return float(raw)
    except ValueError:
        raise ConfigError(f"key {key!r}: cannot parse {raw!r} as {kind}") from None
    return raw.strip().strip('"').strip("'")


def load_config_file(path: str) -> dict:
    """Parse a flat ``key = value`` file (``#`` comments allowed) into RunConfig overrides."""
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#",))
    parser.optionxform = str
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        parser.read_string("[run]\n" + text, source=path)
    except configparser.Error as e:
        # header line shifts reported line numbers by one
        lineno = getattr(e, "lineno", None)
        where = f" (line {lineno - 1})" if lineno else ""
        raise ConfigError(f"{path}{where}: {e.message.splitlines()[0]}") from None
    out = {}
    lines = text.splitlines()
    for key, raw in parser["run"].items():
        if key not in _FIELD_TYPES:
            line = next((i + 1 for i, l in enumerate(lines) if l.strip().startswith(key)), "?")
            raise ConfigError(f"{path} line {line}: unknown key {key!r}")
        out[key] = _convert(key, raw)
    return out


def build_config(args: argparse.Namespace) -> RunConfig:
    values = {}
    if args.config:
        values.update(load_config_file(args.config))
    for key in _FIELD_TYPES:
        v = getattr(args, key, None)
        if v is not None:
            values[key] = v
    cfg = RunConfig(**values)
    cfg.check()
    return cfg


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    s = f"{float(v):.6g}"
    return "0" if s == "-0" else s


def _writer(fh):
    return csv.writer(fh, lineterminator="\n")


def write_samples_csv(fh, samples: Sequence[PathLossSample]):
    w = _writer(fh)
    w.writerow(CSV_COLUMNS)
    for s in samples:
        w.writerow([_fmt(v) for v in (s.D, s.H, s.d_los, s.d_ref_g, s.d_ref_b, s.num_wr,
                                      s.dphi_g, s.dphi_b, s.pl_db, s.clipped)])


class _Output:
    """``--out`` target (file or stdout); side notes go to whichever stream is free."""

    def __init__(self, path: Optional[str]):
        self.path = path if path not in (None, "-") else None
        self.buf = io.StringIO()

    def note(self, msg: str):
        print(msg, file=sys.stdout if self.path else sys.stderr)

    def close(self):
        if self.path:
            with open(self.path, "w", encoding="utf-8", newline="") as fh:
                fh.write(self.buf.getvalue())
        else:
            sys.stdout.write(self.buf.getvalue())


def cmd_sweep_h(cfg: RunConfig, out: _Output) -> int:
    params = cfg.params()
    samples = sweep_horizontal((cfg.d_min, cfg.d_max), cfg.d_step, cfg.h, params, cfg.seed,
                               cfg.radio(), h_v=cfg.hv, x_v=cfg.x_v, layout=cfg.layout(params))
    write_samples_csv(out.buf, samples)
    return 0


def cmd_sweep_v(cfg: RunConfig, out: _Output) -> int:
    if cfg.h_min <= cfg.hv:
        raise ConfigError(f"key 'h_min': {cfg.h_min} must exceed the vehicle antenna height {cfg.hv}")
    params = cfg.params()
    samples = sweep_vertical((cfg.h_min, cfg.h_max), cfg.h_step, cfg.d, params, cfg.seed,
                             cfg.radio(), h_v=cfg.hv, x_v=cfg.x_v, layout=cfg.layout(params))
    write_samples_csv(out.buf, samples)
    return 0


def scenario_pool(params: BuiltUpParams, layout: GridLayout, cfg: RunConfig, seeds: Sequence[int],
                  H: float, d_max: float) -> tuple[list[float], dict, int]:
    """Pooled unclipped path loss over several height realizations of one scenario."""
    pool, hist, clipped = [], {0: 0, 1: 0, 2: 0}, 0
    radio = cfg.radio()
    for seed in seeds:
        samples = sweep_horizontal((cfg.d_min, d_max), cfg.d_step, H, params, seed, radio,
                                   h_v=cfg.hv, x_v=cfg.x_v, layout=layout)
        summary = summarize_sweep(samples)
        clipped += summary.clipped
        for k, v in summary.wr_histogram.items():
            hist[k] += v
        pool.extend(s.pl_db for s in samples if not s.clipped)
    return pool, hist, clipped


def cmd_compare(cfg: RunConfig, out: _Output, summary_path: Optional[str] = None) -> int:
    names = [s.strip() for s in cfg.scenarios.split(",") if s.strip()]
    if len(names) < 2:
        raise ConfigError("key 'scenarios': at least two scenarios are required")
    if cfg.seeds < 1:
        raise ConfigError(f"key 'seeds': must be >= 1, got {cfg.seeds}")
    seeds = range(cfg.seed, cfg.seed + cfg.seeds)
    rows, pools = [], []
    for name in names:
        try:
            params = preset_params(name)
        except InvalidParams as e:
            raise ConfigError(f"key 'scenarios': {e}") from None
        layout = derive_grid(params, cfg.grid_offset)
        pool, hist, clipped = scenario_pool(params, layout, cfg, seeds, cfg.h, cfg.d_max)
        fit = normal_fit(pool)
        pools.append(pool)
        rows.append([name, params.alpha, params.beta, params.gamma, layout.W, layout.S,
                     fit.mu, fit.sigma, fit.n, clipped, hist[0], hist[1], hist[2]])

    lo = math.floor(min(min(p) for p in pools))
    hi = math.ceil(max(max(p) for p in pools))
    grid = lo + cfg.ecdf_step * np.arange(int(round((hi - lo) / cfg.ecdf_step)) + 1)
    w = _writer(out.buf)
    w.writerow(["pl_db"] + names)
    table = [ecdf_at(p, grid) for p in pools]
    for i, x in enumerate(grid):
        w.writerow([_fmt(x)] + [_fmt(col[i]) for col in table])

    header = ["scenario", "alpha", "beta", "gamma", "W", "S", "mu_db", "sigma_db", "n",
              "clipped", "wr0", "wr1", "wr2"]
    sbuf = io.StringIO()
    sw = _writer(sbuf)
    sw.writerow(header)
    for r in rows:
        sw.writerow([r[0]] + [_fmt(v) for v in r[1:]])
    if summary_path:
        with open(summary_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(sbuf.getvalue())
    else:
        out.note(sbuf.getvalue().rstrip("\n"))
    return 0


def manhattan_layout(cfg: RunConfig) -> GridLayout:
    if cfg.manhattan_W is not None and cfg.manhattan_S is not None:
        return GridLayout(cfg.manhattan_W, cfg.manhattan_S, cfg.grid_offset)
    if cfg.manhattan_alpha is not None and cfg.manhattan_beta is not None:
        return derive_grid(BuiltUpParams(cfg.manhattan_alpha, cfg.manhattan_beta, cfg.manhattan_gamma),
                           cfg.grid_offset)
    raise ConfigError("key 'manhattan_W'/'manhattan_S' (or 'manhattan_alpha'/'manhattan_beta'): "
                      "the Manhattan grid dimensions must be given explicitly")


def manhattan_statistics(cfg: RunConfig, layout: GridLayout):
    # grid is explicit here; only gamma of the params is used
    params = BuiltUpParams(1.0, 1.0, cfg.manhattan_gamma)
    seeds = range(cfg.seed, cfg.seed + cfg.manhattan_seeds)
    pool, hist, clipped = scenario_pool(params, layout, cfg, seeds, cfg.manhattan_h, cfg.manhattan_d_max)
    return normal_fit(pool), hist, clipped


def random_links(cfg: RunConfig, layout: GridLayout, gamma: float, trials: int):
    """Seeded random (geometry, heights) pairs; D in [1, 200] m, H in [h_v + 1, 300] m."""
    rng = np.random.default_rng(cfg.seed)
    for _ in range(trials):
        D = float(rng.uniform(1.0, 200.0))
        H = float(rng.uniform(cfg.hv + 1.0, 300.0))
        x_v = float(rng.uniform(0.0, layout.period))
        hseed = int(rng.integers(0, 2**63 - 1))
        yield LinkGeometry(D, H, cfg.hv, layout, x_v), HeightField(gamma, hseed)


def cmd_validate(cfg: RunConfig, out: _Output) -> int:
    if cfg.trials < 1:
        raise ConfigError(f"key 'trials': must be >= 1, got {cfg.trials}")
    mlayout = manhattan_layout(cfg)
    params = cfg.params()
    layout = cfg.layout(params)
    lines = ["[oracle]",
             f"scenario = {cfg.scenario} alpha={_fmt(params.alpha)} beta={_fmt(params.beta)} "
             f"gamma={_fmt(params.gamma)} W={_fmt(layout.W)} S={_fmt(layout.S)}",
             f"trials = {cfg.trials}"]
    mismatches, skipped, max_err = 0, 0, 0.0
    wr_total = 0
    for g, heights in random_links(cfg, layout, params.gamma, cfg.trials):
        rep = oracle.verify_against_analytical(g, heights)
        if rep.skipped:
            skipped += 1
            continue
        max_err = max(max_err, rep.max_rel_error)
        wr_total += rep.num_wr_model
        if not rep.ok:
            mismatches += 1
            if mismatches <= 20:
                lines.append(f"MISMATCH D={g.D!r} H={g.H!r} h_v={g.h_v!r} x_v={g.x_v!r} "
                             f"W={g.layout.W!r} S={g.layout.S!r} offset={g.layout.offset!r} "
                             f"height_seed={heights.seed}: " + "; ".join(rep.details))
    lines += [f"skipped = {skipped}",
              f"mismatches = {mismatches}",
              f"wall_reflections_seen = {wr_total}",
              f"max_relative_length_error = {max_err:.3e}"]

    fit, hist, clipped = manhattan_statistics(cfg, mlayout)
    lines += ["[manhattan]",
              f"gamma = {_fmt(cfg.manhattan_gamma)} H = {_fmt(cfg.manhattan_h)} h_v = {_fmt(cfg.hv)} "
              f"D = 0..{_fmt(cfg.manhattan_d_max)} step {_fmt(cfg.d_step)} f = {_fmt(cfg.freq_hz)}",
              f"grid W = {_fmt(mlayout.W)} S = {_fmt(mlayout.S)} (assumed; not given with the reference values)",
              f"seeds = {cfg.manhattan_seeds}",
              f"mu_db = {fit.mu:.4f} (reference {PAPER_MANHATTAN_MU}, diff {fit.mu - PAPER_MANHATTAN_MU:+.4f})",
              f"sigma_db = {fit.sigma:.4f} (reference {PAPER_MANHATTAN_SIGMA}, "
              f"diff {fit.sigma - PAPER_MANHATTAN_SIGMA:+.4f})",
              f"wr_histogram = {hist[0]} {hist[1]} {hist[2]}",
              f"clipped = {clipped}",
              "PASS" if mismatches == 0 else "FAIL"]
    out.buf.write("\n".join(lines) + "\n")
    return 0 if mismatches == 0 else 1


def cmd_sample_heights(cfg: RunConfig, out: _Output) -> int:
    if cfg.n < 2:
        raise ConfigError(f"key 'n': at least 2 heights are required, got {cfg.n}")
    params = cfg.params()
    idx = [(1, k) for k in range(cfg.n)]
    h = sample_heights(params, cfg.seed, idx)
    w = _writer(out.buf)
    w.writerow(["side", "block", "height"])
    for (side, k), v in zip(idx, h):
        w.writerow([side, k, _fmt(v)])
    out.note(f"gamma_hat = {fit_rayleigh(h):.6g}")
    return 0


COMMANDS = {
    "sweep-h": cmd_sweep_h,
    "sweep-v": cmd_sweep_v,
    "compare": cmd_compare,
    "validate": cmd_validate,
    "sample-heights": cmd_sample_heights,
}


def _common_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("common")
    g.add_argument("--config", help="flat key = value settings file")
    g.add_argument("--seed", type=int)
    g.add_argument("--out", help="output file (default: stdout)")
    g.add_argument("--freq-hz", dest="freq_hz", type=float)
    g.add_argument("--scenario", help="suburban, urban, dense-urban or high-rise-urban")
    g.add_argument("--alpha", type=float)
    g.add_argument("--beta", type=float)
    g.add_argument("--gamma", type=float)
    g.add_argument("--W", dest="W", type=float, help="building width, overrides alpha/beta")
    g.add_argument("--S", dest="S", type=float, help="street width, overrides alpha/beta")
    g.add_argument("--hv", type=float)
    g.add_argument("--gamma-b", dest="gamma_b", type=float)
    g.add_argument("--gamma-g", dest="gamma_g", type=float)
    g.add_argument("--grid-offset", dest="grid_offset", type=float)
    g.add_argument("--x-v", dest="x_v", type=float, help="vehicle street-axis position")
    return p


def _flt(p, *names):
    for n in names:
        p.add_argument("--" + n.replace("_", "-"), dest=n, type=float)


def make_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(prog="uavchan",
                                     description="UAV-to-vehicle path loss in built-up areas")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep-h", parents=[common], help="path loss versus horizontal distance")
    _flt(p, "h", "d_min", "d_max", "d_step")
    p = sub.add_parser("sweep-v", parents=[common], help="path loss versus UAV altitude")
    _flt(p, "d", "h_min", "h_max", "h_step")
    p = sub.add_parser("compare", parents=[common], help="path-loss CDFs across scenarios")
    _flt(p, "h", "d_min", "d_max", "d_step", "ecdf_step")
    p.add_argument("--scenarios", help="comma-separated preset names")
    p.add_argument("--seeds", type=int, help="number of height realizations per scenario")
    p.add_argument("--summary-out", dest="summary_out")
    p = sub.add_parser("validate", parents=[common], help="oracle check and Manhattan statistics")
    p.add_argument("--trials", type=int)
    _flt(p, "d_step", "manhattan_gamma", "manhattan_h", "manhattan_d_max",
         "manhattan_alpha", "manhattan_beta")
    p.add_argument("--manhattan-W", dest="manhattan_W", type=float)
    p.add_argument("--manhattan-S", dest="manhattan_S", type=float)
    p.add_argument("--manhattan-seeds", dest="manhattan_seeds", type=int)
    p = sub.add_parser("sample-heights", parents=[common], help="draw and fit Rayleigh heights")
    p.add_argument("--n", type=int)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        cfg = build_config(args)
        out = _Output(args.out)
        if args.command == "compare":
            code = cmd_compare(cfg, out, args.summary_out)
        else:
            code = COMMANDS[args.command](cfg, out)
    except (ConfigError, InvalidParams, OSError) as e:
        parser.exit(2, f"uavchan {args.command}: error: {e}\n")
    out.close()
    return code


if __name__ == "__main__":
    sys.exit(main())
