"""Command-line entry point: ``cvqaoa <command> [options]``.

Exit status: 0 on success, 2 on a usage or config error, 1 on a runtime error.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
import time

import numpy as np

from . import ingest
from .bayes import AcquisitionSchedule
from .experiment import (
    Backend,
    LandscapeSpec,
    Mode,
    QaoaRunSpec,
    analytic_mean_cost,
    run_bayes,
    run_fixed,
    run_landscape,
    run_success_study,
    theoretical_optimum,
)
from .gate import GateParams
from .io import (
    SEED_ENV_VAR,
    ConfigError,
    ResultTable,
    RunConfig,
    load_time_series,
    read_config_values,
    read_table,
    render_table,
    write_table,
)
from .quadrature import Orientation, SeedSpec, SqueezedSource
from .ranges import derive_search_box, quadratic_heuristic

log = logging.getLogger("cvqaoa")

COMMANDS = ("landscape", "histogram", "optimize", "success", "ingest", "optimum", "estimate-range")

DEFAULT_A = {"landscape": 1.0, "histogram": 2.745, "optimize": 2.745, "optimum": 0.0}
DEFAULT_SAMPLES = {"histogram": 1_100_000}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


def _sources(cfg: RunConfig) -> tuple[SqueezedSource, SqueezedSource]:
    return (SqueezedSource(cfg.squeeze_db, cfg.antisqueeze_db, Orientation.P_SQUEEZED),
            SqueezedSource(cfg.squeeze_db, cfg.antisqueeze_db, Orientation.X_SQUEEZED))


def _resolve(command: str, cfg: RunConfig) -> RunConfig:
    """Fill subcommand-dependent defaults so the echoed config is complete."""
    fill = {}
    if cfg.a is None and command in DEFAULT_A:
        fill["a"] = DEFAULT_A[command]
    if cfg.samples is None and command in ("landscape", "histogram", "optimize", "success"):
        fill["samples"] = DEFAULT_SAMPLES.get(command, 1000)
    return cfg.updated(fill) if fill else cfg


def _keys_for(command: str) -> tuple[str, ...]:
    common = ("seed", "squeeze_db", "antisqueeze_db")
    return common + {
        "landscape": ("a", "samples", "grid", "grid_lo", "grid_hi", "backend"),
        "histogram": ("a", "eta", "gamma", "samples", "bin_width", "backend"),
        "optimize": ("a", "samples", "steps", "threshold", "n_initial", "kappa0", "kappa_decay",
                     "grid_lo", "grid_hi", "backend"),
        "success": ("samples", "steps", "repeats", "n_a", "threshold", "n_initial", "kappa0",
                    "kappa_decay", "grid_lo", "grid_hi", "backend", "n_jobs"),
        "ingest": ("input", "dt", "gamma_rate", "t1", "windows"),
        "optimum": ("a",),
        "estimate-range": ("margin",),
    }[command]


def _run_spec(cfg: RunConfig, a: float = 0.0) -> QaoaRunSpec:
    src_in, src_anc = _sources(cfg)
    return QaoaRunSpec(a=a, steps=cfg.steps, samples_per_step=cfg.samples, repeats=cfg.repeats,
                       success_threshold=cfg.threshold, n_initial=cfg.n_initial,
                       box=(cfg.grid_lo, cfg.grid_hi, cfg.grid_lo, cfg.grid_hi),
                       schedule=AcquisitionSchedule(cfg.kappa0, cfg.kappa_decay),
                       backend=Backend(cfg.backend), source_in=src_in, source_anc=src_anc)


def cmd_landscape(cfg: RunConfig) -> ResultTable:
    src_in, src_anc = _sources(cfg)
    spec = LandscapeSpec.log_spaced(cfg.grid, cfg.grid_lo, cfg.grid_hi, samples_per_point=cfg.samples,
                                    a=cfg.a, backend=Backend(cfg.backend), source_in=src_in,
                                    source_anc=src_anc)
    land = run_landscape(spec, SeedSpec(cfg.seed))
    rows = []
    for i, eta in enumerate(land.eta_grid):
        for j, gamma in enumerate(land.gamma_grid):
            rows.append([eta, gamma, land.mean_cost[i, j], land.cost_std[i, j],
                         analytic_mean_cost(eta, gamma, cfg.a, src_in, src_anc)])
    i, j = land.argmin()
    summary = {"argmin_eta": land.eta_grid[i], "argmin_gamma": land.gamma_grid[j],
               "min_mean_cost": land.mean_cost[i, j]}
    return ResultTable(["eta", "gamma", "mean_cost", "cost_std", "analytic_mean_cost"], rows,
                       summary=summary)


def cmd_histogram(cfg: RunConfig) -> ResultTable:
    src_in, src_anc = _sources(cfg)
    h = run_fixed(GateParams(cfg.eta, cfg.gamma, cfg.a), cfg.samples, SeedSpec(cfg.seed),
                  Backend(cfg.backend), src_in, src_anc, bin_width=cfg.bin_width)
    rows = np.column_stack([h.edges[:-1], h.edges[1:], h.output_density, h.input_density])
    summary = {"mean": h.mean, "std": h.std, "input_mean": h.input_mean, "input_std": h.input_std,
               "n": h.n}
    return ResultTable(["bin_lo", "bin_hi", "output_density", "input_density"], rows, summary=summary)


def cmd_optimize(cfg: RunConfig) -> ResultTable:
    rec = run_bayes(_run_spec(cfg, cfg.a), SeedSpec(cfg.seed))
    best = rec.best_so_far
    rows = [[t, rec.eta[t], rec.gamma[t], rec.log_mean_cost[t], rec.mean[t], rec.variance[t],
             int(rec.success_count[t]), best[t]] for t in range(len(rec.eta))]
    k = rec.best_index
    summary = {"best_step": k, "best_eta": rec.eta[k], "best_gamma": rec.gamma[k],
               "best_log_mean_cost": rec.log_mean_cost[k], "log_base": "e"}
    return ResultTable(["step", "eta", "gamma", "log_mean_cost", "mean", "variance", "success_count",
                        "best_log_mean_cost"], rows, summary=summary)


def cmd_success(cfg: RunConfig) -> ResultTable:
    spec = _run_spec(cfg)
    seed = SeedSpec(cfg.seed)
    q = run_success_study(spec, Mode.QAOA, seed, cfg.n_a, cfg.n_jobs)
    r = run_success_study(spec, Mode.RANDOM, seed, cfg.n_a, cfg.n_jobs)
    rows = np.column_stack([np.arange(1, cfg.steps + 1), q.probability, q.band, r.probability, r.band])
    return ResultTable(["step", "qaoa_probability", "qaoa_band", "random_probability", "random_band"],
                       rows, summary={"final_qaoa": q.probability[-1], "final_random": r.probability[-1]})


def cmd_ingest(cfg: RunConfig) -> ResultTable:
    mf = ingest.ModeFunction(cfg.gamma_rate, cfg.t1)
    if cfg.input is None:
        series = ingest.synthetic_white_noise(cfg.windows, cfg.dt, SeedSpec(cfg.seed), mf)
    else:
        series = ingest.TimeSeries(cfg.dt, load_time_series(cfg.input))
    q = ingest.extract_all(series, mf)
    centers = ingest.window_centers(series, mf)[: len(q)]
    rows = [[k, int(c), v] for k, (c, v) in enumerate(zip(centers, q))]
    summary = {"n": len(q), "variance": float(np.var(q)) if len(q) else float("nan")}
    return ResultTable(["window", "center_index", "quadrature"], rows, summary=summary)


def cmd_optimum(cfg: RunConfig) -> ResultTable:
    eta, gamma, delta = theoretical_optimum(*_sources(cfg), cfg.a)
    deviation = 100 * abs(1 - gamma)
    return ResultTable(["eta", "gamma", "delta", "deviation_percent"], [[eta, gamma, delta, deviation]])


def cmd_estimate_range(cfg: RunConfig) -> ResultTable:
    src_in, src_anc = _sources(cfg)
    product, gamma = quadratic_heuristic(src_in.var_x, src_in.var_p, src_anc.var_x)
    est = derive_search_box(product, gamma, cfg.margin)
    return ResultTable(["product_estimate", "gamma_estimate", "eta_estimate", "eta_lo", "eta_hi",
                        "gamma_lo", "gamma_hi"],
                       [[est.product_estimate, est.gamma_estimate, est.eta_estimate, *est.search_box]])


HANDLERS = {
    "landscape": cmd_landscape,
    "histogram": cmd_histogram,
    "optimize": cmd_optimize,
    "success": cmd_success,
    "ingest": cmd_ingest,
    "optimum": cmd_optimum,
    "estimate-range": cmd_estimate_range,
}


def _human_summary(command: str, table: ResultTable) -> str:
    if command == "optimum":
        eta, gamma, delta, dev = table.rows[0]
        return f"({eta:.6f}, {gamma:.6f}, δ={delta:.6f})  deviation from (1/2, 1): {dev:.2f}%"
    if command == "estimate-range":
        c, g, e, elo, ehi, glo, ghi = table.rows[0]
        return f"eta*gamma ~ {c:.4g}, gamma ~ {g:.4g}, eta ~ {e:.4g}; box eta [{elo:.4g}, {ehi:.4g}], gamma [{glo:.4g}, {ghi:.4g}]"
    if table.summary:
        return ", ".join(f"{k}={v:.6g}" if isinstance(v, float) else f"{k}={v}"
                         for k, v in table.summary.items())
    return f"{len(table.rows)} rows"


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--config", help="TOML config file, or a result table to rerun")
    p.add_argument("--output", "-o", help="output CSV path (default: stdout)")
    p.add_argument("--seed", type=int, help=f"root seed (env {SEED_ENV_VAR} if unset)")
    p.add_argument("--squeeze-db", type=float)
    p.add_argument("--antisqueeze-db", type=float)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cvqaoa", description=__doc__.splitlines()[0],
                     epilog=f"The root seed can also be set with the {SEED_ENV_VAR} environment variable.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("landscape", help="mean cost on a log-spaced (eta, gamma) grid")
    _add_common(p)
    p.add_argument("--a", type=float)
    p.add_argument("--grid", type=int)
    p.add_argument("--samples", type=int, help="samples per grid point")
    p.add_argument("--grid-lo", type=float)
    p.add_argument("--grid-hi", type=float)
    p.add_argument("--backend", choices=("optical", "ideal"))

    p = sub.add_parser("histogram", help="output and input histograms at fixed parameters")
    _add_common(p)
    p.add_argument("--a", type=float)
    p.add_argument("--eta", type=float)
    p.add_argument("--gamma", type=float)
    p.add_argument("--samples", type=int)
    p.add_argument("--bin-width", type=float)
    p.add_argument("--backend", choices=("optical", "ideal"))

    for name, text in (("optimize", "one Bayesian-optimized CV-QAOA run"),
                       ("success", "cumulative success probability, CV-QAOA vs random sampling")):
        p = sub.add_parser(name, help=text)
        _add_common(p)
        if name == "optimize":
            p.add_argument("--a", type=float)
        else:
            p.add_argument("--repeats", type=int)
            p.add_argument("--n-a", type=int, help="number of random problem constants a")
            p.add_argument("--n-jobs", type=int)
        p.add_argument("--steps", type=int)
        p.add_argument("--samples", type=int, help="samples per step")
        p.add_argument("--threshold", type=float)
        p.add_argument("--n-initial", type=int)
        p.add_argument("--kappa0", type=float)
        p.add_argument("--kappa-decay", type=float)
        p.add_argument("--grid-lo", type=float, help="lower search bound for eta and gamma")
        p.add_argument("--grid-hi", type=float, help="upper search bound for eta and gamma")
        p.add_argument("--backend", choices=("optical", "ideal"))

    p = sub.add_parser("ingest", help="extract quadratures from a homodyne time series")
    _add_common(p)
    p.add_argument("--input", help="time-series text file; synthetic white noise if omitted")
    p.add_argument("--dt", type=float)
    p.add_argument("--gamma-rate", type=float)
    p.add_argument("--t1", type=float)
    p.add_argument("--windows", type=int, help="synthetic windows to generate")

    p = sub.add_parser("optimum", help="finite-squeezing optimal (eta, gamma)")
    _add_common(p)
    p.add_argument("--a", type=float)

    p = sub.add_parser("estimate-range", help="order-of-magnitude search box for (eta, gamma)")
    _add_common(p)
    p.add_argument("--margin", type=float)

    p = sub.add_parser("rerun", help="regenerate a result table from its metadata")
    p.add_argument("table")
    p.add_argument("--output", "-o")
    return parser


def _flag_values(args: argparse.Namespace) -> dict:
    skip = {"command", "config", "output", "verbose", "table"}
    return {k: v for k, v in vars(args).items() if k not in skip and v is not None}


def execute(command: str, cfg: RunConfig) -> ResultTable:
    cfg = _resolve(command, cfg)
    table = HANDLERS[command](cfg)
    table.command = command
    echoed = cfg.to_dict()
    table.config = {k: echoed[k] for k in _keys_for(command) if k in echoed}
    return table


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        build_parser().print_usage(sys.stderr)
        print(exc, file=sys.stderr)
        return 2
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")

    try:
        if args.command == "rerun":
            command = read_table(args.table).command
            if command not in HANDLERS:
                raise ConfigError("command", f"table has no rerunnable command ({command!r})")
            _, values = read_config_values(args.table)
            cfg = RunConfig.from_mapping(values)
        else:
            command = args.command
            cfg = RunConfig()
            if SEED_ENV_VAR in os.environ:
                try:
                    cfg = cfg.updated({"seed": int(os.environ[SEED_ENV_VAR])})
                except ValueError as exc:
                    raise ConfigError(SEED_ENV_VAR, "must be an integer") from exc
            if args.config:
                _, values = read_config_values(args.config)
                cfg = cfg.updated(values)
            cfg = cfg.updated(_flag_values(args))
    except (ConfigError, OSError) as exc:
        print(f"cvqaoa: config error: {exc}", file=sys.stderr)
        return 2

    try:
        start = time.perf_counter()
        table = execute(command, cfg)
        log.info("%s finished in %.2f s", command, time.perf_counter() - start)
        if args.output:
            write_table(table, args.output)
            print(_human_summary(command, table))
        else:
            sys.stdout.write(render_table(table))
            print(_human_summary(command, table), file=sys.stderr)
    except ConfigError as exc:
        print(f"cvqaoa: config error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001
        print(f"cvqaoa: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
