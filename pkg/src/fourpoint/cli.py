"""Command-line front end: `run`, `replicate`, and `compare` subcommands
driven by a sectioned config file, emitting CSV records and JSON summaries."""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import harness, inference
from .config import (ConfigError, build_algo_config, build_model, load_config)
from .optimizer import ConfigurationError, run_algorithm, run_central_fd

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_CONFIG = 2

THREADS_ENV = "FOURPOINT_THREADS"


def _fmt(x):
    """Locale-independent 6-significant-digit float formatting."""
    return f"{float(x):.6g}"


def _float_repr(x):
    return repr(float(x))


def build_parser():
    parser = argparse.ArgumentParser(
        prog="fourpoint",
        description="Zeroth-order treatment-parameter optimization with "
                    "CLT-based inference.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in (("run", cmd_run), ("replicate", cmd_replicate),
                     ("compare", cmd_compare)):
        p = sub.add_parser(name)
        p.add_argument("config", help="path to the experiment config file")
        p.add_argument("--seed", type=int, help="override master seed")
        p.add_argument("--method", choices=("four_point", "central_fd"),
                       help="override algorithm.method")
        p.add_argument("--T", type=int, dest="total_budget",
                       help="override algorithm.total_budget")
        p.add_argument("--R", type=int, dest="replications",
                       help="override harness.replications")
        p.add_argument("--threads", type=int,
                       help="worker process cap (0 = auto)")
        p.add_argument("--paper-scale", action="store_true",
                       help="apply the config's paper-scale budget and "
                            "replication overrides")
        p.set_defaults(func=fn)
    return parser


def _resolve(args):
    cfg = load_config(args.config)
    overrides = {}
    if args.total_budget is not None:
        overrides["total_budget"] = args.total_budget
    hrn = dict(cfg.harness)
    if args.paper_scale:
        if ("paper_scale_budget" not in hrn
                and "paper_scale_replications" not in hrn):
            raise ConfigError(
                "config defines no harness.paper_scale_budget or "
                "harness.paper_scale_replications for --paper-scale")
        if "paper_scale_budget" in hrn and args.total_budget is None:
            overrides["total_budget"] = int(hrn["paper_scale_budget"])
        if "paper_scale_replications" in hrn:
            hrn["replications"] = int(hrn["paper_scale_replications"])
    if args.replications is not None:
        hrn["replications"] = args.replications
    if args.seed is not None:
        hrn["master_seed"] = args.seed
    if args.threads is not None:
        hrn["threads"] = args.threads
    elif THREADS_ENV in os.environ:
        hrn.setdefault("threads", int(os.environ[THREADS_ENV]))
    method = args.method or cfg.algorithm.get("method", "four_point")
    model = build_model(cfg)
    algo = build_algo_config(cfg, overrides)
    return cfg, model, algo, method, hrn


def cmd_run(args):
    from dataclasses import replace
    cfg, model, algo, method, hrn = _resolve(args)
    seed = int(hrn.get("master_seed", 0))
    algo = replace(algo, seed=seed)
    runner = run_algorithm if method == "four_point" else run_central_fd
    result = runner(model, algo)
    sig = inference.sigma_hat(result.tail_outcomes)
    level = float(hrn.get("ci_level", 0.95))
    ci = inference.confidence_interval(result.mu_hat, sig, algo.k,
                                       result.draws_used, level)
    print(f"method = {method}")
    print("theta_hat = [" + ", ".join(_fmt(v) for v in result.theta_hat)
          + "]")
    print(f"mu_hat = {_fmt(result.mu_hat)}")
    print(f"sigma_hat = {_fmt(sig)}")
    print(f"ci_{int(level * 100)} = [{_fmt(ci.lo)}, {_fmt(ci.hi)}]")
    print(f"iterations = {result.iterations}")
    print(f"draws_used = {result.draws_used}")
    print(f"clipped_iterations = {result.clipped_iterations}")
    if algo.record_trajectory and "trajectory_csv" in hrn:
        _write_trajectory(hrn["trajectory_csv"], result)
    return EXIT_OK


def _write_trajectory(path, result):
    d = result.iterates.shape[1]
    header = ["t"] + [f"theta_{i}" for i in range(d)] + ["mu_hat_t",
                                                         "grad_norm"]
    lines = [",".join(header)]
    for t in range(result.iterations):
        row = [str(t + 1)]
        row += [_float_repr(v) for v in result.iterates[t]]
        row.append(_float_repr(result.trajectory["mu_hat_t"][t]))
        row.append(_float_repr(result.trajectory["grad_norm"][t]))
        lines.append(",".join(row))
    _write_text(path, "\n".join(lines) + "\n")


def _write_text(path, text):
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise RuntimeError(f"cannot write {path}: {exc}") from exc


def _records_csv(records, dim):
    header = (["rep_id", "seed"]
              + [f"theta_hat_{i}" for i in range(dim)]
              + ["mu_hat", "mu_true", "sigma_hat", "ci_lo", "ci_hi",
                 "covered", "normalized_stat", "draws_used"])
    lines = [",".join(header)]
    for r in records:
        row = [str(r.rep_id), str(r.seed)]
        row += [_float_repr(v) for v in r.theta_hat]
        row += [_float_repr(r.mu_hat), _float_repr(r.mu_true_at_theta_hat),
                _float_repr(r.sigma_hat), _float_repr(r.ci_lo),
                _float_repr(r.ci_hi),
                "true" if r.covered else "false",
                _float_repr(r.normalized_stat), str(r.draws_used)]
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


def _summary_dict(summary, cfg, method):
    return {
        "method": method,
        "replications": summary.replications,
        "coverage_rate": summary.coverage_rate,
        "stat_mean": summary.stat_mean,
        "stat_sd": summary.stat_sd,
        "ks_statistic": summary.ks_statistic,
        "histogram": [[lo, hi, n] for lo, hi, n in summary.histogram],
        "config": cfg.to_dict(),
    }


def _histogram_args(hrn):
    kwargs = {}
    if "histogram_bin_width" in hrn:
        kwargs["bin_width"] = float(hrn["histogram_bin_width"])
    if "histogram_lo" in hrn or "histogram_hi" in hrn:
        kwargs["bin_range"] = (
            float(hrn.get("histogram_lo", harness.DEFAULT_BIN_RANGE[0])),
            float(hrn.get("histogram_hi", harness.DEFAULT_BIN_RANGE[1])))
    return kwargs


def cmd_replicate(args):
    cfg, model, algo, method, hrn = _resolve(args)
    replications = int(hrn.get("replications", 100))
    if replications < 1:
        raise ConfigError("harness.replications must be >= 1")
    summary, records = harness.replicate(
        model, algo, method, replications,
        master_seed=int(hrn.get("master_seed", 0)),
        level=float(hrn.get("ci_level", 0.95)),
        n_jobs=int(hrn.get("threads", 0)),
        **_histogram_args(hrn))
    if "records_csv" in hrn:
        _write_text(hrn["records_csv"], _records_csv(records, algo.dim))
    if "summary_json" in hrn:
        _write_text(hrn["summary_json"],
                    json.dumps(_summary_dict(summary, cfg, method), indent=2)
                    + "\n")
    print(f"method = {method}  R = {replications}")
    print(f"coverage_rate = {_fmt(summary.coverage_rate)}")
    print(f"stat_mean = {_fmt(summary.stat_mean)}")
    if summary.stat_sd is not None:
        print(f"stat_sd = {_fmt(summary.stat_sd)}")
        print(f"ks_statistic = {_fmt(summary.ks_statistic)}")
    return EXIT_OK


# Verdict thresholds for the method comparison.
UNBIASED_STAT_MEAN = 0.3
BIASED_STAT_MEAN = -1.0


def cmd_compare(args):
    cfg, model, algo, _, hrn = _resolve(args)
    replications = int(hrn.get("replications", 100))
    if replications < 1:
        raise ConfigError("harness.replications must be >= 1")
    out = {}
    for method in ("four_point", "central_fd"):
        summary, _ = harness.replicate(
            model, algo, method, replications,
            master_seed=int(hrn.get("master_seed", 0)),
            level=float(hrn.get("ci_level", 0.95)),
            n_jobs=int(hrn.get("threads", 0)),
            **_histogram_args(hrn))
        out[method] = {
            "coverage_rate": summary.coverage_rate,
            "stat_mean": summary.stat_mean,
            "stat_sd": summary.stat_sd,
            "draws_used": algo.total_budget // (2 * algo.m) * 2 * algo.m,
        }
    fp_ok = abs(out["four_point"]["stat_mean"]) < UNBIASED_STAT_MEAN
    fd_biased = out["central_fd"]["stat_mean"] < BIASED_STAT_MEAN
    verdict = (f"four_point {'unbiased' if fp_ok else 'NOT unbiased'}; "
               f"central_fd {'biased' if fd_biased else 'NOT biased'}")
    out["verdict"] = verdict
    out["config"] = cfg.to_dict()
    if "compare_json" in hrn:
        _write_text(hrn["compare_json"], json.dumps(out, indent=2) + "\n")
    print(verdict)
    return EXIT_OK


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ConfigurationError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:  # runtime failures map to exit 1
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
