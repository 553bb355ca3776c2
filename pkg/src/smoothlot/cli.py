"""Command-line harness: config handling and the experiment commands.

Usage: smoothlot <command> --config <path> [--seed S] [--out DIR]
                 [--k K | --rate R] [--smoothness L]

Commands: marginals, sample, sweep, perturb, tightness, expost, bounds.

The config is a JSON document; flags override its fields, and the fully
resolved settings are echoed to <out>/config_resolved.json so a run can be
reproduced from its output directory alone.  Every artifact is a function of
(config, seed): reruns are byte-identical.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import analysis, expost, io, sampling
from .baselines import ThresholdPolicy, thresholded_lottery_marginals
from .clipped import clipped_linear_marginals, slope_from_smoothness
from .core import ReviewMatrix, UtilitySpec, leave_one_out_intervals, utility
from .softmax import softmax_marginals_mc, temperature_from_smoothness

COMMANDS = ("marginals", "sample", "sweep", "perturb", "tightness", "expost", "bounds")


@dataclass
class RunConfig:
    dataset: dict
    utility: str = "mean"
    k: int | None = None
    rate: float | None = None
    mechanisms: list = field(default_factory=lambda: [{"name": "clipped", "smoothness": 1.0}])
    seed: int = 0
    out: str = "runs/out"
    options: dict = field(default_factory=dict)


def load_config(path) -> RunConfig:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    unknown = set(doc) - {"dataset", "utility", "k", "rate", "mechanisms", "seed", "out", "options"}
    if unknown:
        raise ValueError(f"unknown config fields: {sorted(unknown)}")
    if "dataset" not in doc:
        raise ValueError("config needs a dataset")
    return RunConfig(**doc)


def apply_flags(cfg: RunConfig, args) -> RunConfig:
    if args.seed is not None:
        cfg.seed = args.seed
    if args.out is not None:
        cfg.out = args.out
    if args.k is not None:
        cfg.k, cfg.rate = args.k, None
    if args.rate is not None:
        cfg.rate, cfg.k = args.rate, None
    if args.smoothness is not None:
        for mech in cfg.mechanisms:
            if mech.get("name") in ("clipped", "softmax"):
                mech.pop("slope", None)
                mech.pop("temperature", None)
                mech["smoothness"] = args.smoothness
    return cfg


def build_matrix(cfg: RunConfig) -> ReviewMatrix:
    ds = cfg.dataset
    if "synthetic" in ds:
        s = ds["synthetic"]
        return analysis.synthetic_beta_reviews(
            n=s["n"],
            m=s["m"],
            a=s.get("shape", 2.0),
            levels=s.get("levels", 10),
            seed=s.get("seed", cfg.seed),
        )
    if "path" in ds:
        scale = ds.get("scale", {})
        return io.load_reviews(
            ds["path"],
            format=ds.get("format", "wide"),
            s_min=scale.get("min", 0.0),
            s_max=scale.get("max", 1.0),
            step=scale.get("step", 1.0),
        )
    raise ValueError("dataset needs either a synthetic spec or a file path")


def resolve_budget(cfg: RunConfig, n: int) -> int:
    if (cfg.k is None) == (cfg.rate is None):
        raise ValueError("give exactly one of k or rate")
    if cfg.k is not None:
        k = int(cfg.k)
    else:
        # round half-up so published acceptance rates resolve predictably
        k = int(np.floor(cfg.rate * n + 0.5))
    if not 0 < k <= n:
        raise ValueError(f"budget k = {k} outside 1..{n}")
    return k


def _mech_smoothness(mech: dict) -> float:
    if "smoothness" not in mech:
        raise ValueError(f"mechanism {mech.get('name')!r} needs a smoothness target")
    return float(mech["smoothness"])


def mechanism_marginals(
    mech: dict, X: ReviewMatrix, k: int, spec: UtilitySpec, seed
) -> tuple[np.ndarray, float]:
    """(marginals, mc standard error bound) for one configured mechanism."""
    u = utility(X, spec)
    name = mech.get("name")
    if name == "clipped":
        keys = [key for key in ("smoothness", "slope") if key in mech]
        if len(keys) != 1:
            raise ValueError("clipped mechanism needs exactly one of smoothness or slope")
        alpha = (
            float(mech["slope"])
            if "slope" in mech
            else slope_from_smoothness(_mech_smoothness(mech), spec.lipschitz)
        )
        return clipped_linear_marginals(u, alpha, k).p, 0.0
    if name == "softmax":
        keys = [key for key in ("smoothness", "temperature") if key in mech]
        if len(keys) != 1:
            raise ValueError("softmax mechanism needs exactly one of smoothness or temperature")
        tau = (
            float(mech["temperature"])
            if "temperature" in mech
            else temperature_from_smoothness(_mech_smoothness(mech), spec.lipschitz)
        )
        draws = int(mech.get("draws", 10_000))
        est = softmax_marginals_mc(u, tau, k, draws, seed)
        return est.p, float(est.stderr.max())
    if name == "threshold":
        pol = mech.get("policy", {"mode": "interval"})
        policy = ThresholdPolicy(
            mode=pol.get("mode", "interval"), t_lo=pol.get("t_lo"), t_hi=pol.get("t_hi")
        )
        if policy.mode == "explicit":
            return thresholded_lottery_marginals(u, k, policy=policy), 0.0
        return thresholded_lottery_marginals(u, k, intervals=leave_one_out_intervals(X)), 0.0
    raise ValueError(f"unknown mechanism {name!r}")


def _mechanism_handle(mech: dict, k: int, kind: str, seed):
    name = mech.get("name")
    if name == "clipped":
        return analysis.make_clipped_mechanism(k, _mech_smoothness(mech), kind)
    if name == "softmax":
        return analysis.make_softmax_mechanism(
            k, _mech_smoothness(mech), int(mech.get("draws", 10_000)), seed, kind
        )
    if name == "threshold":
        pol = mech.get("policy", {"mode": "interval"})
        policy = ThresholdPolicy(
            mode=pol.get("mode", "interval"), t_lo=pol.get("t_lo"), t_hi=pol.get("t_hi")
        )
        return analysis.make_threshold_mechanism(k, policy if policy.mode == "explicit" else None, kind)
    raise ValueError(f"unknown mechanism {name!r}")


def _echo_config(cfg: RunConfig, command: str, k: int, out: Path):
    io.write_json(
        out / "config_resolved.json",
        {
            "command": command,
            "dataset": cfg.dataset,
            "utility": cfg.utility,
            "k": k,
            "mechanisms": cfg.mechanisms,
            "seed": cfg.seed,
            "out": str(out),
            "options": cfg.options,
        },
    )


def run_command(cfg: RunConfig, command: str) -> int:
    X = build_matrix(cfg)
    k = resolve_budget(cfg, X.n)
    spec = UtilitySpec.for_counts(cfg.utility, X.counts)
    u = utility(X, spec)
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    _echo_config(cfg, command, k, out)
    if not cfg.mechanisms:
        raise ValueError("config lists no mechanisms")

    if command == "marginals":
        for pos, mech in enumerate(cfg.mechanisms):
            p, _ = mechanism_marginals(mech, X, k, spec, cfg.seed)
            name = "marginals.csv" if pos == 0 else f"marginals_{mech['name']}.csv"
            io.write_marginals_csv(out / name, u, p)
        return 0

    if command == "sample":
        p, _ = mechanism_marginals(cfg.mechanisms[0], X, k, spec, cfg.seed)
        draws = int(cfg.options.get("sample", {}).get("draws", 1000))
        sets = sampling.systematic_sample_batch(p, k, draws, np.random.default_rng(cfg.seed))
        io.write_marginals_csv(out / "marginals.csv", u, p)
        io.write_samples_csv(out / "samples.csv", sets)
        return 0

    if command == "sweep":
        opts = cfg.options.get("sweep", {})
        names = [m["name"] for m in cfg.mechanisms if m.get("name") in ("clipped", "softmax")]
        if not names:
            raise ValueError("sweep needs a clipped or softmax mechanism")
        grid = opts.get("smoothness_grid") or analysis.default_smoothness_grid(
            X.m_min, int(opts.get("points", 10))
        )
        rows = analysis.regret_smoothness_sweep(
            X, names, grid, k, seed=cfg.seed, draws=int(opts.get("draws", 10_000)), kind=cfg.utility
        )
        io.write_sweep_csv(out / "sweep.csv", rows)
        return 0

    if command == "perturb":
        opts = cfg.options.get("perturb", {})
        report_doc = {}
        tradeoff = []
        for mech in cfg.mechanisms:
            handle = _mechanism_handle(mech, k, cfg.utility, cfg.seed)
            report = analysis.perturbation_search(handle, X, tick=opts.get("tick", X.tick))
            entry = {
                "candidate": report.candidate,
                "review": report.review,
                "direction": report.direction,
                "l1_change": report.l1_change,
                "max_change": report.max_change,
                "ratio": report.ratio,
                "tick": report.tick,
            }
            if mech.get("name") == "softmax":
                entry["draws"] = int(mech.get("draws", 10_000))
            report_doc[mech["name"]] = entry
            r = analysis.regret(np.asarray(handle(X)), u, k)
            tradeoff.append(
                {
                    "mechanism": mech["name"],
                    "ratio": report.ratio,
                    "regret": r,
                    "regret_per_k": r / k,
                }
            )
        io.write_json(out / "perturb.json", report_doc)
        io.write_tradeoff_csv(out / "tradeoff.csv", tradeoff)
        return 0

    if command == "tightness":
        opts = cfg.options.get("tightness", {})
        boundaries = opts.get("boundaries") or np.linspace(0.0, 1.0, 21).tolist()
        steps = opts.get("steps") or [0.02, 0.05, 0.1]
        draws = int(opts.get("draws", 100_000))
        rows = []
        for mech in cfg.mechanisms:
            name = mech.get("name")
            if name not in ("clipped", "softmax"):
                continue
            grid = opts.get("smoothness_grid") or [_mech_smoothness(mech)]
            for L in grid:
                rep = analysis.tightness_search(
                    name, X.n, k, float(L), boundaries, steps, draws=draws, seed=cfg.seed
                )
                rows.append(
                    {
                        "L": float(L),
                        "mechanism": name,
                        "ratio": rep.ratio,
                        "stderr": rep.stderr,
                        "boundary": rep.boundary_utility,
                        "step": rep.step,
                        "direction": rep.direction,
                    }
                )
        if not rows:
            raise ValueError("tightness needs a clipped or softmax mechanism")
        io.write_tightness_csv(out / "tightness.csv", rows)
        return 0

    if command == "expost":
        opts = cfg.options.get("expost", {})
        p, _ = mechanism_marginals(cfg.mechanisms[0], X, k, spec, cfg.seed)
        intervals = leave_one_out_intervals(X)
        pairs = expost.dominance_pairs(intervals)
        mech = cfg.mechanisms[0]
        alpha = (
            float(mech["slope"])
            if "slope" in mech
            else slope_from_smoothness(_mech_smoothness(mech), spec.lipschitz)
        )
        draws = int(opts.get("draws", 1000))
        sets = sampling.systematic_sample_batch(p, k, draws, np.random.default_rng(cfg.seed))
        valid = sum(expost.check_ex_post_valid(row, pairs) for row in sets)
        doc = {
            "dominance_pairs": len(pairs),
            "core_width_satisfied": expost.core_width_satisfied(intervals, u, alpha),
            "draws": draws,
            "valid_fraction": valid / draws,
        }
        if opts.get("project", False):
            p_hat, mixture = expost.project_valid_marginals(p, pairs, k)
            doc["projection_l2"] = float(np.linalg.norm(p_hat - p))
            doc["mixture_size"] = len(mixture)
            io.write_marginals_csv(out / "marginals_projected.csv", u, p_hat)
        io.write_marginals_csv(out / "marginals.csv", u, p)
        io.write_json(out / "expost.json", doc)
        return 0

    if command == "bounds":
        opts = cfg.options.get("bounds", {})
        items: list[tuple[str, float]] = []
        for mech in cfg.mechanisms:
            name = mech.get("name")
            if name == "clipped":
                L = _mech_smoothness(mech)
                items.append(
                    ("regret_upper_clipped", analysis.regret_upper_bound_linear(k, X.n, spec.lipschitz, L))
                )
                items.append(
                    ("regret_lower", analysis.regret_lower_bound(k, X.n, spec.lower_lipschitz, L))
                )
            elif name == "softmax":
                tau = (
                    float(mech["temperature"])
                    if "temperature" in mech
                    else temperature_from_smoothness(_mech_smoothness(mech), spec.lipschitz)
                )
                items.append(("regret_upper_softmax", analysis.softmax_regret_bound(k, X.n, tau)))
        if "eps" in opts and "distance" in opts:
            exact, linear = analysis.metric_dp_marginal_bound(
                float(opts["eps"]), k, float(opts["distance"])
            )
            items.append(("metric_dp_exact", exact))
            items.append(("metric_dp_linear", linear))
        if not items:
            raise ValueError("bounds needs a clipped or softmax mechanism or metric-dp options")
        io.write_bounds_csv(out / "bounds.csv", items)
        return 0

    raise ValueError(f"unknown command {command!r}")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="smoothlot", description="Smooth randomized selection experiment harness."
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", required=True)
    parser.add_argument("--seed", type=int)
    parser.add_argument("--out")
    group = parser.add_mutually_exclusive_group()
    group.add_argument("--k", type=int)
    group.add_argument("--rate", type=float)
    parser.add_argument("--smoothness", type=float)
    args = parser.parse_args(argv)
    try:
        cfg = apply_flags(load_config(args.config), args)
        return run_command(cfg, args.command)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
