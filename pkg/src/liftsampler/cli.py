"""Command-line front end: run seeded chains from a JSON config, emit CSV
samples and JSON stats, and verify low-dimensional instances against the
independent reference oracles.

Exit codes: 0 ok, 2 config error, 3 unsupported instance dimension,
4 runtime sampler error.
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import harness
from .rgo import (
    RgoInputComposite,
    RgoInputConstrained,
    rgo_sample_composite,
    rgo_sample_constrained,
)
from .sampler import SamplerConfig, Trace, init_composite, mix_seed, run

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_UNSUPPORTED = 3
EXIT_RUNTIME = 4

log = logging.getLogger("liftsampler")


class ConfigError(ValueError):
    pass


def _setup_logging():
    level = os.environ.get("LIFTSAMPLER_LOG", "error").lower()
    levels = {"error": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}
    if level not in levels:
        level = "error"
    logging.basicConfig(level=levels[level], format="%(levelname)s %(name)s: %(message)s")


def load_run_config(obj: dict):
    """Parse a run config: registry instance name or inline instance spec
    plus sampler fields.  Returns (instance, SamplerConfig, chains, out)."""
    if not isinstance(obj, dict):
        raise ConfigError("config must be a JSON object")
    spec = obj.get("instance")
    if spec is None:
        raise ConfigError("config is missing 'instance'")
    try:
        if isinstance(spec, str):
            d = int(obj.get("dimension", 1))
            instance = harness.make_instance(
                spec, d, scale_a=obj.get("scale_a"), scale_b=obj.get("scale_b")
            )
        elif isinstance(spec, dict):
            instance = harness.instance_from_spec(spec)
        else:
            raise ConfigError("'instance' must be a name or an inline spec object")
    except (KeyError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
    if "iterations" not in obj:
        raise ConfigError("config is missing 'iterations'")
    config = SamplerConfig(
        iterations=int(obj["iterations"]),
        burn_in=None if obj.get("burn_in") is None else int(obj["burn_in"]),
        eta=None if obj.get("eta") is None else float(obj["eta"]),
        scale_a=None if obj.get("scale_a") is None else float(obj.get("scale_a")),
        scale_b=None if obj.get("scale_b") is None else float(obj.get("scale_b")),
        seed=int(obj.get("seed", 0)),
        proposal_budget=int(obj.get("proposal_budget", 10**6)),
    )
    chains = int(obj.get("chains", 1))
    if chains < 1:
        raise ConfigError("'chains' must be at least 1")
    out = obj.get("out", "liftsampler-out")
    return instance, config, chains, out


def _write_samples(path: Path, trace: Trace, d: int):
    n_lift = trace.lifted.shape[1] - d
    header = ["step"] + [f"x{i + 1}" for i in range(d)] + [
        f"lift{i + 1}" for i in range(n_lift)
    ]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for idx, row in zip(trace.step_index, trace.lifted):
            writer.writerow([int(idx)] + [f"{v:.17g}" for v in row])


def _write_stats(path: Path, trace: Trace, run_config: dict, wall_ms: float, chain_seed: int):
    steps = trace.config["iterations"]
    stats = {
        "mean_proposals": trace.stats.proposals / steps,
        "cp_sep_calls": trace.stats.cp_separation_calls,
        "cp_subgrad_calls": trace.stats.cp_subgradient_calls,
        "proposals_total": trace.stats.proposals,
        "accepted": steps,
        "wall_ms": wall_ms,
        "seed": chain_seed,
        "config": run_config,
    }
    path.write_text(json.dumps(stats, indent=2, sort_keys=True))


def _run_chain(instance, config: SamplerConfig, chain: int, out_dir: Path, run_config: dict):
    chain_seed = mix_seed(config.seed, chain)
    rng = np.random.default_rng(chain_seed)
    start = time.perf_counter()
    trace = run(config, instance.target, rng=rng)
    wall_ms = (time.perf_counter() - start) * 1000.0
    _write_samples(out_dir / f"samples_chain{chain}.csv", trace, instance.dimension)
    _write_stats(out_dir / f"stats_chain{chain}.json", trace, run_config, wall_ms, chain_seed)
    log.info(
        "chain %d: %d kept samples, %.2f proposals/step",
        chain,
        trace.samples.shape[0],
        trace.stats.proposals / trace.config["iterations"],
    )


def cmd_run(args) -> int:
    try:
        raw = json.loads(Path(args.config).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if args.seed is not None:
        raw["seed"] = args.seed
    if args.chains is not None:
        raw["chains"] = args.chains
    if args.out is not None:
        raw["out"] = args.out
    try:
        instance, config, chains, out = load_run_config(raw)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    run_config = dict(raw)
    run_config["out"] = str(out)
    try:
        with ThreadPoolExecutor(max_workers=chains) as pool:
            futures = [
                pool.submit(_run_chain, instance, config, i, out_dir, run_config)
                for i in range(chains)
            ]
            for fut in futures:
                fut.result()
    except Exception as exc:  # sampler failure: flush what we know, report
        (out_dir / "error.json").write_text(
            json.dumps({"error": str(exc), "config": run_config}, indent=2)
        )
        print(f"error: sampler failed: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


def _verify_constrained(instance, draws: int, seed: int):
    target = instance.target
    d = instance.dimension
    eta = 1.0 / (d * d)
    point = np.zeros(d + 1)
    point[-1] = 1.0
    inp = RgoInputConstrained(y=point[:-1], s=point[-1], eta=eta, target=target)
    rng = np.random.default_rng(seed)
    ours = np.empty((draws, d + 1))
    for i in range(draws):
        ours[i], _ = rgo_sample_constrained(inp, rng)
    from .lifting import q_member

    reference = np.empty((draws, d + 1))
    for i in range(draws):
        reference[i] = harness.naive_truncated_gaussian(
            inp.z, eta, lambda w: q_member(target, w), rng
        )
    return ours, reference


def _verify_composite(instance, draws: int, seed: int):
    target = instance.target
    d = instance.dimension
    eta = 1.0 / (d * d)
    rng = np.random.default_rng(seed)
    prev = init_composite(np.zeros(d), target, rng).point
    point = prev + 0.25
    inp = RgoInputComposite(point=point, eta=eta, target=target, prev=prev)
    ours = np.empty((draws, d + 2))
    for i in range(draws):
        ours[i], _ = rgo_sample_composite(inp, rng)
    from .lifting import qtilde_member

    reference = np.empty((draws, d + 2))
    for i in range(draws):
        reference[i] = harness.naive_truncated_gaussian(
            inp.q, eta, lambda p: qtilde_member(target, p), rng
        )
    return ours, reference


def cmd_verify(args) -> int:
    try:
        instance = harness.make_instance(args.instance, args.dimension)
    except (KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if instance.dimension > 2:
        print(
            f"error: verification needs d <= 2 for the quadrature reference "
            f"(got d = {instance.dimension})",
            file=sys.stderr,
        )
        return EXIT_UNSUPPORTED

    checks = []
    draws = args.draws
    sampler = _verify_constrained if instance.kind == "constrained" else _verify_composite
    ours, reference = sampler(instance, draws, seed=20240811)
    for coord in range(ours.shape[1]):
        stat, pval = harness.ks_two_sample(ours[:, coord], reference[:, coord])
        checks.append((f"rgo-vs-oracle ks coord {coord}", pval > 0.01, f"p={pval:.4f}"))

    config = SamplerConfig(iterations=args.iterations, burn_in=1000, seed=20240811)
    trace = run(config, instance.target)
    report = harness.MomentReport.from_samples(trace.samples)
    quad = harness.quadrature_moments(instance)
    for coord in range(instance.dimension):
        err = abs(report.mean[coord] - quad.mean[coord])
        tol = 3.5 * max(report.se_mean[coord], 1e-12)
        checks.append(
            (f"chain mean coord {coord} vs quadrature", err <= tol, f"err={err:.5f} tol={tol:.5f}")
        )

    width = max(len(name) for name, _, _ in checks)
    ok = True
    for name, passed, detail in checks:
        ok = ok and passed
        print(f"{name:<{width}}  {'PASS' if passed else 'FAIL'}  {detail}")
    return EXIT_OK if ok else 1


def main(argv=None) -> int:
    _setup_logging()
    parser = argparse.ArgumentParser(prog="liftsampler", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run chains from a JSON config")
    p_run.add_argument("--config", required=True, help="path to the JSON run config")
    p_run.add_argument("--seed", type=int, default=None, help="override the config seed")
    p_run.add_argument("--chains", type=int, default=None, help="override the chain count")
    p_run.add_argument("--out", default=None, help="override the output directory")
    p_run.set_defaults(func=cmd_run)

    p_verify = sub.add_parser("verify", help="check an instance against reference oracles")
    p_verify.add_argument("instance", help="registry instance name (C1, C2, C3, P1, P2)")
    p_verify.add_argument("-d", "--dimension", type=int, default=1)
    p_verify.add_argument("--draws", type=int, default=20000)
    p_verify.add_argument("--iterations", type=int, default=21000)
    p_verify.set_defaults(func=cmd_verify)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
