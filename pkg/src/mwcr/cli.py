"""Command-line front end: simulate, ingest, fit, plot, rerun.

Every data-producing command writes its outputs plus a ``manifest.json``
into ``--out``: the resolved options, SHA-256 digests of the inputs and the
output file names.  ``rerun`` replays a manifest into a fresh directory and
reproduces the recorded outputs byte for byte as long as the inputs still
match their digests.

Option values resolve in precedence order: command-line flag, then
``--config`` file (``key = value`` lines, ``#`` comments), then built-in
default.

Exit codes: 0 success, 2 usage error, 3 data or I/O error, 4 chain failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import hashlib
import json
import sys
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .datasets import follicular_path
from .ingest import (
    compute_cause,
    CauseLabel,
    parse_dataset,
    prepare_case1,
    prepare_case2,
    read_dataset,
    write_dataset,
)
from .model import PARAM_NAMES, ModelParams
from .posterior import format_table, summarize, to_json_records
from .sampler import ChainConfig, ChainError, SliceConfig, run_chain
from .simulate import CauseMode, CensoringScheme, SimSpec, generate, scheme_catalog

__all__ = ["main", "build_parser", "UsageError"]


class UsageError(ValueError):
    """Bad option combination discovered after argument parsing."""


DEFAULTS = {
    "simulate": {
        "scheme": None,
        "params": None,
        "n": None,
        "m": None,
        "cause_mode": "latent-min",
        "seed": 0,
    },
    "ingest": {"data": None, "case": 2},
    "fit": {
        "data": None,
        "iterations": 20000,
        "burn_in": None,
        "thin": 1,
        "seed": 0,
        "chains": 1,
        "gamma": 0.05,
        "width": 1.0,
        "init": None,
    },
    "plot": {"chain": None, "bins": None},
}

_CASTS = {
    "scheme": int,
    "n": int,
    "m": int,
    "seed": int,
    "case": int,
    "iterations": int,
    "burn_in": int,
    "thin": int,
    "chains": int,
    "bins": int,
    "gamma": float,
    "width": float,
    "params": lambda s: [float(v) for v in s.replace(",", " ").split()],
    "init": lambda s: [float(v) for v in s.replace(",", " ").split()],
    "cause_mode": str,
    "data": str,
    "chain": str,
}


def _load_config(path):
    values = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        values[key.strip().replace("-", "_")] = value.strip()
    return values


def _resolve_options(args, command):
    options = dict(DEFAULTS[command])
    config_path = getattr(args, "config", None)
    if config_path:
        config = _load_config(config_path)
        unknown = sorted(set(config) - set(options))
        if unknown:
            raise UsageError(
                f"{config_path}: unknown keys for {command}: {', '.join(unknown)}"
            )
        for key, raw in config.items():
            try:
                options[key] = _CASTS[key](raw)
            except ValueError:
                raise UsageError(
                    f"{config_path}: bad value for {key}: {raw!r}"
                ) from None
    for key in options:
        value = getattr(args, key, None)
        if value is not None:
            options[key] = value
    return options


def _sha256(path):
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _write_manifest(outdir, command, options, inputs, outputs):
    manifest = {
        "tool": {"name": "mwcr", "version": __version__, "rng": "PCG64"},
        "command": command,
        "created_utc": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "options": options,
        "inputs": {str(p): _sha256(p) for p in inputs},
        "outputs": sorted(outputs),
    }
    path = Path(outdir) / "manifest.json"
    path.write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    return manifest


def _outdir(path):
    outdir = Path(path)
    outdir.mkdir(parents=True, exist_ok=True)
    return outdir


def run_simulate(options, outdir):
    scheme_id = options.get("scheme")
    params = options.get("params")
    if scheme_id is not None and params is not None:
        raise UsageError("give either --scheme or --params, not both")
    if scheme_id is not None:
        catalog = scheme_catalog()
        if scheme_id not in catalog:
            valid = ", ".join(str(k) for k in sorted(catalog))
            raise UsageError(f"unknown scheme {scheme_id}; valid schemes: {valid}")
        base = catalog[scheme_id]
        scheme = base.scheme
        model = base.params
    elif params is not None:
        if len(params) != 4:
            raise UsageError("--params needs 4 values: lambda1 lambda2 alpha beta")
        if options.get("n") is None:
            raise UsageError("--params also needs --n")
        model = ModelParams(*[float(v) for v in params])
        n = options["n"]
        m = options.get("m")
        if m is None or m == n:
            scheme = CensoringScheme.complete(n)
        else:
            scheme = CensoringScheme.progressive_evenly(n, m)
    else:
        raise UsageError("one of --scheme or --params is required")
    spec = SimSpec(
        params=model,
        scheme=scheme,
        cause_mode=CauseMode(options["cause_mode"]),
        seed=options["seed"],
    )
    sample = generate(spec)
    write_dataset(sample, outdir / "dataset.csv")
    recorded = dict(options)
    # resolved values live under their own key so a rerun replays the
    # original --scheme/--params choice instead of seeing both at once
    recorded["resolved"] = {
        "params": [model.lambda1, model.lambda2, model.alpha, model.beta],
        "n": scheme.n,
        "m": scheme.m,
    }
    _write_manifest(outdir, "simulate", recorded, [], ["dataset.csv"])
    print(
        f"simulated n={sample.n}, m={sample.m} "
        f"(cause 1: {sample.m1}, cause 2: {sample.m - sample.m1}) "
        f"-> {outdir / 'dataset.csv'}"
    )
    return 0


def run_ingest(options, outdir):
    case = options["case"]
    if case not in (1, 2):
        raise UsageError(f"unknown case {case}; valid cases: 1, 2")
    source = options.get("data")
    path = Path(source) if source is not None else follicular_path()
    rows = parse_dataset(path)
    labels = [compute_cause(r) for r in rows]
    censored = sum(1 for c in labels if c is CauseLabel.CENSORED)
    disease = sum(1 for c in labels if c is CauseLabel.DISEASE)
    death = sum(1 for c in labels if c is CauseLabel.DEATH)
    sample = prepare_case1(rows) if case == 1 else prepare_case2(rows)
    write_dataset(sample, outdir / "dataset.csv")
    recorded = dict(options)
    recorded["data"] = str(path)
    _write_manifest(outdir, "ingest", recorded, [path], ["dataset.csv"])
    print(
        f"{len(rows)} subjects: {disease} disease, {death} death, "
        f"{censored} censored -> case {case} sample with n={sample.n}, "
        f"m={sample.m} at {outdir / 'dataset.csv'}"
    )
    return 0


def _chain_seeds(seed, chains):
    if chains == 1:
        return [seed]
    return [[seed, k] for k in range(chains)]


def run_fit(options, outdir):
    if options.get("data") is None:
        raise UsageError("--data is required for fit")
    if options["chains"] < 1:
        raise UsageError("--chains must be at least 1")
    data_path = Path(options["data"])
    sample = read_dataset(data_path)
    init = options.get("init")
    base = ChainConfig(
        iterations=options["iterations"],
        burn_in=options["burn_in"],
        thin=options["thin"],
        seed=options["seed"],
        init=ModelParams(*[float(v) for v in init]) if init is not None else None,
        slice=SliceConfig(width=options["width"]),
    )
    outputs = []
    pooled = []
    for index, seed in enumerate(_chain_seeds(options["seed"], options["chains"]), 1):
        chain = run_chain(dataclasses.replace(base, seed=seed), sample)
        name = f"chain_{index:02d}.csv"
        _write_chain_csv(outdir / name, chain.draws)
        outputs.append(name)
        pooled.append(chain.draws)
    draws = np.vstack(pooled)
    summary = summarize(draws, gamma=options["gamma"])
    records = to_json_records(summary)
    (outdir / "summary.json").write_text(
        json.dumps(records, indent=2) + "\n", encoding="utf-8"
    )
    table = format_table(summary)
    (outdir / "summary.txt").write_text(table + "\n", encoding="utf-8")
    outputs += ["summary.json", "summary.txt"]
    _write_manifest(outdir, "fit", dict(options), [data_path], outputs)
    print(table)
    return 0


def _write_chain_csv(path, draws):
    lines = [",".join(PARAM_NAMES)]
    for row in draws:
        lines.append(",".join(repr(float(v)) for v in row))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def _read_chain_csv(path):
    text = Path(path).read_text(encoding="utf-8").splitlines()
    if not text or [c.strip() for c in text[0].split(",")] != list(PARAM_NAMES):
        raise ValueError(
            f"{path}: expected header {','.join(PARAM_NAMES)}"
        )
    rows = [[float(v) for v in line.split(",")] for line in text[1:] if line.strip()]
    if not rows:
        raise ValueError(f"{path}: no draws")
    return np.array(rows, dtype=float)


def run_plot(options, outdir):
    if options.get("chain") is None:
        raise UsageError("--chain is required for plot")
    import matplotlib

    matplotlib.use("svg", force=True)
    matplotlib.rcParams["svg.hashsalt"] = "mwcr"
    from matplotlib.figure import Figure

    chain_path = Path(options["chain"])
    draws = _read_chain_csv(chain_path)
    outputs = []
    for index, name in enumerate(PARAM_NAMES):
        values = draws[:, index]
        trace_csv = f"trace_{name}.csv"
        lines = ["iteration,value"]
        lines += [f"{i},{repr(float(v))}" for i, v in enumerate(values)]
        (outdir / trace_csv).write_text("\n".join(lines) + "\n", encoding="utf-8")

        bins = options.get("bins")
        counts, edges = np.histogram(values, bins=bins if bins else "fd")
        hist_csv = f"hist_{name}.csv"
        lines = ["bin_left,bin_right,count"]
        lines += [
            f"{repr(float(edges[i]))},{repr(float(edges[i + 1]))},{int(c)}"
            for i, c in enumerate(counts)
        ]
        (outdir / hist_csv).write_text("\n".join(lines) + "\n", encoding="utf-8")

        fig = Figure(figsize=(8.0, 3.0))
        ax = fig.add_subplot(111)
        ax.plot(np.arange(values.size), values, linewidth=0.6)
        ax.set_xlabel("iteration")
        ax.set_ylabel(name)
        trace_svg = f"trace_{name}.svg"
        fig.savefig(outdir / trace_svg, format="svg", metadata={"Date": None})

        fig = Figure(figsize=(5.0, 3.5))
        ax = fig.add_subplot(111)
        ax.stairs(counts, edges, fill=True)
        ax.set_xlabel(name)
        ax.set_ylabel("count")
        hist_svg = f"hist_{name}.svg"
        fig.savefig(outdir / hist_svg, format="svg", metadata={"Date": None})

        outputs += [trace_csv, hist_csv, trace_svg, hist_svg]
    _write_manifest(outdir, "plot", dict(options), [chain_path], outputs)
    print(f"wrote {len(outputs)} plot files to {outdir}")
    return 0


RUNNERS = {
    "simulate": run_simulate,
    "ingest": run_ingest,
    "fit": run_fit,
    "plot": run_plot,
}


def run_rerun(args):
    manifest_path = Path(args.manifest)
    manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    command = manifest.get("command")
    if command not in RUNNERS:
        raise UsageError(f"manifest names unknown command {command!r}")
    for path, digest in manifest.get("inputs", {}).items():
        current = _sha256(path)
        if current != digest:
            raise ValueError(
                f"input {path} no longer matches the manifest digest "
                f"({current} != {digest})"
            )
    options = dict(DEFAULTS[command])
    options.update(manifest.get("options", {}))
    return RUNNERS[command](options, _outdir(args.out))


def build_parser():
    parser = argparse.ArgumentParser(
        prog="mwcr",
        description=(
            "Bayesian competing-risks analysis for the modified Weibull "
            "lifetime family under progressive type-II censoring"
        ),
    )
    parser.add_argument("--version", action="version", version=f"mwcr {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="draw a synthetic censored dataset")
    p.add_argument("--scheme", type=int, default=None, help="stock design 1-4")
    p.add_argument(
        "--params",
        type=float,
        nargs=4,
        metavar=("L1", "L2", "A", "B"),
        default=None,
        help="explicit lambda1 lambda2 alpha beta instead of --scheme",
    )
    p.add_argument("--n", type=int, default=None, help="cohort size for --params")
    p.add_argument("--m", type=int, default=None, help="observed failures for --params")
    p.add_argument(
        "--cause-mode",
        dest="cause_mode",
        choices=[mode.value for mode in CauseMode],
        default=None,
    )
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--config", default=None)
    p.add_argument("--out", required=True)

    p = sub.add_parser("ingest", help="turn a follow-up table into analysis data")
    p.add_argument("--data", default=None, help="table path (default: bundled example)")
    p.add_argument("--case", type=int, choices=(1, 2), default=None)
    p.add_argument("--config", default=None)
    p.add_argument("--out", required=True)

    p = sub.add_parser("fit", help="run the slice-within-Gibbs sampler")
    p.add_argument("--data", default=None, help="dataset in the exchange format")
    p.add_argument("--iterations", type=int, default=None)
    p.add_argument("--burn-in", dest="burn_in", type=int, default=None)
    p.add_argument("--thin", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--chains", type=int, default=None)
    p.add_argument("--gamma", type=float, default=None)
    p.add_argument("--width", type=float, default=None)
    p.add_argument(
        "--init",
        type=float,
        nargs=4,
        metavar=("L1", "L2", "A", "B"),
        default=None,
        help="starting point (default: moment-based)",
    )
    p.add_argument("--config", default=None)
    p.add_argument("--out", required=True)

    p = sub.add_parser("plot", help="trace and histogram files from a chain csv")
    p.add_argument("--chain", default=None)
    p.add_argument("--bins", type=int, default=None)
    p.add_argument("--config", default=None)
    p.add_argument("--out", required=True)

    p = sub.add_parser("rerun", help="replay a manifest into a new directory")
    p.add_argument("--manifest", required=True)
    p.add_argument("--out", required=True)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "rerun":
            return run_rerun(args)
        options = _resolve_options(args, args.command)
        return RUNNERS[args.command](options, _outdir(args.out))
    except UsageError as exc:
        print(f"mwcr {args.command}: {exc}", file=sys.stderr)
        return 2
    except ChainError as exc:
        print(f"mwcr {args.command}: {exc}", file=sys.stderr)
        return 4
    except (ValueError, OSError) as exc:
        print(f"mwcr {args.command}: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
