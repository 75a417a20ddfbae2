"""Command-line interface.

Subcommands: generate, run, ensemble, sweep-size, heatmap, empirical,
stability, split.  Ensemble-style commands read a flat TOML configuration
file; any key can be overridden on the command line with ``--set key=value``
(flag overrides always beat file values).  Every command writes its outputs
plus a ``manifest.json`` carrying the resolved configuration, master seed,
config digest, package version, and a sha256 per output file, which is
sufficient to regenerate the outputs exactly.

The output directory defaults to ``./seedpol_out``; the ``SEEDPOL_OUT_DIR``
environment variable overrides the default and ``--out-dir`` overrides both.
All numeric output uses round-trip decimal formatting, so a rerun with the
same master seed is byte-identical for any worker count.
"""

from __future__ import annotations

import argparse
import hashlib
import io
import json
import os
import sys
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib


from . import __version__, datasets
from .dynamics import Convergence, evolve_to_steady, init_ric, init_sic
from .experiments import (
    ConfigModelSpec,
    DegreeCorrectedSpec,
    ExperimentConfig,
    FixedGraph,
    config_digest,
    config_payload,
    heatmap,
    realize_graph,
    run_ensemble,
    size_sweep,
    split_prediction,
    write_heatmap_csv,
    write_samples_csv,
    write_sweep_csv,
)
from .generators import PlantedPartitionSpec
from .graph import Graph, load_edge_list, write_edge_list
from .metrics import polarization_index, write_edge_table_csv, write_histogram_csv
from .rng import RngSeed
from .stability import classify_stability

_BOOL_KEYS = {"include_cycles"}
_INT_KEYS = {"n", "k_min", "k_max", "realizations", "master_seed", "max_iter", "workers"}
_FLOAT_KEYS = {"alpha", "omega_in", "omega_out", "mean_degree", "quantile", "B"}
_LIST_KEYS = {"block_fractions"}
_STR_KEYS = {"model", "graph", "mode", "seed_pairs", "dataset"}
_ALL_KEYS = _BOOL_KEYS | _INT_KEYS | _FLOAT_KEYS | _LIST_KEYS | _STR_KEYS


def _parse_set(entries) -> dict:
    out = {}
    for entry in entries or ():
        if "=" not in entry:
            raise ValueError(f"--set expects key=value, got {entry!r}")
        key, _, raw = entry.partition("=")
        key = key.strip()
        if key not in _ALL_KEYS:
            raise ValueError(f"unknown configuration key {key!r}")
        if key in _BOOL_KEYS:
            if raw.lower() not in ("true", "false"):
                raise ValueError(f"{key} must be true/false")
            out[key] = raw.lower() == "true"
        elif key in _INT_KEYS:
            out[key] = int(raw)
        elif key in _FLOAT_KEYS:
            out[key] = float(raw)
        elif key in _LIST_KEYS:
            out[key] = [float(v) for v in raw.split(",") if v]
        else:
            out[key] = raw
    return out


def _load_config(path: str | None, overrides: dict) -> dict:
    merged: dict = {}
    if path:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
        for key, value in data.items():
            if key not in _ALL_KEYS:
                raise ValueError(f"unknown configuration key {key!r} in {path}")
            merged[key] = value
    merged.update(overrides)
    return merged


def _load_graph_arg(args) -> Graph:
    if getattr(args, "dataset", None):
        return datasets.by_name(args.dataset)
    if getattr(args, "graph", None):
        with open(args.graph) as fh:
            return load_edge_list(fh)
    raise ValueError("a graph is required: pass --graph PATH or --dataset NAME")


def _build_generator(conf: dict):
    model = conf.get("model")
    if model == "configuration":
        return ConfigModelSpec(
            node_count=int(conf["n"]),
            alpha=float(conf["alpha"]),
            k_min=int(conf.get("k_min", 2)),
            k_max=int(conf["k_max"]) if "k_max" in conf else None,
        )
    if model in ("planted_partition", "degree_corrected"):
        partition = PlantedPartitionSpec(
            node_count=int(conf["n"]),
            block_fractions=tuple(conf.get("block_fractions", (0.7, 0.15, 0.15))),
            omega_in=float(conf.get("omega_in", 0.7)),
            omega_out=float(conf["omega_out"]),
            target_mean_degree=float(conf.get("mean_degree", 6.0)),
        )
        if model == "planted_partition":
            return partition
        return DegreeCorrectedSpec(
            partition=partition,
            alpha=float(conf["alpha"]),
            k_min=int(conf.get("k_min", 2)),
            k_max=int(conf["k_max"]) if "k_max" in conf else None,
        )
    if model == "empirical":
        path = conf.get("graph")
        if not path:
            raise ValueError("model = 'empirical' needs a 'graph' path")
        with open(path) as fh:
            return FixedGraph(load_edge_list(fh))
    raise ValueError(
        "config needs model = configuration | planted_partition | "
        "degree_corrected | empirical"
    )


def _build_experiment(conf: dict, require_seed: bool = True) -> ExperimentConfig:
    if require_seed and "master_seed" not in conf:
        raise ValueError(
            "master_seed is required (flag --master-seed or config key); "
            "there is no silent time-based seeding"
        )
    return ExperimentConfig(
        generator=_build_generator(conf),
        mode=conf.get("mode", "both"),
        realizations=int(conf.get("realizations", 100)),
        seed_pairs=conf.get("seed_pairs", "random"),
        master_seed=int(conf.get("master_seed", 0)),
        max_iter=int(conf.get("max_iter", 1000)),
        include_cycles=bool(conf.get("include_cycles", False)),
    )


def _out_dir(args) -> Path:
    base = args.out_dir or os.environ.get("SEEDPOL_OUT_DIR") or "seedpol_out"
    path = Path(base)
    path.mkdir(parents=True, exist_ok=True)
    return path


class _Sink:
    """Collects named outputs, writes them, and records their hashes."""

    def __init__(self, directory: Path):
        self.directory = directory
        self.hashes: dict[str, str] = {}

    def write(self, name: str, writer):
        buffer = io.StringIO()
        writer(buffer)
        data = buffer.getvalue().encode()
        (self.directory / name).write_bytes(data)
        self.hashes[name] = hashlib.sha256(data).hexdigest()

    def manifest(self, command: str, parameters: dict, **extra):
        body = {
            "command": command,
            "version": __version__,
            "parameters": parameters,
            "outputs": self.hashes,
        }
        body.update(extra)
        payload = json.dumps(body, sort_keys=True, indent=2) + "\n"
        (self.directory / "manifest.json").write_bytes(payload.encode())


def _workers(args) -> int:
    if args.workers is not None:
        return max(1, args.workers)
    return os.cpu_count() or 1


def _cmd_generate(args) -> int:
    conf = _load_config(args.config, _parse_set(args.set or []))
    if args.master_seed is not None:
        conf["master_seed"] = args.master_seed
    if "master_seed" not in conf:
        raise ValueError("master_seed is required for generate")
    spec = _build_generator(conf)
    g = realize_graph(spec, RngSeed(int(conf["master_seed"]), 0).purpose(0))
    sink = _Sink(_out_dir(args))
    sink.write("graph.txt", lambda s: write_edge_list(g, s))
    if g.block_labels is not None:
        def blocks(stream):
            stream.write("node,block\n")
            for node, block in enumerate(g.block_labels.tolist()):
                stream.write(f"{node},{block}\n")

        sink.write("blocks.csv", blocks)
    sink.manifest(
        "generate",
        conf,
        node_count=g.node_count,
        edge_count=g.edge_count,
        master_seed=int(conf["master_seed"]),
    )
    print(f"generated graph: {g.node_count} nodes, {g.edge_count} edges")
    return 0


def _cmd_run(args) -> int:
    g = _load_graph_arg(args)
    if args.sic:
        plus, minus = (int(v) for v in args.sic.split(","))
        x0 = init_sic(g.node_count, plus, minus)
        mode = "sic"
    elif args.ric:
        if args.master_seed is None:
            raise ValueError("--ric needs --master-seed")
        x0 = init_ric(g.node_count, RngSeed(args.master_seed, 0).purpose(2))
        mode = "ric"
    else:
        raise ValueError("pass --sic I,J or --ric")
    result = evolve_to_steady(g, x0, max_iter=args.max_iter)
    sample = polarization_index(result.final_state, result.status)
    sink = _Sink(_out_dir(args))

    def row(stream):
        stream.write("realization,mode,r,n_minus,n_zero,status,iterations\n")
        stream.write(
            f"0,{mode},{sample.r!r},{sample.n_minus!r},{sample.n_zero!r},"
            f"{sample.status.value},{result.iterations}\n"
        )

    sink.write("run.csv", row)
    sink.manifest(
        "run",
        {
            "graph": args.graph or args.dataset,
            "mode": mode,
            "sic": args.sic,
            "master_seed": args.master_seed,
            "max_iter": args.max_iter,
        },
    )
    print(f"r={sample.r!r} status={sample.status.value} iterations={result.iterations}")
    return 0


def _excluded_payload(record) -> dict:
    return {mode: dict(agg.excluded) for mode, agg in record.modes.items()}


def _cmd_ensemble(args) -> int:
    conf = _load_config(args.config, _parse_set(args.set or []))
    if args.master_seed is not None:
        conf["master_seed"] = args.master_seed
    cfg = _build_experiment(conf)
    record = run_ensemble(cfg, workers=_workers(args))
    sink = _Sink(_out_dir(args))
    sink.write("samples.csv", lambda s: write_samples_csv(s, record))
    for mode, agg in record.modes.items():
        if agg.edge_table is not None:
            sink.write(
                f"edge_table_{mode}.csv",
                lambda s, t=agg.edge_table: write_edge_table_csv(s, t),
            )
    sink.manifest(
        "ensemble",
        config_payload(cfg),
        master_seed=cfg.master_seed,
        config_digest=config_digest(cfg),
        excluded=_excluded_payload(record),
    )
    for mode, agg in record.modes.items():
        if agg.samples:
            print(
                f"{mode}: mean r = {agg.mean_r():.4f} "
                f"({len(agg.samples)} samples, {agg.excluded_count} excluded)"
            )
    return 0


def _cmd_sweep_size(args) -> int:
    conf = _load_config(args.config, _parse_set(args.set or []))
    if args.master_seed is not None:
        conf["master_seed"] = args.master_seed
    cfg = _build_experiment(conf)
    sizes = [int(v) for v in args.sizes.split(",") if v]
    rows = size_sweep(cfg, sizes, workers=_workers(args))
    sink = _Sink(_out_dir(args))
    sink.write("sweep.csv", lambda s: write_sweep_csv(s, rows))
    sink.manifest(
        "sweep-size",
        config_payload(cfg),
        sizes=sizes,
        master_seed=cfg.master_seed,
        config_digest=config_digest(cfg),
    )
    return 0


def _cmd_heatmap(args) -> int:
    conf = _load_config(args.config, _parse_set(args.set or []))
    if args.master_seed is not None:
        conf["master_seed"] = args.master_seed
    alphas = [float(v) for v in args.alphas.split(",") if v]
    omega_outs = [float(v) for v in args.omega_outs.split(",") if v]
    if not alphas or not omega_outs:
        raise ValueError("--alphas and --omega-outs must be non-empty")
    conf.setdefault("model", "degree_corrected")
    conf.setdefault("mode", "sic")
    # the template's cell parameters are overwritten per grid cell anyway
    conf.setdefault("alpha", alphas[0])
    conf.setdefault("omega_out", omega_outs[0])
    cfg = _build_experiment(conf)
    cells = heatmap(alphas, omega_outs, cfg, workers=_workers(args))
    sink = _Sink(_out_dir(args))
    sink.write("heatmap.csv", lambda s: write_heatmap_csv(s, cells))
    sink.manifest(
        "heatmap",
        config_payload(cfg),
        alphas=alphas,
        omega_outs=omega_outs,
        master_seed=cfg.master_seed,
        config_digest=config_digest(cfg),
    )
    return 0


def _cmd_empirical(args) -> int:
    g = _load_graph_arg(args)
    cfg = ExperimentConfig(
        generator=FixedGraph(g),
        mode="both",
        seed_pairs="all",
        master_seed=args.master_seed if args.master_seed is not None else 0,
        max_iter=args.max_iter,
    )
    record = run_ensemble(cfg, workers=_workers(args))
    sink = _Sink(_out_dir(args))
    sink.write("samples.csv", lambda s: write_samples_csv(s, record))
    for mode, agg in record.modes.items():
        if agg.edge_table is not None:
            sink.write(
                f"edge_table_{mode}.csv",
                lambda s, t=agg.edge_table: write_edge_table_csv(s, t),
            )
        if agg.samples:
            sink.write(
                f"histogram_{mode}.csv",
                lambda s, a=agg: write_histogram_csv(s, [x.r for x in a.samples]),
            )
    sink.manifest(
        "empirical",
        config_payload(cfg),
        graph=args.graph or args.dataset,
        master_seed=cfg.master_seed,
        config_digest=config_digest(cfg),
        excluded=_excluded_payload(record),
    )
    for mode, agg in record.modes.items():
        if agg.samples:
            print(f"{mode}: mean r = {agg.mean_r():.4f} over {len(agg.samples)} runs")
    return 0


def _stability_initial_states(args, g: Graph):
    if args.pairs:
        for chunk in args.pairs.split(";"):
            plus, minus = (int(v) for v in chunk.split(","))
            yield init_sic(g.node_count, plus, minus)
    elif args.random_pairs:
        if args.master_seed is None:
            raise ValueError("--random-pairs needs --master-seed")
        for t in range(args.random_pairs):
            gen = RngSeed(args.master_seed, t).purpose(1)
            plus = int(gen.integers(g.node_count))
            minus = int(gen.integers(g.node_count - 1))
            if minus >= plus:
                minus += 1
            yield init_sic(g.node_count, plus, minus)
    elif args.ric:
        if args.master_seed is None:
            raise ValueError("--ric needs --master-seed")
        for t in range(args.ric):
            yield init_ric(g.node_count, RngSeed(args.master_seed, t).purpose(2))
    else:
        raise ValueError("pass --pairs, --random-pairs, or --ric")


def _cmd_stability(args) -> int:
    g = _load_graph_arg(args)
    rows = []
    skipped: dict[str, int] = {}
    for run_id, x0 in enumerate(_stability_initial_states(args, g)):
        result = evolve_to_steady(g, x0, max_iter=args.max_iter)
        if result.status is not Convergence.FIXED_POINT:
            skipped[result.status.value] = skipped.get(result.status.value, 0) + 1
            continue
        report = classify_stability(g, result, B=args.B)
        rows.append(
            (
                run_id,
                report.spectral_radius,
                report.residual,
                report.verdict.value,
                report.zeros_in_state,
            )
        )
    sink = _Sink(_out_dir(args))

    def table(stream):
        stream.write("run_id,rho,residual,verdict,zeros_in_state\n")
        for run_id, rho, residual, verdict, zeros in rows:
            stream.write(f"{run_id},{rho!r},{residual!r},{verdict},{zeros}\n")

    sink.write("stability.csv", table)
    sink.manifest(
        "stability",
        {
            "graph": args.graph or args.dataset,
            "pairs": args.pairs,
            "random_pairs": args.random_pairs,
            "ric": args.ric,
            "B": args.B,
            "master_seed": args.master_seed,
            "max_iter": args.max_iter,
        },
        skipped=skipped,
    )
    print(f"classified {len(rows)} fixed points ({sum(skipped.values())} skipped)")
    return 0


def _cmd_split(args) -> int:
    from .experiments import all_pairs_sic

    g = _load_graph_arg(args)
    _, table = all_pairs_sic(g, max_iter=args.max_iter, workers=_workers(args))
    result = split_prediction(g, table, args.quantile)
    sink = _Sink(_out_dir(args))

    def removed(stream):
        stream.write("i,j\n")
        for i, j in result.removed_edges.tolist():
            stream.write(f"{i},{j}\n")

    def comps(stream):
        stream.write("node,component\n")
        for k, comp in enumerate(result.components):
            for node in comp.tolist():
                stream.write(f"{node},{k}\n")

    sink.write("removed_edges.csv", removed)
    sink.write("components.csv", comps)
    sink.manifest(
        "split",
        {
            "graph": args.graph or args.dataset,
            "quantile": args.quantile,
            "max_iter": args.max_iter,
            "threshold": result.threshold,
        },
        component_sizes=[len(c) for c in result.components],
    )
    print(
        f"removed {len(result.removed_edges)} edges above delta="
        f"{result.threshold:.3f}; {len(result.components)} components"
    )
    return 0


def _add_common(parser, seed_required=False):
    parser.add_argument("--out-dir", help="output directory")
    parser.add_argument("--workers", type=int, default=None, help="worker count")
    parser.add_argument(
        "--master-seed", type=int, default=None, required=seed_required
    )


def _add_graph_source(parser):
    parser.add_argument("--graph", help="edge-list file")
    parser.add_argument("--dataset", help="bundled dataset name (karate)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="seedpol",
        description="Ternary majority-rule opinion dynamics on networks",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="sample one graph and export it")
    p.add_argument("--config", help="TOML configuration file")
    p.add_argument("--set", action="append", metavar="KEY=VALUE")
    _add_common(p)
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("run", help="single trajectory on a fixed graph")
    _add_graph_source(p)
    p.add_argument("--sic", metavar="I,J", help="seed pair: +1 node, -1 node")
    p.add_argument("--ric", action="store_true", help="random initial condition")
    p.add_argument("--max-iter", type=int, default=1000)
    _add_common(p)
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("ensemble", help="polarization ensemble")
    p.add_argument("--config", help="TOML configuration file")
    p.add_argument("--set", action="append", metavar="KEY=VALUE")
    _add_common(p)
    p.set_defaults(func=_cmd_ensemble)

    p = sub.add_parser("sweep-size", help="ensemble per network size")
    p.add_argument("--config", help="TOML configuration file")
    p.add_argument("--set", action="append", metavar="KEY=VALUE")
    p.add_argument("--sizes", required=True, metavar="N1,N2,...")
    _add_common(p)
    p.set_defaults(func=_cmd_sweep_size)

    p = sub.add_parser("heatmap", help="alpha/omega_out polarization grid")
    p.add_argument("--config", help="TOML configuration file")
    p.add_argument("--set", action="append", metavar="KEY=VALUE")
    p.add_argument("--alphas", required=True, metavar="A1,A2,...")
    p.add_argument("--omega-outs", required=True, metavar="W1,W2,...")
    _add_common(p)
    p.set_defaults(func=_cmd_heatmap)

    p = sub.add_parser("empirical", help="all-pairs seed analysis of a graph")
    _add_graph_source(p)
    p.add_argument("--max-iter", type=int, default=1000)
    _add_common(p)
    p.set_defaults(func=_cmd_empirical)

    p = sub.add_parser("stability", help="classify steady-state stability")
    _add_graph_source(p)
    p.add_argument("--pairs", metavar="I,J;K,L;...", help="explicit seed pairs")
    p.add_argument("--random-pairs", type=int, metavar="K")
    p.add_argument("--ric", type=int, metavar="K", help="K random initial states")
    p.add_argument("--B", type=float, default=100.0, help="smoothing parameter")
    p.add_argument("--max-iter", type=int, default=1000)
    _add_common(p)
    p.set_defaults(func=_cmd_stability)

    p = sub.add_parser("split", help="predict network splitting from seed runs")
    _add_graph_source(p)
    p.add_argument("--quantile", type=float, default=0.9)
    p.add_argument("--max-iter", type=int, default=1000)
    _add_common(p)
    p.set_defaults(func=_cmd_split)

    return parser


def dispatch(argv=None) -> int:
    """Parse arguments and execute the matching subcommand."""
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BrokenPipeError:
        return 1
    except Exception as exc:  # noqa: BLE001 - single diagnostic surface
        print(f"seedpol: error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(dispatch())
