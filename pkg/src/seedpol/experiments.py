"""Ensemble orchestration: polarization ensembles, size sweeps, the
alpha/omega_out heatmap, exhaustive seed-pair analysis, and split prediction.

Every realization owns an independent random stream derived from
``(master_seed, stream_offset + index)``, so records are identical for any
execution order or worker count, and reruns are byte-for-byte reproducible.

Runs that do not reach a fixed point (cycles, iteration cap) are excluded
from aggregates by default and counted by status; ``include_cycles`` folds
cycle-averaged polarization back into the samples instead.  Per-edge
difference tables always average fixed-point states only.
"""

from __future__ import annotations

import hashlib
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import IO, Sequence

import numpy as np

from .dynamics import Convergence, evolve_to_steady, init_ric, init_sic
from .generators import (
    PlantedPartitionSpec,
    configuration_model,
    degree_corrected_planted_partition,
    planted_partition_poisson,
    sample_power_law_degrees,
)
from .graph import Graph, connected_components, remove_edges
from .metrics import EdgeDifferenceTable, PolarizationSample, polarization_index
from .rng import RngSeed

ALL_PAIRS_NODE_LIMIT = 2000

# stream purposes within one realization
_PURPOSE_GRAPH = 0
_PURPOSE_SIC = 1
_PURPOSE_RIC = 2


@dataclass(frozen=True)
class ConfigModelSpec:
    """Power-law configuration model parameters."""

    node_count: int
    alpha: float
    k_min: int = 2
    k_max: int | None = None


@dataclass(frozen=True)
class DegreeCorrectedSpec:
    """Degree-corrected planted partition with power-law degrees."""

    partition: PlantedPartitionSpec
    alpha: float
    k_min: int = 2
    k_max: int | None = None


@dataclass(frozen=True)
class FixedGraph:
    """A fixed (typically empirical) graph reused across realizations."""

    graph: Graph


GeneratorSpec = ConfigModelSpec | PlantedPartitionSpec | DegreeCorrectedSpec | FixedGraph


def realize_graph(spec: GeneratorSpec, rng) -> Graph:
    """Draw one graph according to the generator spec."""
    if isinstance(spec, FixedGraph):
        return spec.graph
    if isinstance(spec, ConfigModelSpec):
        degrees = sample_power_law_degrees(
            spec.node_count, spec.alpha, spec.k_min, spec.k_max, rng
        )
        return configuration_model(degrees, rng)
    if isinstance(spec, PlantedPartitionSpec):
        return planted_partition_poisson(spec, rng)
    if isinstance(spec, DegreeCorrectedSpec):
        degrees = sample_power_law_degrees(
            spec.partition.node_count, spec.alpha, spec.k_min, spec.k_max, rng
        )
        return degree_corrected_planted_partition(degrees, spec.partition, rng)
    raise TypeError(f"unknown generator spec {type(spec).__name__}")


def spec_node_count(spec: GeneratorSpec) -> int:
    if isinstance(spec, FixedGraph):
        return spec.graph.node_count
    if isinstance(spec, (ConfigModelSpec, DegreeCorrectedSpec)):
        return (
            spec.node_count
            if isinstance(spec, ConfigModelSpec)
            else spec.partition.node_count
        )
    return spec.node_count


def resize_generator(spec: GeneratorSpec, size: int) -> GeneratorSpec:
    """Same generator at a different node count (size sweeps)."""
    if isinstance(spec, ConfigModelSpec):
        return replace(spec, node_count=size)
    if isinstance(spec, PlantedPartitionSpec):
        return replace(spec, node_count=size)
    if isinstance(spec, DegreeCorrectedSpec):
        return replace(spec, partition=replace(spec.partition, node_count=size))
    raise ValueError("cannot resize a fixed graph")


@dataclass(frozen=True)
class ExperimentConfig:
    """One ensemble: a generator, an initial-condition mode, and run control.

    ``mode`` is ``"sic"``, ``"ric"``, or ``"both"``.  ``seed_pairs`` selects
    how seed pairs are chosen: ``"random"`` draws one uniform ordered pair
    per realization; ``"all"`` (fixed graphs only) enumerates every unordered
    pair, one realization each, overriding ``realizations``.
    ``stream_offset`` shifts the realization stream indices so that sweeps
    and grids use disjoint streams under one master seed.
    """

    generator: GeneratorSpec
    mode: str = "both"
    realizations: int = 100
    seed_pairs: str = "random"
    master_seed: int = 0
    max_iter: int = 1000
    include_cycles: bool = False
    stream_offset: int = 0

    def __post_init__(self):
        if self.mode not in ("sic", "ric", "both"):
            raise ValueError("mode must be 'sic', 'ric', or 'both'")
        if self.seed_pairs not in ("random", "all"):
            raise ValueError("seed_pairs must be 'random' or 'all'")
        if self.realizations < 1:
            raise ValueError("realizations must be at least 1")
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")
        if self.seed_pairs == "all":
            if not isinstance(self.generator, FixedGraph):
                raise ValueError("seed_pairs='all' requires a fixed graph")
            n = self.generator.graph.node_count
            if n > ALL_PAIRS_NODE_LIMIT:
                raise ValueError(
                    f"all-pairs run over {n} nodes exceeds the "
                    f"{ALL_PAIRS_NODE_LIMIT}-node guard; use random seed pairs"
                )

    @property
    def run_count(self) -> int:
        """Realization count after resolving the seed-pair policy."""
        if self.seed_pairs == "all":
            n = self.generator.graph.node_count
            return n * (n - 1) // 2
        return self.realizations

    @property
    def modes(self) -> tuple[str, ...]:
        return ("sic", "ric") if self.mode == "both" else (self.mode,)


def _spec_payload(spec: GeneratorSpec):
    if isinstance(spec, FixedGraph):
        g = spec.graph
        return {
            "kind": "fixed",
            "node_count": g.node_count,
            "edges_sha256": hashlib.sha256(
                np.ascontiguousarray(g.edges).tobytes()
            ).hexdigest(),
        }
    if isinstance(spec, ConfigModelSpec):
        return {
            "kind": "configuration",
            "node_count": spec.node_count,
            "alpha": spec.alpha,
            "k_min": spec.k_min,
            "k_max": spec.k_max,
        }
    if isinstance(spec, PlantedPartitionSpec):
        return {
            "kind": "planted_partition",
            "node_count": spec.node_count,
            "block_fractions": list(spec.block_fractions),
            "omega_in": spec.omega_in,
            "omega_out": spec.omega_out,
            "target_mean_degree": spec.target_mean_degree,
        }
    if isinstance(spec, DegreeCorrectedSpec):
        return {
            "kind": "degree_corrected",
            "partition": _spec_payload(spec.partition),
            "alpha": spec.alpha,
            "k_min": spec.k_min,
            "k_max": spec.k_max,
        }
    raise TypeError(type(spec).__name__)


def config_payload(cfg: ExperimentConfig) -> dict:
    """JSON-serializable view of the full configuration."""
    return {
        "generator": _spec_payload(cfg.generator),
        "mode": cfg.mode,
        "realizations": cfg.realizations,
        "seed_pairs": cfg.seed_pairs,
        "master_seed": cfg.master_seed,
        "max_iter": cfg.max_iter,
        "include_cycles": cfg.include_cycles,
        "stream_offset": cfg.stream_offset,
    }


def config_digest(cfg: ExperimentConfig) -> str:
    """Stable hex digest of the configuration (provenance key)."""
    canon = json.dumps(config_payload(cfg), sort_keys=True)
    return hashlib.sha256(canon.encode()).hexdigest()


def _pair_at(index: int, n: int) -> tuple[int, int]:
    """The index-th unordered pair (i < j) in lexicographic order."""
    i = int((2 * n - 1 - np.sqrt((2.0 * n - 1) ** 2 - 8.0 * index)) // 2)
    while i * (2 * n - i - 1) // 2 > index:
        i -= 1
    while (i + 1) * (2 * n - i - 2) // 2 <= index:
        i += 1
    j = index - i * (2 * n - i - 1) // 2 + i + 1
    return i, j


def _cycle_average(states) -> PolarizationSample:
    parts = [polarization_index(s, Convergence.CYCLE) for s in states]
    k = len(parts)
    return PolarizationSample(
        r=sum(p.r for p in parts) / k,
        n_minus=sum(p.n_minus for p in parts) / k,
        n_zero=sum(p.n_zero for p in parts) / k,
        status=Convergence.CYCLE,
    )


def _run_one(cfg: ExperimentConfig, index: int):
    """Execute realization ``index``; returns per-mode outcomes.

    Outcome per mode: (sample_or_None, status_name, edge_acc_or_None) where
    edge_acc holds integer |x_i - x_j| sums for fixed-point states on fixed
    graphs.
    """
    seed = RngSeed(cfg.master_seed, cfg.stream_offset + index)
    fixed = isinstance(cfg.generator, FixedGraph)
    g = realize_graph(cfg.generator, seed.purpose(_PURPOSE_GRAPH))
    out = {}
    for mode in cfg.modes:
        if mode == "sic":
            if cfg.seed_pairs == "all":
                plus, minus = _pair_at(index, g.node_count)
            else:
                gen = seed.purpose(_PURPOSE_SIC)
                plus = int(gen.integers(g.node_count))
                minus = int(gen.integers(g.node_count - 1))
                if minus >= plus:
                    minus += 1
            x0 = init_sic(g.node_count, plus, minus)
        else:
            x0 = init_ric(g.node_count, seed.purpose(_PURPOSE_RIC))
        result = evolve_to_steady(g, x0, max_iter=cfg.max_iter)
        edge_acc = None
        if result.status is Convergence.FIXED_POINT:
            sample = polarization_index(result.final_state, result.status)
            if fixed:
                xs = result.final_state
                edge_acc = np.abs(xs[g.edges[:, 0]] - xs[g.edges[:, 1]])
        elif result.status is Convergence.CYCLE and cfg.include_cycles:
            sample = _cycle_average(result.cycle_states)
        else:
            sample = None
        out[mode] = (sample, result.status.value, edge_acc)
    return out


def _run_range(args):
    cfg, lo, hi = args
    return [_run_one(cfg, t) for t in range(lo, hi)]


@dataclass
class ModeResult:
    """Aggregated outcomes for one initial-condition mode."""

    indices: list[int] = field(default_factory=list)
    samples: list[PolarizationSample] = field(default_factory=list)
    excluded: dict[str, int] = field(default_factory=dict)
    edge_table: EdgeDifferenceTable | None = None

    def mean_r(self) -> float:
        if not self.samples:
            raise ValueError("no included samples")
        return float(np.mean([s.r for s in self.samples]))

    def stderr_r(self) -> float:
        k = len(self.samples)
        if k < 2:
            return 0.0
        return float(np.std([s.r for s in self.samples], ddof=1) / np.sqrt(k))

    @property
    def excluded_count(self) -> int:
        return sum(self.excluded.values())


@dataclass
class EnsembleRecord:
    """Everything one ensemble produced, keyed by RNG provenance."""

    master_seed: int
    config_digest: str
    realizations: int
    modes: dict[str, ModeResult]


def run_ensemble(cfg: ExperimentConfig, workers: int = 1) -> EnsembleRecord:
    """Run the configured ensemble; the result is worker-count independent."""
    runs = cfg.run_count
    if workers > 1:
        bounds = np.linspace(0, runs, workers + 1).astype(int)
        chunks = [
            (cfg, int(lo), int(hi))
            for lo, hi in zip(bounds[:-1], bounds[1:])
            if hi > lo
        ]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_run_range, chunks))
        results = [r for part in parts for r in part]
    else:
        results = [_run_one(cfg, t) for t in range(runs)]

    fixed = isinstance(cfg.generator, FixedGraph)
    record = EnsembleRecord(
        master_seed=cfg.master_seed,
        config_digest=config_digest(cfg),
        realizations=runs,
        modes={m: ModeResult() for m in cfg.modes},
    )
    edge_sums = {m: None for m in cfg.modes}
    edge_counts = {m: 0 for m in cfg.modes}
    for t, per_mode in enumerate(results):
        for mode, (sample, status_name, edge_acc) in per_mode.items():
            agg = record.modes[mode]
            if sample is not None:
                agg.indices.append(t)
                agg.samples.append(sample)
            else:
                agg.excluded[status_name] = agg.excluded.get(status_name, 0) + 1
            if edge_acc is not None:
                if edge_sums[mode] is None:
                    edge_sums[mode] = edge_acc.astype(np.int64)
                else:
                    edge_sums[mode] += edge_acc
                edge_counts[mode] += 1
    if fixed:
        g = cfg.generator.graph
        for mode in cfg.modes:
            if edge_counts[mode]:
                record.modes[mode].edge_table = EdgeDifferenceTable(
                    edges=g.edges,
                    delta=edge_sums[mode] / edge_counts[mode],
                    sample_count=edge_counts[mode],
                )
    return record


@dataclass(frozen=True)
class SweepRow:
    size: int
    mode: str
    mean_r: float
    stderr: float
    n_samples: int
    n_excluded: int


def size_sweep(
    cfg: ExperimentConfig, sizes: Sequence[int], workers: int = 1
) -> list[SweepRow]:
    """One ensemble per size; sizes must be ascending and non-empty."""
    if not len(sizes):
        raise ValueError("sizes must be non-empty")
    if list(sizes) != sorted(set(sizes)):
        raise ValueError("sizes must be strictly ascending")
    rows = []
    for k, size in enumerate(sizes):
        cell = replace(
            cfg,
            generator=resize_generator(cfg.generator, int(size)),
            stream_offset=cfg.stream_offset + k * cfg.realizations,
        )
        record = run_ensemble(cell, workers=workers)
        for mode in cell.modes:
            agg = record.modes[mode]
            rows.append(
                SweepRow(
                    size=int(size),
                    mode=mode,
                    mean_r=agg.mean_r(),
                    stderr=agg.stderr_r(),
                    n_samples=len(agg.samples),
                    n_excluded=agg.excluded_count,
                )
            )
    return rows


@dataclass(frozen=True)
class HeatmapCell:
    alpha: float
    omega_out: float
    mean_r: float
    stderr: float
    n_excluded: int


DEFAULT_HEATMAP_ALPHAS = (2.0, 2.375, 2.75, 3.125, 3.5)
DEFAULT_HEATMAP_OMEGA_OUTS = (0.01, 0.05, 0.1, 0.2, 0.3)


def heatmap(
    alphas: Sequence[float],
    omega_outs: Sequence[float],
    cfg: ExperimentConfig,
    workers: int = 1,
) -> list[HeatmapCell]:
    """Mean polarization grid for the degree-corrected planted partition.

    Every cell runs a seed-pair ensemble (mode forced to SIC) with the
    template's partition at that cell's (alpha, omega_out).  Cells are
    row-major in (alpha, omega_out) order and use disjoint stream offsets.
    """
    if not len(alphas) or not len(omega_outs):
        raise ValueError("grids must be non-empty")
    if not isinstance(cfg.generator, DegreeCorrectedSpec):
        raise ValueError("heatmap requires a DegreeCorrectedSpec generator")
    cells = []
    for a_idx, alpha in enumerate(alphas):
        for w_idx, omega_out in enumerate(omega_outs):
            linear = a_idx * len(omega_outs) + w_idx
            gen = replace(
                cfg.generator,
                alpha=float(alpha),
                partition=replace(
                    cfg.generator.partition, omega_out=float(omega_out)
                ),
            )
            cell_cfg = replace(
                cfg,
                generator=gen,
                mode="sic",
                stream_offset=cfg.stream_offset + linear * cfg.realizations,
            )
            record = run_ensemble(cell_cfg, workers=workers)
            agg = record.modes["sic"]
            cells.append(
                HeatmapCell(
                    alpha=float(alpha),
                    omega_out=float(omega_out),
                    mean_r=agg.mean_r(),
                    stderr=agg.stderr_r(),
                    n_excluded=agg.excluded_count,
                )
            )
    return cells


def all_pairs_sic(
    g: Graph, max_iter: int = 1000, workers: int = 1
) -> tuple[list[PolarizationSample], EdgeDifferenceTable]:
    """One seed run per unordered node pair (one orientation each).

    Flipping the orientation only flips the sign of the whole trajectory,
    which leaves both the polarization index and the per-edge differences
    unchanged, so a single orientation per pair suffices.
    """
    cfg = ExperimentConfig(
        generator=FixedGraph(g),
        mode="sic",
        seed_pairs="all",
        master_seed=0,
        max_iter=max_iter,
    )
    record = run_ensemble(cfg, workers=workers)
    agg = record.modes["sic"]
    if agg.edge_table is None:
        raise RuntimeError("no fixed-point states: edge table undefined")
    return agg.samples, agg.edge_table


@dataclass(frozen=True)
class SplitResult:
    threshold: float
    removed_edges: np.ndarray
    components: list[np.ndarray]


def split_prediction(
    g: Graph, table: EdgeDifferenceTable, quantile: float
) -> SplitResult:
    """Remove edges whose difference exceeds the quantile threshold.

    Strictly-above removal gives deterministic tie behavior: if every edge
    carries the same difference, nothing is removed.
    """
    if not 0.0 < quantile < 1.0:
        raise ValueError("quantile must lie in (0, 1)")
    if len(table.delta) != g.edge_count:
        raise ValueError("table does not match graph")
    threshold = float(np.quantile(table.delta, quantile))
    mask = table.delta > threshold
    victims = [tuple(e) for e in table.edges[mask].tolist()]
    pruned = remove_edges(g, victims)
    return SplitResult(
        threshold=threshold,
        removed_edges=table.edges[mask],
        components=connected_components(pruned),
    )


def write_samples_csv(stream: IO[str], record: EnsembleRecord):
    """CSV export: ``realization,mode,r,n_minus,n_zero,status`` rows."""
    stream.write("realization,mode,r,n_minus,n_zero,status\n")
    for mode in record.modes:
        agg = record.modes[mode]
        for t, s in zip(agg.indices, agg.samples):
            stream.write(
                f"{t},{mode},{s.r!r},{s.n_minus!r},{s.n_zero!r},{s.status.value}\n"
            )


def write_sweep_csv(stream: IO[str], rows: Sequence[SweepRow]):
    stream.write("size,mode,mean_r,stderr,n_samples,n_excluded\n")
    for row in rows:
        stream.write(
            f"{row.size},{row.mode},{row.mean_r!r},{row.stderr!r},"
            f"{row.n_samples},{row.n_excluded}\n"
        )


def write_heatmap_csv(stream: IO[str], cells: Sequence[HeatmapCell]):
    stream.write("alpha,omega_out,mean_r,stderr,n_excluded\n")
    for c in cells:
        stream.write(
            f"{c.alpha!r},{c.omega_out!r},{c.mean_r!r},{c.stderr!r},"
            f"{c.n_excluded}\n"
        )
