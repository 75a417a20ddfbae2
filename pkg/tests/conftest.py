"""Shared helpers: small random graphs, relabeling, acceptance reporting."""

from __future__ import annotations

import numpy as np

from seedpol import Graph, PlantedPartitionSpec, RngSeed, from_pairs
from seedpol.generators import planted_partition_poisson

# one line per acceptance criterion, printed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def record_acceptance(label: str, passed: bool, detail: str):
    status = "PASS" if passed else "FAIL"
    ACCEPTANCE_LINES.append(f"criterion {label}: {status}  {detail}")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(line)


def random_graph(n: int, mean_degree: float, seed: int) -> Graph:
    """Erdos-Renyi-like test graph (single-block planted partition)."""
    mean_degree = min(mean_degree, n - 1.5) if n > 2 else 0.5
    spec = PlantedPartitionSpec(
        node_count=n,
        block_fractions=(1.0,),
        omega_in=1.0,
        omega_out=0.0,
        target_mean_degree=mean_degree,
    )
    return planted_partition_poisson(spec, RngSeed(seed))


def permute_graph(g: Graph, perm: np.ndarray) -> Graph:
    """Relabel nodes: new id of node i is perm[i]."""
    edges = np.stack([perm[g.edges[:, 0]], perm[g.edges[:, 1]]], axis=1)
    return from_pairs(g.node_count, edges)


def permute_state(x: np.ndarray, perm: np.ndarray) -> np.ndarray:
    out = np.empty_like(x)
    out[perm] = x
    return out
