"""Polarization index, histogram binning, per-edge differences, correlation.

The polarization index of a state is

    r = 1 - 4 * (n_minus - 0.5)**2

where ``n_minus`` is the fraction of nodes in state -1 (zeros count in the
denominator).  Consensus gives r = 0; an even split gives r = 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import IO, Iterable

import numpy as np

from .dynamics import Convergence
from .graph import Graph


@dataclass(frozen=True)
class PolarizationSample:
    r: float
    n_minus: float
    n_zero: float
    status: Convergence = Convergence.FIXED_POINT


def polarization_index(
    x: np.ndarray, status: Convergence = Convergence.FIXED_POINT
) -> PolarizationSample:
    """Polarization of one state; ``status`` tags the producing run."""
    arr = np.asarray(x)
    n = len(arr)
    if n == 0:
        raise ValueError("empty state")
    n_minus = float(np.count_nonzero(arr == -1)) / n
    n_zero = float(np.count_nonzero(arr == 0)) / n
    return PolarizationSample(
        r=1.0 - 4.0 * (n_minus - 0.5) ** 2,
        n_minus=n_minus,
        n_zero=n_zero,
        status=status,
    )


def fd_bin_count(samples) -> int:
    """Freedman-Diaconis bin count: width h = 2*IQR*n^(-1/3).

    Quartiles use the linear-interpolation convention.  Degenerate data
    (zero IQR or zero range) gets a single bin.
    """
    data = np.asarray(samples, dtype=np.float64)
    if data.ndim != 1 or len(data) < 2:
        raise ValueError("need at least 2 samples")
    q1, q3 = np.quantile(data, [0.25, 0.75])
    iqr = q3 - q1
    span = float(data.max() - data.min())
    if iqr == 0.0 or span == 0.0:
        return 1
    h = 2.0 * iqr * len(data) ** (-1.0 / 3.0)
    return math.ceil(span / h)


def fd_histogram(samples) -> tuple[np.ndarray, np.ndarray]:
    """Histogram counts and bin edges with the Freedman-Diaconis bin count."""
    data = np.asarray(samples, dtype=np.float64)
    return np.histogram(data, bins=fd_bin_count(data))


def write_histogram_csv(stream: IO[str], samples):
    """CSV export: ``bin_left,bin_right,count`` rows."""
    counts, edges = fd_histogram(samples)
    stream.write("bin_left,bin_right,count\n")
    for k, c in enumerate(counts.tolist()):
        stream.write(f"{edges[k]!r},{edges[k + 1]!r},{c}\n")


@dataclass(frozen=True)
class EdgeDifferenceTable:
    """Mean absolute opinion difference per edge over a set of states.

    ``edges`` follows the source graph's canonical edge order; every delta
    lies in [0, 2] and is averaged over the same ``sample_count`` states.
    """

    edges: np.ndarray
    delta: np.ndarray
    sample_count: int

    def __post_init__(self):
        if len(self.edges) != len(self.delta):
            raise ValueError("edges/delta length mismatch")
        if self.sample_count < 1:
            raise ValueError("need at least one contributing state")
        if len(self.delta) and (
            self.delta.min() < 0.0 or self.delta.max() > 2.0
        ):
            raise ValueError("delta out of range [0, 2]")


def edge_differences(g: Graph, states: Iterable[np.ndarray]) -> EdgeDifferenceTable:
    """Average |x_i - x_j| across every edge over a stream of states."""
    acc = np.zeros(g.edge_count, dtype=np.int64)
    count = 0
    left, right = g.edges[:, 0], g.edges[:, 1]
    for x in states:
        arr = np.asarray(x, dtype=np.int64)
        if len(arr) != g.node_count:
            raise ValueError("state length must equal node count")
        acc += np.abs(arr[left] - arr[right])
        count += 1
    if count == 0:
        raise ValueError("empty state stream")
    return EdgeDifferenceTable(
        edges=g.edges, delta=acc / count, sample_count=count
    )


def write_edge_table_csv(stream: IO[str], table: EdgeDifferenceTable):
    """CSV export: ``i,j,delta,samples`` rows in canonical edge order."""
    stream.write("i,j,delta,samples\n")
    for (i, j), d in zip(table.edges.tolist(), table.delta.tolist()):
        stream.write(f"{i},{j},{d!r},{table.sample_count}\n")


def pearson_correlation(xs, ys) -> float:
    """Standard Pearson coefficient; rejects degenerate (constant) inputs."""
    x = np.asarray(xs, dtype=np.float64)
    y = np.asarray(ys, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("inputs must be 1-d and of equal length")
    if len(x) < 2:
        raise ValueError("need at least 2 points")
    dx = x - x.mean()
    dy = y - y.mean()
    sx = float(np.sqrt((dx * dx).sum()))
    sy = float(np.sqrt((dy * dy).sum()))
    if sx == 0.0 or sy == 0.0:
        raise ValueError("zero variance: correlation undefined")
    return float((dx * dy).sum() / (sx * sy))
