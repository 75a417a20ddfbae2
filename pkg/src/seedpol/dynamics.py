"""Ternary majority-rule dynamics.

States are integer vectors with entries in {-1, 0, +1}.  One synchronous
update sends every node to the sign of its own value plus the sum over its
neighbors, with sign(0) = 0:

    x_i  <-  sgn( x_i + sum_j A_ij x_j )

Ties therefore produce the neutral state; there is no randomized
tie-breaking, and the whole evolution is deterministic given the initial
condition.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .graph import Graph
from .rng import RngSeed, as_generator


class Convergence(Enum):
    FIXED_POINT = "fixed_point"
    CYCLE = "cycle"
    MAX_ITERATIONS = "max_iterations"


@dataclass(frozen=True)
class SteadyStateResult:
    """Terminal state of one evolution.

    ``iterations`` counts synchronous updates applied from the initial
    condition up to the returned state.  For ``CYCLE`` results, ``period``
    is the cycle length (>= 2) and ``cycle_states`` lists the states along
    one full cycle starting at ``final_state``.
    """

    final_state: np.ndarray
    status: Convergence
    iterations: int
    period: int = 0
    cycle_states: tuple[np.ndarray, ...] | None = None


def as_state(x, n: int | None = None) -> np.ndarray:
    """Validate and coerce a ternary state vector to int64."""
    arr = np.asarray(x, dtype=np.int64)
    if arr.ndim != 1:
        raise ValueError("state must be 1-dimensional")
    if n is not None and len(arr) != n:
        raise ValueError(f"state length {len(arr)} != node count {n}")
    if not np.isin(arr, (-1, 0, 1)).all():
        raise ValueError("state entries must lie in {-1, 0, +1}")
    return arr


def init_sic(n: int, seed_plus: int, seed_minus: int) -> np.ndarray:
    """Seed initial condition: +1 at one node, -1 at another, 0 elsewhere."""
    if not (0 <= seed_plus < n and 0 <= seed_minus < n):
        raise ValueError("seed nodes out of range")
    if seed_plus == seed_minus:
        raise ValueError("seed nodes must be distinct")
    x = np.zeros(n, dtype=np.int64)
    x[seed_plus] = 1
    x[seed_minus] = -1
    return x


def init_ric(n: int, rng: RngSeed | np.random.Generator | int) -> np.ndarray:
    """Random initial condition: each node independently +1 or -1."""
    if n < 1:
        raise ValueError("n must be positive")
    gen = as_generator(rng)
    return gen.integers(0, 2, size=n, dtype=np.int64) * 2 - 1


def step(g: Graph, x: np.ndarray) -> np.ndarray:
    """One synchronous majority update (all reads from the input vector)."""
    x = np.asarray(x, dtype=np.int64)
    if len(x) != g.node_count:
        raise ValueError("state length must equal node count")
    return np.sign(x + g.adjacency @ x)


def evolve_to_steady(
    g: Graph,
    x0: np.ndarray,
    max_iter: int = 1000,
    cycle_depth: int = 4,
) -> SteadyStateResult:
    """Iterate the majority update until a fixed point or short cycle.

    Fixed points are detected as two consecutive equal states; cycles by
    comparison against a bounded history window (periods 2..cycle_depth;
    synchronous sign dynamics on undirected graphs can oscillate with
    period 2).  Returns ``MAX_ITERATIONS`` with the last state if neither
    occurs within ``max_iter`` updates.
    """
    if max_iter < 1:
        raise ValueError("max_iter must be at least 1")
    current = as_state(x0, g.node_count)
    recent: list[np.ndarray] = [current]
    for t in range(1, max_iter + 1):
        nxt = step(g, current)
        if np.array_equal(nxt, current):
            return SteadyStateResult(current, Convergence.FIXED_POINT, t - 1)
        for period in range(2, cycle_depth + 1):
            if len(recent) >= period and np.array_equal(nxt, recent[-period]):
                cycle = tuple(recent[-period:])
                return SteadyStateResult(
                    nxt,
                    Convergence.CYCLE,
                    t,
                    period=period,
                    cycle_states=cycle,
                )
        recent.append(nxt)
        if len(recent) > cycle_depth:
            recent.pop(0)
        current = nxt
    return SteadyStateResult(current, Convergence.MAX_ITERATIONS, max_iter)
