"""Linear stability of steady states under a smoothed majority map.

The discontinuous sign update is replaced by the smooth surrogate

    x_i  <-  (2/pi) * arctan( B * (x_i + sum_j A_ij x_j) )

which approaches the discrete rule as B grows (B = 100 reproduces the
discrete steady states essentially exactly).  Around a fixed point x* of the
smoothed map the Jacobian is

    J_ij = (2B/pi) * (A_ij + delta_ij) / (1 + B^2 * (x_i* + sum_k A_ik x_k*)^2)

i.e. J = D (A + I) with a non-negative diagonal D; the fixed point is stable
when the spectral radius of J is below 1.  This rational form of D is exact
at any evaluation point.  The equivalent form D_ii = (2B/pi) cos^2(pi x_i*/2)
holds only where the fixed-point balance equation

    x_i* + sum_j A_ij x_j* = tan(pi x_i*/2) / B

is satisfied; the test suite checks the two forms against each other at
converged fixed points rather than assuming the identity.

Since D >= 0 and A is symmetric, J shares its spectrum with the symmetric
matrix D^(1/2) (A + I) D^(1/2), so the spectral radius is computed by block
power iteration on that similarity transform (real spectrum, convergence
unharmed by clustered leading eigenvalues).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy import sparse

from .dynamics import Convergence, SteadyStateResult
from .graph import Graph

DEFAULT_B = 100.0
DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 100_000


class RelaxationError(RuntimeError):
    """Fixed-point relaxation failed to converge; carries the last residual."""

    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (last residual {residual:.3e})")
        self.residual = residual


class PowerIterationError(RuntimeError):
    """Spectral-radius power iteration exceeded its iteration cap."""


class Verdict(Enum):
    STABLE = "stable"
    UNSTABLE = "unstable"


@dataclass(frozen=True)
class SmoothedState:
    """Real-valued node state of the smoothed map, with its smoothing B.

    Values live in the closed interval [-1, 1]; anything produced by a
    smoothed update is strictly inside (the range of (2/pi) arctan), the
    endpoints occur only for raw embeddings of discrete states.
    """

    values: np.ndarray
    B: float

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim != 1:
            raise ValueError("values must be 1-dimensional")
        if len(v) and np.abs(v).max() > 1.0:
            raise ValueError("smoothed values must lie in [-1, 1]")
        if not self.B > 0:
            raise ValueError("B must be positive")
        v.flags.writeable = False
        object.__setattr__(self, "values", v)


@dataclass(frozen=True)
class StabilityReport:
    fixed_point: SmoothedState
    spectral_radius: float
    residual: float
    verdict: Verdict
    zeros_in_state: int = 0


def _field(g: Graph, values: np.ndarray) -> np.ndarray:
    """Local opinion field x_i + sum_j A_ij x_j."""
    return values + g.adjacency @ values


def smoothed_step(g: Graph, state: SmoothedState) -> SmoothedState:
    """One synchronous update of the smoothed map."""
    if len(state.values) != g.node_count:
        raise ValueError("state length must equal node count")
    out = (2.0 / np.pi) * np.arctan(state.B * _field(g, state.values))
    return SmoothedState(out, state.B)


def fixed_point_residual(g: Graph, state: SmoothedState) -> float:
    """Max-norm defect of the fixed-point balance equation.

    Zero exactly at fixed points of the smoothed map; only meaningful for
    states strictly inside (-1, 1).
    """
    x = state.values
    defect = _field(g, x) - np.tan(np.pi * x / 2.0) / state.B
    return float(np.abs(defect).max()) if len(x) else 0.0


def relax_to_fixed_point(
    g: Graph,
    start: np.ndarray,
    B: float = DEFAULT_B,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> SmoothedState:
    """Iterate the smoothed map from the real embedding of a discrete state.

    Stops when the successive max-norm change falls below ``tol`` and
    returns the limit.  Raises :class:`RelaxationError` (carrying the last
    balance-equation residual) if ``max_iter`` updates do not converge.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    state = SmoothedState(np.asarray(start, dtype=np.float64), B)
    for _ in range(max_iter):
        nxt = smoothed_step(g, state)
        change = float(np.abs(nxt.values - state.values).max()) if len(nxt.values) else 0.0
        state = nxt
        if change < tol:
            return state
    raise RelaxationError(
        f"no convergence within {max_iter} iterations",
        fixed_point_residual(g, state),
    )


def _jacobian_diagonal(g: Graph, state: SmoothedState) -> np.ndarray:
    a = _field(g, state.values)
    return (2.0 * state.B / np.pi) / (1.0 + (state.B * a) ** 2)


def jacobian(g: Graph, x_star: SmoothedState) -> sparse.csr_matrix:
    """Jacobian J = D (A + I) of the smoothed map at ``x_star`` (sparse).

    Uses the rational diagonal, exact at any evaluation point.
    """
    if len(x_star.values) != g.node_count:
        raise ValueError("state length must equal node count")
    d = _jacobian_diagonal(g, x_star)
    a_plus_i = (g.adjacency + sparse.identity(g.node_count, dtype=np.int64)).tocsr()
    return sparse.diags(d).dot(a_plus_i).tocsr()


def _power_spectral_radius(
    d: np.ndarray,
    g: Graph,
    tol: float,
    max_iter: int,
) -> float:
    """Spectral radius of D(A+I) by block power iteration on the symmetric
    similarity transform S = D^(1/2)(A+I)D^(1/2).

    A small orthonormal block is iterated under S with Rayleigh-Ritz
    estimates of the dominant |eigenvalue|; the block makes convergence
    immune to near-degenerate leading eigenvalues (common at states with
    many zero entries, where several diagonal entries coincide).  The stop
    rule extrapolates the remaining error from the geometric decay of
    successive estimates.  Returns 0 for D identically zero.
    """
    if not len(d) or float(d.max()) == 0.0:
        return 0.0
    n = len(d)
    root = np.sqrt(d)
    adj = g.adjacency

    def apply_sym(block: np.ndarray) -> np.ndarray:
        w = root[:, None] * block
        return root[:, None] * (adj @ w + w)

    width = min(8, n)
    # fixed-seed start: deterministic, and almost surely not orthogonal to
    # the dominant eigenspace
    start = np.random.default_rng(0x5EED).standard_normal((n, width))
    block, _ = np.linalg.qr(start)
    theta_prev = None
    change_prev = None
    hits = 0
    for k in range(1, max_iter + 1):
        image = apply_sym(block)
        projected = block.T @ image
        theta = float(
            np.abs(np.linalg.eigvalsh(0.5 * (projected + projected.T))).max()
        )
        norm = float(np.linalg.norm(image))
        if norm == 0.0:
            return 0.0
        block, _ = np.linalg.qr(image)
        if theta_prev is not None:
            change = abs(theta - theta_prev)
            scale = max(theta, 1e-300)
            converged = change <= 1e-14 * scale
            if not converged and change_prev is not None and change_prev > 0:
                ratio = change / change_prev
                if ratio < 1.0:
                    converged = change * ratio / (1.0 - ratio) <= tol * scale
            hits = hits + 1 if converged else 0
            if hits >= 2 and k >= 4:
                return theta
            change_prev = change
        theta_prev = theta
    raise PowerIterationError(
        f"power iteration did not converge within {max_iter} iterations "
        f"(last estimate {theta_prev!r})"
    )


def spectral_radius(
    g: Graph,
    x_star: SmoothedState,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> float:
    """Largest absolute eigenvalue of the Jacobian at ``x_star``."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    return _power_spectral_radius(
        _jacobian_diagonal(g, x_star), g, tol, max_iter
    )


def classify_stability(
    g: Graph,
    steady: SteadyStateResult,
    B: float = DEFAULT_B,
    relax_tol: float = DEFAULT_TOL,
    power_tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> StabilityReport:
    """Stability verdict for a discrete fixed point.

    Zero-free fixed points are relaxed to the nearby smoothed fixed point
    first; the reported residual is the balance-equation defect there.
    Fixed points containing zeros have no nearby smoothed counterpart (a
    forward relaxation escapes them), so the Jacobian is evaluated at the
    raw embedding itself, where every zero node has an exactly zero local
    field and thus a diagonal entry of 2B/pi; the reported residual is then
    the max-norm defect of one smoothed update.  Verdict is STABLE iff the
    spectral radius is below 1.
    """
    if steady.status is not Convergence.FIXED_POINT:
        raise ValueError("can only classify FIXED_POINT results")
    x = steady.final_state
    zeros = int(np.count_nonzero(x == 0))
    if zeros:
        point = SmoothedState(np.asarray(x, dtype=np.float64), B)
        residual = float(
            np.abs(smoothed_step(g, point).values - point.values).max()
        )
    else:
        point = relax_to_fixed_point(g, x, B=B, tol=relax_tol, max_iter=max_iter)
        residual = fixed_point_residual(g, point)
    rho = spectral_radius(g, point, tol=power_tol, max_iter=max_iter)
    verdict = Verdict.STABLE if rho < 1.0 else Verdict.UNSTABLE
    return StabilityReport(
        fixed_point=point,
        spectral_radius=rho,
        residual=residual,
        verdict=verdict,
        zeros_in_state=zeros,
    )
