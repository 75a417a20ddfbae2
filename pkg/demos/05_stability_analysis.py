"""Which steady states survive a nudge?

The sign update is discontinuous, so stability is assessed on a smooth
surrogate map whose steepness parameter B recovers the discrete rule as it
grows (B=100 here).  Fixed points made of firm opinions only (+1/-1) relax
onto a nearby smooth fixed point whose Jacobian has spectral radius far
below 1: stable.  Any fixed point holding a neutral node has a Jacobian
diagonal entry of 2B/pi there, so its spectral radius is huge: a small
perturbation tips the undecided.
"""

import numpy as np

from seedpol import (
    classify_stability,
    evolve_to_steady,
    init_ric,
    init_sic,
    RngSeed,
)
from seedpol.datasets import karate_graph
from seedpol.graph import from_pairs

print(f"reference: 2B/pi = {2 * 100 / np.pi:.2f}\n")
print(f"{'state':<34} {'zeros':>5} {'rho':>12} {'residual':>10}  verdict")

g = karate_graph()
cases = []

res = evolve_to_steady(g, np.ones(34, dtype=np.int64))
cases.append(("karate: all +1 consensus", res))

res = evolve_to_steady(g, init_sic(34, 0, 33))
cases.append(("karate: leaders' seed pair", res))

res = evolve_to_steady(g, init_ric(34, RngSeed(8)))
cases.append(("karate: one random start", res))

path = from_pairs(3, [(0, 1), (1, 2)])
res = evolve_to_steady(path, np.array([1, 0, -1]))
cases.append(("3-path: +1, undecided, -1", res))

res = evolve_to_steady(path, np.zeros(3, dtype=np.int64))
cases.append(("3-path: everyone undecided", res))

for label, steady in cases:
    report = classify_stability(g if label.startswith("karate") else path, steady)
    print(
        f"{label:<34} {report.zeros_in_state:>5} "
        f"{report.spectral_radius:>12.4g} {report.residual:>10.2e}  "
        f"{report.verdict.value}"
    )
