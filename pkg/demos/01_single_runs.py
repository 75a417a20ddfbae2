"""Single trajectories of the ternary majority rule.

Walks through the update rule on hand-sized graphs, then replays the two
canonical outcomes on the karate club network: a seed pair that polarizes
the club along its historical fault line, and one that ends in consensus.
"""

from seedpol import evolve_to_steady, init_sic, polarization_index, step
from seedpol.datasets import karate_graph
from seedpol.graph import from_pairs

# --- the update rule on a path: +1 . . . -1 ------------------------------
print("== 5-node path, seeds at the ends ==")
path = from_pairs(5, [(k, k + 1) for k in range(4)])
x = init_sic(5, 0, 4)
print("t=0:", x)
for t in range(1, 4):
    x = step(path, x)
    print(f"t={t}:", x)
# the opposing fronts meet in the middle and leave a neutral buffer node

# --- two seeds that cancel ------------------------------------------------
print("\n== 2 nodes, 1 edge: opposing seeds annihilate ==")
pair = from_pairs(2, [(0, 1)])
res = evolve_to_steady(pair, init_sic(2, 0, 1))
print("final:", res.final_state, "status:", res.status.value)

# --- karate club: outcome depends on where the seeds sit ------------------
print("\n== karate club ==")
karate = karate_graph()
for plus, minus, label in [
    (0, 33, "the two faction leaders"),
    (4, 10, "two members of the same faction"),
]:
    res = evolve_to_steady(karate, init_sic(34, plus, minus))
    sample = polarization_index(res.final_state, res.status)
    print(
        f"seeds +{plus}/-{minus} ({label}): r={sample.r:.3f} "
        f"n_minus={sample.n_minus:.3f} after {res.iterations} steps"
    )
