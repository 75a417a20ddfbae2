"""Ensemble orchestration, bookkeeping, all-pairs analysis, splits."""

import io

import numpy as np
import pytest

from seedpol import (
    ConfigModelSpec,
    Convergence,
    ExperimentConfig,
    FixedGraph,
    PlantedPartitionSpec,
    all_pairs_sic,
    config_digest,
    edge_differences,
    evolve_to_steady,
    from_pairs,
    init_sic,
    run_ensemble,
    size_sweep,
    split_prediction,
)
from seedpol.datasets import karate_graph
from seedpol.experiments import (
    _pair_at,
    write_samples_csv,
)

from conftest import random_graph


def two_node_graph():
    return from_pairs(2, [(0, 1)])


# ------------------------------------------------------------ run_ensemble


def test_two_node_sic_ensemble_records_the_annihilated_state():
    cfg = ExperimentConfig(
        generator=FixedGraph(two_node_graph()),
        mode="sic",
        realizations=1,
        master_seed=1,
    )
    record = run_ensemble(cfg)
    agg = record.modes["sic"]
    assert len(agg.samples) == 1
    sample = agg.samples[0]
    assert sample.r == 0.0
    assert sample.n_zero == 1.0
    assert sample.status is Convergence.FIXED_POINT


def test_records_are_deterministic_and_digest_keyed():
    cfg = ExperimentConfig(
        generator=ConfigModelSpec(node_count=80, alpha=2.8),
        mode="both",
        realizations=20,
        master_seed=99,
    )
    a, b = run_ensemble(cfg), run_ensemble(cfg)
    buf_a, buf_b = io.StringIO(), io.StringIO()
    write_samples_csv(buf_a, a)
    write_samples_csv(buf_b, b)
    assert buf_a.getvalue() == buf_b.getvalue()
    assert a.config_digest == b.config_digest == config_digest(cfg)


def test_worker_count_does_not_change_results():
    cfg = ExperimentConfig(
        generator=ConfigModelSpec(node_count=60, alpha=3.0),
        mode="both",
        realizations=12,
        master_seed=5,
    )
    serial = io.StringIO()
    pooled = io.StringIO()
    write_samples_csv(serial, run_ensemble(cfg, workers=1))
    write_samples_csv(pooled, run_ensemble(cfg, workers=3))
    assert serial.getvalue() == pooled.getvalue()


def test_sample_plus_excluded_counts_equal_realizations():
    cfg = ExperimentConfig(
        generator=ConfigModelSpec(node_count=100, alpha=2.2),
        mode="both",
        realizations=60,
        master_seed=7,
    )
    record = run_ensemble(cfg)
    for agg in record.modes.values():
        assert len(agg.samples) + agg.excluded_count == record.realizations


def test_include_cycles_folds_cycles_into_samples():
    cfg = ExperimentConfig(
        generator=ConfigModelSpec(node_count=100, alpha=2.2),
        mode="ric",
        realizations=80,
        master_seed=13,
    )
    base = run_ensemble(cfg)
    cycles = base.modes["ric"].excluded.get("cycle", 0)
    if cycles == 0:
        pytest.skip("no cycles in this seeded ensemble")
    folded = run_ensemble(
        ExperimentConfig(
            generator=cfg.generator,
            mode="ric",
            realizations=cfg.realizations,
            master_seed=cfg.master_seed,
            include_cycles=True,
        )
    )
    agg = folded.modes["ric"]
    assert len(agg.samples) == len(base.modes["ric"].samples) + cycles
    assert agg.excluded.get("cycle", 0) == 0
    assert any(s.status is Convergence.CYCLE for s in agg.samples)


def test_edge_tables_only_for_fixed_graphs():
    synthetic = run_ensemble(
        ExperimentConfig(
            generator=ConfigModelSpec(node_count=40, alpha=3.0),
            mode="sic",
            realizations=5,
            master_seed=3,
        )
    )
    assert synthetic.modes["sic"].edge_table is None
    fixed = run_ensemble(
        ExperimentConfig(
            generator=FixedGraph(random_graph(20, 3.0, 1)),
            mode="sic",
            realizations=5,
            master_seed=3,
        )
    )
    table = fixed.modes["sic"].edge_table
    assert table is not None
    assert table.sample_count == len(fixed.modes["sic"].samples)


# ------------------------------------------------------------- seed pairs


def test_pair_unranking_is_lexicographic():
    n = 7
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    assert [_pair_at(t, n) for t in range(len(pairs))] == pairs


def test_pair_unranking_round_trips_at_guard_scale():
    n = 2000
    total = n * (n - 1) // 2
    probes = list(range(5)) + [total - 1, total // 2, total // 3]
    for t in probes:
        i, j = _pair_at(t, n)
        assert 0 <= i < j < n
        rank = i * (2 * n - i - 1) // 2 + (j - i - 1)
        assert rank == t


def test_all_pairs_guard():
    with pytest.raises(ValueError, match="guard"):
        ExperimentConfig(
            generator=FixedGraph(random_graph(2001, 1.0, 0)),
            mode="sic",
            seed_pairs="all",
        )
    with pytest.raises(ValueError, match="fixed graph"):
        ExperimentConfig(
            generator=ConfigModelSpec(node_count=10, alpha=3.0),
            seed_pairs="all",
        )


def test_all_pairs_on_karate_runs_561_pairs():
    g = karate_graph()
    cfg = ExperimentConfig(
        generator=FixedGraph(g), mode="sic", seed_pairs="all", master_seed=0
    )
    record = run_ensemble(cfg, workers=2)
    assert record.realizations == 34 * 33 // 2 == 561
    agg = record.modes["sic"]
    assert len(agg.samples) + agg.excluded_count == 561


def test_all_pairs_on_two_nodes_is_single_run():
    samples, table = all_pairs_sic(two_node_graph())
    assert len(samples) == 1
    assert table.sample_count == 1


def test_orientation_flip_gives_identical_r_and_delta():
    g = random_graph(12, 3.0, 21)
    for i, j in [(0, 5), (2, 9), (1, 11)]:
        fwd = evolve_to_steady(g, init_sic(g.node_count, i, j))
        rev = evolve_to_steady(g, init_sic(g.node_count, j, i))
        assert fwd.status == rev.status
        if fwd.status is not Convergence.FIXED_POINT:
            continue
        assert np.array_equal(fwd.final_state, -rev.final_state)
        t_fwd = edge_differences(g, [fwd.final_state])
        t_rev = edge_differences(g, [rev.final_state])
        assert np.array_equal(t_fwd.delta, t_rev.delta)


# -------------------------------------------------------------- size sweep


def test_size_sweep_structure():
    cfg = ExperimentConfig(
        generator=ConfigModelSpec(node_count=50, alpha=3.0),
        mode="both",
        realizations=8,
        master_seed=2,
    )
    rows = size_sweep(cfg, [50, 80])
    assert [(r.size, r.mode) for r in rows] == [
        (50, "sic"),
        (50, "ric"),
        (80, "sic"),
        (80, "ric"),
    ]
    for row in rows:
        assert row.n_samples + row.n_excluded == 8


def test_sbm_sweep_sic_at_most_ric_at_largest_size():
    spec = PlantedPartitionSpec(250, (0.7, 0.15, 0.15), 0.7, 0.01, 6.0)
    cfg = ExperimentConfig(
        generator=spec, mode="both", realizations=100, master_seed=31
    )
    rows = size_sweep(cfg, [250, 500], workers=2)
    at_500 = {r.mode: r.mean_r for r in rows if r.size == 500}
    assert at_500["sic"] <= at_500["ric"]


def test_heatmap_single_cell_mean_in_unit_interval():
    import warnings

    from seedpol import DegreeCorrectedSpec, heatmap

    part = PlantedPartitionSpec(60, (0.7, 0.15, 0.15), 0.7, 0.01, 5.0)
    cfg = ExperimentConfig(
        generator=DegreeCorrectedSpec(partition=part, alpha=2.5),
        mode="sic",
        realizations=20,
        master_seed=32,
    )
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        cells = heatmap([2.5], [0.05], cfg)
    assert len(cells) == 1
    assert 0.0 <= cells[0].mean_r <= 1.0


def test_size_sweep_rejects_unsorted_sizes():
    cfg = ExperimentConfig(
        generator=ConfigModelSpec(node_count=50, alpha=3.0),
        realizations=2,
        master_seed=2,
    )
    with pytest.raises(ValueError):
        size_sweep(cfg, [80, 50])
    with pytest.raises(ValueError):
        size_sweep(cfg, [])


# ------------------------------------------------------------------ splits


def test_split_with_equal_deltas_removes_nothing():
    g = from_pairs(3, [(0, 1), (1, 2), (0, 2)])
    table = edge_differences(g, [np.ones(3, dtype=np.int64)])
    result = split_prediction(g, table, 0.5)
    assert len(result.removed_edges) == 0
    assert len(result.components) == 1


def test_split_removes_strictly_above_threshold():
    g = from_pairs(4, [(0, 1), (1, 2), (2, 3)])
    # state (+1, +1, -1, -1): only the middle edge differs
    table = edge_differences(g, [np.array([1, 1, -1, -1])])
    result = split_prediction(g, table, 0.5)
    assert result.removed_edges.tolist() == [[1, 2]]
    assert [c.tolist() for c in result.components] == [[0, 1], [2, 3]]


def test_split_quantile_validation():
    g = from_pairs(2, [(0, 1)])
    table = edge_differences(g, [np.array([1, -1])])
    with pytest.raises(ValueError):
        split_prediction(g, table, 1.0)


def test_karate_splits_for_some_quantile():
    g = karate_graph()
    _, table = all_pairs_sic(g)
    counts = {}
    for q in (0.75, 0.8, 0.85, 0.9, 0.95):
        counts[q] = len(split_prediction(g, table, q).components)
    # pipeline oracle: the club separates once the top ~20% of edges go
    assert max(counts.values()) >= 2

    result = split_prediction(g, table, 0.8)
    sizes = sorted((len(c) for c in result.components), reverse=True)
    assert len(sizes) >= 2 and sizes[1] >= 5  # two substantial factions


def test_karate_top_edges_straddle_the_known_factions():
    # the historical club split: node 0's faction vs node 33's faction
    hi_faction = {0, 1, 2, 3, 4, 5, 6, 7, 8, 10, 11, 12, 13, 16, 17, 19, 21}
    g = karate_graph()
    _, table = all_pairs_sic(g)
    order = np.argsort(-table.delta)
    top = table.edges[order[:8]]
    crossing = sum(
        1 for i, j in top.tolist() if (i in hi_faction) != (j in hi_faction)
    )
    assert crossing >= 6
