"""Generators: power-law degrees, configuration model, block models.

Statistical assertions run on seeded streams, so they are deterministic;
tolerances are set from the analytic standard errors with wide margins.
"""

import warnings

import numpy as np
import pytest
from scipy.optimize import minimize_scalar

from seedpol import (
    DegreeSequence,
    PlantedPartitionSpec,
    RngSeed,
    configuration_model,
    degree_corrected_planted_partition,
    planted_partition_poisson,
    sample_power_law_degrees,
)
from seedpol.generators import block_sizes


# ---------------------------------------------------------------- degrees


def test_forced_support_single_node():
    seq = sample_power_law_degrees(1, 2.5, k_min=2, k_max=2, rng=RngSeed(0))
    assert seq.degrees.tolist() == [2]


def test_degree_sum_always_even():
    for seed in range(25):
        seq = sample_power_law_degrees(101, 2.2, rng=RngSeed(seed))
        assert seq.half_edge_count % 2 == 0


def test_degrees_respect_bounds():
    seq = sample_power_law_degrees(500, 2.0, k_min=3, k_max=20, rng=RngSeed(4))
    assert seq.degrees.min() >= 3
    assert seq.degrees.max() <= 20


def test_parameter_validation():
    with pytest.raises(ValueError):
        sample_power_law_degrees(10, 2.5, k_min=5, k_max=3, rng=RngSeed(0))
    with pytest.raises(ValueError):
        sample_power_law_degrees(10, 1.0, rng=RngSeed(0))
    with pytest.raises(ValueError):
        sample_power_law_degrees(10, 0.5, rng=RngSeed(0))


def _mle_alpha(degrees: np.ndarray, k_min: int, k_max: int) -> float:
    """Independent oracle: maximum-likelihood scaling index of a bounded
    discrete power law."""
    ks = np.arange(k_min, k_max + 1, dtype=np.float64)
    log_ks = np.log(ks)
    mean_log = float(np.log(degrees).mean())

    def negative_loglik(alpha: float) -> float:
        # log Z(alpha) + alpha * mean(log k_i)
        weights = np.exp(-alpha * log_ks)
        return float(np.log(weights.sum()) + alpha * mean_log)

    res = minimize_scalar(negative_loglik, bounds=(1.2, 5.0), method="bounded")
    return float(res.x)


def test_sampled_slope_matches_mle_oracle():
    seq = sample_power_law_degrees(
        10_000, 2.5, k_min=2, k_max=9_999, rng=RngSeed(11)
    )
    # the parity fix perturbs at most one entry; harmless for the fit
    alpha_hat = _mle_alpha(seq.degrees.astype(float), 2, 9_999)
    assert abs(alpha_hat - 2.5) <= 0.2


def test_degree_sampling_deterministic():
    a = sample_power_law_degrees(200, 2.7, rng=RngSeed(9, 3))
    b = sample_power_law_degrees(200, 2.7, rng=RngSeed(9, 3))
    assert np.array_equal(a.degrees, b.degrees)


def test_degree_sequence_validation():
    with pytest.raises(ValueError):
        DegreeSequence(np.array([1, 2]))  # odd sum
    with pytest.raises(ValueError):
        DegreeSequence(np.array([0, 2]))  # non-positive


# ------------------------------------------------------- configuration model


def test_two_stubs_make_the_single_edge():
    g = configuration_model(DegreeSequence(np.array([1, 1])), RngSeed(0))
    assert g.node_count == 2
    assert g.edges.tolist() == [[0, 1]]


def _enumerate_matchings(stubs):
    """All perfect matchings of labeled half-edges (brute-force oracle)."""
    if not stubs:
        yield []
        return
    first, rest = stubs[0], stubs[1:]
    for k in range(len(rest)):
        partner = rest[k]
        remaining = rest[:k] + rest[k + 1 :]
        for tail in _enumerate_matchings(remaining):
            yield [(first, partner)] + tail


def test_all_two_two_two_matchings_enumerated():
    # oracle first: exact triangle probability for degrees [2, 2, 2] by
    # enumerating every perfect matching of the six labeled half-edges
    stubs = [0, 0, 1, 1, 2, 2]
    outcomes = []
    for matching in _enumerate_matchings(stubs):
        simple = {
            (min(u, v), max(u, v)) for u, v in matching if u != v
        }
        outcomes.append(frozenset(simple))
    assert len(outcomes) == 15  # (6-1)!! pairings
    triangle = frozenset({(0, 1), (0, 2), (1, 2)})
    exact_p = sum(1 for o in outcomes if o == triangle) / len(outcomes)
    assert exact_p == pytest.approx(8.0 / 15.0)

    # sampled frequency must match the enumerated probability
    trials = 4000
    hits = 0
    degrees = DegreeSequence(np.array([2, 2, 2]))
    for seed in range(trials):
        g = configuration_model(degrees, RngSeed(1234, seed))
        assert g.edge_count <= 3
        if g.edge_count == 3:
            hits += 1
    sigma = np.sqrt(exact_p * (1 - exact_p) / trials)
    assert abs(hits / trials - exact_p) < 4.5 * sigma


def test_erasure_loss_small_at_moderate_density():
    seq = sample_power_law_degrees(5_000, 3.0, rng=RngSeed(21))
    g = configuration_model(seq, RngSeed(21, 1))
    specified_mean = seq.half_edge_count / len(seq)
    realized_mean = 2 * g.edge_count / g.node_count
    assert abs(realized_mean - specified_mean) / specified_mean < 0.05


def test_configuration_model_requires_even_sum():
    with pytest.raises(ValueError):
        DegreeSequence(np.array([3, 2, 2]))


# ---------------------------------------------------------- planted partition


def test_block_sizes_largest_remainder():
    spec = PlantedPartitionSpec(10, (0.7, 0.15, 0.15), 0.7, 0.01, 2.0)
    assert block_sizes(spec).tolist() == [7, 2, 1]
    spec2 = PlantedPartitionSpec(100, (0.7, 0.15, 0.15), 0.7, 0.01, 6.0)
    assert block_sizes(spec2).tolist() == [70, 15, 15]


def test_zero_omega_out_keeps_blocks_apart():
    spec = PlantedPartitionSpec(60, (0.5, 0.5), 0.7, 0.0, 4.0)
    g = planted_partition_poisson(spec, RngSeed(5))
    labels = g.block_labels
    assert labels is not None
    assert not any(
        labels[i] != labels[j] for i, j in g.edges.tolist()
    )


def test_paper_scale_sbm_mean_degree():
    spec = PlantedPartitionSpec(5_000, (0.7, 0.15, 0.15), 0.7, 0.01, 6.0)
    g = planted_partition_poisson(spec, RngSeed(6))
    realized = 2 * g.edge_count / g.node_count
    assert realized == pytest.approx(6.0, abs=0.3)


def test_equal_affinities_look_like_erdos_renyi():
    spec = PlantedPartitionSpec(4_000, (0.7, 0.15, 0.15), 0.3, 0.3, 6.0)
    g = planted_partition_poisson(spec, RngSeed(7))
    deg = g.degrees
    # Poisson limit: variance approximately equals the mean
    assert abs(deg.var() / deg.mean() - 1.0) < 0.1


def test_mean_degree_unbiased_over_realizations():
    spec = PlantedPartitionSpec(400, (0.6, 0.4), 0.7, 0.05, 5.0)
    means = [
        2
        * planted_partition_poisson(spec, RngSeed(8, t)).edge_count
        / spec.node_count
        for t in range(100)
    ]
    stderr = np.std(means, ddof=1) / np.sqrt(len(means))
    assert abs(np.mean(means) - 5.0) < 3 * stderr


def test_block_labels_match_fractions_within_one():
    spec = PlantedPartitionSpec(101, (0.7, 0.15, 0.15), 0.7, 0.01, 6.0)
    g = planted_partition_poisson(spec, RngSeed(9))
    counts = np.bincount(g.block_labels, minlength=3)
    for count, frac in zip(counts, spec.block_fractions):
        assert abs(count - frac * spec.node_count) <= 1


def test_generator_determinism():
    spec = PlantedPartitionSpec(300, (0.7, 0.3), 0.7, 0.02, 6.0)
    g1 = planted_partition_poisson(spec, RngSeed(10, 4))
    g2 = planted_partition_poisson(spec, RngSeed(10, 4))
    assert np.array_equal(g1.edges, g2.edges)


def test_unreachable_target_mean_degree_rejected():
    with pytest.raises(ValueError):
        PlantedPartitionSpec(10, (1.0,), 0.7, 0.0, 9.5)


def test_clamping_emits_warning():
    # three nodes per block, near-zero coupling: hitting c = 2.5 would need
    # within-block probabilities above 1
    spec = PlantedPartitionSpec(6, (0.5, 0.5), 1.0, 0.001, 2.5)
    with pytest.warns(UserWarning, match="clamped"):
        planted_partition_poisson(spec, RngSeed(11))


# ------------------------------------------------ degree-corrected partition


def test_uniform_theta_reduces_to_plain_model():
    spec = PlantedPartitionSpec(300, (0.7, 0.15, 0.15), 0.7, 0.02, 6.0)
    flat = DegreeSequence(np.full(300, 6, dtype=np.int64))
    plain_means, corrected_means = [], []
    for t in range(100):
        plain = planted_partition_poisson(spec, RngSeed(12, t))
        corrected = degree_corrected_planted_partition(
            flat, spec, RngSeed(112, t)
        )
        plain_means.append(2 * plain.edge_count / 300)
        corrected_means.append(2 * corrected.edge_count / 300)
    assert np.mean(corrected_means) == pytest.approx(
        np.mean(plain_means), rel=0.05
    )


def test_heavier_tail_gives_larger_hubs():
    # paired-sample oracle on these pinned streams: alpha=2.1 wins 91/100
    # with mean max degree 207 vs 134; Bernoulli saturation of hub pairs
    # keeps the win rate below a perfect split
    spec = PlantedPartitionSpec(1_000, (0.7, 0.15, 0.15), 0.7, 0.05, 6.0)
    wins = 0
    trials = 100
    heavy_max, light_max = [], []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for t in range(trials):
            heavy = degree_corrected_planted_partition(
                sample_power_law_degrees(1_000, 2.1, rng=RngSeed(13, t)),
                spec,
                RngSeed(14, t),
            )
            light = degree_corrected_planted_partition(
                sample_power_law_degrees(1_000, 3.0, rng=RngSeed(15, t)),
                spec,
                RngSeed(16, t),
            )
            heavy_max.append(heavy.degrees.max())
            light_max.append(light.degrees.max())
            if heavy_max[-1] > light_max[-1]:
                wins += 1
    assert wins >= 85
    assert np.mean(heavy_max) > 1.3 * np.mean(light_max)


def test_degree_corrected_zero_omega_out():
    spec = PlantedPartitionSpec(100, (0.5, 0.5), 0.7, 0.0, 4.0)
    seq = sample_power_law_degrees(100, 2.5, rng=RngSeed(17))
    g = degree_corrected_planted_partition(seq, spec, RngSeed(18))
    labels = g.block_labels
    assert not any(labels[i] != labels[j] for i, j in g.edges.tolist())


def test_degree_corrected_calibration_holds_under_clamping():
    # small network, heavy tail: hub pairs clamp, yet the expected mean
    # degree stays on target because the scale is recalibrated
    spec = PlantedPartitionSpec(100, (0.7, 0.15, 0.15), 0.7, 0.05, 6.0)
    means = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for t in range(150):
            seq = sample_power_law_degrees(
                100, 2.0, k_max=99, rng=RngSeed(19, t)
            )
            g = degree_corrected_planted_partition(seq, spec, RngSeed(20, t))
            means.append(2 * g.edge_count / 100)
    stderr = np.std(means, ddof=1) / np.sqrt(len(means))
    assert abs(np.mean(means) - 6.0) < 3 * stderr


def test_degree_corrected_length_mismatch():
    spec = PlantedPartitionSpec(10, (1.0,), 0.7, 0.0, 2.0)
    with pytest.raises(ValueError):
        degree_corrected_planted_partition(
            DegreeSequence(np.array([2, 2])), spec, RngSeed(0)
        )


# ------------------------------------------------------- sampling internals


def test_triangle_unrank_matches_enumeration():
    from seedpol.generators import _triangle_unrank

    for size in (2, 3, 5, 17):
        expected = [
            (u, v) for u in range(size) for v in range(u + 1, size)
        ]
        idx = np.arange(len(expected), dtype=np.int64)
        u, v = _triangle_unrank(idx, size)
        assert list(zip(u.tolist(), v.tolist())) == expected


def test_triangle_unrank_large_boundaries():
    from seedpol.generators import _triangle_unrank

    size = 3500
    total = size * (size - 1) // 2

    def offset(u):
        return u * (2 * size - u - 1) // 2

    probes = np.array(
        [0, 1, size - 2, size - 1, offset(1000) - 1, offset(1000),
         total - 2, total - 1],
        dtype=np.int64,
    )
    u, v = _triangle_unrank(probes, size)
    got = list(zip(u.tolist(), v.tolist()))
    assert got[0] == (0, 1)
    assert got[1] == (0, 2)
    assert got[2] == (0, size - 1)
    assert got[3] == (1, 2)
    assert got[4] == (999, size - 1)
    assert got[5] == (1000, 1001)
    assert got[6] == (size - 3, size - 1)
    assert got[7] == (size - 2, size - 1)


def test_bernoulli_index_sampler_distribution():
    from seedpol.generators import _bernoulli_index_sample

    gen = np.random.default_rng(99)
    assert len(_bernoulli_index_sample(1000, 0.0, gen)) == 0
    assert _bernoulli_index_sample(5, 1.0, gen).tolist() == [0, 1, 2, 3, 4]

    m, p = 10_000, 0.3
    hits = _bernoulli_index_sample(m, p, np.random.default_rng(7))
    assert len(np.unique(hits)) == len(hits)
    assert hits.min() >= 0 and hits.max() < m
    sigma = np.sqrt(m * p * (1 - p))
    assert abs(len(hits) - m * p) < 4.5 * sigma

    # per-trial hit probability is uniform, including the first trial
    # (an off-by-one in the geometric gaps would bias index 0)
    trials = 3000
    first = sum(
        0 in _bernoulli_index_sample(4, p, np.random.default_rng(1000 + t))
        for t in range(trials)
    )
    sigma0 = np.sqrt(trials * p * (1 - p))
    assert abs(first - trials * p) < 4.5 * sigma0


def test_scale_calibration_waterfilling():
    from seedpol.generators import _calibrate_scale

    # no clamping: plain proportional scale
    s, clamped = _calibrate_scale(np.array([2.0, 1.0, 1.0]), 1.0)
    assert clamped == 0
    assert s == pytest.approx(0.25)

    # one weight saturates: min(1, 2s) + 2 min(1, s) = 2.5 at s = 0.75
    s, clamped = _calibrate_scale(np.array([2.0, 1.0, 1.0]), 2.5)
    assert clamped == 1
    assert np.minimum(1.0, s * np.array([2.0, 1.0, 1.0])).sum() == pytest.approx(
        2.5, rel=1e-9
    )

    # more expected edges than positive pairs: unreachable
    with pytest.raises(ValueError, match="connectable pairs"):
        _calibrate_scale(np.array([2.0, 1.0, 1.0]), 3.5)
