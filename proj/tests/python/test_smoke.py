"""End-to-end smoke checks for the Python bindings."""

import math

import pytest

import bgescore as bg


def make_chain_dataset():
    dag = bg.Dag([[], [0], [1]], ["a", "b", "c"])
    data = bg.sample_gaussian_data(dag, 0.9, 1.0, 60, 7)
    return dag, data


def test_round_trip_types():
    dag, data = make_chain_dataset()
    assert data.num_obs == 60
    assert data.num_vars == 3
    assert data.names == ["a", "b", "c"]
    assert dag.parents(1) == [0]
    assert dag.edges() == [(0, 1), (1, 2)]


def test_scoring_matches_manual_sum():
    dag, data = make_chain_dataset()
    prior = bg.default_prior(3)
    ctx = bg.ScoreContext(data, prior)
    total = bg.dag_log_score(ctx, dag)
    manual = sum(
        bg.local_log_score(ctx, v, dag.parents(v)) for v in range(3)
    )
    assert math.isfinite(total)
    assert total == pytest.approx(manual, abs=1e-12)


def test_mode_comparison():
    dag, data = make_chain_dataset()
    ctx = bg.ScoreContext(data, bg.default_prior(3))
    scores = {
        mode: bg.dag_log_score(ctx, dag, mode)
        for mode in (bg.ScoreMode.bge, bg.ScoreMode.hg95, bg.ScoreMode.gh02)
    }
    assert all(math.isfinite(v) for v in scores.values())
    assert scores[bg.ScoreMode.bge] != scores[bg.ScoreMode.hg95]


def test_equivalence_invariance():
    _, data = make_chain_dataset()
    ctx = bg.ScoreContext(data, bg.default_prior(3))
    fwd = bg.Dag([[], [0], [1]], ["a", "b", "c"])
    rev = bg.Dag([[1], [2], []], ["a", "b", "c"])
    assert bg.markov_equivalent(fwd, rev)
    assert bg.dag_log_score(ctx, fwd) == pytest.approx(
        bg.dag_log_score(ctx, rev), abs=1e-9
    )


def test_hill_climb_smoke():
    dag, data = make_chain_dataset()
    ctx = bg.ScoreContext(data, bg.default_prior(3))
    result = bg.hill_climb(ctx, bg.SearchConfig())
    assert result["best_score"] >= bg.dag_log_score(ctx, bg.Dag(3))
    assert bg.is_acyclic(result["best"])
    assert result["cache_evaluations"] > 0


def test_mcmc_smoke():
    _, data = make_chain_dataset()
    ctx = bg.ScoreContext(data, bg.default_prior(3))
    cfg = bg.McmcConfig()
    cfg.iterations = 500
    cfg.burn_in = 100
    cfg.thinning = 10
    result = bg.structure_mcmc(ctx, cfg)
    assert len(result["samples"]) == 40
    assert 0.0 < result["acceptance_rate"] <= 1.0


def test_exceptions_are_typed():
    with pytest.raises(bg.ConfigError):
        prior = bg.default_prior(2)
        prior.alpha_mu = -1.0
        bg.ScoreContext(bg.sample_gaussian_data(bg.Dag(2), 0.5, 1.0, 10, 3), prior)
    with pytest.raises(bg.ParseError):
        bg.parse_dag("not a graph")
    with pytest.raises(bg.CyclicGraphError):
        cyc = bg.Dag([[1], [0]])
        _, data = make_chain_dataset()
        ctx = bg.ScoreContext(data.select(["a", "b"]), bg.default_prior(2))
        bg.dag_log_score(ctx, cyc)


def test_dataset_from_python_lists():
    data = bg.Dataset(["u", "v"], [[1.0, 2.0], [3.0, 4.0], [5.0, 6.0]])
    assert data.num_obs == 3
    stats_ctx = bg.ScoreContext(data, bg.default_prior(2))
    assert math.isfinite(bg.log_marginal_subset(stats_ctx, [0, 1]))
