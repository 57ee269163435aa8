"""End-to-end smoke tests for the Python bindings."""

import blockfit as bf


def two_block_p(within, between):
    return [[within, between], [between, within]]


def test_sample_fit_recovers_strong_signal():
    graph, truth = bf.sample_sbm(200, [0.5, 0.5], two_block_p(0.30, 0.02), seed=7)
    assert graph.n_rows == 200
    init = bf.scp(graph, k=2, seed=7)
    result = bf.fit(graph, 2, init)
    assert result.converged
    assert bf.nmi(result.labels, truth) > 0.95
    trace = result.objective_trace
    assert all(b >= a - 1e-8 * abs(a) for a, b in zip(trace, trace[1:]))


def test_dcsbm_fit_runs_and_ascends():
    theta = bf.sample_theta_two_point(150, 3, seed=11)
    graph, truth = bf.sample_dcsbm(
        150, [0.5, 0.5], two_block_p(0.25, 0.03), theta, seed=11
    )
    init = bf.scp(graph, k=2, seed=11)
    result = bf.fit_dcsbm(graph, 2, init)
    assert len(result.labels) == 150
    assert len(result.theta) == 150
    trace = result.objective_trace
    assert all(b >= a - 1e-8 * abs(a) for a, b in zip(trace, trace[1:]))
    assert bf.nmi(result.labels, truth) > 0.5


def test_bisbm_two_sided_fit():
    graph, rows, cols = bf.sample_bisbm(
        120, 140, [0.5, 0.5], [0.5, 0.5], two_block_p(0.35, 0.05), seed=3
    )
    assert graph.bipartite
    init_c1 = bf.scp_on_product(graph, True, k=2, seed=3)
    init_c2 = bf.scp_on_product(graph, False, k=2, seed=3)
    result = bf.fit_bisbm(graph, 2, 2, init_c1, init_c2)
    assert bf.nmi(result.c2.labels, cols) > 0.9
    assert bf.nmi(result.c1.labels, rows) > 0.9


def test_refine_once_improves_noisy_start():
    graph, truth = bf.sample_sbm(300, [0.5, 0.5], two_block_p(0.20, 0.02), seed=21)
    noisy = bf.perturb_labels(truth, 0.7, seed=21)
    refined = bf.refine_once(graph, noisy)
    assert bf.nmi(refined, truth) >= bf.nmi(noisy, truth)
    assert bf.exact_recovery(refined, truth)


def test_deterministic_given_seed():
    graph_a, labels_a = bf.sample_sbm(100, [0.5, 0.5], two_block_p(0.3, 0.05), seed=5)
    graph_b, labels_b = bf.sample_sbm(100, [0.5, 0.5], two_block_p(0.3, 0.05), seed=5)
    assert labels_a == labels_b
    assert graph_a.edge_count == graph_b.edge_count
    init = bf.scp(graph_a, k=2, seed=5)
    assert bf.scp(graph_b, k=2, seed=5) == init
