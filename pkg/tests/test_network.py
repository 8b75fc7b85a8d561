import numpy as np
import pytest

from qualnet.distributions import TNormal
from qualnet.network import (
    DEFAULT_MIDPOINTS,
    Arithmetic,
    BayesianNetwork,
    ExplicitCPT,
    Interval,
    NetworkError,
    NodeSpec,
    Partitioned,
    Ranked,
    Uniform,
    WeightedMean,
    compile_network,
    topological_order,
)


def ranked(*ids, expression=None):
    return [NodeSpec(i, Ranked(), expression or Uniform()) for i in ids]


def test_table1_cpt_reads_back_exactly(table1):
    cpt = table1.cpts["field_failures"]
    # axes: (testing_effort, code_complexity, field_failures)
    assert cpt[0, 2, 1] == 0.8   # P(>100 | effort=low, complexity=high)
    assert cpt[0, 0, 1] == 0.6
    assert cpt[1, 0, 1] == 0.4


def test_single_uniform_ranked_node():
    net = BayesianNetwork(nodes=tuple(ranked("solo")))
    compiled = compile_network(net)
    assert np.allclose(compiled.cpts["solo"], [1 / 3, 1 / 3, 1 / 3])


def test_weighted_mean_concentrates_at_common_parent_state():
    parents = ranked("analysis", "quality_assurance", "implementation")
    child = NodeSpec("maintenance", Ranked(), WeightedMean(
        parents=(("analysis", 1.0, "positive"), ("quality_assurance", 1.0, "positive"),
                 ("implementation", 1.0, "positive")), variance=0.001))
    compiled = compile_network(BayesianNetwork(nodes=(*parents, child)))
    cpt = compiled.cpts["maintenance"]
    # all parents high: nearly all mass on the high state
    assert cpt[2, 2, 2, 2] >= 0.95
    assert cpt[0, 0, 0, 0] >= 0.95


def test_weighted_mean_equal_states_mean_equals_midpoint():
    # with positive signs and all parents at state s, the TNormal mean is the
    # midpoint of s: mass concentrates in the bin around that midpoint
    parents = ranked("a", "b")
    child = NodeSpec("c", Ranked(), WeightedMean(
        parents=(("a", 2.0, "positive"), ("b", 5.0, "positive")), variance=1e-6))
    compiled = compile_network(BayesianNetwork(nodes=(*parents, child)))
    for s in range(3):
        column = compiled.cpts["c"][s, s]
        assert column[s] > 0.999999


def test_negative_polarity_flips_contribution():
    parents = ranked("fact")
    child = NodeSpec("activity", Ranked(), WeightedMean(
        parents=(("fact", 1.0, "negative"),), variance=0.001))
    compiled = compile_network(BayesianNetwork(nodes=(*parents, child)))
    cpt = compiled.cpts["activity"]
    assert cpt[0, 2] > 0.99   # fact low -> activity high
    assert cpt[2, 0] > 0.99   # fact high -> activity low


def test_partitioned_expression_discretizes_each_state():
    fact = ranked("appropriateness")[0]
    edges = tuple(np.linspace(0, 1, 21))
    indicator = NodeSpec("ratio", Interval(edges), Partitioned(
        parent="appropriateness",
        table={"low": TNormal(0.01, 0.03, 0, 1), "medium": TNormal(0.1, 0.05, 0, 1),
               "high": TNormal(0.25, 0.1, 0, 1)}))
    compiled = compile_network(BayesianNetwork(nodes=(fact, indicator)))
    cpt = compiled.cpts["ratio"]
    assert cpt.shape == (3, 20)
    assert np.all(np.abs(cpt.sum(axis=1) - 1.0) < 1e-9)
    # low state has more mass near zero than high state
    assert cpt[0, 0] > cpt[2, 0]


def test_partitioned_table_must_cover_states_exactly():
    fact = ranked("f")[0]
    bad = NodeSpec("ind", Interval((0.0, 1.0, 2.0)), Partitioned(
        parent="f", table={"low": TNormal(0.5, 1.0, 0, 2)}))
    with pytest.raises(NetworkError, match="cover every parent state"):
        compile_network(BayesianNetwork(nodes=(fact, bad)))


def test_arithmetic_expression_tracks_parent_midpoint():
    fact = ranked("f")[0]
    edges = tuple(np.linspace(0.0, 10.0, 21))
    ind = NodeSpec("ind", Interval(edges), Arithmetic(parent="f", offset=1.0, scale=6.0,
                                                      variance=0.01))
    compiled = compile_network(BayesianNetwork(nodes=(fact, ind)))
    mids = compiled.kinds["ind"].midpoints()
    for s, midpoint in enumerate(DEFAULT_MIDPOINTS):
        mean = compiled.cpts["ind"][s] @ mids
        assert abs(mean - (1.0 + 6.0 * midpoint)) < 0.05


def test_explicit_cpt_columns_must_sum_to_one():
    bad = NodeSpec("x", Ranked(("a", "b"), (0.25, 0.75)),
                   ExplicitCPT(parents=(), table=((0.5,), (0.6,))))
    with pytest.raises(NetworkError, match="summing to 1"):
        compile_network(BayesianNetwork(nodes=(bad,)))


def test_explicit_cpt_shape_check():
    parent = ranked("p")[0]
    bad = NodeSpec("x", Ranked(("a", "b"), (0.25, 0.75)),
                   ExplicitCPT(parents=("p",), table=((0.5, 0.5), (0.5, 0.5))))
    with pytest.raises(NetworkError, match="shape"):
        compile_network(BayesianNetwork(nodes=(parent, bad)))


def test_cycle_detection():
    a = NodeSpec("a", Ranked(), WeightedMean(parents=(("b", 1.0, "positive"),), variance=0.01))
    b = NodeSpec("b", Ranked(), WeightedMean(parents=(("a", 1.0, "positive"),), variance=0.01))
    with pytest.raises(NetworkError, match="cycle"):
        topological_order(BayesianNetwork(nodes=(a, b)))


def test_unknown_parent_rejected():
    a = NodeSpec("a", Ranked(), WeightedMean(parents=(("ghost", 1.0, "positive"),), variance=0.01))
    with pytest.raises(NetworkError, match="unknown parents"):
        compile_network(BayesianNetwork(nodes=(a,)))


def test_duplicate_node_ids_rejected():
    with pytest.raises(NetworkError, match="duplicate"):
        BayesianNetwork(nodes=tuple(ranked("x") + ranked("x")))


def test_all_compiled_columns_sum_to_one(maintainability, security):
    for _, compiled in (maintainability, security):
        for node_id in compiled.order:
            sums = compiled.cpts[node_id].sum(axis=-1)
            assert np.all(np.abs(sums - 1.0) < 1e-9)


def test_ranked_edges_are_midpoint_centered():
    assert np.allclose(Ranked().edges(), [0.0, 1 / 3, 2 / 3, 1.0])


def test_interval_validation():
    with pytest.raises(ValueError):
        Interval((1.0, 0.5))
    with pytest.raises(ValueError):
        Ranked(("a",), (0.5,))
