from itertools import combinations

import pytest

from cascade_infer import (
    ParameterError,
    ResourceError,
    WeightedDigraph,
    enumerate_outcomes,
    first_infected_prob,
    from_pmf,
    geometric,
    limits,
    path_prob,
    random_tree,
    s_table,
)
from helpers import battery, four_star, three_path, two_node

GEO = geometric(0.5)
SK = s_table(GEO, k_max=10)


def test_single_node():
    dist = enumerate_outcomes(WeightedDigraph(1, {}), t0=2)
    assert len(dist.outcomes) == 1
    prob, status, times = dist.outcomes[0]
    assert prob == 1.0 and status == 1 and times == (2.0,)


def test_two_node_hand_values():
    p = 0.5
    dist = enumerate_outcomes(two_node(p, p))
    by_status = {}
    for prob, status, _ in dist.outcomes:
        by_status[status] = by_status.get(status, 0.0) + prob
    assert abs(by_status[0b11] - p) < 1e-15          # both infected
    assert abs(by_status[0b01] - (1 - p) / 2) < 1e-15  # only node 0
    assert abs(by_status[0b10] - (1 - p) / 2) < 1e-15


def test_three_path_all_infected_hand_sum():
    # independent hand summation over the three sources
    g = three_path()
    w = {e: g.edges[e] for e in g.edges}
    expect = (
        w[(0, 1)] * w[(1, 2)] + w[(1, 0)] * w[(1, 2)] + w[(2, 1)] * w[(1, 0)]
    ) / 3
    dist = enumerate_outcomes(g)
    got = sum(p for p, status, _ in dist.outcomes if status == 0b111)
    assert abs(got - expect) < 1e-12


@pytest.mark.parametrize("name,graph", sorted(battery().items()))
def test_mass_conservation(name, graph):
    assert abs(enumerate_outcomes(graph).total_mass() - 1.0) <= 1e-12


def test_node_cap():
    with pytest.raises(ResourceError):
        enumerate_outcomes(random_tree(8, seed=0))
    # configurable
    enumerate_outcomes(random_tree(8, seed=0), node_cap=8)


def test_two_node_limits_match_hand_algebra():
    dist = enumerate_outcomes(two_node(0.5, 0.5))
    lim = limits(dist, SK)
    assert abs(lim.e1(0) - 0.25) < 1e-12
    assert abs(lim.h2(0, 1) - 0.5) < 1e-12
    assert abs(lim.f2_lt(0, 1) - 5 / 24) < 1e-11
    assert abs(lim.v[0, 1] - 1 / 3) < 1e-11
    # closed-form limit from the pair-ratio proposition: p(s0+s2)/(1+p^2)
    assert abs(lim.v[0, 1] - 0.5 * (SK.s0 + SK.s2) / 1.25) < 1e-12


def test_size_partition():
    # cascades of size 1, of size 2, and of size >= 3 partition the space
    for name, g in battery().items():
        dist = enumerate_outcomes(g)
        sk = s_table(GEO, k_max=g.n + 2)
        lim = limits(dist, sk)
        p_small = lim.e1_vec.sum() + sum(
            lim.h2(i, j) for i, j in combinations(range(g.n), 2)
        )
        p_large = sum(
            p for p, status, _ in dist.outcomes if bin(status).count("1") >= 3
        )
        assert abs(p_small + p_large - 1.0) <= 1e-12, name


def test_path_co_infection_strictly_decreases():
    lim = limits(enumerate_outcomes(three_path()), SK)
    assert lim.h_pair(0, 2) < lim.h_pair(0, 1)
    assert lim.h_pair(0, 2) < lim.h_pair(1, 2)


def test_neighbor_identities_on_tree():
    # for every tree edge: f_{i<j} = P_j(->i) p_ij s0 + P_i(->j) p_ji s2
    # and g_{i,-j} = P_j(->i) (1 - p_ij)
    g = random_tree(5, 0.2, 0.8, seed=77)
    noise = geometric(0.3)
    sk = s_table(noise, k_max=8)
    dist = enumerate_outcomes(g)
    lim = limits(dist, sk)
    for a, b in g.undirected_edges():
        for i, j in ((a, b), (b, a)):
            p_first_i = path_prob(dist, i, j)
            p_first_j = path_prob(dist, j, i)
            f_expect = p_first_i * g.weight(i, j) * sk.s0 + p_first_j * g.weight(j, i) * sk.s2
            g_expect = p_first_i * (1.0 - g.weight(i, j))
            assert abs(lim.f_lt(i, j) - f_expect) <= 1e-10
            assert abs(lim.g_excl(i, j) - g_expect) <= 1e-10


def test_general_distance_identity_on_three_path():
    # non-neighbor identity for the endpoints of the 3-path, with the
    # middle node's first-infection term included
    g = three_path()
    dist = enumerate_outcomes(g)
    lim = limits(dist, SK)
    p02 = g.weight(0, 1) * g.weight(1, 2)  # 0 reaches 2 along the path
    p10, p12 = g.weight(1, 0), g.weight(1, 2)
    first_0 = path_prob(dist, 0, 2)
    first_mid = first_infected_prob(dist, 1, [0, 2])
    g_expect = first_0 * (1 - p02) + first_mid * p10 * (1 - p12)
    assert abs(lim.g_excl(0, 2) - g_expect) <= 1e-12
    # f identity at distance 2: infection from the middle reaches both ends
    # in one step, so the order flip is s_{2l-d+1} = s_1 at l=1
    p20 = g.weight(2, 1) * g.weight(1, 0)
    f_expect = (
        first_0 * p02 * SK.s(-1)
        + path_prob(dist, 2, 0) * p20 * SK.s(3)
        + first_mid * p10 * p12 * SK.s(1)
    )
    assert abs(lim.f_lt(0, 2) - f_expect) <= 1e-11


def test_path_prob_two_node():
    dist = enumerate_outcomes(two_node(0.5, 0.5))
    assert abs(path_prob(dist, 0, 1) - 0.5) < 1e-12


def test_path_prob_symmetric_star():
    g = four_star()
    sym = WeightedDigraph(
        4, {e: 0.5 for e in g.edges}, 0.2, 0.8
    )
    dist = enumerate_outcomes(sym)
    vals = [path_prob(dist, leaf, 0) for leaf in (1, 2, 3)]
    assert max(vals) - min(vals) < 1e-12


def test_path_prob_requires_tree():
    from helpers import triangle

    with pytest.raises(ParameterError):
        path_prob(enumerate_outcomes(triangle()), 0, 2)


def test_sk_table_too_narrow():
    # point-mass noise has a width-2 default table; a 4-path spans 3 steps
    g = WeightedDigraph(
        4,
        {(i, j): 0.5 for i, j in [(0, 1), (1, 0), (1, 2), (2, 1), (2, 3), (3, 2)]},
        0.2, 0.8,
    )
    narrow = s_table(from_pmf({0: 1.0}))
    with pytest.raises(ParameterError):
        limits(enumerate_outcomes(g), narrow)


def test_oracle_vs_monte_carlo_smoke():
    # the acceptance suite runs the full battery; one graph here for speed
    from cascade_infer import LIMITED_NOISE, accumulate, restrict_observation, simulate_batch
    from helpers import binomial_3sigma

    g = three_path()
    lim = limits(enumerate_outcomes(g), SK)
    bank = accumulate(
        restrict_observation(simulate_batch(g, GEO, 50_000, seed=3), LIMITED_NOISE)
    )
    for i in range(3):
        for j in range(3):
            if i == j:
                continue
            assert binomial_3sigma(bank.h_pair(i, j), lim.h_pair(i, j), bank.m)
            assert binomial_3sigma(bank.f_lt(i, j), lim.f_lt(i, j), bank.m)
            assert binomial_3sigma(bank.g_excl(i, j), lim.g_excl(i, j), bank.m)
