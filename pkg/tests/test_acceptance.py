"""Acceptance suite: one test per criterion, at the stated tolerances.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
pass lines.
"""

import math
import time
from itertools import combinations

import numpy as np

from cascade_infer import (
    EXTREME_NOISE,
    LIMITED_NOISE,
    accumulate,
    delta_lower_bound,
    discriminant,
    enumerate_outcomes,
    from_pmf,
    geometric,
    learn_bounded_degree,
    learn_tree,
    limits,
    m_bounded_structure,
    m_bounded_weights,
    m_tree_structure,
    m_tree_weights,
    pairwise_weights,
    quadratic_residual,
    random_bounded_degree,
    random_tree,
    restrict_observation,
    s_table,
    simulate_batch,
    solve_pair,
    tree_weights,
    v_pair_limit,
)
from helpers import battery, binomial_3sigma, tree_paths

GEO = geometric(0.5)
TREE_GRAPHS = ("two_node", "three_path", "four_star", "five_tree")

GRID_NOISE = {
    "geometric_q0.5": s_table(geometric(0.5), k_max=6),
    "geometric_q0.3": s_table(geometric(0.3), k_max=6),
    "uniform_01": s_table(from_pmf({0: 0.5, 1: 0.5}), k_max=6),
}


def report(name):
    print(f"\nACCEPTANCE {name}: PASS")


def test_oracle_equivalence_battery():
    started = time.perf_counter()
    m = 100_000
    failures = []
    for gi, (name, g) in enumerate(sorted(battery().items())):
        sk = s_table(GEO, k_max=g.n + 2)
        lim = limits(enumerate_outcomes(g), sk)
        obs = restrict_observation(
            simulate_batch(g, GEO, m, seed=240_531 + gi), LIMITED_NOISE
        )
        bank = accumulate(obs)

        def check(label, empirical, expected):
            if not binomial_3sigma(empirical, expected, m):
                failures.append((name, label, empirical, expected))

        for i in range(g.n):
            check(f"e1[{i}]", bank.e1(i), lim.e1(i))
            for j in range(g.n):
                if i == j:
                    continue
                check(f"h[{i},{j}]", bank.h_pair(i, j), lim.h_pair(i, j))
                check(f"f[{i},{j}]", bank.f_lt(i, j), lim.f_lt(i, j))
                check(f"g[{i},{j}]", bank.g_excl(i, j), lim.g_excl(i, j))
                check(f"h2[{i},{j}]", bank.h2(i, j), lim.h2(i, j))
                check(f"f2[{i},{j}]", bank.f2_lt(i, j), lim.f2_lt(i, j))
            others = [v for v in range(g.n) if v != i]
            for size in (1, min(2, len(others))):
                s = tuple(others[:size])
                check(f"h_set[{i},{s}]", bank.h_set(i, s), lim.h_set(i, s))
    elapsed = time.perf_counter() - started
    assert not failures, failures[:10]
    assert elapsed < 60.0, f"battery took {elapsed:.1f}s"
    report(f"oracle equivalence (6 graphs, M={m}, 3 sigma, {elapsed:.1f}s)")


def test_closed_form_exactness_on_oracle_limits():
    graphs = battery()
    worst_pairwise = 0.0
    for name, g in sorted(graphs.items()):
        sk = s_table(GEO, k_max=g.n + 2)
        lim = limits(enumerate_outcomes(g), sk)
        est = pairwise_weights(lim, sk)
        worst_pairwise = max(worst_pairwise, est.max_error(g.weight_matrix))
    worst_tree = 0.0
    for name in TREE_GRAPHS:
        g = graphs[name]
        sk = s_table(GEO, k_max=g.n + 2)
        lim = limits(enumerate_outcomes(g), sk)
        est = tree_weights(lim, g.undirected_edges(), sk)
        worst_tree = max(worst_tree, est.max_error(g.weight_matrix))
    assert worst_pairwise <= 1e-9
    assert worst_tree <= 1e-9
    report(
        "closed-form exactness "
        f"(pairwise {worst_pairwise:.2e}, tree {worst_tree:.2e} <= 1e-9)"
    )


def test_quadratic_residual_and_round_trip_grid():
    grid = np.linspace(0.0, 0.8, 50)
    worst_residual = worst_round_trip = 0.0
    for sk in GRID_NOISE.values():
        s0, s2 = sk.s0, sk.s2
        for p_ij in grid:
            for p_ji in grid:
                v = v_pair_limit(p_ij, p_ji, s0, s2)
                got_ij, got_ji, _ = solve_pair(v, s0, s2)
                worst_round_trip = max(
                    worst_round_trip, abs(got_ij - p_ij), abs(got_ji - p_ji)
                )
                worst_residual = max(
                    worst_residual, abs(quadratic_residual(got_ij, v, s0, s2))
                )
    assert worst_residual <= 1e-9
    assert worst_round_trip <= 1e-10
    report(
        "quadratic residual and round trip on 50x50 grid x 3 noise models "
        f"(residual {worst_residual:.2e}, round trip {worst_round_trip:.2e})"
    )


def test_discriminant_lower_bound_on_grid():
    grid = np.linspace(0.0, 0.8, 50)
    violations = 0
    for sk in GRID_NOISE.values():
        bound = delta_lower_bound(sk.s0, sk.s2, 0.8)
        for p_ij in grid:
            for p_ji in grid:
                v = v_pair_limit(p_ij, p_ji, sk.s0, sk.s2)
                if discriminant(v, sk.s0, sk.s2) < bound:
                    violations += 1
    assert violations == 0
    report("discriminant lower bound on grid (0 violations)")


def test_tree_structure_at_theorem_scale():
    started = time.perf_counter()
    n, p_min, p_max, delta = 20, 0.2, 0.8, 0.1
    m = m_tree_structure(n, delta, p_min, p_max)
    assert m == 4148
    recovered = 0
    for seed in range(20):
        g = random_tree(n, p_min, p_max, seed=300 + seed)
        obs = restrict_observation(simulate_batch(g, GEO, m, seed=seed), EXTREME_NOISE)
        result = learn_tree(accumulate(obs).h_pair_matrix())
        recovered += result.edges == g.undirected_edges()
    elapsed = time.perf_counter() - started
    assert recovered >= 16, f"{recovered}/20 trees recovered"
    assert elapsed < 120.0, f"took {elapsed:.1f}s"
    report(f"tree structure N=20 M={m} ({recovered}/20 recovered, {elapsed:.1f}s)")


def test_bounded_degree_structure_and_separator():
    n, d, delta, p_min, p_max = 10, 3, 0.1, 0.2, 0.5
    m = m_bounded_structure(n, d, delta, p_min, p_max)
    assert m == 11932
    recovered = 0
    for seed in range(20):
        g = random_bounded_degree(n, d, 0.35, p_min, p_max, seed=400 + seed)
        obs = restrict_observation(simulate_batch(g, GEO, m, seed=seed), EXTREME_NOISE)
        bank = accumulate(obs)
        result = learn_bounded_degree(bank, d)
        recovered += result.edges == g.undirected_edges()
        # deterministic separator inequality, exact on counts, every trial
        adj = {i: set() for i in range(n)}
        for a, b in g.undirected_edges():
            adj[a].add(b)
            adj[b].add(a)
        for i in range(n):
            if not adj[i]:
                continue
            base = bank.h_set_count(i, sorted(adj[i]))
            others = [v for v in range(n) if v != i]
            for size in range(1, d + 1):
                for s in combinations(others, size):
                    assert bank.h_set_count(i, s) <= base, (seed, i, s)
    assert recovered >= 16, f"{recovered}/20 graphs recovered"
    report(f"bounded-degree structure N=10 d=3 M={m} ({recovered}/20, separator exact)")


def test_deterministic_count_inequalities():
    checked_paths = 0
    for seed in range(3):
        g = random_tree(8, 0.2, 0.8, seed=500 + seed)
        obs = restrict_observation(simulate_batch(g, GEO, 20_000, seed=seed), LIMITED_NOISE)
        bank = accumulate(obs)
        # the path inner step: co-infection of path endpoints never exceeds
        # co-infection of any (u_r, u_{r+2}) on the path
        for path in tree_paths(8, g.undirected_edges()):
            u0, ud = path[0], path[-1]
            for r in range(len(path) - 2):
                assert bank.coinfect[u0, ud] <= bank.coinfect[path[r], path[r + 2]]
                checked_paths += 1
        # strict-order splits never exceed co-infection
        assert np.all(bank.order_lt + bank.order_lt.T <= bank.coinfect)
        assert np.all(bank.only_pair_lt + bank.only_pair_lt.T <= bank.only_pair)
        # set co-infection is monotone under set inclusion
        rng = np.random.default_rng(seed)
        for _ in range(200):
            i = int(rng.integers(8))
            others = [v for v in range(8) if v != i]
            rng.shuffle(others)
            cut = int(rng.integers(1, 6))
            small, big = others[:cut], others[: cut + int(rng.integers(0, 3))]
            assert bank.h_set_count(i, small) <= bank.h_set_count(i, big)
    report(f"deterministic count inequalities ({checked_paths} path checks, 0 tolerance)")


def test_weight_error_scaling_in_m():
    g = random_bounded_degree(4, 2, 0.7, 0.3, 0.6, seed=8)
    assert len(g.undirected_edges()) >= 3
    sk = s_table(GEO, k_max=6)
    ms = [10_000, 100_000, 1_000_000]
    medians = []
    for m in ms:
        errors = []
        for seed in range(5):
            obs = restrict_observation(
                simulate_batch(g, GEO, m, seed=600 + seed), LIMITED_NOISE
            )
            est = pairwise_weights(accumulate(obs), sk)
            errors.append(est.max_error(g.weight_matrix))
        medians.append(float(np.median(errors)))
    assert medians[0] > medians[1] > medians[2], medians
    slope = float(np.polyfit(np.log10(ms), np.log10(medians), 1)[0])
    assert -0.65 <= slope <= -0.35, slope
    report(f"weight error scaling (medians {medians}, slope {slope:.3f})")


def test_sample_size_formulas_hand_values():
    assert m_tree_structure(20, 0.1, 0.2, 0.8) == 4148
    assert m_tree_structure(20, 0.1, 0.2, 0.8) == math.ceil(
        20 * (math.log(10) + 2 * math.log(20)) / (0.2 * 0.2)
    )
    assert m_bounded_structure(10, 3, 0.1, 0.2, 0.5) == 11932
    sk = s_table(GEO)
    assert m_tree_weights(5, 0.1, 0.1, sk.s0, sk.s2, 0.8) == 387509
    assert m_bounded_weights(4, 2, 0.1, 0.1, 0.3, 0.6, sk.s0, 0.0) is None
    report("sample-size formulas reproduce hand-computed values")
