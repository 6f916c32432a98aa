"""Shared test helpers: the small-graph battery and independent checks."""

from __future__ import annotations

import math

from cascade_infer import WeightedDigraph, random_tree


def bidirectional(n, undirected, p_min=0.2, p_max=0.8):
    """Build a bidirectional graph from {(i, j): (w_ij, w_ji)}."""
    edges = {}
    for (i, j), (w_ij, w_ji) in undirected.items():
        edges[(i, j)] = w_ij
        edges[(j, i)] = w_ji
    return WeightedDigraph(n, edges, p_min, p_max)


def two_node(p01=0.5, p10=0.5):
    return bidirectional(2, {(0, 1): (p01, p10)})


def three_path():
    return bidirectional(3, {(0, 1): (0.6, 0.4), (1, 2): (0.5, 0.7)})


def four_star():
    return bidirectional(4, {(0, 1): (0.5, 0.4), (0, 2): (0.6, 0.3), (0, 3): (0.45, 0.7)})


def triangle():
    return bidirectional(3, {(0, 1): (0.5, 0.3), (1, 2): (0.4, 0.6), (0, 2): (0.35, 0.55)})


def four_cycle_chord():
    return bidirectional(
        4,
        {
            (0, 1): (0.5, 0.35),
            (1, 2): (0.4, 0.6),
            (2, 3): (0.55, 0.3),
            (0, 3): (0.45, 0.5),
            (0, 2): (0.3, 0.4),  # chord
        },
    )


def five_tree():
    return random_tree(5, 0.2, 0.8, seed=1234)


def battery():
    """The standard small-graph battery used by oracle-equivalence tests."""
    return {
        "two_node": two_node(0.55, 0.35),
        "three_path": three_path(),
        "four_star": four_star(),
        "triangle": triangle(),
        "four_cycle_chord": four_cycle_chord(),
        "five_tree": five_tree(),
    }


def binomial_3sigma(empirical: float, limit: float, m: int, slack: float = 1e-9) -> bool:
    """|empirical - limit| <= 3 sqrt(limit (1-limit) / M), plus float slack."""
    sigma = math.sqrt(max(limit * (1.0 - limit), 0.0) / m)
    return abs(empirical - limit) <= 3.0 * sigma + slack


def undirected_components(n: int, edges) -> list[set[int]]:
    """Connected components of an undirected edge set (independent sweep)."""
    comp = {i: {i} for i in range(n)}
    for i, j in edges:
        if comp[i] is not comp[j]:
            merged = comp[i] | comp[j]
            for v in merged:
                comp[v] = merged
    seen, out = set(), []
    for i in range(n):
        if id(comp[i]) not in seen:
            seen.add(id(comp[i]))
            out.append(comp[i])
    return out


def is_tree(n: int, edges) -> bool:
    edges = set(edges)
    return len(edges) == n - 1 and len(undirected_components(n, edges)) == 1


def tree_paths(n: int, edges):
    """All node paths (u_0, ..., u_d) with d >= 2 in a tree, via BFS."""
    adj = [[] for _ in range(n)]
    for i, j in edges:
        adj[i].append(j)
        adj[j].append(i)
    paths = []
    for start in range(n):
        stack = [(start, [start])]
        while stack:
            u, path = stack.pop()
            if len(path) >= 3:
                paths.append(tuple(path))
            for v in adj[u]:
                if v not in path:
                    stack.append((v, path + [v]))
    return paths
