"""Exact enumeration of the cascade outcome space on small graphs.

Ground truth for every estimator limit: the full distribution over
(infection statuses, true infection times) is built by recursing over
sources and over the newly-infected subset at each time step. Reporting
noise never needs to be enumerated; it enters analytically through the
s_k table when an estimator compares reported times.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import ParameterError, ResourceError
from .graph import WeightedDigraph
from .noise import SkTable
from .structure import _check_tree

NEVER = np.inf
DEFAULT_NODE_CAP = 7


@dataclass(frozen=True)
class OutcomeDistribution:
    """All cascade outcomes of a graph: (probability, status bitmask, times)."""

    graph: WeightedDigraph
    t0: int
    outcomes: list[tuple[float, int, tuple[float, ...]]]

    @property
    def n(self) -> int:
        return self.graph.n

    def total_mass(self) -> float:
        return float(sum(p for p, _, _ in self.outcomes))

    @cached_property
    def max_span(self) -> int:
        """Largest true-time gap between two co-infected nodes."""
        span = 0
        for _, status, times in self.outcomes:
            finite = [t for t in times if t != NEVER]
            if len(finite) >= 2:
                span = max(span, int(max(finite) - min(finite)))
        return span


def enumerate_outcomes(
    g: WeightedDigraph, t0: int = 1, node_cap: int = DEFAULT_NODE_CAP
) -> OutcomeDistribution:
    """Exhaustive recursion over the cascade probability space.

    Per step, each susceptible node v with frontier parents U is infected
    independently with probability q_v = 1 - prod_{u in U}(1 - p_uv), which
    aggregates the per-edge transmission events exactly.
    """
    n = g.n
    if n > node_cap:
        raise ResourceError(
            f"{n} nodes exceeds the enumeration cap {node_cap}; the outcome "
            "space grows exponentially (cap is configurable)"
        )
    if t0 < 1:
        raise ParameterError(f"need t0 >= 1, got {t0}")
    w = g.weight_matrix
    outcomes: list[tuple[float, int, tuple[float, ...]]] = []

    def expand(prob: float, times: list[float], frontier: list[int], t: int) -> None:
        targets = []
        for v in range(n):
            if times[v] != NEVER:
                continue
            miss = 1.0
            for u in frontier:
                miss *= 1.0 - w[u, v]
            q = 1.0 - miss
            if q > 0.0:
                targets.append((v, q))
        if not targets:
            outcomes.append((prob, _mask(times), tuple(times)))
            return
        for bits in range(1 << len(targets)):
            sub_prob = prob
            new = []
            for pos, (v, q) in enumerate(targets):
                if bits >> pos & 1:
                    sub_prob *= q
                    new.append(v)
                else:
                    sub_prob *= 1.0 - q
            if not new:
                outcomes.append((sub_prob, _mask(times), tuple(times)))
                continue
            new_times = times.copy()
            for v in new:
                new_times[v] = t + 1
            expand(sub_prob, new_times, new, t + 1)

    def _mask(times: list[float]) -> int:
        m = 0
        for v, tv in enumerate(times):
            if tv != NEVER:
                m |= 1 << v
        return m

    for src in range(n):
        times = [NEVER] * n
        times[src] = float(t0)
        expand(1.0 / n, times, [src], t0)
    return OutcomeDistribution(g, t0, outcomes)


@dataclass
class ExactLimits:
    """Population values of every estimator family, exposed through the
    same query interface as an empirical counter bank."""

    dist: OutcomeDistribution
    sk: SkTable
    h: np.ndarray
    f: np.ndarray
    g: np.ndarray
    h2_mat: np.ndarray
    f2: np.ndarray
    e1_vec: np.ndarray
    v: np.ndarray

    @property
    def n(self) -> int:
        return self.dist.n

    @property
    def has_times(self) -> bool:
        return True

    def _check_pair(self, i: int, j: int) -> None:
        if i == j:
            raise ParameterError(f"need i != j, got i=j={i}")

    def h_pair(self, i, j):
        self._check_pair(i, j)
        return float(self.h[i, j])

    def f_lt(self, i, j):
        self._check_pair(i, j)
        return float(self.f[i, j])

    def g_excl(self, i, j):
        self._check_pair(i, j)
        return float(self.g[i, j])

    def h2(self, i, j):
        self._check_pair(i, j)
        return float(self.h2_mat[i, j])

    def f2_lt(self, i, j):
        self._check_pair(i, j)
        return float(self.f2[i, j])

    def e1(self, i):
        return float(self.e1_vec[i])

    def h_set(self, i: int, s) -> float:
        nodes = set(s)
        if i in nodes:
            raise ParameterError(f"node {i} must not belong to its query set")
        if not nodes:
            raise ParameterError("query set must be non-empty")
        s_mask = sum(1 << v for v in nodes)
        total = 0.0
        for p, status, _ in self.dist.outcomes:
            if status >> i & 1 and status & s_mask:
                total += p
        return total

    def h_pair_matrix(self) -> np.ndarray:
        return self.h.copy()


def limits(dist: OutcomeDistribution, sk: SkTable) -> ExactLimits:
    """Reduce the outcome distribution to estimator limits.

    Status-only limits are direct sums; reported-order limits weight each
    outcome by s_{T_i - T_j + 1}, the probability that i's report precedes
    j's given their true-time gap.
    """
    n = dist.n
    span = dist.max_span
    if not sk.covers(-span + 1, span + 1):
        raise ParameterError(
            f"s_k table covers [{sk.k_min}, {sk.k_max}] but outcomes need "
            f"[{-span + 1}, {span + 1}]"
        )
    h = np.zeros((n, n))
    f = np.zeros((n, n))
    g = np.zeros((n, n))
    h2 = np.zeros((n, n))
    f2 = np.zeros((n, n))
    e1 = np.zeros(n)
    for p, status, times in dist.outcomes:
        infected = [v for v in range(n) if status >> v & 1]
        if len(infected) == 1:
            e1[infected[0]] += p
        for i in infected:
            for j in range(n):
                if j == i:
                    continue
                if status >> j & 1:
                    h[i, j] += p
                    flip = p * sk.s(int(times[i] - times[j]) + 1)
                    f[i, j] += flip
                    if len(infected) == 2:
                        h2[i, j] += p
                        f2[i, j] += flip
                else:
                    g[i, j] += p
    v = np.full((n, n), np.nan)
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            den = h2[i, j] + n * e1[i] * e1[j]
            if den > 0.0:
                v[i, j] = f2[i, j] / den
    return ExactLimits(dist, sk, h, f, g, h2, f2, e1, v)


def first_infected_prob(dist: OutcomeDistribution, w: int, others) -> float:
    """Probability that w is infected strictly before every node in others
    (never-infected counts as time +inf, so w itself must be infected)."""
    nodes = [v for v in others if v != w]
    total = 0.0
    for p, _, times in dist.outcomes:
        tw = times[w]
        if tw != NEVER and all(tw < times[v] for v in nodes):
            total += p
    return total


def tree_path(g: WeightedDigraph, i: int, j: int) -> list[int]:
    """Unique path from i to j in the undirected skeleton of a tree."""
    adj = _check_tree(g.undirected_edges(), g.n)
    parent = {i: None}
    stack = [i]
    while stack:
        u = stack.pop()
        if u == j:
            break
        for vtx in adj[u]:
            if vtx not in parent:
                parent[vtx] = u
                stack.append(vtx)
    if j not in parent:
        raise ParameterError(f"no path between {i} and {j}")
    path = [j]
    while path[-1] != i:
        path.append(parent[path[-1]])
    return path[::-1]


def path_prob(dist: OutcomeDistribution, i: int, j: int) -> float:
    """Probability that i is infected before every node on the tree path
    from i to j, including j. Only defined on trees."""
    if i == j:
        raise ParameterError(f"need i != j, got i=j={i}")
    path = tree_path(dist.graph, i, j)
    return first_infected_prob(dist, i, path[1:])
