"""Structure recovery from co-infection statistics (extreme-noise setting).

Two algorithms: a Kruskal-style greedy over pairwise co-infection scores
that recovers bidirectional trees, and a per-node separator search over
set co-infection scores that recovers any bounded-degree graph.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .errors import ParameterError
from .estimators import _set_mask

Edge = tuple[int, int]


class UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[rb] = ra
        return True


@dataclass
class StructureResult:
    edges: set[Edge]
    ambiguities: list[tuple[int, list[tuple[int, ...]]]] = field(default_factory=list)
    diagnostics: list[dict] = field(default_factory=list)


def learn_tree(h) -> StructureResult:
    """Greedy edge selection on pairwise co-infection scores.

    Pairs are scanned by descending score (ties broken lexicographically for
    determinism) and kept unless they would close a cycle. Only the ordering
    of the scores matters, so the input can be an empirical bank matrix, an
    exact limit matrix, or any strictly increasing transform of either.
    """
    h = np.asarray(h, dtype=float)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ParameterError(f"need a square matrix, got shape {h.shape}")
    if not np.array_equal(h, h.T):
        raise ParameterError("score matrix is not symmetric")
    if np.any(h < 0) or np.any(h > 1):
        raise ParameterError("scores must lie in [0, 1]")
    n = h.shape[0]
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n) if h[i, j] > 0]
    pairs.sort(key=lambda e: (-h[e], e))
    uf = UnionFind(n)
    result = StructureResult(edges=set())
    for i, j in pairs:
        kept = uf.union(i, j)
        result.diagnostics.append({"pair": (i, j), "score": float(h[i, j]), "kept": kept})
        if kept:
            result.edges.add((i, j))
        if len(result.edges) == n - 1:
            break
    if len(result.edges) < n - 1:
        result.diagnostics.append(
            {"incomplete": True, "edges_found": len(result.edges), "expected": n - 1}
        )
    return result


def _score_fn(bank):
    """Exact integer counts when the source is a counter bank, otherwise the
    fraction-valued h_set interface (exact oracle limits)."""
    if hasattr(bank, "h_set_count"):
        rows_cache = {}

        def score(i: int, s: tuple[int, ...]):
            rows = rows_cache.get(i)
            if rows is None:
                rows = rows_cache[i] = bank.rows_with(i)
            mask = _set_mask(bank.n, s)
            return int(np.count_nonzero((rows & mask != 0).any(axis=1)))

        return score
    return lambda i, s: bank.h_set(i, s)


def learn_bounded_degree(bank, d: int) -> StructureResult:
    """Per-node separator search over candidate sets of size <= d.

    For each node i the smallest set maximizing the set co-infection score
    is taken as its neighborhood; the output is the union over nodes. Ties
    among minimal-size maximizers are broken lexicographically and recorded
    as ambiguities. ``bank`` needs only `n` and a set co-infection query, so
    both empirical banks and exact oracle limits work.
    """
    n = bank.n
    if d < 1:
        raise ParameterError(f"need d >= 1, got {d}")
    if d >= n:
        raise ParameterError(f"need d < n, got d={d}, n={n}")
    score = _score_fn(bank)
    result = StructureResult(edges=set())
    neighborhoods: dict[int, tuple[int, ...]] = {}
    for i in range(n):
        others = [v for v in range(n) if v != i]
        best_set: tuple[int, ...] | None = None
        best_val = None
        competitors: list[tuple[int, ...]] = []
        # sizes ascending, lexicographic within size: the first maximizer
        # found is the minimal-size, lexicographically smallest one
        for size in range(1, d + 1):
            for s in combinations(others, size):
                val = score(i, s)
                if best_val is None or val > best_val:
                    best_val, best_set = val, s
                    competitors = []
                elif val == best_val and len(s) == len(best_set) and s != best_set:
                    competitors.append(s)
        if not best_val:
            result.diagnostics.append({"node": i, "never_coinfected": True})
            continue
        neighborhoods[i] = best_set
        if competitors:
            result.ambiguities.append((i, competitors))
        result.diagnostics.append({"node": i, "s_max": best_set, "score": best_val})
        for v in best_set:
            result.edges.add((min(i, v), max(i, v)))
    asym = [
        (i, v)
        for i, s in neighborhoods.items()
        for v in s
        if i not in neighborhoods.get(v, ())
    ]
    if asym:
        result.diagnostics.append({"asymmetric_adoptions": asym})
    return result


def _check_tree(edges: set[Edge], n: int) -> list[list[int]]:
    """Validate a tree on nodes 0..n-1 and return its adjacency lists."""
    if len(edges) != n - 1:
        raise ParameterError(f"a tree on {n} nodes has {n - 1} edges, got {len(edges)}")
    uf = UnionFind(n)
    adj: list[list[int]] = [[] for _ in range(n)]
    for i, j in edges:
        if i == j or not (0 <= i < n and 0 <= j < n):
            raise ParameterError(f"bad edge ({i},{j})")
        if not uf.union(i, j):
            raise ParameterError(f"edge ({i},{j}) closes a cycle; not a tree")
        adj[i].append(j)
        adj[j].append(i)
    return adj


def check_h3_condition(bank, true_tree: set[Edge]) -> tuple[bool, list[tuple[int, int, int]]]:
    """Check the adjacent-triplet strict inequalities.

    For every path i - j - k in the true tree, both co-infection scores
    (i,j) and (j,k) must strictly exceed (i,k). This is the finite-sample
    condition under which the greedy tree learner is provably correct; on
    empirical banks it is evaluated on exact integer counts.
    """
    counts = getattr(bank, "coinfect", None)
    if counts is None:
        counts = bank.h_pair_matrix()
    n = counts.shape[0]
    adj = _check_tree(set(true_tree), n)
    violations = []
    for j in range(n):
        for i, k in combinations(sorted(adj[j]), 2):
            if not (counts[i, j] > counts[i, k] and counts[j, k] > counts[i, k]):
                violations.append((i, j, k))
    return not violations, violations


def write_structure(result: StructureResult, n: int, path, ambiguity_path=None) -> None:
    """Edge-list serialization (weights omitted) plus an optional JSON-lines
    ambiguity log."""
    with open(path, "w") as fh:
        fh.write(f"n={n}\n")
        for i, j in sorted(result.edges):
            fh.write(f"{i} {j}\n")
    if ambiguity_path is not None:
        import json

        with open(ambiguity_path, "w") as fh:
            for node, sets in result.ambiguities:
                fh.write(json.dumps({"node": node, "competing": [list(s) for s in sets]}) + "\n")


def read_structure(path) -> tuple[set[Edge], int]:
    n = None
    edges: set[Edge] = set()
    with open(path) as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if line.startswith("n="):
                n = int(line.split("=", 1)[1].split()[0])
                continue
            a, b = (int(x) for x in line.split()[:2])
            edges.add((min(a, b), max(a, b)))
    if n is None:
        n = 1 + max((max(e) for e in edges), default=-1)
    return edges, n
