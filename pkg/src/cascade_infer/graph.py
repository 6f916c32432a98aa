"""Weighted directed graphs, random generators, validation, and edge-list IO.

Nodes are dense integers 0..n-1. An absent edge means transmission
probability 0; stored weights must lie in [p_min, p_max] with
0 < p_min <= p_max < 1.
"""

from __future__ import annotations

import hashlib
import heapq
import random
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import ParameterError, ParseError, ValidationError

DEFAULT_P_MIN = 0.2
DEFAULT_P_MAX = 0.8


@dataclass(frozen=True)
class WeightedDigraph:
    """Immutable weighted digraph. ``edges`` maps (src, dst) to weight."""

    n: int
    edges: dict[tuple[int, int], float] = field(default_factory=dict)
    p_min: float = DEFAULT_P_MIN
    p_max: float = DEFAULT_P_MAX

    @cached_property
    def out_edges(self) -> list[list[tuple[int, float]]]:
        """Adjacency lists [(dst, weight), ...] sorted by dst."""
        out: list[list[tuple[int, float]]] = [[] for _ in range(self.n)]
        for (i, j), w in sorted(self.edges.items()):
            out[i].append((j, w))
        return out

    @cached_property
    def weight_matrix(self) -> np.ndarray:
        w = np.zeros((self.n, self.n))
        for (i, j), p in self.edges.items():
            w[i, j] = p
        return w

    def weight(self, i: int, j: int) -> float:
        return self.edges.get((i, j), 0.0)

    def undirected_edges(self) -> set[tuple[int, int]]:
        """Pairs {i,j} with at least one directed edge, as sorted tuples."""
        return {(min(i, j), max(i, j)) for (i, j) in self.edges}

    def undirected_degree(self, i: int) -> int:
        return sum(1 for (a, b) in self.undirected_edges() if i in (a, b))

    def content_hash(self) -> str:
        """Stable hash of the logical content, used for provenance."""
        items = [f"{self.n};{self.p_min!r};{self.p_max!r}"]
        items += [f"{i},{j},{w!r}" for (i, j), w in sorted(self.edges.items())]
        return hashlib.sha1("|".join(items).encode()).hexdigest()[:16]


def _check_bounds(p_min: float, p_max: float) -> None:
    if not (0.0 < p_min <= p_max < 1.0):
        raise ParameterError(
            f"need 0 < p_min <= p_max < 1, got p_min={p_min}, p_max={p_max}"
        )


def _prufer_decode(seq: list[int], n: int) -> list[tuple[int, int]]:
    degree = [1] * n
    for v in seq:
        degree[v] += 1
    leaves = [i for i in range(n) if degree[i] == 1]
    heapq.heapify(leaves)
    edges = []
    for v in seq:
        leaf = heapq.heappop(leaves)
        edges.append((leaf, v))
        degree[leaf] -= 1
        degree[v] -= 1
        if degree[v] == 1:
            heapq.heappush(leaves, v)
    u = heapq.heappop(leaves)
    w = heapq.heappop(leaves)
    edges.append((u, w))
    return edges


def random_tree(
    n: int,
    p_min: float = DEFAULT_P_MIN,
    p_max: float = DEFAULT_P_MAX,
    seed: int = 0,
) -> WeightedDigraph:
    """Uniformly random labeled tree (Prufer construction), bidirectional.

    Each of the n-1 undirected edges becomes two directed edges whose
    weights are drawn independently and uniformly from [p_min, p_max].
    """
    _check_bounds(p_min, p_max)
    if n < 1:
        raise ParameterError(f"need n >= 1, got {n}")
    rng = random.Random(seed)
    if n == 1:
        skeleton: list[tuple[int, int]] = []
    elif n == 2:
        skeleton = [(0, 1)]
    else:
        seq = [rng.randrange(n) for _ in range(n - 2)]
        skeleton = _prufer_decode(seq, n)
    edges: dict[tuple[int, int], float] = {}
    for a, b in sorted((min(e), max(e)) for e in skeleton):
        edges[(a, b)] = rng.uniform(p_min, p_max)
        edges[(b, a)] = rng.uniform(p_min, p_max)
    return WeightedDigraph(n, edges, p_min, p_max)


def random_bounded_degree(
    n: int,
    d: int,
    p_edge_density: float = 0.3,
    p_min: float = DEFAULT_P_MIN,
    p_max: float = DEFAULT_P_MAX,
    seed: int = 0,
) -> WeightedDigraph:
    """Random bidirectional graph whose undirected degree is capped at d.

    Candidate pairs are scanned in lexicographic order; a pair is kept with
    probability p_edge_density provided both endpoints still have degree
    budget. Kept pairs get two directed weights uniform in [p_min, p_max].
    """
    _check_bounds(p_min, p_max)
    if d < 1 or d > n - 1:
        raise ParameterError(f"need 1 <= d <= n-1, got d={d}, n={n}")
    rng = random.Random(seed)
    budget = [d] * n
    edges: dict[tuple[int, int], float] = {}
    for a in range(n):
        for b in range(a + 1, n):
            if budget[a] == 0 or budget[b] == 0:
                continue
            if rng.random() < p_edge_density:
                budget[a] -= 1
                budget[b] -= 1
                edges[(a, b)] = rng.uniform(p_min, p_max)
                edges[(b, a)] = rng.uniform(p_min, p_max)
    return WeightedDigraph(n, edges, p_min, p_max)


def validate(g: WeightedDigraph) -> list[str]:
    """Return a list of invariant violations; empty iff the graph is valid.

    Reports and never raises, so invalid graphs can be inspected.
    """
    violations = []
    if not (0.0 < g.p_min <= g.p_max < 1.0):
        violations.append(f"bounds: need 0 < p_min <= p_max < 1, got [{g.p_min}, {g.p_max}]")
    for (i, j), w in sorted(g.edges.items()):
        if i == j:
            violations.append(f"edge ({i},{j}): self-loop")
        if not (0 <= i < g.n and 0 <= j < g.n):
            violations.append(f"edge ({i},{j}): endpoint outside 0..{g.n - 1}")
        if w >= 1.0:
            violations.append(f"edge ({i},{j}): weight {w} >= 1")
        elif w <= 0.0:
            violations.append(f"edge ({i},{j}): weight {w} <= 0")
        elif not (g.p_min <= w <= g.p_max):
            violations.append(
                f"edge ({i},{j}): weight {w} outside [{g.p_min}, {g.p_max}]"
            )
    return violations


def write_edge_list(g: WeightedDigraph, path) -> None:
    """Text format: header "n=<count> p_min=<w> p_max=<w>", then one
    directed edge per line "src dst weight". '#' starts a comment."""
    with open(path, "w") as fh:
        fh.write(f"n={g.n} p_min={g.p_min!r} p_max={g.p_max!r}\n")
        for (i, j), w in sorted(g.edges.items()):
            fh.write(f"{i} {j} {w!r}\n")


def read_edge_list(path) -> WeightedDigraph:
    """Inverse of :func:`write_edge_list`.

    The "n=" header is required to round-trip isolated nodes; headerless
    files are accepted and get n = max node id + 1.
    """
    n = None
    p_min, p_max = DEFAULT_P_MIN, DEFAULT_P_MAX
    edges: dict[tuple[int, int], float] = {}
    max_node = -1
    with open(path) as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if line.startswith("n="):
                try:
                    for token in line.split():
                        key, val = token.split("=", 1)
                        if key == "n":
                            n = int(val)
                        elif key == "p_min":
                            p_min = float(val)
                        elif key == "p_max":
                            p_max = float(val)
                except ValueError:
                    raise ParseError(f"bad header {line!r}", line_no) from None
                continue
            parts = line.split()
            if len(parts) != 3:
                raise ParseError(f"expected 'src dst weight', got {line!r}", line_no)
            try:
                i, j, w = int(parts[0]), int(parts[1]), float(parts[2])
            except ValueError:
                raise ParseError(f"non-numeric field in {line!r}", line_no) from None
            if not (0.0 < w < 1.0):
                raise ValidationError(f"line {line_no}: weight {w} outside (0,1)")
            if (i, j) in edges:
                raise ParseError(f"duplicate edge ({i},{j})", line_no)
            edges[(i, j)] = w
            max_node = max(max_node, i, j)
    if n is None:
        n = max_node + 1
    if max_node >= n:
        raise ValidationError(f"edge endpoint {max_node} exceeds n={n}")
    return WeightedDigraph(n, edges, p_min, p_max)
