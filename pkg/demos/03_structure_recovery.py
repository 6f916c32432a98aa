#!/usr/bin/env python3
"""Structure from infection statuses alone, sized by the theory.

Tree recovery sorts pairwise co-infection fractions and adds edges
greedily unless they close a cycle. Bounded-degree recovery finds, per
node, the smallest set that is co-infected with it as often as any other:
its neighborhood, because the neighborhood separates the node from the
rest of the graph. Both algorithms see only infection statuses.
"""

from cascade_infer import (
    EXTREME_NOISE,
    accumulate,
    geometric,
    learn_bounded_degree,
    learn_tree,
    m_bounded_structure,
    m_tree_structure,
    random_bounded_degree,
    random_tree,
    restrict_observation,
    simulate_batch,
)

noise = geometric(0.5)

print("=== bidirectional tree, N=20 ===")
n, p_min, p_max, delta = 20, 0.2, 0.8, 0.1
m = m_tree_structure(n, delta, p_min, p_max)
print(f"theorem-sized sample: M = {m} cascades for delta = {delta}")
hits = 0
trials = 10
for seed in range(trials):
    g = random_tree(n, p_min, p_max, seed=seed)
    obs = restrict_observation(simulate_batch(g, noise, m, seed=100 + seed), EXTREME_NOISE)
    learned = learn_tree(accumulate(obs).h_pair_matrix())
    hits += learned.edges == g.undirected_edges()
print(f"exact recovery: {hits}/{trials} trials")

print("\n=== bounded-degree graph, N=10, d=3 ===")
n, d, p_max = 10, 3, 0.5
m = m_bounded_structure(n, d, delta, p_min, p_max)
print(f"theorem-sized sample: M = {m} cascades")
g = random_bounded_degree(n, d, 0.35, p_min, p_max, seed=5)
obs = restrict_observation(simulate_batch(g, noise, m, seed=77), EXTREME_NOISE)
bank = accumulate(obs)
result = learn_bounded_degree(bank, d)
print(f"true edges:    {sorted(g.undirected_edges())}")
print(f"learned edges: {sorted(result.edges)}")
print(f"exact: {result.edges == g.undirected_edges()}, "
      f"ambiguous argmax ties: {len(result.ambiguities)}")

node = max(range(n), key=g.undirected_degree)
adj = sorted({v for a, b in g.undirected_edges() for v in (a, b) if node in (a, b) and v != node})
print(f"\nseparator at node {node}: neighborhood {adj}")
print(f"  h_set({node}, neighborhood) = {bank.h_set(node, adj):.4f}")
for s in ([adj[0]], adj[:2], [v for v in range(n) if v != node][:3]):
    print(f"  h_set({node}, {sorted(s)}) = {bank.h_set(node, sorted(set(s))):.4f}")
