#!/usr/bin/env python3
"""Exact enumeration as ground truth for the estimator families.

On desk-size graphs the full cascade outcome space can be enumerated, so
every estimator limit is known exactly; Monte Carlo values must land
within binomial noise of them. This is the validation backbone of the
whole package.
"""

import math

from cascade_infer import (
    LIMITED_NOISE,
    accumulate,
    enumerate_outcomes,
    geometric,
    limits,
    random_tree,
    restrict_observation,
    s_table,
    simulate_batch,
)

g = random_tree(5, seed=9)
noise = geometric(0.5)
sk = s_table(noise, k_max=g.n + 2)

dist = enumerate_outcomes(g)
print(f"{len(dist.outcomes)} distinct outcomes, total mass {dist.total_mass():.15f}")

lim = limits(dist, sk)
m = 100_000
bank = accumulate(restrict_observation(simulate_batch(g, noise, m, seed=1), LIMITED_NOISE))

print(f"\nestimator vs exact limit at M={m} (z = deviation in binomial sigmas):")
print(f"{'quantity':>12} {'monte carlo':>12} {'exact':>12} {'z':>6}")
rows = []
for i in range(g.n):
    for j in range(g.n):
        if i == j:
            continue
        rows.append((f"h[{i},{j}]", bank.h_pair(i, j), lim.h_pair(i, j)))
        rows.append((f"f[{i},{j}]", bank.f_lt(i, j), lim.f_lt(i, j)))
for label, emp, exact in rows[:12]:
    sigma = math.sqrt(max(exact * (1 - exact), 1e-300) / m)
    print(f"{label:>12} {emp:>12.5f} {exact:>12.5f} {abs(emp - exact) / sigma:>6.2f}")
print(f"  ... ({len(rows)} comparisons total)")

worst = max(
    abs(emp - exact) / math.sqrt(max(exact * (1 - exact), 1e-300) / m)
    for _, emp, exact in rows
    if exact > 0
)
print(f"\nworst deviation: {worst:.2f} sigma (3 sigma is the acceptance gate)")
