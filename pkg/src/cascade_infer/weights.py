"""Directed edge-weight recovery (limited-noise setting).

Two routes:

* trees: a closed form per directed edge from the reported-order fractions
  f and the exclusion fraction g, using the order-flip probabilities s_0
  and s_2;
* any graph: reduce the size-1/size-2 cascade fractions to the pair ratio
  V_ij, whose population value depends only on (p_ij, p_ji), then solve the
  resulting quadratic.

The quadratic's in-range root is p_ij = 2(V_ij s_0 - V_ji s_2) / (b + sqrt(D))
with b = s_0^2 - s_2^2. Note the numerator sign: it is fixed by plugging the
root back into the quadratic and by the forward-map round trip.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .errors import AccessError, ParameterError
from .noise import SkTable

FLAG_OK = "OK"
FLAG_NO_PAIR_CASCADE = "NO_PAIR_CASCADE"
FLAG_CLAMPED_DELTA = "CLAMPED_DELTA"
FLAG_CLAMPED_RANGE = "CLAMPED_RANGE"
FLAG_DEGENERATE_DENOM = "DEGENERATE_DENOM"


@dataclass(frozen=True)
class VPair:
    v_ij: float
    v_ji: float

    def swap(self) -> "VPair":
        return VPair(self.v_ji, self.v_ij)


@dataclass
class WeightEstimate:
    """Estimated weight matrix plus a per-pair flag map (OK when absent)."""

    p_hat: np.ndarray
    flags: dict[tuple[int, int], str]

    def flag(self, i: int, j: int) -> str:
        return self.flags.get((i, j), FLAG_OK)

    def max_error(self, true_weights: np.ndarray) -> float:
        err = np.abs(self.p_hat - true_weights)
        np.fill_diagonal(err, 0.0)
        return float(err.max())

    def mean_error(self, true_weights: np.ndarray) -> float:
        err = np.abs(self.p_hat - true_weights)
        np.fill_diagonal(err, 0.0)
        n = err.shape[0]
        return float(err.sum() / (n * (n - 1))) if n > 1 else 0.0


def _check_s(s0: float, s2: float) -> None:
    if not (s0 > s2 >= 0.0):
        raise ParameterError(
            f"need s0 > s2 >= 0 (closed forms divide by s0^2 - s2^2), got s0={s0}, s2={s2}"
        )


def tree_edge_weight(
    f_ij: float, f_ji: float, g_ij_notj: float, s0: float, s2: float
) -> tuple[float, str]:
    """Closed-form weight of a known tree edge (i, j).

    p_ij = (f_{i<j} s0 - f_{j<i} s2) / (g_{i,-j} (s0^2 - s2^2) + same numerator).
    """
    _check_s(s0, s2)
    num = f_ij * s0 - f_ji * s2
    den = g_ij_notj * (s0 * s0 - s2 * s2) + num
    if den <= 0.0:
        return 0.0, FLAG_DEGENERATE_DENOM
    p = num / den
    if p < 0.0:
        return 0.0, FLAG_CLAMPED_RANGE
    if p > 1.0:
        return 1.0, FLAG_CLAMPED_RANGE
    return p, FLAG_OK


def tree_weights(bank, edges, sk: SkTable) -> WeightEstimate:
    """Apply the tree closed form to every directed edge of a learned
    structure; pairs outside the structure get weight 0."""
    if not bank.has_times:
        raise AccessError("tree weight recovery needs reported times")
    n = bank.n
    s0, s2 = sk.s0, sk.s2
    est = WeightEstimate(np.zeros((n, n)), {})
    for a, b in edges:
        for i, j in ((a, b), (b, a)):
            p, flag = tree_edge_weight(
                bank.f_lt(i, j), bank.f_lt(j, i), bank.g_excl(i, j), s0, s2
            )
            est.p_hat[i, j] = p
            if flag != FLAG_OK:
                est.flags[(i, j)] = flag
    return est


def v_ratio(bank, i: int, j: int) -> VPair | None:
    """Pair ratio V_ij = f2_{i<j} / (h2_{i,j} + N e1_i e1_j), both directions.

    Returns None when no cascade infected exactly {i, j}: the pair is then
    declared weightless (the no-pair-cascade rule)."""
    n = bank.n
    h2 = bank.h2(i, j)
    if h2 == 0.0:
        return None
    den = h2 + n * bank.e1(i) * bank.e1(j)
    return VPair(bank.f2_lt(i, j) / den, bank.f2_lt(j, i) / den)


def solve_pair(v: VPair, s0: float, s2: float) -> tuple[float, float, tuple[str, str]]:
    """Solve the pair quadratic for (p_ij, p_ji).

    The discriminant is clamped at 0 when finite-sample noise drives it
    negative; out-of-range roots are clamped to [0, 1]. Both events are
    flagged, never raised.
    """
    _check_s(s0, s2)
    b = s0 * s0 - s2 * s2
    delta = b * b - 4.0 * (v.v_ji * s2 - v.v_ij * s0) * (v.v_ij * s2 - v.v_ji * s0)
    clamped_delta = delta < 0.0
    root = math.sqrt(max(delta, 0.0))

    def one_direction(v_fwd: float, v_bwd: float) -> tuple[float, str]:
        p = 2.0 * (v_fwd * s0 - v_bwd * s2) / (b + root)
        if p < 0.0:
            return 0.0, FLAG_CLAMPED_RANGE
        if p > 1.0:
            return 1.0, FLAG_CLAMPED_RANGE
        return p, FLAG_CLAMPED_DELTA if clamped_delta else FLAG_OK

    p_ij, flag_ij = one_direction(v.v_ij, v.v_ji)
    p_ji, flag_ji = one_direction(v.v_ji, v.v_ij)
    return p_ij, p_ji, (flag_ij, flag_ji)


def pairwise_weights(bank, sk: SkTable) -> WeightEstimate:
    """V-ratio reduction and quadratic solve over all ordered pairs.

    Needs no structure and no degree bound; applies to any graph (at the
    price of sample complexity for dense ones)."""
    if not bank.has_times:
        raise AccessError("pairwise weight recovery needs reported times")
    n = bank.n
    s0, s2 = sk.s0, sk.s2
    est = WeightEstimate(np.zeros((n, n)), {})
    for i in range(n):
        for j in range(i + 1, n):
            v = v_ratio(bank, i, j)
            if v is None:
                est.flags[(i, j)] = FLAG_NO_PAIR_CASCADE
                est.flags[(j, i)] = FLAG_NO_PAIR_CASCADE
                continue
            p_ij, p_ji, (flag_ij, flag_ji) = solve_pair(v, s0, s2)
            est.p_hat[i, j] = p_ij
            est.p_hat[j, i] = p_ji
            if flag_ij != FLAG_OK:
                est.flags[(i, j)] = flag_ij
            if flag_ji != FLAG_OK:
                est.flags[(j, i)] = flag_ji
    return est


def v_pair_limit(p_ij: float, p_ji: float, s0: float, s2: float) -> VPair:
    """Population value of the pair ratio as a function of the two weights:
    V_ij = (p_ij s0 + p_ji s2) / (1 + p_ij p_ji). The forward map inverted
    by solve_pair."""
    den = 1.0 + p_ij * p_ji
    return VPair((p_ij * s0 + p_ji * s2) / den, (p_ji * s0 + p_ij * s2) / den)


def quadratic_residual(p_ij: float, v: VPair, s0: float, s2: float) -> float:
    """Value of the pair quadratic at p_ij; zero iff p_ij is an exact root."""
    b = s0 * s0 - s2 * s2
    return (
        v.v_ji * s2 - v.v_ij * s0 + b * p_ij + (v.v_ij * s2 - v.v_ji * s0) * p_ij * p_ij
    )


def delta_lower_bound(s0: float, s2: float, p_max: float) -> float:
    """Population lower bound on the quadratic discriminant:
    (s0^2 - s2^2)^2 (1 - p_max)^2 / (1 + p_max^2)."""
    if not (s0 > s2):
        raise ParameterError(f"need s0 > s2, got s0={s0}, s2={s2}")
    if not (0.0 < p_max < 1.0):
        raise ParameterError(f"need 0 < p_max < 1, got {p_max}")
    b = s0 * s0 - s2 * s2
    return b * b * (1.0 - p_max) ** 2 / (1.0 + p_max * p_max)


def discriminant(v: VPair, s0: float, s2: float) -> float:
    b = s0 * s0 - s2 * s2
    return b * b - 4.0 * (v.v_ji * s2 - v.v_ij * s0) * (v.v_ij * s2 - v.v_ji * s0)


def write_weights(est: WeightEstimate, path, flags_path=None) -> None:
    """Weight matrix in the graph edge-list format plus an optional flag CSV."""
    n = est.p_hat.shape[0]
    with open(path, "w") as fh:
        fh.write(f"# estimated weights\nn={n}\n")
        for i in range(n):
            for j in range(n):
                if i != j and est.p_hat[i, j] > 0:
                    fh.write(f"{i} {j} {float(est.p_hat[i, j])!r}\n")
    if flags_path is not None:
        with open(flags_path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["i", "j", "flag"])
            for (i, j), flag in sorted(est.flags.items()):
                writer.writerow([i, j, flag])
