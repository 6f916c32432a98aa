"""Theorem-prescribed cascade counts for sizing experiments.

Intermediate arithmetic is double precision; the ceiling is applied once
at the end. These numbers steer experiment sizes, they are not
load-bearing for correctness.
"""

from __future__ import annotations

import math

from .errors import ParameterError


def _check_common(n: int, delta: float, p_min: float, p_max: float) -> None:
    if n < 2:
        raise ParameterError(f"need N >= 2, got {n}")
    if not (0.0 < delta < 1.0):
        raise ParameterError(f"need 0 < delta < 1, got {delta}")
    if not (0.0 < p_min <= p_max < 1.0):
        raise ParameterError(f"need 0 < p_min <= p_max < 1, got [{p_min}, {p_max}]")


def m_tree_structure(n: int, delta: float, p_min: float, p_max: float) -> int:
    """Cascades sufficient to recover a bidirectional tree's structure from
    infection statuses with probability 1 - delta."""
    _check_common(n, delta, p_min, p_max)
    return math.ceil(
        n * (math.log(1.0 / delta) + 2.0 * math.log(n)) / (p_min * (1.0 - p_max))
    )


def m_bounded_structure(n: int, d: int, delta: float, p_min: float, p_max: float) -> int:
    """Cascades sufficient to recover a degree-<=d graph's structure from
    infection statuses with probability 1 - delta."""
    _check_common(n, delta, p_min, p_max)
    if d < 1:
        raise ParameterError(f"need d >= 1, got {d}")
    numerator = (d + 2) * n * math.log(n) + n * math.log(d / delta)
    return math.ceil(numerator / (p_min * (1.0 - p_max) ** (2 * (d - 1))))


def m_tree_weights(
    n: int, eps: float, delta: float, s0: float, s2: float, p_max: float
) -> int:
    """Cascades sufficient to learn every tree weight to precision eps with
    probability 1 - delta (union bound over all directed edges)."""
    _check_common(n, delta, p_max, p_max)
    if eps <= 0.0:
        raise ParameterError(f"need eps > 0, got {eps}")
    if not (s0 > s2 >= 0.0):
        raise ParameterError(f"need s0 > s2 >= 0, got s0={s0}, s2={s2}")
    gap = s0 * s0 - s2 * s2
    factor = ((gap + s0 + s2) * p_max + s0 + s2) ** 2 / gap**2
    return math.ceil(n * n / eps**2 * math.log(12.0 * n * n / delta) * factor)


def m_bounded_weights(
    n: int,
    d: int,
    eps: float,
    delta: float,
    p_min: float,
    p_max: float,
    s0: float,
    s2: float,
) -> int | None:
    """Cascades sufficient to learn every weight of a degree-<=d graph to
    precision eps with probability 1 - delta.

    Returns None when s2 = 0: the bound carries 1/s2^2 and is then not
    applicable (the weight solvers themselves remain defined)."""
    _check_common(n, delta, p_min, p_max)
    if d < 1:
        raise ParameterError(f"need d >= 1, got {d}")
    if eps <= 0.0:
        raise ParameterError(f"need eps > 0, got {eps}")
    if not (s0 > s2 >= 0.0):
        raise ParameterError(f"need s0 > s2 >= 0, got s0={s0}, s2={s2}")
    if s2 == 0.0:
        return None
    gap = s0 * s0 - s2 * s2
    lead = 1152.0 * math.exp(4.0 * p_max * (d + 1)) / (p_min**2 * s2**2 * gap**4)
    return math.ceil(lead * n * n / eps**2 * math.log(9.0 * n * n / delta))
