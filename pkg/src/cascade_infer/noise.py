"""Integer reporting-noise distributions and order-flip probability tables.

The observation model adds an i.i.d. delay from a known distribution to
every true infection time. Everything downstream consumes the noise only
through the table s_k = P(n_j - n_i >= k) for two independent draws.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import ParameterError, ValidationError

PMF_SUM_TOL = 1e-9
DEFAULT_TAIL_EPS = 1e-12


@dataclass(frozen=True)
class NoiseModel:
    """Finite-support delay distribution on non-negative integers.

    ``tail_mass_bound`` is the residual probability removed when an
    unbounded law (geometric) was truncated; zero for exact pmfs.
    """

    delays: np.ndarray
    probs: np.ndarray
    tail_mass_bound: float
    spec: str

    @cached_property
    def _cdf(self) -> np.ndarray:
        c = np.cumsum(self.probs)
        c[-1] = 1.0
        return c

    @property
    def support_width(self) -> int:
        return int(self.delays[-1] - self.delays[0])

    @property
    def mean(self) -> float:
        return float(np.dot(self.delays, self.probs))

    def pmf(self, t: int) -> float:
        idx = np.searchsorted(self.delays, t)
        if idx < len(self.delays) and self.delays[idx] == t:
            return float(self.probs[idx])
        return 0.0


def from_pmf(table: dict[int, float], tail_mass_bound: float = 0.0) -> NoiseModel:
    """Build a model from an explicit delay -> probability table.

    The table must sum to 1 within 1e-9; small deviations are renormalized
    away, larger ones are rejected.
    """
    if not table:
        raise ParameterError("empty pmf table")
    for k, v in table.items():
        if int(k) != k or k < 0:
            raise ParameterError(f"delay {k} is not a non-negative integer")
        if v < 0:
            raise ParameterError(f"probability {v} for delay {k} is negative")
    total = math.fsum(table.values())
    if abs(total - 1.0) > PMF_SUM_TOL:
        raise ValidationError(f"pmf sums to {total}, deviates from 1 by > {PMF_SUM_TOL}")
    delays = np.array(sorted(k for k in table), dtype=np.int64)
    probs = np.array([table[int(k)] for k in delays]) / total
    spec = "pmf:" + ",".join(f"{int(k)}={table[int(k)]!r}" for k in delays)
    return NoiseModel(delays, probs, tail_mass_bound, spec)


def geometric(q: float, tail_eps: float = DEFAULT_TAIL_EPS) -> NoiseModel:
    """Geometric delays pmf(t) = q(1-q)^t, truncated to tail mass <= tail_eps.

    Truncation keeps t = 0..K for the smallest K with (1-q)^(K+1) <= tail_eps,
    then renormalizes.
    """
    if not (0.0 < q < 1.0):
        raise ParameterError(f"need 0 < q < 1, got {q}")
    if not (0.0 < tail_eps < 1.0):
        raise ParameterError(f"need 0 < tail_eps < 1, got {tail_eps}")
    k = max(0, math.ceil(math.log(tail_eps) / math.log(1.0 - q)) - 1)
    while (1.0 - q) ** (k + 1) > tail_eps:
        k += 1
    delays = np.arange(k + 1, dtype=np.int64)
    probs = q * (1.0 - q) ** delays.astype(float)
    residual = (1.0 - q) ** (k + 1)
    probs /= probs.sum()
    return NoiseModel(delays, probs, residual, f"geometric:q={q!r}")


def parse_noise_spec(spec: str) -> NoiseModel:
    """Parse "geometric:q=<float>" or "pmf:<delay>=<prob>,..." strings."""
    kind, _, body = spec.partition(":")
    if kind == "geometric":
        key, _, val = body.partition("=")
        if key != "q" or not val:
            raise ParameterError(f"bad geometric spec {spec!r}")
        return geometric(float(val))
    if kind == "pmf":
        table = {}
        try:
            for item in body.split(","):
                k, _, v = item.partition("=")
                table[int(k)] = float(v)
        except ValueError:
            raise ParameterError(f"bad pmf spec {spec!r}") from None
        return from_pmf(table)
    raise ParameterError(f"unknown noise spec kind {kind!r}")


def sample(m: NoiseModel, rng: np.random.Generator, size=None):
    """Draw delays by inverse cdf; scalar when size is None."""
    u = rng.random(size)
    idx = np.searchsorted(m._cdf, u, side="right")
    out = m.delays[idx]
    return int(out) if size is None else out


@dataclass(frozen=True)
class SkTable:
    """s_k = P(n_j - n_i >= k) for k in [k_min, k_max], non-increasing in k."""

    k_min: int
    k_max: int
    values: np.ndarray

    def s(self, k: int) -> float:
        if not (self.k_min <= k <= self.k_max):
            raise ParameterError(f"k={k} outside table range [{self.k_min}, {self.k_max}]")
        return float(self.values[k - self.k_min])

    def covers(self, k_lo: int, k_hi: int) -> bool:
        return self.k_min <= k_lo and k_hi <= self.k_max

    @property
    def s0(self) -> float:
        return self.s(0)

    @property
    def s2(self) -> float:
        return self.s(2)


def s_table(m: NoiseModel, k_max: int | None = None) -> SkTable:
    """Exact double summation of P(n_j - n_i >= k) over the support.

    Default half-width is 2 + support width; only s_0 and s_2 feed the
    weight solvers, the rest serves exact-limit lookups.
    """
    if k_max is None:
        k_max = 2 + m.support_width
    if k_max < 2:
        raise ParameterError(f"need k_max >= 2, got {k_max}")
    # aggregate P(n_j - n_i = diff), then take suffix sums
    diff = m.delays[None, :] - m.delays[:, None]
    w = m.probs[:, None] * m.probs[None, :]
    lo, hi = int(diff.min()), int(diff.max())
    mass = np.zeros(hi - lo + 1)
    np.add.at(mass, (diff - lo).ravel(), w.ravel())
    ks = np.arange(-k_max, k_max + 1)
    values = np.empty(len(ks))
    suffix = np.concatenate([np.cumsum(mass[::-1])[::-1], [0.0]])
    for pos, k in enumerate(ks):
        if k <= lo:
            values[pos] = 1.0
        elif k > hi:
            values[pos] = 0.0
        else:
            values[pos] = suffix[k - lo]
    return SkTable(-k_max, k_max, values)
