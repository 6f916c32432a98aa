"""Mergeable counter banks for the co-infection estimator families.

All counters are exact integers over the M cascades of an observation set:

  coinfect[i,j]      both i and j infected
  order_lt[i,j]      both infected and i reported strictly before j
  excl[i,j]          i infected, j not
  only_pair[i,j]     infected set is exactly {i, j}
  only_pair_lt[i,j]  exactly {i, j} and i reported strictly before j
  only_single[i]     infected set is exactly {i}

Reported-time counters exist only when the observation mode carries times.
Infection bitsets are retained row-packed for set co-infection queries.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import AccessError, ParameterError
from .simulate import ObservationSet

_WORD = 64


def _pack_rows(infected: np.ndarray) -> np.ndarray:
    """Pack a boolean (M, n) matrix into (M, ceil(n/64)) uint64 words."""
    m, n = infected.shape
    words = (n + _WORD - 1) // _WORD
    out = np.zeros((m, words), dtype=np.uint64)
    for w in range(words):
        cols = infected[:, w * _WORD:(w + 1) * _WORD]
        powers = np.left_shift(np.uint64(1), np.arange(cols.shape[1], dtype=np.uint64))
        out[:, w] = (cols.astype(np.uint64) * powers).sum(axis=1)
    return out


def _set_mask(n: int, nodes: Iterable[int]) -> np.ndarray:
    words = (n + _WORD - 1) // _WORD
    mask = np.zeros(words, dtype=np.uint64)
    for v in nodes:
        mask[v // _WORD] |= np.uint64(1) << np.uint64(v % _WORD)
    return mask


@dataclass
class EstimatorBank:
    n: int
    m: int
    coinfect: np.ndarray
    excl: np.ndarray
    only_pair: np.ndarray
    only_single: np.ndarray
    status_bits: np.ndarray
    order_lt: np.ndarray | None
    only_pair_lt: np.ndarray | None

    @property
    def has_times(self) -> bool:
        return self.order_lt is not None

    def _check_pair(self, i: int, j: int) -> None:
        if i == j:
            raise ParameterError(f"need i != j, got i=j={i}")

    def h_pair(self, i: int, j: int) -> float:
        self._check_pair(i, j)
        return self.coinfect[i, j] / self.m

    def f_lt(self, i: int, j: int) -> float:
        self._check_pair(i, j)
        if self.order_lt is None:
            raise AccessError("reported-order counters absent (extreme_noise input)")
        return self.order_lt[i, j] / self.m

    def g_excl(self, i: int, j: int) -> float:
        self._check_pair(i, j)
        return self.excl[i, j] / self.m

    def h2(self, i: int, j: int) -> float:
        self._check_pair(i, j)
        return self.only_pair[i, j] / self.m

    def f2_lt(self, i: int, j: int) -> float:
        self._check_pair(i, j)
        if self.only_pair_lt is None:
            raise AccessError("reported-order counters absent (extreme_noise input)")
        return self.only_pair_lt[i, j] / self.m

    def e1(self, i: int) -> float:
        return self.only_single[i] / self.m

    def h_set_count(self, i: int, s: Sequence[int]) -> int:
        """Cascades where i is infected and at least one node of s is."""
        nodes = list(s)
        if i in nodes:
            raise ParameterError(f"node {i} must not belong to its query set")
        if len(nodes) < 1:
            raise ParameterError("query set must be non-empty")
        i_mask = _set_mask(self.n, [i])
        s_mask = _set_mask(self.n, nodes)
        has_i = (self.status_bits & i_mask) != 0
        has_s = (self.status_bits & s_mask) != 0
        return int(np.count_nonzero(has_i.any(axis=1) & has_s.any(axis=1)))

    def h_set(self, i: int, s: Sequence[int]) -> float:
        return self.h_set_count(i, s) / self.m

    def h_pair_matrix(self) -> np.ndarray:
        """Symmetric fraction matrix with zero diagonal, for tree learning."""
        return self.coinfect / self.m

    def rows_with(self, i: int) -> np.ndarray:
        """Packed status rows of the cascades in which i was infected."""
        i_mask = _set_mask(self.n, [i])
        sel = (self.status_bits & i_mask != 0).any(axis=1)
        return self.status_bits[sel]

    def merge(self, other: "EstimatorBank") -> "EstimatorBank":
        """Counter-wise sum; equals a single pass over the concatenated records."""
        if self.n != other.n or self.has_times != other.has_times:
            raise ParameterError("banks disagree on node count or time availability")
        add = lambda a, b: None if a is None else a + b
        return EstimatorBank(
            n=self.n,
            m=self.m + other.m,
            coinfect=self.coinfect + other.coinfect,
            excl=self.excl + other.excl,
            only_pair=self.only_pair + other.only_pair,
            only_single=self.only_single + other.only_single,
            status_bits=np.concatenate([self.status_bits, other.status_bits]),
            order_lt=add(self.order_lt, other.order_lt),
            only_pair_lt=add(self.only_pair_lt, other.only_pair_lt),
        )


def accumulate(obs: ObservationSet) -> EstimatorBank:
    """Stream an observation set into a counter bank.

    Ties in reported times count toward neither order direction (the order
    estimators use strict inequality).
    """
    n = obs.n
    infected = obs.infected
    times = obs.times if obs.has_times else None
    coinfect = np.zeros((n, n), dtype=np.int64)
    excl = np.zeros((n, n), dtype=np.int64)
    only_pair = np.zeros((n, n), dtype=np.int64)
    only_single = np.zeros(n, dtype=np.int64)
    order_lt = np.zeros((n, n), dtype=np.int64) if times is not None else None
    only_pair_lt = np.zeros((n, n), dtype=np.int64) if times is not None else None

    chunk = max(1, 4_000_000 // (n * n))
    for lo in range(0, obs.m, chunk):
        inf_c = infected[lo:lo + chunk]
        inf_f = inf_c.astype(np.float64)
        both = (inf_f.T @ inf_f).astype(np.int64)
        np.fill_diagonal(both, 0)
        coinfect += both
        excl += (inf_f.T @ (1.0 - inf_f)).astype(np.int64)
        sizes = inf_c.sum(axis=1)
        only_single += inf_c[sizes == 1].sum(axis=0, dtype=np.int64)
        pair_rows = sizes == 2
        pair_f = inf_c[pair_rows].astype(np.float64)
        pairs = (pair_f.T @ pair_f).astype(np.int64)
        np.fill_diagonal(pairs, 0)
        only_pair += pairs
        if times is not None:
            t_c = times[lo:lo + chunk]
            lt = (t_c[:, :, None] < t_c[:, None, :]) & inf_c[:, None, :]
            order_lt += lt.sum(axis=0, dtype=np.int64)
            only_pair_lt += lt[pair_rows].sum(axis=0, dtype=np.int64)

    return EstimatorBank(
        n=n,
        m=obs.m,
        coinfect=coinfect,
        excl=excl,
        only_pair=only_pair,
        only_single=only_single,
        status_bits=_pack_rows(infected),
        order_lt=order_lt,
        only_pair_lt=only_pair_lt,
    )


def dump_csv(bank: EstimatorBank, path) -> None:
    """Debug dump: exact integer counters, one row per (counter, i, j)."""
    with open(path, "w", newline="") as fh:
        fh.write(f"# M={bank.m} n={bank.n}\n")
        writer = csv.writer(fh)
        writer.writerow(["counter", "i", "j", "count"])
        matrices = [("coinfect", bank.coinfect), ("excl", bank.excl),
                    ("only_pair", bank.only_pair)]
        if bank.has_times:
            matrices += [("order_lt", bank.order_lt), ("only_pair_lt", bank.only_pair_lt)]
        for name, mat in matrices:
            for i in range(bank.n):
                for j in range(bank.n):
                    if i != j and mat[i, j]:
                        writer.writerow([name, i, j, int(mat[i, j])])
        for i in range(bank.n):
            if bank.only_single[i]:
                writer.writerow(["only_single", i, "", int(bank.only_single[i])])
