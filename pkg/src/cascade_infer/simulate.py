"""Discrete-time SIR independent-cascade simulation and observation views.

One cascade: a uniformly random source is infected at time t0; an infected
node gets exactly one chance, at the next time step, to infect each
currently susceptible out-neighbor (success probability = edge weight),
then is removed. The process stops when a step produces no new infection.
Reported times add an i.i.d. integer delay to each true infection time.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AccessError, ParameterError, ParseError
from .graph import WeightedDigraph
from .noise import NoiseModel, sample

NEVER = np.inf

NO_NOISE = "no_noise"
LIMITED_NOISE = "limited_noise"
EXTREME_NOISE = "extreme_noise"
MODES = (NO_NOISE, LIMITED_NOISE, EXTREME_NOISE)

DEFAULT_CHUNK = 4096


@dataclass(frozen=True)
class CascadeRecord:
    """One realization: true times, noisy times, and infection statuses.

    Times are float arrays holding integers, with NEVER (= inf) for nodes
    that stayed susceptible.
    """

    source: int
    t0: int
    t_true: np.ndarray
    t_noisy: np.ndarray
    infected: np.ndarray


@dataclass(frozen=True)
class CascadeSet:
    """Column-oriented batch of M cascades on n nodes."""

    n: int
    t0: int
    sources: np.ndarray
    t_true: np.ndarray | None
    t_noisy: np.ndarray | None
    infected: np.ndarray
    provenance: tuple[str, str, int] | None = None

    @property
    def m(self) -> int:
        return len(self.sources)

    def record(self, m: int) -> CascadeRecord:
        if self.t_true is None or self.t_noisy is None:
            raise AccessError("record views need both time columns")
        return CascadeRecord(
            int(self.sources[m]), self.t0,
            self.t_true[m], self.t_noisy[m], self.infected[m],
        )


@dataclass(frozen=True)
class ObservationSet:
    """Firewall view of a CascadeSet exposing only what the mode permits."""

    mode: str
    cascades: CascadeSet

    @property
    def n(self) -> int:
        return self.cascades.n

    @property
    def m(self) -> int:
        return self.cascades.m

    @property
    def infected(self) -> np.ndarray:
        return self.cascades.infected

    @property
    def has_times(self) -> bool:
        return self.mode != EXTREME_NOISE

    @property
    def times(self) -> np.ndarray:
        """The time matrix this setting observes (true or noisy)."""
        if self.mode == NO_NOISE:
            return self.t_true
        if self.mode == LIMITED_NOISE:
            return self.t_noisy
        raise AccessError("extreme_noise observations carry no times")

    @property
    def t_true(self) -> np.ndarray:
        if self.mode != NO_NOISE:
            raise AccessError(f"t_true is not observable in {self.mode} mode")
        if self.cascades.t_true is None:
            raise AccessError("true times absent from this set")
        return self.cascades.t_true

    @property
    def t_noisy(self) -> np.ndarray:
        if self.mode != LIMITED_NOISE:
            raise AccessError(f"t_noisy is not observable in {self.mode} mode")
        if self.cascades.t_noisy is None:
            raise AccessError("noisy times absent from this set")
        return self.cascades.t_noisy


def restrict_observation(cs: CascadeSet | ObservationSet, mode: str) -> ObservationSet:
    """Restrict to an observation mode. Existing views can only be
    downgraded to extreme_noise, never re-widened."""
    if mode not in MODES:
        raise ParameterError(f"unknown observation mode {mode!r}")
    if isinstance(cs, ObservationSet):
        if mode not in (cs.mode, EXTREME_NOISE):
            raise AccessError(f"cannot widen {cs.mode} observations to {mode}")
        return ObservationSet(mode, cs.cascades)
    return ObservationSet(mode, cs)


def _simulate_rows(
    g: WeightedDigraph, noise: NoiseModel, count: int, t0: int, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Simulate `count` cascades drawing from one rng stream.

    Frontier-synchronous update: a susceptible node v with frontier parents
    U becomes infected with probability 1 - prod_{u in U} (1 - p_uv), which
    matches independent per-edge Bernoulli attempts.
    """
    n = g.n
    with np.errstate(divide="ignore"):
        log_miss = np.log1p(-g.weight_matrix)
    # weight 1.0 would put -inf in the matrix and 0 * -inf = nan in the
    # matmul; a huge finite value keeps the infection probability exactly 1
    log_miss[np.isinf(log_miss)] = -1e300
    sources = rng.integers(0, n, count)
    t_true = np.full((count, n), NEVER)
    rows = np.arange(count)
    t_true[rows, sources] = t0
    frontier = np.zeros((count, n), dtype=bool)
    frontier[rows, sources] = True
    active = rows
    t = t0
    while active.size:
        p_infect = -np.expm1(frontier[active] @ log_miss)
        new = (rng.random(p_infect.shape) < p_infect) & np.isinf(t_true[active])
        t += 1
        block = t_true[active]
        block[new] = t
        t_true[active] = block
        frontier[active] = new
        active = active[new.any(axis=1)]
    infected = np.isfinite(t_true)
    t_noisy = t_true.copy()
    t_noisy[infected] += sample(noise, rng, size=int(infected.sum()))
    return sources, t_true, t_noisy


def simulate_one(
    g: WeightedDigraph, noise: NoiseModel, t0: int, rng: np.random.Generator
) -> CascadeRecord:
    if t0 < 1:
        raise ParameterError(f"need t0 >= 1, got {t0}")
    sources, t_true, t_noisy = _simulate_rows(g, noise, 1, t0, rng)
    infected = np.isfinite(t_true[0])
    return CascadeRecord(int(sources[0]), t0, t_true[0], t_noisy[0], infected)


def chunk_rng(seed: int, chunk_index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(chunk_index,)))


def simulate_batch(
    g: WeightedDigraph,
    noise: NoiseModel,
    m: int,
    t0: int = 1,
    seed: int = 0,
    chunk_size: int = DEFAULT_CHUNK,
) -> CascadeSet:
    """Simulate M cascades deterministically.

    Records are produced in fixed chunks; chunk c draws from an rng derived
    from (seed, c), so the result is bit-identical however chunks are
    scheduled, and M=1 coincides with simulate_one under the chunk-0 rng.
    """
    if m < 1:
        raise ParameterError(f"need m >= 1, got {m}")
    if t0 < 1:
        raise ParameterError(f"need t0 >= 1, got {t0}")
    src_parts, tt_parts, tn_parts = [], [], []
    for c in range((m + chunk_size - 1) // chunk_size):
        count = min(chunk_size, m - c * chunk_size)
        sources, t_true, t_noisy = _simulate_rows(g, noise, count, t0, chunk_rng(seed, c))
        src_parts.append(sources)
        tt_parts.append(t_true)
        tn_parts.append(t_noisy)
    t_true = np.concatenate(tt_parts)
    return CascadeSet(
        n=g.n,
        t0=t0,
        sources=np.concatenate(src_parts),
        t_true=t_true,
        t_noisy=np.concatenate(tn_parts),
        infected=np.isfinite(t_true),
        provenance=(g.content_hash(), noise.spec, seed),
    )


def _fmt_time(val: float | None) -> str:
    if val is None:
        return "-"
    return "inf" if np.isinf(val) else str(int(val))


def write_cascades(obs: ObservationSet, path) -> None:
    """Tab-separated records: cascade_id, source, t0, then one
    "t_true|t_noisy|I" triple per node. Unobserved fields are "-", never-
    infected times are the literal "inf". The header declares the mode."""
    cs = obs.cascades
    keep_true = obs.mode == NO_NOISE
    keep_noisy = obs.mode == LIMITED_NOISE
    with open(path, "w") as fh:
        fh.write(f"#mode={obs.mode}\tn={cs.n}\tt0={cs.t0}\n")
        for m in range(cs.m):
            cols = [str(m), str(int(cs.sources[m])), str(cs.t0)]
            for i in range(cs.n):
                tt = _fmt_time(cs.t_true[m, i]) if keep_true else "-"
                tn = _fmt_time(cs.t_noisy[m, i]) if keep_noisy else "-"
                cols.append(f"{tt}|{tn}|{int(cs.infected[m, i])}")
            fh.write("\t".join(cols) + "\n")


def _parse_time(token: str, line_no: int) -> float:
    if token == "inf":
        return NEVER
    try:
        return float(int(token))
    except ValueError:
        raise ParseError(f"bad time field {token!r}", line_no) from None


def read_cascades(path) -> ObservationSet:
    mode = None
    n = t0 = None
    sources, t_true, t_noisy, infected = [], [], [], []
    with open(path) as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line:
                continue
            if line.startswith("#"):
                for token in line[1:].split("\t"):
                    key, _, val = token.partition("=")
                    if key == "mode":
                        mode = val
                    elif key == "n":
                        n = int(val)
                    elif key == "t0":
                        t0 = int(val)
                continue
            if mode is None or n is None or t0 is None:
                raise ParseError("missing #mode/n/t0 header before records", line_no)
            cols = line.split("\t")
            if len(cols) != 3 + n:
                raise ParseError(f"expected {3 + n} columns, got {len(cols)}", line_no)
            sources.append(int(cols[1]))
            row_t, row_n, row_i = [], [], []
            for triple in cols[3:]:
                parts = triple.split("|")
                if len(parts) != 3:
                    raise ParseError(f"bad triple {triple!r}", line_no)
                row_t.append(None if parts[0] == "-" else _parse_time(parts[0], line_no))
                row_n.append(None if parts[1] == "-" else _parse_time(parts[1], line_no))
                row_i.append(parts[2] == "1")
            t_true.append(row_t)
            t_noisy.append(row_n)
            infected.append(row_i)
    if mode not in MODES:
        raise ParseError(f"unknown or missing mode {mode!r} in header")
    has_true = mode == NO_NOISE
    has_noisy = mode == LIMITED_NOISE
    m_count = len(sources)
    cs = CascadeSet(
        n=n,
        t0=t0,
        sources=np.array(sources, dtype=np.int64),
        t_true=np.array(t_true, dtype=float).reshape(m_count, n) if has_true else None,
        t_noisy=np.array(t_noisy, dtype=float).reshape(m_count, n) if has_noisy else None,
        infected=np.array(infected, dtype=bool).reshape(m_count, n),
    )
    return ObservationSet(mode, cs)


def record_violations(rec: CascadeRecord, g: WeightedDigraph) -> list[str]:
    """Check the structural invariants of one record against its graph."""
    out = []
    n = g.n
    if rec.t_true[rec.source] != rec.t0:
        out.append("source time != t0")
    finite = np.isfinite(rec.t_true)
    if np.any(rec.t_true[finite] < rec.t0):
        out.append("finite time before t0")
    if not np.array_equal(rec.infected, finite):
        out.append("infected flag inconsistent with t_true")
    if not np.array_equal(finite, np.isfinite(rec.t_noisy)):
        out.append("t_noisy finiteness inconsistent with t_true")
    if np.any(rec.t_noisy[finite] < rec.t_true[finite]):
        out.append("noisy time before true time")
    for i in np.nonzero(finite)[0]:
        if i == rec.source:
            continue
        parents = [
            j for j in range(n)
            if finite[j] and g.weight(j, i) > 0 and rec.t_true[i] == rec.t_true[j] + 1
        ]
        if not parents:
            out.append(f"node {i} has no plausible infector")
    # connectivity of the infected set in the undirected skeleton
    infected_nodes = set(np.nonzero(finite)[0].tolist())
    seen = {rec.source}
    stack = [rec.source]
    skeleton = {frozenset(e) for e in g.undirected_edges()}
    while stack:
        u = stack.pop()
        for v in infected_nodes - seen:
            if frozenset((u, v)) in skeleton:
                seen.add(v)
                stack.append(v)
    if seen != infected_nodes:
        out.append("infected set not connected through the source")
    return out
