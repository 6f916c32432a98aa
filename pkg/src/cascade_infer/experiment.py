"""End-to-end experiment pipelines: generate, simulate, learn, score.

Configs are flat key=value text files with command-line overrides, chosen
so experiment grids stay trivially scriptable. Metrics go to a schema=1
CSV whose primary content is byte-identical across reruns; wall times and
timestamps live in a sidecar log only.
"""

from __future__ import annotations

import csv
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields, replace
from pathlib import Path

import numpy as np

from .errors import ParameterError, ValidationError
from .estimators import accumulate
from .graph import WeightedDigraph, random_bounded_degree, random_tree, read_edge_list
from .noise import parse_noise_spec, s_table
from .samplesize import (
    m_bounded_structure,
    m_bounded_weights,
    m_tree_structure,
    m_tree_weights,
)
from .simulate import EXTREME_NOISE, MODES, restrict_observation, simulate_batch
from .structure import learn_bounded_degree, learn_tree, write_structure
from .weights import pairwise_weights, tree_weights, write_weights

STRUCTURE_ALGOS = ("tree-structure", "bounded-structure")
WEIGHT_ALGOS = ("tree-weights", "pairwise-weights")
ALGORITHMS = STRUCTURE_ALGOS + WEIGHT_ALGOS

METRICS_COLUMNS = [
    "trial", "m", "structure_exact", "edge_precision", "edge_recall",
    "weight_max_err", "weight_mean_err", "ambiguity_count",
]


@dataclass
class ExperimentConfig:
    graph: str = "tree:n=8"
    noise: str = "geometric:q=0.5"
    mode: str = "limited_noise"
    algorithm: str = "tree-structure"
    m: str = "auto"
    trials: int = 20
    seed: int = 0
    outdir: str = "experiment_out"
    p_min: float = 0.2
    p_max: float = 0.8
    delta: float = 0.1
    epsilon: float = 0.1
    t0: int = 1
    d: int = 0  # degree bound; 0 means "use the true graph's max degree"

    def validate(self) -> None:
        if self.trials < 1:
            raise ValidationError(f"trial count must be >= 1, got {self.trials}")
        if self.mode not in MODES:
            raise ValidationError(f"unknown mode {self.mode!r}")
        if self.algorithm not in ALGORITHMS:
            raise ValidationError(f"unknown algorithm {self.algorithm!r}")
        if self.algorithm in WEIGHT_ALGOS and self.mode == EXTREME_NOISE:
            raise ValidationError(
                "weight learning needs reported times; extreme_noise only carries statuses"
            )
        if self.m != "auto":
            if int(self.m) < 1:
                raise ValidationError(f"m must be >= 1 or 'auto', got {self.m}")

    def dump(self) -> str:
        return "\n".join(f"{f.name}={getattr(self, f.name)}" for f in fields(self))


def parse_config(path=None, overrides: dict[str, str] | None = None) -> ExperimentConfig:
    values: dict[str, str] = {}
    if path is not None:
        with open(path) as fh:
            for raw in fh:
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ValidationError(f"config line {line!r} is not key=value")
                key, val = line.split("=", 1)
                values[key.strip()] = val.strip()
    values.update(overrides or {})
    cfg = ExperimentConfig()
    known = {f.name for f in fields(ExperimentConfig)}
    for key, val in values.items():
        if key not in known:
            raise ValidationError(f"unknown config key {key!r}")
        current = getattr(cfg, key)
        if isinstance(current, bool):
            parsed = val.lower() in ("1", "true", "yes")
        elif isinstance(current, int):
            parsed = int(val)
        elif isinstance(current, float):
            parsed = float(val)
        else:
            parsed = val
        cfg = replace(cfg, **{key: parsed})
    cfg.validate()
    return cfg


def parse_graph_spec(spec: str, p_min: float, p_max: float, seed: int) -> WeightedDigraph:
    """Graph sources: "file:<path>", "tree:n=<N>", or
    "bounded:n=<N>,d=<D>[,density=<q>]". A seed inside the spec pins the
    graph; otherwise the caller's (per-trial) seed is used."""
    kind, _, body = spec.partition(":")
    if kind == "file":
        return read_edge_list(body)
    params: dict[str, str] = {}
    if body:
        for item in body.split(","):
            key, _, val = item.partition("=")
            params[key] = val
    try:
        if kind == "tree":
            return random_tree(
                int(params["n"]), p_min, p_max, seed=int(params.get("seed", seed))
            )
        if kind == "bounded":
            return random_bounded_degree(
                int(params["n"]),
                int(params["d"]),
                float(params.get("density", 0.4)),
                p_min,
                p_max,
                seed=int(params.get("seed", seed)),
            )
    except KeyError as missing:
        raise ParameterError(f"graph spec {spec!r} is missing {missing}") from None
    raise ParameterError(f"unknown graph spec kind {kind!r}")


@dataclass
class TrialMetrics:
    trial: int
    m_used: int
    structure_exact: bool | None
    edge_precision: float | None
    edge_recall: float | None
    weight_max_err: float | None
    weight_mean_err: float | None
    ambiguity_count: int
    wall_time: float


def _derived_seed(seed: int, trial: int, stream: int) -> int:
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(trial, stream))
    return int(ss.generate_state(1, np.uint64)[0])


def _degree_bound(cfg: ExperimentConfig, g: WeightedDigraph) -> int:
    if cfg.d > 0:
        return cfg.d
    return max((g.undirected_degree(i) for i in range(g.n)), default=1) or 1


def resolve_m(cfg: ExperimentConfig, g: WeightedDigraph) -> tuple[int, str]:
    """Either the explicit cascade count or the matching theorem's value."""
    if cfg.m != "auto":
        return int(cfg.m), "fixed"
    noise = parse_noise_spec(cfg.noise)
    sk = s_table(noise)
    if cfg.algorithm == "tree-structure":
        return m_tree_structure(g.n, cfg.delta, cfg.p_min, cfg.p_max), "m_tree_structure"
    if cfg.algorithm == "bounded-structure":
        d = _degree_bound(cfg, g)
        return m_bounded_structure(g.n, d, cfg.delta, cfg.p_min, cfg.p_max), "m_bounded_structure"
    if cfg.algorithm == "tree-weights":
        return (
            m_tree_weights(g.n, cfg.epsilon, cfg.delta, sk.s0, sk.s2, cfg.p_max),
            "m_tree_weights",
        )
    d = _degree_bound(cfg, g)
    m = m_bounded_weights(g.n, d, cfg.epsilon, cfg.delta, cfg.p_min, cfg.p_max, sk.s0, sk.s2)
    if m is None:
        raise ValidationError(
            "auto sizing not applicable: the weight bound carries 1/s2^2 and "
            "this noise has s2 = 0; set m explicitly"
        )
    return m, "m_bounded_weights"


def _score_structure(learned: set, true_edges: set) -> tuple[bool, float, float]:
    hits = len(learned & true_edges)
    precision = hits / len(learned) if learned else 1.0
    recall = hits / len(true_edges) if true_edges else 1.0
    return learned == true_edges, precision, recall


def run_trial(cfg: ExperimentConfig, trial: int) -> TrialMetrics:
    start = time.perf_counter()
    g = parse_graph_spec(cfg.graph, cfg.p_min, cfg.p_max, _derived_seed(cfg.seed, trial, 0))
    noise = parse_noise_spec(cfg.noise)
    m_used, _ = resolve_m(cfg, g)
    cascades = simulate_batch(g, noise, m_used, cfg.t0, seed=_derived_seed(cfg.seed, trial, 1))
    obs = restrict_observation(cascades, cfg.mode)
    bank = accumulate(obs)
    outdir = Path(cfg.outdir)

    structure_exact = precision = recall = None
    weight_max = weight_mean = None
    ambiguity_count = 0
    true_edges = g.undirected_edges()

    if cfg.algorithm in STRUCTURE_ALGOS:
        if cfg.algorithm == "tree-structure":
            result = learn_tree(bank.h_pair_matrix())
        else:
            result = learn_bounded_degree(bank, _degree_bound(cfg, g))
        ambiguity_count = len(result.ambiguities)
        structure_exact, precision, recall = _score_structure(result.edges, true_edges)
        write_structure(result, g.n, outdir / f"learned_trial{trial}.edges")
    else:
        sk = s_table(noise)
        if cfg.algorithm == "tree-weights":
            result = learn_tree(bank.h_pair_matrix())
            structure_exact, precision, recall = _score_structure(result.edges, true_edges)
            est = tree_weights(bank, result.edges, sk)
        else:
            est = pairwise_weights(bank, sk)
        weight_max = est.max_error(g.weight_matrix)
        weight_mean = est.mean_error(g.weight_matrix)
        write_weights(est, outdir / f"learned_trial{trial}.weights")

    return TrialMetrics(
        trial=trial,
        m_used=m_used,
        structure_exact=structure_exact,
        edge_precision=precision,
        edge_recall=recall,
        weight_max_err=weight_max,
        weight_mean_err=weight_mean,
        ambiguity_count=ambiguity_count,
        wall_time=time.perf_counter() - start,
    )


def _fmt(val) -> str:
    if val is None:
        return ""
    if isinstance(val, bool):
        return str(int(val))
    if isinstance(val, float):
        return repr(val)
    return str(val)


def run(cfg: ExperimentConfig) -> Path:
    """Run all trials and write metrics.csv (primary, deterministic),
    learned graphs, effective_config.txt, and run.log (timings)."""
    cfg.validate()
    outdir = Path(cfg.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    g0 = parse_graph_spec(cfg.graph, cfg.p_min, cfg.p_max, _derived_seed(cfg.seed, 0, 0))
    _, formula = resolve_m(cfg, g0)

    threads = int(os.environ.get("CASCADE_INFER_THREADS", "1"))
    if threads > 1 and cfg.trials > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(run_trial, [cfg] * cfg.trials, range(cfg.trials)))
    else:
        rows = [run_trial(cfg, t) for t in range(cfg.trials)]
    rows.sort(key=lambda r: r.trial)

    metrics_path = outdir / "metrics.csv"
    with open(metrics_path, "w", newline="") as fh:
        fh.write("#schema=1\n")
        fh.write(f"#algorithm={cfg.algorithm}\n")
        fh.write(f"#m_formula={formula}\n")
        fh.write(f"#graph={cfg.graph}\n#noise={cfg.noise}\n#mode={cfg.mode}\n#seed={cfg.seed}\n")
        writer = csv.writer(fh)
        writer.writerow(METRICS_COLUMNS)
        for r in rows:
            writer.writerow([
                r.trial, r.m_used, _fmt(r.structure_exact), _fmt(r.edge_precision),
                _fmt(r.edge_recall), _fmt(r.weight_max_err), _fmt(r.weight_mean_err),
                r.ambiguity_count,
            ])
        agg = lambda vals: _fmt(float(np.mean(vals))) if vals else ""
        writer.writerow([
            "summary",
            rows[0].m_used,
            agg([r.structure_exact for r in rows if r.structure_exact is not None]),
            agg([r.edge_precision for r in rows if r.edge_precision is not None]),
            agg([r.edge_recall for r in rows if r.edge_recall is not None]),
            agg([r.weight_max_err for r in rows if r.weight_max_err is not None]),
            agg([r.weight_mean_err for r in rows if r.weight_mean_err is not None]),
            sum(r.ambiguity_count for r in rows),
        ])

    (outdir / "effective_config.txt").write_text(cfg.dump() + "\n")
    with open(outdir / "run.log", "a") as fh:
        fh.write(f"finished {time.strftime('%Y-%m-%dT%H:%M:%S')} ")
        fh.write(f"trials={cfg.trials} wall={sum(r.wall_time for r in rows):.3f}s\n")
    return metrics_path
