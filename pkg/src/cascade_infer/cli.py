"""Command-line entry point.

Subcommands: simulate, learn-structure, learn-weights, oracle, sample-size,
experiment. Exit codes: 0 success, 1 validation or usage error, 2 IO error.
"""

from __future__ import annotations

import argparse
import sys

from .errors import AccessError, ParameterError, ParseError, ResourceError, ValidationError
from .estimators import accumulate
from .experiment import parse_config, parse_graph_spec, run
from .noise import parse_noise_spec, s_table
from .oracle import enumerate_outcomes, limits
from .samplesize import (
    m_bounded_structure,
    m_bounded_weights,
    m_tree_structure,
    m_tree_weights,
)
from .simulate import (
    EXTREME_NOISE,
    LIMITED_NOISE,
    MODES,
    read_cascades,
    restrict_observation,
    simulate_batch,
    write_cascades,
)
from .structure import learn_bounded_degree, learn_tree, read_structure, write_structure
from .weights import pairwise_weights, tree_weights, write_weights


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; the contract here is exit 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        sys.exit(1)


def _build_parser() -> _Parser:
    parser = _Parser(prog="cascade-infer")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("simulate", help="simulate cascades and write them to a file")
    p.add_argument("--graph", required=True, help="file:<path>, tree:n=<N>, or bounded:n=<N>,d=<D>")
    p.add_argument("--noise", default="geometric:q=0.5")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--t0", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mode", choices=MODES, default=LIMITED_NOISE)
    p.add_argument("--out", required=True)
    p.add_argument("--p-min", type=float, default=0.2)
    p.add_argument("--p-max", type=float, default=0.8)

    p = sub.add_parser("learn-structure", help="recover undirected edges from cascades")
    p.add_argument("--cascades", required=True)
    p.add_argument("--algo", choices=("tree", "bounded"), default="tree")
    p.add_argument("--mode", choices=MODES, help="restrict the observation further")
    p.add_argument("--d", type=int, default=2, help="degree bound for --algo bounded")
    p.add_argument("--out", help="edge-list output; stdout when omitted")
    p.add_argument("--ambiguities", help="JSON-lines ambiguity log")

    p = sub.add_parser("learn-weights", help="recover directed edge weights from cascades")
    p.add_argument("--cascades", required=True)
    p.add_argument("--algo", choices=("tree", "pairwise"), default="pairwise")
    p.add_argument("--noise", required=True, help="the known noise law, e.g. geometric:q=0.5")
    p.add_argument("--structure", help="edge list from learn-structure (required for --algo tree)")
    p.add_argument("--out", required=True)
    p.add_argument("--flags", help="per-pair flag CSV")

    p = sub.add_parser("oracle", help="exact estimator limits by enumeration")
    p.add_argument("--graph", required=True)
    p.add_argument("--noise", default="geometric:q=0.5")
    p.add_argument("--t0", type=int, default=1)
    p.add_argument("--node-cap", type=int, default=7)
    p.add_argument("--out", help="CSV output; stdout when omitted")
    p.add_argument("--p-min", type=float, default=0.2)
    p.add_argument("--p-max", type=float, default=0.8)

    p = sub.add_parser("sample-size", help="evaluate the four cascade-count formulas")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--delta", type=float, default=0.1)
    p.add_argument("--eps", type=float, default=0.1)
    p.add_argument("--p-min", type=float, default=0.2)
    p.add_argument("--p-max", type=float, default=0.8)
    p.add_argument("--noise", default="geometric:q=0.5", help="source of s0 and s2")

    p = sub.add_parser("experiment", help="run a configured experiment grid")
    p.add_argument("--config", help="key=value config file")
    p.add_argument("overrides", nargs="*", help="key=value overrides")

    return parser


def _cmd_simulate(args) -> int:
    g = parse_graph_spec(args.graph, args.p_min, args.p_max, args.seed)
    noise = parse_noise_spec(args.noise)
    cascades = simulate_batch(g, noise, args.m, args.t0, seed=args.seed)
    write_cascades(restrict_observation(cascades, args.mode), args.out)
    return 0


def _cmd_learn_structure(args) -> int:
    obs = read_cascades(args.cascades)
    if args.mode:
        obs = restrict_observation(obs, args.mode)
    bank = accumulate(obs)
    if args.algo == "tree":
        result = learn_tree(bank.h_pair_matrix())
    else:
        result = learn_bounded_degree(bank, args.d)
    if args.out:
        write_structure(result, bank.n, args.out, args.ambiguities)
    else:
        sys.stdout.write(f"n={bank.n}\n")
        for i, j in sorted(result.edges):
            sys.stdout.write(f"{i} {j}\n")
    return 0


def _cmd_learn_weights(args) -> int:
    obs = read_cascades(args.cascades)
    if obs.mode == EXTREME_NOISE:
        raise ValidationError("weight learning needs reported times; got extreme_noise cascades")
    bank = accumulate(obs)
    sk = s_table(parse_noise_spec(args.noise))
    if args.algo == "tree":
        if not args.structure:
            raise ValidationError("--algo tree requires --structure")
        edges, _ = read_structure(args.structure)
        est = tree_weights(bank, edges, sk)
    else:
        est = pairwise_weights(bank, sk)
    write_weights(est, args.out, args.flags)
    return 0


def _cmd_oracle(args) -> int:
    g = parse_graph_spec(args.graph, args.p_min, args.p_max, seed=0)
    noise = parse_noise_spec(args.noise)
    sk = s_table(noise, k_max=max(2 + noise.support_width, g.n + 1))
    lim = limits(enumerate_outcomes(g, args.t0, args.node_cap), sk)
    lines = ["family,i,j,value"]
    for i in range(g.n):
        lines.append(f"e1,{i},,{lim.e1(i)!r}")
    for name, query in (
        ("h", lim.h_pair), ("f", lim.f_lt), ("g", lim.g_excl),
        ("h2", lim.h2), ("f2", lim.f2_lt),
    ):
        for i in range(g.n):
            for j in range(g.n):
                if i != j:
                    lines.append(f"{name},{i},{j},{query(i, j)!r}")
    for i in range(g.n):
        for j in range(g.n):
            if i != j:
                lines.append(f"v,{i},{j},{float(lim.v[i, j])!r}")
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_sample_size(args) -> int:
    sk = s_table(parse_noise_spec(args.noise))
    print(f"m_tree_structure={m_tree_structure(args.n, args.delta, args.p_min, args.p_max)}")
    print(
        "m_bounded_structure="
        f"{m_bounded_structure(args.n, args.d, args.delta, args.p_min, args.p_max)}"
    )
    print(
        "m_tree_weights="
        f"{m_tree_weights(args.n, args.eps, args.delta, sk.s0, sk.s2, args.p_max)}"
    )
    m = m_bounded_weights(
        args.n, args.d, args.eps, args.delta, args.p_min, args.p_max, sk.s0, sk.s2
    )
    print(f"m_bounded_weights={'not_applicable' if m is None else m}")
    return 0


def _cmd_experiment(args) -> int:
    overrides = {}
    for item in args.overrides:
        if "=" not in item:
            raise ValidationError(f"override {item!r} is not key=value")
        key, val = item.split("=", 1)
        overrides[key] = val
    cfg = parse_config(args.config, overrides)
    path = run(cfg)
    print(path)
    return 0


_COMMANDS = {
    "simulate": _cmd_simulate,
    "learn-structure": _cmd_learn_structure,
    "learn-weights": _cmd_learn_weights,
    "oracle": _cmd_oracle,
    "sample-size": _cmd_sample_size,
    "experiment": _cmd_experiment,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ParameterError, ValidationError, ParseError, AccessError, ResourceError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except OSError as exc:
        sys.stderr.write(f"io error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
