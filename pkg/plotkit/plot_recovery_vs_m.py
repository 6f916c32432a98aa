#!/usr/bin/env python3
"""Structure recovery rate vs cascade count.

Each input CSV is one experiment at one M; the recovery rate is the mean
of the structure_exact column. Usage:

    python plot_recovery_vs_m.py out.png metrics1.csv metrics2.csv ...
"""

from __future__ import annotations

import statistics
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from metrics_frame import SchemaError, read_metrics
from plot_error_vs_m import STYLE, _save


def recovery_points(paths) -> list[tuple[int, float]]:
    points = []
    for path in paths:
        frame = read_metrics(path)
        points.append((frame.m, statistics.mean(frame.float_column("structure_exact"))))
    points.sort()
    return points


def render(paths, out_path) -> list[tuple[int, float]]:
    if not paths:
        raise SchemaError("no input CSVs given")
    points = recovery_points(paths)
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        ax.plot([m for m, _ in points], [r for _, r in points], "o-")
        ax.set_xscale("log")
        ax.set_ylim(-0.05, 1.05)
        ax.set_xlabel("cascades M")
        ax.set_ylabel("exact recovery rate")
        ax.set_title("structure recovery vs M")
        ax.grid(True, alpha=0.3)
        _save(fig, out_path)
    return points


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    if len(argv) < 2:
        print(__doc__, file=sys.stderr)
        return 1
    try:
        points = render(argv[1:], argv[0])
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return 1
    for m, rate in points:
        print(f"m={m} recovery={rate:.3f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
