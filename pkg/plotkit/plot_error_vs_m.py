#!/usr/bin/env python3
"""Weight error vs cascade count, log-log, with the fitted slope annotated.

Each input CSV is one experiment at one M; the script plots the median of
the weight_max_err column against M and fits a line in log10 space (the
theory predicts error ~ 1/sqrt(M), slope -1/2). Usage:

    python plot_error_vs_m.py out.png metrics1.csv metrics2.csv ...
"""

from __future__ import annotations

import statistics
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from metrics_frame import SchemaError, read_metrics

STYLE = {
    "figure.figsize": (6.0, 4.0),
    "figure.dpi": 100,
    "font.size": 10,
    "svg.hashsalt": "cascade-infer",  # stable SVG element ids across runs
}


def median_error_points(paths) -> list[tuple[int, float]]:
    """(M, median weight_max_err) per input file, sorted by M."""
    points = []
    for path in paths:
        frame = read_metrics(path)
        points.append((frame.m, statistics.median(frame.float_column("weight_max_err"))))
    points.sort()
    return points


def fit_slope(points) -> float | None:
    """Least-squares slope in log10-log10 space; None below two points."""
    if len(points) < 2:
        return None
    import numpy as np

    xs = np.log10([m for m, _ in points])
    ys = np.log10([e for _, e in points])
    return float(np.polyfit(xs, ys, 1)[0])


def render(paths, out_path) -> float | None:
    if not paths:
        raise SchemaError("no input CSVs given")
    points = median_error_points(paths)
    slope = fit_slope(points)
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        ms = [m for m, _ in points]
        errs = [e for _, e in points]
        if slope is None:
            print("warning: single point, skipping the slope fit", file=sys.stderr)
            ax.scatter(ms, errs)
            ax.set_title("weight error (1 point, no fit)")
        else:
            ax.loglog(ms, errs, "o-")
            ax.set_title(f"weight error vs M (fitted slope {slope:.3f})")
        ax.set_xscale("log")
        ax.set_yscale("log")
        ax.set_xlabel("cascades M")
        ax.set_ylabel("median max weight error")
        ax.grid(True, which="both", alpha=0.3)
        _save(fig, out_path)
    return slope


def _save(fig, out_path) -> None:
    out_path = str(out_path)
    # SVG embeds a creation date by default; drop it so identical inputs
    # give identical bytes
    metadata = {"Date": None} if out_path.endswith(".svg") else None
    fig.savefig(out_path, metadata=metadata)
    plt.close(fig)


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    if len(argv) < 2:
        print(__doc__, file=sys.stderr)
        return 1
    try:
        slope = render(argv[1:], argv[0])
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return 1
    if slope is not None:
        print(f"slope={slope:.4f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
