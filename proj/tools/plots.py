#!/usr/bin/env python3
"""Figures from the harness CSVs.

    plots.py --kind bre|heatmap|regret|suboptimal|indices --in a.csv [b.csv ...] --out fig.png
"""

import argparse
import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import pandas as pd  # noqa: E402

# kind -> (x column, y column)
SERIES = {
    "bre": (("step",), "bre"),
    "suboptimal": (("step",), "pct_suboptimal"),
    "regret": (("episode",), "cumulative_regret"),
}


class PlotError(Exception):
    pass


def read(path, needed):
    try:
        df = pd.read_csv(path)
    except pd.errors.EmptyDataError:
        raise PlotError(f"{path}: empty CSV")
    except pd.errors.ParserError as e:
        raise PlotError(f"{path}: {e}")
    if df.empty:
        raise PlotError(f"{path}: no data rows")
    for col in needed:
        if col not in df.columns:
            raise PlotError(f"{path}: missing column '{col}'")
    return df


def label_for(path, labels, i):
    if labels and i < len(labels):
        return labels[i]
    p = Path(path)
    return f"{p.parent.name}/{p.stem}" if p.parent.name else p.stem


def series(kind, paths, labels):
    xcols, ycol = SERIES[kind]
    frames = [read(p, ()) for p in paths]
    fig, ax = plt.subplots(figsize=(6, 4))
    for i, (p, df) in enumerate(zip(paths, frames)):
        x = next((c for c in xcols if c in df.columns), None)
        if x is None:
            raise PlotError(f"{p}: missing column '{xcols[0]}'")
        if ycol not in df.columns:
            raise PlotError(f"{p}: missing column '{ycol}'")
        ax.plot(df[x], df[ycol], label=label_for(p, labels, i))
    ax.set_xlabel(xcols[0])
    ax.set_ylabel(ycol)
    ax.legend()
    return fig


def heatmap(paths, labels, delta):
    if len(paths) != 1:
        raise PlotError("heatmap: exactly one convergence map CSV expected")
    df = read(paths[0], ("x_axis", "y_axis", "delta", "fraction_converged"))
    deltas = sorted(df["delta"].unique())
    if delta is None:
        if len(deltas) != 1:
            raise PlotError(f"heatmap: several deltas {deltas}; pick one with --delta")
        delta = deltas[0]
    sel = df[(df["delta"] - delta).abs() < 1e-12]
    if sel.empty:
        raise PlotError(f"heatmap: no rows with delta {delta}")
    grid = sel.pivot(index="y_axis", columns="x_axis", values="fraction_converged").sort_index()
    xname = sel["x_name"].iloc[0] if "x_name" in sel.columns else "x"
    yname = sel["y_name"].iloc[0] if "y_name" in sel.columns else "y"
    fig, ax = plt.subplots(figsize=(6, 5))
    im = ax.imshow(grid.values, origin="lower", cmap="coolwarm", vmin=0.0, vmax=1.0, aspect="auto")
    ax.set_xticks(range(len(grid.columns)), [f"{v:g}" for v in grid.columns])
    ax.set_yticks(range(len(grid.index)), [f"{v:g}" for v in grid.index])
    ax.set_xlabel(xname)
    ax.set_ylabel(yname)
    ax.set_title(labels[0] if labels else f"fraction converged, delta = {delta:g}")
    fig.colorbar(im, ax=ax)
    return fig


def indices(paths, labels):
    frames = [read(p, ("table", "state", "index")) for p in paths]
    fig, ax = plt.subplots(figsize=(6, 4))
    for i, (p, df) in enumerate(zip(paths, frames)):
        x = "step" if "step" in df.columns else "episode"
        if x not in df.columns:
            raise PlotError(f"{p}: missing column 'step'")
        base = label_for(p, labels, i)
        for (table, state), g in df.groupby(["table", "state"]):
            ax.plot(g[x], g["index"], label=f"{base} t{table} s{state}")
        ax.set_xlabel(x)
    ax.set_ylabel("index")
    ax.legend(fontsize="small", ncol=2)
    return fig


def render(kind, paths, out, labels=None, delta=None):
    if kind in SERIES:
        fig = series(kind, paths, labels)
    elif kind == "heatmap":
        fig = heatmap(paths, labels, delta)
    elif kind == "indices":
        fig = indices(paths, labels)
    else:
        raise PlotError(f"unknown kind '{kind}'")
    out = Path(out)
    out.parent.mkdir(parents=True, exist_ok=True)
    meta = {"Software": None} if out.suffix.lower() == ".png" else None
    fig.tight_layout()
    fig.savefig(out, metadata=meta)
    plt.close(fig)


def main(argv=None):
    ap = argparse.ArgumentParser(prog="plots")
    ap.add_argument("--kind", required=True, choices=["bre", "heatmap", "regret", "suboptimal", "indices"])
    ap.add_argument("--in", dest="inputs", nargs="+", required=True)
    ap.add_argument("--out", required=True)
    ap.add_argument("--label", action="append", default=[], help="series label, once per input")
    ap.add_argument("--delta", type=float, help="heatmap: which delta to draw")
    args = ap.parse_args(argv)
    try:
        render(args.kind, args.inputs, args.out, args.label, args.delta)
    except PlotError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
