"""Render CSV tables and figures summarising a tower verification run.

Everything certified elsewhere stays exact; the floats below exist only
so matplotlib can draw them.
"""

from __future__ import annotations

import csv
from fractions import Fraction
from pathlib import Path

from .tower import Tower, TowerParams, decimal_approx
from .verifier import choose_threshold, trace_growth


def _figure_modules():
    import matplotlib

    matplotlib.use("Agg")
    from matplotlib import pyplot as plt

    return plt


def write_report(out_dir, params: TowerParams | None = None, n: int = 2,
                 stages: int = 8, depths=(10, 20, 30, 40)) -> list[Path]:
    """Write the report files and return their paths.

    Produces three CSV tables (series enclosures per depth, trace
    growth, per-stage capacity margins against the threshold) and a PNG
    figure next to each one.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    tower = Tower(params)
    params = tower.params
    plt = _figure_modules()
    written: list[Path] = []

    # --- series enclosure across truncation depths -----------------------
    enclosures = [(depth, tower.series_enclosure(depth)) for depth in sorted(set(depths))]
    path = out / "series_enclosure.csv"
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["depth", "lo", "hi", "width"])
        for depth, interval in enclosures:
            writer.writerow([depth, decimal_approx(interval.lo, 18),
                             decimal_approx(interval.hi, 18),
                             decimal_approx(interval.width, 24)])
    written.append(path)

    fig, ax = plt.subplots(figsize=(6, 4))
    ax.semilogy([d for d, _ in enclosures],
                [max(float(interval.width), 1e-300) for _, interval in enclosures],
                marker="o")
    ax.set_xlabel("truncation depth")
    ax.set_ylabel("enclosure width")
    ax.set_title("Series enclosure width vs. depth")
    ax.grid(True, which="both", alpha=0.3)
    fig_path = out / "series_enclosure.png"
    fig.savefig(fig_path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    written.append(fig_path)

    # --- trace growth -----------------------------------------------------
    reports = {mode: trace_growth(params, mode, stages) for mode in ("simple", "nonsimple")}
    path = out / "trace_growth.csv"
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["count", "simple", "nonsimple"])
        for idx in range(stages):
            row = [reports["simple"].entries[idx][0]]
            for mode in ("simple", "nonsimple"):
                count, coefficient = reports[mode].entries[idx]
                assert count == row[0]
                row.append(coefficient)
            writer.writerow(row)
    written.append(path)

    fig, ax = plt.subplots(figsize=(6, 4))
    for mode, marker in (("simple", "o"), ("nonsimple", "x")):
        entries = reports[mode].entries
        ax.plot([count for count, _ in entries], [coeff for _, coeff in entries],
                marker=marker, label=mode)
    ax.set_xlabel("copies of the unit")
    ax.set_ylabel("trace coefficient (units of the single-stage trace)")
    ax.set_title("Linear trace growth")
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig_path = out / "trace_growth.png"
    fig.savefig(fig_path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    written.append(fig_path)

    # --- stage capacity margins -------------------------------------------
    threshold, bound = choose_threshold(n, tower.series_enclosure())
    path = out / "stage_margins.csv"
    rows = []
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["target", "source", "scale", "capacity",
                         "normalized_capacity", "threshold"])
        for target in range(1, stages + 1):
            multiplicity = tower.unit_multiplicity(target)
            for source in range(1, target + 1):
                capacity = tower.trivial_copy_capacity(target, source, n)
                normalized = Fraction(capacity, multiplicity)
                writer.writerow([target, source, n, capacity,
                                 decimal_approx(normalized, 9), threshold])
                rows.append((target, source, float(normalized)))
    written.append(path)

    fig, ax = plt.subplots(figsize=(6, 4))
    sources = sorted({source for _, source, _ in rows})
    for source in sources:
        series = [(target, value) for target, src, value in rows if src == source]
        ax.plot([t for t, _ in series], [v for _, v in series],
                marker=".", label=f"source {source}")
    ax.axhline(float(bound), linestyle="--", color="black", label="uniform bound")
    ax.axhline(threshold, linestyle=":", color="red", label="threshold")
    ax.set_xlabel("target stage")
    ax.set_ylabel(f"capacity at scale {n} / unit multiplicity")
    ax.set_title("Per-stage capacity margins")
    ax.legend(fontsize="small", ncol=2)
    ax.grid(True, alpha=0.3)
    fig_path = out / "stage_margins.png"
    fig.savefig(fig_path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    written.append(fig_path)

    return written
