"""Figure rendering (matplotlib, written to files) and emission of
self-contained gnuplot scripts that reproduce the same panels from the
delimited outputs.
"""
from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


class PlotError(ValueError):
    """Requested column missing from an output file."""


#: axis labels for known trajectory columns
_LABELS = {
    "b1_sq": r"$|b_1|^2$",
    "b2_sq": r"$|b_2|^2$",
    "cav_pop": "cavity population",
    "bs_sq": r"$|b_s|^2$",
    "ba_sq": r"$|b_a|^2$",
    "conc": "concurrence",
    "c1_paper": r"$C_1$ (sum of moduli)",
    "c1_trace": r"$C_1$ (trace coherence)",
    "conc_paper": "concurrence",
    "conc_trace": "concurrence (trace)",
    "rho11": r"$\rho_{11}$",
    "rho22": r"$\rho_{22}$",
    "rho33": r"$\rho_{33}$",
    "rho44": r"$\rho_{44}$",
    "rho23_abs": r"$|\rho_{23}|$",
}


def csv_columns(path: Path) -> list[str]:
    """Column names of a delimited output (skipping comment lines)."""
    for line in path.read_text().splitlines():
        if not line.startswith("#"):
            return line.split(",")
    raise PlotError(f"{path}: no header row found")


def load_csv(path: Path) -> dict[str, np.ndarray]:
    lines = path.read_text().splitlines()
    k = 0
    while k < len(lines) and lines[k].startswith("#"):
        k += 1
    names = lines[k].split(",")
    data = np.loadtxt(lines[k + 1:], delimiter=",", ndmin=2)
    return {name: data[:, i] for i, name in enumerate(names)}


def plot_trajectory(
    path: Path,
    t_over_trt: np.ndarray,
    curves: dict[str, np.ndarray],
    title: str,
    markers: dict[str, list[float]] | None = None,
    ylabel: str = "",
) -> Path:
    fig, ax = plt.subplots(figsize=(7.0, 4.0))
    for name, values in curves.items():
        ax.plot(t_over_trt, values, lw=1.0, label=_LABELS.get(name, name))
    if markers:
        for name, times in markers.items():
            for k, tm in enumerate(times):
                ax.axvline(tm, color="r", ls=":", lw=0.8,
                           label=name if k == 0 else None)
    ax.set_xlabel(r"$t / t_{\rm rt}$")
    if ylabel:
        ax.set_ylabel(ylabel)
    ax.set_title(title)
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_panels(
    path: Path,
    panels: list[dict],
    title: str,
) -> Path:
    """Stacked panels; each panel dict has t, curves, and optional ylabel."""
    fig, axes = plt.subplots(len(panels), 1, figsize=(7.0, 3.0 * len(panels)), squeeze=False)
    for ax, panel in zip(axes[:, 0], panels):
        for name, values in panel["curves"].items():
            ax.plot(panel["t"], values, lw=1.0, label=name)
        ax.set_xlabel(panel.get("xlabel", r"$t / t_{\rm rt}$"))
        ax.set_ylabel(panel.get("ylabel", ""))
        if panel.get("hline") is not None:
            ax.axhline(panel["hline"], color="k", lw=0.6)
        ax.legend(loc="best", fontsize=8)
    fig.suptitle(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_sweep(path: Path, x: np.ndarray, mean: np.ndarray, title: str) -> Path:
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot(x, mean, "o-", lw=1.0)
    ax.set_xlabel(r"$x / \lambda_a$")
    ax.set_ylabel(r"$\langle C \rangle$")
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_spectrum(path: Path, freq: np.ndarray, power: np.ndarray, title: str) -> Path:
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    positive = power > 0
    ax.semilogy(freq[positive], power[positive], lw=0.8)
    ax.set_xlabel(r"frequency ($\Omega_0$)")
    ax.set_ylabel("power")
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def emit_plot_script(
    script_path: Path,
    csv_path: Path,
    x_column: str,
    y_columns: list[str],
    run_id: str,
    title: str = "",
) -> Path:
    """Write a self-contained gnuplot script for one trajectory/sweep file.

    Column names are validated against the file header; unknown names
    are an error naming the column.
    """
    names = csv_columns(csv_path)
    for col in [x_column] + y_columns:
        if col not in names:
            raise PlotError(f"column {col!r} not present in {csv_path.name} (has {names})")
    xi = names.index(x_column) + 1  # gnuplot columns are 1-based
    plot_parts = []
    for col in y_columns:
        yi = names.index(col) + 1
        plot_parts.append(f"'{csv_path.name}' using {xi}:{yi} with lines title '{col}'")
    lines = [
        f"# run_id: {run_id}",
        "# self-contained gnuplot script; run from the directory holding the csv",
        "set datafile separator ','",
        "set datafile commentschars '#'",
        f"set xlabel '{x_column}'",
        f"set title '{title}'" if title else "unset title",
        "set key outside",
        "set terminal pngcairo size 900,540",
        f"set output '{script_path.stem}.png'",
        "plot " + ", \\\n     ".join(plot_parts),
    ]
    script_path.write_text("\n".join(lines) + "\n")
    return script_path
