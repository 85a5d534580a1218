"""Render one figure per experiment next to its table output.

The CSV/JSON tables remain the canonical artifacts; figures are a quick
visual check, written as PNG with the same stem as the table.
"""

from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .tables import ResultTable


def _col(table: ResultTable, name: str) -> list:
    idx = table.columns.index(name)
    return [row[idx] for row in table.rows]


def _save(fig, path: Path) -> Path:
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return path


def render_figures(experiment: str, tables: dict[str, ResultTable],
                   out_dir) -> list[Path]:
    out_dir = Path(out_dir)
    renderer = _RENDERERS.get(experiment)
    if renderer is None:
        return []
    return [p for p in renderer(tables, out_dir) if p is not None]


def _plot_n3_sweep(tables, out_dir):
    t = tables["n3-sweep"]
    betas, ns, na = _col(t, "beta"), _col(t, "norm_S"), _col(t, "norm_A")
    ratio = _col(t, "ratio")
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 3.4))
    ax1.loglog(betas, ns, label="|S|")
    ax1.loglog(betas, na, label="|A|")
    ax1.set_xlabel("coldness beta")
    ax1.set_ylabel("Frobenius norm")
    ax1.legend()
    ax2.semilogx(betas, ratio)
    ax2.set_xlabel("coldness beta")
    ax2.set_ylabel("|A| / |S|")
    fig.suptitle("flow Jacobian decomposition vs coldness")
    return [_save(fig, out_dir / "n3-sweep.png")]


def _plot_n3_trajectories(tables, out_dir):
    t = tables["n3-trajectories"]
    modes = _col(t, "mode")
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 3.4))
    for mode, style in (("constrained", "-"), ("unconstrained", "--")):
        sel = [i for i, m in enumerate(modes) if m == mode]
        if not sel:
            continue
        tau = [t.rows[i][0] for i in sel]
        for name, ax in (("theta_1", ax1), ("theta_2", ax1),
                         ("theta_12", ax2), ("theta_13", ax2)):
            col = t.columns.index(name)
            ax.plot(tau, [t.rows[i][col] for i in sel], style,
                    label=f"{name} {mode}")
    ax1.set_xlabel("game time tau")
    ax1.set_ylabel("bias parameters")
    ax2.set_xlabel("game time tau")
    ax2.set_ylabel("coupling parameters")
    for ax in (ax1, ax2):
        ax.legend(fontsize=7)
    fig.suptitle("relaxation trajectories")
    return [_save(fig, out_dir / "n3-trajectories.png")]


def _plot_cw_magnetization(tables, out_dir):
    t = tables["cw-magnetization"]
    fig, ax = plt.subplots(figsize=(5, 3.4))
    ax.plot(_col(t, "beta"), _col(t, "m_abs"))
    ax.set_xlabel("coldness beta")
    ax.set_ylabel("|m|")
    ax.set_title("order parameter across the transition")
    return [_save(fig, out_dir / "cw-magnetization.png")]


def _plot_cw_scaling(tables, out_dir):
    t = tables["cw-scaling"]
    factors = sorted(set(_col(t, "beta_over_betac")))
    fig, ax = plt.subplots(figsize=(5.5, 3.6))
    for f in factors:
        rows = [r for r in t.rows if r[1] == f]
        ax.semilogx([r[0] for r in rows], [r[2] for r in rows],
                    marker="o", label=f"beta = {f} beta_c")
    ax.set_xlabel("spin count n")
    ax.set_ylabel("dI/dm")
    ax.set_title("multi-information gradient vs system size")
    ax.legend(fontsize=8)
    return [_save(fig, out_dir / "cw-scaling.png")]


def _plot_n3_decomposition(tables, out_dir):
    t = tables["n3-decomposition"]
    if not t.rows:
        return [None]
    fig, ax = plt.subplots(figsize=(5, 3.4))
    labels = [f"{r[0]}\nbeta={r[1]}" for r in t.rows]
    x = range(len(t.rows))
    width = 0.35
    ax.bar([i - width / 2 for i in x], [r[2] for r in t.rows], width, label="|S|")
    ax.bar([i + width / 2 for i in x], [r[3] for r in t.rows], width, label="|A|")
    ax.set_xticks(list(x), labels)
    ax.set_ylabel("Frobenius norm")
    ax.legend()
    ax.set_title("decomposition at the frustrated point")
    return [_save(fig, out_dir / "n3-decomposition.png")]


def _plot_oscillator_jacobi(tables, out_dir):
    t = tables["oscillator-jacobi"]
    fig, ax = plt.subplots(figsize=(5.5, 3.4))
    labels = [f"({r[0]}, {r[1]}, {r[2]})" for r in t.rows]
    vals = [max(v, 1e-16) for v in _col(t, "normalized_violation")]
    ax.bar(range(len(vals)), vals)
    ax.set_yscale("log")
    ax.set_xticks(range(len(vals)), labels, fontsize=7)
    ax.set_ylabel("max |J| / |A|^2")
    ax.set_title("Jacobi violation by precision parameters")
    return [_save(fig, out_dir / "oscillator-jacobi.png")]


_RENDERERS = {
    "n3-sweep": _plot_n3_sweep,
    "n3-trajectories": _plot_n3_trajectories,
    "cw-magnetization": _plot_cw_magnetization,
    "cw-scaling": _plot_cw_scaling,
    "n3-decomposition": _plot_n3_decomposition,
    "oscillator-jacobi": _plot_oscillator_jacobi,
}
