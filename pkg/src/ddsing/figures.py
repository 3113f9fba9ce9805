"""Figure and table rendering for analysis reports.

Writes PNG figures and CSV tables into a directory: the permuted modulus
heatmap with block boundaries, per-row dominance margins, and the null
vector angles of singular blocks, plus rows.csv / blocks.csv with the same
numbers the report carries.  Uses matplotlib's object API directly so no
interactive backend is touched.
"""
from __future__ import annotations

import csv
from pathlib import Path

import numpy as np
from matplotlib.figure import Figure

from .matrix import RowClass, Tolerances, as_matrix, classify_rows
from .digraph import permute
from .verdict import MatrixVerdict

CLASS_COLORS = {
    RowClass.STRICT: "#2a7fb8",
    RowClass.WEAK: "#e0a13b",
    RowClass.VIOLATED: "#c23b3b",
}


def _structure_figure(m: np.ndarray, verdict: MatrixVerdict, path: Path) -> None:
    fig = Figure(figsize=(5.0, 4.2))
    ax = fig.subplots()
    if verdict.form is not None:
        shown = np.abs(permute(m, verdict.form))
        title = "moduli, block lower triangular order"
    else:
        shown = np.abs(m)
        title = "moduli (no block form: not dominant)"
    im = ax.imshow(shown, cmap="viridis", interpolation="nearest")
    fig.colorbar(im, ax=ax, shrink=0.85)
    if verdict.form is not None:
        for block, flag in zip(verdict.form.blocks, verdict.form.independent_flags):
            start, stop = block[0] - 0.5, block[-1] + 0.5
            style = "-" if flag else "--"
            for lo, hi, fixed in ((start, stop, start), (start, stop, stop)):
                ax.plot([lo, hi], [fixed, fixed], style, color="white", linewidth=1.2)
                ax.plot([fixed, fixed], [lo, hi], style, color="white", linewidth=1.2)
    ax.set_title(title, fontsize=10)
    ax.set_xlabel("column (permuted)")
    ax.set_ylabel("row (permuted)")
    fig.tight_layout()
    fig.savefig(path, dpi=130)


def _dominance_figure(m: np.ndarray, tol: Tolerances, path: Path) -> None:
    profile = classify_rows(m, tol)
    n = len(profile.rows)
    margins = [r.diag_modulus - r.offdiag_sum for r in profile.rows]
    colors = [CLASS_COLORS[r.row_class] for r in profile.rows]
    fig = Figure(figsize=(5.0, max(2.0, 0.3 * n + 1.2)))
    ax = fig.subplots()
    ax.barh(range(1, n + 1), margins, color=colors)
    ax.axvline(0.0, color="black", linewidth=0.8)
    ax.set_ylabel("row")
    ax.set_xlabel("diagonal modulus minus off-diagonal sum")
    ax.set_title("dominance margins", fontsize=10)
    ax.invert_yaxis()
    fig.tight_layout()
    fig.savefig(path, dpi=130)


def _angles_figure(verdict: MatrixVerdict, path: Path) -> bool:
    bundles = verdict.certificates[:4]
    if not bundles:
        return False
    fig = Figure(figsize=(3.4 * len(bundles), 3.4))
    axes = fig.subplots(1, len(bundles), subplot_kw={"projection": "polar"}, squeeze=False)
    for ax, bundle in zip(axes[0], bundles):
        angles = np.angle(np.asarray(bundle.certificate.gamma))
        ax.scatter(angles, np.ones_like(angles), s=28)
        ax.set_rticks([])
        ax.set_rlim(0, 1.25)
        ax.set_title(f"block {bundle.block_id + 1} null vector", fontsize=9)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    return True


def _write_tables(m: np.ndarray, verdict: MatrixVerdict, tol: Tolerances, outdir: Path) -> list[Path]:
    rows_path = outdir / "rows.csv"
    profile = classify_rows(m, tol)
    with rows_path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["row", "diag_modulus", "offdiag_sum", "class"])
        for i, r in enumerate(profile.rows):
            writer.writerow([i + 1, repr(r.diag_modulus), repr(r.offdiag_sum), r.row_class.value])

    blocks_path = outdir / "blocks.csv"
    with blocks_path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["block", "independent", "size", "members", "verdict", "reason", "max_residual"])
        for bv in verdict.blocks:
            members = " ".join(str(i + 1) for i in bv.members)
            residual = "" if bv.consistency is None else repr(bv.consistency.max_residual)
            writer.writerow([
                bv.block_id + 1,
                bv.independent,
                bv.size,
                members,
                "singular" if bv.singular else "nonsingular",
                bv.reason or "",
                residual,
            ])
    return [rows_path, blocks_path]


def render_report(a, verdict: MatrixVerdict, outdir, tol: Tolerances | None = None) -> list[Path]:
    """Render figures and tables for an analyzed matrix; returns the paths."""
    m = as_matrix(a)
    tol = tol or verdict.tolerances or Tolerances()
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    path = outdir / "structure.png"
    _structure_figure(m, verdict, path)
    written.append(path)

    path = outdir / "dominance.png"
    _dominance_figure(m, tol, path)
    written.append(path)

    path = outdir / "null_vectors.png"
    if _angles_figure(verdict, path):
        written.append(path)

    written.extend(_write_tables(m, verdict, tol, outdir))
    return written
