"""Figure rendering for CSV row dicts produced by the CLI.

Curves are grouped by (K, L, channel) family; the figure lands next to
the CSV with a .png suffix and the path is returned.
"""

from __future__ import annotations

import os
from collections import defaultdict

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def _figure_path(csv_path: str) -> str:
    return os.path.splitext(csv_path)[0] + ".png"


def _families(rows: list[dict]) -> dict:
    fams = defaultdict(list)
    for row in rows:
        fams[(row["K"], row["L"], row["channel"])].append(row)
    return fams


def render_rates(rows: list[dict], csv_path: str) -> str:
    """Rate curves vs N: single-user (left) and all-user (right)."""
    fig, axes = plt.subplots(1, 2, figsize=(11, 4.5), sharey=True)
    for (K, L, channel), fam in sorted(_families(rows).items()):
        fam = sorted(fam, key=lambda r: r["N"])
        n = [r["N"] for r in fam]
        label = f"K={K} L={L}"
        for ax, rate_key, succ_key, up_key in (
                (axes[0], "p_single_solvable", "p_single_success", "single_upper"),
                (axes[1], "p_all_solvable", "p_all_success", "all_upper")):
            line, = ax.plot(n, [r[rate_key] for r in fam], "o-", ms=3,
                            label=f"{label} solvable")
            color = line.get_color()
            if any(r[succ_key] is not None and r[succ_key] != "" for r in fam):
                ax.plot(n, [r[succ_key] for r in fam], "s--", ms=3, color=color,
                        label=f"{label} success")
            ax.plot(n, [r[up_key] for r in fam], ":", color=color, alpha=0.7)
    axes[0].set_ylabel("probability")
    axes[0].set_title("single-user rate")
    axes[1].set_title("all-user rate")
    for ax in axes:
        ax.set_xlabel("simultaneous users N")
        ax.grid(True, alpha=0.3)
        ax.legend(fontsize=7)
    fig.tight_layout()
    path = _figure_path(csv_path)
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def render_nmse(rows: list[dict], csv_path: str) -> str:
    """Channel-estimation NMSE vs SNR, one curve per user count."""
    fig, ax = plt.subplots(figsize=(6, 4.5))
    fams = defaultdict(list)
    for row in rows:
        if row["nmse"] is not None and row["nmse"] != "":
            fams[row["N"]].append(row)
    for N, fam in sorted(fams.items()):
        fam = sorted(fam, key=lambda r: r["snr_db"])
        ax.semilogy([r["snr_db"] for r in fam], [r["nmse"] for r in fam],
                    "o-", ms=4, label=f"N={N}")
    ax.set_xlabel("SNR (dB)")
    ax.set_ylabel("NMSE")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    path = _figure_path(csv_path)
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def render_bounds(rows: list[dict], csv_path: str) -> str:
    """Analytic exact/upper/lower curves vs N for one (K, L)."""
    fig, ax = plt.subplots(figsize=(6, 4.5))
    n = [r["N"] for r in rows]
    for prefix, style in (("single", "o-"), ("all", "s--")):
        ax.plot(n, [r[f"{prefix}_upper"] for r in rows], style, ms=3,
                label=f"{prefix} upper")
        ax.plot(n, [r[f"{prefix}_lower"] for r in rows], style, ms=3, alpha=0.5,
                label=f"{prefix} lower")
    ax.set_xlabel("simultaneous users N")
    ax.set_ylabel("solvable rate bound")
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    path = _figure_path(csv_path)
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
