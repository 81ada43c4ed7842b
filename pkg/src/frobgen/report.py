"""Chain diagnostics rendered to files: a CSV table plus matplotlib figures.

The report path is deliberately file-based (no interactive backends): it
writes chain.csv with one row per chain level and chain.png showing how
the degree-bounded slice dimension and the generator count settle.
"""

from __future__ import annotations

import csv
import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .chain import ChainResult


def chain_rows(result: ChainResult):
    """Per-level rows: n, generators, distinct gens, GB size, we_dim, max degree."""
    rows = []
    for lv in result.levels:
        gens = lv.ideal.generators
        rows.append(
            {
                "n": lv.n,
                "generators": len(gens),
                "gb_size": len(lv.basis),
                "we_dim": lv.we_dim,
                "max_degree": max(g.degree() for g in gens),
            }
        )
    return rows


def write_chain_csv(result: ChainResult, path: str) -> str:
    rows = chain_rows(result)
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(
            fh, fieldnames=["n", "generators", "gb_size", "we_dim", "max_degree"]
        )
        writer.writeheader()
        writer.writerows(rows)
    return path


def write_chain_figure(result: ChainResult, path: str) -> str:
    rows = chain_rows(result)
    ns = [r["n"] for r in rows]
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 3.6))

    ax1.step(ns, [r["we_dim"] for r in rows], where="mid", marker="o", color="tab:blue")
    ax1.set_xlabel("chain level n")
    ax1.set_ylabel("dim of degree-bounded slice")
    ax1.set_title(f"slice dimension (stabilizes at s = {result.s})")
    ax1.set_xticks(ns)
    ax1.grid(True, alpha=0.3)

    ax2.bar([n - 0.18 for n in ns], [r["generators"] for r in rows], width=0.36,
            label="generators", color="tab:orange")
    ax2.bar([n + 0.18 for n in ns], [r["gb_size"] for r in rows], width=0.36,
            label="reduced basis", color="tab:green")
    ax2.set_xlabel("chain level n")
    ax2.set_ylabel("count")
    ax2.set_title("ideal presentation size")
    ax2.set_xticks(ns)
    ax2.legend()
    ax2.grid(True, alpha=0.3)

    fig.suptitle(f"descending chain for f = {result.f}  (p = {result.f.ring.p})")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def write_report(result: ChainResult, out_dir: str):
    """Write chain.csv and chain.png into out_dir; returns the two paths."""
    os.makedirs(out_dir, exist_ok=True)
    csv_path = write_chain_csv(result, os.path.join(out_dir, "chain.csv"))
    png_path = write_chain_figure(result, os.path.join(out_dir, "chain.png"))
    return csv_path, png_path
