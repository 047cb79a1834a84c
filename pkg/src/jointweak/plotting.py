"""Figure rendering for sweep outputs.

Every CSV-producing report path renders a companion PNG next to the
delimited file (same stem).  Rendering is deterministic: fixed size, fixed
dpi, and a pinned PNG metadata block so identical runs produce identical
bytes.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

_PNG_METADATA = {"Software": "jointweak"}


def figure_path_for(csv_path) -> Path:
    return Path(csv_path).with_suffix(".png")


def render_hardy_figure(rows: list[dict], cases, meter: str, path) -> Path:
    """Weak-probability curves: engine solid, closed form dashed."""
    path = Path(path)
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    colors = {1: "tab:gray", 2: "tab:blue", 3: "tab:green", 4: "tab:red"}
    g = [r["g"] for r in rows]
    for case in cases:
        ax.plot(g, [r[f"P{case}"] for r in rows],
                color=colors[case], label=f"$P_{case}$")
        ax.plot(g, [r[f"P{case}_cf"] for r in rows],
                color=colors[case], linestyle="--", linewidth=1.0, alpha=0.7)
    ax.axhline(0.0, color="black", linewidth=0.6)
    ax.set_xlabel("coupling strength $g$")
    ax.set_ylabel("joint weak probability")
    ax.set_title(f"Hardy weak probabilities ({meter} meter)")
    ax.legend(loc="best", fontsize=9)
    if meter == "continuous":
        ax.set_xscale("log")
    fig.tight_layout()
    fig.savefig(path, dpi=150, metadata=_PNG_METADATA)
    plt.close(fig)
    return path


def render_sweep_figure(header: list[str], rows, path, title: str) -> Path:
    """Generic sweep figure: every non-g column against g."""
    path = Path(path)
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    g = [r[0] for r in rows]
    for idx, name in enumerate(header):
        if name == "g":
            continue
        ax.plot(g, [r[idx] for r in rows], label=name, linewidth=1.2)
    ax.set_xlabel("coupling strength $g$")
    ax.set_title(title)
    ax.legend(loc="best", fontsize=8, ncol=2)
    fig.tight_layout()
    fig.savefig(path, dpi=150, metadata=_PNG_METADATA)
    plt.close(fig)
    return path
