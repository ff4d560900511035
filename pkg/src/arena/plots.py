"""Matplotlib figure rendering for the report path (profiles, breakdowns,
ablation matrices). Figures are written to files next to the CSV output."""

from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

_PROFILE_AXES = [
    ("attempted_problems", "Attempted"),
    ("submission_count", "Submissions"),
    ("submission_precision", "Precision"),
    ("problems_solve_rate", "Solve Rate"),
    ("first_submit_accuracy", "First-Submit"),
]


def render_profile_figure(path, metrics_by_participant: dict) -> Path:
    """Radar chart of strategy-profile metrics, one polygon per participant.

    Count axes are normalized by the max across participants so every axis
    spans [0, 1]; absent ratios plot as 0.
    """
    keys = [k for k, _ in _PROFILE_AXES]
    maxima = {}
    for key in keys:
        values = [getattr(m, key) or 0 for m in metrics_by_participant.values()]
        maxima[key] = max(values) or 1

    angles = [2 * math.pi * i / len(keys) for i in range(len(keys))]
    angles.append(angles[0])

    fig, ax = plt.subplots(subplot_kw={"projection": "polar"}, figsize=(6, 6))
    for pid, metrics in metrics_by_participant.items():
        values = []
        for key in keys:
            v = getattr(metrics, key) or 0
            if key in ("attempted_problems", "submission_count"):
                v = v / maxima[key]
            values.append(v)
        values.append(values[0])
        ax.plot(angles, values, label=pid)
        ax.fill(angles, values, alpha=0.15)
    ax.set_xticks(angles[:-1])
    ax.set_xticklabels([label for _, label in _PROFILE_AXES])
    ax.set_ylim(0, 1.05)
    ax.legend(loc="upper right", bbox_to_anchor=(1.25, 1.1), fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return Path(path)


def render_breakdown_figure(path, breakdown_by_participant: dict) -> Path:
    """Stacked bars of credit spend per category, one bar per participant."""
    categories = ["inference", "hint", "test", "time", "penalty"]
    participants = list(breakdown_by_participant)
    fig, ax = plt.subplots(figsize=(max(4, 1.2 * len(participants)), 4))
    bottoms = [0] * len(participants)
    for category in categories:
        heights = [getattr(breakdown_by_participant[p], category)
                   for p in participants]
        ax.bar(participants, heights, bottom=bottoms, label=category)
        bottoms = [b + h for b, h in zip(bottoms, heights)]
    ax.set_ylabel("credits")
    ax.legend(fontsize=8)
    ax.tick_params(axis="x", rotation=30)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return Path(path)


def render_ablation_figure(path, participants, labels, matrix) -> Path:
    """Heatmap of mean scores across config labels."""
    fig, ax = plt.subplots(figsize=(max(4, 1.2 * len(labels)),
                                    max(3, 0.6 * len(participants) + 1)))
    image = ax.imshow(matrix, aspect="auto", cmap="viridis")
    ax.set_xticks(range(len(labels)), labels, rotation=30)
    ax.set_yticks(range(len(participants)), participants)
    for i in range(len(participants)):
        for j in range(len(labels)):
            ax.text(j, i, f"{matrix[i][j]:.1f}", ha="center", va="center",
                    color="white", fontsize=8)
    fig.colorbar(image, ax=ax, label="mean score")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return Path(path)
