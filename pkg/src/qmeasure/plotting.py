"""Figure rendering for the command-line report path.

Every renderer writes a PNG next to the delimited output; the Agg backend
is forced so the CLI works on headless machines.
"""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .gridsim import OutcomeDistribution
from .scenarios import RepeatedMeasurementReport, TwoPeakReport

DPI = 150


def save_distribution_figure(
    path: str,
    distribution: OutcomeDistribution,
    reference: np.ndarray | None = None,
    title: str = "outcome distribution",
) -> str:
    fig, ax = plt.subplots(figsize=(7, 4.2))
    ax.plot(distribution.positions, distribution.density, lw=1.5, label="simulated")
    if reference is not None:
        ax.plot(distribution.positions, reference, "k--", lw=1.0, label="closed form")
    ax.set_xlabel("probe coordinate")
    ax.set_ylabel("probability density")
    ax.set_title(title)
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=DPI)
    plt.close(fig)
    return path


def save_two_peak_figure(path: str, report: TwoPeakReport) -> str:
    fig, axes = plt.subplots(1, 2, figsize=(10, 4.2))
    for ax, readout in zip(axes, (report.scaled, report.unscaled)):
        dist = readout.distribution
        ax.plot(dist.positions, dist.density, lw=1.5)
        ax.axhline(readout.valley_density, color="gray", ls=":", lw=0.8)
        state = "resolved" if readout.resolved else "unresolved"
        ax.set_title(
            f"scaling {readout.lam:g}: {state} "
            f"(valley/peak = {readout.valley_peak_ratio:.3f})"
        )
        ax.set_xlabel("probe coordinate")
        ax.set_ylabel("probability density")
    fig.tight_layout()
    fig.savefig(path, dpi=DPI)
    plt.close(fig)
    return path


def save_repeated_figure(path: str, report: RepeatedMeasurementReport) -> str:
    rounds = np.arange(1, len(report.rounds) + 1)
    fig, ax = plt.subplots(figsize=(7, 4.2))
    ax.plot(rounds, report.outcomes, "o", label="sampled outcome")
    ax.plot(rounds, report.post_centers, "s-", label="post-state center")
    ax.set_xlabel("measurement round")
    ax.set_ylabel("probe coordinate")
    ax.set_title(f"repeated {report.scheme} readout (seed {report.seed})")
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=DPI)
    plt.close(fig)
    return path
