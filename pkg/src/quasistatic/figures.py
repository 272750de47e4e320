"""Figure rendering for reports: boundary samples, sweeps, trajectories.

All functions write a PNG to the requested path and return that path.
Matplotlib runs on the Agg backend so the CLI stays headless.
"""

from __future__ import annotations

import os

import numpy as np


def _pyplot():
    import matplotlib

    matplotlib.use("Agg", force=False)
    import matplotlib.pyplot as plt

    return plt


def save_covector_scatter(samples, path, title: str = "boundary covectors"):
    """Scatter of sampled covectors; first two coordinates when dim > 2."""
    plt = _pyplot()
    pts = np.atleast_2d(np.asarray(samples, dtype=float))
    fig, ax = plt.subplots(figsize=(5, 5))
    ax.scatter(pts[:, 0], pts[:, 1] if pts.shape[1] > 1 else np.zeros(len(pts)), s=14)
    ax.axhline(0.0, color="0.8", lw=0.8)
    ax.axvline(0.0, color="0.8", lw=0.8)
    ax.set_xlabel("f1")
    ax.set_ylabel("f2")
    ax.set_title(title)
    ax.set_aspect("equal", adjustable="datalim")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def save_bifurcation_diagram(x, radius, threshold, path):
    """Buckling amplitude against the control coordinate."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(x, radius, "o-", ms=4, label="buckled amplitude")
    ax.plot(x, np.zeros_like(np.asarray(x)), "k-", lw=1.2, label="straight branch")
    ax.axvline(threshold, color="crimson", ls="--", lw=1.0, label=f"threshold {threshold:g}")
    ax.set_xlabel("control offset |q1 - q0|")
    ax.set_ylabel("|q2 - q0|")
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def save_force_curve(r, force, path, xlabel="reach r", ylabel="radial force"):
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(r, force, "-", lw=1.5)
    ax.axhline(0.0, color="0.8", lw=0.8)
    ax.axvline(0.0, color="0.8", lw=0.8)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def save_circle_geometry(centers, radius, path, title: str = "constraint spheres"):
    """Equatorial cross-section of two constraint spheres."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(5, 5))
    angles = np.linspace(0.0, 2.0 * np.pi, 200)
    for c in np.atleast_2d(centers):
        ax.plot(c[0] + radius * np.cos(angles), c[1] + radius * np.sin(angles), lw=1.2)
        ax.plot([c[0]], [c[1]], "k+")
    ax.set_aspect("equal", adjustable="datalim")
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def save_path_plot(times, points, path):
    """Configuration components against time for a discrete path."""
    plt = _pyplot()
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    fig, ax = plt.subplots(figsize=(6, 4))
    for j in range(pts.shape[1]):
        ax.plot(times, pts[:, j], lw=1.4, label=f"q{j+1}")
    ax.set_xlabel("t")
    ax.set_ylabel("configuration")
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def render_example_figures(report, out_dir: str):
    """Write whatever figures an example report carries data for."""
    os.makedirs(out_dir, exist_ok=True)
    written = []
    tag = f"example{report.number:02d}"
    if "ball_boundary" in report.data:
        written.append(save_covector_scatter(
            report.data["ball_boundary"], os.path.join(out_dir, f"{tag}_ball.png"),
            title="friction ball boundary"))
    if "cone_boundary" in report.data:
        written.append(save_covector_scatter(
            report.data["cone_boundary"], os.path.join(out_dir, f"{tag}_cone.png"),
            title="friction cone boundary (f1, f2)"))
    if "bifurcation" in report.data:
        d = report.data["bifurcation"]
        written.append(save_bifurcation_diagram(
            d["x"], d["radius"], d["threshold"], os.path.join(out_dir, f"{tag}_bifurcation.png")))
    if "force_fold" in report.data:
        d = report.data["force_fold"]
        written.append(save_force_curve(
            d["r"], d["force"], os.path.join(out_dir, f"{tag}_force.png")))
    if "geometry" in report.data:
        d = report.data["geometry"]
        written.append(save_circle_geometry(
            d["centers_clean"], d["radius"], os.path.join(out_dir, f"{tag}_clean.png"),
            title="clean intersection"))
        written.append(save_circle_geometry(
            d["centers_touching"], d["radius"], os.path.join(out_dir, f"{tag}_touching.png"),
            title="touching spheres (not clean)"))
    return written
