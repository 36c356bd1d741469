"""Deterministic CSV/JSON/SVG emission for all analyses.

Identical inputs produce byte-identical files: CSV numbers are printed
with 17 significant digits, JSON floats round-trip exactly, and row
ordering is fixed by construction.
"""

from __future__ import annotations

import json
from typing import Iterable, Sequence

import numpy as np

from .rootcurves import RootCurve, branch_ratios, predicted_branch
from .simulation import ScanResult, Trajectory
from .spectral import ModeSpectrum
from .svg import Series, render_plot

FLOAT_FMT = ".17g"


def fmt(value) -> str:
    if isinstance(value, (float, np.floating)):
        return format(float(value), FLOAT_FMT)
    return str(value)


def write_csv(path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(fmt(v) for v in row) + "\n")


def canon(obj):
    """Plain-python copy with floats normalized for stable JSON output."""
    if isinstance(obj, dict):
        return {k: canon(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [canon(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (np.floating, float)):
        value = float(obj)
        return value if np.isfinite(value) else None
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return [canon(v) for v in obj.tolist()]
    return obj


def write_json(path, obj) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(canon(obj), fh, indent=2)
        fh.write("\n")


# --- spectra -----------------------------------------------------------------

def write_spectrum_csv(path, spectra: list[ModeSpectrum]) -> None:
    rows = []
    for m, ms in enumerate(spectra):
        for nu, res in zip(ms.eigenvalues, ms.residuals):
            rows.append((m, ms.phi, nu.real, nu.imag, res))
    write_csv(path, ("m", "phi", "re", "im", "residual"), rows)


# --- trajectories ------------------------------------------------------------

def write_trajectory_csv(path, traj: Trajectory) -> None:
    n = traj.n_agents
    header = (
        ["t"]
        + [f"z_{k + 1}" for k in range(n)]
        + [f"v_{k + 1}" for k in range(n)]
    )
    rows = ([t, *state] for t, state in zip(traj.times, traj.states))
    write_csv(path, header, rows)


def trajectory_svg(traj: Trajectory, max_agents: int = 40) -> str:
    """Leader-relative deviations over time, one polyline per sampled agent."""
    dev = traj.deviations()
    n = traj.n_agents
    step = max(1, int(np.ceil(n / max_agents)))
    series = [
        Series(traj.times, dev[:, k]) for k in range(0, n, step)
    ]
    return render_plot(
        series,
        title=f"leader-relative deviations (N={n}, {traj.bc.topology.value})",
        xlabel="t",
        ylabel="z_k - z_leader",
    )


# --- scans -------------------------------------------------------------------

def write_scan_csv(path, scan: ScanResult) -> None:
    rows = [
        (
            p.n_agents,
            "" if p.magnitude is None else p.magnitude,
            "" if p.log_abs_magnitude is None else p.log_abs_magnitude,
            int(p.censored),
            "" if p.blowup_time is None else p.blowup_time,
        )
        for p in scan.points
    ]
    write_csv(path, ("N", "magnitude", "log_abs_magnitude", "censored", "blowup_time"), rows)


def scan_svg(scan: ScanResult) -> str:
    xs = np.array([p.n_agents for p in scan.points if not p.censored], dtype=float)
    ys = np.array([p.log_abs_magnitude for p in scan.points if not p.censored])
    if len(xs) == 0:
        return render_plot(
            [Series(np.array([0.0]), np.array([0.0]), points=True)],
            title="transient magnitude vs flock size (all runs censored)",
            xlabel="N", ylabel="ln |magnitude|",
        )
    series = [Series(xs, ys, label="ln |magnitude|", points=True)]
    if np.isfinite(scan.slope):
        fit = scan.slope * xs + scan.intercept
        series.append(Series(xs, fit, label=f"fit slope {scan.slope:.4g}", dashed=True))
    return render_plot(series, title="transient magnitude vs flock size",
                       xlabel="N", ylabel="ln |magnitude|")


# --- root curves -------------------------------------------------------------

def write_rootcurves_csv(path, plus: RootCurve, minus: RootCurve, c: complex) -> None:
    rows = []
    for curve in (plus, minus):
        predicted = predicted_branch(curve, c)
        ratios = branch_ratios(curve, c)
        for t, root, pred, ratio in zip(curve.t_grid, curve.roots, predicted, ratios):
            rows.append(
                (t, curve.branch.name.lower(), root.real, root.imag,
                 pred.real, pred.imag, ratio)
            )
    write_csv(
        path,
        ("t", "branch", "re", "im", "predicted_re", "predicted_im", "ratio"),
        rows,
    )


def rootcurves_svg(plus: RootCurve, minus: RootCurve, c: complex) -> str:
    series = []
    for curve, label in ((plus, "branch +"), (minus, "branch -")):
        predicted = predicted_branch(curve, c)
        series.append(Series(curve.roots.real, curve.roots.imag, label=label, points=True))
        series.append(Series(predicted.real, predicted.imag, dashed=True))
    return render_plot(series, title="tracked small roots vs predicted branches",
                       xlabel="Re", ylabel="Im")
