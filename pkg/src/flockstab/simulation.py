"""Line simulations from the leader kick, and transient measurement.

The flock starts at rest in equilibrium; at t = 0 the head vehicle picks
up unit velocity and keeps it (its acceleration row is zero).  Everything
of interest is the leader-relative deviation z_k(t) - z_leader(t), whose
extremal value over all vehicles and times is the transient magnitude.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import BlowUp, SizeError
from .model import BoundaryCondition, FlockSpec, assemble_line

BLOWUP_GUARD = 1e12

#: target spacing of stored trajectory samples, in time units
STORE_SPACING = 0.1

THREADS_ENV = "FLOCKSTAB_THREADS"


@dataclass(frozen=True)
class Trajectory:
    """Decimated state history plus the full-resolution extremum record.

    ``states`` holds one row per stored time: N positions then N
    velocities, in type-block order.  The extremum fields are tracked at
    every integration step, not just the stored ones.
    """

    times: np.ndarray
    states: np.ndarray
    spec: FlockSpec
    n: int
    bc: BoundaryCondition
    dt: float
    peak_deviation: float
    peak_time: float
    peak_agent: int

    def __post_init__(self):
        self.times.setflags(write=False)
        self.states.setflags(write=False)

    @property
    def n_agents(self) -> int:
        return self.states.shape[1] // 2

    def deviations(self) -> np.ndarray:
        """Leader-relative position deviations on the stored grid."""
        pos = self.states[:, : self.n_agents]
        return pos - pos[:, [0]]

    def agent_type_cell(self, index: int) -> tuple[int, int]:
        """Map a flat agent index to (type, cell), both 1-based."""
        return index // self.n + 1, index % self.n + 1


@dataclass(frozen=True)
class TransientReport:
    magnitude: float
    time_at_extremum: float
    agent_at_extremum: int
    converged: bool

    def to_dict(self) -> dict:
        return {
            "magnitude": self.magnitude,
            "time_at_extremum": self.time_at_extremum,
            "agent_at_extremum": self.agent_at_extremum,
            "converged": self.converged,
        }


def simulate(
    spec: FlockSpec,
    n: int,
    bc: BoundaryCondition,
    t_max: float,
    dt: float = 0.01,
    *,
    initial_state: np.ndarray | None = None,
) -> Trajectory:
    """Integrate the line system with classical fixed-step RK4.

    Raises :class:`BlowUp` with the first offending time when the state
    max-norm crosses the overflow guard (the expected outcome for
    genuinely unstable parameter sets).
    """
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    if t_max < dt:
        raise ValueError("t_max must be at least one step")
    system = assemble_line(spec, n, bc)
    m = system.entries
    n_agents = system.n_agents

    y = np.zeros(system.dim)
    if initial_state is None:
        y[n_agents] = 1.0  # leader velocity kick
    else:
        initial_state = np.asarray(initial_state, dtype=float)
        if initial_state.shape != y.shape:
            raise ValueError(f"initial_state must have shape {y.shape}")
        y = initial_state.copy()

    steps = int(round(t_max / dt))
    stride = max(1, int(np.ceil(STORE_SPACING / dt)))
    stored = steps // stride + 1
    times = np.arange(stored) * (stride * dt)
    states = np.empty((stored, system.dim))
    states[0] = y

    dev = y[:n_agents] - y[0]
    worst = int(np.argmax(np.abs(dev)))
    peak, peak_t, peak_agent = dev[worst], 0.0, worst

    half = 0.5 * dt
    sixth = dt / 6.0
    for k in range(1, steps + 1):
        k1 = m @ y
        k2 = m @ (y + half * k1)
        k3 = m @ (y + half * k2)
        k4 = m @ (y + dt * k3)
        y = y + sixth * (k1 + 2.0 * (k2 + k3) + k4)

        norm = np.abs(y).max()
        if norm > BLOWUP_GUARD:
            raise BlowUp(k * dt, norm)

        dev = y[:n_agents] - y[0]
        worst = int(np.argmax(np.abs(dev)))
        if abs(dev[worst]) > abs(peak):
            peak, peak_t, peak_agent = dev[worst], k * dt, worst
        if k % stride == 0:
            states[k // stride] = y

    return Trajectory(
        times=times,
        states=states,
        spec=spec,
        n=n,
        bc=BoundaryCondition(bc),
        dt=dt,
        peak_deviation=float(peak),
        peak_time=peak_t,
        peak_agent=peak_agent,
    )


def transient(traj: Trajectory) -> TransientReport:
    """Extremal leader-relative deviation and a decay check.

    Converged means the deviations over the last 5% of the window stay
    below 10% of the extremum.
    """
    magnitude = traj.peak_deviation
    dev = traj.deviations()
    span = traj.times[-1] - traj.times[0]
    tail = traj.times >= traj.times[-1] - 0.05 * span
    tail_max = float(np.abs(dev[tail]).max()) if tail.any() else 0.0
    converged = magnitude == 0.0 or tail_max < 0.1 * abs(magnitude)
    return TransientReport(
        magnitude=magnitude,
        time_at_extremum=traj.peak_time,
        agent_at_extremum=traj.peak_agent,
        converged=converged,
    )


@dataclass(frozen=True)
class ScanPoint:
    n_agents: int
    magnitude: float | None
    log_abs_magnitude: float | None
    blowup_time: float | None = None

    @property
    def censored(self) -> bool:
        return self.log_abs_magnitude is None

    def to_dict(self) -> dict:
        return {
            "N": self.n_agents,
            "magnitude": self.magnitude,
            "log_abs_magnitude": self.log_abs_magnitude,
            "blowup_time": self.blowup_time,
        }


@dataclass(frozen=True)
class ScanResult:
    points: tuple[ScanPoint, ...]
    slope: float
    intercept: float
    r_squared: float
    fit_error: str | None = None

    def to_dict(self) -> dict:
        return {
            "points": [p.to_dict() for p in self.points],
            "slope": self.slope,
            "intercept": self.intercept,
            "r_squared": self.r_squared,
            "fit_error": self.fit_error,
        }


def _threads(requested: int | None) -> int:
    if requested is not None:
        return max(1, requested)
    return max(1, int(os.environ.get(THREADS_ENV, "1")))


def scan_N(
    spec: FlockSpec,
    bc: BoundaryCondition,
    N_values: list[int],
    dt: float = 0.01,
    t_max: float | None = None,
    threads: int | None = None,
) -> ScanResult:
    """Transient magnitude as a function of flock size.

    Runs one line simulation per N (t_max defaults to 3N time units),
    fits log|magnitude| against N by least squares, and reports the slope
    with its R^2.  Runs that blow up are censored from the fit but kept in
    the point list with their blow-up time.
    """
    t = spec.n_types
    for n_total in N_values:
        if n_total % t != 0 or n_total < 3 * t:
            raise SizeError(f"N={n_total} is not a multiple of {t} (or too small)")

    def run(n_total: int) -> ScanPoint:
        horizon = 3.0 * n_total if t_max is None else t_max
        try:
            traj = simulate(spec, n_total // t, bc, horizon, dt)
        except BlowUp as blow:
            return ScanPoint(n_total, None, None, blowup_time=blow.time)
        mag = transient(traj).magnitude
        log_mag = float(np.log(abs(mag))) if mag != 0.0 else None
        return ScanPoint(n_total, mag, log_mag)

    workers = _threads(threads)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            points = tuple(pool.map(run, N_values))
    else:
        points = tuple(run(n_total) for n_total in N_values)

    usable = [(p.n_agents, p.log_abs_magnitude) for p in points if not p.censored]
    if len(usable) < 2:
        return ScanResult(
            points, float("nan"), float("nan"), float("nan"),
            fit_error=f"need at least two finite magnitudes, have {len(usable)}",
        )
    xs = np.array([u[0] for u in usable], dtype=float)
    ys = np.array([u[1] for u in usable], dtype=float)
    slope, intercept = np.polyfit(xs, ys, 1)
    fitted = slope * xs + intercept
    ss_res = float(np.sum((ys - fitted) ** 2))
    ss_tot = float(np.sum((ys - ys.mean()) ** 2))
    r_squared = 1.0 - ss_res / ss_tot if ss_tot > 0.0 else float("nan")
    return ScanResult(points, float(slope), float(intercept), r_squared)
