"""Flock models and system matrices.

Defines agent coupling parameters for the two supported periodic
arrangements (three types with nearest-neighbor coupling, two types with
next-nearest-neighbor coupling), validates the decentralization
constraints, and assembles the dense first-order system matrices for the
circle and for the line under either boundary-condition family.

State ordering is block form throughout: all position blocks (one block of
n cells per agent type), then all velocity blocks in the same type order.
The head vehicle of the line is type 1 in cell 1, i.e. state index 0.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from types import MappingProxyType
from typing import Mapping, Sequence

import numpy as np

from .errors import ConstraintViolation, ShapeError, SizeError

CONSTRAINT_TOL = 1e-12

ROW_SUM_TARGET = -1.0


class Arrangement(Enum):
    TRIATOMIC_NN = "triatomic-nn"
    DIATOMIC_NNN = "diatomic-nnn"

    @property
    def n_types(self) -> int:
        return 3 if self is Arrangement.TRIATOMIC_NN else 2

    @property
    def offsets(self) -> tuple[int, ...]:
        if self is Arrangement.TRIATOMIC_NN:
            return (-1, 1)
        return (-2, -1, 1, 2)

    @property
    def degree(self) -> int:
        """Degree of the per-mode characteristic polynomial."""
        return 2 * self.n_types


class Topology(Enum):
    CIRCLE = "circle"
    LINE_TYPE_I = "line-type-1"
    LINE_TYPE_II = "line-type-2"


class BoundaryCondition(Enum):
    TYPE_I = 1
    TYPE_II = 2

    @property
    def topology(self) -> Topology:
        return (
            Topology.LINE_TYPE_I
            if self is BoundaryCondition.TYPE_I
            else Topology.LINE_TYPE_II
        )


def _freeze_rho(rho: Mapping[int, float]) -> Mapping[int, float]:
    return MappingProxyType({int(j): float(w) for j, w in sorted(rho.items())})


@dataclass(frozen=True)
class AgentParams:
    """Coupling gains and relative weights of one agent type.

    ``rho_x[j]`` weights the position of the neighbor ``j`` hops away
    (positive j looks rearward, negative j toward the head); ``rho_v``
    does the same for velocities.  Decentralization requires each weight
    map to sum to -1, which is validated by the owning spec.
    """

    g_x: float
    g_v: float
    rho_x: Mapping[int, float]
    rho_v: Mapping[int, float]

    def __post_init__(self):
        object.__setattr__(self, "rho_x", _freeze_rho(self.rho_x))
        object.__setattr__(self, "rho_v", _freeze_rho(self.rho_v))
        values = [self.g_x, self.g_v, *self.rho_x.values(), *self.rho_v.values()]
        if not all(np.isfinite(values)):
            raise ShapeError("agent parameters must be finite")


@dataclass(frozen=True)
class FlockSpec:
    """A validated arrangement plus the parameters of every agent type."""

    arrangement: Arrangement
    agents: tuple[AgentParams, ...]

    def __post_init__(self):
        object.__setattr__(self, "agents", tuple(self.agents))
        want = self.arrangement.n_types
        if len(self.agents) != want:
            raise ShapeError(
                f"{self.arrangement.value} needs {want} agent types, "
                f"got {len(self.agents)}"
            )
        allowed = set(self.arrangement.offsets)
        for i, agent in enumerate(self.agents):
            for which, rho in (("rho_x", agent.rho_x), ("rho_v", agent.rho_v)):
                if set(rho) != allowed:
                    raise ShapeError(
                        f"agent {i}: {which} offsets {sorted(rho)} do not match "
                        f"{sorted(allowed)} for {self.arrangement.value}"
                    )
                residual = sum(rho.values()) - ROW_SUM_TARGET
                if abs(residual) > CONSTRAINT_TOL:
                    raise ConstraintViolation(i, which, residual)

    @property
    def n_types(self) -> int:
        return self.arrangement.n_types


@dataclass(frozen=True)
class AlphaBeta:
    """Symmetric/antisymmetric weight combinations per type and offset.

    ``alpha[k][j] = rho[+j] + rho[-j]`` and ``beta[k][j] = rho[+j] - rho[-j]``
    for offset magnitudes j present in the arrangement.
    """

    alpha_x: tuple[Mapping[int, float], ...]
    beta_x: tuple[Mapping[int, float], ...]
    alpha_v: tuple[Mapping[int, float], ...]
    beta_v: tuple[Mapping[int, float], ...]


@dataclass(frozen=True)
class SystemMatrix:
    """Dense first-order system matrix in block (positions, velocities) form."""

    n_per_type: int
    topology: Topology
    entries: np.ndarray

    def __post_init__(self):
        self.entries.setflags(write=False)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def n_agents(self) -> int:
        return self.dim // 2


def _as_agent(raw, offsets: Sequence[int]) -> AgentParams:
    if isinstance(raw, AgentParams):
        return raw
    try:
        g_x, g_v = raw["g_x"], raw["g_v"]
    except (KeyError, TypeError) as exc:
        raise ShapeError(f"agent entry missing gain: {exc}") from exc
    rho_x = _complete(dict(raw.get("rho_x", {})), raw.get("infer", ()), "rho_x", offsets)
    rho_v = _complete(dict(raw.get("rho_v", {})), raw.get("infer", ()), "rho_v", offsets)
    return AgentParams(g_x=g_x, g_v=g_v, rho_x=rho_x, rho_v=rho_v)


def _complete(rho: dict, infer, which: str, offsets: Sequence[int]) -> dict:
    """Fill omitted offsets with zero, optionally deriving one from the constraint."""
    rho = {int(j): float(w) for j, w in rho.items()}
    for entry in infer:
        if ":" not in entry:
            raise ShapeError(f"infer entry {entry!r} must look like 'rho_x:-1'")
    inferred = [
        int(entry.split(":", 1)[1])
        for entry in infer
        if entry.split(":", 1)[0] == which
    ]
    if len(inferred) > 1:
        raise ShapeError(f"{which}: at most one offset may be inferred per row")
    for j in offsets:
        rho.setdefault(j, 0.0)
    if inferred:
        j = inferred[0]
        if j not in offsets:
            raise ShapeError(f"{which}: cannot infer offset {j}")
        rho[j] = ROW_SUM_TARGET - sum(w for k, w in rho.items() if k != j)
    return rho


def build_spec(arrangement: Arrangement, agents: Sequence) -> FlockSpec:
    """Build and validate a spec from agent parameter entries.

    Each entry is either an :class:`AgentParams` or a mapping with keys
    ``g_x``, ``g_v``, ``rho_x``, ``rho_v`` (offset -> weight, omitted
    offsets are zero) and an optional ``infer`` list such as
    ``["rho_x:-1"]`` naming one offset per weight map to derive from the
    sum-to--1 constraint.
    """
    arrangement = Arrangement(arrangement)
    want = arrangement.n_types
    if len(agents) != want:
        raise ShapeError(f"expected {want} agent entries, got {len(agents)}")
    return FlockSpec(arrangement, tuple(_as_agent(a, arrangement.offsets) for a in agents))


def alphas_betas(spec: FlockSpec) -> AlphaBeta:
    """Exact alpha/beta combinations of the spec's weights."""
    magnitudes = sorted({abs(j) for j in spec.arrangement.offsets})

    def combine(getter):
        alphas, betas = [], []
        for agent in spec.agents:
            rho = getter(agent)
            alphas.append(MappingProxyType({j: rho[j] + rho[-j] for j in magnitudes}))
            betas.append(MappingProxyType({j: rho[j] - rho[-j] for j in magnitudes}))
        return tuple(alphas), tuple(betas)

    ax, bx = combine(lambda a: a.rho_x)
    av, bv = combine(lambda a: a.rho_v)
    return AlphaBeta(alpha_x=ax, beta_x=bx, alpha_v=av, beta_v=bv)


def _shift_matrices(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic shifts: (P_plus @ z)[j] = z[j+1], (P_minus @ z)[j] = z[j-1]."""
    idx = np.arange(n)
    p_plus = np.zeros((n, n))
    p_plus[idx, (idx + 1) % n] = 1.0
    return p_plus, p_plus.T.copy()


def _coupling_blocks(spec: FlockSpec, n: int, which: str) -> list[list[np.ndarray]]:
    p_plus, p_minus = _shift_matrices(n)
    eye = np.eye(n)
    rho = [getattr(a, which) for a in spec.agents]
    g = [a.g_x if which == "rho_x" else a.g_v for a in spec.agents]

    if spec.arrangement is Arrangement.TRIATOMIC_NN:
        return [
            [g[0] * eye, g[0] * rho[0][1] * eye, g[0] * rho[0][-1] * p_minus],
            [g[1] * rho[1][-1] * eye, g[1] * eye, g[1] * rho[1][1] * eye],
            [g[2] * rho[2][1] * p_plus, g[2] * rho[2][-1] * eye, g[2] * eye],
        ]

    # diatomic: same-type circulant carries the central 1 and the +-2 weights,
    # cross-type circulant the +-1 weights.
    b1 = eye + rho[0][-2] * p_minus + rho[0][2] * p_plus
    b2 = eye + rho[1][-2] * p_minus + rho[1][2] * p_plus
    a1 = rho[0][1] * eye + rho[0][-1] * p_minus
    a2 = rho[1][-1] * eye + rho[1][1] * p_plus
    return [
        [g[0] * b1, g[0] * a1],
        [g[1] * a2, g[1] * b2],
    ]


def assemble_periodic(spec: FlockSpec, n: int) -> SystemMatrix:
    """Dense system matrix of the flock closed into a circle of n cells."""
    if n < 3:
        raise SizeError(f"need n >= 3 cells per type, got {n}")
    t = spec.n_types
    lx = np.block(_coupling_blocks(spec, n, "rho_x"))
    lv = np.block(_coupling_blocks(spec, n, "rho_v"))
    upper = np.hstack([np.zeros((t * n, t * n)), np.eye(t * n)])
    lower = np.hstack([lx, lv])
    return SystemMatrix(n, Topology.CIRCLE, np.vstack([upper, lower]))


def _line_rows_triatomic(m: np.ndarray, spec: FlockSpec, n: int, bc: BoundaryCondition):
    g3 = spec.agents[2]
    # tail vehicle: type 3 in cell n. Column offsets: type i block starts at (i-1)n.
    row = 3 * n + 2 * n + (n - 1)
    m[row, :] = 0.0
    for shift, g, rho in ((0, g3.g_x, g3.rho_x), (3 * n, g3.g_v, g3.rho_v)):
        self_col = shift + 2 * n + (n - 1)
        front_col = shift + n + (n - 1)  # type 2, same cell
        if bc is BoundaryCondition.TYPE_I:
            m[row, self_col] = -g * rho[-1]
            m[row, front_col] = g * rho[-1]
        else:
            m[row, self_col] = g
            m[row, front_col] = -g


def _line_rows_diatomic(m: np.ndarray, spec: FlockSpec, n: int, bc: BoundaryCondition):
    a1, a2 = spec.agents
    acc = 2 * n  # first acceleration row

    # type 1, cell n: the +2 neighbor is missing.
    row = acc + (n - 1)
    m[row, :] = 0.0
    for shift, g, rho in ((0, a1.g_x, a1.rho_x), (2 * n, a1.g_v, a1.rho_v)):
        self_col = shift + (n - 1)
        rear_col = shift + n + (n - 1)      # type 2, cell n
        front_col = shift + n + (n - 2)     # type 2, cell n-1
        far_front_col = shift + (n - 2)     # type 1, cell n-1
        if bc is BoundaryCondition.TYPE_I:
            m[row, self_col] = -g * (rho[1] + rho[-1] + rho[-2])
            m[row, far_front_col] = g * rho[-2]
        else:
            m[row, self_col] = g
            m[row, far_front_col] = -g * (1.0 + rho[1] + rho[-1])
        m[row, rear_col] = g * rho[1]
        m[row, front_col] = g * rho[-1]

    # type 2, cell 1: the -2 neighbor is missing.
    row = acc + n
    m[row, :] = 0.0
    for shift, g, rho in ((0, a2.g_x, a2.rho_x), (2 * n, a2.g_v, a2.rho_v)):
        self_col = shift + n
        front_col = shift + 0               # type 1, cell 1
        rear_col = shift + 1                # type 1, cell 2
        far_rear_col = shift + n + 1        # type 2, cell 2
        if bc is BoundaryCondition.TYPE_I:
            m[row, self_col] = -g * (rho[-1] + rho[1] + rho[2])
            m[row, far_rear_col] = g * rho[2]
        else:
            m[row, self_col] = g
            m[row, far_rear_col] = -g * (1.0 + rho[1] + rho[-1])
        m[row, front_col] = g * rho[-1]
        m[row, rear_col] = g * rho[1]

    # type 2, cell n: both rearward neighbors are missing.
    row = acc + n + (n - 1)
    m[row, :] = 0.0
    for shift, g, rho in ((0, a2.g_x, a2.rho_x), (2 * n, a2.g_v, a2.rho_v)):
        self_col = shift + n + (n - 1)
        front_col = shift + (n - 1)         # type 1, cell n
        far_front_col = shift + n + (n - 2)  # type 2, cell n-1
        if bc is BoundaryCondition.TYPE_I:
            m[row, self_col] = -g * (rho[-1] + rho[-2])
            m[row, front_col] = g * rho[-1]
            m[row, far_front_col] = g * rho[-2]
        else:
            m[row, self_col] = g
            m[row, front_col] = g * (rho[1] + rho[-1])
            m[row, far_front_col] = g * (rho[2] + rho[-2])


def assemble_line(spec: FlockSpec, n: int, bc: BoundaryCondition) -> SystemMatrix:
    """System matrix of the open line: periodic interior, modified ends.

    The head vehicle's acceleration row is identically zero (it drives the
    flock), and the wrapped-around couplings at the tail are replaced by
    the Type I or Type II truncation, both of which keep every row sum at
    zero.
    """
    bc = BoundaryCondition(bc)
    periodic = assemble_periodic(spec, n)
    m = periodic.entries.copy()
    t = spec.n_types
    m[t * n, :] = 0.0  # leader: type 1, cell 1
    if spec.arrangement is Arrangement.TRIATOMIC_NN:
        _line_rows_triatomic(m, spec, n, bc)
    else:
        _line_rows_diatomic(m, spec, n, bc)
    return SystemMatrix(n, bc.topology, m)


# --- JSON serialization ----------------------------------------------------

def spec_to_dict(spec: FlockSpec) -> dict:
    return {
        "arrangement": spec.arrangement.value,
        "agents": [
            {
                "g_x": a.g_x,
                "g_v": a.g_v,
                "rho_x": {str(j): w for j, w in a.rho_x.items()},
                "rho_v": {str(j): w for j, w in a.rho_v.items()},
            }
            for a in spec.agents
        ],
    }


def spec_from_dict(obj: dict) -> FlockSpec:
    try:
        arrangement = Arrangement(obj["arrangement"])
        agents = obj["agents"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ShapeError(f"malformed spec document: {exc}") from exc
    return build_spec(arrangement, agents)


def load_spec(path) -> FlockSpec:
    with open(path, "r", encoding="utf-8") as fh:
        return spec_from_dict(json.load(fh))


def save_spec(spec: FlockSpec, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(spec_to_dict(spec), fh, indent=2)
        fh.write("\n")
