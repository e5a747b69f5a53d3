"""Digital quantum simulation layer for spin chains.

Gate set: the dispersive XY interaction exp(-i 2pi J t (s+s- + s-s+)) on a
qubit pair, and collective rotations exp(-i theta sum_targets sigma_a).
The two-qubit Heisenberg protocol is the 7-step sequence (3 XY gates
interleaved with collective pi/4 x- and y-rotations); it is exact in a
single step because the three conjugated pair Hamiltonians commute. The
N >= 3 chain protocol sweeps nearest-neighbor pairs left to right in each
of the three bases and is repeated l times per Trotter step.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .hamlib import TAU
from .qops import HilbertSpace, Operator, QuantumState, elementary, embed
from .evolve import hermitian_expm

__all__ = [
    "Gate",
    "GateSequence",
    "ErrorBudget",
    "gate_unitary",
    "heisenberg_protocol",
    "heisenberg_hamiltonian",
    "compose",
    "trotter_bound",
    "digital_fidelity_loss",
    "error_budget",
]

_ROTATION_KINDS = ("rot_x", "rot_y", "rot_z")


@dataclass(frozen=True)
class Gate:
    """One protocol element: an XY pair gate or a collective rotation.

    XY gates carry (J in GHz, t in ns); rotations carry an angle in rad.
    ``duration`` is informational; the budget model derives times itself.
    """

    kind: str
    targets: tuple[int, ...]
    J: float = 0.0
    t: float = 0.0
    angle: float = 0.0
    duration: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "targets", tuple(self.targets))
        if self.kind == "xy":
            if len(self.targets) != 2 or self.targets[0] == self.targets[1]:
                raise ValueError("xy gates act on exactly 2 distinct qubits")
        elif self.kind in _ROTATION_KINDS:
            if len(self.targets) < 1:
                raise ValueError("rotations need at least one target")
        else:
            raise ValueError(f"unknown gate kind {self.kind!r}")

    @property
    def phase(self) -> float:
        """Dimensionless XY phase theta = 2pi J t."""
        return TAU * self.J * self.t


@dataclass(frozen=True)
class GateSequence:
    n_qubits: int
    gates: tuple[Gate, ...]

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        for g in self.gates:
            if any(q >= self.n_qubits or q < 0 for q in g.targets):
                raise ValueError(f"gate targets {g.targets} out of range")

    def adjoint_swapped(self) -> "GateSequence":
        """Replace every rotation R with its adjoint (angle -> -angle)."""
        swapped = [
            Gate(g.kind, g.targets, g.J, g.t, -g.angle, g.duration)
            if g.kind in _ROTATION_KINDS
            else g
            for g in self.gates
        ]
        return GateSequence(self.n_qubits, tuple(swapped))


@dataclass(frozen=True)
class ErrorBudget:
    """Additive process-error model with per-gate durations.

    eps_2q and eps_1q are per-gate process fidelity errors; single-qubit
    rotations are counted per qubit. t_1q is the duration of one collective
    rotation pulse; t_2q maps the XY phase theta = 2pi J t to a duration,
    calibrated by default at J = 6 MHz.
    """

    eps_1q: float = 0.01
    eps_2q: float = 0.05
    t_1q: float = 4.0
    t_2q: Callable[[float], float] = field(default=lambda theta: theta / (TAU * 0.006))
    aggregation: str = "additive"

    def __post_init__(self):
        for e in (self.eps_1q, self.eps_2q):
            if not (0 <= e < 1):
                raise ValueError("per-gate errors must be in [0, 1)")
        if self.aggregation not in ("additive", "multiplicative"):
            raise ValueError("aggregation must be additive or multiplicative")


def _pauli(axis: str) -> Operator:
    return elementary({"x": "pauli_x", "y": "pauli_y", "z": "pauli_z"}[axis], 2)


def _qubit_space(n: int) -> HilbertSpace:
    return HilbertSpace((2,) * n)


def xy_generator(space: HilbertSpace, i: int, j: int) -> Operator:
    """s_i^+ s_j^- + s_i^- s_j^+ (no units attached)."""
    sp_i = embed(elementary("sigma_plus", 2), space, i)
    sm_i = embed(elementary("sigma_minus", 2), space, i)
    sp_j = embed(elementary("sigma_plus", 2), space, j)
    sm_j = embed(elementary("sigma_minus", 2), space, j)
    return sp_i @ sm_j + sm_i @ sp_j


def gate_unitary(g: Gate, n_qubits: int) -> Operator:
    """Dense unitary of one gate on the full 2^n space."""
    space = _qubit_space(n_qubits)
    if any(q >= n_qubits for q in g.targets):
        raise ValueError(f"gate targets {g.targets} out of range for {n_qubits} qubits")
    if g.kind == "xy":
        gen = xy_generator(space, *g.targets)
        return Operator(space, hermitian_expm(gen.matrix, -1j * g.phase))
    axis = g.kind.split("_")[1]
    gen = Operator(space, sum(embed(_pauli(axis), space, q).matrix for q in g.targets))
    return Operator(space, hermitian_expm(gen.matrix, -1j * g.angle))


def heisenberg_protocol(
    n_qubits: int,
    J: float,
    t: float,
    l: int,
    boundary: str = "open",
) -> GateSequence:
    """Gate sequence emulating exp(-i H_XYZ t) for an N-qubit chain.

    n = 2 is the exact 7-step sequence (l is irrelevant, a single step has
    no digital error). For n >= 3 each of the l Trotter steps applies the
    pair sweep in the xy basis, a collective R^x(pi/4), the sweep, R^x^dag,
    R^y, the sweep, R^y^dag, with every XY gate of duration t/l.
    """
    if n_qubits < 2:
        raise ValueError("need at least 2 qubits")
    if l < 1:
        raise ValueError("Trotter step count l must be >= 1")
    if boundary not in ("open", "periodic"):
        raise ValueError(f"unknown boundary {boundary!r}")

    all_q = tuple(range(n_qubits))
    quarter = math.pi / 4

    if n_qubits == 2:
        xy = Gate("xy", (0, 1), J=J, t=t)
        gates = [
            xy,
            Gate("rot_x", all_q, angle=quarter),
            xy,
            Gate("rot_x", all_q, angle=-quarter),
            Gate("rot_y", all_q, angle=quarter),
            xy,
            Gate("rot_y", all_q, angle=-quarter),
        ]
        return GateSequence(2, tuple(gates))

    pairs = [(i, i + 1) for i in range(n_qubits - 1)]
    if boundary == "periodic":
        pairs.append((n_qubits - 1, 0))
    sweep = [Gate("xy", p, J=J, t=t / l) for p in pairs]
    step = (
        sweep
        + [Gate("rot_x", all_q, angle=quarter)]
        + sweep
        + [Gate("rot_x", all_q, angle=-quarter)]
        + [Gate("rot_y", all_q, angle=quarter)]
        + sweep
        + [Gate("rot_y", all_q, angle=-quarter)]
    )
    return GateSequence(n_qubits, tuple(step * l))


def heisenberg_hamiltonian(n_qubits: int, J: float, boundary: str = "open") -> Operator:
    """Isotropic H_XYZ = 2pi J sum_<ij> (XX + YY + ZZ) on the chain."""
    space = _qubit_space(n_qubits)
    pairs = [(i, i + 1) for i in range(n_qubits - 1)]
    if boundary == "periodic":
        pairs.append((n_qubits - 1, 0))
    h = np.zeros((space.dim, space.dim), dtype=complex)
    for i, j in pairs:
        for axis in "xyz":
            pi_ = embed(_pauli(axis), space, i).matrix
            pj = embed(_pauli(axis), space, j).matrix
            h += pi_ @ pj
    return Operator(space, TAU * J * h)


def compose(seq: GateSequence) -> Operator:
    """Ordered product of gate unitaries; the first gate acts first."""
    space = _qubit_space(seq.n_qubits)
    u = np.eye(space.dim, dtype=complex)
    for g in seq.gates:
        u = gate_unitary(g, seq.n_qubits).matrix @ u
    return Operator(space, u)


def trotter_bound(N: int, J: float, t: float, l: int, boundary: str = "open") -> float:
    """Second-order digital error bound 24 (N-2) theta^2 / l (open) or
    24 N theta^2 / l (periodic), with theta the dimensionless phase 2pi J t.
    The commuting 2-qubit open chain is exact, hence 0."""
    if l < 1:
        raise ValueError("l must be >= 1")
    theta = TAU * J * t
    if boundary == "open":
        if N == 2:
            return 0.0
        if N < 2:
            raise ValueError("N must be >= 2")
        return 24.0 * (N - 2) * theta**2 / l
    if boundary == "periodic":
        return 24.0 * N * theta**2 / l
    raise ValueError(f"unknown boundary {boundary!r}")


def digital_fidelity_loss(
    seq: GateSequence,
    h_target: Operator,
    t: float,
    psi0: QuantumState,
) -> float:
    """1 - |<psi0| e^{+i H t} U_seq |psi0>|^2."""
    h_target.space.require_same(psi0.space)
    u_seq = compose(seq)
    u_seq.space.require_same(psi0.space)
    back = hermitian_expm(h_target.matrix, +1j * t)
    amp = np.vdot(psi0.data, back @ (u_seq.matrix @ psi0.data))
    return float(max(0.0, 1.0 - abs(amp) ** 2))


def error_budget(seq: GateSequence, b: ErrorBudget = ErrorBudget()) -> tuple[float, float]:
    """(total process error, total duration in ns) of a gate sequence.

    Errors add linearly: every XY gate costs eps_2q and every rotation
    costs eps_1q per targeted qubit. Durations treat a collective rotation
    as a single simultaneous pulse.
    """
    per_gate_errors: list[float] = []
    duration = 0.0
    for g in seq.gates:
        if g.kind == "xy":
            per_gate_errors.append(b.eps_2q)
            duration += g.duration if g.duration is not None else b.t_2q(abs(g.phase))
        else:
            per_gate_errors.extend([b.eps_1q] * len(g.targets))
            duration += g.duration if g.duration is not None else b.t_1q
    if b.aggregation == "additive":
        total = sum(per_gate_errors)
    else:
        fid = 1.0
        for e in per_gate_errors:
            fid *= 1.0 - e
        total = 1.0 - fid
    return total, duration
