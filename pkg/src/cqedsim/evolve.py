"""Time evolution engines: static unitary propagation, time-dependent
Schrodinger integration, Lindblad master equation, and frame transforms.

The adaptive integrator is an embedded explicit Runge-Kutta pair of
5th-order accuracy (Dormand-Prince via scipy's solve_ivp). Norm and trace
are never renormalized mid-integration; their drift is reported as a
diagnostic on the returned Trajectory.

Every evolution records the maximum population of the terminal level of
each subsystem with dimension >= 3 as a truncation ("leakage") diagnostic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.integrate import solve_ivp

from .hamlib import TAU, TimeDependentHamiltonian
from .qops import HilbertSpace, Operator, QuantumState

__all__ = [
    "IntegratorConfig",
    "LindbladModel",
    "Trajectory",
    "NumericalError",
    "evolve_unitary",
    "evolve_tdse",
    "evolve_lindblad",
    "frame_transform",
    "hermitian_expm",
]


class NumericalError(RuntimeError):
    """Integration failed or produced an unreliable state."""


@dataclass(frozen=True)
class IntegratorConfig:
    rel_tol: float = 1e-8
    abs_tol: float = 1e-10
    max_step: float = math.inf
    leakage_threshold: float = 1e-6

    def __post_init__(self):
        if self.rel_tol <= 0 or self.abs_tol <= 0:
            raise ValueError("tolerances must be positive")


@dataclass(frozen=True)
class LindbladModel:
    """Hamiltonian plus (collapse operator, rate in GHz) pairs.

    Rates are linear frequencies; the dissipator is applied with a 2*pi
    factor, matching the builders' unit convention.
    """

    hamiltonian: TimeDependentHamiltonian
    collapses: tuple[tuple[Operator, float], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "collapses", tuple(self.collapses))
        for op, rate in self.collapses:
            self.hamiltonian.space.require_same(op.space)
            if rate < 0:
                raise ValueError("collapse rates must be >= 0")


@dataclass
class Trajectory:
    times: np.ndarray
    states: list[QuantumState]
    leakage: float
    norm_drift: float = 0.0
    trace_drift: float = 0.0
    min_eigenvalue: float = 0.0
    warnings: list[str] = field(default_factory=list)


def _terminal_projectors(space: HilbertSpace, slots: Sequence[int] | None = None) -> list[np.ndarray]:
    """Flat boolean masks selecting the terminal level of each monitored slot.

    By default every subsystem with dimension >= 3 is monitored; pass
    ``slots`` to restrict the diagnostic to the truncated bosonic modes.
    """
    if slots is None:
        slots = [k for k, d in enumerate(space.dims) if d >= 3]
    masks = []
    for slot in slots:
        grid = np.indices(space.dims).reshape(len(space.dims), -1)
        masks.append(grid[slot] == space.dims[slot] - 1)
    return masks


def _leakage_pure(vectors: np.ndarray, masks: list[np.ndarray]) -> float:
    if not masks:
        return 0.0
    pops = np.abs(vectors) ** 2
    return float(max(pops[:, m].sum(axis=1).max() for m in masks))


def _leakage_mixed(rhos: Sequence[np.ndarray], masks: list[np.ndarray]) -> float:
    if not masks:
        return 0.0
    worst = 0.0
    for rho in rhos:
        diag = np.real(np.diag(rho))
        worst = max(worst, max(float(diag[m].sum()) for m in masks))
    return worst


def hermitian_expm(h: np.ndarray, scale: complex) -> np.ndarray:
    """exp(scale * H) for Hermitian H via eigendecomposition."""
    evals, evecs = np.linalg.eigh(h)
    return (evecs * np.exp(scale * evals)) @ evecs.conj().T


def evolve_unitary(h: Operator, psi0: QuantumState, times: Sequence[float]) -> Trajectory:
    """Propagate under a static Hermitian H with e^{-iHt} states at ``times``."""
    if not h.is_hermitian(1e-10):
        raise ValueError("evolve_unitary requires a Hermitian Hamiltonian")
    h.space.require_same(psi0.space)
    times = np.asarray(times, dtype=float)
    evals, evecs = np.linalg.eigh(h.matrix)
    masks = _terminal_projectors(h.space)

    if psi0.kind == "pure":
        coeffs = evecs.conj().T @ psi0.data
        phases = np.exp(-1j * np.outer(times, evals))
        vectors = (phases * coeffs) @ evecs.T  # row t is V e^{-iEt} V^dag psi0
        norms = np.linalg.norm(vectors, axis=1)
        states = [QuantumState.pure(h.space, v, validate=False) for v in vectors]
        return Trajectory(
            times,
            states,
            leakage=_leakage_pure(vectors, masks),
            norm_drift=float(np.max(np.abs(norms - 1.0))),
        )

    rho0 = psi0.density_matrix()
    rhos = []
    for t in times:
        u = (evecs * np.exp(-1j * evals * t)) @ evecs.conj().T
        rhos.append(u @ rho0 @ u.conj().T)
    states = [QuantumState.mixed(h.space, r, validate=False) for r in rhos]
    traces = [abs(np.trace(r) - 1.0) for r in rhos]
    return Trajectory(
        times,
        states,
        leakage=_leakage_mixed(rhos, masks),
        trace_drift=float(max(traces)),
    )


def _as_tdh(h) -> TimeDependentHamiltonian:
    if isinstance(h, TimeDependentHamiltonian):
        return h
    if isinstance(h, Operator):
        return TimeDependentHamiltonian.static(h)
    raise TypeError("expected an Operator or TimeDependentHamiltonian")


def evolve_tdse(
    h: TimeDependentHamiltonian,
    psi0: QuantumState,
    times: Sequence[float],
    cfg: IntegratorConfig = IntegratorConfig(),
) -> Trajectory:
    """Adaptive integration of d psi/dt = -i H(t) psi without renormalization."""
    h = _as_tdh(h)
    h.space.require_same(psi0.space)
    if psi0.kind != "pure":
        raise ValueError("evolve_tdse propagates pure states; use evolve_lindblad for mixed")
    times = np.asarray(times, dtype=float)

    def rhs(t, y):
        return -1j * (h.matrix(t) @ y)

    sol = solve_ivp(
        rhs,
        (times[0], times[-1]),
        np.asarray(psi0.data, dtype=complex),
        t_eval=times,
        method="RK45",
        rtol=cfg.rel_tol,
        atol=cfg.abs_tol,
        max_step=cfg.max_step,
    )
    if not sol.success:
        raise NumericalError(f"TDSE integration failed: {sol.message}")

    vectors = sol.y.T
    norms = np.linalg.norm(vectors, axis=1)
    masks = _terminal_projectors(h.space)
    leakage = _leakage_pure(vectors, masks)
    warnings_list = []
    if leakage > cfg.leakage_threshold:
        warnings_list.append(
            f"terminal Fock-level population {leakage:.3e} exceeds threshold {cfg.leakage_threshold:.1e}"
        )
    states = [QuantumState.pure(h.space, v, validate=False) for v in vectors]
    return Trajectory(
        times,
        states,
        leakage=leakage,
        norm_drift=float(np.max(np.abs(norms - 1.0))),
        warnings=warnings_list,
    )


def evolve_lindblad(
    model: LindbladModel,
    rho0: QuantumState,
    times: Sequence[float],
    cfg: IntegratorConfig = IntegratorConfig(),
) -> Trajectory:
    """Integrate rho' = -i[H, rho] + sum_k 2pi gamma_k D[A_k] rho.

    D[A] rho = (2 A rho A^dag - A^dag A rho - rho A^dag A)/2. The derivative
    is symmetrized each evaluation so the flow stays Hermitian.
    """
    h = model.hamiltonian
    h.space.require_same(rho0.space)
    times = np.asarray(times, dtype=float)
    dim = h.space.dim
    rho_init = rho0.density_matrix()

    ops = [(op.matrix, TAU * rate) for op, rate in model.collapses if rate > 0]
    pre = [(a, a.conj().T, a.conj().T @ a, g) for a, g in ops]

    static_h = h.matrix(times[0]) if not _is_time_dependent(h) else None

    def rhs(t, y):
        rho = y.reshape(dim, dim)
        hm = static_h if static_h is not None else h.matrix(t)
        drho = -1j * (hm @ rho - rho @ hm)
        for a, ad, ada, g in pre:
            drho += g * (a @ rho @ ad - 0.5 * (ada @ rho + rho @ ada))
        drho = 0.5 * (drho + drho.conj().T)
        return drho.ravel()

    sol = solve_ivp(
        rhs,
        (times[0], times[-1]),
        rho_init.ravel(),
        t_eval=times,
        method="RK45",
        rtol=cfg.rel_tol,
        atol=cfg.abs_tol,
        max_step=cfg.max_step,
    )
    if not sol.success:
        raise NumericalError(f"Lindblad integration failed: {sol.message}")

    rhos = [0.5 * (r + r.conj().T) for r in sol.y.T.reshape(-1, dim, dim)]
    traces = np.array([np.trace(r).real for r in rhos])
    min_eig = min(float(np.min(np.linalg.eigvalsh(r))) for r in rhos)
    if min_eig < -1e-6:
        raise NumericalError(f"density matrix eigenvalue {min_eig:.3e} below -1e-6")

    masks = _terminal_projectors(h.space)
    leakage = _leakage_mixed(rhos, masks)
    warnings_list = []
    if leakage > cfg.leakage_threshold:
        warnings_list.append(
            f"terminal Fock-level population {leakage:.3e} exceeds threshold {cfg.leakage_threshold:.1e}"
        )
    states = [QuantumState.mixed(h.space, r, validate=False) for r in rhos]
    return Trajectory(
        times,
        states,
        leakage=leakage,
        trace_drift=float(np.max(np.abs(traces - 1.0))),
        min_eigenvalue=min_eig,
        warnings=warnings_list,
    )


def _is_time_dependent(h: TimeDependentHamiltonian) -> bool:
    if h.frame_h0 is not None or len(h.terms) > 1:
        return True
    # single-term Hamiltonians are static iff the coefficient is constant
    f = h.terms[0][1]
    probes = [0.0, 0.377, 11.3]
    vals = [f(t) for t in probes]
    return not np.allclose(vals, vals[0])


def frame_transform(h, h0: Operator) -> TimeDependentHamiltonian:
    """Interaction-picture Hamiltonian e^{+i H0 t} (H(t) - H0) e^{-i H0 t}."""
    h = _as_tdh(h)
    if not h0.is_hermitian(1e-10):
        raise ValueError("frame generator H0 must be Hermitian")
    h.space.require_same(h0.space)
    if h.frame_h0 is not None:
        raise NotImplementedError("nested frame transforms are not supported")
    return TimeDependentHamiltonian(h.space, h.terms, frame_h0=h0)
