"""Observables and diagnostics: fidelity, expectation values, reduced
states, quadrature densities, and Wigner functions.

Quadrature convention: x = (a + a^dag)/sqrt(2), p = i(a^dag - a)/sqrt(2),
so [x, p] = i and the vacuum has width 1/sqrt(2) in both quadratures.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import pi, sqrt
from typing import Sequence

import numpy as np

from .qops import HilbertSpace, Operator, QuantumState

__all__ = [
    "WignerGrid",
    "fidelity",
    "expectation",
    "purity",
    "reduced_state",
    "quadrature_density",
    "wigner",
]


@dataclass(frozen=True)
class WignerGrid:
    x_values: np.ndarray
    p_values: np.ndarray
    values: np.ndarray  # shape (len(p_values), len(x_values)), real

    def normalization(self) -> float:
        dx = self.x_values[1] - self.x_values[0]
        dp = self.p_values[1] - self.p_values[0]
        return float(np.sum(self.values) * dx * dp)

    def x_marginal(self) -> np.ndarray:
        dp = self.p_values[1] - self.p_values[0]
        return np.sum(self.values, axis=0) * dp


def fidelity(rho: QuantumState, psi: QuantumState) -> float:
    """<psi| rho |psi> against a pure reference, clipped to [0, 1]."""
    rho.space.require_same(psi.space)
    if psi.kind != "pure":
        raise ValueError("the reference state must be pure")
    if rho.kind == "pure":
        f = abs(np.vdot(psi.data, rho.data)) ** 2
    else:
        f = float(np.real(np.vdot(psi.data, rho.data @ psi.data)))
    if -1e-10 <= f < 0.0:
        f = 0.0
    if 1.0 < f <= 1.0 + 1e-10:
        f = 1.0
    return float(f)


def expectation(op: Operator, state: QuantumState) -> complex:
    op.space.require_same(state.space)
    if state.kind == "pure":
        return complex(np.vdot(state.data, op.matrix @ state.data))
    return complex(np.trace(op.matrix @ state.data))


def purity(state: QuantumState) -> float:
    if state.kind == "pure":
        return float(np.linalg.norm(state.data) ** 4)
    rho = state.data
    return float(np.real(np.trace(rho @ rho)))


def reduced_state(state: QuantumState, keep: Sequence[int]) -> QuantumState:
    """Partial trace over the complement of ``keep`` (order preserved)."""
    dims = state.space.dims
    keep = list(keep)
    if any(not (0 <= k < len(dims)) for k in keep) or len(set(keep)) != len(keep):
        raise ValueError(f"invalid subsystem indices {keep}")
    if sorted(keep) != keep:
        raise ValueError("keep indices must be in ascending order")
    n = len(dims)
    traced = [k for k in range(n) if k not in keep]
    rho = state.density_matrix().reshape(dims + dims)
    # trace axes pairwise, highest subsystem first so positions stay valid
    for k in sorted(traced, reverse=True):
        rho = np.trace(rho, axis1=k, axis2=k + (rho.ndim // 2))
    new_dims = tuple(dims[k] for k in keep)
    d = int(np.prod(new_dims))
    return QuantumState.mixed(HilbertSpace(new_dims), rho.reshape(d, d), validate=False)


def _hermite_functions(n_max: int, x: np.ndarray) -> np.ndarray:
    """Harmonic-oscillator eigenfunctions <x|n> for the x = (a+a^dag)/sqrt2
    convention, rows indexed by n. Stable three-term recurrence."""
    out = np.zeros((n_max, len(x)))
    out[0] = pi ** (-0.25) * np.exp(-0.5 * x**2)
    if n_max > 1:
        out[1] = sqrt(2.0) * x * out[0]
    for n in range(2, n_max):
        out[n] = sqrt(2.0 / n) * x * out[n - 1] - sqrt((n - 1) / n) * out[n - 2]
    return out


def quadrature_density(state: QuantumState, x_values: np.ndarray) -> np.ndarray:
    """Probability density of the x quadrature for a single-mode state."""
    if state.space.n_subsystems != 1:
        raise ValueError("quadrature_density expects a single-mode state")
    dim = state.space.dim
    waves = _hermite_functions(dim, np.asarray(x_values, dtype=float))
    rho = state.density_matrix()
    return np.real(np.einsum("nx,nm,mx->x", waves, rho, waves))


def wigner(
    rho_field: QuantumState,
    x_values: np.ndarray,
    p_values: np.ndarray,
    leakage_tol: float = 1e-6,
) -> WignerGrid:
    """Wigner function by displaced parity: W(x,p) = Tr[D^dag(alpha) rho
    D(alpha) P]/pi at alpha = (x + ip)/sqrt(2), normalized so the vacuum
    peaks at 1/pi.

    Uses D(alpha) P D^dag(alpha) = D(2 alpha) P and the closed Laguerre
    form of <m|D(beta)|n>, so the trace is evaluated exactly for any state
    contained in the cutoff. Raises if the state itself carries more than
    ``leakage_tol`` population on the terminal Fock level (the cutoff is
    then too small for its Wigner function to be trustworthy).
    """
    from scipy.special import eval_genlaguerre, gammaln

    if rho_field.space.n_subsystems != 1:
        raise ValueError("wigner expects a single-mode state")
    dim = rho_field.space.dim
    rho = rho_field.density_matrix()
    state_leak = float(np.real(rho[-1, -1]))
    if state_leak > leakage_tol:
        raise ValueError(
            f"Fock cutoff {dim} too small: terminal-level population "
            f"{state_leak:.3e} exceeds {leakage_tol:.1e}"
        )

    x_values = np.asarray(x_values, dtype=float)
    p_values = np.asarray(p_values, dtype=float)
    xg, pg = np.meshgrid(x_values, p_values)
    beta = sqrt(2.0) * (xg + 1j * pg)  # 2 alpha
    babs2 = np.abs(beta) ** 2
    envelope = np.exp(-0.5 * babs2)

    w = np.zeros_like(xg)
    for m in range(dim):
        for n in range(m + 1):
            k = m - n
            coef = np.exp(0.5 * (gammaln(n + 1) - gammaln(m + 1)))
            lag = eval_genlaguerre(n, k, babs2)
            d_mn = coef * beta**k * envelope * lag
            if m == n:
                w += np.real(rho[n, m] * (-1.0) ** n * d_mn)
            else:
                d_nm = coef * (-np.conj(beta)) ** k * envelope * lag
                w += np.real(
                    rho[n, m] * (-1.0) ** n * d_mn + rho[m, n] * (-1.0) ** m * d_nm
                )
    return WignerGrid(x_values, p_values, w / pi)
