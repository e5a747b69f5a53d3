"""Digital-analog layer for fermion-boson field dynamics.

Fermionic/antifermionic modes are encoded on qubits by the Jordan-Wigner
string b^dag_l = (prod_{r<l} sigma_r^z) sigma_l^-, so the occupied level
is the sigma_z = -1 state and the fermionic vacuum is the all sigma_z = +1
product state. Modes are numbered 1..N with 1..N/2 of b type (particles)
and N/2+1..N of d type (antiparticles).

The bosonic continuum is a finite k-grid of truncated modes; per-mode
couplings g_k carry the discretization measure (see ContinuumSpec.uniform).
Wavepacket overlap coefficients use the relativistic dispersion
omega_p = sqrt(p^2 + m^2) in natural units.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import trapezoid

from .hamlib import TimeDependentHamiltonian
from .qops import HilbertSpace, Operator, elementary, embed, identity
from .evolve import hermitian_expm

__all__ = [
    "WavepacketEnvelope",
    "ContinuumSpec",
    "FermionModeMap",
    "jordan_wigner",
    "lambda_coefficient",
    "build_qft_interaction",
    "build_hsetup",
    "da_gate",
    "da_two_body_sequence",
]


@dataclass(frozen=True)
class WavepacketEnvelope:
    """Gaussian momentum-space envelope with unit L2 norm."""

    p0: float = 0.0
    sigma: float = 0.5
    mass: float = 1.0
    shape: str = "gaussian"
    n_points: int = 2049
    coverage: float = 8.0

    def __post_init__(self):
        if self.sigma <= 0:
            raise ValueError("sigma must be positive")
        if self.shape != "gaussian":
            raise ValueError("only gaussian envelopes are implemented")
        if self.coverage < 8.0:
            raise ValueError("the quadrature grid must cover at least 8 sigma")

    def momentum_grid(self) -> np.ndarray:
        half = self.coverage * self.sigma
        return np.linspace(self.p0 - half, self.p0 + half, self.n_points)

    def amplitude(self, p: np.ndarray) -> np.ndarray:
        norm = (2.0 * math.pi * self.sigma**2) ** (-0.25)
        return norm * np.exp(-((p - self.p0) ** 2) / (4.0 * self.sigma**2))

    def check_coverage(self) -> None:
        p = self.momentum_grid()
        inside = trapezoid(np.abs(self.amplitude(p)) ** 2, p)
        if 1.0 - inside > 1e-8:
            raise ValueError(f"envelope tail weight {1.0 - inside:.2e} outside the grid exceeds 1e-8")

    def dispersion(self, p: np.ndarray) -> np.ndarray:
        return np.sqrt(p**2 + self.mass**2)


@dataclass(frozen=True)
class ContinuumSpec:
    """Discretized bosonic line plus qubit positions.

    ``g_k`` are the per-mode couplings with the k-measure already folded
    in; ``x_grid`` is the spatial grid used to discretize position
    integrals of the interaction Hamiltonian.
    """

    k_grid: tuple[float, ...]
    g_k: tuple[float, ...]
    x_positions: tuple[float, ...]
    n_fock: int = 3
    x_grid: tuple[float, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "k_grid", tuple(float(k) for k in self.k_grid))
        object.__setattr__(self, "g_k", tuple(float(g) for g in self.g_k))
        object.__setattr__(self, "x_positions", tuple(float(x) for x in self.x_positions))
        object.__setattr__(self, "x_grid", tuple(float(x) for x in self.x_grid))
        if len(self.g_k) != len(self.k_grid):
            raise ValueError("need one coupling per mode")
        if any(k2 <= k1 for k1, k2 in zip(self.k_grid, self.k_grid[1:])):
            raise ValueError("k_grid must be strictly increasing")
        if any(g < 0 for g in self.g_k):
            raise ValueError("couplings g_k must be >= 0")
        if self.n_fock < 2:
            raise ValueError("n_fock must be >= 2")

    @property
    def n_modes(self) -> int:
        return len(self.k_grid)

    @classmethod
    def uniform(
        cls,
        k_min: float,
        k_max: float,
        n_modes: int,
        coupling: float | Callable[[float], float],
        x_positions: Sequence[float] = (0.0,),
        n_fock: int = 3,
        x_grid: Sequence[float] = (),
    ) -> "ContinuumSpec":
        """Midpoint-sampled k-grid with g_k = profile(k) * sqrt(dk), so the
        summed coupling weight sum_k g_k^2 equals the integral of the
        profile squared independent of the mode count."""
        dk = (k_max - k_min) / n_modes if k_max > k_min else 1.0
        k = k_min + (np.arange(n_modes) + 0.5) * dk
        if callable(coupling):
            g = np.array([coupling(kk) for kk in k]) * math.sqrt(dk)
        else:
            g = np.full(n_modes, coupling) * math.sqrt(dk)
        return cls(tuple(k), tuple(g), tuple(x_positions), n_fock, tuple(x_grid))


@dataclass(frozen=True)
class FermionModeMap:
    """Mode bookkeeping: 1..N/2 are b modes, N/2+1..N are d modes."""

    N: int

    def __post_init__(self):
        if self.N < 2 or self.N % 2 != 0:
            raise ValueError("N must be even and >= 2")

    def valid_range(self, kind: str) -> range:
        if kind in ("b", "b_dag"):
            return range(1, self.N // 2 + 1)
        if kind in ("d", "d_dag"):
            return range(self.N // 2 + 1, self.N + 1)
        raise ValueError(f"unknown operator kind {kind!r}")


def jordan_wigner(fmap: FermionModeMap, index: int, kind: str) -> Operator:
    """Spin-string representation of a fermionic mode operator on N qubits.

    Creation operators are (prod_{r=1}^{index-1} sigma_r^z) sigma_index^-;
    annihilators are their adjoints. ``index`` is 1-based, matching the
    mode numbering of FermionModeMap.
    """
    if index not in fmap.valid_range(kind):
        raise ValueError(f"index {index} invalid for kind {kind!r} with N = {fmap.N}")
    space = HilbertSpace((2,) * fmap.N)
    mat = np.array([[1.0 + 0j]])
    for site in range(1, fmap.N + 1):
        if site < index:
            local = elementary("pauli_z", 2).matrix
        elif site == index:
            local = elementary("sigma_minus", 2).matrix
        else:
            local = np.eye(2)
        mat = np.kron(mat, local)
    op = Operator(space, mat)
    if kind in ("b", "d"):
        op = op.dag()
    return op


def lambda_coefficient(
    env: WavepacketEnvelope,
    x: float | np.ndarray,
    t: float,
    kind: str = "particle",
) -> complex | np.ndarray:
    """Wavepacket overlap coefficient of the fermionic field at (x, t).

    particle:     (1/sqrt(2pi)) int dp Omega(p) e^{+i(p x - w_p t)} / sqrt(2 w_p)
    antiparticle: the conjugate-phase variant with e^{-i(p x - w_p t)}

    Accepts a scalar or an array of positions.
    """
    env.check_coverage()
    p = env.momentum_grid()
    w = env.dispersion(p)
    amp = env.amplitude(p) / np.sqrt(2.0 * w)
    x_arr = np.atleast_1d(np.asarray(x, dtype=float))
    phase = np.outer(x_arr, p) - w * t
    if kind == "particle":
        integrand = amp * np.exp(1j * phase)
    elif kind == "antiparticle":
        integrand = amp * np.exp(-1j * phase)
    else:
        raise ValueError(f"unknown kind {kind!r}")
    vals = trapezoid(integrand, p, axis=1) / math.sqrt(2.0 * math.pi)
    return vals if np.ndim(x) else complex(vals[0])


class _LambdaCache:
    """Memoizes (Lambda_1, Lambda_2) on the x grid for the last few times."""

    def __init__(self, env_f: WavepacketEnvelope, env_fbar: WavepacketEnvelope, x_grid: np.ndarray):
        self.env_f = env_f
        self.env_fbar = env_fbar
        self.x_grid = x_grid
        self._store: dict[float, tuple[np.ndarray, np.ndarray]] = {}

    def at(self, t: float) -> tuple[np.ndarray, np.ndarray]:
        hit = self._store.get(t)
        if hit is None:
            lam1 = np.asarray(lambda_coefficient(self.env_f, self.x_grid, t, "particle"))
            lam2 = np.asarray(lambda_coefficient(self.env_fbar, self.x_grid, t, "antiparticle"))
            if len(self._store) > 8:
                self._store.clear()
            self._store[t] = (lam1, lam2)
            hit = (lam1, lam2)
        return hit


def build_qft_interaction(
    env_f: WavepacketEnvelope,
    env_fbar: WavepacketEnvelope,
    cont: ContinuumSpec,
    frozen_at: float | None = None,
) -> TimeDependentHamiltonian:
    """Interaction Hamiltonian of one particle and one antiparticle mode
    coupled to the discretized bosonic line.

    H(t) = i sum_k sum_x dx g_k [ |L1|^2 b^dag b + L1* L2 b^dag d^dag
           + L2* L1 d b + |L2|^2 d d^dag ] (a_k^dag e^{-ikx} - a_k e^{+ikx})

    with L1 = Lambda_1(x, t), L2 = Lambda_2(x, t) and the fermion bilinears
    in their 2-qubit Jordan-Wigner representation. The d d^dag ordering is
    kept as printed, which adds a pure field-displacement term after normal
    ordering. ``frozen_at`` pins the coefficients to one instant, making
    the Hamiltonian static in all but name.
    """
    if len(cont.x_grid) < 2:
        raise ValueError("ContinuumSpec.x_grid must contain at least 2 points")
    x_grid = np.asarray(cont.x_grid)
    dx = np.diff(x_grid)
    if np.any(dx <= 0) or not np.allclose(dx, dx[0]):
        raise ValueError("x_grid must be uniform and increasing")
    dx = float(dx[0])

    fmap = FermionModeMap(2)
    b = jordan_wigner(fmap, 1, "b")
    d = jordan_wigner(fmap, 2, "d")
    bilinears = [
        b.dag() @ b,
        b.dag() @ d.dag(),
        d @ b,
        d @ d.dag(),
    ]

    space = HilbertSpace((2, 2) + (cont.n_fock,) * cont.n_modes)
    spin_ops = []
    for bil in bilinears:
        m = np.kron(bil.matrix, np.eye(space.dim // 4))
        spin_ops.append(m)

    cache = _LambdaCache(env_f, env_fbar, x_grid)

    def coeff(which: int, k: float, g: float, sign: float) -> Callable[[float], complex]:
        kx_phase = np.exp(-sign * 1j * k * x_grid)  # e^{-ikx} pairs with a^dag

        def f(t: float, _which=which, _g=g, _kx=kx_phase, _sign=sign) -> complex:
            tt = frozen_at if frozen_at is not None else t
            lam1, lam2 = cache.at(tt)
            combos = (
                np.abs(lam1) ** 2,
                np.conj(lam1) * lam2,
                np.conj(lam2) * lam1,
                np.abs(lam2) ** 2,
            )
            total = np.sum(combos[_which] * _kx) * dx
            return 1j * _sign * _g * total

        return f

    terms = []
    for ki, (k, g) in enumerate(zip(cont.k_grid, cont.g_k)):
        a = embed(elementary("annihilator", cont.n_fock), space, 2 + ki)
        ad = a.dag()
        for which, spin in enumerate(spin_ops):
            spin_op = Operator(space, spin)
            terms.append((spin_op @ ad, coeff(which, k, g, +1.0)))
            terms.append((spin_op @ a, coeff(which, k, g, -1.0)))
    return TimeDependentHamiltonian(space, terms)


def _field_generator(cont: ContinuumSpec, x: float, space: HilbertSpace, first_mode_slot: int) -> np.ndarray:
    """sum_k g_k (a_k^dag e^{-ikx} - a_k e^{ikx}), an anti-Hermitian matrix."""
    gen = np.zeros((space.dim, space.dim), dtype=complex)
    for ki, (k, g) in enumerate(zip(cont.k_grid, cont.g_k)):
        a = embed(elementary("annihilator", cont.n_fock), space, first_mode_slot + ki).matrix
        gen += g * (a.conj().T * np.exp(-1j * k * x) - a * np.exp(1j * k * x))
    return gen


def build_hsetup(
    beta: Sequence[float],
    alpha: Sequence[float],
    cont: ContinuumSpec,
    g_cav: float,
    n_fock_cavity: int | None = None,
) -> Operator:
    """Setup Hamiltonian of 3 qubits on an open line plus a 2-qubit cavity.

    H = i sum_{j=1..3} beta_j sigma_j^y sum_k g_k (a_k^dag e^{-ikx_j} - a_k e^{ikx_j})
        + i sum_{j=1..2} alpha_j g_cav sigma_j^y (b^dag - b)

    The dimensionless controls beta, alpha in [0, 1] stand in for the
    flux-tunable couplings.
    """
    if len(beta) != 3 or len(alpha) != 2:
        raise ValueError("expected 3 line controls and 2 cavity controls")
    if any(not (0.0 <= c <= 1.0) for c in list(beta) + list(alpha)):
        raise ValueError("controls must lie in [0, 1]")
    if len(cont.x_positions) < 3:
        raise ValueError("need positions for the 3 qubits")
    nf_cav = n_fock_cavity if n_fock_cavity is not None else cont.n_fock

    space = HilbertSpace((2, 2, 2) + (cont.n_fock,) * cont.n_modes + (nf_cav,))
    cavity_slot = 3 + cont.n_modes
    b = embed(elementary("annihilator", nf_cav), space, cavity_slot).matrix
    h = np.zeros((space.dim, space.dim), dtype=complex)
    for j in range(3):
        sy = embed(elementary("pauli_y", 2), space, j).matrix
        h += 1j * beta[j] * sy @ _field_generator(cont, cont.x_positions[j], space, 3)
    for j in range(2):
        sy = embed(elementary("pauli_y", 2), space, j).matrix
        h += 1j * alpha[j] * g_cav * sy @ (b.conj().T - b)
    return Operator(space, h)


def da_gate(
    kind: str,
    cont: ContinuumSpec,
    theta: float = 0.0,
    phi_axis: float = 0.0,
    phi: float = 0.0,
    target: int = 0,
) -> Operator:
    """Digital-analog gate toolbox.

    ms: U = exp(-i (theta/4) S^2) with S = sum_j (sx_j cos(phi_axis)
        + sy_j sin(phi_axis)) on the two system qubits, identity on the field.
    uc: U = exp(-phi sigma_target^y F(x_target)) on [2, 2] x field, with
        F(x) = sum_k g_k (a_k^dag e^{-ikx} - a_k e^{ikx}).
    ua: U = exp(-phi sigma^z F(x_ancilla)) on the ancilla x field space;
        the ancilla position is x_positions[2].
    """
    if kind == "ms":
        space = HilbertSpace((2, 2) + (cont.n_fock,) * cont.n_modes)
        s = np.zeros((4, 4), dtype=complex)
        qspace = HilbertSpace((2, 2))
        for j in range(2):
            s += math.cos(phi_axis) * embed(elementary("pauli_x", 2), qspace, j).matrix
            s += math.sin(phi_axis) * embed(elementary("pauli_y", 2), qspace, j).matrix
        u4 = hermitian_expm(s @ s, -1j * theta / 4.0)
        return Operator(space, np.kron(u4, np.eye(space.dim // 4)))

    if kind == "uc":
        if target not in (0, 1):
            raise ValueError("uc acts on system qubit 0 or 1")
        space = HilbertSpace((2, 2) + (cont.n_fock,) * cont.n_modes)
        sy = embed(elementary("pauli_y", 2), space, target).matrix
        gen = sy @ _field_generator(cont, cont.x_positions[target], space, 2)
        # gen is anti-Hermitian: exp(-phi gen) = exp(-i phi K) with K = -i gen
        return Operator(space, hermitian_expm(-1j * gen, -1j * phi))

    if kind == "ua":
        if len(cont.x_positions) < 3:
            raise ValueError("ua needs the ancilla position x_positions[2]")
        space = HilbertSpace((2,) + (cont.n_fock,) * cont.n_modes)
        sz = embed(elementary("pauli_z", 2), space, 0).matrix
        gen = sz @ _field_generator(cont, cont.x_positions[2], space, 1)
        return Operator(space, hermitian_expm(-1j * gen, -1j * phi))

    raise ValueError(f"unknown gate kind {kind!r}")


def da_two_body_sequence(phi: float, cont: ContinuumSpec) -> Operator:
    """U_MS(pi/2, 0) U_C(phi) U_MS(-pi/2, 0): the conjugated single-qubit
    field coupling, equal to exp(-phi M F) with M the MS-conjugated
    sigma_1^y (a weight-2 spin operator)."""
    ms = da_gate("ms", cont, theta=math.pi / 2.0)
    uc = da_gate("uc", cont, phi=phi, target=0)
    return ms @ uc @ ms.dag()
