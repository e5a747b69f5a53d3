"""Hamiltonian builders for cavity-QED models and driven-qubit protocols.

Unit convention for every builder: inputs are linear frequencies in GHz,
the 2*pi lives inside the builder, and time is measured in ns, so all
accumulated phases omega*t are dimensionless. Rates quoted as angular
("2*pi x 10 MHz") enter as their linear value (0.010 GHz).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .qops import HilbertSpace, Operator, elementary, embed, identity

__all__ = [
    "TransmonParams",
    "CavityQubitParams",
    "DriveParams",
    "LatticeSpec",
    "TimeDependentHamiltonian",
    "transmon_spectrum",
    "transmon_frequency",
    "build_cavity_qubit",
    "estimate_hopping",
    "build_lattice",
    "build_two_tone",
    "effective_qrm",
    "build_dirac_drive",
    "build_dirac_effective",
    "build_transmon_multilevel",
    "effective_xy_coupling",
]

TAU = 2.0 * math.pi

# Dense assembly guard for lattice models.
_MAX_LATTICE_DIM = 2**16


@dataclass(frozen=True)
class TransmonParams:
    """Charge-qubit parameters; energies E_C, E_J_max are E/h in GHz."""

    E_C: float
    E_J_max: float
    n_g: float = 0.0
    flux: float = 0.0
    n_levels: int = 2
    alpha_r: float = -0.1

    def __post_init__(self):
        if self.E_C <= 0 or self.E_J_max < 0:
            raise ValueError("E_C must be positive and E_J_max non-negative")
        if self.n_levels < 2:
            raise ValueError("n_levels must be >= 2")


@dataclass(frozen=True)
class CavityQubitParams:
    omega_q: float
    omega_r: float
    g: float
    n_fock: int

    def __post_init__(self):
        if self.omega_q <= 0 or self.omega_r <= 0:
            raise ValueError("frequencies must be positive")
        if self.n_fock < 2:
            raise ValueError("n_fock must be >= 2")


@dataclass(frozen=True)
class DriveParams:
    """Microwave drive amplitudes/frequencies (GHz, linear) and phase (rad)."""

    Omega1: float = 0.0
    Omega2: float = 0.0
    Omega: float = 0.0
    lam: float = 0.0
    xi: float = 0.0
    omega1: float = 0.0
    omega2: float = 0.0
    nu: float = 0.0
    phi: float = 0.0

    def __post_init__(self):
        for name in ("Omega1", "Omega2", "Omega", "lam", "xi"):
            if getattr(self, name) < 0:
                raise ValueError(f"amplitude {name} must be >= 0")


@dataclass(frozen=True)
class LatticeSpec:
    """Nearest-neighbor cavity/cell lattice description.

    ``omega`` may be a single frequency or one per site. ``edges`` defaults
    to a chain with the requested boundary.
    """

    model: str
    n_sites: int
    n_fock: int
    omega: float | Sequence[float] = 0.0
    omega_qubit: float = 0.0
    J: float = 0.0
    U: float = 0.0
    V: float = 0.0
    drive: float = 0.0
    delta: float = 0.0
    g: float = 0.0
    boundary: str = "open"
    edges: tuple[tuple[int, int], ...] | None = None

    def site_frequencies(self) -> list[float]:
        if np.isscalar(self.omega):
            return [float(self.omega)] * self.n_sites
        freqs = [float(w) for w in self.omega]
        if len(freqs) != self.n_sites:
            raise ValueError("need one frequency per site")
        return freqs

    def edge_list(self) -> list[tuple[int, int]]:
        if self.edges is not None:
            edges = [tuple(e) for e in self.edges]
        else:
            edges = [(i, i + 1) for i in range(self.n_sites - 1)]
            if self.boundary == "periodic" and self.n_sites > 2:
                edges.append((self.n_sites - 1, 0))
            elif self.boundary not in ("open", "periodic"):
                raise ValueError(f"unknown boundary {self.boundary!r}")
        for a, b in edges:
            if not (0 <= a < self.n_sites and 0 <= b < self.n_sites) or a == b:
                raise ValueError(f"invalid edge ({a}, {b})")
        return edges


class TimeDependentHamiltonian:
    """Sum of (static Operator, complex scalar function of t in ns) pairs.

    ``matrix(t)`` evaluates H(t); if a rotating frame generator ``frame_h0``
    is attached (see :func:`cqedsim.evolve.frame_transform`) the evaluation
    is e^{+i H0 t} (H(t) - H0) e^{-i H0 t} via the cached eigenbasis of H0.
    """

    def __init__(
        self,
        space: HilbertSpace,
        terms: Sequence[tuple[Operator, Callable[[float], complex]]],
        frame_h0: Operator | None = None,
    ):
        self.space = space
        self.terms = list(terms)
        for op, _ in self.terms:
            space.require_same(op.space)
        self._mats = np.stack([op.matrix for op, _ in self.terms]) if self.terms else None
        self._funcs = [f for _, f in self.terms]
        self.frame_h0 = frame_h0
        if frame_h0 is not None:
            space.require_same(frame_h0.space)
            evals, evecs = np.linalg.eigh(frame_h0.matrix)
            self._frame = (evals, evecs)
        else:
            self._frame = None

    @classmethod
    def static(cls, op: Operator) -> "TimeDependentHamiltonian":
        return cls(op.space, [(op, lambda t: 1.0)])

    def coefficients(self, t: float) -> np.ndarray:
        return np.array([f(t) for f in self._funcs], dtype=complex)

    def matrix(self, t: float) -> np.ndarray:
        if self._mats is None:
            h = np.zeros((self.space.dim, self.space.dim), dtype=complex)
        else:
            h = np.tensordot(self.coefficients(t), self._mats, axes=1)
        if self._frame is not None:
            evals, evecs = self._frame
            h = h - self.frame_h0.matrix
            phases = np.exp(1j * evals * t)
            u = evecs * phases  # e^{+i H0 t} = V diag(e^{iEt}) V^dag
            h = u @ (evecs.conj().T @ h @ evecs) @ u.conj().T
            # inner sandwich in the eigenbasis keeps it to three products
        return h

    def operator(self, t: float) -> Operator:
        return Operator(self.space, self.matrix(t))

    def is_hermitian_at(self, times: Sequence[float], tol: float = 1e-10) -> bool:
        for t in times:
            h = self.matrix(t)
            if np.max(np.abs(h - h.conj().T)) > tol:
                return False
        return True


# ---------------------------------------------------------------------------
# transmon spectrum and closed-form frequencies
# ---------------------------------------------------------------------------


def _josephson_energy(p: TransmonParams) -> float:
    c = abs(math.cos(math.pi * p.flux))
    if c < 1e-3:
        raise ValueError("flux sweet-spot degeneracy: |cos(pi * flux)| < 1e-3")
    return p.E_J_max * c


def transmon_spectrum(p: TransmonParams, charge_cutoff: int = 30) -> list[float]:
    """Lowest n_levels eigenfrequencies (GHz) of the charge-basis Hamiltonian.

    Diagonalizes 4 E_C (n - n_g)^2 - (E_J / 2)(|n><n+1| + h.c.) over
    n in [-charge_cutoff, charge_cutoff], relative to the ground state.
    """
    if charge_cutoff < 10:
        raise ValueError("charge_cutoff must be >= 10")
    e_j = _josephson_energy(p)
    n = np.arange(-charge_cutoff, charge_cutoff + 1, dtype=float)
    h = np.diag(4.0 * p.E_C * (n - p.n_g) ** 2)
    off = -0.5 * e_j * np.ones(len(n) - 1)
    h += np.diag(off, 1) + np.diag(off, -1)
    evals, evecs = np.linalg.eigh(h)
    ground = evecs[:, 0]
    boundary_weight = abs(ground[0]) ** 2 + abs(ground[-1]) ** 2
    if boundary_weight > 1e-10:
        warnings.warn(
            f"charge-basis cutoff {charge_cutoff} may be too small: "
            f"ground-state boundary weight {boundary_weight:.2e}",
            stacklevel=2,
        )
    return [float(e - evals[0]) for e in evals[: p.n_levels]]


def transmon_frequency(p: TransmonParams) -> float:
    """Two-level splitting sqrt(8 E_C E_J_max |cos(pi flux)|) - E_C in GHz."""
    e_j = _josephson_energy(p)
    return math.sqrt(8.0 * p.E_C * e_j) - p.E_C


# ---------------------------------------------------------------------------
# cavity-qubit building blocks
# ---------------------------------------------------------------------------


def build_cavity_qubit(p: CavityQubitParams, form: str = "jc") -> Operator:
    """Jaynes-Cummings or quantum Rabi Hamiltonian on [qubit, mode].

    jc:   (wq/2) sz + wr a^dag a + g (s+ a + s- a^dag)
    rabi: (wq/2) sz + wr a^dag a + g sx (a + a^dag)
    """
    space = HilbertSpace((2, p.n_fock))
    sz = embed(elementary("pauli_z", 2), space, 0)
    sp = embed(elementary("sigma_plus", 2), space, 0)
    sm = embed(elementary("sigma_minus", 2), space, 0)
    a = embed(elementary("annihilator", p.n_fock), space, 1)
    ad = a.dag()
    h = 0.5 * p.omega_q * sz + p.omega_r * (ad @ a)
    if form == "jc":
        h = h + p.g * (sp @ a + sm @ ad)
    elif form == "rabi":
        sx = embed(elementary("pauli_x", 2), space, 0)
        h = h + p.g * (sx @ (a + ad))
    else:
        raise ValueError(f"unknown form {form!r}")
    return TAU * h


def estimate_hopping(
    kind: str,
    omega_n: float,
    omega_np: float,
    coupling_scale: float,
    u_n: float,
    u_np: float,
) -> float:
    """Cavity-cavity hopping amplitude J in GHz.

    capacitive: (1/2) sqrt(w_n w_n') * scale * u_n * u_n', with scale the
    dimensionless capacitance ratio C_c/C_r. squid: (1/2) * scale /
    sqrt(w_n w_n' / GHz^2) * u_n * u_n' * GHz; the source only fixes this
    up to proportionality, so the prefactor is folded into ``coupling_scale``.
    """
    if omega_n <= 0 or omega_np <= 0:
        raise ValueError("mode frequencies must be positive")
    if kind == "capacitive":
        return 0.5 * math.sqrt(omega_n * omega_np) * coupling_scale * u_n * u_np
    if kind == "squid":
        return 0.5 * coupling_scale / math.sqrt(omega_n * omega_np) * u_n * u_np
    raise ValueError(f"unknown hopping kind {kind!r}")


# ---------------------------------------------------------------------------
# lattices
# ---------------------------------------------------------------------------


def _lattice_space(spec: LatticeSpec) -> HilbertSpace:
    if spec.model in ("hopping", "photon_solid"):
        dims = (spec.n_fock,) * spec.n_sites
    elif spec.model in ("jch", "rabi_hubbard"):
        dims = ()
        for _ in range(spec.n_sites):
            dims = dims + (2, spec.n_fock)
    else:
        raise ValueError(f"unknown lattice model {spec.model!r}")
    space = HilbertSpace(dims)
    if space.dim > _MAX_LATTICE_DIM:
        raise ValueError(
            f"dense lattice dimension {space.dim} exceeds the guard {_MAX_LATTICE_DIM}"
        )
    return space


def build_lattice(spec: LatticeSpec) -> Operator:
    """Assemble the requested lattice model, all terms multiplied by 2*pi.

    hopping:      sum_n w_n a^dag_n a_n + J sum_<nn'> (a^dag_n a_n' + h.c.)
    jch:          hopping sites replaced by JC cells (qubit at each site)
    photon_solid: sum_i [-delta n_i + drive (a_i + a^dag_i)] - J sum (a a^dag + h.c.)
                  + U sum n_i(n_i - 1) + V sum_<ij> n_i n_j
    rabi_hubbard: sum_i H_Rabi^(i) - J sum (a_i a^dag_j + h.c.)
    """
    space = _lattice_space(spec)
    edges = spec.edge_list()
    freqs = spec.site_frequencies()
    nf = spec.n_fock

    if spec.model in ("hopping", "photon_solid"):
        mode_slot = list(range(spec.n_sites))
    else:
        mode_slot = [2 * i + 1 for i in range(spec.n_sites)]
        qubit_slot = [2 * i for i in range(spec.n_sites)]

    a_ops = [embed(elementary("annihilator", nf), space, s) for s in mode_slot]
    n_ops = [op.dag() @ op for op in a_ops]
    h = Operator(space, np.zeros((space.dim, space.dim)))

    if spec.model == "hopping":
        for w, n in zip(freqs, n_ops):
            h = h + w * n
        for i, j in edges:
            hop = a_ops[i].dag() @ a_ops[j]
            h = h + spec.J * (hop + hop.dag())

    elif spec.model == "jch":
        for i in range(spec.n_sites):
            sp = embed(elementary("sigma_plus", 2), space, qubit_slot[i])
            sm = embed(elementary("sigma_minus", 2), space, qubit_slot[i])
            h = h + spec.omega_qubit * (sp @ sm) + freqs[i] * n_ops[i]
            h = h + spec.g * (sp @ a_ops[i] + sm @ a_ops[i].dag())
        for i, j in edges:
            hop = a_ops[i] @ a_ops[j].dag()
            h = h + spec.J * (hop + hop.dag())

    elif spec.model == "photon_solid":
        for i in range(spec.n_sites):
            h = h + (-spec.delta) * n_ops[i] + spec.drive * (a_ops[i] + a_ops[i].dag())
            h = h + spec.U * (n_ops[i] @ n_ops[i] - n_ops[i])
        for i, j in edges:
            hop = a_ops[i] @ a_ops[j].dag()
            h = h - spec.J * (hop + hop.dag())
            h = h + spec.V * (n_ops[i] @ n_ops[j])

    elif spec.model == "rabi_hubbard":
        for i in range(spec.n_sites):
            sz = embed(elementary("pauli_z", 2), space, qubit_slot[i])
            sx = embed(elementary("pauli_x", 2), space, qubit_slot[i])
            h = h + 0.5 * spec.omega_qubit * sz + freqs[i] * n_ops[i]
            h = h + spec.g * (sx @ (a_ops[i] + a_ops[i].dag()))
        for i, j in edges:
            hop = a_ops[i] @ a_ops[j].dag()
            h = h - spec.J * (hop + hop.dag())

    return TAU * h


# ---------------------------------------------------------------------------
# driven single-cell models
# ---------------------------------------------------------------------------


def _cell_ops(n_fock: int):
    space = HilbertSpace((2, n_fock))
    return (
        space,
        embed(elementary("pauli_z", 2), space, 0),
        embed(elementary("sigma_plus", 2), space, 0),
        embed(elementary("sigma_minus", 2), space, 0),
        embed(elementary("annihilator", n_fock), space, 1),
    )


def build_two_tone(p: CavityQubitParams, d: DriveParams) -> TimeDependentHamiltonian:
    """Two-tone driven JC cell, signs exactly as in the source model.

    H(t)/2pi = (wq/2) sz + w a^dag a - g (s+ a + s- a^dag)
               - Omega1 (e^{i w1 t} s- + h.c.) - Omega2 (e^{i w2 t} s- + h.c.)

    Note the -g coupling (gauge-equivalent to the +g JC form under a
    sigma_z rotation of the qubit).
    """
    space, sz, sp, sm, a = _cell_ops(p.n_fock)
    static = TAU * (0.5 * p.omega_q * sz + p.omega_r * (a.dag() @ a) - p.g * (sp @ a + sm @ a.dag()))

    def drive(amp: float, freq: float, sign: float) -> Callable[[float], complex]:
        w = TAU * freq
        return lambda t: -TAU * amp * np.exp(sign * 1j * w * t)

    terms = [
        (static, lambda t: 1.0),
        (sm, drive(d.Omega1, d.omega1, +1.0)),
        (sp, drive(d.Omega1, d.omega1, -1.0)),
        (sm, drive(d.Omega2, d.omega2, +1.0)),
        (sp, drive(d.Omega2, d.omega2, -1.0)),
    ]
    return TimeDependentHamiltonian(space, terms)


def effective_qrm(p: CavityQubitParams, d: DriveParams) -> tuple[Operator, Operator]:
    """Effective quantum Rabi model of the two-tone scheme, plus the
    dressed-basis unitary.

    Returns (H_eff, U) with H_eff/2pi = (w - w1) a^dag a + (Omega2/2) sz
    - (g/2) sx (a + a^dag). The Pauli matrices are lab-basis operators; the
    derivation lives in the dressed basis |+-> = (|g> +- |e>)/sqrt(2) and
    U maps lab amplitudes to dressed components (rows are <+|, <-|).
    """
    space, sz, _, _, a = _cell_ops(p.n_fock)
    sx = embed(elementary("pauli_x", 2), space, 0)
    h = TAU * (
        (p.omega_r - d.omega1) * (a.dag() @ a)
        + 0.5 * d.Omega2 * sz
        - 0.5 * p.g * (sx @ (a + a.dag()))
    )
    hadamard = np.array([[1, 1], [1, -1]]) / math.sqrt(2.0)
    u = Operator(space, np.kron(hadamard, np.eye(p.n_fock)))
    return h, u


def build_dirac_drive(p: CavityQubitParams, d: DriveParams) -> TimeDependentHamiltonian:
    """Three-drive cell used for the relativistic-particle emulation.

    H(t)/2pi = (wq/2) sz + w a^dag a - g (s+ a + s- a^dag)
               - Omega (s+ e^{-i(w t + phi)} + h.c.)
               - lam   (s+ e^{-i(nu t + phi)} + h.c.)
               + xi    (a e^{i w t} + a^dag e^{-i w t})
    """
    space, sz, sp, sm, a = _cell_ops(p.n_fock)
    static = TAU * (0.5 * p.omega_q * sz + p.omega_r * (a.dag() @ a) - p.g * (sp @ a + sm @ a.dag()))
    w = TAU * p.omega_r
    nu = TAU * d.nu
    phi = d.phi

    terms = [
        (static, lambda t: 1.0),
        (sp, lambda t: -TAU * d.Omega * np.exp(-1j * (w * t + phi))),
        (sm, lambda t: -TAU * d.Omega * np.exp(+1j * (w * t + phi))),
        (sp, lambda t: -TAU * d.lam * np.exp(-1j * (nu * t + phi))),
        (sm, lambda t: -TAU * d.lam * np.exp(+1j * (nu * t + phi))),
        (a, lambda t: TAU * d.xi * np.exp(+1j * w * t)),
        (a.dag(), lambda t: TAU * d.xi * np.exp(-1j * w * t)),
    ]
    return TimeDependentHamiltonian(space, terms)


def build_dirac_effective(regime: str, g: float, lam: float, xi: float, n_fock: int) -> Operator:
    """Effective 1+1 particle Hamiltonians with x = (a + a^dag)/sqrt(2),
    p = i(a^dag - a)/sqrt(2).

    massive:         2pi [ (lam/2) sz + (g/sqrt2) sy p + xi sqrt2 x ]
    massless:        the same without the mass term
    nonrelativistic: 2pi [ sz p^2 / lam + xi sqrt2 x ] (momentum measured in
                     units of the Dirac velocity g/sqrt2, as in the source)
    """
    space = HilbertSpace((2, n_fock))
    a = embed(elementary("annihilator", n_fock), space, 1)
    x = (a + a.dag()) * (1.0 / math.sqrt(2.0))
    pm = (a.dag() - a) * (1j / math.sqrt(2.0))
    sz = embed(elementary("pauli_z", 2), space, 0)
    sy = embed(elementary("pauli_y", 2), space, 0)

    potential = math.sqrt(2.0) * xi * x
    if regime == "massive":
        h = 0.5 * lam * sz + (g / math.sqrt(2.0)) * (sy @ pm) + potential
    elif regime == "massless":
        h = (g / math.sqrt(2.0)) * (sy @ pm) + potential
    elif regime == "nonrelativistic":
        if lam == 0:
            raise ValueError("nonrelativistic regime requires a nonzero mass (lam)")
        h = (1.0 / lam) * (sz @ pm @ pm) + potential
    else:
        raise ValueError(f"unknown regime {regime!r}")
    return TAU * h


def build_transmon_multilevel(
    omega1: float,
    alpha_r: float,
    omega_r: float,
    g0: float,
    n_fock: int,
    n_transmons: int = 2,
    n_levels: int = 3,
) -> Operator:
    """Two 3-level transmons coupled to one cavity mode through a + a^dag.

    Level frequencies are (0, w1, (2 + alpha_r) w1) and the ladder
    couplings are g_{i,i+1} = sqrt(i+1) g0.
    """
    if n_levels != 3 or n_transmons != 2:
        raise ValueError("the multilevel model is fixed at 2 transmons with 3 levels each")
    space = HilbertSpace((n_levels,) * n_transmons + (n_fock,))
    a = embed(elementary("annihilator", n_fock), space, n_transmons)
    field = a + a.dag()
    levels = [0.0, omega1, (2.0 + alpha_r) * omega1]

    h = omega_r * (a.dag() @ a)
    for j in range(n_transmons):
        for i, w in enumerate(levels):
            h = h + w * embed(elementary("projector", n_levels, i, i), space, j)
        for i in range(n_levels - 1):
            gi = math.sqrt(i + 1) * g0
            lower = embed(elementary("projector", n_levels, i, i + 1), space, j)
            h = h + gi * ((lower + lower.dag()) @ field)
    return TAU * h


def effective_xy_coupling(g01: float, omega1: float, omega_r: float) -> float:
    """Dispersive XY exchange strength J = g01^2 w1 / (w1^2 - wr^2) in GHz."""
    if omega1 == omega_r:
        raise ValueError("dispersive formula diverges at qubit-cavity resonance")
    return g01**2 * omega1 / (omega1**2 - omega_r**2)
