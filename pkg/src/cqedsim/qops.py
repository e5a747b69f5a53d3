"""Composite Hilbert spaces and dense operator algebra.

Basis conventions used throughout the package:

* Qubit basis order is ``(|g>, |e>)``, i.e. the ground state is index 0.
* ``sigma_z = |e><e| - |g><g|`` so that ``sigma_z |e> = +|e>`` and a qubit
  term ``(omega_q / 2) sigma_z`` puts the excited state at +omega_q/2.
  In matrix form this is ``diag(-1, +1)``.
* ``sigma_minus = |g><e|`` (lowering), ``sigma_plus = |e><g|`` (raising).
* Bosonic modes are truncated at an explicit Fock cutoff; the annihilator
  carries sqrt(n) on the first superdiagonal.

All values are immutable after construction (matrices are marked
read-only), so they can be shared freely between threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "HilbertSpace",
    "Operator",
    "QuantumState",
    "SpaceMismatchError",
    "elementary",
    "tensor",
    "embed",
    "identity",
    "basis_state",
    "coherent_state",
    "product_state",
]

_NORM_TOL = 1e-10
_EIG_TOL = 1e-8


class SpaceMismatchError(ValueError):
    """Raised when two objects live on different composite spaces."""


@dataclass(frozen=True)
class HilbertSpace:
    """Ordered list of subsystem dimensions (qubit=2, d-level=d, mode=cutoff)."""

    dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if not dims:
            raise ValueError("HilbertSpace needs at least one subsystem")
        if any(d < 2 for d in dims):
            raise ValueError(f"every subsystem dimension must be >= 2, got {dims}")
        object.__setattr__(self, "dims", dims)

    @property
    def dim(self) -> int:
        return int(np.prod(self.dims))

    @property
    def n_subsystems(self) -> int:
        return len(self.dims)

    def join(self, other: "HilbertSpace") -> "HilbertSpace":
        return HilbertSpace(self.dims + other.dims)

    def require_same(self, other: "HilbertSpace") -> None:
        if self != other:
            raise SpaceMismatchError(f"spaces differ: {self.dims} vs {other.dims}")


def _freeze(matrix: np.ndarray) -> np.ndarray:
    out = np.array(matrix, dtype=complex, copy=True)
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class Operator:
    """Dense complex matrix tagged with the composite space it acts on."""

    space: HilbertSpace
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"operator matrix must be square, got shape {m.shape}")
        if m.shape[0] != self.space.dim:
            raise ValueError(
                f"matrix dimension {m.shape[0]} does not match space dimension {self.space.dim}"
            )
        object.__setattr__(self, "matrix", _freeze(m))

    # -- algebra ---------------------------------------------------------

    def dag(self) -> "Operator":
        return Operator(self.space, self.matrix.conj().T)

    def __add__(self, other: "Operator") -> "Operator":
        self.space.require_same(other.space)
        return Operator(self.space, self.matrix + other.matrix)

    def __sub__(self, other: "Operator") -> "Operator":
        self.space.require_same(other.space)
        return Operator(self.space, self.matrix - other.matrix)

    def __neg__(self) -> "Operator":
        return Operator(self.space, -self.matrix)

    def __mul__(self, scalar: complex) -> "Operator":
        return Operator(self.space, self.matrix * scalar)

    __rmul__ = __mul__

    def __matmul__(self, other: "Operator") -> "Operator":
        self.space.require_same(other.space)
        return Operator(self.space, self.matrix @ other.matrix)

    def commutator(self, other: "Operator") -> "Operator":
        return self @ other - other @ self

    # -- predicates ------------------------------------------------------

    def is_hermitian(self, tol: float = 1e-10) -> bool:
        return bool(np.max(np.abs(self.matrix - self.matrix.conj().T)) <= tol)

    def is_unitary(self, tol: float = 1e-10) -> bool:
        eye = np.eye(self.space.dim)
        return bool(np.max(np.abs(self.matrix @ self.matrix.conj().T - eye)) <= tol)

    def norm(self) -> float:
        """Spectral (2-) norm."""
        return float(np.linalg.norm(self.matrix, 2))


@dataclass(frozen=True)
class QuantumState:
    """Pure state vector or density matrix on a composite space.

    Pure states must be normalized to 1e-10; mixed states must have unit
    trace, be Hermitian, and have eigenvalues above -1e-8. States produced
    mid-integration (where norm drift up to the documented diagnostic
    bounds is expected) are built with ``validate=False``.
    """

    space: HilbertSpace
    kind: str
    data: np.ndarray
    validate: bool = field(default=True, repr=False, compare=False)

    def __post_init__(self):
        d = np.asarray(self.data, dtype=complex)
        if self.kind == "pure":
            d = d.reshape(-1)
            if d.size != self.space.dim:
                raise ValueError("state vector length does not match space dimension")
            if self.validate:
                nrm = np.linalg.norm(d)
                if abs(nrm - 1.0) > _NORM_TOL:
                    raise ValueError(f"pure state norm {nrm} deviates from 1 by more than {_NORM_TOL}")
        elif self.kind == "mixed":
            if d.ndim != 2 or d.shape != (self.space.dim, self.space.dim):
                raise ValueError("density matrix shape does not match space dimension")
            if self.validate:
                if abs(np.trace(d).real - 1.0) > _NORM_TOL or abs(np.trace(d).imag) > _NORM_TOL:
                    raise ValueError("density matrix trace deviates from 1")
                if np.max(np.abs(d - d.conj().T)) > _NORM_TOL:
                    raise ValueError("density matrix is not Hermitian")
                if np.min(np.linalg.eigvalsh((d + d.conj().T) / 2)) < -_EIG_TOL:
                    raise ValueError("density matrix has an eigenvalue below -1e-8")
        else:
            raise ValueError(f"unknown state kind {self.kind!r}")
        object.__setattr__(self, "data", _freeze(d))

    @classmethod
    def pure(cls, space: HilbertSpace, vector: np.ndarray, validate: bool = True) -> "QuantumState":
        return cls(space, "pure", vector, validate)

    @classmethod
    def mixed(cls, space: HilbertSpace, rho: np.ndarray, validate: bool = True) -> "QuantumState":
        return cls(space, "mixed", rho, validate)

    def density_matrix(self) -> np.ndarray:
        if self.kind == "pure":
            return np.outer(self.data, self.data.conj())
        return np.array(self.data)

    def as_mixed(self) -> "QuantumState":
        if self.kind == "mixed":
            return self
        return QuantumState.mixed(self.space, self.density_matrix(), validate=False)


_QUBIT_KINDS = {"pauli_x", "pauli_y", "pauli_z", "sigma_plus", "sigma_minus"}


def elementary(kind: str, dim: int, i: int | None = None, j: int | None = None) -> Operator:
    """Standard single-subsystem operators in the Fock/computational basis.

    ``projector`` takes the extra indices ``i``, ``j`` and returns |i><j|.
    Pauli and sigma kinds require dim == 2; see the module docstring for
    the sigma_z sign convention.
    """
    dim = int(dim)
    if dim < 2:
        raise ValueError("dim must be >= 2")
    if kind in _QUBIT_KINDS and dim != 2:
        raise ValueError(f"{kind} requires dim == 2, got {dim}")

    if kind == "annihilator":
        m = np.diag(np.sqrt(np.arange(1, dim, dtype=float)), k=1)
    elif kind == "number":
        m = np.diag(np.arange(dim, dtype=float))
    elif kind == "identity":
        m = np.eye(dim)
    elif kind == "pauli_x":
        m = np.array([[0, 1], [1, 0]], dtype=float)
    elif kind == "pauli_y":
        # sigma_y = -i(sigma_plus - sigma_minus) in the (|g>,|e>) basis order
        m = np.array([[0, 1j], [-1j, 0]])
    elif kind == "pauli_z":
        m = np.diag([-1.0, 1.0])
    elif kind == "sigma_plus":
        m = np.array([[0, 0], [1, 0]], dtype=float)
    elif kind == "sigma_minus":
        m = np.array([[0, 1], [0, 0]], dtype=float)
    elif kind == "projector":
        if i is None or j is None:
            raise ValueError("projector requires indices i and j")
        if not (0 <= i < dim and 0 <= j < dim):
            raise ValueError("projector indices out of range")
        m = np.zeros((dim, dim))
        m[i, j] = 1.0
    else:
        raise ValueError(f"unknown elementary kind {kind!r}")
    return Operator(HilbertSpace((dim,)), m)


def tensor(factors: Sequence[Operator]) -> Operator:
    """Kronecker product; the resulting space concatenates the factor spaces."""
    if not factors:
        raise ValueError("tensor needs at least one factor")
    dims: tuple[int, ...] = ()
    m = np.array([[1.0 + 0j]])
    for f in factors:
        dims = dims + f.space.dims
        m = np.kron(m, f.matrix)
    return Operator(HilbertSpace(dims), m)


def identity(space: HilbertSpace) -> Operator:
    return Operator(space, np.eye(space.dim))


def embed(op: Operator, space: HilbertSpace, slot: int) -> Operator:
    """Lift a single-subsystem operator to ``space``, identity elsewhere."""
    if not (0 <= slot < space.n_subsystems):
        raise ValueError(f"slot {slot} out of range for {space.n_subsystems} subsystems")
    if op.space.dim != space.dims[slot]:
        raise ValueError(
            f"operator dimension {op.space.dim} does not match dims[{slot}] = {space.dims[slot]}"
        )
    factors = []
    for k, d in enumerate(space.dims):
        factors.append(op if k == slot else elementary("identity", d))
    m = factors[0].matrix
    for f in factors[1:]:
        m = np.kron(m, f.matrix)
    return Operator(space, m)


def basis_state(space: HilbertSpace, indices: Iterable[int]) -> QuantumState:
    """Computational/Fock product basis state |i_1, i_2, ...>."""
    idx = tuple(indices)
    if len(idx) != space.n_subsystems:
        raise ValueError("one index per subsystem required")
    flat = 0
    for i, d in zip(idx, space.dims):
        if not (0 <= i < d):
            raise ValueError(f"index {i} out of range for dimension {d}")
        flat = flat * d + i
    v = np.zeros(space.dim, dtype=complex)
    v[flat] = 1.0
    return QuantumState.pure(space, v)


def coherent_state(dim: int, alpha: complex) -> QuantumState:
    """Truncated coherent state, renormalized on the cutoff space."""
    n = np.arange(dim)
    log_fact = np.cumsum(np.log(np.maximum(n, 1)))
    if alpha == 0:
        v = np.zeros(dim, dtype=complex)
        v[0] = 1.0
    else:
        v = np.exp(n * np.log(complex(alpha)) - log_fact / 2 - abs(alpha) ** 2 / 2)
    v = v / np.linalg.norm(v)
    return QuantumState.pure(HilbertSpace((dim,)), v)


def product_state(parts: Sequence[QuantumState]) -> QuantumState:
    """Tensor product of pure states."""
    v = np.array([1.0 + 0j])
    dims: tuple[int, ...] = ()
    for p in parts:
        if p.kind != "pure":
            raise ValueError("product_state requires pure factors")
        v = np.kron(v, p.data)
        dims = dims + p.space.dims
    return QuantumState.pure(HilbertSpace(dims), v)
