"""cqedsim: circuit-QED quantum simulation toolkit.

Builders for cavity-QED Hamiltonians, closed- and open-system time
evolution, digital spin-chain protocols with Trotter error accounting, a
digital-analog fermion-boson layer, phase-space observables, and a
scenario-driven CLI that reproduces the reference figure datasets.
"""

from .qops import (
    HilbertSpace,
    Operator,
    QuantumState,
    SpaceMismatchError,
    basis_state,
    coherent_state,
    elementary,
    embed,
    identity,
    product_state,
    tensor,
)
from .hamlib import (
    CavityQubitParams,
    DriveParams,
    LatticeSpec,
    TimeDependentHamiltonian,
    TransmonParams,
    build_cavity_qubit,
    build_dirac_drive,
    build_dirac_effective,
    build_lattice,
    build_transmon_multilevel,
    build_two_tone,
    effective_qrm,
    effective_xy_coupling,
    estimate_hopping,
    transmon_frequency,
    transmon_spectrum,
)
from .evolve import (
    IntegratorConfig,
    LindbladModel,
    NumericalError,
    Trajectory,
    evolve_lindblad,
    evolve_tdse,
    evolve_unitary,
    frame_transform,
)
from .digital import (
    ErrorBudget,
    Gate,
    GateSequence,
    compose,
    digital_fidelity_loss,
    error_budget,
    gate_unitary,
    heisenberg_hamiltonian,
    heisenberg_protocol,
    trotter_bound,
)
from .qft import (
    ContinuumSpec,
    FermionModeMap,
    WavepacketEnvelope,
    build_hsetup,
    build_qft_interaction,
    da_gate,
    da_two_body_sequence,
    jordan_wigner,
    lambda_coefficient,
)
from .observe import (
    WignerGrid,
    expectation,
    fidelity,
    purity,
    quadrature_density,
    reduced_state,
    wigner,
)

__version__ = "0.1.0"
