import math

import numpy as np
import pytest

from cqedsim.hamlib import (
    TAU,
    CavityQubitParams,
    DriveParams,
    LatticeSpec,
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
from cqedsim.qops import HilbertSpace, elementary, embed


class TestTransmon:
    def test_spectrum_matches_asymptotic_formula(self):
        # E_J/E_C = 50: numerical first gap within 5% of sqrt(8 E_C E_J) - E_C
        p = TransmonParams(E_C=0.25, E_J_max=12.5, n_levels=3)
        gaps = transmon_spectrum(p)
        asymptotic = math.sqrt(8 * 0.25 * 12.5) - 0.25
        assert asymptotic == pytest.approx(4.75)
        assert abs(gaps[1] - asymptotic) / asymptotic < 0.05

    def test_negative_anharmonicity(self):
        p = TransmonParams(E_C=0.25, E_J_max=12.5, n_levels=3)
        gaps = transmon_spectrum(p)
        alpha = (gaps[2] - 2 * gaps[1]) / gaps[1]
        assert alpha < 0
        assert alpha == pytest.approx(-0.25 / 4.75, rel=0.3)

    def test_charging_limit(self):
        # E_J = 0 decouples the charge states: gap is 4 E_C (1 - 2 n_g)
        p = TransmonParams(E_C=0.25, E_J_max=0.0, n_g=0.25, n_levels=2, flux=0.0)
        gaps = transmon_spectrum(p)
        assert gaps[1] == pytest.approx(4 * 0.25 * (1 - 2 * 0.25), abs=1e-12)

    def test_frequency_formula_and_flux_periodicity(self):
        p0 = TransmonParams(E_C=0.25, E_J_max=12.5, flux=0.0)
        p1 = TransmonParams(E_C=0.25, E_J_max=12.5, flux=1.0)
        assert transmon_frequency(p0) == pytest.approx(4.75)
        assert transmon_frequency(p1) == pytest.approx(transmon_frequency(p0))

    def test_sweet_spot_guard(self):
        p = TransmonParams(E_C=0.25, E_J_max=12.5, flux=0.5)
        with pytest.raises(ValueError, match="sweet-spot"):
            transmon_frequency(p)
        with pytest.raises(ValueError, match="sweet-spot"):
            transmon_spectrum(p)

    def test_frequency_decreases_toward_half_flux(self):
        p = lambda f: TransmonParams(E_C=0.25, E_J_max=12.5, flux=f)
        freqs = [transmon_frequency(p(f)) for f in (0.0, 0.2, 0.4, 0.45)]
        assert all(a > b for a, b in zip(freqs, freqs[1:]))


class TestCavityQubit:
    def test_decoupled_spectrum(self):
        p = CavityQubitParams(omega_q=5.0, omega_r=7.0, g=0.0, n_fock=4)
        h = build_cavity_qubit(p, "jc")
        expected = sorted(
            TAU * (7.0 * n + s * 5.0 / 2) for n in range(4) for s in (-1, 1)
        )
        np.testing.assert_allclose(np.linalg.eigvalsh(h.matrix), expected, atol=1e-9)

    def test_resonant_doublet_splitting(self):
        # dressed states at n = 1 split by 2 g sqrt(n)
        p = CavityQubitParams(omega_q=5.0, omega_r=5.0, g=0.02, n_fock=8)
        h = build_cavity_qubit(p, "jc")
        evals = np.sort(np.linalg.eigvalsh(h.matrix))
        # spectrum: ground at -wq/2, then the one-excitation doublet at
        # w/2 -+ g; the splitting is 2 g sqrt(n) at n = 1
        split = evals[2] - evals[1]
        assert split == pytest.approx(2 * TAU * 0.02, rel=1e-8)

    def test_jc_conserves_excitation_number(self):
        p = CavityQubitParams(omega_q=5.0, omega_r=5.2, g=0.05, n_fock=6)
        h = build_cavity_qubit(p, "jc")
        space = h.space
        a = embed(elementary("annihilator", 6), space, 1)
        sp = embed(elementary("sigma_plus", 2), space, 0)
        n_tot = a.dag() @ a + sp @ sp.dag()
        assert np.max(np.abs(h.commutator(n_tot).matrix)) <= 1e-10

    def test_rabi_conserves_parity(self):
        p = CavityQubitParams(omega_q=5.0, omega_r=5.2, g=0.35, n_fock=6)
        h = build_cavity_qubit(p, "rabi")
        space = h.space
        sz = embed(elementary("pauli_z", 2), space, 0)
        n_op = embed(elementary("number", 6), space, 1)
        from cqedsim.evolve import hermitian_expm
        from cqedsim.qops import Operator

        parity = Operator(space, sz.matrix @ hermitian_expm(n_op.matrix, 1j * math.pi))
        assert np.max(np.abs(h.commutator(parity).matrix)) <= 1e-10

    def test_builders_hermitian_and_deterministic(self):
        p = CavityQubitParams(omega_q=5.0, omega_r=5.2, g=0.05, n_fock=6)
        for form in ("jc", "rabi"):
            h1 = build_cavity_qubit(p, form)
            h2 = build_cavity_qubit(p, form)
            assert h1.is_hermitian(1e-10)
            assert np.array_equal(h1.matrix, h2.matrix)


class TestHopping:
    def test_capacitive_value(self):
        assert estimate_hopping("capacitive", 5.0, 5.0, 0.01, 1.0, 1.0) == pytest.approx(0.025)

    def test_node_gives_zero(self):
        assert estimate_hopping("capacitive", 5.0, 6.0, 0.01, 0.0, 1.0) == 0.0
        assert estimate_hopping("squid", 5.0, 6.0, 0.01, 0.0, 1.0) == 0.0

    def test_capacitive_symmetry(self):
        a = estimate_hopping("capacitive", 4.0, 6.0, 0.02, 0.7, 0.9)
        b = estimate_hopping("capacitive", 6.0, 4.0, 0.02, 0.9, 0.7)
        assert a == pytest.approx(b)


class TestLattice:
    def test_two_site_single_photon_splitting(self):
        spec = LatticeSpec("hopping", n_sites=2, n_fock=3, omega=5.0, J=0.1)
        h = build_lattice(spec)
        evals = np.linalg.eigvalsh(h.matrix)
        for target in (TAU * (5.0 + 0.1), TAU * (5.0 - 0.1)):
            assert np.min(np.abs(evals - target)) < 1e-9

    def test_photon_solid_reduces_to_hopping(self):
        ps = LatticeSpec(
            "photon_solid", n_sites=3, n_fock=3, delta=-5.0, U=0.0, V=0.0, drive=0.0, J=0.07
        )
        hop = LatticeSpec("hopping", n_sites=3, n_fock=3, omega=5.0, J=-0.07)
        np.testing.assert_allclose(build_lattice(ps).matrix, build_lattice(hop).matrix, atol=1e-12)

    def test_rabi_hubbard_decoupled_sites(self):
        spec = LatticeSpec(
            "rabi_hubbard", n_sites=2, n_fock=3, omega=5.0, omega_qubit=4.8, g=0.3, J=0.0
        )
        h = build_lattice(spec)
        cell = build_cavity_qubit(CavityQubitParams(4.8, 5.0, 0.3, 3), "rabi")
        cell_evals = np.linalg.eigvalsh(cell.matrix)
        sums = np.sort(np.add.outer(cell_evals, cell_evals).ravel())
        np.testing.assert_allclose(np.sort(np.linalg.eigvalsh(h.matrix)), sums, atol=1e-8)

    def test_jch_hermitian(self):
        spec = LatticeSpec(
            "jch", n_sites=2, n_fock=3, omega=5.0, omega_qubit=4.9, g=0.1, J=0.02
        )
        assert build_lattice(spec).is_hermitian(1e-10)

    def test_dense_guard(self):
        spec = LatticeSpec("hopping", n_sites=10, n_fock=8, omega=5.0, J=0.1)
        with pytest.raises(ValueError, match="guard"):
            build_lattice(spec)

    def test_periodic_edges(self):
        spec = LatticeSpec("hopping", n_sites=4, n_fock=2, omega=5.0, J=0.1, boundary="periodic")
        assert (3, 0) in spec.edge_list()


class TestDrivenCells:
    def test_two_tone_static_limit_matches_jc_spectrum(self):
        # Omega1 = Omega2 = 0 leaves the static JC with -g; its spectrum
        # equals the +g one (sigma_z gauge)
        p = CavityQubitParams(omega_q=5.0, omega_r=5.1, g=0.04, n_fock=5)
        h = build_two_tone(p, DriveParams())
        hm = h.matrix(0.3)
        np.testing.assert_allclose(hm, h.matrix(17.0))
        plus = build_cavity_qubit(p, "jc")
        np.testing.assert_allclose(
            np.linalg.eigvalsh(hm), np.linalg.eigvalsh(plus.matrix), atol=1e-9
        )

    def test_two_tone_hermitian_at_sampled_times(self):
        p = CavityQubitParams(omega_q=5.0, omega_r=5.01, g=0.02, n_fock=4)
        d = DriveParams(Omega1=1.0, Omega2=0.01, omega1=5.0, omega2=3.0)
        h = build_two_tone(p, d)
        rng = np.random.default_rng(3)
        assert h.is_hermitian_at([0.0, 0.1, 7.3, *rng.uniform(0, 120, 29)])

    def test_effective_qrm_matches_rabi_builder(self):
        p = CavityQubitParams(omega_q=5.0, omega_r=5.01, g=0.02, n_fock=6)
        d = DriveParams(Omega1=1.0, Omega2=0.01, omega1=5.0, omega2=3.0)
        h_eff, u = effective_qrm(p, d)
        # same matrix as the Rabi builder at (wq, wr, g) -> (Omega2, w - w1, -g/2)
        rabi = build_cavity_qubit(CavityQubitParams(0.01, 0.01, 1.0, 6), "rabi")
        space = h_eff.space
        sx = embed(elementary("pauli_x", 2), space, 0)
        a = embed(elementary("annihilator", 6), space, 1)
        manual = TAU * (
            0.01 * (a.dag() @ a) + 0.5 * 0.01 * embed(elementary("pauli_z", 2), space, 0)
            - 0.01 * (sx @ (a + a.dag()))
        )
        np.testing.assert_allclose(h_eff.matrix, manual.matrix, atol=1e-12)
        assert u.is_unitary(1e-12)

    def test_effective_qrm_omega2_zero_commutes_with_sx(self):
        p = CavityQubitParams(omega_q=5.0, omega_r=5.01, g=0.02, n_fock=6)
        d = DriveParams(Omega1=1.0, omega1=5.0)
        h_eff, _ = effective_qrm(p, d)
        sx = embed(elementary("pauli_x", 2), h_eff.space, 0)
        assert np.max(np.abs(h_eff.commutator(sx).matrix)) < 1e-12

    def test_dirac_drive_static_limit_and_hermiticity(self):
        p = CavityQubitParams(omega_q=3.0, omega_r=3.0, g=0.01, n_fock=4)
        d_zero = DriveParams()
        h = build_dirac_drive(p, d_zero)
        np.testing.assert_allclose(h.matrix(0.0), h.matrix(5.0))
        d = DriveParams(Omega=0.2, lam=0.01, xi=0.005, nu=2.6, phi=math.pi / 2)
        h2 = build_dirac_drive(p, d)
        rng = np.random.default_rng(11)
        assert h2.is_hermitian_at(rng.uniform(0, 60, 32))


class TestDiracEffective:
    def test_quadrature_commutator(self):
        h = build_dirac_effective("massless", 0.01, 0.0, 0.005, 12)
        nf = 12
        a = elementary("annihilator", nf)
        x = (a + a.dag()) * (1 / math.sqrt(2))
        pm = (a.dag() - a) * (1j / math.sqrt(2))
        comm = (x @ pm - pm @ x).matrix
        np.testing.assert_allclose(comm[: nf - 1, : nf - 1], 1j * np.eye(nf - 1), atol=1e-12)

    def test_massless_conserves_sigma_y(self):
        h = build_dirac_effective("massless", 0.01, 0.0, 0.005, 8)
        sy = embed(elementary("pauli_y", 2), h.space, 0)
        assert np.max(np.abs(h.commutator(sy).matrix)) < 1e-12

    def test_mass_term_coefficient(self):
        g = 0.01
        lam = 4 * math.sqrt(2) * g
        h = build_dirac_effective("massive", g, lam, g / 2, 8)
        h0 = build_dirac_effective("massless", g, 0.0, g / 2, 8)
        sz = embed(elementary("pauli_z", 2), h.space, 0)
        np.testing.assert_allclose(
            (h - h0).matrix, (TAU * lam / 2) * sz.matrix, atol=1e-12
        )

    def test_nonrelativistic_requires_mass(self):
        with pytest.raises(ValueError, match="mass"):
            build_dirac_effective("nonrelativistic", 0.01, 0.0, 0.005, 8)


class TestMultilevel:
    def test_level_frequencies_and_couplings(self):
        # omega2 = (2 + alpha_r) omega1 and g_12 = sqrt(2) g0
        h = build_transmon_multilevel(5.0, -0.1, 7.5, 0.2, n_fock=3)
        assert (2 + (-0.1)) * 5.0 == pytest.approx(9.5)
        space = h.space
        # <2,g,0|H|2,g,0> = 2 pi omega_2
        idx = np.ravel_multi_index((2, 0, 0), space.dims)
        assert h.matrix[idx, idx].real == pytest.approx(TAU * 9.5)
        # coupling element <1,g,1_cav|H|2,g,0_cav> = 2 pi sqrt(2) g0
        row = np.ravel_multi_index((1, 0, 1), space.dims)
        col = np.ravel_multi_index((2, 0, 0), space.dims)
        assert h.matrix[row, col].real == pytest.approx(TAU * math.sqrt(2) * 0.2)

    def test_zero_coupling_product_spectrum(self):
        h = build_transmon_multilevel(5.0, -0.1, 7.5, 0.0, n_fock=2)
        evals = np.sort(np.linalg.eigvalsh(h.matrix))
        levels = np.array([0.0, 5.0, 9.5])
        free = [
            TAU * (levels[i] + levels[j] + 7.5 * n)
            for i in range(3)
            for j in range(3)
            for n in range(2)
        ]
        np.testing.assert_allclose(evals, np.sort(free), atol=1e-9)


class TestDispersiveCoupling:
    def test_printed_value(self):
        j = effective_xy_coupling(0.2, 5.0, 7.5)
        assert j == pytest.approx(-0.0064)
        assert abs(j) == pytest.approx(0.0064, abs=1e-12)

    def test_zero_coupling(self):
        assert effective_xy_coupling(0.0, 5.0, 7.5) == 0.0

    def test_algebraic_identity(self):
        # J(w1, wr) (w1^2 - wr^2) = g01^2 w1 for any detuning
        for w1, wr in [(5.0, 7.5), (6.0, 4.0), (5.0, 5.5)]:
            j = effective_xy_coupling(0.3, w1, wr)
            assert j * (w1**2 - wr**2) == pytest.approx(0.3**2 * w1)

    def test_resonance_error(self):
        with pytest.raises(ValueError):
            effective_xy_coupling(0.2, 5.0, 5.0)


def test_unit_round_trip_scaling():
    # scaling frequencies by s and time by 1/s leaves populations invariant
    from cqedsim.evolve import evolve_unitary
    from cqedsim.qops import basis_state

    s = 10.0
    times = np.linspace(0.0, 40.0, 9)
    pops = []
    for scale in (1.0, s):
        p = CavityQubitParams(omega_q=5.0 * scale, omega_r=5.0 * scale, g=0.01 * scale, n_fock=5)
        h = build_cavity_qubit(p, "jc")
        psi0 = basis_state(h.space, (1, 0))
        traj = evolve_unitary(h, psi0, times / scale)
        pe = [
            float(np.sum(np.abs(st.data.reshape(2, 5)[1]) ** 2)) for st in traj.states
        ]
        pops.append(pe)
    np.testing.assert_allclose(pops[0], pops[1], atol=1e-12)
