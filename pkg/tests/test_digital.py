import math

import numpy as np
import pytest

from cqedsim.digital import (
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
    xy_generator,
)
from cqedsim.evolve import hermitian_expm
from cqedsim.hamlib import TAU
from cqedsim.qops import HilbertSpace, QuantumState, basis_state, elementary, embed


def _uniform_state(n):
    space = HilbertSpace((2,) * n)
    v = np.ones(space.dim, dtype=complex) / math.sqrt(space.dim)
    return QuantumState.pure(space, v)


class TestGateUnitary:
    def test_rotation_group_property(self):
        g1 = Gate("rot_x", (0, 1), angle=math.pi / 4)
        g2 = Gate("rot_x", (0, 1), angle=math.pi / 2)
        u1 = gate_unitary(g1, 2).matrix
        u2 = gate_unitary(g2, 2).matrix
        np.testing.assert_allclose(u1 @ u1, u2, atol=1e-12)

    def test_xy_is_iswap_like(self):
        # 2 pi J t = pi/2 maps |e g> to -i |g e|
        j, t = 0.006, (math.pi / 2) / (TAU * 0.006)
        u = gate_unitary(Gate("xy", (0, 1), J=j, t=t), 2).matrix
        psi = basis_state(HilbertSpace((2, 2)), (1, 0)).data
        out = u @ psi
        expected = -1j * basis_state(HilbertSpace((2, 2)), (0, 1)).data
        np.testing.assert_allclose(out, expected, atol=1e-12)

    def test_outputs_unitary(self):
        gates = [
            Gate("xy", (0, 2), J=0.01, t=7.0),
            Gate("rot_y", (0, 1, 2), angle=0.3),
            Gate("rot_z", (1,), angle=-1.2),
        ]
        for g in gates:
            assert gate_unitary(g, 3).is_unitary(1e-12)

    def test_gate_validation(self):
        with pytest.raises(ValueError):
            Gate("xy", (0,), J=0.01, t=1.0)
        with pytest.raises(ValueError):
            Gate("xy", (1, 1), J=0.01, t=1.0)
        with pytest.raises(ValueError):
            Gate("hadamard", (0,))
        with pytest.raises(ValueError):
            GateSequence(2, (Gate("xy", (0, 3), J=0.1, t=1.0),))


class TestBasisMappingIdentities:
    def test_conjugation_reproduces_xz_and_yz(self):
        # R^x(pi/4) H^xy R^x(pi/4)^dag = J/2 (XX + ZZ), same for y -> (YY + ZZ)
        space = HilbertSpace((2, 2))
        hxy = 0.5 * (
            embed(elementary("pauli_x", 2), space, 0) @ embed(elementary("pauli_x", 2), space, 1)
            + embed(elementary("pauli_y", 2), space, 0) @ embed(elementary("pauli_y", 2), space, 1)
        )
        np.testing.assert_allclose(hxy.matrix, xy_generator(space, 0, 1).matrix, atol=1e-14)
        for axis, partner in (("x", "x"), ("y", "y")):
            r = gate_unitary(Gate(f"rot_{axis}", (0, 1), angle=math.pi / 4), 2).matrix
            conj = r @ hxy.matrix @ r.conj().T
            pp = embed(elementary(f"pauli_{partner}", 2), space, 0) @ embed(
                elementary(f"pauli_{partner}", 2), space, 1
            )
            zz = embed(elementary("pauli_z", 2), space, 0) @ embed(
                elementary("pauli_z", 2), space, 1
            )
            expected = 0.5 * (pp.matrix + zz.matrix)
            np.testing.assert_allclose(conj, expected, atol=1e-12)


class TestHeisenbergProtocol:
    def test_two_qubit_gate_counts(self):
        seq = heisenberg_protocol(2, 0.006, 10.0, 1)
        xy = [g for g in seq.gates if g.kind == "xy"]
        rots = [g for g in seq.gates if g.kind != "xy"]
        assert len(xy) == 3
        assert sum(len(g.targets) for g in rots) == 8

    def test_three_qubit_gate_counts_scale_with_l(self):
        for l in (1, 4):
            seq = heisenberg_protocol(3, 0.006, 10.0, l)
            xy = [g for g in seq.gates if g.kind == "xy"]
            rots = [g for g in seq.gates if g.kind != "xy"]
            assert len(xy) == 6 * l
            assert len(rots) == 4 * l

    def test_two_qubit_protocol_exact(self):
        # the three conjugated pair Hamiltonians commute: one step is exact
        j = 0.006
        for theta in np.linspace(0.05, math.pi / 4, 16):
            t = theta / (TAU * j)
            seq = heisenberg_protocol(2, j, t, 1)
            u = compose(seq).matrix
            target = hermitian_expm(heisenberg_hamiltonian(2, j).matrix, -1j * t)
            assert np.linalg.norm(u - target, 2) <= 1e-10

    def test_adjoint_swap_invariance(self):
        j, t = 0.006, 8.0
        for n, l in ((2, 1), (3, 2)):
            seq = heisenberg_protocol(n, j, t, l)
            u1 = compose(seq).matrix
            u2 = compose(seq.adjoint_swapped()).matrix
            np.testing.assert_allclose(u1, u2, atol=1e-10)

    def test_compose_empty_and_adjoint(self):
        empty = GateSequence(2, ())
        np.testing.assert_allclose(compose(empty).matrix, np.eye(4))
        seq = heisenberg_protocol(2, 0.006, 5.0, 1)
        back = GateSequence(
            2,
            tuple(
                Gate(g.kind, g.targets, -g.J, g.t, -g.angle, g.duration)
                for g in reversed(seq.gates)
            ),
        )
        u = compose(seq).matrix @ compose(back).matrix
        np.testing.assert_allclose(u, np.eye(4), atol=1e-10)

    def test_rejects_bad_l(self):
        with pytest.raises(ValueError):
            heisenberg_protocol(3, 0.006, 1.0, 0)


class TestTrotterBound:
    def test_two_qubit_open_is_zero(self):
        assert trotter_bound(2, 0.006, 10.0, 1) == 0.0

    def test_printed_formula(self):
        theta = math.pi / 4
        t = theta / (TAU * 0.006)
        assert trotter_bound(3, 0.006, t, 3) == pytest.approx(24 * (math.pi / 4) ** 2 / 3)
        assert trotter_bound(3, 0.006, t, 3) == pytest.approx(4.9348, abs=1e-4)
        assert trotter_bound(4, 0.006, t, 2, "periodic") == pytest.approx(
            24 * 4 * theta**2 / 2
        )

    def test_halves_when_l_doubles(self):
        b1 = trotter_bound(5, 0.01, 7.0, 2)
        b2 = trotter_bound(5, 0.01, 7.0, 4)
        assert b2 == pytest.approx(b1 / 2)


class TestFidelityLoss:
    def test_two_qubit_exactness_loss(self):
        j = 0.006
        psi0 = _uniform_state(2)
        h = heisenberg_hamiltonian(2, j)
        for theta in np.linspace(0.1, math.pi / 4, 5):
            t = theta / (TAU * j)
            seq = heisenberg_protocol(2, j, t, 1)
            assert digital_fidelity_loss(seq, h, t, psi0) <= 1e-10

    def test_three_qubit_loss_decreases_with_l(self):
        j = 0.006
        theta = math.pi / 5
        t = theta / (TAU * j)
        psi0 = _uniform_state(3)
        h = heisenberg_hamiltonian(3, j)
        losses = [
            digital_fidelity_loss(heisenberg_protocol(3, j, t, l), h, t, psi0)
            for l in (3, 5)
        ]
        assert losses[1] < losses[0]

    def test_small_theta_scaling_is_fourth_order(self):
        # state-fidelity loss of the second-order-error product formula
        # scales as theta^4 at fixed l
        j, l = 0.006, 2
        psi0 = _uniform_state(3)
        h = heisenberg_hamiltonian(3, j)
        thetas = np.array([0.05, 0.1, 0.2])
        losses = []
        for theta in thetas:
            t = theta / (TAU * j)
            losses.append(digital_fidelity_loss(heisenberg_protocol(3, j, t, l), h, t, psi0))
        slope = np.polyfit(np.log(thetas), np.log(losses), 1)[0]
        assert slope == pytest.approx(4.0, abs=0.4)


class TestErrorBudget:
    def test_reproduces_protocol_fidelity(self):
        seq = heisenberg_protocol(2, 0.006, 10.0, 1)
        err, _ = error_budget(seq, ErrorBudget(eps_1q=0.01, eps_2q=0.05))
        assert 1.0 - err == pytest.approx(0.77, abs=1e-12)

    def test_zero_errors(self):
        seq = heisenberg_protocol(3, 0.006, 10.0, 2)
        err, _ = error_budget(seq, ErrorBudget(eps_1q=0.0, eps_2q=0.0))
        assert err == 0.0

    def test_duration_model(self):
        # 3 xy gates at theta = pi/4 (20.8 ns each) plus 4 collective pulses
        theta = math.pi / 4
        t = theta / (TAU * 0.006)
        seq = heisenberg_protocol(2, 0.006, t, 1)
        _, dur = error_budget(seq, ErrorBudget())
        assert dur == pytest.approx(3 * theta / (TAU * 0.006) + 4 * 4.0, rel=1e-12)
        assert 60.0 < dur < 110.0  # "around 0.10 us" ballpark

    def test_multiplicative_flag(self):
        seq = heisenberg_protocol(2, 0.006, 10.0, 1)
        add, _ = error_budget(seq, ErrorBudget(aggregation="additive"))
        mul, _ = error_budget(seq, ErrorBudget(aggregation="multiplicative"))
        assert mul < add
        assert mul == pytest.approx(1 - (1 - 0.05) ** 3 * (1 - 0.01) ** 8, abs=1e-12)
