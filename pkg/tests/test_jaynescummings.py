import numpy as np
import pytest

from cqed.jaynescummings import (
    JCParams,
    JCSpace,
    index_of,
    jc_hamiltonian,
    product_ket,
    transfer_time,
    vacuum_rabi,
    vacuum_rabi_closed_form,
)
from cqed.linalg import fidelity

SPACE = JCSpace(nmax=5)
G = 1.3
H = jc_hamiltonian(JCParams(G), SPACE)


class TestHamiltonian:
    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_lowers_photon_raises_qubit(self, n):
        out = H @ product_ket(n, 0, SPACE).amps
        expected = G * np.sqrt(n) * product_ket(n - 1, 1, SPACE).amps
        assert np.abs(out - expected).max() < 1e-12

    @pytest.mark.parametrize("n", [0, 1, 2])
    def test_raises_photon_lowers_qubit(self, n):
        out = H @ product_ket(n, 1, SPACE).amps
        expected = G * np.sqrt(n + 1) * product_ket(n + 1, 0, SPACE).amps
        assert np.abs(out - expected).max() < 1e-12

    def test_annihilates_joint_ground(self):
        assert np.abs(H @ product_ket(0, 0, SPACE).amps).max() == 0.0

    def test_h_squared_on_single_excitation(self):
        psi = product_ket(0, 1, SPACE).amps
        assert np.abs(H @ (H @ psi) - G**2 * psi).max() < 1e-12

    def test_excitation_number_conserved(self):
        n_exc = np.diag([n + q for n in range(SPACE.nmax) for q in (0, 1)]).astype(complex)
        comm = H @ n_exc - n_exc @ H
        assert np.abs(comm).max() < 1e-12

    def test_index_layout(self):
        assert index_of(0, 1, SPACE) == 1
        assert index_of(2, 0, SPACE) == 4
        with pytest.raises(ValueError):
            index_of(SPACE.nmax, 0, SPACE)


class TestVacuumRabi:
    def test_matches_closed_form(self):
        times = np.linspace(0.0, 3 * np.pi / G, 40)
        out = vacuum_rabi(JCParams(G), times, SPACE)
        for t, state in zip(times, out["state_at"]):
            ref = vacuum_rabi_closed_form(G, t, SPACE)
            assert 1 - fidelity(state, ref) < 1e-9

    def test_initial_population(self):
        out = vacuum_rabi(JCParams(G), np.array([0.0]), SPACE)
        assert abs(out["p_qubit_excited"].values[0] - 1.0) < 1e-12
        assert abs(out["p_photon"].values[0]) < 1e-12

    def test_probability_conservation(self):
        times = np.linspace(0.0, 10.0, 60)
        out = vacuum_rabi(JCParams(G), times, SPACE)
        total = out["p_qubit_excited"].values + out["p_photon"].values
        assert np.abs(total - 1.0).max() < 1e-10

    def test_excitation_expectation_constant(self):
        times = np.linspace(0.0, 8.0, 30)
        out = vacuum_rabi(JCParams(G), times, SPACE)
        n_exc = np.diag([n + q for n in range(SPACE.nmax) for q in (0, 1)])
        for state in out["state_at"]:
            val = np.vdot(state.amps, n_exc @ state.amps).real
            assert abs(val - 1.0) < 1e-10

    def test_complete_transfer(self):
        t = transfer_time(JCParams(G))
        out = vacuum_rabi(JCParams(G), np.array([t]), SPACE)
        assert abs(out["p_photon"].values[0] - 1.0) < 1e-10
        assert abs(out["p_qubit_excited"].values[0]) < 1e-10

    def test_period(self):
        t = 2 * np.pi / G
        out = vacuum_rabi(JCParams(G), np.array([t]), SPACE)
        assert fidelity(out["state_at"][0], product_ket(0, 1, SPACE)) > 1 - 1e-9

    def test_midpoint_is_maximally_entangled(self):
        t = np.pi / (4 * G)
        out = vacuum_rabi(JCParams(G), np.array([t]), SPACE)
        amps = out["state_at"][0].amps
        a01 = amps[index_of(0, 1, SPACE)]
        a10 = amps[index_of(1, 0, SPACE)]
        assert abs(abs(a01) - 1 / np.sqrt(2)) < 1e-12
        assert abs(abs(a10) - 1 / np.sqrt(2)) < 1e-12
        # Schmidt rank 2 across the cavity/qubit split: not factorizable
        singular = np.linalg.svd(amps.reshape(SPACE.nmax, 2), compute_uv=False)
        assert np.abs(singular[:2] - 1 / np.sqrt(2)).max() < 1e-12


class TestTransferTime:
    def test_value(self):
        assert abs(transfer_time(JCParams(1.0)) - np.pi / 2) < 1e-15

    def test_two_pi_coupling(self):
        assert abs(transfer_time(JCParams(2 * np.pi)) - 0.25) < 1e-15

    def test_scaling(self):
        assert abs(transfer_time(JCParams(2.0)) - transfer_time(JCParams(1.0)) / 2) < 1e-15

    def test_validation(self):
        with pytest.raises(ValueError):
            JCParams(0.0)
        with pytest.raises(ValueError):
            JCSpace(1)
