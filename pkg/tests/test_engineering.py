import math

import numpy as np
import pytest

from zenosim.engineering import (InteractionOperator, Jump, LindbladSystem,
                                 bloch_jacobian,
                                 build_target_interaction_hamiltonian,
                                 build_two_qubit_jumps, default_sphere_seeds,
                                 design_target_theta,
                                 dissipative_postselected_rhs, find_stationary,
                                 integrate_bloch, lindblad_rhs,
                                 single_qubit_bloch_rhs, theta_rhs,
                                 two_qubit_hamiltonian, verify_stationary)
from zenosim.errors import (DegenerateInteraction, DimensionMismatch,
                            Infeasible, PlaneLeavingInteraction,
                            ValidationError)
from zenosim.pauli import SIGMA_X, SIGMA_Y, SIGMA_Z, basis_ket, ket_density
from zenosim.states import bloch_vector
from conftest import random_density

MONITOR_EXCITED = InteractionOperator(a=0.0, b=0.0, c=1.0, d=0.0)
SIGMA_MINUS = np.array([[0, 0], [1, 0]], dtype=complex)  # |0> -> |1>, dark state |1>


class TestLindbladRhs:
    def test_dark_state_of_lowering_jump_is_stationary(self):
        sys_ = LindbladSystem(h_sys=np.zeros((2, 2)),
                              jumps=(Jump(SIGMA_MINUS, alpha=0.8),))
        dark = ket_density(np.array([0.0, 1.0]))  # the state the jump annihilates
        np.testing.assert_allclose(lindblad_rhs(dark, sys_), 0.0, atol=1e-15)
        # the monitored pole, by contrast, decays
        bright = ket_density(np.array([1.0, 0.0]))
        assert np.max(np.abs(lindblad_rhs(bright, sys_))) > 0.1

    def test_no_jumps_is_pure_rotation(self, rng):
        omega = 0.7
        sys_ = LindbladSystem(h_sys=omega * SIGMA_X, jumps=())
        rho = random_density(rng, 2)
        expected = -1j * omega * (SIGMA_X @ rho - rho @ SIGMA_X)
        np.testing.assert_allclose(lindblad_rhs(rho, sys_), expected, atol=1e-14)

    def test_pair_target_states_are_stationary(self):
        sys_ = LindbladSystem(h_sys=two_qubit_hamiltonian(),
                              jumps=tuple(Jump(op, alpha=1.0)
                                          for op in build_two_qubit_jumps()))
        rho = ket_density(basis_ket("00"))
        np.testing.assert_allclose(lindblad_rhs(rho, sys_), 0.0, atol=1e-15)

    def test_full_form_is_traceless(self, rng):
        for _ in range(20):
            op = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
            h = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
            sys_ = LindbladSystem(h_sys=h + h.conj().T,
                                  jumps=(Jump(op, alpha=rng.uniform(0, 2)),))
            out = lindblad_rhs(random_density(rng, 4), sys_)
            assert abs(np.trace(out)) < 1e-12

    def test_euler_steps_preserve_hermiticity(self, rng):
        op = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        sys_ = LindbladSystem(h_sys=0.4 * SIGMA_Y, jumps=(Jump(op, alpha=0.6),))
        rho = random_density(rng, 2)
        for _ in range(100):
            rho = rho + 1e-4 * lindblad_rhs(rho, sys_)
        assert np.max(np.abs(rho - rho.conj().T)) < 1e-10

    def test_dimension_mismatch(self):
        sys_ = LindbladSystem(h_sys=np.zeros((2, 2)), jumps=())
        with pytest.raises(DimensionMismatch):
            lindblad_rhs(np.eye(4) / 4, sys_)
        with pytest.raises(DimensionMismatch):
            LindbladSystem(h_sys=np.zeros((2, 2)),
                           jumps=(Jump(np.zeros((4, 4)), alpha=1.0),))

    def test_non_hermitian_hamiltonian_rejected(self):
        with pytest.raises(ValidationError):
            LindbladSystem(h_sys=np.array([[0, 1], [0, 0]]), jumps=())


class TestSingleQubitBlochRhs:
    def test_designed_fixed_point(self):
        lam = 3.0
        omega = 1.0
        alpha = 2 * lam * omega
        v = np.array([0.0, -1 / lam, math.sqrt(lam**2 - 1) / lam])
        np.testing.assert_allclose(
            single_qubit_bloch_rhs(v, MONITOR_EXCITED, omega, alpha), 0.0, atol=1e-15)

    def test_no_measurement_is_free_precession(self, rng):
        v = rng.uniform(-0.5, 0.5, 3)
        omega = 0.9
        out = single_qubit_bloch_rhs(v, MONITOR_EXCITED, omega, 0.0)
        np.testing.assert_allclose(out, [0.0, -omega * v[2], omega * v[1]], atol=1e-15)

    def test_traceless_interaction_cancels_measurement_drift(self, rng):
        # a = -c makes (a+c) = 0: drift vanishes for any d
        s = InteractionOperator(a=0.7, b=0.0, c=-0.7, d=1.3)
        v = rng.uniform(-0.5, 0.5, 3)
        omega = 0.4
        out = single_qubit_bloch_rhs(v, s, omega, alpha=2.0)
        np.testing.assert_allclose(out, [0.0, -omega * v[2], omega * v[1]], atol=1e-14)

    def test_bridge_to_postselected_lindblad_form(self, rng):
        # Bloch extraction of -i[(omega/2) sx, rho] - (a/2){S+S, rho}
        # + a tr[rho S+S] rho equals the closed-form flow
        for _ in range(100):
            a, b, c, d = rng.uniform(-1.5, 1.5, 4)
            s = InteractionOperator(a=a, b=b, c=c, d=d)
            omega = rng.uniform(0, 2)
            alpha = rng.uniform(0, 2)
            v = rng.uniform(-1, 1, 3)
            norm = np.linalg.norm(v)
            if norm > 1:
                v /= norm * 1.0001
            rho = (np.eye(2, dtype=complex)
                   + v[0] * SIGMA_X + v[1] * SIGMA_Y + v[2] * SIGMA_Z) / 2
            rhodot = dissipative_postselected_rhs(rho, s.matrix, alpha,
                                                  (omega / 2) * SIGMA_X)
            np.testing.assert_allclose(
                single_qubit_bloch_rhs(v, s, omega, alpha),
                bloch_vector(rhodot), atol=1e-12)


class TestFindStationary:
    def test_monitoring_design_fixed_points(self):
        lam = 3.0
        omega, alpha = 1.0, 2 * 3.0 * 1.0
        roots = find_stationary(MONITOR_EXCITED, omega, alpha)
        target = np.array([0.0, -1 / lam, math.sqrt(8) / 3])
        assert any(np.max(np.abs(r - target)) < 1e-9 for r in roots)
        mirror = np.array([0.0, -1 / lam, -math.sqrt(8) / 3])
        assert any(np.max(np.abs(r - mirror)) < 1e-9 for r in roots)
        for r in roots:
            assert np.linalg.norm(
                single_qubit_bloch_rhs(r, MONITOR_EXCITED, omega, alpha)) < 1e-12
            assert np.linalg.norm(r) <= 1 + 1e-9

    def test_small_ratio_has_no_sphere_root_of_that_family(self):
        # lam < 1: z = sqrt(lam^2-1)/lam is imaginary; the only real roots
        # sit on the interior line y = -lam, z = 0
        lam = 0.5
        omega, alpha = 1.0, 2 * lam * 1.0
        roots = find_stationary(MONITOR_EXCITED, omega, alpha)
        assert roots, "generic seeds should land on the interior root line"
        for r in roots:
            assert r[1] == pytest.approx(-lam, abs=1e-9)
            assert r[2] == pytest.approx(0.0, abs=1e-9)

    def test_free_precession_axis(self):
        # alpha = 0: rhs = (0, -wz, wy); roots fill the x-axis
        seeds = [np.array([1.0, 0, 0]), np.array([-1.0, 0, 0]),
                 np.array([0.5, 0.3, -0.2])]
        roots = find_stationary(MONITOR_EXCITED, omega=1.0, alpha=0.0, seeds=seeds)
        assert roots
        for r in roots:
            assert abs(r[1]) < 1e-9 and abs(r[2]) < 1e-9

    def test_requires_a_seed(self):
        with pytest.raises(ValidationError):
            find_stationary(MONITOR_EXCITED, 1.0, 1.0, seeds=[])

    def test_default_seed_grid(self):
        seeds = default_sphere_seeds()
        assert len(seeds) == 26
        for v in seeds:
            assert np.linalg.norm(v) == pytest.approx(1.0, abs=1e-12)

    def test_rescaling_invariance(self):
        # (a,b,c,d) -> kappa(a,b,c,d), alpha -> alpha/kappa^2 leaves the
        # vector field (hence the fixed points) unchanged
        kappa = 2.0
        scaled = InteractionOperator(a=0.0, b=0.0, c=kappa, d=0.0)
        omega, alpha = 1.0, 6.0
        base_roots = find_stationary(MONITOR_EXCITED, omega, alpha)
        scaled_roots = find_stationary(scaled, omega, alpha / kappa**2)
        assert len(base_roots) == len(scaled_roots)
        for rb, rs in zip(base_roots, scaled_roots):
            np.testing.assert_allclose(rb, rs, atol=1e-9)


class TestThetaFlow:
    def test_designed_angle_freezes(self):
        # for the excited-state monitor the freeze sits at sin(theta) = -1/lam
        lam = 3.0
        omega, alpha = 0.7, 2 * lam * 0.7
        theta = math.asin(-1 / lam)
        assert theta_rhs(theta, MONITOR_EXCITED, omega, alpha) == pytest.approx(0.0, abs=1e-14)
        # the opposite sign sits maximally far from stationary
        assert theta_rhs(math.asin(1 / lam), MONITOR_EXCITED, omega, alpha) == pytest.approx(
            -2 * omega, abs=1e-12)

    def test_no_measurement_uniform_drift(self):
        for theta in np.linspace(-3, 3, 7):
            assert theta_rhs(theta, MONITOR_EXCITED, 0.8, 0.0) == pytest.approx(-0.8)

    def test_traceless_interaction_gives_free_drift(self):
        s = InteractionOperator(a=0.5, b=0.0, c=-0.5, d=0.9)
        for theta in np.linspace(-3, 3, 7):
            assert theta_rhs(theta, s, 0.6, 1.7) == pytest.approx(-0.6)

    def test_rejects_plane_leaving_interaction(self):
        s = InteractionOperator(a=0.0, b=0.5, c=1.0, d=0.0)
        with pytest.raises(PlaneLeavingInteraction):
            theta_rhs(0.3, s, 1.0, 1.0)


class TestDesignTargetTheta:
    def test_excited_state_monitor_at_lam_three(self):
        design = design_target_theta(MONITOR_EXCITED, lam=3.0)
        assert design.xi == pytest.approx(math.pi)
        assert design.theta == pytest.approx(math.asin(1 / 3) - math.pi, rel=1e-14)
        assert design.theta_alt == pytest.approx(-math.asin(1 / 3), rel=1e-14)
        omega, alpha = 1.0, 6.0
        for theta in (design.theta, design.theta_alt):
            assert abs(theta_rhs(theta, MONITOR_EXCITED, omega, alpha)) < 1e-10

    def test_large_ratio_approaches_minus_xi(self):
        design = design_target_theta(MONITOR_EXCITED, lam=1e4)
        assert design.theta == pytest.approx(-design.xi, abs=2e-4)
        assert abs(theta_rhs(design.theta, MONITOR_EXCITED, 0.5, 1e4)) < 1e-9

    def test_degenerate_interaction(self):
        with pytest.raises(DegenerateInteraction):
            design_target_theta(InteractionOperator(a=1.0, b=0.0, c=1.0, d=0.0), lam=2.0)
        with pytest.raises(DegenerateInteraction):
            design_target_theta(InteractionOperator(a=0.5, b=0.0, c=-0.5, d=0.0), lam=2.0)

    def test_infeasible_ratio(self):
        with pytest.raises(Infeasible):
            design_target_theta(MONITOR_EXCITED, lam=0.5)

    def test_plane_leaving_rejected(self):
        with pytest.raises(PlaneLeavingInteraction):
            design_target_theta(InteractionOperator(a=0.0, b=0.1, c=1.0, d=0.0), lam=3.0)

    def test_off_diagonal_imaginary_part(self):
        s = InteractionOperator(a=0.3, b=0.0, c=1.1, d=0.7)
        design = design_target_theta(s, lam=2.5)
        omega = 0.8
        alpha = 2 * 2.5 * omega
        for theta in (design.theta, design.theta_alt):
            assert abs(theta_rhs(theta, s, omega, alpha)) < 1e-10


class TestZenoConvergence:
    def test_pole_start_converges_to_designed_point(self):
        omega, lam = 1.0, 3.0
        alpha = 2 * lam * omega
        target = np.array([0.0, -1 / lam, math.sqrt(8) / 3])
        times, states = integrate_bloch([0.0, 0.0, 1.0], MONITOR_EXCITED,
                                        omega, alpha, dt=1e-3, t_final=100 / omega)
        deviations = np.max(np.abs(states - target), axis=1)
        assert deviations[-1] < 1e-6
        assert times[np.argmax(deviations < 1e-6)] < 100 / omega


class TestTwoQubitTarget:
    def test_jump_action_on_basis(self):
        l2, l3 = build_two_qubit_jumps()
        np.testing.assert_allclose(l2 @ basis_ket("01"),
                                   basis_ket("00") + basis_ket("11"), atol=1e-15)
        np.testing.assert_allclose(l3 @ basis_ket("10"),
                                   basis_ket("00") + basis_ket("11"), atol=1e-15)
        np.testing.assert_allclose(l2 @ basis_ket("00"), 0.0, atol=1e-15)

    def test_jump_normalization(self):
        l2, l3 = build_two_qubit_jumps()
        np.testing.assert_array_equal(l2.conj().T @ l2,
                                      2 * ket_density(basis_ket("01")))
        np.testing.assert_array_equal(l3.conj().T @ l3,
                                      2 * ket_density(basis_ket("10")))

    @pytest.mark.parametrize("label,expected", [("00", True), ("11", True),
                                                ("01", False), ("10", False)])
    def test_stationarity_table(self, label, expected):
        alpha = 0.9
        sys_ = LindbladSystem(h_sys=two_qubit_hamiltonian(),
                              jumps=tuple(Jump(op, alpha)
                                          for op in build_two_qubit_jumps()))
        ok, resid = verify_stationary(ket_density(basis_ket(label)), sys_)
        assert ok is expected
        if not expected:
            assert resid > 0.1 * alpha

    def test_interaction_hamiltonian(self):
        h = build_target_interaction_hamiltonian(0.0)
        np.testing.assert_array_equal(h, np.zeros((8, 8)))
        j = 1.7
        h = build_target_interaction_hamiltonian(j)
        np.testing.assert_allclose(h, h.conj().T, atol=1e-14)
        # <B1, 1_d| H |B2, 0_d> = J  (probe index is the fast one)
        assert h[0 * 2 + 1, 1 * 2 + 0] == pytest.approx(j)
        assert h[3 * 2 + 1, 2 * 2 + 0] == pytest.approx(j)  # <B4,1|H|B3,0>
