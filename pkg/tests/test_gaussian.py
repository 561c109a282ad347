"""Gaussian-state simulator: basis change, symplectic maps, evolution."""

import math

import numpy as np
import pytest
from scipy.linalg import expm

from zenofloquet import gaussian
from zenofloquet.floquet import Classification, DriveSchedule, classify_schedule
from zenofloquet.gaussian import (
    GaussianState,
    InvalidStateError,
    PM_BASIS,
    coherent_state,
    evolve,
    photon_numbers,
    pm_period_blocks,
    pm_to_quadratures,
    quadratures_to_pm,
    segment_symplectics,
    single_mode_period_symplectic,
    squeezed_vacuum_state,
    symplectic_eigenvalues,
    symplectic_form,
    two_mode_period_symplectic,
    vacuum_state,
)


def random_schedules(count, seed, max_product=3.0, periods=1):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        g, w = rng.uniform(0.0, max_product, size=2)
        yield DriveSchedule.from_products(g, w, periods=periods)


def reference_segment_flows(schedule):
    """Independent oracle: exponentiate the canonical flow Omega_sym @ G.

    The quadratic Hamiltonians in quadrature form are
    ``H_u = gamma (x_a x_b - p_a p_b)`` and ``H_s = omega (x_a x_b + p_a p_b)``
    (ladder algebra done by hand), and a quadratic ``H = xi^T G xi / 2``
    generates ``d xi/dt = Omega_sym @ G @ xi``.
    """
    g_u = np.zeros((4, 4))
    g_u[0, 2] = g_u[2, 0] = schedule.gamma
    g_u[1, 3] = g_u[3, 1] = -schedule.gamma
    g_s = np.zeros((4, 4))
    g_s[0, 2] = g_s[2, 0] = schedule.omega
    g_s[1, 3] = g_s[3, 1] = schedule.omega
    form = symplectic_form(2)
    s_u = expm(schedule.tau1 * form @ g_u)
    s_s = expm(schedule.tau2 * form @ g_s)
    return s_u, s_s


class TestStateConstruction:
    def test_vacuum(self):
        state = vacuum_state(2)
        np.testing.assert_array_equal(state.mean, np.zeros(4))
        np.testing.assert_array_equal(state.covariance, np.eye(4) / 2)
        assert state.mode_count == 2

    def test_asymmetric_covariance_rejected(self):
        cov = np.eye(2) / 2
        cov[0, 1] = 1e-6
        with pytest.raises(InvalidStateError):
            GaussianState(np.zeros(2), cov)

    def test_uncertainty_violation_rejected(self):
        with pytest.raises(InvalidStateError):
            GaussianState(np.zeros(2), 0.2 * np.eye(2))

    def test_shape_mismatch_rejected(self):
        with pytest.raises(InvalidStateError):
            GaussianState(np.zeros(2), np.eye(4) / 2)

    def test_states_are_immutable(self):
        state = vacuum_state(1)
        with pytest.raises(ValueError):
            state.covariance[0, 0] = 3.0

    def test_squeezed_vacuum_variances(self):
        r = 0.8
        state = squeezed_vacuum_state(r)
        assert state.covariance[0, 0] == pytest.approx(math.exp(-2 * r) / 2)
        assert state.covariance[1, 1] == pytest.approx(math.exp(2 * r) / 2)
        assert symplectic_eigenvalues(state.covariance).min() == pytest.approx(0.5)

    def test_squeezed_vacuum_rotated(self):
        state = squeezed_vacuum_state(0.5, math.pi)
        # phi = pi swaps the squeezed and stretched quadratures
        assert state.covariance[0, 0] == pytest.approx(math.exp(1.0) / 2)
        assert state.covariance[1, 1] == pytest.approx(math.exp(-1.0) / 2)


class TestPhotonNumbers:
    def test_vacuum_is_zero(self):
        numbers = photon_numbers(vacuum_state(2))
        np.testing.assert_allclose(numbers.per_mode, 0.0, atol=1e-12)
        assert numbers.total == pytest.approx(0.0, abs=1e-12)

    def test_unit_coherent_amplitude(self):
        # mean (sqrt(2), 0) is |alpha| = 1, hence one photon
        numbers = photon_numbers(coherent_state([1.0]))
        assert numbers.per_mode[0] == pytest.approx(1.0)

    def test_two_mode_coherent(self):
        numbers = photon_numbers(coherent_state([1.0 + 1.0j, 2.0j]))
        np.testing.assert_allclose(numbers.per_mode, [2.0, 4.0])
        assert numbers.total == pytest.approx(6.0)

    def test_squeezed_vacuum_photons(self):
        r = 0.65
        numbers = photon_numbers(squeezed_vacuum_state(r))
        assert numbers.per_mode[0] == pytest.approx(math.sinh(r) ** 2)


class TestPmBasis:
    def test_orthogonal_and_symplectic(self):
        np.testing.assert_allclose(PM_BASIS @ PM_BASIS.T, np.eye(4), atol=1e-15)
        form = symplectic_form(2)
        np.testing.assert_allclose(PM_BASIS @ form @ PM_BASIS.T, form, atol=1e-15)

    def test_round_trip(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            v = rng.standard_normal(4)
            np.testing.assert_allclose(pm_to_quadratures(quadratures_to_pm(v)),
                                       v, atol=1e-14)

    def test_zero_maps_to_zero(self):
        np.testing.assert_array_equal(quadratures_to_pm(np.zeros(4)), np.zeros(4))

    def test_vacuum_covariance_invariant(self):
        cov = np.eye(4) / 2
        np.testing.assert_allclose(PM_BASIS @ cov @ PM_BASIS.T, cov, atol=1e-15)

    def test_plus_is_difference_combination(self):
        v = quadratures_to_pm([1.0, 0.0, 0.0, 0.0])  # x_a displacement only
        assert v[0] == pytest.approx(1 / math.sqrt(2))
        assert v[2] == pytest.approx(1 / math.sqrt(2))


class TestPeriodMaps:
    def test_identity_without_couplings(self):
        s = DriveSchedule.from_products(0.0, 0.0, periods=1)
        np.testing.assert_allclose(two_mode_period_symplectic(s), np.eye(4), atol=1e-15)

    def test_symplectic_form_preserved(self):
        form = symplectic_form(2)
        for s in random_schedules(200, seed=12):
            m = two_mode_period_symplectic(s)
            np.testing.assert_allclose(m @ form @ m.T, form, atol=1e-10)

    def test_matches_segment_composition(self):
        for s in random_schedules(100, seed=31):
            s_u, s_s = segment_symplectics(s, 2)
            np.testing.assert_allclose(two_mode_period_symplectic(s), s_s @ s_u,
                                       atol=1e-12)

    def test_matches_canonical_flow_oracle(self):
        for s in random_schedules(60, seed=44, max_product=2.0):
            s_u_ref, s_s_ref = reference_segment_flows(s)
            s_u, s_s = segment_symplectics(s, 2)
            np.testing.assert_allclose(s_u, s_u_ref, atol=1e-12)
            np.testing.assert_allclose(s_s, s_s_ref, atol=1e-12)
            np.testing.assert_allclose(two_mode_period_symplectic(s),
                                       s_s_ref @ s_u_ref, atol=1e-11)

    def test_pm_blocks_share_the_monodromy_trace(self):
        for s in random_schedules(200, seed=8):
            plus, minus = pm_period_blocks(s)
            expected = 2 * math.cos(s.omega_tau2) * math.cosh(s.gamma_tau1)
            assert np.trace(plus) == pytest.approx(expected, abs=1e-12)
            assert np.trace(minus) == pytest.approx(expected, abs=1e-12)

    def test_quarter_turn_exchanges_modes(self):
        s = DriveSchedule.from_products(0.0, math.pi / 2, periods=1)
        m = two_mode_period_symplectic(s)
        # each quadrature maps onto the other mode's, up to sign
        expected_abs = np.zeros((4, 4))
        expected_abs[0, 3] = expected_abs[1, 2] = 1.0
        expected_abs[2, 1] = expected_abs[3, 0] = 1.0
        np.testing.assert_allclose(np.abs(m), expected_abs, atol=1e-12)

    def test_single_mode_pure_rotation_without_pump(self):
        s = DriveSchedule.from_products(0.0, 0.8, periods=1)
        m = single_mode_period_symplectic(s)
        np.testing.assert_allclose(m, [[math.cos(0.8), math.sin(0.8)],
                                       [-math.sin(0.8), math.cos(0.8)]], atol=1e-15)

    def test_single_mode_half_trace_matches_two_mode_criterion(self):
        for s in random_schedules(200, seed=17):
            half_trace = abs(np.trace(single_mode_period_symplectic(s))) / 2
            expected = abs(math.cos(s.omega_tau2) * math.cosh(s.gamma_tau1))
            assert half_trace == pytest.approx(expected, abs=1e-12)

    def test_single_mode_pi_rotation_is_unstable(self):
        s = DriveSchedule.from_products(0.5, math.pi, periods=1)
        half_trace = abs(np.trace(single_mode_period_symplectic(s))) / 2
        assert half_trace == pytest.approx(math.cosh(0.5), abs=1e-12)
        assert half_trace > 1

    def test_single_mode_symplectic(self):
        form = symplectic_form(1)
        for s in random_schedules(100, seed=91):
            m = single_mode_period_symplectic(s)
            np.testing.assert_allclose(m @ form @ m.T, form, atol=1e-10)


class TestEvolve:
    def test_vacuum_fixed_without_couplings(self):
        s = DriveSchedule.from_products(0.0, 0.0, periods=5)
        traj = evolve(vacuum_state(2), s)
        assert len(traj) == 6
        for state in traj:
            np.testing.assert_allclose(state.mean, np.zeros(4), atol=1e-15)
            np.testing.assert_allclose(state.covariance, np.eye(4) / 2, atol=1e-15)

    def test_two_mode_squeezing_closed_form(self):
        n = 8
        g = 0.12
        s = DriveSchedule.from_products(g, 0.0, periods=n)
        traj = evolve(vacuum_state(2), s)
        for k in range(n + 1):
            expected = math.sinh(k * g) ** 2
            for mode in (0, 1):
                value = traj.photons_per_mode[k, mode]
                assert value == pytest.approx(expected, rel=1e-9, abs=1e-15)

    def test_stable_run_stays_bounded(self):
        s = DriveSchedule.from_products(0.1, 1.0, periods=10_000)
        traj = evolve(vacuum_state(2), s, record_states=False)
        assert traj.status == "ok"
        assert traj.photon_totals.max() < 1.0

    def test_stable_bound_from_block_condition_numbers(self):
        for s in random_schedules(40, seed=57, periods=2000):
            report = classify_schedule(s)
            if report.classification is not Classification.STABLE:
                continue
            if abs(report.half_trace - 1.0) <= 1e-3:
                continue
            plus, minus = pm_period_blocks(s)
            kappas = [np.linalg.cond(np.linalg.eig(b)[1]) for b in (plus, minus)]
            bound = (kappas[0] ** 2 + kappas[1] ** 2 - 2.0) / 2.0
            traj = evolve(vacuum_state(2), s, record_states=False)
            assert traj.photon_totals.max() <= bound * (1 + 1e-9)

    def test_unstable_run_exceeds_megaphoton_deadline(self):
        """Non-marginal unstable runs pass 1e6 photons well before the
        deadline set by the per-period growth rate."""
        rng = np.random.default_rng(13)
        checked = 0
        while checked < 20:
            g, w = rng.uniform(0.0, 1.5), rng.uniform(0.0, math.pi)
            report = classify_schedule(DriveSchedule.from_products(g, w, 1))
            if report.classification is not Classification.UNSTABLE:
                continue
            if report.half_trace - 1.0 <= 1e-3:
                continue
            deadline = int(10_000 * min(
                1.0, 1.0 / (report.floquet_exponent * report.period)))
            s = DriveSchedule.from_products(g, w, periods=10_000)
            traj = evolve(vacuum_state(2), s, record_states=False,
                          photon_cap=1e6)
            assert traj.diverged
            assert traj.periods_completed <= deadline
            checked += 1

    def test_unstable_run_trips_divergence_guard(self):
        s = DriveSchedule.from_products(0.5, 0.1, periods=10_000)
        traj = evolve(vacuum_state(2), s, record_states=False)
        assert traj.diverged
        assert traj.photon_totals[-1] > 1e12
        assert traj.periods_completed < 10_000
        assert traj.photon_totals.size == traj.periods_completed + 1

    def test_uncertainty_and_purity_preserved(self):
        s = DriveSchedule.from_products(0.3, 0.9, periods=50)
        state = squeezed_vacuum_state([0.4, 0.2], [0.0, 1.0])
        traj = evolve(state, s)
        det0 = np.linalg.det(state.covariance)
        for st in traj:
            assert symplectic_eigenvalues(st.covariance).min() >= 0.5 - 1e-10
            assert np.linalg.det(st.covariance) == pytest.approx(det0, abs=1e-10)

    def test_photon_sum_conserved_during_exchange_only(self):
        s = DriveSchedule.from_products(0.0, 0.7, periods=200)
        state = coherent_state([1.2, 0.4 - 0.3j])
        traj = evolve(state, s, record_states=False)
        total0 = traj.photon_totals[0]
        np.testing.assert_allclose(traj.photon_totals, total0, atol=1e-12)

    def test_mode_basis_equals_block_evolution(self):
        s = DriveSchedule.from_products(0.4, 1.1, periods=30)
        state = coherent_state([0.7 + 0.2j, -0.5j])
        traj = evolve(state, s)
        plus, minus = pm_period_blocks(s)
        blocks = np.zeros((4, 4))
        blocks[:2, :2], blocks[2:, 2:] = plus, minus
        mean_pm = PM_BASIS @ state.mean
        cov_pm = PM_BASIS @ state.covariance @ PM_BASIS.T
        for _ in range(30):
            mean_pm = blocks @ mean_pm
            cov_pm = blocks @ cov_pm @ blocks.T
        np.testing.assert_allclose(traj[-1].mean, PM_BASIS.T @ mean_pm, atol=1e-10)
        np.testing.assert_allclose(traj[-1].covariance,
                                   PM_BASIS.T @ cov_pm @ PM_BASIS, atol=1e-10)

    def test_per_segment_sampling(self):
        s = DriveSchedule.from_products(0.3, 0.8, periods=4)
        traj = evolve(vacuum_state(2), s, per_segment=True)
        assert len(traj) == 9
        whole = evolve(vacuum_state(2), s)
        np.testing.assert_allclose(traj[2].covariance, whole[1].covariance, atol=1e-12)
        s_u, _ = segment_symplectics(s, 2)
        np.testing.assert_allclose(traj[1].covariance,
                                   s_u @ (np.eye(4) / 2) @ s_u.T, atol=1e-12)

    def test_single_mode_evolution_photons(self):
        n = 10
        g = 0.08
        s = DriveSchedule.from_products(g, 0.0, periods=n)
        traj = evolve(vacuum_state(1), s)
        assert traj.photons_per_mode[-1, 0] == pytest.approx(
            math.sinh(n * g) ** 2, rel=1e-9)

    def test_rejects_non_state_input(self):
        s = DriveSchedule.from_products(0.1, 0.1, periods=1)
        with pytest.raises(InvalidStateError):
            evolve(np.zeros(4), s)
