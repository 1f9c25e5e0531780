import numpy as np
import pytest

from gsteer.dynamics import (
    BathParameters,
    Trajectory,
    evolve,
    gamma_infinity,
    j2_initial_squeezed,
    stationary_state,
    sweep,
)
from gsteer.linalg import ValidationError
from gsteer.states import squeezed_vacuum_state, validate_state
from gsteer.steering import j2

SINH1_SQ = 1.3810978455418155      # sinh(1)^2
COSH1_SINH1 = 1.8134302039235093   # cosh(1) * sinh(1)


class TestBathParameters:
    def test_derived_quantities_vacuum_bath(self):
        bath = BathParameters(0.0, 0.0, 0.0, 0.1)
        assert bath.photon_number == 0.0
        assert bath.squeezing == 0.0

    def test_derived_quantities_squeezed_bath(self):
        bath = BathParameters(0.0, 1.0, 0.0, 0.1)
        assert bath.photon_number == pytest.approx(SINH1_SQ, abs=1e-12)
        assert bath.squeezing.real == pytest.approx(-COSH1_SINH1, abs=1e-12)
        assert bath.squeezing.imag == pytest.approx(0.0, abs=1e-12)

    def test_squeezing_inequality_holds_across_grid(self):
        # |M|^2 <= N(N+1) is an identity of the parametrization
        for nth in (0.0, 0.5, 3.0, 30.0):
            for R in (0.0, 0.5, 2.0):
                for phi in (0.0, 1.0, 10.0):
                    bath = BathParameters(nth, R, phi, 0.1)
                    n, m = bath.photon_number, bath.squeezing
                    assert abs(m) ** 2 <= n * (n + 1.0) + 1e-9 * max(1.0, n * n)

    def test_invalid_parameters(self):
        with pytest.raises(ValidationError):
            BathParameters(-0.1, 0.0, 0.0, 0.1)
        with pytest.raises(ValidationError):
            BathParameters(0.0, 0.0, 0.0, 0.0)
        with pytest.raises(ValidationError):
            BathParameters(0.0, np.inf, 0.0, 0.1)


class TestGammaInfinity:
    def test_vacuum_bath_gives_identity(self):
        bath = BathParameters(0.0, 0.0, 0.0, 0.1)
        assert np.allclose(gamma_infinity(bath), np.eye(4), atol=1e-15)

    def test_thermal_bath(self):
        # N = 1, M = 0: diagonal entries 2(1/2 + 1) = 3
        bath = BathParameters(1.0, 0.0, 0.0, 0.1)
        assert np.allclose(gamma_infinity(bath), 3.0 * np.eye(4), atol=1e-15)

    def test_squeezed_bath_blocks(self):
        bath = BathParameters(0.0, 1.0, 0.0, 0.1)
        g = gamma_infinity(bath)
        l_plus = SINH1_SQ - COSH1_SINH1
        l_minus = SINH1_SQ + COSH1_SINH1
        assert g[0, 0] == pytest.approx(2 * (0.5 + l_plus), abs=1e-12)
        assert g[1, 1] == pytest.approx(2 * (0.5 + l_minus), abs=1e-12)
        assert g[0, 1] == pytest.approx(0.0, abs=1e-15)
        assert np.allclose(g[:2, :2], g[2:, 2:], atol=1e-15)
        assert np.array_equal(g[:2, 2:], np.zeros((2, 2)))

    def test_phase_rotates_into_off_diagonal(self):
        bath = BathParameters(0.0, 1.0, np.pi / 2, 0.1)
        g = gamma_infinity(bath)
        assert g[0, 1] == pytest.approx(2 * bath.squeezing.imag, abs=1e-12)

    def test_always_bona_fide(self):
        for nth in (0.0, 1.0, 10.0, 30.0):
            for R in (0.0, 0.5, 1.0, 3.0):
                for phi in (0.0, 10.0, 20.0):
                    bath = BathParameters(nth, R, phi, 0.1)
                    assert validate_state(stationary_state(bath)).ok


class TestEvolve:
    def test_time_zero_identity(self):
        s0 = squeezed_vacuum_state(1.0)
        bath = BathParameters(0.0, 1.0, 10.0, 0.1)
        out = evolve(s0, bath, 0.0)
        assert np.array_equal(out.cov, s0.cov)

    def test_long_time_limit(self):
        s0 = squeezed_vacuum_state(1.0)
        bath = BathParameters(0.5, 0.3, 0.0, 0.1)
        out = evolve(s0, bath, 1e4)
        assert np.allclose(out.cov, gamma_infinity(bath), atol=1e-10)

    def test_half_life_midpoint(self):
        s0 = squeezed_vacuum_state(0.8)
        bath = BathParameters(0.0, 1.0, 0.0, 0.1)
        out = evolve(s0, bath, np.log(2.0) / bath.lam)
        assert np.allclose(out.cov, (s0.cov + gamma_infinity(bath)) / 2.0, atol=1e-12)

    def test_semigroup_composition(self):
        s0 = squeezed_vacuum_state(1.0)
        bath = BathParameters(0.2, 0.7, 3.0, 0.25)
        one_step = evolve(s0, bath, 5.0)
        two_steps = evolve(evolve(s0, bath, 2.0), bath, 3.0)
        assert np.abs(one_step.cov - two_steps.cov).max() < 1e-10

    def test_mean_damping(self):
        from gsteer.states import make_state

        s0 = make_state(1, 1, 2.0 * np.eye(4), mean=[2.0, 0.0, -1.0, 1.0])
        bath = BathParameters(0.0, 0.0, 0.0, 0.5)
        out = evolve(s0, bath, 3.0)
        assert np.allclose(out.mean, np.exp(-0.75) * s0.mean, atol=1e-14)

    def test_evolved_states_stay_bona_fide(self):
        s0 = squeezed_vacuum_state(1.5)
        bath = BathParameters(0.0, 2.0, 7.0, 0.1)
        for t in np.linspace(0.0, 40.0, 100):
            assert validate_state(evolve(s0, bath, t)).ok

    def test_rejects_negative_time(self):
        with pytest.raises(ValidationError):
            evolve(squeezed_vacuum_state(1.0), BathParameters(0, 1, 0, 0.1), -1.0)

    def test_rejects_wrong_partition(self):
        from gsteer.states import random_state

        with pytest.raises(ValidationError):
            evolve(random_state(1, 2, 2.0, 0), BathParameters(0, 1, 0, 0.1), 1.0)


class TestInitialValueFormula:
    def test_zero_at_rest(self):
        assert j2_initial_squeezed(0.0) == 0.0

    def test_matches_state_computation(self):
        for r in (0.0, 0.3, 1.0, 2.0):
            assert j2_initial_squeezed(r) == pytest.approx(
                j2(squeezed_vacuum_state(r)), abs=1e-10)

    def test_trend_on_grid(self):
        # tabulated on [0, 3]: strictly increasing toward the limit value 1
        grid = [j2_initial_squeezed(r) for r in np.linspace(0.0, 3.0, 61)]
        assert np.all(np.diff(grid) > 0)
        assert grid[-1] > 0.99
        assert grid[-1] < 1.0

    def test_rejects_negative(self):
        with pytest.raises(ValidationError):
            j2_initial_squeezed(-0.5)


class TestSweep:
    def test_constant_when_started_stationary(self):
        bath = BathParameters(0.5, 0.2, 0.0, 0.1)
        traj = sweep(stationary_state(bath), bath, np.linspace(0, 10, 11))
        assert np.abs(np.diff(traj.j2_values)).max() < 1e-12

    def test_monotone_decay_reference_curve(self):
        bath = BathParameters(0.0, 1.0, 10.0, 0.1)
        traj = sweep(squeezed_vacuum_state(1.0), bath, np.arange(0.0, 60.01, 0.1))
        assert traj.j2_values[0] == pytest.approx(j2_initial_squeezed(1.0), abs=1e-12)
        assert np.all(np.diff(traj.j2_values) <= 1e-12)
        assert traj.j2_values[-1] < 1e-3

    def test_envelope_bound_holds_everywhere(self):
        rng = np.random.default_rng(91)
        grid = np.linspace(0.0, 30.0, 61)
        for _ in range(100):
            r = float(rng.uniform(0.0, 2.0))
            bath = BathParameters(float(rng.uniform(0.0, 5.0)),
                                  float(rng.uniform(0.0, 2.0)),
                                  float(rng.uniform(0.0, 30.0)),
                                  float(rng.uniform(0.05, 1.0)))
            traj = sweep(squeezed_vacuum_state(r), bath, grid)
            assert np.all(traj.j2_values <= traj.bound_values + 1e-9)

    def test_grid_validation(self):
        bath = BathParameters(0.0, 1.0, 0.0, 0.1)
        s = squeezed_vacuum_state(1.0)
        with pytest.raises(ValidationError):
            sweep(s, bath, [0.0, 0.0, 1.0])
        with pytest.raises(ValidationError):
            sweep(s, bath, [-1.0, 0.0])
        with pytest.raises(ValidationError):
            sweep(s, bath, [])


class TestTrajectory:
    def test_csv_format(self):
        traj = Trajectory(np.array([0.0, 0.5]), np.array([0.25, 0.125]),
                          np.array([0.5, 0.25]))
        lines = traj.to_csv().splitlines()
        assert lines[0] == "t,j2,bound"
        assert lines[1] == "0,0.25,0.5"
        assert len(lines) == 3

    def test_full_precision(self):
        v = 0.1234567890123456789
        traj = Trajectory(np.array([0.0]), np.array([v]), np.array([v]))
        field = traj.to_csv().splitlines()[1].split(",")[1]
        assert float(field) == v

    def test_length_and_order_validation(self):
        with pytest.raises(ValidationError):
            Trajectory(np.array([0.0, 1.0]), np.array([0.0]), np.array([0.0]))
        with pytest.raises(ValidationError):
            Trajectory(np.array([1.0, 0.0]), np.zeros(2), np.zeros(2))
