"""Welfare comparative statics in the intervention level."""

import numpy as np
import pytest

from regimelab import (
    BoundaryError,
    DomainError,
    ModelParams,
    NoiseRegime,
    PolicyRegion,
    Verdict,
    compare_welfare,
    critical_sigma,
    ex_post_welfare,
    lower_threshold_sensitivity,
    max_policy,
    sigma_regime,
    solve_signaling,
    sweep,
    welfare_derivative_in_rprime,
)

TIGHT = 1e-12
FD_TOL = 1e-6

WIDE = ModelParams(sigma=3.0, r_lower=0.2)  # noisy: sigma_star = 2.0
HALF = ModelParams(sigma=0.5, r_lower=0.2)  # precise
CRIT = ModelParams(sigma=2.0, r_lower=0.2)  # exactly at the critical level


class TestCriticalSigma:
    def test_values(self):
        assert critical_sigma(ModelParams(1.0, 0.2)) == pytest.approx(2.0, abs=TIGHT)
        assert critical_sigma(ModelParams(1.0, 0.5)) == pytest.approx(0.5, abs=TIGHT)

    def test_vanishes_as_baseline_approaches_one(self):
        assert critical_sigma(ModelParams(1.0, 0.999)) == pytest.approx(
            0.001 / 1.998, abs=1e-12
        )
        assert critical_sigma(ModelParams(1.0, 0.999)) < 6e-4

    def test_regime_classification(self):
        assert sigma_regime(WIDE).regime is NoiseRegime.NOISY
        assert sigma_regime(HALF).regime is NoiseRegime.PRECISE
        assert sigma_regime(CRIT).regime is NoiseRegime.PRECISE
        assert sigma_regime(CRIT).sigma_star == pytest.approx(2.0, abs=TIGHT)


class TestThresholdSensitivity:
    def test_plain_value(self):
        assert lower_threshold_sensitivity(WIDE, 0.8) == pytest.approx(0.6, abs=TIGHT)

    def test_near_baseline_finite_difference(self):
        h = 1e-6
        analytic = lower_threshold_sensitivity(WIDE, 0.2001)
        fd = (
            solve_signaling(WIDE, 0.2001 + h).theta_lower
            - solve_signaling(WIDE, 0.2001 - h).theta_lower
        ) / (2 * h)
        assert analytic == pytest.approx(0.0001, abs=TIGHT)
        assert fd == pytest.approx(analytic, abs=FD_TOL)

    def test_at_family_top(self):
        params = ModelParams(sigma=1.0, r_lower=0.5)
        assert lower_threshold_sensitivity(params, 1.5) == pytest.approx(1.0, abs=TIGHT)

    def test_outside_family_rejected(self):
        with pytest.raises(DomainError):
            lower_threshold_sensitivity(WIDE, 0.2)
        with pytest.raises(DomainError):
            lower_threshold_sensitivity(WIDE, max_policy(WIDE) + 0.01)

    def test_sampled_finite_differences(self):
        rng = np.random.default_rng(2024)
        h = 1e-6
        for _ in range(50):
            r_lower = float(rng.uniform(0.05, 0.95))
            params = ModelParams(sigma=1.0, r_lower=r_lower)
            r_tilde = max_policy(params)
            r_prime = float(rng.uniform(r_lower + 0.01, r_tilde - 0.01))
            fd = (
                solve_signaling(params, r_prime + h).theta_lower
                - solve_signaling(params, r_prime - h).theta_lower
            ) / (2 * h)
            assert abs(fd - lower_threshold_sensitivity(params, r_prime)) <= FD_TOL


class TestWelfareDerivative:
    def test_noisy_defend_region_positive(self):
        eq = solve_signaling(WIDE, 0.8)
        value = welfare_derivative_in_rprime(WIDE, eq, 5.0)
        assert value == pytest.approx((0.25 - 1.0 / 6.0) * 0.6, abs=TIGHT)
        assert value == pytest.approx(0.05, abs=TIGHT)

    def test_intervene_region_negative(self):
        eq = solve_signaling(HALF, 0.8)
        assert welfare_derivative_in_rprime(HALF, eq, 0.5) == pytest.approx(
            -0.6, abs=TIGHT
        )

    def test_no_attack_region_flat(self):
        eq = solve_signaling(WIDE, 0.8)
        assert welfare_derivative_in_rprime(WIDE, eq, 7.0) == 0.0

    def test_kinks_are_refused(self):
        eq = solve_signaling(WIDE, 0.8)
        for kink in (eq.theta_lower, eq.theta_upper, eq.theta_no_attack):
            with pytest.raises(BoundaryError):
                welfare_derivative_in_rprime(WIDE, eq, kink)

    def test_zero_defend_derivative_at_critical_noise(self):
        eq = solve_signaling(CRIT, 0.8)
        theta = 0.5 * (eq.theta_upper + eq.theta_no_attack)
        assert abs(welfare_derivative_in_rprime(CRIT, eq, theta)) <= TIGHT

    @pytest.mark.parametrize("params", [WIDE, HALF, CRIT])
    def test_matches_central_finite_difference(self, params):
        h = 1e-5
        r_tilde = max_policy(params)
        for r_prime in np.linspace(params.r_lower + 0.05, r_tilde - 0.05, 8):
            eq = solve_signaling(params, float(r_prime))
            probes = [eq.theta_lower - 0.3]
            if eq.theta_upper - eq.theta_lower > 2e-3:
                probes.append(0.5 * (eq.theta_lower + eq.theta_upper))
            probes.append(0.5 * (eq.theta_upper + eq.theta_no_attack))
            probes.append(eq.theta_no_attack + 0.3)
            eq_lo = solve_signaling(params, float(r_prime) - h)
            eq_hi = solve_signaling(params, float(r_prime) + h)
            for theta in probes:
                analytic = welfare_derivative_in_rprime(params, eq, theta)
                fd = (
                    ex_post_welfare(params, eq_hi, theta)
                    - ex_post_welfare(params, eq_lo, theta)
                ) / (2 * h)
                assert abs(analytic - fd) <= FD_TOL

    def test_precise_noise_never_helps(self):
        for params in (HALF, CRIT):
            for r_prime in np.linspace(params.r_lower + 0.05, max_policy(params), 10):
                eq = solve_signaling(params, float(r_prime))
                grid = np.linspace(eq.theta_lower - 1.0, eq.theta_no_attack + 1.0, 200)
                for theta in grid:
                    t = float(theta)
                    if min(
                        abs(t - eq.theta_lower),
                        abs(t - eq.theta_upper),
                        abs(t - eq.theta_no_attack),
                    ) < 1e-9:
                        continue
                    assert welfare_derivative_in_rprime(params, eq, t) <= 0.0


class TestCompareWelfare:
    def test_noisy_strong_type_prefers_aggressive(self):
        comparison = compare_welfare(WIDE, 0.8, 0.9, [5.0])
        assert comparison.verdicts[0] is Verdict.HIGHER_UNDER_AGGRESSIVE
        assert comparison.u_high[0] == pytest.approx(4.85375, abs=1e-6)
        assert comparison.u_low[0] == pytest.approx(4.8483333, abs=1e-6)
        assert comparison.u_high[0] - comparison.u_low[0] == pytest.approx(
            0.0054167, abs=1e-6
        )

    def test_precise_weak_type_prefers_mild(self):
        comparison = compare_welfare(HALF, 0.8, 0.9, [0.5])
        assert comparison.verdicts[0] is Verdict.LOWER_UNDER_AGGRESSIVE
        assert comparison.u_high[0] == pytest.approx(0.255, abs=TIGHT)
        assert comparison.u_low[0] == pytest.approx(0.32, abs=TIGHT)

    def test_identical_levels_all_equal(self):
        grid = list(np.linspace(0.0, 7.0, 71))
        comparison = compare_welfare(WIDE, 0.8, 0.8, grid)
        assert all(v is Verdict.EQUAL for v in comparison.verdicts)

    def test_verdicts_consistent_with_values(self):
        grid = list(np.linspace(0.0, 7.0, 141))
        comparison = compare_welfare(WIDE, 0.8, 0.9, grid, tol=1e-9)
        for u_lo, u_hi, verdict in zip(
            comparison.u_low, comparison.u_high, comparison.verdicts
        ):
            if verdict is Verdict.HIGHER_UNDER_AGGRESSIVE:
                assert u_hi - u_lo > 1e-9
            elif verdict is Verdict.LOWER_UNDER_AGGRESSIVE:
                assert u_lo - u_hi > 1e-9
            else:
                assert abs(u_hi - u_lo) <= 1e-9

    def test_precise_noise_global_dominance(self):
        grid = list(np.linspace(0.0, 7.0, 701))
        for params in (HALF, CRIT):
            comparison = compare_welfare(params, 0.8, 0.9, grid)
            assert all(
                hi <= lo + 1e-9 for lo, hi in zip(comparison.u_low, comparison.u_high)
            )

    def test_precise_noise_strict_on_affected_band(self):
        eq_low = solve_signaling(HALF, 0.8)
        eq_high = solve_signaling(HALF, 0.9)
        strict = [
            t
            for t in np.linspace(0.0, 7.0, 701)
            if eq_low.theta_lower + 1e-6 < t < eq_high.theta_no_attack - 1e-6
        ]
        comparison = compare_welfare(HALF, 0.8, 0.9, strict)
        assert all(hi < lo for lo, hi in zip(comparison.u_low, comparison.u_high))

    def test_noisy_crossing_exists(self):
        grid = list(np.linspace(0.0, 7.0, 701))
        comparison = compare_welfare(WIDE, 0.8, 0.9, grid)
        diffs = [hi - lo for lo, hi in zip(comparison.u_low, comparison.u_high)]
        assert max(diffs) > 1e-9
        assert min(diffs) < -1e-9

    def test_ordering_violations_rejected(self):
        with pytest.raises(DomainError):
            compare_welfare(WIDE, 0.9, 0.8, [1.0])
        with pytest.raises(DomainError):
            compare_welfare(WIDE, 0.1, 0.8, [1.0])
        with pytest.raises(DomainError):
            compare_welfare(WIDE, 0.8, 0.9, [])
        with pytest.raises(DomainError):
            compare_welfare(WIDE, 0.8, 0.9, [2.0, 1.0])


class TestSweep:
    def test_wide_noise_welfare_rows(self):
        rows = sweep(WIDE, [0.8], (0.1, 5.0, 50))
        by_theta = {round(row.theta, 9): row for row in rows}
        assert by_theta[0.1].welfare == pytest.approx(0.0, abs=TIGHT)
        assert by_theta[1.0].welfare == pytest.approx(0.82, abs=1e-9)
        assert by_theta[5.0].welfare == pytest.approx(4.8483333, abs=1e-6)

    def test_boundary_row_has_no_attack(self):
        eq = solve_signaling(HALF, 0.8)
        rows = sweep(HALF, [0.8], (eq.theta_no_attack, eq.theta_no_attack, 2))
        assert len(rows) == 2
        for row in rows:
            assert row.attack == 0.0
            assert row.welfare == pytest.approx(1.135, abs=TIGHT)
            assert row.region is PolicyRegion.NO_ATTACK

    def test_empty_family_list(self):
        assert sweep(HALF, [], (0.0, 1.0, 2)) == []

    def test_row_ordering(self):
        rows = sweep(WIDE, [0.5, 0.8], (0.0, 1.0, 3))
        assert [(row.r_prime, row.theta) for row in rows] == [
            (0.5, 0.0),
            (0.5, 0.5),
            (0.5, 1.0),
            (0.8, 0.0),
            (0.8, 0.5),
            (0.8, 1.0),
        ]

    def test_bad_grid_rejected(self):
        with pytest.raises(DomainError):
            sweep(WIDE, [0.8], (0.0, 1.0, 1))
