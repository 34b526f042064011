"""Self-contained cross-checking suite behind the ``verify`` CLI command.

Every closed form in the package has an independent route to the same
number: the continuation thresholds have the dominance iteration, the
signalling indifference has the attack-cutoff ramp, the analytic welfare
derivative has a central finite difference. Each check below runs one such
pair over a parameter grid and reports the worst absolute discrepancy.
Failures are data, not exceptions: callers read the report and pick an
exit code.

``theta_upper_shift`` is a fault-injection hook for testing the harness
itself: it perturbs the indifference threshold before the indifference
check, which must then fail.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np

from .continuation import (
    SolverConfig,
    attack_mass,
    closed_form_thresholds,
    solve_iterated_dominance,
    success_prob_given_signal,
)
from .errors import BoundaryError
from .model import ModelParams, cost
from .signaling import (
    PolicyRegion,
    aggregate_attack_no_intervention,
    classify_region,
    ex_post_welfare,
    max_policy,
    solve_signaling,
)
from .statics import (
    NoiseRegime,
    lower_threshold_sensitivity,
    sigma_regime,
    welfare_derivative_in_rprime,
)

_TIGHT = 1e-12
_SOLVER = 1e-9
_DERIV = 1e-6


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    points: int
    max_error: float
    tolerance: float

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "points": self.points,
            "max_error": self.max_error,
            "tolerance": self.tolerance,
        }


@dataclass(frozen=True)
class VerifyReport:
    results: tuple[CheckResult, ...]

    @property
    def n_checks(self) -> int:
        return len(self.results)

    @property
    def n_failed(self) -> int:
        return sum(1 for res in self.results if not res.passed)

    @property
    def failed_names(self) -> list[str]:
        return [res.name for res in self.results if not res.passed]

    def to_dict(self) -> dict:
        return {
            "n_checks": self.n_checks,
            "n_failed": self.n_failed,
            "checks": [res.to_dict() for res in self.results],
        }


def _policy_grid(n: int = 21) -> np.ndarray:
    return np.linspace(0.0, 1.0, n)


def _family_grid(params: ModelParams, n: int = 25) -> list[float]:
    r_tilde = max_policy(params)
    fractions = [(k + 1) / n for k in range(n - 1)]
    grid = [params.r_lower + f * (r_tilde - params.r_lower) for f in fractions]
    grid.append(r_tilde)
    return grid


def _check_continuation_closed_form(params: ModelParams) -> tuple[int, float]:
    worst = 0.0
    n = 0
    for r in _policy_grid():
        eq = closed_form_thresholds(params, float(r))
        marginal = eq.theta_cutoff + params.sigma * (1.0 - 2.0 * r)
        worst = max(
            worst,
            abs(eq.theta_cutoff - (1.0 - r)),
            abs(eq.x_cutoff - marginal),
        )
        n += 1
    return n, worst


def _check_continuation_fixed_point(params: ModelParams) -> tuple[int, float]:
    worst = 0.0
    n = 0
    for r in _policy_grid():
        eq = closed_form_thresholds(params, float(r))
        mass = attack_mass(params, eq.x_cutoff, eq.theta_cutoff)
        worst = max(worst, abs(mass - eq.theta_cutoff))
        n += 1
    return n, worst


def _check_continuation_indifference(params: ModelParams) -> tuple[int, float]:
    worst = 0.0
    n = 0
    for r in _policy_grid():
        eq = closed_form_thresholds(params, float(r))
        prob = success_prob_given_signal(params, eq.theta_cutoff, eq.x_cutoff)
        worst = max(worst, abs(prob - r))
        n += 1
    return n, worst


def _check_continuation_dominance(params: ModelParams) -> tuple[int, float]:
    worst = 0.0
    n = 0
    config = SolverConfig()
    for r in _policy_grid():
        closed = closed_form_thresholds(params, float(r))
        iterated, _ = solve_iterated_dominance(params, float(r), config)
        worst = max(
            worst,
            abs(iterated.x_cutoff - closed.x_cutoff),
            abs(iterated.theta_cutoff - closed.theta_cutoff),
        )
        n += 1
    return n, worst


def _check_continuation_monotonicity(params: ModelParams) -> tuple[int, float]:
    grid = _policy_grid()
    eqs = [closed_form_thresholds(params, float(r)) for r in grid]
    worst = -np.inf
    for prev, cur in zip(eqs, eqs[1:]):
        # Thresholds must fall strictly as the policy rises.
        worst = max(worst, cur.x_cutoff - prev.x_cutoff, cur.theta_cutoff - prev.theta_cutoff)
    return len(eqs) - 1, worst


def _check_signaling_cost_threshold(params: ModelParams) -> tuple[int, float]:
    worst = 0.0
    n = 0
    for r_prime in _family_grid(params):
        eq = solve_signaling(params, r_prime)
        worst = max(worst, abs(eq.theta_lower - cost(params, r_prime)))
        n += 1
    return n, worst


def _check_signaling_indifference(
    params: ModelParams, theta_upper_shift: float
) -> tuple[int, float]:
    # Routed through the signal-cutoff ramp rather than the piecewise form:
    # the piecewise form hits theta_lower at its own theta_upper by
    # construction and would mask an error in theta_upper itself.
    worst = 0.0
    n = 0
    for r_prime in _family_grid(params):
        eq = solve_signaling(params, r_prime)
        if theta_upper_shift:
            eq = dataclasses.replace(eq, theta_upper=eq.theta_upper + theta_upper_shift)
        mass = attack_mass(params, eq.x_prime, eq.theta_upper)
        worst = max(worst, abs(mass - eq.theta_lower))
        n += 1
    return n, worst


def _check_signaling_attack_consistency(params: ModelParams) -> tuple[int, float]:
    worst = 0.0
    n = 0
    for r_prime in _family_grid(params):
        eq = solve_signaling(params, r_prime)
        lo = eq.theta_upper + 2.0 * params.sigma * (eq.theta_lower - 1.0)
        for theta in np.linspace(lo - 1.0, eq.theta_no_attack + 1.0, 41):
            t = float(theta)
            piecewise = aggregate_attack_no_intervention(params, eq, t)
            ramp = attack_mass(params, eq.x_prime, t)
            worst = max(worst, abs(piecewise - ramp))
            n += 1
    return n, worst


def _check_signaling_alt_form(params: ModelParams) -> tuple[int, float]:
    worst = 0.0
    n = 0
    for r_prime in _family_grid(params):
        eq = solve_signaling(params, r_prime)
        alt = 2.0 * params.sigma + (
            1.0 - 2.0 * params.sigma * params.r_lower / (1.0 - params.r_lower)
        ) * eq.theta_lower
        worst = max(worst, abs(eq.theta_no_attack - alt))
        n += 1
    return n, worst


def _check_signaling_ordering(params: ModelParams) -> tuple[int, float]:
    worst = 0.0
    n = 0
    for r_prime in _family_grid(params):
        eq = solve_signaling(params, r_prime)
        worst = max(
            worst,
            eq.theta_lower - eq.theta_upper,
            eq.theta_upper - eq.theta_no_attack,
            eq.theta_lower - (1.0 - params.r_lower),
        )
        n += 1
    return n, max(worst, 0.0)


def _welfare_branch_values(params: ModelParams, eq, theta: float) -> dict[str, float]:
    inv = 1.0 / (2.0 * params.sigma)
    ratio = params.r_lower / (1.0 - params.r_lower)
    return {
        "abandon": 0.0,
        "intervene": theta - eq.theta_lower,
        "defend": (1.0 + inv) * theta - (inv - ratio) * eq.theta_lower - 1.0,
        "no_attack": theta,
    }


def _check_welfare_continuity(params: ModelParams) -> tuple[int, float]:
    worst = 0.0
    n = 0
    for r_prime in _family_grid(params):
        eq = solve_signaling(params, r_prime)
        at_lower = _welfare_branch_values(params, eq, eq.theta_lower)
        at_upper = _welfare_branch_values(params, eq, eq.theta_upper)
        at_top = _welfare_branch_values(params, eq, eq.theta_no_attack)
        worst = max(
            worst,
            abs(at_lower["abandon"] - at_lower["intervene"]),
            abs(at_upper["intervene"] - at_upper["defend"]),
            abs(at_top["defend"] - at_top["no_attack"]),
        )
        n += 3
    return n, worst


def _check_welfare_branch_consistency(params: ModelParams) -> tuple[int, float]:
    worst = 0.0
    n = 0
    for r_prime in _family_grid(params):
        eq = solve_signaling(params, r_prime)
        if eq.theta_no_attack <= eq.theta_upper:
            continue
        for theta in np.linspace(eq.theta_upper, eq.theta_no_attack, 21)[:-1]:
            t = float(theta)
            direct = ex_post_welfare(params, eq, t)
            via_attack = t - aggregate_attack_no_intervention(params, eq, t)
            worst = max(worst, abs(direct - via_attack))
            n += 1
    return n, worst


def _region_interior_points(eq) -> list[float]:
    points = [eq.theta_lower - 0.5]
    if eq.theta_upper > eq.theta_lower:
        points.append(0.5 * (eq.theta_lower + eq.theta_upper))
    points.append(0.5 * (eq.theta_upper + eq.theta_no_attack))
    points.append(eq.theta_no_attack + 0.5)
    return points


def _check_derivative_signs(params: ModelParams) -> tuple[int, float]:
    regime = sigma_regime(params)
    worst = 0.0
    n = 0
    for r_prime in _family_grid(params):
        eq = solve_signaling(params, r_prime)
        for theta in _region_interior_points(eq):
            try:
                deriv = welfare_derivative_in_rprime(params, eq, theta)
            except BoundaryError:
                continue
            region = classify_region(eq, theta)
            n += 1
            if region is PolicyRegion.INTERVENE:
                worst = max(worst, deriv)  # must be negative
            elif region is PolicyRegion.DEFEND_UNDER_ATTACK:
                if regime.regime is NoiseRegime.NOISY:
                    worst = max(worst, -deriv)  # must be positive
                else:
                    worst = max(worst, deriv)  # nonpositive
            else:
                worst = max(worst, abs(deriv))
    return n, max(worst, 0.0)


def _check_derivative_finite_difference(params: ModelParams) -> tuple[int, float]:
    h = 1e-5
    worst = 0.0
    n = 0
    r_tilde = max_policy(params)
    inner = [
        r for r in _family_grid(params) if params.r_lower + 2 * h < r < r_tilde - 2 * h
    ]
    for r_prime in inner:
        eq = solve_signaling(params, r_prime)
        eq_lo = solve_signaling(params, r_prime - h)
        eq_hi = solve_signaling(params, r_prime + h)
        for theta in _region_interior_points(eq):
            try:
                analytic = welfare_derivative_in_rprime(params, eq, theta)
            except BoundaryError:
                continue
            fd = (
                ex_post_welfare(params, eq_hi, theta)
                - ex_post_welfare(params, eq_lo, theta)
            ) / (2.0 * h)
            worst = max(worst, abs(analytic - fd))
            n += 1
    return n, worst


def _check_threshold_sensitivity(params: ModelParams) -> tuple[int, float]:
    h = 1e-6
    worst = 0.0
    n = 0
    r_tilde = max_policy(params)
    for r_prime in _family_grid(params):
        if not params.r_lower + 2 * h < r_prime < r_tilde - 2 * h:
            continue
        analytic = lower_threshold_sensitivity(params, r_prime)
        fd = (
            solve_signaling(params, r_prime + h).theta_lower
            - solve_signaling(params, r_prime - h).theta_lower
        ) / (2.0 * h)
        worst = max(worst, abs(analytic - fd))
        n += 1
    return n, worst


_CHECKS = [
    ("continuation.closed-form", _check_continuation_closed_form, _TIGHT),
    ("continuation.fixed-point", _check_continuation_fixed_point, _TIGHT),
    ("continuation.indifference", _check_continuation_indifference, _TIGHT),
    ("continuation.dominance-oracle", _check_continuation_dominance, _SOLVER),
    # Strict decrease: the worst signed difference must stay below zero.
    ("continuation.monotonicity", _check_continuation_monotonicity, -1e-15),
    ("signaling.cost-threshold", _check_signaling_cost_threshold, _TIGHT),
    ("signaling.indifference", None, _TIGHT),  # takes the shift hook
    ("signaling.attack-consistency", _check_signaling_attack_consistency, _TIGHT),
    ("signaling.alternative-form", _check_signaling_alt_form, _TIGHT),
    ("signaling.ordering", _check_signaling_ordering, _TIGHT),
    ("welfare.continuity", _check_welfare_continuity, _TIGHT),
    ("welfare.branch-consistency", _check_welfare_branch_consistency, _TIGHT),
    ("statics.derivative-signs", _check_derivative_signs, _TIGHT),
    ("statics.derivative-finite-difference", _check_derivative_finite_difference, _DERIV),
    ("statics.threshold-sensitivity", _check_threshold_sensitivity, _DERIV),
]


def run_verify(
    params_list: list[ModelParams],
    *,
    theta_upper_shift: float = 0.0,
) -> VerifyReport:
    """Run every cross-check over each parameter point and collect a report."""
    results: list[CheckResult] = []
    for name, fn, tolerance in _CHECKS:
        points = 0
        worst = -np.inf
        for params in params_list:
            if name == "signaling.indifference":
                n, err = _check_signaling_indifference(params, theta_upper_shift)
            else:
                n, err = fn(params)
            points += n
            worst = max(worst, err)
        if points == 0:
            continue
        results.append(
            CheckResult(
                name=name,
                passed=bool(worst <= tolerance),
                points=points,
                max_error=float(worst),
                tolerance=tolerance,
            )
        )
    return VerifyReport(results=tuple(results))


DEFAULT_SIGMA_GRID = (0.5, 1.0, 2.0, 3.0)
DEFAULT_RBAR_GRID = (0.2, 0.35, 0.5)


def default_params_grid() -> list[ModelParams]:
    """Product grid covering both noise regimes for every baseline."""
    return [
        ModelParams(sigma=s, r_lower=rb)
        for s in DEFAULT_SIGMA_GRID
        for rb in DEFAULT_RBAR_GRID
    ]
