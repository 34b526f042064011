"""Active-policy signalling equilibria.

When agents understand that the policy choice depends on the fundamental,
raising the policy becomes a signal. For every intervention level r_prime
in (r_lower, max_policy] there is an equilibrium in which the policymaker
intervenes exactly on an intermediate band of fundamentals:

    theta_lower     = (r_prime - r_lower)^2 / 2        (intervention cost)
    theta_upper     = 2*sigma + (1 - 2*sigma/(1 - r_lower)) * theta_lower
    x_prime         = theta_upper + sigma * (2*theta_lower - 1)
    theta_no_attack = theta_upper + 2*sigma * theta_lower

Observing the raised policy, agents conclude the regime is strong enough
and stand down everywhere. Observing the baseline policy, they attack below
the signal cutoff x_prime, producing a piecewise-linear aggregate attack in
theta: full attack at the bottom, a downward ramp of slope -1/(2*sigma),
and no attack from theta_no_attack on. theta_lower is where intervening
starts paying for itself; at theta_upper the policymaker is indifferent
between paying the intervention cost and weathering the residual attack.

max_policy (the top of the family) is the intervention whose cost equals
the whole benefit of surviving, cost(max_policy) = 1 - r_lower.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import DomainError
from .model import ModelParams, cost


class PolicyRegion(Enum):
    """Where a fundamental falls relative to the equilibrium cutoffs."""

    ABANDON = "abandon"
    INTERVENE = "intervene"
    DEFEND_UNDER_ATTACK = "defend-under-attack"
    NO_ATTACK = "no-attack"


@dataclass(frozen=True)
class SignalingEquilibrium:
    """Threshold bundle of the signalling equilibrium indexed by r_prime.

    The four theta cutoffs satisfy theta_lower <= theta_upper <=
    theta_no_attack, with theta_lower = theta_upper exactly at the top of
    the family (r_prime = r_tilde). x_prime is the attack cutoff agents use
    after observing the baseline policy.
    """

    r_prime: float
    theta_lower: float
    theta_upper: float
    x_prime: float
    theta_no_attack: float
    r_tilde: float


def max_policy(params: ModelParams) -> float:
    """Largest sustainable intervention: cost(max_policy) = 1 - r_lower."""
    return params.r_lower + math.sqrt(2.0 * (1.0 - params.r_lower))


def solve_signaling(params: ModelParams, r_prime: float) -> SignalingEquilibrium:
    """Construct the signalling equilibrium for a given intervention level.

    Rejects r_prime at or below the baseline (no signal content) and above
    max_policy (intervening would cost more than survival is worth).
    """
    r_tilde = max_policy(params)
    if not params.r_lower < r_prime <= r_tilde:
        raise DomainError(
            f"r_prime must lie in (r_lower, r_tilde] = "
            f"({params.r_lower:g}, {r_tilde:.9g}]"
        )
    sigma = params.sigma
    theta_lower = cost(params, r_prime)
    theta_upper = 2.0 * sigma + (1.0 - 2.0 * sigma / (1.0 - params.r_lower)) * theta_lower
    x_prime = theta_upper + sigma * (2.0 * theta_lower - 1.0)
    theta_no_attack = theta_upper + 2.0 * sigma * theta_lower
    return SignalingEquilibrium(
        r_prime=r_prime,
        theta_lower=theta_lower,
        theta_upper=theta_upper,
        x_prime=x_prime,
        theta_no_attack=theta_no_attack,
        r_tilde=r_tilde,
    )


def policy_strategy(eq: SignalingEquilibrium, params: ModelParams, theta: float) -> float:
    """Equilibrium policy choice: intervene on the closed band, baseline elsewhere."""
    if eq.theta_lower <= theta <= eq.theta_upper:
        return eq.r_prime
    return params.r_lower


def aggregate_attack_no_intervention(
    params: ModelParams, eq: SignalingEquilibrium, theta: float
) -> float:
    """Aggregate attack following the baseline policy, as a function of theta.

    Piecewise in theta: 1 below theta_upper + 2*sigma*(theta_lower - 1),
    then the ramp theta_lower + (theta_upper - theta)/(2*sigma), then 0 from
    theta_no_attack on. Identical to the clamped ramp with signal cutoff
    x_prime; at theta_upper it equals theta_lower exactly (the indifference
    that defines theta_upper).
    """
    sigma = params.sigma
    full_attack_below = eq.theta_upper + 2.0 * sigma * (eq.theta_lower - 1.0)
    if theta < full_attack_below:
        return 1.0
    if theta >= eq.theta_no_attack:
        return 0.0
    raw = eq.theta_lower + (eq.theta_upper - theta) / (2.0 * sigma)
    return min(1.0, max(0.0, raw))


def ex_post_welfare(params: ModelParams, eq: SignalingEquilibrium, theta: float) -> float:
    """Policymaker's realized payoff at theta, inside this equilibrium.

    Four branches: 0 where the regime is abandoned; theta - theta_lower on
    the intervention band; theta minus the residual attack while defending
    without intervening; plain theta once no attack occurs. Continuous at
    all three cutoffs.
    """
    if theta < eq.theta_lower:
        return 0.0
    if theta < eq.theta_upper:
        return theta - eq.theta_lower
    if theta < eq.theta_no_attack:
        inv = 1.0 / (2.0 * params.sigma)
        ratio = params.r_lower / (1.0 - params.r_lower)
        return (1.0 + inv) * theta - (inv - ratio) * eq.theta_lower - 1.0
    return theta


def classify_region(eq: SignalingEquilibrium, theta: float) -> PolicyRegion:
    """Assign theta to its equilibrium region; the intervene band is closed."""
    if theta < eq.theta_lower:
        return PolicyRegion.ABANDON
    if theta <= eq.theta_upper:
        return PolicyRegion.INTERVENE
    if theta < eq.theta_no_attack:
        return PolicyRegion.DEFEND_UNDER_ATTACK
    return PolicyRegion.NO_ATTACK
