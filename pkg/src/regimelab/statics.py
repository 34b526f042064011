"""Comparative statics of welfare across the signalling-equilibrium family.

The question answered here: does a more aggressive intervention level help
or hurt the policymaker, fundamental by fundamental? The answer flips at
the critical noise level

    sigma_star = (1 - r_lower) / (2 * r_lower).

Below it (precise signals), raising r_prime weakly lowers welfare at every
theta. Above it (noisy signals), raising r_prime still hurts on the
intervention band but strictly helps on the defend-under-attack band,
because a larger intervention makes non-intervention a more reassuring
signal and shrinks the residual attack.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import BoundaryError, DomainError
from .model import ModelParams
from .signaling import (
    PolicyRegion,
    SignalingEquilibrium,
    aggregate_attack_no_intervention,
    classify_region,
    ex_post_welfare,
    max_policy,
    solve_signaling,
)


class NoiseRegime(Enum):
    """Which side of the critical noise level sigma sits on."""

    PRECISE = "precise"
    NOISY = "noisy"


@dataclass(frozen=True)
class SigmaRegime:
    """Noise classification together with the critical level it is judged by."""

    regime: NoiseRegime
    sigma_star: float


class Verdict(Enum):
    """Pointwise welfare comparison between two intervention levels."""

    HIGHER_UNDER_AGGRESSIVE = "higher-under-aggressive"
    LOWER_UNDER_AGGRESSIVE = "lower-under-aggressive"
    EQUAL = "equal"


@dataclass(frozen=True)
class WelfareComparison:
    """Tabulated welfare under two intervention levels over a theta grid."""

    r_low: float
    r_high: float
    tol: float
    theta_grid: tuple[float, ...]
    u_low: tuple[float, ...]
    u_high: tuple[float, ...]
    region_low: tuple[PolicyRegion, ...]
    region_high: tuple[PolicyRegion, ...]
    verdicts: tuple[Verdict, ...]


@dataclass(frozen=True)
class SweepRow:
    """One (r_prime, theta) point of a welfare sweep."""

    r_prime: float
    theta: float
    region: PolicyRegion
    attack: float
    welfare: float


def critical_sigma(params: ModelParams) -> float:
    """Noise level separating uniformly-harmful from double-edged intervention."""
    return (1.0 - params.r_lower) / (2.0 * params.r_lower)


def sigma_regime(params: ModelParams) -> SigmaRegime:
    """Classify the environment's noise level against the critical one."""
    star = critical_sigma(params)
    regime = NoiseRegime.NOISY if params.sigma > star else NoiseRegime.PRECISE
    return SigmaRegime(regime=regime, sigma_star=star)


def lower_threshold_sensitivity(params: ModelParams, r_prime: float) -> float:
    """Derivative of the intervention threshold theta_lower in r_prime.

    Equals r_prime - r_lower, strictly positive on the whole family: a more
    aggressive intervention is justified only by stronger fundamentals.
    """
    if not params.r_lower < r_prime <= max_policy(params):
        raise DomainError(
            f"r_prime must lie in (r_lower, r_tilde] = "
            f"({params.r_lower:g}, {max_policy(params):.9g}]"
        )
    return r_prime - params.r_lower


def welfare_derivative_in_rprime(
    params: ModelParams, eq: SignalingEquilibrium, theta: float
) -> float:
    """Analytic derivative of ex-post welfare in r_prime, region by region.

    Zero on the abandon and no-attack regions, -(r_prime - r_lower) on the
    intervention band, and -(1/(2*sigma) - r_lower/(1-r_lower)) *
    (r_prime - r_lower) on the defend band, whose sign flips at
    sigma = critical_sigma. Refuses the three kinks outright: welfare is
    piecewise linear and has no derivative there.
    """
    if theta in (eq.theta_lower, eq.theta_upper, eq.theta_no_attack):
        raise BoundaryError(
            f"welfare has a kink at theta={theta:.9g}; derivative undefined"
        )
    slope = eq.r_prime - params.r_lower
    region = classify_region(eq, theta)
    if region is PolicyRegion.INTERVENE:
        return -slope
    if region is PolicyRegion.DEFEND_UNDER_ATTACK:
        inv = 1.0 / (2.0 * params.sigma)
        ratio = params.r_lower / (1.0 - params.r_lower)
        return -(inv - ratio) * slope
    return 0.0


def compare_welfare(
    params: ModelParams,
    r_low: float,
    r_high: float,
    theta_grid: list[float],
    tol: float = 1e-9,
) -> WelfareComparison:
    """Tabulate welfare under r_low and r_high and issue a per-theta verdict.

    r_low == r_high is allowed (every verdict is then EQUAL); reversed
    ordering is not. The grid must be non-empty and sorted ascending.
    """
    r_tilde = max_policy(params)
    if not params.r_lower < r_low <= r_high <= r_tilde:
        raise DomainError(
            "intervention levels must satisfy "
            f"r_lower < r_low <= r_high <= r_tilde = {r_tilde:.9g}"
        )
    thetas = [float(t) for t in theta_grid]
    if not thetas:
        raise DomainError("theta_grid must be non-empty")
    if any(b < a for a, b in zip(thetas, thetas[1:])):
        raise DomainError("theta_grid must be sorted ascending")
    if not tol >= 0:
        raise DomainError("tol must be nonnegative")

    eq_low = solve_signaling(params, r_low)
    eq_high = solve_signaling(params, r_high)
    u_low = []
    u_high = []
    region_low = []
    region_high = []
    verdicts = []
    for theta in thetas:
        lo = ex_post_welfare(params, eq_low, theta)
        hi = ex_post_welfare(params, eq_high, theta)
        u_low.append(lo)
        u_high.append(hi)
        region_low.append(classify_region(eq_low, theta))
        region_high.append(classify_region(eq_high, theta))
        if hi - lo > tol:
            verdicts.append(Verdict.HIGHER_UNDER_AGGRESSIVE)
        elif lo - hi > tol:
            verdicts.append(Verdict.LOWER_UNDER_AGGRESSIVE)
        else:
            verdicts.append(Verdict.EQUAL)
    return WelfareComparison(
        r_low=r_low,
        r_high=r_high,
        tol=tol,
        theta_grid=tuple(thetas),
        u_low=tuple(u_low),
        u_high=tuple(u_high),
        region_low=tuple(region_low),
        region_high=tuple(region_high),
        verdicts=tuple(verdicts),
    )


def sweep(
    params: ModelParams,
    r_prime_list: list[float],
    theta_range: tuple[float, float, int],
) -> list[SweepRow]:
    """Tabulate region, attack, and welfare over a (r_prime, theta) grid.

    theta_range is (lo, hi, n) with n >= 2 evenly spaced points, endpoints
    included. Rows are ordered r_prime outer, theta inner. An empty family
    list yields an empty table.
    """
    if not r_prime_list:
        return []
    lo, hi, n = theta_range
    if n < 2:
        raise DomainError("theta_range needs at least 2 points")
    if hi < lo:
        raise DomainError("theta_range must have lo <= hi")
    thetas = np.linspace(lo, hi, int(n))
    rows: list[SweepRow] = []
    for r_prime in r_prime_list:
        eq = solve_signaling(params, r_prime)
        for theta in thetas:
            t = float(theta)
            rows.append(
                SweepRow(
                    r_prime=r_prime,
                    theta=t,
                    region=classify_region(eq, t),
                    attack=aggregate_attack_no_intervention(params, eq, t),
                    welfare=ex_post_welfare(params, eq, t),
                )
            )
    return rows
