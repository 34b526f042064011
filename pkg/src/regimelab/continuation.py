"""Fixed-policy continuation game: cutoff equilibrium, two ways.

When the policy r is exogenous and carries no information, the game played
by the agents has a unique equilibrium in cutoff strategies: attack iff the
private signal is at or below x_cutoff, regime falls iff the fundamental is
at or below theta_cutoff. The closed form is

    theta_cutoff(r) = 1 - r
    x_cutoff(r)     = (1 + 2*sigma) * (1 - r) - sigma

and the same pair is recovered here by iterated elimination of
conditionally dominated strategies: one cutoff sequence starts from
"everyone attacks", one from "nobody attacks", and both contract onto the
equilibrium cutoff at rate 1/(1 + 2*sigma). Keeping both routes alive lets
the test suite cross-verify each against the other.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ConvergenceError, DomainError
from .model import ModelParams


@dataclass(frozen=True)
class ContinuationEquilibrium:
    """Threshold pair of the fixed-policy game at policy level r."""

    r: float
    x_cutoff: float
    theta_cutoff: float


@dataclass(frozen=True)
class SolverConfig:
    """Stopping rule for the iterated-dominance solver."""

    tol: float = 1e-9
    max_iter: int = 10_000

    def __post_init__(self) -> None:
        if not self.tol > 0:
            raise DomainError("tol must be positive")
        if self.max_iter < 1:
            raise DomainError("max_iter must be at least 1")


@dataclass(frozen=True)
class DominanceTrace:
    """Cutoff sequences produced by iterated elimination.

    upper_seq starts from a cutoff so high that everyone attacks and is
    non-increasing; lower_seq starts from one so low that nobody attacks and
    is non-decreasing. contraction_modulus = 1/(1 + 2*sigma) bounds the
    per-step shrinkage of the bracket, which is why convergence is
    guaranteed for any positive tolerance.
    """

    upper_seq: tuple[float, ...]
    lower_seq: tuple[float, ...]
    converged: bool
    contraction_modulus: float


def _require_unit_policy(r: float) -> None:
    if not 0.0 <= r <= 1.0:
        raise DomainError("r must lie in [0,1]")


def closed_form_thresholds(params: ModelParams, r: float) -> ContinuationEquilibrium:
    """Equilibrium thresholds of the fixed-policy game, in closed form."""
    _require_unit_policy(r)
    theta_cutoff = 1.0 - r
    x_cutoff = (1.0 + 2.0 * params.sigma) * (1.0 - r) - params.sigma
    return ContinuationEquilibrium(r=r, x_cutoff=x_cutoff, theta_cutoff=theta_cutoff)


def attack_mass(params: ModelParams, x_cutoff: float, theta: float) -> float:
    """Mass of agents whose signal lands at or below the cutoff, given theta.

    Signals are theta + eps with eps uniform on [-sigma, sigma], so the mass
    is the clamped linear ramp (x_cutoff - theta + sigma) / (2*sigma).
    """
    raw = (x_cutoff - theta + params.sigma) / (2.0 * params.sigma)
    return min(1.0, max(0.0, raw))


def success_prob_given_signal(params: ModelParams, theta_cutoff: float, x: float) -> float:
    """Probability the regime falls, from the viewpoint of one signal x.

    The posterior over theta given x is uniform on [x - sigma, x + sigma],
    so this is the posterior mass at or below theta_cutoff.
    """
    raw = (theta_cutoff - x + params.sigma) / (2.0 * params.sigma)
    return min(1.0, max(0.0, raw))


def regime_fall_threshold(params: ModelParams, x_cutoff: float) -> float:
    """The unique theta at which the attack mass just matches the regime strength.

    Solves attack_mass(x_cutoff, theta) = theta; the interior solution
    (x_cutoff + sigma) / (1 + 2*sigma) is clamped to [0,1] to cover the
    corners where the attack is everywhere too small or everywhere
    overwhelming.
    """
    raw = (x_cutoff + params.sigma) / (1.0 + 2.0 * params.sigma)
    return min(1.0, max(0.0, raw))


def best_response_cutoff(params: ModelParams, r: float, x_hat: float) -> float:
    """Signal at which attacking breaks even when everyone else uses cutoff x_hat.

    The marginal agent equates the success probability with the attack cost
    r, which puts her signal sigma*(1 - 2r) above the fall threshold induced
    by x_hat.
    """
    _require_unit_policy(r)
    return regime_fall_threshold(params, x_hat) + params.sigma * (1.0 - 2.0 * r)


def solve_iterated_dominance(
    params: ModelParams,
    r: float,
    config: SolverConfig = SolverConfig(),
) -> tuple[ContinuationEquilibrium, DominanceTrace]:
    """Recover the continuation equilibrium by iterated conditional dominance.

    Starting cutoffs sit strictly outside the dominance regions (high enough
    that the attack mass is 1 on the relevant range, and symmetrically low),
    so the first elimination round already bites. Iteration stops once the
    upper and lower cutoffs agree within config.tol.

    Raises ConvergenceError if max_iter is exhausted first; the partial
    trace is attached to the exception as ``trace``.
    """
    _require_unit_policy(r)
    upper = 1.0 + params.sigma + 1.0
    lower = -params.sigma - 1.0
    upper_seq = [upper]
    lower_seq = [lower]
    converged = False
    for _ in range(config.max_iter):
        upper = best_response_cutoff(params, r, upper)
        lower = best_response_cutoff(params, r, lower)
        upper_seq.append(upper)
        lower_seq.append(lower)
        if upper - lower <= config.tol:
            converged = True
            break
    trace = DominanceTrace(
        upper_seq=tuple(upper_seq),
        lower_seq=tuple(lower_seq),
        converged=converged,
        contraction_modulus=1.0 / (1.0 + 2.0 * params.sigma),
    )
    if not converged:
        err = ConvergenceError(
            f"cutoff bracket still {upper - lower:.3e} wide after "
            f"{config.max_iter} iterations (tol={config.tol:.1e})"
        )
        err.trace = trace
        raise err
    x_cutoff = 0.5 * (upper + lower)
    eq = ContinuationEquilibrium(
        r=r,
        x_cutoff=x_cutoff,
        theta_cutoff=regime_fall_threshold(params, x_cutoff),
    )
    return eq, trace
